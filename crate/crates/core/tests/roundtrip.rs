mod common;

use proptest::prelude::*;
use rand::Rng;

use scattered::func::FnRep;
use scattered::graph::FiniteGraph;
use scattered::rank::{SetFn, SetRep};
use scattered::space::{truncate, Addr, Space};
use scattered::text::{parse_fn, parse_partition, parse_set, parse_space};

use common::*;

fn any_term(seed: u64) -> Space {
    let mut r = rng(seed);
    match r.gen_range(0..3) {
        0 => compact_term(&mut r, 3),
        1 => class_d_domain(&mut r, false),
        _ => Space::Sum(vec![compact_term(&mut r, 2), Space::PairsPlus, Space::Omega]),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn space_terms_round_trip(seed in any::<u64>()) {
        let t = any_term(seed);
        prop_assert_eq!(parse_space(&t.to_string()).unwrap(), t);
    }

    #[test]
    fn addresses_round_trip(seed in any::<u64>()) {
        let t = any_term(seed);
        for p in truncate(&t, 3).points {
            let q: Addr = p.to_string().parse().unwrap();
            prop_assert_eq!(q, p);
        }
    }

    #[test]
    fn functions_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let f = supported_fn(&mut r);
        prop_assert_eq!(parse_fn(&f.to_string()).unwrap(), f.clone());
        let g: FnRep = f.to_string().parse().unwrap();
        prop_assert_eq!(g.to_string(), f.to_string());
    }

    #[test]
    fn sets_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = compact_term(&mut r, 3);
        let f = fn_over(&mut r, t, scattered::value::Codomain::Fin(2), 0.5, true);
        let s = SetFn::from_fn(&f).unwrap();
        for (_, piece) in &s.pieces {
            prop_assert_eq!(&parse_set(&piece.to_string()).unwrap(), piece);
        }
        prop_assert_eq!(parse_partition(&s.to_string()).unwrap().to_string(), s.to_string());
    }

    #[test]
    fn graphs_round_trip(support in 0u32..8, mask in any::<u64>()) {
        let g = FiniteGraph::from_mask(support, mask);
        let json = serde_json::to_string(&g).unwrap();
        prop_assert_eq!(serde_json::from_str::<FiniteGraph>(&json).unwrap(), g);
    }
}

#[test]
fn parse_errors_carry_positions() {
    let e = parse_space("sum(pt,\n  lim(qq))").unwrap_err();
    match e {
        scattered::Error::Parse { line, column, .. } => assert_eq!((line, column), (2, 7)),
        other => panic!("unexpected {other}"),
    }
    assert!(parse_fn("fn over pt -> nat [1]").is_err());
    assert!("set over lim(pt) { inf: maybe }".parse::<SetRep>().is_err());
}
