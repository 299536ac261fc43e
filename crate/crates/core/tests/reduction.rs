use proptest::prelude::*;

use scattered::graph::{ihom_decide, FiniteGraph};
use scattered::reduction::{
    pair0, pair1, pair2, recover_graph, reduce_on_space, reduction_check, unpair0, unpair1, unpair2, FnOracle,
};
use scattered::space::Space;

fn some_graph(support: u32, mask: u64) -> FiniteGraph {
    FiniteGraph::from_mask(support, mask)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn pairings_invert(m in 0u64..1 << 20, n in 0u64..1 << 20, i in 0u64..2) {
        prop_assert_eq!(unpair0(pair0(m, n).unwrap()), (m, n));
        if m != n {
            prop_assert_eq!(unpair1(pair1(m, n).unwrap()), (m.min(n), m.max(n)));
        }
        prop_assert_eq!(unpair2(pair2(i, m, n).unwrap()), (i, m, n));
    }

    #[test]
    fn pairings_are_onto(z in 0u64..1 << 40) {
        let (m, n) = unpair0(z);
        prop_assert_eq!(pair0(m, n), Some(z));
        let (a, b) = unpair1(z);
        prop_assert_eq!(pair1(a, b), Some(z));
        let (i, m, p) = unpair2(z);
        prop_assert_eq!(pair2(i, m, p), Some(z));
    }

    #[test]
    fn graphs_are_read_back(support in 0u32..9, mask in any::<u64>()) {
        let g = some_graph(support, mask);
        let f = FnOracle::on_omega_squared(g.clone());
        prop_assert_eq!(recover_graph(&f, support).unwrap(), g);
    }
}

/// Terms with infinitely many limit points, beyond `w^2+1` itself.
fn hosts() -> Vec<Space> {
    vec![
        Space::tower(2),
        Space::lim(Space::Sum(vec![Space::Pt, Space::tower(1)])),
        Space::Sum(vec![Space::Omega, Space::tower(2)]),
        Space::Sum(vec![Space::PairsPlus, Space::tower(2)]),
        Space::lim(Space::Sum(vec![Space::tower(1), Space::tower(1)])),
    ]
}

#[test]
fn recovery_survives_pseudo_embeddings() {
    for t in hosts() {
        for mask in [0u64, 0b1, 0b1011, 0b11_1111] {
            let g = some_graph(4, mask);
            let f = reduce_on_space(&g, &t).unwrap();
            assert_eq!(recover_graph(&f, 4).unwrap(), g, "on {t}");
        }
    }
}

#[test]
fn reduction_agrees_with_graph_order_on_several_hosts() {
    let graphs: Vec<FiniteGraph> = [0u64, 0b1, 0b111, 0b10_1101].iter().map(|&m| some_graph(4, m)).collect();
    for t in hosts() {
        for g in &graphs {
            for h in &graphs {
                let r = reduction_check(g, h, &t, 4).unwrap();
                assert_eq!(r.ihom, ihom_decide(g, h).is_some());
                assert!(r.holds, "{t}: {:?}", r.failures);
            }
        }
    }
}
