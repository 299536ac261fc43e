mod common;

use proptest::prelude::*;

use scattered::rank::{high_rank_witness, rank_delta2, separator, SetBody, SetRep};
use scattered::space::{cb_derivative, cb_rank, Space};

use common::*;

/// The set of points of `tower(bits.len() - 1)` whose level `j` has `bits[j]`.
fn level_union(bits: &[bool]) -> SetBody {
    match bits.split_last() {
        Some((&top, [])) => SetBody::Pt(top),
        Some((&top, below)) => SetBody::Lim { inf: top, exc: Default::default(), tail: vec![level_union(below)] },
        None => unreachable!(),
    }
}

/// Closures of level unions are upward closed in level, so each change of
/// membership read from the isolated points upward costs one closed set.
fn level_union_rank(bits: &[bool]) -> u32 {
    let mut prev = false;
    let mut changes = 0;
    for &b in bits {
        changes += u32::from(b != prev);
        prev = b;
    }
    changes
}

fn nesting(t: &Space) -> u32 {
    match t {
        Space::Lim(u) => nesting(u) + 1,
        Space::Sum(ts) => ts.iter().map(nesting).max().unwrap_or(0),
        _ => 1,
    }
}

fn random_set(seed: u64) -> SetRep {
    let mut r = rng(seed);
    let t = compact_term(&mut r, 3);
    let b = set_body(&mut r, &t);
    SetRep::new(t, b).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn level_unions_match_change_count(bits in prop::collection::vec(any::<bool>(), 1..7)) {
        let s = SetRep::new(Space::tower(bits.len() as u32 - 1), level_union(&bits)).unwrap();
        prop_assert_eq!(rank_delta2(&s), level_union_rank(&bits));
    }

    #[test]
    fn closure_is_a_closure_operator(seed in any::<u64>()) {
        let s = random_set(seed);
        let c = s.closure();
        prop_assert!(s.is_subset(&c).unwrap());
        prop_assert!(c.is_closed());
        prop_assert_eq!(c.closure(), c.clone());
        if !c.is_empty() {
            prop_assert_eq!(rank_delta2(&c), 1);
        }
    }

    #[test]
    fn rank_is_complement_invariant_up_to_one(seed in any::<u64>()) {
        let s = random_set(seed);
        let (a, b) = (rank_delta2(&s), rank_delta2(&s.complement()));
        prop_assert!(a.abs_diff(b) <= 1, "{} has {} and {}", s, a, b);
    }

    #[test]
    fn separators_separate_within_rank(seed in any::<u64>(), other in any::<u64>()) {
        let a = random_set(seed);
        let mut r = rng(other);
        let b = SetRep::new(a.space.clone(), set_body(&mut r, &a.space)).unwrap().minus(&a).unwrap();
        let (s, k) = separator(&a, &b).unwrap();
        prop_assert!(a.is_subset(&s).unwrap());
        prop_assert!(s.intersect(&b).unwrap().is_empty());
        prop_assert_eq!(rank_delta2(&s), k);
        prop_assert!(k <= rank_delta2(&a));
        let (s2, k2) = separator(&b, &a).unwrap();
        prop_assert!(b.is_subset(&s2).unwrap() && k2.abs_diff(k) <= 1);
    }

    #[test]
    fn cb_rank_is_first_empty_derivative(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = compact_term(&mut r, 4);
        let k = cb_rank(&t);
        prop_assert_eq!(k, nesting(&t));
        prop_assert_eq!(cb_derivative(&t, k), Space::Empty);
        prop_assert_ne!(cb_derivative(&t, k - 1), Space::Empty);
    }
}

#[test]
fn parity_witnesses_have_rank_one_above_height() {
    for k in 1..=6 {
        let h = high_rank_witness(k).unwrap();
        let bits: Vec<bool> = (0..=k).map(|j| j % 2 == 0).collect();
        assert_eq!(h.body, level_union(&bits));
        assert_eq!(rank_delta2(&h), k + 1);
    }
    assert!(high_rank_witness(7).is_err());
}
