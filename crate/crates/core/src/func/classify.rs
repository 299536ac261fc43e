//! Continuity, and the two minimal discontinuous functions.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::image::{nth_free, wrap, Seg};
use super::{Body, ClusterRule, FnEmbWitness, FnRep, Tail, TauMap, ValueMap};
use crate::error::Result;
use crate::space::{top_point, Addr, Space, SpaceEmbWitness, WitnessKind};
use crate::value::{Approach, ClusterKey, Codomain, Value};

/// The characteristic function of the limit point of `lim(pt)`.
pub fn d0() -> FnRep {
    FnRep::new(
        Space::tower(1),
        Codomain::Fin(2),
        Body::Lim { inf: Value::Nat(1), exc: BTreeMap::new(), tail: Tail::Const(Value::Nat(0)) },
    )
    .expect("well formed")
}

/// `inf -> 0`, `copy n -> n + 1` on `lim(pt)`, into the discrete naturals.
pub fn d1() -> FnRep {
    FnRep::new(
        Space::tower(1),
        Codomain::Nat,
        Body::Lim { inf: Value::Nat(0), exc: BTreeMap::new(), tail: Tail::Approach(Approach::Up { base: 1 }) },
    )
    .expect("well formed")
}

/// The first limit point where a function fails to be continuous.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Discontinuity {
    pub at: Addr,
    pub value: Value,
    pub tail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Continuity {
    Continuous,
    Discontinuous(Discontinuity),
}

struct Found<'a> {
    path: Vec<Seg>,
    u: &'a Space,
    inf: &'a Value,
    exc: &'a BTreeMap<u64, Body>,
    tail: &'a Tail,
}

fn tail_converges(cod: Codomain, inf: &Value, tail: &Tail) -> bool {
    match tail {
        Tail::Const(c) => c == inf,
        Tail::Approach(a) => a.limit(cod).as_ref() == Some(inf),
    }
}

fn first_break<'a>(t: &'a Space, cod: Codomain, b: &'a Body, path: &mut Vec<Seg>) -> Option<Found<'a>> {
    match (t, b) {
        (Space::Sum(ts), Body::Sum(bs)) => ts.iter().zip(bs).enumerate().find_map(|(i, (t, b))| {
            path.push(Seg::Branch(i));
            let r = first_break(t, cod, b, path);
            path.pop();
            r
        }),
        (Space::Lim(u), Body::Lim { inf, exc, tail }) => {
            if !tail_converges(cod, inf, tail) {
                return Some(Found { path: path.clone(), u, inf, exc, tail });
            }
            exc.iter().find_map(|(n, sub)| {
                path.push(Seg::Copy(*n));
                let r = first_break(u, cod, sub, path);
                path.pop();
                r
            })
        }
        _ => None,
    }
}

/// Every tail of a continuous function converges to the value at its limit
/// point; the first node where this fails is reported.
pub fn continuity_check(f: &FnRep) -> Continuity {
    match first_break(&f.domain, f.codomain, &f.body, &mut Vec::new()) {
        None => Continuity::Continuous,
        Some(x) => Continuity::Discontinuous(Discontinuity {
            at: wrap(&x.path, Addr::Inf),
            value: x.inf.clone(),
            tail: x.tail.to_string(),
        }),
    }
}

#[derive(Debug, Clone)]
pub enum Trichotomy {
    Continuous,
    /// `d0 <= f`, with the witness.
    D0(FnEmbWitness),
    /// `d1 <= f`, with the witness.
    D1(FnEmbWitness),
}

/// For a discontinuous `f`, embeds `d0` when the values along the bad
/// sequence are eventually constant and `d1` otherwise.
pub fn classify_discontinuous(f: &FnRep) -> Result<Trichotomy> {
    let Some(x) = first_break(&f.domain, f.codomain, &f.body, &mut Vec::new()) else {
        return Ok(Trichotomy::Continuous);
    };
    let top = top_point(x.u).expect("lim arguments are nonempty");
    let skip: BTreeSet<u64> = x.exc.keys().copied().collect();
    let path = x.path.clone();
    let inf_addr = wrap(&path, Addr::Inf);
    match x.tail {
        Tail::Const(c) => {
            let sigma = SpaceEmbWitness::new(
                WitnessKind::Pattern,
                vec![format!("inf -> {inf_addr}"), format!("copy n -> the n-th tail copy under {inf_addr}")],
                move |a| match a {
                    Addr::Inf => Some(wrap(&path, Addr::Inf)),
                    Addr::Copy(n, s) if **s == Addr::Here => {
                        Some(wrap(&path, Addr::copy(nth_free(&skip, *n), top.clone())))
                    }
                    _ => None,
                },
            );
            let mut tau = ValueMap::new(Codomain::Fin(2), f.codomain);
            tau.table.insert(Value::Nat(1), x.inf.clone());
            tau.table.insert(Value::Nat(0), c.clone());
            Ok(Trichotomy::D0(FnEmbWitness { sigma, tau: TauMap::Map(tau) }))
        }
        Tail::Approach(a) => {
            // tail copies whose value differs from the value at the limit
            let mut skip = skip;
            if let Some(e) = a.cluster().exponent_of(f.codomain, x.inf) {
                if let Some(n) = e.checked_sub(a.base()) {
                    skip.insert(n);
                }
            }
            let reach = skip.iter().next_back().map_or(0, |m| m + 1);
            let pick = {
                let skip = skip.clone();
                move |k: u64| nth_free(&skip, k)
            };
            let sigma = SpaceEmbWitness::new(
                WitnessKind::Pattern,
                vec![format!("inf -> {inf_addr}"), format!("copy n -> the n-th usable tail copy under {inf_addr}")],
                move |addr| match addr {
                    Addr::Inf => Some(wrap(&path, Addr::Inf)),
                    Addr::Copy(n, s) if **s == Addr::Here => Some(wrap(&path, Addr::copy(pick(*n), top.clone()))),
                    _ => None,
                },
            );
            let mut tau = ValueMap::new(Codomain::Nat, f.codomain);
            tau.table.insert(Value::Nat(0), x.inf.clone());
            // copy k of d1 has value k + 1 and goes to tail copy nth_free(k)
            let free_before = reach - skip.len() as u64;
            for k in 0..free_before {
                tau.table.insert(Value::Nat(k + 1), a.value(f.codomain, nth_free(&skip, k)));
            }
            tau.rules.push(ClusterRule {
                from: ClusterKey::Up,
                from_exp: free_before + 1,
                to: a.cluster(),
                offset: a.exponent(reach),
                stride: 1,
            });
            Ok(Trichotomy::D1(FnEmbWitness { sigma, tau: TauMap::Map(tau) }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::verify_fn_witness;
    use super::*;

    #[test]
    fn d0_d1_are_discontinuous() {
        assert!(matches!(continuity_check(&d0()), Continuity::Discontinuous(_)));
        match continuity_check(&d1()) {
            Continuity::Discontinuous(d) => assert_eq!(d.at, Addr::Inf),
            _ => panic!(),
        }
        let id = FnRep::new(
            Space::tower(1),
            Codomain::OmegaPlusOne,
            Body::Lim { inf: Value::Omega, exc: BTreeMap::new(), tail: Tail::Approach(Approach::Up { base: 0 }) },
        )
        .unwrap();
        assert_eq!(continuity_check(&id), Continuity::Continuous);
    }

    #[test]
    fn classify_self() {
        for (f, zero) in [(d0(), true), (d1(), false)] {
            let w = match classify_discontinuous(&f).unwrap() {
                Trichotomy::D0(w) => {
                    assert!(zero);
                    w
                }
                Trichotomy::D1(w) => {
                    assert!(!zero);
                    w
                }
                Trichotomy::Continuous => panic!(),
            };
            let src = if zero { d0() } else { d1() };
            let rep = verify_fn_witness(&w, &src, &f, 8);
            assert!(rep.passed, "{:?}", rep.failures);
        }
    }

    #[test]
    fn nested_break_with_exceptions() {
        // inner lim at copy 2 jumps; its tail copies 0 and 3 are exceptions
        let inner = Body::Lim {
            inf: Value::Nat(4),
            exc: [(0, Body::Pt(Value::Nat(4))), (3, Body::Pt(Value::Nat(9)))].into(),
            tail: Tail::Approach(Approach::Up { base: 2 }),
        };
        let f = FnRep::new(
            Space::tower(2),
            Codomain::OmegaPlusOne,
            Body::Lim { inf: Value::Omega, exc: [(2, inner)].into(), tail: Tail::Const(Value::Omega) },
        )
        .unwrap();
        match continuity_check(&f) {
            Continuity::Discontinuous(d) => assert_eq!(d.at.to_string(), "copy2/inf"),
            _ => panic!(),
        }
        let Trichotomy::D1(w) = classify_discontinuous(&f).unwrap() else { panic!() };
        let rep = verify_fn_witness(&w, &d1(), &f, 10);
        assert!(rep.passed, "{:?}", rep.failures);
    }
}
