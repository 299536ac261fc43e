//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use scattered::func::{Body, FnRep, Tail};
use scattered::rank::SetBody;
use scattered::space::Space;
use scattered::value::{Approach, Codomain, Sign, Value};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn codomain(r: &mut ChaCha8Rng) -> Codomain {
    match r.gen_range(0..4) {
        0 => Codomain::Nat,
        1 => Codomain::Fin(r.gen_range(2..5)),
        2 => Codomain::OmegaPlusOne,
        _ => Codomain::Rationals,
    }
}

/// A value from a small pool, so that collisions between values are common.
pub fn value(r: &mut ChaCha8Rng, cod: Codomain) -> Value {
    match cod {
        Codomain::Nat => Value::Nat(r.gen_range(0..4)),
        Codomain::Fin(k) => Value::Nat(r.gen_range(0..k)),
        Codomain::OmegaPlusOne => {
            if r.gen_bool(0.3) {
                Value::Omega
            } else {
                Value::Nat(r.gen_range(0..4))
            }
        }
        Codomain::Rationals => Value::rat(r.gen_range(-2..3), r.gen_range(1..3)),
    }
}

/// An approach family converging to `limit`, when the codomain has one.
pub fn approach_to(r: &mut ChaCha8Rng, cod: Codomain, limit: &Value) -> Option<Approach> {
    let base = r.gen_range(0..4);
    match (cod, limit) {
        (Codomain::OmegaPlusOne, Value::Omega) => Some(Approach::Up { base }),
        (Codomain::Rationals, Value::Rat(q)) => Some(Approach::Dyadic {
            center: q.clone(),
            sign: if r.gen_bool(0.5) { Sign::Plus } else { Sign::Minus },
            base,
        }),
        _ => None,
    }
}

/// Any approach family valid in `cod`.
pub fn any_approach(r: &mut ChaCha8Rng, cod: Codomain) -> Option<Approach> {
    match cod {
        Codomain::Fin(_) => None,
        Codomain::Rationals if r.gen_bool(0.7) => {
            let center = BigRational::new(BigInt::from(r.gen_range(-2..3)), BigInt::from(r.gen_range(1..3)));
            approach_to(r, cod, &Value::Rat(center))
        }
        _ => Some(Approach::Up { base: r.gen_range(0..4) }),
    }
}

fn exc_keys(r: &mut ChaCha8Rng, max: usize) -> Vec<u64> {
    let n = r.gen_range(0..=max);
    let mut keys: Vec<u64> = (0..6).collect();
    keys.shuffle(r);
    keys.truncate(n);
    keys
}

/// A tail for a `lim` body with value `inf`; continuous tails converge to it.
fn lim_tail(r: &mut ChaCha8Rng, cod: Codomain, inf: &Value, continuous: bool) -> Tail {
    if continuous {
        match approach_to(r, cod, inf) {
            Some(a) if r.gen_bool(0.5) => Tail::Approach(a),
            _ => Tail::Const(inf.clone()),
        }
    } else {
        match any_approach(r, cod) {
            Some(a) if r.gen_bool(0.4) && a.limit(cod).as_ref() != Some(inf) => Tail::Approach(a),
            _ => loop {
                let v = value(r, cod);
                if &v != inf {
                    break Tail::Const(v);
                }
            },
        }
    }
}

/// A domain of the restricted class: a sum of `pt`, `fin(n)`, `omega` and
/// `lim(pt)`.
pub fn class_d_domain(r: &mut ChaCha8Rng, compact: bool) -> Space {
    let n = r.gen_range(1..=3);
    let mut parts: Vec<Space> = (0..n)
        .map(|_| match r.gen_range(0..if compact { 3 } else { 4 }) {
            0 => Space::Pt,
            1 => Space::Fin(r.gen_range(1..4)),
            2 => Space::tower(1),
            _ => Space::Omega,
        })
        .collect();
    if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        Space::Sum(parts)
    }
}

/// A random compact term of bounded depth.
pub fn compact_term(r: &mut ChaCha8Rng, depth: u32) -> Space {
    match r.gen_range(0..if depth == 0 { 2 } else { 5 }) {
        0 => Space::Pt,
        1 => Space::Fin(r.gen_range(1..4)),
        2 | 3 => Space::lim(compact_term(r, depth - 1)),
        _ => Space::Sum((0..r.gen_range(2..=3)).map(|_| compact_term(r, depth - 1)).collect()),
    }
}

/// Builds a body over `t`. `cont` is the probability that a given `lim` node
/// is continuous; `finite` forbids approach tails.
pub fn body(r: &mut ChaCha8Rng, t: &Space, cod: Codomain, cont: f64, finite: bool) -> Body {
    match t {
        Space::Pt => Body::Pt(value(r, cod)),
        Space::Fin(n) => Body::Fin((0..*n).map(|_| value(r, cod)).collect()),
        Space::Omega => {
            let exc = exc_keys(r, 3).into_iter().map(|k| (k, value(r, cod))).collect();
            let tail = match any_approach(r, cod) {
                Some(a) if !finite && r.gen_bool(0.5) => Tail::Approach(a),
                _ => Tail::Const(value(r, cod)),
            };
            Body::Omega { exc, tail }
        }
        Space::Sum(ts) => Body::Sum(ts.iter().map(|s| body(r, s, cod, cont, finite)).collect()),
        Space::Lim(u) => {
            let inf = value(r, cod);
            let continuous = r.gen_bool(cont);
            let mut tail = lim_tail(r, cod, &inf, continuous);
            if finite && matches!(tail, Tail::Approach(_)) {
                tail = if continuous { Tail::Const(inf.clone()) } else { lim_tail_const(r, cod, &inf) };
            }
            let exc: BTreeMap<u64, Body> =
                exc_keys(r, 3).into_iter().map(|k| (k, body(r, u, cod, cont, finite))).collect();
            Body::Lim { inf, exc, tail }
        }
        Space::PairsPlus | Space::Empty => unreachable!("generators never produce {t}"),
    }
}

fn lim_tail_const(r: &mut ChaCha8Rng, cod: Codomain, inf: &Value) -> Tail {
    loop {
        let v = value(r, cod);
        if &v != inf {
            return Tail::Const(v);
        }
    }
}

pub fn fn_over(r: &mut ChaCha8Rng, t: Space, cod: Codomain, cont: f64, finite: bool) -> FnRep {
    let b = body(r, &t, cod, cont, finite);
    FnRep::new(t, cod, b).expect("generated bodies fit their domains")
}

/// A function in the supported class: a class-D domain, or a locally
/// constant function on an arbitrary compact term.
pub fn supported_fn(r: &mut ChaCha8Rng) -> FnRep {
    if r.gen_bool(0.75) {
        let t = class_d_domain(r, false);
        let cod = codomain(r);
        let cont = if r.gen_bool(0.8) { 1.0 } else { 0.5 };
        fn_over(r, t, cod, cont, false)
    } else {
        locally_constant_fn(r)
    }
}

pub fn locally_constant_fn(r: &mut ChaCha8Rng) -> FnRep {
    let t = compact_term(r, 2);
    let cod = if r.gen_bool(0.5) { Codomain::Fin(3) } else { Codomain::Nat };
    fn_over(r, t, cod, 1.0, true)
}

/// Continuous functions on `lim(pt)`.
pub fn lim_pt_fn(r: &mut ChaCha8Rng) -> FnRep {
    let cod = match r.gen_range(0..3) {
        0 => Codomain::Fin(3),
        1 => Codomain::OmegaPlusOne,
        _ => Codomain::Rationals,
    };
    fn_over(r, Space::tower(1), cod, 1.0, false)
}

/// Extends `f` by one more summand carrying values from the same pool,
/// staying inside the class `f` belongs to.
pub fn extend(r: &mut ChaCha8Rng, f: &FnRep) -> FnRep {
    extend_with(r, f, false)
}

/// As [`extend`], with a compact extra summand.
pub fn extend_compact(r: &mut ChaCha8Rng, f: &FnRep) -> FnRep {
    extend_with(r, f, true)
}

fn extend_with(r: &mut ChaCha8Rng, f: &FnRep, compact: bool) -> FnRep {
    let dclass = scattered::func::in_class_d(&f.domain);
    let extra = if dclass {
        match class_d_domain(r, compact) {
            Space::Sum(mut ts) => ts.swap_remove(0),
            t => t,
        }
    } else {
        compact_term(r, 2)
    };
    let cont = if continuity_of(f) { 1.0 } else { 0.5 };
    let b = body(r, &extra, f.codomain, cont, !dclass || f.has_finite_image());
    let (mut ts, mut bs) = match (&f.domain, &f.body) {
        (Space::Sum(ts), Body::Sum(bs)) => (ts.clone(), bs.clone()),
        (t, b) => (vec![t.clone()], vec![b.clone()]),
    };
    ts.push(extra);
    bs.push(b);
    FnRep::new(Space::Sum(ts), f.codomain, Body::Sum(bs)).expect("extension fits")
}

fn continuity_of(f: &FnRep) -> bool {
    scattered::func::continuity_check(f) == scattered::func::Continuity::Continuous
}

/// Continuity read off the body directly: every `lim` tail must converge to
/// the value at its limit point.
pub fn continuous_oracle(f: &FnRep) -> bool {
    fn converges(cod: Codomain, inf: &Value, tail: &Tail) -> bool {
        match tail {
            Tail::Const(c) => c == inf,
            Tail::Approach(Approach::Up { .. }) => cod == Codomain::OmegaPlusOne && *inf == Value::Omega,
            Tail::Approach(Approach::Dyadic { center, .. }) => *inf == Value::Rat(center.clone()),
        }
    }
    fn go(cod: Codomain, b: &Body) -> bool {
        match b {
            Body::Pt(_) | Body::Fin(_) | Body::Omega { .. } => true,
            Body::Sum(bs) => bs.iter().all(|b| go(cod, b)),
            Body::Lim { inf, exc, tail } => converges(cod, inf, tail) && exc.values().all(|b| go(cod, b)),
        }
    }
    go(f.codomain, &f.body)
}

/// A random subset body of the compact term `t`.
pub fn set_body(r: &mut ChaCha8Rng, t: &Space) -> SetBody {
    match t {
        Space::Pt => SetBody::Pt(r.gen_bool(0.5)),
        Space::Fin(n) => SetBody::Fin((0..*n).map(|_| r.gen_bool(0.5)).collect()),
        Space::Sum(ts) => SetBody::Sum(ts.iter().map(|s| set_body(r, s)).collect()),
        Space::Lim(u) => SetBody::Lim {
            inf: r.gen_bool(0.5),
            exc: (0..r.gen_range(0..3)).map(|_| (r.gen_range(0..5), set_body(r, u))).collect(),
            tail: (0..r.gen_range(1..3)).map(|_| set_body(r, u)).collect(),
        },
        _ => unreachable!("generators never produce {t}"),
    }
}
