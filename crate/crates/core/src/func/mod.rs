//! Finitely described functions from space terms to countable codomains.

mod classify;
mod dclass;
mod embed;
mod image;
mod post;
mod witness;

pub use classify::{classify_discontinuous, continuity_check, d0, d1, Continuity, Discontinuity, Trichotomy};
pub use embed::{fn_embeds, in_class_d, FnObstruction, FnObstructionKind, FnVerdict};
pub use image::{fiber, image_profile, Card, ClusterInfo, Fiber, FiberMap, ImageProfile};
pub use post::{postcompose, CodomainEmbedding};
pub use witness::{verify_fn_witness, ClusterRule, Evaluate, FnEmbWitness, FnVerifyReport, TauMap, ValueMap};

pub(crate) use dclass::{assignment_witness, SpecialTarget};
pub(crate) use embed::{bipartite_match, fiberwise_witness};
pub(crate) use image::{nth_free, rank_free, unwrap, wrap, Seg};

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::space::{Addr, Space};
use crate::value::{Approach, ApproachDisplay, Codomain, Value};

/// What every copy (or index) beyond the exceptions carries.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Tail {
    Const(Value),
    Approach(Approach),
}

impl Tail {
    pub fn value(&self, cod: Codomain, n: u64) -> Value {
        match self {
            Tail::Const(v) => v.clone(),
            Tail::Approach(a) => a.value(cod, n),
        }
    }
}

/// A function body, shaped like its domain term.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Body {
    Pt(Value),
    Fin(Vec<Value>),
    Omega {
        exc: BTreeMap<u64, Value>,
        tail: Tail,
    },
    Sum(Vec<Body>),
    /// Copies not listed in `exc` are constant with the tail value.
    Lim {
        inf: Value,
        exc: BTreeMap<u64, Body>,
        tail: Tail,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FnRep {
    pub domain: Space,
    pub codomain: Codomain,
    pub body: Body,
}

impl FnRep {
    pub fn new(domain: Space, codomain: Codomain, body: Body) -> Result<FnRep> {
        domain.validate()?;
        check_body(&domain, codomain, &body)?;
        Ok(FnRep { domain, codomain, body })
    }

    pub fn constant(domain: Space, codomain: Codomain, v: Value) -> Result<FnRep> {
        let body = constant_body(&domain, &v)?;
        FnRep::new(domain, codomain, body)
    }

    pub fn eval(&self, a: &Addr) -> Result<Value> {
        eval_body(&self.domain, self.codomain, &self.body, a)
    }

    /// True when no tail anywhere is an approach family.
    pub fn has_finite_image(&self) -> bool {
        fn go(b: &Body) -> bool {
            match b {
                Body::Pt(_) | Body::Fin(_) => true,
                Body::Omega { tail, .. } => matches!(tail, Tail::Const(_)),
                Body::Sum(bs) => bs.iter().all(go),
                Body::Lim { exc, tail, .. } => matches!(tail, Tail::Const(_)) && exc.values().all(go),
            }
        }
        go(&self.body)
    }
}

pub(crate) fn constant_body(t: &Space, v: &Value) -> Result<Body> {
    Ok(match t {
        Space::Pt => Body::Pt(v.clone()),
        Space::Fin(n) => Body::Fin(vec![v.clone(); *n as usize]),
        Space::Omega => Body::Omega { exc: BTreeMap::new(), tail: Tail::Const(v.clone()) },
        Space::Sum(ts) => Body::Sum(ts.iter().map(|s| constant_body(s, v)).collect::<Result<_>>()?),
        Space::Lim(_) => Body::Lim { inf: v.clone(), exc: BTreeMap::new(), tail: Tail::Const(v.clone()) },
        Space::PairsPlus | Space::Empty => return Err(Error::ShapeMismatch(format!("no function bodies over {t}"))),
    })
}

fn check_body(t: &Space, cod: Codomain, b: &Body) -> Result<()> {
    let mismatch = || Error::ShapeMismatch(format!("body does not fit {t}"));
    let check_tail = |tail: &Tail| match tail {
        Tail::Const(v) => cod.check(v),
        Tail::Approach(a) => a.check(cod),
    };
    match (t, b) {
        (Space::Pt, Body::Pt(v)) => cod.check(v),
        (Space::Fin(n), Body::Fin(vs)) if vs.len() == *n as usize => vs.iter().try_for_each(|v| cod.check(v)),
        (Space::Omega, Body::Omega { exc, tail }) => {
            exc.values().try_for_each(|v| cod.check(v))?;
            check_tail(tail)
        }
        (Space::Sum(ts), Body::Sum(bs)) if ts.len() == bs.len() => {
            ts.iter().zip(bs).try_for_each(|(t, b)| check_body(t, cod, b))
        }
        (Space::Lim(u), Body::Lim { inf, exc, tail }) => {
            cod.check(inf)?;
            check_tail(tail)?;
            exc.values().try_for_each(|b| check_body(u, cod, b))
        }
        _ => Err(mismatch()),
    }
}

fn eval_body(t: &Space, cod: Codomain, b: &Body, a: &Addr) -> Result<Value> {
    let bad = || Error::BadAddress(a.to_string());
    match (t, b, a) {
        (Space::Pt, Body::Pt(v), Addr::Here) => Ok(v.clone()),
        (Space::Fin(_), Body::Fin(vs), Addr::Idx(i)) => vs.get(*i as usize).cloned().ok_or_else(bad),
        (Space::Omega, Body::Omega { exc, tail }, Addr::Idx(i)) => {
            Ok(exc.get(i).cloned().unwrap_or_else(|| tail.value(cod, *i)))
        }
        (Space::Sum(ts), Body::Sum(bs), Addr::Branch(i, sub)) => {
            let (t, b) = ts.get(*i).zip(bs.get(*i)).ok_or_else(bad)?;
            eval_body(t, cod, b, sub)
        }
        (Space::Lim(_), Body::Lim { inf, .. }, Addr::Inf) => Ok(inf.clone()),
        (Space::Lim(u), Body::Lim { exc, tail, .. }, Addr::Copy(n, sub)) => match exc.get(n) {
            Some(b) => eval_body(u, cod, b, sub),
            None => {
                u.check_addr(sub).map_err(|_| bad())?;
                Ok(tail.value(cod, *n))
            }
        },
        _ => Err(bad()),
    }
}

impl fmt::Display for Tail {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tail::Const(v) => write!(f, "const({v})"),
            Tail::Approach(a) => write!(f, "{}", ApproachDisplay(a)),
        }
    }
}

fn fmt_exc<T>(f: &mut fmt::Formatter<'_>, exc: &BTreeMap<u64, T>, show: impl Fn(&T) -> String) -> fmt::Result {
    if exc.is_empty() {
        return Ok(());
    }
    write!(f, "exc: {{")?;
    for (i, (k, v)) in exc.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{k}: {}", show(v))?;
    }
    write!(f, "}}, ")
}

impl fmt::Display for Body {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Body::Pt(v) => write!(f, "{v}"),
            Body::Fin(vs) => {
                write!(f, "[")?;
                for (i, v) in vs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{v}")?;
                }
                write!(f, "]")
            }
            Body::Omega { exc, tail } => {
                write!(f, "{{ ")?;
                fmt_exc(f, exc, |v| v.to_string())?;
                write!(f, "tail: {tail} }}")
            }
            Body::Sum(bs) => {
                write!(f, "{{ ")?;
                for (i, b) in bs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "[{i}]: {b}")?;
                }
                write!(f, " }}")
            }
            Body::Lim { inf, exc, tail } => {
                write!(f, "{{ inf: {inf}, ")?;
                fmt_exc(f, exc, |b| b.to_string())?;
                write!(f, "tail: {tail} }}")
            }
        }
    }
}

impl fmt::Display for FnRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fn over {} -> {} {}", self.domain, self.codomain, self.body)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_examples() {
        let f = d0();
        assert_eq!(f.eval(&Addr::Inf).unwrap(), Value::Nat(1));
        assert_eq!(f.eval(&Addr::copy(7, Addr::Here)).unwrap(), Value::Nat(0));
        let g = d1();
        assert_eq!(g.eval(&Addr::copy(4, Addr::Here)).unwrap(), Value::Nat(5));
        let c = FnRep::constant(Space::tower(2), Codomain::Rationals, Value::rat(1, 3)).unwrap();
        assert_eq!(c.eval(&Addr::copy(2, Addr::copy(9, Addr::Here))).unwrap(), Value::rat(1, 3));
        assert!(c.eval(&Addr::copy(2, Addr::Here)).is_err());
    }

    #[test]
    fn shape_checks() {
        let bad = FnRep::new(Space::Fin(2), Codomain::Nat, Body::Fin(vec![Value::Nat(0)]));
        assert!(bad.is_err());
        let bad = FnRep::new(Space::Pt, Codomain::Fin(2), Body::Pt(Value::Nat(2)));
        assert!(matches!(bad, Err(Error::BadValue(..))));
    }

    #[test]
    fn display() {
        let f = FnRep::new(
            Space::tower(1),
            Codomain::OmegaPlusOne,
            Body::Lim {
                inf: Value::Omega,
                exc: [(0, Body::Pt(Value::Nat(5)))].into(),
                tail: Tail::Approach(Approach::Up { base: 1 }),
            },
        )
        .unwrap();
        assert_eq!(f.to_string(), "fn over lim(pt) -> omega+1 { inf: w, exc: {0: 5}, tail: approach(base=1) }");
    }
}
