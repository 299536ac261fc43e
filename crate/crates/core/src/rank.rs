//! Difference-hierarchy ranks of sets and of finite-image functions on
//! compact terms.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::func::{Body, Evaluate, FnEmbWitness, FnRep, Tail, TauMap, ValueMap};
use crate::space::{Addr, Space, SpaceEmbWitness, WitnessKind};
use crate::value::{Codomain, Value};

/// Largest `k` accepted by [`high_rank_witness`].
pub const HIGH_RANK_BOUND: u32 = 6;

/// A subset of a compact term, described along the term's structure.
///
/// Under `lim`, copy `n` is `exc[n]` when present and `tail[n % tail.len()]`
/// otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum SetBody {
    Pt(bool),
    Fin(Vec<bool>),
    Lim { inf: bool, exc: BTreeMap<u64, SetBody>, tail: Vec<SetBody> },
    Sum(Vec<SetBody>),
    Empty,
}

/// A set together with the term it lives in.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetRep {
    pub space: Space,
    pub body: SetBody,
}

fn unsupported(t: &Space) -> Error {
    Error::UnsupportedDomain(format!("{t} is not compact"))
}

impl SetBody {
    fn uniform(t: &Space, b: bool) -> Result<SetBody> {
        Ok(match t {
            Space::Pt => SetBody::Pt(b),
            Space::Fin(n) => SetBody::Fin(vec![b; *n as usize]),
            Space::Lim(u) => SetBody::Lim { inf: b, exc: BTreeMap::new(), tail: vec![SetBody::uniform(u, b)?] },
            Space::Sum(ts) => SetBody::Sum(ts.iter().map(|s| SetBody::uniform(s, b)).collect::<Result<_>>()?),
            Space::Empty => SetBody::Empty,
            Space::Omega | Space::PairsPlus => return Err(unsupported(t)),
        })
    }

    fn fits(&self, t: &Space) -> bool {
        match (t, self) {
            (Space::Pt, SetBody::Pt(_)) | (Space::Empty, SetBody::Empty) => true,
            (Space::Fin(n), SetBody::Fin(bs)) => bs.len() == *n as usize,
            (Space::Lim(u), SetBody::Lim { exc, tail, .. }) => {
                !tail.is_empty() && exc.values().chain(tail).all(|b| b.fits(u))
            }
            (Space::Sum(ts), SetBody::Sum(bs)) => ts.len() == bs.len() && ts.iter().zip(bs).all(|(t, b)| b.fits(t)),
            _ => false,
        }
    }

    fn copy(&self, n: u64) -> &SetBody {
        match self {
            SetBody::Lim { exc, tail, .. } => exc.get(&n).unwrap_or(&tail[(n % tail.len() as u64) as usize]),
            _ => unreachable!("copies exist only under lim"),
        }
    }

    fn map(&self, op: &impl Fn(bool) -> bool) -> SetBody {
        match self {
            SetBody::Pt(b) => SetBody::Pt(op(*b)),
            SetBody::Fin(bs) => SetBody::Fin(bs.iter().map(|b| op(*b)).collect()),
            SetBody::Lim { inf, exc, tail } => SetBody::Lim {
                inf: op(*inf),
                exc: exc.iter().map(|(k, b)| (*k, b.map(op))).collect(),
                tail: tail.iter().map(|b| b.map(op)).collect(),
            },
            SetBody::Sum(bs) => SetBody::Sum(bs.iter().map(|b| b.map(op)).collect()),
            SetBody::Empty => SetBody::Empty,
        }
    }

    fn zip(&self, other: &SetBody, op: &impl Fn(bool, bool) -> bool) -> SetBody {
        match (self, other) {
            (SetBody::Pt(a), SetBody::Pt(b)) => SetBody::Pt(op(*a, *b)),
            (SetBody::Fin(a), SetBody::Fin(b)) => SetBody::Fin(a.iter().zip(b).map(|(x, y)| op(*x, *y)).collect()),
            (SetBody::Sum(a), SetBody::Sum(b)) => SetBody::Sum(a.iter().zip(b).map(|(x, y)| x.zip(y, op)).collect()),
            (SetBody::Lim { inf: i0, exc: e0, tail: t0 }, SetBody::Lim { inf: i1, exc: e1, tail: t1 }) => {
                let exc = e0.keys().chain(e1.keys()).map(|k| (*k, self.copy(*k).zip(other.copy(*k), op))).collect();
                let p = num_integer::lcm(t0.len(), t1.len());
                let tail = (0..p).map(|i| t0[i % t0.len()].zip(&t1[i % t1.len()], op)).collect();
                SetBody::Lim { inf: op(*i0, *i1), exc, tail }.normalized()
            }
            _ => SetBody::Empty,
        }
    }

    /// Shortest tail period, and no exception equal to its tail copy.
    fn normalized(self) -> SetBody {
        match self {
            SetBody::Lim { inf, exc, tail } => {
                let tail: Vec<SetBody> = tail.into_iter().map(SetBody::normalized).collect();
                let len = tail.len();
                let p = (1..=len)
                    .find(|p| len.is_multiple_of(*p) && (0..len).all(|i| tail[i] == tail[i % p]))
                    .unwrap_or(len);
                let tail = tail[..p].to_vec();
                let exc = exc
                    .into_iter()
                    .map(|(k, b)| (k, b.normalized()))
                    .filter(|(k, b)| *b != tail[(*k % p as u64) as usize])
                    .collect();
                SetBody::Lim { inf, exc, tail }
            }
            SetBody::Sum(bs) => SetBody::Sum(bs.into_iter().map(SetBody::normalized).collect()),
            b => b,
        }
    }

    fn is_empty(&self) -> bool {
        match self {
            SetBody::Pt(b) => !b,
            SetBody::Fin(bs) => !bs.iter().any(|b| *b),
            SetBody::Lim { inf, exc, tail } => !inf && exc.values().chain(tail).all(SetBody::is_empty),
            SetBody::Sum(bs) => bs.iter().all(SetBody::is_empty),
            SetBody::Empty => true,
        }
    }

    fn closure(&self) -> SetBody {
        match self {
            SetBody::Lim { inf, exc, tail } => SetBody::Lim {
                inf: *inf || tail.iter().any(|b| !b.is_empty()),
                exc: exc.iter().map(|(k, b)| (*k, b.closure())).collect(),
                tail: tail.iter().map(SetBody::closure).collect(),
            }
            .normalized(),
            SetBody::Sum(bs) => SetBody::Sum(bs.iter().map(SetBody::closure).collect()),
            b => b.clone(),
        }
    }

    fn contains(&self, a: &Addr) -> Option<bool> {
        match (self, a) {
            (SetBody::Pt(b), Addr::Here) => Some(*b),
            (SetBody::Fin(bs), Addr::Idx(i)) => bs.get(*i as usize).copied(),
            (SetBody::Lim { inf, .. }, Addr::Inf) => Some(*inf),
            (SetBody::Lim { .. }, Addr::Copy(n, sub)) => self.copy(*n).contains(sub),
            (SetBody::Sum(bs), Addr::Branch(i, sub)) => bs.get(*i)?.contains(sub),
            _ => None,
        }
    }
}

impl SetRep {
    pub fn new(space: Space, body: SetBody) -> Result<SetRep> {
        if !space.is_compact() {
            return Err(unsupported(&space));
        }
        if !body.fits(&space) {
            return Err(Error::ShapeMismatch(format!("set body does not fit {space}")));
        }
        Ok(SetRep { space, body: body.normalized() })
    }

    pub fn empty(space: &Space) -> Result<SetRep> {
        Ok(SetRep { space: space.clone(), body: SetBody::uniform(space, false)? })
    }

    pub fn full(space: &Space) -> Result<SetRep> {
        Ok(SetRep { space: space.clone(), body: SetBody::uniform(space, true)? })
    }

    fn with(&self, body: SetBody) -> SetRep {
        SetRep { space: self.space.clone(), body }
    }

    fn same_space(&self, other: &SetRep) -> Result<()> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!("sets over {} and {}", self.space, other.space)))
        }
    }

    pub fn complement(&self) -> SetRep {
        self.with(self.body.map(&|b| !b))
    }

    pub fn intersect(&self, other: &SetRep) -> Result<SetRep> {
        self.same_space(other)?;
        Ok(self.with(self.body.zip(&other.body, &|a, b| a && b)))
    }

    pub fn union(&self, other: &SetRep) -> Result<SetRep> {
        self.same_space(other)?;
        Ok(self.with(self.body.zip(&other.body, &|a, b| a || b)))
    }

    pub fn minus(&self, other: &SetRep) -> Result<SetRep> {
        self.intersect(&other.complement())
    }

    pub fn is_empty(&self) -> bool {
        self.body.is_empty()
    }

    pub fn is_subset(&self, other: &SetRep) -> Result<bool> {
        Ok(self.minus(other)?.is_empty())
    }

    pub fn is_closed(&self) -> bool {
        self.closure() == *self
    }

    pub fn contains(&self, a: &Addr) -> Result<bool> {
        self.body.contains(a).ok_or_else(|| Error::BadAddress(a.to_string()))
    }

    pub fn closure(&self) -> SetRep {
        self.with(self.body.closure())
    }
}

/// The topological closure of `a`.
pub fn set_closure(a: &SetRep) -> SetRep {
    a.closure()
}

/// Alternating derivative `F_0 = cl(a)`, `F_{i+1} = cl(F_i & side)` where
/// `side` alternates between `b` and `a`. Returns the nonempty terms.
fn chain(a: &SetRep, b: &SetRep) -> Vec<SetRep> {
    let mut out = Vec::new();
    let mut f = a.closure();
    while !f.is_empty() {
        let side = if out.len() % 2 == 0 { b } else { a };
        let next = f.intersect(side).expect("same space").closure();
        out.push(f);
        f = next;
    }
    out
}

/// Least length of a decreasing sequence of closed sets whose even
/// differences make up `a`.
pub fn rank_delta2(a: &SetRep) -> u32 {
    chain(a, &a.complement()).len() as u32
}

/// Least rank of a set `c` with `a <= c` and `c & b` empty.
pub fn sep_rank(a: &SetRep, b: &SetRep) -> Result<u32> {
    Ok(separator(a, b)?.1)
}

/// A separator of least rank, with that rank.
pub fn separator(a: &SetRep, b: &SetRep) -> Result<(SetRep, u32)> {
    if !a.intersect(b)?.is_empty() {
        return Err(Error::NotDisjoint);
    }
    let fs = chain(a, b);
    let mut c = SetRep::empty(&a.space)?;
    for i in (0..fs.len()).step_by(2) {
        let piece = match fs.get(i + 1) {
            Some(next) => fs[i].minus(next)?,
            None => fs[i].clone(),
        };
        c = c.union(&piece)?;
    }
    Ok((c, fs.len() as u32))
}

/// A function with finitely many values, given by the fibers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFn {
    pub domain: Space,
    pub codomain: Codomain,
    pub pieces: Vec<(Value, SetRep)>,
}

impl SetFn {
    /// Checks that the nonempty pieces partition the domain.
    pub fn new(domain: Space, codomain: Codomain, pieces: Vec<(Value, SetRep)>) -> Result<SetFn> {
        let mut seen = SetRep::empty(&domain)?;
        let mut out: Vec<(Value, SetRep)> = Vec::new();
        for (v, s) in pieces {
            codomain.check(&v)?;
            if out.iter().any(|(w, _)| *w == v) {
                return Err(Error::ShapeMismatch(format!("value {v} listed twice")));
            }
            if !seen.intersect(&s)?.is_empty() {
                return Err(Error::ShapeMismatch(format!("the piece of {v} overlaps another")));
            }
            seen = seen.union(&s)?;
            if !s.is_empty() {
                out.push((v, s));
            }
        }
        if !seen.complement().is_empty() {
            return Err(Error::ShapeMismatch("pieces do not cover the domain".into()));
        }
        Ok(SetFn { domain, codomain, pieces: out })
    }

    pub fn from_fn(f: &FnRep) -> Result<SetFn> {
        if !f.domain.is_compact() {
            return Err(Error::UnsupportedFn(format!("{} is not compact", f.domain)));
        }
        if !f.has_finite_image() {
            return Err(Error::UnsupportedFn("the image is infinite".into()));
        }
        let mut values = Vec::new();
        collect_values(&f.body, &mut values);
        let pieces = values
            .into_iter()
            .map(|v| {
                let body = fiber_body(&f.domain, &f.body, &v)?;
                Ok((v, SetRep::new(f.domain.clone(), body)?))
            })
            .collect::<Result<_>>()?;
        SetFn::new(f.domain.clone(), f.codomain, pieces)
    }

    pub fn fiber(&self, v: &Value) -> Option<&SetRep> {
        self.pieces.iter().find(|(w, _)| w == v).map(|(_, s)| s)
    }
}

fn collect_values(b: &Body, out: &mut Vec<Value>) {
    let mut add = |v: &Value| {
        if !out.contains(v) {
            out.push(v.clone());
        }
    };
    match b {
        Body::Pt(v) => add(v),
        Body::Fin(vs) => vs.iter().for_each(add),
        Body::Omega { exc, tail } => {
            exc.values().for_each(&mut add);
            if let Tail::Const(v) = tail {
                add(v);
            }
        }
        Body::Lim { inf, exc, tail } => {
            add(inf);
            if let Tail::Const(v) = tail {
                add(v);
            }
            exc.values().for_each(|b| collect_values(b, out));
        }
        Body::Sum(bs) => bs.iter().for_each(|b| collect_values(b, out)),
    }
}

fn fiber_body(t: &Space, b: &Body, w: &Value) -> Result<SetBody> {
    Ok(match (t, b) {
        (Space::Pt, Body::Pt(v)) => SetBody::Pt(v == w),
        (Space::Fin(_), Body::Fin(vs)) => SetBody::Fin(vs.iter().map(|v| v == w).collect()),
        (Space::Sum(ts), Body::Sum(bs)) => {
            SetBody::Sum(ts.iter().zip(bs).map(|(t, b)| fiber_body(t, b, w)).collect::<Result<_>>()?)
        }
        (Space::Lim(u), Body::Lim { inf, exc, tail: Tail::Const(c) }) => SetBody::Lim {
            inf: inf == w,
            exc: exc.iter().map(|(k, b)| Ok((*k, fiber_body(u, b, w)?))).collect::<Result<_>>()?,
            tail: vec![SetBody::uniform(u, c == w)?],
        },
        _ => return Err(Error::UnsupportedFn("the image is infinite".into())),
    })
}

impl Evaluate for SetFn {
    fn domain(&self) -> &Space {
        &self.domain
    }

    fn codomain(&self) -> Codomain {
        self.codomain
    }

    fn eval(&self, a: &Addr) -> Result<Value> {
        self.domain.check_addr(a)?;
        for (v, s) in &self.pieces {
            if s.contains(a)? {
                return Ok(v.clone());
            }
        }
        Err(Error::BadAddress(a.to_string()))
    }
}

/// The supremum of `sep_rank` over ordered pairs of distinct fibers; `1`
/// for a constant function.
pub fn fn_rank(f: &SetFn) -> Result<u32> {
    let mut best = 1;
    for (i, (_, a)) in f.pieces.iter().enumerate() {
        for (j, (_, b)) in f.pieces.iter().enumerate() {
            if i != j {
                best = best.max(sep_rank(a, b)?);
            }
        }
    }
    Ok(best)
}

/// The points of even CB level in `tower(k)`.
pub fn high_rank_witness(k: u32) -> Result<SetRep> {
    if k == 0 || k > HIGH_RANK_BOUND {
        return Err(Error::BoundExceeded(k, HIGH_RANK_BOUND));
    }
    fn level_parity(k: u32) -> SetBody {
        if k == 0 {
            return SetBody::Pt(true);
        }
        SetBody::Lim { inf: k.is_multiple_of(2), exc: BTreeMap::new(), tail: vec![level_parity(k - 1)] }
    }
    SetRep::new(Space::tower(k), level_parity(k))
}

fn other_value(c: Codomain, v: &Value) -> Option<Value> {
    let cands = match c {
        Codomain::Rationals => vec![Value::int(0), Value::int(1)],
        Codomain::Fin(n) if n < 2 => vec![],
        _ => vec![Value::Nat(0), Value::Nat(1)],
    };
    cands.into_iter().find(|w| w != v)
}

/// Adds a summand carrying a two-valued function of larger rank.
pub fn escalate(f: &SetFn) -> Result<SetFn> {
    let (y1, y2) = match f.pieces.as_slice() {
        [(y, _)] => (
            y.clone(),
            other_value(f.codomain, y).ok_or_else(|| Error::UnsupportedFn("codomain has one value".into()))?,
        ),
        [(a, _), (b, _)] => (a.clone(), b.clone()),
        _ => return Err(Error::UnsupportedFn("escalation needs at most two values".into())),
    };
    let k = fn_rank(f)?;
    let h = high_rank_witness(k)?;
    let domain = Space::Sum(vec![f.domain.clone(), h.space.clone()]);
    let part = |v: &Value, w: &SetRep| -> Result<SetRep> {
        let own = match f.fiber(v) {
            Some(s) => s.body.clone(),
            None => SetBody::uniform(&f.domain, false)?,
        };
        SetRep::new(domain.clone(), SetBody::Sum(vec![own, w.body.clone()]))
    };
    let pieces = vec![(y1.clone(), part(&y1, &h)?), (y2.clone(), part(&y2, &h.complement())?)];
    SetFn::new(domain.clone(), f.codomain, pieces)
}

/// `f <= escalate(f)` by inclusion into the first summand.
pub fn inclusion_witness(f: &SetFn) -> FnEmbWitness {
    let mut tau = ValueMap::new(f.codomain, f.codomain);
    for (v, _) in &f.pieces {
        tau.table.insert(v.clone(), v.clone());
    }
    FnEmbWitness {
        sigma: SpaceEmbWitness::new(WitnessKind::Pattern, vec!["first summand".into()], |a| {
            Some(Addr::branch(0, a.clone()))
        }),
        tau: TauMap::Map(tau),
    }
}

impl fmt::Display for SetBody {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetBody::Pt(b) => write!(f, "{b}"),
            SetBody::Fin(bs) => {
                let items: Vec<String> = bs.iter().map(ToString::to_string).collect();
                write!(f, "[{}]", items.join(", "))
            }
            SetBody::Sum(bs) => {
                let items: Vec<String> = bs.iter().enumerate().map(|(i, b)| format!("[{i}]: {b}")).collect();
                write!(f, "{{ {} }}", items.join(", "))
            }
            SetBody::Empty => write!(f, "{{}}"),
            SetBody::Lim { inf, exc, tail } => {
                write!(f, "{{ inf: {inf}, ")?;
                if !exc.is_empty() {
                    let items: Vec<String> = exc.iter().map(|(k, b)| format!("{k}: {b}")).collect();
                    write!(f, "exc: {{{}}}, ", items.join(", "))?;
                }
                match tail.as_slice() {
                    [b] => write!(f, "tail: {b} }}"),
                    [SetBody::Pt(true), SetBody::Pt(false)] => write!(f, "tail: parity(even) }}"),
                    [SetBody::Pt(false), SetBody::Pt(true)] => write!(f, "tail: parity(odd) }}"),
                    bs => {
                        let items: Vec<String> = bs.iter().map(ToString::to_string).collect();
                        write!(f, "tail: cycle({}) }}", items.join(", "))
                    }
                }
            }
        }
    }
}

impl fmt::Display for SetRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "set over {} {}", self.space, self.body)
    }
}

impl Serialize for SetRep {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl fmt::Display for SetFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.pieces.iter().map(|(v, s)| format!("{v}: {}", s.body)).collect();
        write!(f, "partition over {} -> {} {{ {} }}", self.domain, self.codomain, items.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::{d0, fn_embeds, verify_fn_witness};

    fn lim_pt(inf: bool, exc: &[(u64, bool)], tail: &[bool]) -> SetRep {
        let body = SetBody::Lim {
            inf,
            exc: exc.iter().map(|(k, b)| (*k, SetBody::Pt(*b))).collect(),
            tail: tail.iter().map(|b| SetBody::Pt(*b)).collect(),
        };
        SetRep::new(Space::tower(1), body).unwrap()
    }

    #[test]
    fn closure_examples() {
        let evens = lim_pt(false, &[], &[true, false]);
        assert_eq!(set_closure(&evens), lim_pt(true, &[], &[true, false]));
        let inf = lim_pt(true, &[], &[false]);
        assert_eq!(set_closure(&inf), inf);
        let finite = lim_pt(false, &[(2, true), (5, true)], &[false]);
        assert_eq!(set_closure(&finite), finite);
    }

    #[test]
    fn delta2_examples() {
        let whole = SetRep::full(&Space::tower(1)).unwrap();
        assert_eq!(rank_delta2(&whole), 1);
        assert_eq!(rank_delta2(&lim_pt(false, &[], &[true])), 2);
        assert_eq!(rank_delta2(&SetRep::empty(&Space::tower(2)).unwrap()), 0);
        assert_eq!(rank_delta2(&high_rank_witness(1).unwrap()), 2);
        let iso2 = SetRep::new(
            Space::tower(2),
            SetBody::Lim {
                inf: false,
                exc: BTreeMap::new(),
                tail: vec![SetBody::Lim { inf: false, exc: BTreeMap::new(), tail: vec![SetBody::Pt(true)] }],
            },
        )
        .unwrap();
        assert_eq!(rank_delta2(&iso2), 2);
    }

    #[test]
    fn separation_examples() {
        let inf = lim_pt(true, &[], &[false]);
        let evens = lim_pt(false, &[], &[true, false]);
        let odds = lim_pt(false, &[], &[false, true]);
        assert_eq!(sep_rank(&inf, &evens).unwrap(), 1);
        assert_eq!(sep_rank(&odds, &evens.union(&inf).unwrap()).unwrap(), 2);
        assert_eq!(sep_rank(&inf, &SetRep::empty(&Space::tower(1)).unwrap()).unwrap(), 1);
        assert_eq!(sep_rank(&odds, &odds), Err(Error::NotDisjoint));
        let (c, r) = separator(&odds, &evens).unwrap();
        assert!(odds.is_subset(&c).unwrap() && c.intersect(&evens).unwrap().is_empty());
        assert_eq!(rank_delta2(&c), r);
    }

    #[test]
    fn function_ranks() {
        let d0 = SetFn::from_fn(&d0()).unwrap();
        assert_eq!(fn_rank(&d0).unwrap(), 2);
        let c = SetFn::from_fn(&FnRep::constant(Space::tower(2), Codomain::Nat, Value::Nat(4)).unwrap()).unwrap();
        assert_eq!(fn_rank(&c).unwrap(), 1);
        let odd = SetFn::new(
            Space::tower(1),
            Codomain::Fin(2),
            vec![
                (Value::Nat(1), lim_pt(false, &[], &[false, true])),
                (Value::Nat(0), lim_pt(true, &[], &[true, false])),
            ],
        )
        .unwrap();
        assert_eq!(fn_rank(&odd).unwrap(), 2);
        assert_eq!(odd.eval(&Addr::copy(3, Addr::Here)).unwrap(), Value::Nat(1));
    }

    #[test]
    fn parity_witnesses_climb() {
        let ranks: Vec<u32> = (1..=HIGH_RANK_BOUND).map(|k| rank_delta2(&high_rank_witness(k).unwrap())).collect();
        assert_eq!(ranks[..2], [2, 3]);
        assert!(ranks.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(high_rank_witness(7), Err(Error::BoundExceeded(7, HIGH_RANK_BOUND)));
    }

    #[test]
    fn escalation() {
        let c = SetFn::from_fn(&FnRep::constant(Space::tower(1), Codomain::Fin(2), Value::Nat(0)).unwrap()).unwrap();
        let mut f = c;
        for _ in 0..3 {
            let g = escalate(&f).unwrap();
            assert!(fn_rank(&g).unwrap() > fn_rank(&f).unwrap());
            let w = inclusion_witness(&f);
            for d in 1..=5 {
                assert!(verify_fn_witness(&w, &f, &g, d).passed);
            }
            f = g;
        }
        let d0r = d0();
        let g = escalate(&SetFn::from_fn(&d0r).unwrap()).unwrap();
        assert_eq!(fn_rank(&g).unwrap(), 3);
        assert!(fn_embeds(&d0r, &d0r).unwrap().is_yes());
    }
}
