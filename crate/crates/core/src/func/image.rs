//! Images, fibers and the convergent families that make images infinite.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use super::{Body, FnRep, Tail};
use crate::error::{Error, Result};
use crate::space::{Addr, Space};
use crate::value::{ClusterKey, Codomain, Value};

/// One step of a path into a term: a summand or a copy under `lim`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) enum Seg {
    Branch(usize),
    Copy(u64),
}

pub(crate) fn wrap(path: &[Seg], a: Addr) -> Addr {
    path.iter().rev().fold(a, |a, s| match *s {
        Seg::Branch(i) => Addr::branch(i, a),
        Seg::Copy(n) => Addr::copy(n, a),
    })
}

pub(crate) fn unwrap<'a>(path: &[Seg], mut a: &'a Addr) -> Option<&'a Addr> {
    for s in path {
        a = match (s, a) {
            (Seg::Branch(i), Addr::Branch(j, sub)) if i == j => sub,
            (Seg::Copy(n), Addr::Copy(m, sub)) if n == m => sub,
            _ => return None,
        };
    }
    Some(a)
}

/// The `j`-th natural number outside `skip`.
pub(crate) fn nth_free(skip: &BTreeSet<u64>, j: u64) -> u64 {
    let mut n = j;
    for &s in skip {
        if s <= n {
            n += 1;
        } else {
            break;
        }
    }
    n
}

/// Position of `n` among the naturals outside `skip`.
pub(crate) fn rank_free(skip: &BTreeSet<u64>, n: u64) -> Option<u64> {
    if skip.contains(&n) {
        return None;
    }
    Some(n - skip.range(..n).count() as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Card {
    Finite(u64),
    Aleph0,
}

impl Serialize for Card {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Card::Finite(n) => s.serialize_u64(*n),
            Card::Aleph0 => s.serialize_str("aleph0"),
        }
    }
}

impl std::fmt::Display for Card {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Card::Finite(n) => write!(f, "{n}"),
            Card::Aleph0 => write!(f, "aleph0"),
        }
    }
}

impl Card {
    pub fn of(t: &Space) -> Card {
        t.finite_size().map_or(Card::Aleph0, Card::Finite)
    }
}

/// A fiber as a term together with its cardinality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fiber {
    pub card: Card,
    #[serde(serialize_with = "as_string")]
    pub space: Space,
}

fn as_string<S: serde::Serializer, T: std::fmt::Display>(t: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&t.to_string())
}

impl Fiber {
    pub(crate) fn of(space: Space) -> Fiber {
        Fiber { card: Card::of(&space), space }
    }
}

/// An infinite run of image values sharing a cluster key, past `threshold`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClusterInfo {
    #[serde(serialize_with = "as_string")]
    pub key: ClusterKey,
    pub threshold: u64,
    pub limit: Option<Value>,
    pub limit_attained: bool,
    pub families: usize,
    pub fiber: Fiber,
}

/// The image of a function: finitely many special values with their fibers,
/// and clusters whose generic values all share one fiber shape.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ImageProfile {
    pub special: Vec<(Value, Fiber)>,
    pub clusters: Vec<ClusterInfo>,
}

impl ImageProfile {
    pub fn card(&self) -> Card {
        if self.clusters.is_empty() {
            Card::Finite(self.special.len() as u64)
        } else {
            Card::Aleph0
        }
    }

    pub fn max_fiber(&self) -> Card {
        self.special
            .iter()
            .map(|(_, f)| f.card)
            .chain(self.clusters.iter().map(|c| c.fiber.card))
            .max()
            .unwrap_or(Card::Finite(0))
    }
}

/// An approach tail somewhere in a body.
#[derive(Debug, Clone)]
pub(crate) struct Family {
    pub key: ClusterKey,
    pub base: u64,
    pub exc: BTreeSet<u64>,
    /// The space each member contributes: the copy under `lim`, or a point.
    pub each: Space,
    pub path: Vec<Seg>,
    pub under_lim: bool,
}

impl Family {
    /// Index of the member taking exponent `e`, when it exists.
    pub fn index_of(&self, e: u64) -> Option<u64> {
        let n = e.checked_sub(self.base)?;
        (!self.exc.contains(&n)).then_some(n)
    }

    pub fn member(&self, n: u64) -> Addr {
        if self.under_lim {
            wrap(&self.path, Addr::copy(n, Addr::Here))
        } else {
            wrap(&self.path, Addr::Idx(n))
        }
    }
}

/// Everything about a function's image that is needed to reason about it.
#[derive(Debug, Clone)]
pub(crate) struct ImageModel {
    pub cod: Codomain,
    pub families: Vec<Family>,
    pub thresholds: BTreeMap<ClusterKey, u64>,
    pub specials: BTreeSet<Value>,
}

impl ImageModel {
    pub fn new(f: &FnRep) -> ImageModel {
        let mut families = Vec::new();
        let mut explicit = BTreeSet::new();
        collect(&f.domain, &f.body, &mut Vec::new(), &mut families, &mut explicit);
        let thresholds = thresholds(f.codomain, &families, &explicit);
        let mut specials = explicit;
        for fam in &families {
            let t = thresholds[&fam.key];
            for e in fam.base..t {
                if fam.index_of(e).is_some() {
                    specials.insert(fam.key.value(f.codomain, e));
                }
            }
        }
        ImageModel { cod: f.codomain, families, thresholds, specials }
    }

    pub fn keys(&self) -> impl Iterator<Item = (&ClusterKey, u64)> + '_ {
        self.thresholds.iter().map(|(k, &t)| (k, t))
    }

    pub fn families_of<'a>(&'a self, key: &'a ClusterKey) -> impl Iterator<Item = (usize, &'a Family)> + 'a {
        self.families.iter().enumerate().filter(move |(_, f)| &f.key == key)
    }

    /// Whether the key's limit is itself a value of the function.
    pub fn limit_attained(&self, key: &ClusterKey) -> Option<Value> {
        key.limit(self.cod).filter(|l| self.specials.contains(l))
    }

    pub fn generic_space(&self, key: &ClusterKey) -> Space {
        sum_of(self.families_of(key).map(|(_, f)| f.each.clone()).collect())
    }
}

fn note_tail(
    tail: &Tail,
    exc: BTreeSet<u64>,
    each: Space,
    under_lim: bool,
    path: &[Seg],
    fams: &mut Vec<Family>,
    explicit: &mut BTreeSet<Value>,
) {
    match tail {
        Tail::Const(v) => {
            explicit.insert(v.clone());
        }
        Tail::Approach(a) => {
            fams.push(Family { key: a.cluster(), base: a.base(), exc, each, path: path.to_vec(), under_lim })
        }
    }
}

fn collect(t: &Space, b: &Body, path: &mut Vec<Seg>, fams: &mut Vec<Family>, explicit: &mut BTreeSet<Value>) {
    match (t, b) {
        (Space::Pt, Body::Pt(v)) => {
            explicit.insert(v.clone());
        }
        (Space::Fin(_), Body::Fin(vs)) => explicit.extend(vs.iter().cloned()),
        (Space::Omega, Body::Omega { exc, tail: tl }) => {
            explicit.extend(exc.values().cloned());
            note_tail(tl, exc.keys().copied().collect(), Space::Pt, false, path, fams, explicit);
        }
        (Space::Sum(ts), Body::Sum(bs)) => {
            for (i, (t, b)) in ts.iter().zip(bs).enumerate() {
                path.push(Seg::Branch(i));
                collect(t, b, path, fams, explicit);
                path.pop();
            }
        }
        (Space::Lim(u), Body::Lim { inf, exc, tail: tl }) => {
            explicit.insert(inf.clone());
            note_tail(tl, exc.keys().copied().collect(), (**u).clone(), true, path, fams, explicit);
            for (n, sub) in exc {
                path.push(Seg::Copy(*n));
                collect(u, sub, path, fams, explicit);
                path.pop();
            }
        }
        _ => {}
    }
}

/// Exponent bound past which two distinct keys can no longer collide.
fn collision_bound(a: &ClusterKey, b: &ClusterKey) -> u64 {
    let bits = |q: &BigRational| q.abs().ceil().to_integer().bits() + q.denom().bits() + 2;
    match (a, b) {
        (ClusterKey::Dyadic { center: c1, .. }, ClusterKey::Dyadic { center: c2, .. }) => {
            if c1 == c2 {
                0
            } else {
                let d = (c1 - c2).abs();
                let inv = (BigRational::one() / d).ceil().to_integer();
                inv.bits() + 2
            }
        }
        (ClusterKey::Dyadic { center, .. }, ClusterKey::Up) | (ClusterKey::Up, ClusterKey::Dyadic { center, .. }) => {
            bits(center)
        }
        (ClusterKey::Up, ClusterKey::Up) => 0,
    }
}

/// Per key, the exponent from which the cluster's values are generic: every
/// family of the key covers them and they meet no explicit value, no limit
/// and no other key.
fn thresholds(cod: Codomain, fams: &[Family], explicit: &BTreeSet<Value>) -> BTreeMap<ClusterKey, u64> {
    let mut t: BTreeMap<ClusterKey, u64> = BTreeMap::new();
    for f in fams {
        let reach = f.base + f.exc.iter().next_back().map_or(0, |m| m + 1);
        let e = t.entry(f.key.clone()).or_insert(0);
        *e = (*e).max(reach);
    }
    let keys: Vec<ClusterKey> = t.keys().cloned().collect();
    let limits: Vec<Value> = keys.iter().filter_map(|k| k.limit(cod)).collect();
    let bump = |t: &mut BTreeMap<ClusterKey, u64>, k: &ClusterKey, e: u64| {
        let x = t.get_mut(k).expect("known key");
        *x = (*x).max(e + 1);
    };
    for k in &keys {
        for v in explicit.iter().chain(&limits) {
            if let Some(e) = k.exponent_of(cod, v) {
                bump(&mut t, k, e);
            }
        }
    }
    for (i, a) in keys.iter().enumerate() {
        for b in &keys[i + 1..] {
            let bound = collision_bound(a, b);
            for (x, y) in [(a, b), (b, a)] {
                for e in 0..bound {
                    if let Some(e2) = y.exponent_of(cod, &x.value(cod, e)) {
                        bump(&mut t, x, e);
                        bump(&mut t, y, e2);
                    }
                }
            }
        }
    }
    t
}

pub(crate) fn sum_of(mut parts: Vec<Space>) -> Space {
    parts.retain(|p| *p != Space::Empty);
    match parts.len() {
        0 => Space::Empty,
        1 => parts.pop().expect("one part"),
        _ => Space::Sum(parts),
    }
}

/// One summand of a fiber, located in the domain.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Piece {
    Points(Vec<Addr>),
    Whole(Vec<Seg>, Space),
    /// The points of an `omega` outside `skip`.
    OmegaRest(Vec<Seg>, BTreeSet<u64>),
    /// The limit point of a `lim` with every copy outside `skip`.
    LimRest(Vec<Seg>, Space, BTreeSet<u64>),
    /// The copies of `lim(pt)` outside `skip`, without the limit point.
    CopiesRest(Vec<Seg>, BTreeSet<u64>),
}

impl Piece {
    fn space(&self) -> Space {
        match self {
            Piece::Points(ps) if ps.len() == 1 => Space::Pt,
            Piece::Points(ps) => Space::Fin(ps.len() as u32),
            Piece::Whole(_, t) => t.clone(),
            Piece::OmegaRest(..) | Piece::CopiesRest(..) => Space::Omega,
            Piece::LimRest(_, u, _) => Space::lim(u.clone()),
        }
    }

    fn to_dom(&self, a: &Addr) -> Option<Addr> {
        match (self, a) {
            (Piece::Points(ps), Addr::Here) if ps.len() == 1 => Some(ps[0].clone()),
            (Piece::Points(ps), Addr::Idx(i)) if ps.len() > 1 => ps.get(*i as usize).cloned(),
            (Piece::Whole(p, _), a) => Some(wrap(p, a.clone())),
            (Piece::OmegaRest(p, skip), Addr::Idx(j)) => Some(wrap(p, Addr::Idx(nth_free(skip, *j)))),
            (Piece::LimRest(p, _, _), Addr::Inf) => Some(wrap(p, Addr::Inf)),
            (Piece::LimRest(p, _, skip), Addr::Copy(j, sub)) => {
                Some(wrap(p, Addr::Copy(nth_free(skip, *j), sub.clone())))
            }
            (Piece::CopiesRest(p, skip), Addr::Idx(j)) => Some(wrap(p, Addr::copy(nth_free(skip, *j), Addr::Here))),
            _ => None,
        }
    }

    fn lift_dom(&self, a: &Addr) -> Option<Addr> {
        match self {
            Piece::Points(ps) => {
                let i = ps.iter().position(|p| p == a)?;
                Some(if ps.len() == 1 { Addr::Here } else { Addr::Idx(i as u64) })
            }
            Piece::Whole(p, _) => unwrap(p, a).cloned(),
            Piece::OmegaRest(p, skip) => match unwrap(p, a)? {
                Addr::Idx(i) => rank_free(skip, *i).map(Addr::Idx),
                _ => None,
            },
            Piece::LimRest(p, _, skip) => match unwrap(p, a)? {
                Addr::Inf => Some(Addr::Inf),
                Addr::Copy(n, sub) => rank_free(skip, *n).map(|j| Addr::Copy(j, sub.clone())),
                _ => None,
            },
            Piece::CopiesRest(p, skip) => match unwrap(p, a)? {
                Addr::Copy(n, sub) if **sub == Addr::Here => rank_free(skip, *n).map(Addr::Idx),
                _ => None,
            },
        }
    }
}

/// A fiber `f^-1(v)` as a term, with address translation in both directions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiberMap {
    pub space: Space,
    pieces: Vec<Piece>,
}

impl FiberMap {
    /// The domain point denoted by a fiber address.
    pub fn to_dom(&self, a: &Addr) -> Option<Addr> {
        if self.pieces.len() == 1 {
            return self.pieces[0].to_dom(a);
        }
        match a {
            Addr::Branch(i, sub) => self.pieces.get(*i)?.to_dom(sub),
            _ => None,
        }
    }

    /// The fiber address of a domain point, if it lies in the fiber.
    pub fn lift_dom(&self, a: &Addr) -> Option<Addr> {
        if self.pieces.len() == 1 {
            return self.pieces[0].lift_dom(a);
        }
        self.pieces.iter().enumerate().find_map(|(i, p)| p.lift_dom(a).map(|x| Addr::branch(i, x)))
    }
}

/// The fiber of `f` over `v`.
pub fn fiber(f: &FnRep, v: &Value) -> Result<FiberMap> {
    let mut points = Vec::new();
    let mut pieces = Vec::new();
    fiber_pieces(&f.domain, f.codomain, &f.body, v, &mut Vec::new(), &mut points, &mut pieces)?;
    if !points.is_empty() {
        pieces.insert(0, Piece::Points(points));
    }
    let space = sum_of(pieces.iter().map(Piece::space).collect());
    Ok(FiberMap { space, pieces })
}

fn fiber_pieces(
    t: &Space,
    cod: Codomain,
    b: &Body,
    v: &Value,
    path: &mut Vec<Seg>,
    points: &mut Vec<Addr>,
    pieces: &mut Vec<Piece>,
) -> Result<()> {
    match (t, b) {
        (Space::Pt, Body::Pt(x)) => {
            if x == v {
                points.push(wrap(path, Addr::Here));
            }
        }
        (Space::Fin(_), Body::Fin(xs)) => {
            for (i, x) in xs.iter().enumerate() {
                if x == v {
                    points.push(wrap(path, Addr::Idx(i as u64)));
                }
            }
        }
        (Space::Omega, Body::Omega { exc, tail }) => match tail {
            Tail::Const(c) if c == v => {
                let skip = exc.iter().filter(|(_, x)| *x != v).map(|(i, _)| *i).collect();
                pieces.push(Piece::OmegaRest(path.clone(), skip));
            }
            _ => {
                let mut hits: Vec<u64> = exc.iter().filter(|(_, x)| *x == v).map(|(i, _)| *i).collect();
                if let Tail::Approach(a) = tail {
                    if let Some(n) = a.cluster().exponent_of(cod, v).and_then(|e| e.checked_sub(a.base())) {
                        if !exc.contains_key(&n) {
                            hits.push(n);
                        }
                    }
                }
                hits.sort_unstable();
                points.extend(hits.into_iter().map(|i| wrap(path, Addr::Idx(i))));
            }
        },
        (Space::Sum(ts), Body::Sum(bs)) => {
            for (i, (t, b)) in ts.iter().zip(bs).enumerate() {
                path.push(Seg::Branch(i));
                fiber_pieces(t, cod, b, v, path, points, pieces)?;
                path.pop();
            }
        }
        (Space::Lim(u), Body::Lim { inf, exc, tail }) => {
            let skip: BTreeSet<u64> = exc.keys().copied().collect();
            match tail {
                Tail::Const(c) if c == v => {
                    if inf == v {
                        pieces.push(Piece::LimRest(path.clone(), (**u).clone(), skip));
                    } else if **u == Space::Pt {
                        pieces.push(Piece::CopiesRest(path.clone(), skip));
                    } else {
                        return Err(Error::UnsupportedFn(format!(
                            "fiber over {v} is an infinite sum of {u} without its limit"
                        )));
                    }
                }
                _ => {
                    if inf == v {
                        points.push(wrap(path, Addr::Inf));
                    }
                    if let Tail::Approach(a) = tail {
                        if let Some(n) = a.cluster().exponent_of(cod, v).and_then(|e| e.checked_sub(a.base())) {
                            if !skip.contains(&n) {
                                let mut p = path.clone();
                                p.push(Seg::Copy(n));
                                if **u == Space::Pt {
                                    points.push(wrap(&p, Addr::Here));
                                } else {
                                    pieces.push(Piece::Whole(p, (**u).clone()));
                                }
                            }
                        }
                    }
                }
            }
            for (n, sub) in exc {
                path.push(Seg::Copy(*n));
                fiber_pieces(u, cod, sub, v, path, points, pieces)?;
                path.pop();
            }
        }
        _ => return Err(Error::ShapeMismatch(format!("body does not fit {t}"))),
    }
    Ok(())
}

/// The image of `f`, its special values with fibers, and its clusters.
pub fn image_profile(f: &FnRep) -> Result<ImageProfile> {
    let m = ImageModel::new(f);
    let special =
        m.specials.iter().map(|v| Ok((v.clone(), Fiber::of(fiber(f, v)?.space)))).collect::<Result<Vec<_>>>()?;
    let clusters = m
        .keys()
        .map(|(k, t)| ClusterInfo {
            key: k.clone(),
            threshold: t,
            limit: k.limit(f.codomain),
            limit_attained: m.limit_attained(k).is_some(),
            families: m.families_of(k).count(),
            fiber: Fiber::of(m.generic_space(k)),
        })
        .collect();
    Ok(ImageProfile { special, clusters })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::value::Approach;

    fn lim_pt(inf: Value, exc: Vec<(u64, Value)>, tail: Tail, cod: Codomain) -> FnRep {
        let exc = exc.into_iter().map(|(n, v)| (n, Body::Pt(v))).collect();
        FnRep::new(Space::tower(1), cod, Body::Lim { inf, exc, tail }).unwrap()
    }

    #[test]
    fn free_positions() {
        let skip: BTreeSet<u64> = [0, 2, 3].into();
        let firsts: Vec<u64> = (0..4).map(|j| nth_free(&skip, j)).collect();
        assert_eq!(firsts, vec![1, 4, 5, 6]);
        for j in 0..10 {
            assert_eq!(rank_free(&skip, nth_free(&skip, j)), Some(j));
        }
        assert_eq!(rank_free(&skip, 2), None);
    }

    #[test]
    fn profile_of_identity_like() {
        let f = lim_pt(Value::Omega, vec![], Tail::Approach(Approach::Up { base: 0 }), Codomain::OmegaPlusOne);
        let p = image_profile(&f).unwrap();
        assert_eq!(p.special, vec![(Value::Omega, Fiber::of(Space::Pt))]);
        assert_eq!(p.clusters.len(), 1);
        assert_eq!(p.clusters[0].threshold, 0);
        assert!(p.clusters[0].limit_attained);
        assert_eq!(p.clusters[0].fiber.card, Card::Finite(1));
    }

    #[test]
    fn constant_fiber_is_everything() {
        let f = FnRep::constant(Space::tower(1), Codomain::Rationals, Value::rat(1, 2)).unwrap();
        let p = image_profile(&f).unwrap();
        assert_eq!(p.special.len(), 1);
        assert_eq!(p.special[0].1.card, Card::Aleph0);
        assert_eq!(p.special[0].1.space, Space::tower(1));
        assert!(p.clusters.is_empty());
    }

    #[test]
    fn exceptions_become_special() {
        let f = lim_pt(
            Value::Omega,
            vec![(0, Value::Nat(5)), (1, Value::Nat(5))],
            Tail::Approach(Approach::Up { base: 1 }),
            Codomain::OmegaPlusOne,
        );
        let m = ImageModel::new(&f);
        // copy 4 has value 5 as well, so the generic run starts past it
        assert_eq!(m.thresholds[&ClusterKey::Up], 6);
        let fb = fiber(&f, &Value::Nat(5)).unwrap();
        assert_eq!(fb.space, Space::Fin(3));
        for i in 0..3 {
            let a = fb.to_dom(&Addr::Idx(i)).unwrap();
            assert_eq!(f.eval(&a).unwrap(), Value::Nat(5));
            assert_eq!(fb.lift_dom(&a), Some(Addr::Idx(i)));
        }
    }

    #[test]
    fn fiber_round_trip_on_sums() {
        let f = FnRep::new(
            Space::Sum(vec![Space::tower(2), Space::Omega]),
            Codomain::Fin(3),
            Body::Sum(vec![
                Body::Lim {
                    inf: Value::Nat(0),
                    exc: [(1, super::super::constant_body(&Space::tower(1), &Value::Nat(2)).unwrap())].into(),
                    tail: Tail::Const(Value::Nat(0)),
                },
                Body::Omega { exc: [(0, Value::Nat(0)), (3, Value::Nat(1))].into(), tail: Tail::Const(Value::Nat(2)) },
            ]),
        )
        .unwrap();
        for v in 0..3 {
            let v = Value::Nat(v);
            let fb = fiber(&f, &v).unwrap();
            for p in crate::space::truncate(&fb.space, 4).points {
                let a = fb.to_dom(&p).unwrap();
                assert_eq!(f.eval(&a).unwrap(), v, "{p} -> {a}");
                assert_eq!(fb.lift_dom(&a), Some(p));
            }
        }
        assert_eq!(fiber(&f, &Value::Nat(2)).unwrap().space, Space::Sum(vec![Space::tower(1), Space::Omega]));
    }

    #[test]
    fn dyadic_thresholds_avoid_collisions() {
        use crate::value::{Approach, Sign};
        let half = BigRational::new(1.into(), 2.into());
        let f = FnRep::new(
            Space::Sum(vec![Space::Omega, Space::Omega]),
            Codomain::Rationals,
            Body::Sum(vec![
                Body::Omega {
                    exc: BTreeMap::new(),
                    tail: Tail::Approach(Approach::Dyadic {
                        center: BigRational::from_integer(0.into()),
                        sign: Sign::Plus,
                        base: 0,
                    }),
                },
                Body::Omega {
                    exc: BTreeMap::new(),
                    tail: Tail::Approach(Approach::Dyadic { center: half, sign: Sign::Minus, base: 0 }),
                },
            ]),
        )
        .unwrap();
        let m = ImageModel::new(&f);
        let mut seen = BTreeSet::new();
        for (k, t) in m.keys() {
            for e in t..t + 40 {
                assert!(seen.insert(k.value(Codomain::Rationals, e)));
                assert!(!m.specials.contains(&k.value(Codomain::Rationals, e)));
            }
        }
    }
}
