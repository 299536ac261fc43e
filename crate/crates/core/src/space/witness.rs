use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::{top_point, truncate, Addr, Space};
use crate::error::{Error, Result};
use crate::value::Closeness;

type AddrMap = Arc<dyn Fn(&Addr) -> Option<Addr> + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum WitnessKind {
    /// Built from per-summand placements with affine copy rules; exact.
    Pattern,
    /// An address transformer only checkable by verification at depth.
    Oracle,
}

/// An embedding of spaces given as an address map, with a readable
/// description of how summands are placed.
#[derive(Clone)]
pub struct SpaceEmbWitness {
    pub kind: WitnessKind,
    pub placements: Vec<String>,
    map: AddrMap,
}

impl fmt::Debug for SpaceEmbWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpaceEmbWitness").field("kind", &self.kind).field("placements", &self.placements).finish()
    }
}

impl Serialize for SpaceEmbWitness {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("SpaceEmbWitness", 2)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("placements", &self.placements)?;
        st.end()
    }
}

impl SpaceEmbWitness {
    pub fn new(
        kind: WitnessKind,
        placements: Vec<String>,
        map: impl Fn(&Addr) -> Option<Addr> + Send + Sync + 'static,
    ) -> Self {
        SpaceEmbWitness { kind, placements, map: Arc::new(map) }
    }

    pub fn identity() -> Self {
        Self::new(WitnessKind::Pattern, vec!["identity".into()], |a| Some(a.clone()))
    }

    pub fn empty() -> Self {
        Self::new(WitnessKind::Pattern, vec![], |_| None)
    }

    pub fn apply(&self, a: &Addr) -> Option<Addr> {
        (self.map)(a)
    }

    /// `other` after `self`.
    pub fn then(&self, other: &SpaceEmbWitness) -> SpaceEmbWitness {
        let (f, g) = (self.map.clone(), other.map.clone());
        let kind = if self.kind == WitnessKind::Pattern && other.kind == WitnessKind::Pattern {
            WitnessKind::Pattern
        } else {
            WitnessKind::Oracle
        };
        let mut placements = self.placements.clone();
        placements.push("then".into());
        placements.extend(other.placements.iter().cloned());
        SpaceEmbWitness { kind, placements, map: Arc::new(move |a| f(a).and_then(|b| g(&b))) }
    }

    /// The same map, undefined outside `keep`.
    pub fn restrict(&self, keep: impl Fn(&Addr) -> bool + Send + Sync + 'static) -> SpaceEmbWitness {
        let f = self.map.clone();
        SpaceEmbWitness {
            kind: self.kind,
            placements: self.placements.clone(),
            map: Arc::new(move |a| if keep(a) { f(a) } else { None }),
        }
    }

    /// Precomposes with a map on source addresses.
    pub fn after(&self, pre: impl Fn(&Addr) -> Option<Addr> + Send + Sync + 'static) -> SpaceEmbWitness {
        let f = self.map.clone();
        SpaceEmbWitness {
            kind: self.kind,
            placements: self.placements.clone(),
            map: Arc::new(move |a| pre(a).and_then(|b| f(&b))),
        }
    }
}

/// Unites two witnesses defined on closed pieces that meet exactly at `z`.
pub fn wedge_glue(w0: &SpaceEmbWitness, w1: &SpaceEmbWitness, z: &Addr) -> Result<SpaceEmbWitness> {
    let (a0, a1) = (w0.apply(z), w1.apply(z));
    if a0.is_none() || a0 != a1 {
        let show = |a: Option<Addr>| a.map_or_else(|| "undefined".to_string(), |a| a.to_string());
        return Err(Error::GlueMismatch(show(a0), show(a1)));
    }
    let (f, g) = (w0.map.clone(), w1.map.clone());
    let kind = if w0.kind == WitnessKind::Pattern && w1.kind == WitnessKind::Pattern {
        WitnessKind::Pattern
    } else {
        WitnessKind::Oracle
    };
    let mut placements = w0.placements.clone();
    placements.extend(w1.placements.iter().cloned());
    Ok(SpaceEmbWitness { kind, placements, map: Arc::new(move |a| f(a).or_else(|| g(a))) })
}

/// How deep `z` lies in the canonical neighbourhoods of `y`: level `k` means
/// `z` sits in copy `k` (or higher) of the `lim` whose limit point is `y`,
/// or in a pair with minimum `k` when `y` is the empty set of `pairs+`.
pub fn closeness(t: &Space, y: &Addr, z: &Addr) -> Closeness {
    if y == z {
        return Closeness::Equal;
    }
    match (t, y, z) {
        (Space::Sum(ts), Addr::Branch(i, a), Addr::Branch(j, b)) if i == j => match ts.get(*i) {
            Some(s) => closeness(s, a, b),
            None => Closeness::Far,
        },
        (Space::Lim(_), Addr::Inf, Addr::Copy(n, _)) => Closeness::Level(*n),
        (Space::Lim(u), Addr::Copy(i, a), Addr::Copy(j, b)) if i == j => closeness(u, a, b),
        (Space::PairsPlus, Addr::EmptySet, Addr::Pair(k, _)) => Closeness::Level(*k),
        _ => Closeness::Far,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerifyReport {
    pub passed: bool,
    pub depth: u64,
    pub checked_points: usize,
    pub failures: Vec<String>,
}

impl VerifyReport {
    pub(crate) fn new(depth: u64, checked_points: usize, failures: Vec<String>) -> Self {
        VerifyReport { passed: failures.is_empty(), depth, checked_points, failures }
    }
}

/// Images of the kept points of `truncate(s, d)`, with failures recorded for
/// undefined or invalid targets.
pub(crate) fn image_table(
    w: &SpaceEmbWitness,
    s: &Space,
    t: &Space,
    d: u64,
    failures: &mut Vec<String>,
) -> (super::Truncation, HashMap<Addr, Addr>) {
    let tr = truncate(s, d);
    let mut img = HashMap::new();
    let mut seen: HashMap<Addr, Addr> = HashMap::new();
    for p in &tr.points {
        match w.apply(p) {
            None => failures.push(format!("undefined at {p}")),
            Some(q) if !t.contains(&q) => failures.push(format!("{p} maps to invalid address {q}")),
            Some(q) => {
                if let Some(prev) = seen.insert(q.clone(), p.clone()) {
                    failures.push(format!("{prev} and {p} both map to {q}"));
                }
                img.insert(p.clone(), q);
            }
        }
    }
    (tr, img)
}

/// Copy index from which limit points are probed: convergence only
/// constrains the images of far-out copies, so the early part of each
/// truncated sequence may legitimately map elsewhere.
const PROBE_FROM: u64 = 1 << 10;

/// A point of copy `n` of the `lim` whose limit point is `x`.
fn probe(s: &Space, x: &Addr, n: u64) -> Option<Addr> {
    match (s, x) {
        (Space::Sum(ts), Addr::Branch(i, a)) => Some(Addr::branch(*i, probe(ts.get(*i)?, a, n)?)),
        (Space::Lim(u), Addr::Copy(i, a)) => Some(Addr::copy(*i, probe(u, a, n)?)),
        (Space::Lim(u), Addr::Inf) => Some(Addr::copy(n, top_point(u)?)),
        (Space::PairsPlus, Addr::EmptySet) => Some(Addr::Pair(n, n + 1)),
        _ => None,
    }
}

/// Copies of `p` with one index (a copy, a point of `fin` or `omega`, or a
/// pair) pushed out past `PROBE_FROM`.
fn pushed_out(s: &Space, p: &Addr) -> Vec<Addr> {
    fn go(p: &Addr, out: &mut Vec<Addr>, wrap: &dyn Fn(Addr) -> Addr) {
        match p {
            Addr::Branch(i, a) => go(a, out, &|b| wrap(Addr::branch(*i, b))),
            Addr::Copy(n, a) => {
                out.push(wrap(Addr::Copy(PROBE_FROM + n, a.clone())));
                go(a, out, &|b| wrap(Addr::copy(*n, b)));
            }
            Addr::Idx(n) => out.push(wrap(Addr::Idx(PROBE_FROM + n))),
            Addr::Pair(k, l) => out.push(wrap(Addr::Pair(PROBE_FROM + k, PROBE_FROM + l))),
            Addr::Here | Addr::Inf | Addr::EmptySet => {}
        }
    }
    let mut out = Vec::new();
    go(p, &mut out, &|b| b);
    out.retain(|q| s.contains(q));
    out
}

/// Checks a space witness on the truncation of `s` at depth `d`.
///
/// On the kept points the map must be defined, valid and injective. For each
/// kept limit point `x`, far-out probes of the sequence converging to `x`
/// must map ever deeper into the neighbourhoods of the image of `x`, while
/// kept points away from `x`, and their pushed-out variants, must stay
/// shallower than those probes.
pub fn verify_space_witness(w: &SpaceEmbWitness, s: &Space, t: &Space, d: u64) -> VerifyReport {
    let mut failures = Vec::new();
    let (tr, img) = image_table(w, s, t, d, &mut failures);
    let mut others: Vec<(Addr, Addr)> = img.iter().map(|(p, q)| (p.clone(), q.clone())).collect();
    for p in &tr.points {
        for q in pushed_out(s, p) {
            if let Some(sq) = w.apply(&q) {
                others.push((q, sq));
            }
        }
    }
    others.sort();
    for (x, _) in &tr.limits {
        let Some(sx) = img.get(x) else { continue };
        let mut levels = Vec::new();
        for i in 0..d.max(1) {
            let Some(p) = probe(s, x, PROBE_FROM + i) else { break };
            match w.apply(&p) {
                None => failures.push(format!("undefined at {p}")),
                Some(q) => match closeness(t, sx, &q) {
                    Closeness::Level(k) => levels.push(k),
                    _ => failures.push(format!("image of {p} does not approach image of {x}")),
                },
            }
        }
        if levels.len() < d.max(1) as usize {
            continue;
        }
        let reach = *levels.iter().min().expect("probed");
        levels.sort_unstable();
        if levels.iter().enumerate().any(|(i, &k)| k < i as u64) {
            failures.push(format!("images of the sequence approaching {x} stay away from {sx}"));
        }
        for (p, sp) in &others {
            if p == x || closeness(s, x, p) != Closeness::Far {
                continue;
            }
            if let Closeness::Level(k) = closeness(t, sx, sp) {
                if k >= reach {
                    failures
                        .push(format!("{p} lies away from {x} but its image merges into the neighbourhood of {sx}"));
                }
            }
        }
    }
    VerifyReport::new(d, tr.points.len(), failures)
}
