//! Deciding embeddability between space terms and building placement
//! witnesses.
//!
//! Both sides are read through their flattened summands. A source is a set
//! of compact towers `lim^(a-1)(pt)`, a stream of isolated points (finite
//! points when the compact part has rank 1, plus every `omega` summand) and
//! some `pairs+` summands. The target offers `n` towers of height `b`, its
//! `omega` and `pairs+` summands, and the copies of its first tower.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::{cb_rank, top_count, Addr, Space, SpaceEmbWitness, WitnessKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ObstructionKind {
    CBRankDrop,
    LimitCountExcess,
    LocalCompactnessMismatch,
    ExhaustedPatternSearch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Obstruction {
    pub kind: ObstructionKind,
    pub detail: String,
}

impl fmt::Display for Obstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.kind, self.detail)
    }
}

#[derive(Debug, Clone)]
pub enum SpaceVerdict {
    Yes(SpaceEmbWitness),
    No(Obstruction),
}

impl SpaceVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, SpaceVerdict::Yes(_))
    }

    pub fn witness(self) -> Option<SpaceEmbWitness> {
        match self {
            SpaceVerdict::Yes(w) => Some(w),
            SpaceVerdict::No(_) => None,
        }
    }
}

fn no(kind: ObstructionKind, detail: String) -> SpaceVerdict {
    SpaceVerdict::No(Obstruction { kind, detail })
}

/// The flattened summands of a term, grouped by kind.
struct Parts {
    compact: Vec<(Vec<usize>, Space)>,
    omega: Vec<Vec<usize>>,
    pairs: Vec<Vec<usize>>,
    /// The compact summands as one term.
    kterm: Space,
    rank: u32,
    tops: u64,
}

impl Parts {
    fn new(t: &Space) -> Parts {
        let mut compact = Vec::new();
        let (mut omega, mut pairs) = (Vec::new(), Vec::new());
        for (path, s) in t.leaves() {
            match s {
                Space::Omega => omega.push(path),
                Space::PairsPlus => pairs.push(path),
                _ => compact.push((path, s.clone())),
            }
        }
        let kterm = match compact.len() {
            0 => Space::Empty,
            1 => compact[0].1.clone(),
            _ => Space::Sum(compact.iter().map(|(_, s)| s.clone()).collect()),
        };
        let rank = cb_rank(&kterm);
        let tops = top_count(&kterm).unwrap_or(0);
        Parts { compact, omega, pairs, kterm, rank, tops }
    }

    /// Address inside `kterm` of a point of the `i`-th compact summand.
    fn to_k(&self, i: usize, a: Addr) -> Addr {
        if self.compact.len() == 1 {
            a
        } else {
            Addr::branch(i, a)
        }
    }

    fn lift_k(&self, a: Addr) -> Option<Addr> {
        if self.compact.len() == 1 {
            Some(a.under(&self.compact[0].0))
        } else {
            match a {
                Addr::Branch(i, sub) => Some(sub.under(&self.compact.get(i)?.0)),
                _ => None,
            }
        }
    }
}

/// `lim^(c-1)(pt)` addresses: an isolated point at the bottom of copy 0.
fn bottom(c: u32) -> Addr {
    (1..c).fold(Addr::Here, |a, _| Addr::copy(0, a))
}

/// The `l`-th isolated point of copy level 1 in a tower of height `c >= 2`.
fn tower_point(c: u32, l: u64) -> Addr {
    Addr::copy(l, bottom(c - 1))
}

/// Embeds a tower of height `a` into one of height `c >= a` via copy 0.
fn descend(x: Addr, a: u32, c: u32) -> Addr {
    (a..c).fold(x, |x, _| Addr::copy(0, x))
}

fn shift_copies(x: Addr, by: u64) -> Addr {
    match x {
        Addr::Copy(i, sub) => Addr::Copy(i + by, sub),
        x => x,
    }
}

/// `pairs+` into a tower of height `c >= 3`, rows starting at copy `off`.
fn pairs_into_tower(p: &Addr, c: u32, off: u64) -> Option<Addr> {
    match p {
        Addr::EmptySet => Some(Addr::Inf),
        Addr::Pair(k, l) => Some(Addr::copy(k + off, tower_point(c - 1, *l))),
        _ => None,
    }
}

/// Sends a point of a compact term to `(j, x)`: tower `j` of height
/// `cb_rank(s)` and address `x` in it. Lower-rank summands occupy the first
/// copies of tower 0.
fn to_tower(s: &Space, a: &Addr) -> Option<(u64, Addr)> {
    match (s, a) {
        (Space::Pt, Addr::Here) => Some((0, Addr::Here)),
        (Space::Fin(n), Addr::Idx(i)) if *i < u64::from(*n) => Some((*i, Addr::Here)),
        (Space::Lim(_), Addr::Inf) => Some((0, Addr::Inf)),
        (Space::Lim(u), Addr::Copy(i, y)) => {
            let (j, z) = to_tower(u, y)?;
            let k = top_count(u)?;
            Some((0, Addr::copy(i * k + j, z)))
        }
        (Space::Sum(ts), Addr::Branch(i, y)) => {
            let r = cb_rank(s);
            let target = ts.get(*i)?;
            let ri = cb_rank(target);
            let (j, z) = to_tower(target, y)?;
            if ri == r {
                let off: u64 = ts[..*i].iter().filter(|t| cb_rank(t) == r).filter_map(top_count).sum();
                let reserved: u64 = ts.iter().filter(|t| cb_rank(t) < r).filter_map(top_count).sum();
                let j = j + off;
                Some((j, if j == 0 { shift_copies(z, reserved) } else { z }))
            } else {
                let before: u64 = ts[..*i].iter().filter(|t| cb_rank(t) < r).filter_map(top_count).sum();
                Some((0, Addr::copy(before + j, descend(z, ri, r - 1))))
            }
        }
        _ => None,
    }
}

/// The `j`-th slot for a tower of height `c` inside a compact term.
fn from_tower(t: &Space, c: u32, j: u64, x: &Addr) -> Option<Addr> {
    match t {
        Space::Pt if c == 1 && j == 0 => Some(Addr::Here),
        Space::Fin(n) if c == 1 && j < u64::from(*n) => Some(Addr::Idx(j)),
        Space::Lim(u) => {
            let r = cb_rank(u) + 1;
            if c == r {
                if j != 0 {
                    return None;
                }
                match x {
                    Addr::Inf => Some(Addr::Inf),
                    Addr::Copy(i, y) => Some(Addr::copy(*i, from_tower(u, c - 1, 0, y)?)),
                    _ => None,
                }
            } else if c < r {
                Some(Addr::copy(j, from_tower(u, c, 0, x)?))
            } else {
                None
            }
        }
        Space::Sum(ts) => {
            let r = cb_rank(t);
            if c < r {
                let i = ts.iter().position(|s| cb_rank(s) > c)?;
                return Some(Addr::branch(i, from_tower(&ts[i], c, j, x)?));
            }
            if c > r {
                return None;
            }
            let mut j = j;
            for (i, s) in ts.iter().enumerate() {
                if cb_rank(s) != c {
                    continue;
                }
                let k = top_count(s)?;
                if j < k {
                    return Some(Addr::branch(i, from_tower(s, c, j, x)?));
                }
                j -= k;
            }
            None
        }
        _ => None,
    }
}

#[derive(Debug, Clone, Copy)]
enum TowerDst {
    FirstCopy(u64),
    Tower(u64),
    Pairs(usize),
}

#[derive(Debug, Clone, Copy)]
enum PairsDst {
    FirstCopy(u64),
    TowerTop(u64),
    Pairs(usize),
}

#[derive(Debug, Clone, Copy)]
enum StreamDst {
    Omega(usize),
    PairsRow(usize),
    FirstCopy(u64),
    TowerCopies(u64, u64),
    Points,
}

struct Plan {
    towers: Vec<TowerDst>,
    pairs: Vec<PairsDst>,
    stream: Option<StreamDst>,
    first_shift: u64,
}

/// Decides whether `s` embeds into `t`, returning a placement witness.
pub fn space_embeds(s: &Space, t: &Space) -> SpaceVerdict {
    use ObstructionKind::*;
    let (x, y) = (Parts::new(s), Parts::new(t));
    let (rs, rt) = (cb_rank(s), cb_rank(t));
    if rs > rt {
        return no(CBRankDrop, format!("rank {rs} > {rt}"));
    }
    let (a, m) = (x.rank, x.tops);
    let (b, n) = (y.rank, y.tops);
    let (px, py) = (x.pairs.len() as u64, y.pairs.len() as u64);
    let oy = !y.omega.is_empty();
    let stream_finite = if a <= 1 { m } else { 0 };
    let stream_infinite = !x.omega.is_empty();

    if a >= 3 {
        if b < a {
            return no(CBRankDrop, format!("compact rank {a} > {b}"));
        }
        if b == a && m > n {
            return no(LimitCountExcess, format!("{m} points of level {} but only {n}", a - 1));
        }
    } else if a == 2 && b <= 2 {
        if px > py {
            return no(LocalCompactnessMismatch, format!("{px} non-locally-compact points, {py} available"));
        }
        let cap = if b == 2 { n } else { 0 } + py - px;
        if m > cap {
            return no(LimitCountExcess, format!("{m} limit points of rank 1 but room for {cap}"));
        }
    }
    let p_hosts = match b {
        b if b >= 4 => u64::MAX,
        3 => n - if a == 3 { m } else { 0 },
        _ => 0,
    }
    .saturating_add(py);
    if px > p_hosts {
        return no(LocalCompactnessMismatch, format!("{px} pairs+ summands, {p_hosts} hosts"));
    }
    let used_tops = if a == 2 && b == 2 { m.min(n) } else { 0 };
    if stream_infinite && !(oy || py > 0 || b >= 3 || (b == 2 && used_tops < n)) {
        return no(ExhaustedPatternSearch, "no free limit point can absorb the discrete summand".into());
    }
    let target_infinite = oy || py > 0 || b >= 2;
    if stream_finite > 0 && !target_infinite && stream_finite > n {
        return no(LimitCountExcess, format!("{stream_finite} isolated points but only {n}"));
    }

    match plan(&x, &y, stream_finite, stream_infinite) {
        Some(p) => SpaceVerdict::Yes(build(x, y, p)),
        None => no(ExhaustedPatternSearch, "placement failed".into()),
    }
}

fn plan(x: &Parts, y: &Parts, stream_finite: u64, stream_infinite: bool) -> Option<Plan> {
    let (a, m) = (x.rank, x.tops);
    let (b, n) = (y.rank, y.tops);
    let mut first_copies = 0u64;
    let mut top_used = vec![false; n as usize];
    let mut pairs_used = vec![false; y.pairs.len()];
    let mut towers = Vec::new();
    let take_pairs = |pairs_used: &mut Vec<bool>| -> Option<usize> {
        let k = pairs_used.iter().position(|u| !u)?;
        pairs_used[k] = true;
        Some(k)
    };

    if a >= 2 {
        for j in 0..m {
            let dst = if b > a {
                first_copies += 1;
                TowerDst::FirstCopy(first_copies - 1)
            } else if b == a && j < n {
                top_used[j as usize] = true;
                TowerDst::Tower(j)
            } else if a == 2 {
                TowerDst::Pairs(take_pairs(&mut pairs_used)?)
            } else {
                return None;
            };
            towers.push(dst);
        }
    }

    let stream = if stream_finite == 0 && !stream_infinite {
        None
    } else if !y.omega.is_empty() {
        Some(StreamDst::Omega(0))
    } else if !y.pairs.is_empty() {
        Some(StreamDst::PairsRow(0))
    } else if b >= 3 {
        first_copies += 1;
        Some(StreamDst::FirstCopy(first_copies - 1))
    } else if b == 2 {
        match top_used.iter().position(|u| !u) {
            Some(j) => {
                top_used[j] = true;
                Some(StreamDst::TowerCopies(j as u64, if j == 0 { first_copies } else { 0 }))
            }
            None if !stream_infinite => {
                let off = first_copies;
                first_copies += stream_finite;
                Some(StreamDst::TowerCopies(0, off))
            }
            None => return None,
        }
    } else if b == 1 && !stream_infinite && stream_finite <= n {
        Some(StreamDst::Points)
    } else {
        return None;
    };

    let mut pairs = Vec::new();
    for _ in 0..x.pairs.len() {
        let dst = if b >= 4 {
            first_copies += 1;
            PairsDst::FirstCopy(first_copies - 1)
        } else if let (3, Some(j)) = (b, top_used.iter().position(|u| !u)) {
            top_used[j] = true;
            PairsDst::TowerTop(j as u64)
        } else {
            PairsDst::Pairs(take_pairs(&mut pairs_used)?)
        };
        pairs.push(dst);
    }
    let first_shift = if a == b && a >= 2 { first_copies } else { 0 };
    Some(Plan { towers, pairs, stream, first_shift })
}

fn build(x: Parts, y: Parts, plan: Plan) -> SpaceEmbWitness {
    let (a, b) = (x.rank, y.rank);
    let mut placements = Vec::new();
    for (j, d) in plan.towers.iter().enumerate() {
        placements.push(format!("tower {j} of height {a} -> {d:?}"));
    }
    for (k, d) in plan.pairs.iter().enumerate() {
        placements.push(format!("pairs+ summand {k} -> {d:?}"));
    }
    if let Some(d) = &plan.stream {
        placements.push(format!("isolated stream -> {d:?}"));
    }
    if plan.first_shift > 0 {
        placements.push(format!("tower 0: copy n -> copy n+{}", plan.first_shift));
    }
    let x = Arc::new(x);
    let y = Arc::new(y);
    let finite_points = if a <= 1 { x.tops } else { 0 };
    let omegas = x.omega.len() as u64;

    let map = move |addr: &Addr| -> Option<Addr> {
        let y_tower = |j: u64, t: &Addr| y.lift_k(from_tower(&y.kterm, b, j, t)?);
        let y_first = |c: u64, t: Addr| y_tower(0, &Addr::copy(c, t));
        let stream = |i: u64| -> Option<Addr> {
            match plan.stream? {
                StreamDst::Omega(k) => Some(Addr::Idx(i).under(&y.omega[k])),
                StreamDst::PairsRow(k) => Some(Addr::Pair(0, i + 2).under(&y.pairs[k])),
                StreamDst::FirstCopy(c) => y_first(c, tower_point(b - 1, i)),
                StreamDst::TowerCopies(j, off) => y_tower(j, &Addr::copy(off + i, bottom(b - 1))),
                StreamDst::Points => y_tower(i, &Addr::Here),
            }
        };
        for (ci, (path, _)) in x.compact.iter().enumerate() {
            if let Some(sub) = addr.strip(path) {
                let (j, z) = to_tower(&x.kterm, &x.to_k(ci, sub.clone()))?;
                if a <= 1 {
                    return stream(j);
                }
                return match plan.towers.get(j as usize)? {
                    TowerDst::FirstCopy(c) => y_first(*c, descend(z, a, b - 1)),
                    TowerDst::Tower(k) => {
                        let z = if *k == 0 { shift_copies(z, plan.first_shift) } else { z };
                        y_tower(*k, &z)
                    }
                    TowerDst::Pairs(k) => {
                        let p = match z {
                            Addr::Inf => Addr::EmptySet,
                            Addr::Copy(i, _) => Addr::Pair(i, i + 1),
                            _ => return None,
                        };
                        Some(p.under(&y.pairs[*k]))
                    }
                };
            }
        }
        for (e, path) in x.omega.iter().enumerate() {
            if let Some(Addr::Idx(i)) = addr.strip(path) {
                return stream(finite_points + i * omegas + e as u64);
            }
        }
        for (k, path) in x.pairs.iter().enumerate() {
            if let Some(p) = addr.strip(path) {
                return match plan.pairs[k] {
                    PairsDst::FirstCopy(c) => y_first(c, pairs_into_tower(p, b - 1, 0)?),
                    PairsDst::TowerTop(j) => {
                        let off = if j == 0 { first_copies_of(&plan) } else { 0 };
                        y_tower(j, &pairs_into_tower(p, 3, off)?)
                    }
                    PairsDst::Pairs(q) => {
                        let moved = match p {
                            Addr::EmptySet => Addr::EmptySet,
                            Addr::Pair(k, l) => Addr::Pair(k + 1, l + 1),
                            _ => return None,
                        };
                        Some(moved.under(&y.pairs[q]))
                    }
                };
            }
        }
        None
    };
    SpaceEmbWitness::new(WitnessKind::Pattern, placements, map)
}

/// Copies of the first target tower handed out as sub-slots.
fn first_copies_of(plan: &Plan) -> u64 {
    let towers = plan.towers.iter().filter(|d| matches!(d, TowerDst::FirstCopy(_))).count() as u64;
    let stream = matches!(plan.stream, Some(StreamDst::FirstCopy(_))) as u64;
    towers + stream
}

#[cfg(test)]
mod tests {
    use super::super::verify_space_witness;
    use super::*;

    fn yes(s: &Space, t: &Space) {
        match space_embeds(s, t) {
            SpaceVerdict::Yes(w) => {
                for d in 1..=6 {
                    let r = verify_space_witness(&w, s, t, d);
                    assert!(r.passed, "{s} -> {t} at depth {d}: {:?}", r.failures);
                }
            }
            SpaceVerdict::No(o) => panic!("{s} -> {t}: {o}"),
        }
    }

    fn no_with(s: &Space, t: &Space, kind: ObstructionKind) {
        match space_embeds(s, t) {
            SpaceVerdict::No(o) => assert_eq!(o.kind, kind, "{s} -> {t}"),
            SpaceVerdict::Yes(_) => panic!("{s} -> {t} should fail"),
        }
    }

    #[test]
    fn worked_examples() {
        yes(&Space::tower(1), &Space::tower(2));
        no_with(&Space::tower(2), &Space::tower(1), ObstructionKind::CBRankDrop);
        yes(&Space::tower(1), &Space::PairsPlus);
        let w = space_embeds(&Space::tower(1), &Space::PairsPlus).witness().unwrap();
        assert_eq!(w.apply(&Addr::copy(3, Addr::Here)), Some(Addr::Pair(3, 4)));
        assert_eq!(w.apply(&Addr::Inf), Some(Addr::EmptySet));
    }

    #[test]
    fn discrete_needs_a_free_limit() {
        let s = Space::Sum(vec![Space::tower(1), Space::Omega]);
        no_with(&s, &Space::tower(1), ObstructionKind::ExhaustedPatternSearch);
        yes(&s, &Space::Sum(vec![Space::tower(1), Space::tower(1)]));
        yes(&s, &Space::tower(2));
        yes(&Space::Sum(vec![Space::tower(2), Space::Omega, Space::Fin(2)]), &Space::tower(2));
    }

    #[test]
    fn pairs_plus_rules() {
        no_with(&Space::PairsPlus, &Space::tower(1), ObstructionKind::LocalCompactnessMismatch);
        no_with(
            &Space::PairsPlus,
            &Space::Sum(vec![Space::tower(1), Space::Omega]),
            ObstructionKind::LocalCompactnessMismatch,
        );
        yes(&Space::PairsPlus, &Space::PairsPlus);
        yes(&Space::PairsPlus, &Space::tower(2));
        yes(&Space::Sum(vec![Space::PairsPlus, Space::PairsPlus]), &Space::tower(3));
        no_with(
            &Space::Sum(vec![Space::PairsPlus, Space::PairsPlus]),
            &Space::tower(2),
            ObstructionKind::LocalCompactnessMismatch,
        );
        yes(&Space::Sum(vec![Space::PairsPlus, Space::Omega, Space::tower(1)]), &Space::tower(2));
        yes(&Space::Sum(vec![Space::tower(1), Space::tower(1)]), &Space::Sum(vec![Space::tower(1), Space::PairsPlus]));
    }

    #[test]
    fn mixed_sums() {
        let s = Space::Sum(vec![
            Space::lim(Space::Sum(vec![Space::tower(1), Space::Fin(2)])),
            Space::Fin(3),
            Space::tower(1),
        ]);
        yes(&s, &s);
        yes(&s, &Space::tower(3));
        yes(&s, &Space::Sum(vec![Space::tower(2), Space::tower(2)]));
        yes(&Space::Fin(3), &Space::Sum(vec![Space::Pt, Space::Fin(2)]));
        no_with(&Space::Fin(4), &Space::Sum(vec![Space::Pt, Space::Fin(2)]), ObstructionKind::LimitCountExcess);
        yes(&Space::Sum(vec![Space::Fin(3), Space::Omega]), &Space::PairsPlus);
    }

    #[test]
    fn simple_rule() {
        for a in 1..=4u32 {
            for b in 1..=4u32 {
                for m in 1..=3u64 {
                    for n in 1..=3u64 {
                        let s = Space::Sum((0..m).map(|_| Space::tower(a - 1)).chain([Space::Pt]).collect());
                        let t = Space::Sum((0..n).map(|_| Space::tower(b - 1)).chain([Space::Pt]).collect());
                        let expect = a < b || (a == b && m <= n);
                        assert_eq!(space_embeds(&s, &t).is_yes(), expect, "{s} -> {t}");
                        if expect {
                            yes(&s, &t);
                        }
                    }
                }
            }
        }
    }
}
