use serde::Serialize;

use super::{cb_rank, Addr, Space};

/// A finite subspace: the kept points, and for each kept limit point its
/// canonical approaching sequence restricted to kept points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Truncation {
    pub points: Vec<Addr>,
    pub limits: Vec<(Addr, Vec<Addr>)>,
}

impl Truncation {
    fn wrap(self, f: impl Fn(Addr) -> Addr) -> Truncation {
        Truncation {
            points: self.points.into_iter().map(&f).collect(),
            limits: self.limits.into_iter().map(|(x, seq)| (f(x), seq.into_iter().map(&f).collect())).collect(),
        }
    }

    fn extend(&mut self, other: Truncation) {
        self.points.extend(other.points);
        self.limits.extend(other.limits);
    }
}

/// A point of maximal CB level, used as the representative of each copy in
/// canonical approaching sequences.
pub fn top_point(t: &Space) -> Option<Addr> {
    match t {
        Space::Pt => Some(Addr::Here),
        Space::Fin(_) | Space::Omega => Some(Addr::Idx(0)),
        Space::Lim(_) => Some(Addr::Inf),
        Space::PairsPlus => Some(Addr::EmptySet),
        Space::Sum(ts) => {
            let r = cb_rank(t);
            let i = ts.iter().position(|s| cb_rank(s) == r)?;
            top_point(&ts[i]).map(|a| Addr::branch(i, a))
        }
        Space::Empty => None,
    }
}

/// Keeps the limit point and copies `0..d` under every `lim`, the first `d`
/// points of `omega`, and the pairs below `d+1` in `pairs+`.
pub fn truncate(t: &Space, d: u64) -> Truncation {
    let d = d.max(1);
    match t {
        Space::Pt => Truncation { points: vec![Addr::Here], limits: vec![] },
        Space::Fin(n) => Truncation { points: (0..u64::from(*n)).map(Addr::Idx).collect(), limits: vec![] },
        Space::Omega => Truncation { points: (0..d).map(Addr::Idx).collect(), limits: vec![] },
        Space::Empty => Truncation { points: vec![], limits: vec![] },
        Space::PairsPlus => {
            let mut points = vec![Addr::EmptySet];
            for l in 1..=d {
                points.extend((0..l).map(|k| Addr::Pair(k, l)));
            }
            let seq = (0..d).map(|n| Addr::Pair(n, n + 1)).collect();
            Truncation { points, limits: vec![(Addr::EmptySet, seq)] }
        }
        Space::Sum(ts) => {
            let mut out = Truncation { points: vec![], limits: vec![] };
            for (i, s) in ts.iter().enumerate() {
                out.extend(truncate(s, d).wrap(|a| Addr::branch(i, a)));
            }
            out
        }
        Space::Lim(u) => {
            let inner = truncate(u, d);
            let top = top_point(u).expect("lim arguments are nonempty");
            let mut out = Truncation { points: vec![], limits: vec![] };
            for n in 0..d {
                out.extend(inner.clone().wrap(|a| Addr::copy(n, a)));
            }
            out.points.push(Addr::Inf);
            let seq = (0..d).map(|n| Addr::copy(n, top.clone())).collect();
            out.limits.push((Addr::Inf, seq));
            out
        }
    }
}
