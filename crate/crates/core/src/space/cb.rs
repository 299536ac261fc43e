use std::fmt;

use serde::Serialize;

use super::{Addr, Space};
use crate::error::{Error, Result};

/// The `k`-th Cantor–Bendixson derivative.
pub fn cb_derivative(t: &Space, k: u32) -> Space {
    if k == 0 {
        return t.clone();
    }
    match t {
        Space::Pt | Space::Fin(_) | Space::Omega | Space::Empty => Space::Empty,
        Space::PairsPlus => {
            if k == 1 {
                Space::Pt
            } else {
                Space::Empty
            }
        }
        Space::Lim(u) => match cb_derivative(u, k) {
            Space::Empty if k == cb_rank(u) => Space::Pt,
            Space::Empty => Space::Empty,
            d => Space::lim(d),
        },
        Space::Sum(ts) => {
            let mut parts: Vec<Space> = ts.iter().map(|s| cb_derivative(s, k)).filter(|s| *s != Space::Empty).collect();
            match parts.len() {
                0 => Space::Empty,
                1 => parts.pop().expect("one part"),
                _ => Space::Sum(parts),
            }
        }
    }
}

/// The least `k` with an empty `k`-th derivative.
pub fn cb_rank(t: &Space) -> u32 {
    match t {
        Space::Empty => 0,
        Space::Pt | Space::Fin(_) | Space::Omega => 1,
        Space::PairsPlus => 2,
        Space::Lim(u) => cb_rank(u) + 1,
        Space::Sum(ts) => ts.iter().map(cb_rank).max().unwrap_or(0),
    }
}

/// Number of points in the last nonempty derivative; `None` if infinite.
pub fn top_count(t: &Space) -> Option<u64> {
    match t {
        Space::Empty => Some(0),
        Space::Pt | Space::Lim(_) | Space::PairsPlus => Some(1),
        Space::Fin(n) => Some(u64::from(*n)),
        Space::Omega => None,
        Space::Sum(ts) => {
            let r = cb_rank(t);
            ts.iter().filter(|s| cb_rank(s) == r).map(top_count).try_fold(0u64, |acc, c| c.map(|c| acc + c))
        }
    }
}

/// The Cantor–Bendixson level of a point: the largest `k` with the point in
/// the `k`-th derivative.
pub fn cb_level(t: &Space, a: &Addr) -> Result<u32> {
    match (t, a) {
        (Space::Pt, Addr::Here) | (Space::Omega, Addr::Idx(_)) | (Space::PairsPlus, Addr::Pair(..)) => {
            t.check_addr(a).map(|_| 0)
        }
        (Space::Fin(_), Addr::Idx(_)) => t.check_addr(a).map(|_| 0),
        (Space::PairsPlus, Addr::EmptySet) => Ok(1),
        (Space::Lim(u), Addr::Inf) => Ok(cb_rank(u)),
        (Space::Lim(u), Addr::Copy(_, sub)) => cb_level(u, sub),
        (Space::Sum(ts), Addr::Branch(i, sub)) => match ts.get(*i) {
            Some(s) => cb_level(s, sub),
            None => Err(Error::BadAddress(a.to_string())),
        },
        _ => Err(Error::BadAddress(a.to_string())),
    }
}

/// Homeomorphism-invariant normal form: a compact summand homeomorphic to
/// `omega^(r-1)*m+1`, an optional infinite discrete summand, and a count of
/// `pairs+` summands.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CanonicalSpace {
    pub compact_parts: Vec<(u32, u64)>,
    pub omega_part: bool,
    pub pairs_plus_count: u64,
}

impl CanonicalSpace {
    pub fn is_empty(&self) -> bool {
        self.compact_parts.is_empty() && !self.omega_part && self.pairs_plus_count == 0
    }

    /// A representative term for this normal form.
    pub fn to_space(&self) -> Space {
        let mut parts = Vec::new();
        for &(r, m) in &self.compact_parts {
            if r == 1 {
                parts.push(if m == 1 { Space::Pt } else { Space::Fin(m as u32) });
            } else {
                parts.extend((0..m).map(|_| Space::tower(r - 1)));
            }
        }
        if self.omega_part {
            parts.push(Space::Omega);
        }
        parts.extend((0..self.pairs_plus_count).map(|_| Space::PairsPlus));
        match parts.len() {
            0 => Space::Empty,
            1 => parts.pop().expect("one part"),
            _ => Space::Sum(parts),
        }
    }
}

impl fmt::Display for CanonicalSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_space())
    }
}

pub fn canonical_form(t: &Space) -> CanonicalSpace {
    let leaves = t.leaves();
    let compact: Vec<&Space> = leaves.iter().map(|(_, s)| *s).filter(|s| s.is_compact()).collect();
    let omega_part = leaves.iter().any(|(_, s)| **s == Space::Omega);
    let pairs_plus_count = leaves.iter().filter(|(_, s)| **s == Space::PairsPlus).count() as u64;
    let r = compact.iter().map(|s| cb_rank(s)).max().unwrap_or(0);
    let m: u64 =
        compact.iter().filter(|s| cb_rank(s) == r).map(|s| top_count(s).expect("compact terms have finite tops")).sum();
    let absorbed = r == 1 && (omega_part || pairs_plus_count > 0);
    CanonicalSpace {
        compact_parts: if r == 0 || absorbed { vec![] } else { vec![(r, m)] },
        omega_part: omega_part && pairs_plus_count == 0,
        pairs_plus_count,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SingleLimitType {
    OmegaPlusOne,
    OmegaSumOmegaPlusOne,
    PairsPlusType,
}

/// Classifies a space with exactly one limit point.
pub fn classify_single_limit(t: &Space) -> Result<SingleLimitType> {
    if cb_derivative(t, 1) != Space::Pt {
        return Err(Error::NotSingleLimit);
    }
    let c = canonical_form(t);
    Ok(if c.pairs_plus_count > 0 {
        SingleLimitType::PairsPlusType
    } else if c.omega_part {
        SingleLimitType::OmegaSumOmegaPlusOne
    } else {
        SingleLimitType::OmegaPlusOne
    })
}
