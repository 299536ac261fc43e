//! Finite terms for countable scattered spaces and addresses of their points.

mod addr;
mod cb;
mod embed;
mod truncate;
mod witness;

pub use addr::Addr;
pub use cb::{
    canonical_form, cb_derivative, cb_level, cb_rank, classify_single_limit, top_count, CanonicalSpace, SingleLimitType,
};
pub use embed::{space_embeds, Obstruction, ObstructionKind, SpaceVerdict};
pub use truncate::{top_point, truncate, Truncation};
pub use witness::{closeness, verify_space_witness, wedge_glue, SpaceEmbWitness, VerifyReport, WitnessKind};

use std::fmt;

use crate::error::{Error, Result};

/// A term denoting a countable scattered Polish zero-dimensional space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Space {
    /// A single point.
    Pt,
    /// `n` isolated points, `n >= 1`.
    Fin(u32),
    /// The countably infinite discrete space.
    Omega,
    /// One-point compactification of countably many copies of a compact space.
    Lim(Box<Space>),
    /// Finite topological sum with at least two summands.
    Sum(Vec<Space>),
    /// Pairs of naturals plus the empty set, as a subspace of Cantor space.
    PairsPlus,
    /// The empty space; only produced by derivatives.
    Empty,
}

impl Space {
    pub fn lim(t: Space) -> Space {
        Space::Lim(Box::new(t))
    }

    /// The `k`-fold iterate `lim(lim(...lim(pt)))`; `tower(0)` is `pt`.
    pub fn tower(k: u32) -> Space {
        (0..k).fold(Space::Pt, |t, _| Space::lim(t))
    }

    /// Checks the structural invariants of a term.
    pub fn validate(&self) -> Result<()> {
        match self {
            Space::Fin(0) => Err(shape("fin(0) has no points")),
            Space::Sum(ts) if ts.len() < 2 => Err(shape("sum needs at least two summands")),
            Space::Sum(ts) => ts.iter().try_for_each(|t| match t {
                Space::Empty => Err(shape("empty inside sum")),
                t => t.validate(),
            }),
            Space::Lim(t) => {
                if !t.is_compact() || **t == Space::Empty {
                    return Err(shape("lim needs a compact nonempty argument"));
                }
                t.validate()
            }
            _ => Ok(()),
        }
    }

    pub fn is_compact(&self) -> bool {
        match self {
            Space::Pt | Space::Fin(_) | Space::Lim(_) | Space::Empty => true,
            Space::Omega | Space::PairsPlus => false,
            Space::Sum(ts) => ts.iter().all(Space::is_compact),
        }
    }

    pub fn is_locally_compact(&self) -> bool {
        match self {
            Space::PairsPlus => false,
            Space::Sum(ts) => ts.iter().all(Space::is_locally_compact),
            _ => true,
        }
    }

    /// Does `a` denote a point of this space?
    pub fn contains(&self, a: &Addr) -> bool {
        match (self, a) {
            (Space::Pt, Addr::Here) => true,
            (Space::Fin(n), Addr::Idx(i)) => *i < u64::from(*n),
            (Space::Omega, Addr::Idx(_)) => true,
            (Space::Lim(_), Addr::Inf) => true,
            (Space::Lim(t), Addr::Copy(_, sub)) => t.contains(sub),
            (Space::Sum(ts), Addr::Branch(i, sub)) => ts.get(*i).is_some_and(|t| t.contains(sub)),
            (Space::PairsPlus, Addr::EmptySet) => true,
            (Space::PairsPlus, Addr::Pair(k, l)) => k < l,
            _ => false,
        }
    }

    pub fn check_addr(&self, a: &Addr) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::BadAddress(a.to_string()))
        }
    }

    /// Does the term have infinitely many points?
    pub fn is_infinite(&self) -> bool {
        match self {
            Space::Pt | Space::Fin(_) | Space::Empty => false,
            Space::Sum(ts) => ts.iter().any(Space::is_infinite),
            _ => true,
        }
    }

    /// Number of points of a finite term.
    pub fn finite_size(&self) -> Option<u64> {
        match self {
            Space::Pt => Some(1),
            Space::Fin(n) => Some(u64::from(*n)),
            Space::Empty => Some(0),
            Space::Sum(ts) => ts.iter().map(Space::finite_size).sum(),
            _ => None,
        }
    }

    /// Flattens nested sums into their leaves, each paired with the branch
    /// path leading to it.
    pub(crate) fn leaves(&self) -> Vec<(Vec<usize>, &Space)> {
        fn go<'a>(t: &'a Space, path: &mut Vec<usize>, out: &mut Vec<(Vec<usize>, &'a Space)>) {
            match t {
                Space::Sum(ts) => {
                    for (i, s) in ts.iter().enumerate() {
                        path.push(i);
                        go(s, path, out);
                        path.pop();
                    }
                }
                Space::Empty => {}
                _ => out.push((path.clone(), t)),
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }
}

fn shape(msg: &str) -> Error {
    Error::ShapeMismatch(msg.to_string())
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::Pt => write!(f, "pt"),
            Space::Fin(n) => write!(f, "fin({n})"),
            Space::Omega => write!(f, "omega"),
            Space::Lim(t) => write!(f, "lim({t})"),
            Space::Sum(ts) => {
                write!(f, "sum(")?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
            Space::PairsPlus => write!(f, "pairs+"),
            Space::Empty => write!(f, "empty"),
        }
    }
}
