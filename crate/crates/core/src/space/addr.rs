use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// The address of a point, following the shape of its term.
///
/// Printed as a slash path: `0/copy3/inf` is the limit point of copy 3
/// inside the first summand.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Addr {
    Here,
    Idx(u64),
    Branch(usize, Box<Addr>),
    Inf,
    Copy(u64, Box<Addr>),
    EmptySet,
    Pair(u64, u64),
}

impl Addr {
    pub fn copy(n: u64, a: Addr) -> Addr {
        Addr::Copy(n, Box::new(a))
    }

    pub fn branch(i: usize, a: Addr) -> Addr {
        Addr::Branch(i, Box::new(a))
    }

    /// Wraps `self` in the branch path `path`, outermost index first.
    pub fn under(self, path: &[usize]) -> Addr {
        path.iter().rev().fold(self, |a, &i| Addr::branch(i, a))
    }

    /// Strips the branch path `path`, if `self` lies under it.
    pub fn strip(&self, path: &[usize]) -> Option<&Addr> {
        let mut a = self;
        for &i in path {
            match a {
                Addr::Branch(j, sub) if *j == i => a = sub,
                _ => return None,
            }
        }
        Some(a)
    }

    /// Nesting depth; used to bound searches.
    pub fn depth(&self) -> usize {
        match self {
            Addr::Branch(_, a) | Addr::Copy(_, a) => 1 + a.depth(),
            _ => 0,
        }
    }
}

impl fmt::Display for Addr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Addr::Here => write!(f, "pt"),
            Addr::Idx(i) => write!(f, "{i}"),
            Addr::Branch(i, a) => write!(f, "{i}/{a}"),
            Addr::Inf => write!(f, "inf"),
            Addr::Copy(n, a) => write!(f, "copy{n}/{a}"),
            Addr::EmptySet => write!(f, "empty"),
            Addr::Pair(k, l) => write!(f, "pair{k}-{l}"),
        }
    }
}

impl serde::Serialize for Addr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for Addr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Addr> {
        let segs: Vec<&str> = s.trim().split('/').map(str::trim).collect();
        let bad = |col: usize, msg: &str| Error::Parse { line: 1, column: col + 1, message: msg.to_string() };
        let mut cols = Vec::with_capacity(segs.len());
        let mut c = 0;
        for seg in &segs {
            cols.push(c);
            c += seg.len() + 1;
        }
        let (last, init) = segs.split_last().expect("split yields a segment");
        let lc = *cols.last().expect("same length");
        let mut a = match *last {
            "pt" => Addr::Here,
            "inf" => Addr::Inf,
            "empty" => Addr::EmptySet,
            p if p.starts_with("pair") => {
                let (k, l) = p[4..].split_once('-').ok_or_else(|| bad(lc, "expected pair<k>-<l>"))?;
                let k = k.parse().map_err(|_| bad(lc, "bad pair index"))?;
                let l = l.parse().map_err(|_| bad(lc, "bad pair index"))?;
                if k >= l {
                    return Err(bad(lc, "pair needs k < l"));
                }
                Addr::Pair(k, l)
            }
            n => Addr::Idx(n.parse().map_err(|_| bad(lc, "expected a point segment"))?),
        };
        for (seg, col) in init.iter().zip(&cols).rev() {
            a = if let Some(n) = seg.strip_prefix("copy") {
                Addr::copy(n.parse().map_err(|_| bad(*col, "bad copy index"))?, a)
            } else {
                Addr::branch(seg.parse().map_err(|_| bad(*col, "expected copy<n> or a summand index"))?, a)
            };
        }
        Ok(a)
    }
}
