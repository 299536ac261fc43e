//! Postcomposition with the standard embeddings between codomains.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{Body, FnRep, Tail};
use crate::error::{Error, Result};
use crate::value::{Approach, Codomain, Sign, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CodomainEmbedding {
    /// `n -> -2^-n`, `w -> 0`.
    OmegaPlusOneToQ,
    /// `i -> i`.
    FinToOmegaPlusOne,
    /// `n -> n`.
    NatToQ,
}

impl FromStr for CodomainEmbedding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "omega1-to-q" | "OmegaPlusOneToQ" => Ok(CodomainEmbedding::OmegaPlusOneToQ),
            "fin-to-omega1" | "FinToOmegaPlusOne" => Ok(CodomainEmbedding::FinToOmegaPlusOne),
            "nat-to-q" | "NatToQ" => Ok(CodomainEmbedding::NatToQ),
            _ => Err(Error::UnknownEmbedding(s.to_string())),
        }
    }
}

impl CodomainEmbedding {
    pub fn source_fits(&self, c: Codomain) -> bool {
        matches!(
            (self, c),
            (CodomainEmbedding::OmegaPlusOneToQ, Codomain::OmegaPlusOne)
                | (CodomainEmbedding::FinToOmegaPlusOne, Codomain::Fin(_))
                | (CodomainEmbedding::NatToQ, Codomain::Nat)
        )
    }

    pub fn target(&self) -> Codomain {
        match self {
            CodomainEmbedding::OmegaPlusOneToQ | CodomainEmbedding::NatToQ => Codomain::Rationals,
            CodomainEmbedding::FinToOmegaPlusOne => Codomain::OmegaPlusOne,
        }
    }

    pub fn apply(&self, v: &Value) -> Value {
        match (self, v) {
            (CodomainEmbedding::OmegaPlusOneToQ, Value::Omega) => Value::Rat(BigRational::zero()),
            (CodomainEmbedding::OmegaPlusOneToQ, Value::Nat(n)) => {
                Value::Rat(-BigRational::new(BigInt::one(), BigInt::one() << *n))
            }
            (CodomainEmbedding::NatToQ, Value::Nat(n)) => Value::Rat(BigRational::from_integer(BigInt::from(*n))),
            _ => v.clone(),
        }
    }

    fn approach(&self, a: &Approach) -> Approach {
        match (self, a) {
            (CodomainEmbedding::OmegaPlusOneToQ, Approach::Up { base }) => {
                Approach::Dyadic { center: BigRational::zero(), sign: Sign::Minus, base: *base }
            }
            _ => a.clone(),
        }
    }

    fn tail(&self, t: &Tail) -> Tail {
        match t {
            Tail::Const(v) => Tail::Const(self.apply(v)),
            Tail::Approach(a) => Tail::Approach(self.approach(a)),
        }
    }

    fn body(&self, b: &Body) -> Body {
        match b {
            Body::Pt(v) => Body::Pt(self.apply(v)),
            Body::Fin(vs) => Body::Fin(vs.iter().map(|v| self.apply(v)).collect()),
            Body::Omega { exc, tail } => {
                Body::Omega { exc: exc.iter().map(|(k, v)| (*k, self.apply(v))).collect(), tail: self.tail(tail) }
            }
            Body::Sum(bs) => Body::Sum(bs.iter().map(|b| self.body(b)).collect()),
            Body::Lim { inf, exc, tail } => Body::Lim {
                inf: self.apply(inf),
                exc: exc.iter().map(|(k, b)| (*k, self.body(b))).collect(),
                tail: self.tail(tail),
            },
        }
    }
}

/// `j . f`, kept in finite form.
pub fn postcompose(j: CodomainEmbedding, f: &FnRep) -> Result<FnRep> {
    if !j.source_fits(f.codomain) {
        return Err(Error::UnknownEmbedding(format!("{j:?} does not start at {}", f.codomain)));
    }
    FnRep::new(f.domain.clone(), j.target(), j.body(&f.body))
}
