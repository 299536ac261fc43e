//! Codomains, their values, and the injective convergent families used as
//! the only source of infinite images.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point of some codomain.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Nat(u64),
    /// The point at infinity of `omega+1`.
    Omega,
    Rat(BigRational),
}

impl Value {
    pub fn rat(n: i64, d: i64) -> Value {
        Value::Rat(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn int(n: i64) -> Value {
        Value::Rat(BigRational::from_integer(BigInt::from(n)))
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Nat(n) => write!(f, "{n}"),
            Value::Omega => write!(f, "w"),
            Value::Rat(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
        }
    }
}

impl Serialize for Value {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Codomain {
    /// Naturals together with the limit point `w`.
    OmegaPlusOne,
    /// Exact rationals with the order topology.
    Rationals,
    /// The discrete space `{0, ..., k-1}`.
    Fin(u64),
    /// The discrete naturals.
    Nat,
}

impl Codomain {
    pub fn contains(&self, v: &Value) -> bool {
        match (self, v) {
            (Codomain::OmegaPlusOne, Value::Nat(_) | Value::Omega) => true,
            (Codomain::Rationals, Value::Rat(_)) => true,
            (Codomain::Fin(k), Value::Nat(n)) => n < k,
            (Codomain::Nat, Value::Nat(_)) => true,
            _ => false,
        }
    }

    pub fn check(&self, v: &Value) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::BadValue(v.to_string(), self.to_string()))
        }
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self, Codomain::Fin(_) | Codomain::Nat)
    }

    /// How close `w` is to `v`: the largest `k` such that `w` lies in the
    /// k-th canonical neighbourhood of `v`.
    pub fn closeness(&self, v: &Value, w: &Value) -> Closeness {
        if v == w {
            return Closeness::Equal;
        }
        match (self, v, w) {
            (Codomain::OmegaPlusOne, Value::Omega, Value::Nat(k)) => Closeness::Level(*k),
            (Codomain::Rationals, Value::Rat(a), Value::Rat(b)) => {
                let d = (a - b).abs();
                if d > BigRational::one() {
                    return Closeness::Far;
                }
                // largest k with d <= 2^-k, i.e. floor(1/d) >= 2^k
                let q = d.denom().div_floor(d.numer());
                Closeness::Level(q.bits().saturating_sub(1))
            }
            _ => Closeness::Far,
        }
    }
}

impl fmt::Display for Codomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Codomain::OmegaPlusOne => write!(f, "omega+1"),
            Codomain::Rationals => write!(f, "Q"),
            Codomain::Fin(k) => write!(f, "fin({k})"),
            Codomain::Nat => write!(f, "nat"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Closeness {
    Equal,
    Level(u64),
    Far,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// An injective sequence indexed by copy number `n`.
///
/// `Up` yields `base + n`; in `omega+1` it converges to `w`, elsewhere it
/// diverges. `Dyadic` yields `center + sign * 2^-(n + base)` and converges
/// to `center`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Approach {
    Up { base: u64 },
    Dyadic { center: BigRational, sign: Sign, base: u64 },
}

impl Approach {
    pub fn base(&self) -> u64 {
        match self {
            Approach::Up { base } | Approach::Dyadic { base, .. } => *base,
        }
    }

    pub fn cluster(&self) -> ClusterKey {
        match self {
            Approach::Up { .. } => ClusterKey::Up,
            Approach::Dyadic { center, sign, .. } => ClusterKey::Dyadic { center: center.clone(), sign: *sign },
        }
    }

    pub fn exponent(&self, n: u64) -> u64 {
        self.base() + n
    }

    pub fn value(&self, cod: Codomain, n: u64) -> Value {
        self.cluster().value(cod, self.exponent(n))
    }

    pub fn limit(&self, cod: Codomain) -> Option<Value> {
        self.cluster().limit(cod)
    }

    pub fn check(&self, cod: Codomain) -> Result<()> {
        let ok = matches!(
            (self, cod),
            (Approach::Up { .. }, Codomain::OmegaPlusOne | Codomain::Nat | Codomain::Rationals)
                | (Approach::Dyadic { .. }, Codomain::Rationals)
        );
        if ok {
            Ok(())
        } else {
            Err(Error::BadValue(format!("{}", ApproachDisplay(self)), cod.to_string()))
        }
    }
}

pub(crate) struct ApproachDisplay<'a>(pub &'a Approach);

impl fmt::Display for ApproachDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Approach::Up { base } => write!(f, "approach(base={base})"),
            Approach::Dyadic { center, sign, base } => {
                write!(f, "approach(base={base}, sign={sign}, center={})", Value::Rat(center.clone()))
            }
        }
    }
}

/// Identifies the set an approach family lives in; two families with the
/// same key take the same value at the same exponent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClusterKey {
    Up,
    Dyadic { center: BigRational, sign: Sign },
}

impl ClusterKey {
    pub fn value(&self, cod: Codomain, e: u64) -> Value {
        match self {
            ClusterKey::Up => match cod {
                Codomain::Rationals => Value::Rat(BigRational::from_integer(BigInt::from(e))),
                _ => Value::Nat(e),
            },
            ClusterKey::Dyadic { center, sign } => {
                let step = BigRational::new(BigInt::one(), BigInt::one() << e);
                Value::Rat(match sign {
                    Sign::Plus => center + step,
                    Sign::Minus => center - step,
                })
            }
        }
    }

    pub fn limit(&self, cod: Codomain) -> Option<Value> {
        match self {
            ClusterKey::Up => (cod == Codomain::OmegaPlusOne).then_some(Value::Omega),
            ClusterKey::Dyadic { center, .. } => Some(Value::Rat(center.clone())),
        }
    }

    /// The exponent at which this cluster takes the value `v`, if any.
    pub fn exponent_of(&self, cod: Codomain, v: &Value) -> Option<u64> {
        match (self, v) {
            (ClusterKey::Up, Value::Nat(k)) if cod != Codomain::Rationals => Some(*k),
            (ClusterKey::Up, Value::Rat(q)) if cod == Codomain::Rationals => {
                if q.is_integer() && !q.is_negative() {
                    u64::try_from(q.to_integer()).ok()
                } else {
                    None
                }
            }
            (ClusterKey::Dyadic { center, sign }, Value::Rat(q)) => {
                let d = match sign {
                    Sign::Plus => q - center,
                    Sign::Minus => center - q,
                };
                if !d.is_positive() || !d.numer().is_one() {
                    return None;
                }
                let den = d.denom();
                let e = den.bits().checked_sub(1)?;
                (*den == (BigInt::one() << e)).then_some(e)
            }
            _ => None,
        }
    }
}

impl fmt::Display for ClusterKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClusterKey::Up => write!(f, "up"),
            ClusterKey::Dyadic { center, sign } => {
                write!(f, "dyadic({}{sign})", Value::Rat(center.clone()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn dyadic_exponent_roundtrip() {
        let key = ClusterKey::Dyadic { center: BigRational::zero(), sign: Sign::Minus };
        for e in 0..20 {
            let v = key.value(Codomain::Rationals, e);
            assert_eq!(key.exponent_of(Codomain::Rationals, &v), Some(e));
        }
        assert_eq!(key.exponent_of(Codomain::Rationals, &Value::rat(-3, 8)), None);
        assert_eq!(key.exponent_of(Codomain::Rationals, &Value::rat(1, 8)), None);
    }

    #[test]
    fn closeness_levels() {
        let q = Codomain::Rationals;
        assert_eq!(q.closeness(&Value::int(0), &Value::rat(1, 8)), Closeness::Level(3));
        assert_eq!(q.closeness(&Value::int(0), &Value::rat(3, 16)), Closeness::Level(2));
        assert_eq!(q.closeness(&Value::int(0), &Value::int(2)), Closeness::Far);
        let w = Codomain::OmegaPlusOne;
        assert_eq!(w.closeness(&Value::Omega, &Value::Nat(7)), Closeness::Level(7));
        assert_eq!(w.closeness(&Value::Nat(3), &Value::Nat(7)), Closeness::Far);
        assert_eq!(Codomain::Nat.closeness(&Value::Nat(3), &Value::Nat(3)), Closeness::Equal);
    }

    #[test]
    fn membership() {
        assert!(Codomain::Fin(2).contains(&Value::Nat(1)));
        assert!(!Codomain::Fin(2).contains(&Value::Nat(2)));
        assert!(!Codomain::Nat.contains(&Value::Omega));
        assert!(Codomain::OmegaPlusOne.contains(&Value::Omega));
    }
}
