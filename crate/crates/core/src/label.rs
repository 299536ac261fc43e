//! Value labellings whose order implies embeddability of functions.
//!
//! `Lambda` labels each image value of a locally constant function by its
//! fiber. `Gamma` labels a continuous function on `lim(pt)` by whether a
//! value is taken at the limit point and by fiber size.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::func::{
    assignment_witness, continuity_check, fiber, image_profile, Card, ClusterRule, Continuity, FnEmbWitness, FnRep,
    SpecialTarget, TauMap, ValueMap,
};
use crate::space::{canonical_form, space_embeds, CanonicalSpace, Space};
use crate::value::{ClusterKey, Codomain, Value};

/// Labels for `Gamma`: `Limit(c)` is `(0, c)`, `Isolated(n)` is `(1, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum LabelL {
    Limit(Card),
    Isolated(u64),
    Star,
}

impl LabelL {
    /// Comparable only within the same variant.
    pub fn leq(&self, other: &LabelL) -> bool {
        match (self, other) {
            (LabelL::Limit(a), LabelL::Limit(b)) => a <= b,
            (LabelL::Isolated(a), LabelL::Isolated(b)) => a <= b,
            (LabelL::Star, LabelL::Star) => true,
            _ => false,
        }
    }
}

impl fmt::Display for LabelL {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LabelL::Limit(Card::Aleph0) => write!(f, "(0,w)"),
            LabelL::Limit(Card::Finite(n)) => write!(f, "(0,{n})"),
            LabelL::Isolated(n) => write!(f, "(1,{n})"),
            LabelL::Star => write!(f, "*"),
        }
    }
}

/// Generic values of one cluster key past a threshold share a label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TailLabel {
    #[serde(serialize_with = "as_string")]
    pub key: ClusterKey,
    pub threshold: u64,
    pub label: LabelL,
}

fn as_string<S: serde::Serializer, T: fmt::Display>(t: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&t.to_string())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum LabelMap {
    Gamma { codomain: Codomain, table: BTreeMap<Value, LabelL>, tail: Option<TailLabel> },
    Lambda { codomain: Codomain, table: BTreeMap<Value, CanonicalSpace> },
}

impl LabelMap {
    /// The label of `v` as text; `*` off the image.
    pub fn describe(&self, v: &Value) -> String {
        match self {
            LabelMap::Gamma { codomain, table, tail } => {
                if let Some(l) = table.get(v) {
                    return l.to_string();
                }
                match tail {
                    Some(t) if t.key.exponent_of(*codomain, v).is_some_and(|e| e >= t.threshold) => t.label.to_string(),
                    _ => LabelL::Star.to_string(),
                }
            }
            LabelMap::Lambda { table, .. } => table.get(v).map_or("*".into(), |c| c.to_space().to_string()),
        }
    }
}

impl fmt::Display for LabelMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries: Vec<String> = match self {
            LabelMap::Gamma { table, tail, .. } => table
                .iter()
                .map(|(v, l)| format!("{v} -> {l}"))
                .chain(tail.iter().map(|t| format!("{}[e >= {}] -> {}", t.key, t.threshold, t.label)))
                .collect(),
            LabelMap::Lambda { table, .. } => table.iter().map(|(v, c)| format!("{v} -> {}", c.to_space())).collect(),
        };
        write!(f, "{{{}}}", entries.join(", "))
    }
}

/// `Gamma_f` for a continuous `f` on `lim(pt)`.
pub fn gamma_label(f: &FnRep) -> Result<LabelMap> {
    if f.domain != Space::tower(1) {
        return Err(Error::UnsupportedDomain(format!("{} is not lim(pt)", f.domain)));
    }
    if let Continuity::Discontinuous(d) = continuity_check(f) {
        return Err(Error::NotContinuous(d.at.to_string()));
    }
    let lv = f.eval(&crate::space::Addr::Inf)?;
    let p = image_profile(f)?;
    let table = p
        .special
        .iter()
        .map(|(v, fb)| {
            let l = match (v == &lv, fb.card) {
                (true, c) => LabelL::Limit(c),
                (false, Card::Finite(n)) => LabelL::Isolated(n),
                (false, Card::Aleph0) => unreachable!("continuity keeps fibers away from the limit finite"),
            };
            (v.clone(), l)
        })
        .collect();
    let tail = p.clusters.first().map(|c| TailLabel {
        key: c.key.clone(),
        threshold: c.threshold,
        label: match c.fiber.card {
            Card::Finite(n) => LabelL::Isolated(n),
            Card::Aleph0 => LabelL::Limit(Card::Aleph0),
        },
    });
    Ok(LabelMap::Gamma { codomain: f.codomain, table, tail })
}

/// `Lambda_f` for a locally constant `f`.
pub fn lambda_label(f: &FnRep) -> Result<LabelMap> {
    if continuity_check(f) != Continuity::Continuous || !f.has_finite_image() {
        return Err(Error::NotLocallyConstant);
    }
    let p = image_profile(f)?;
    let table = p.special.iter().map(|(v, fb)| (v.clone(), canonical_form(&fb.space))).collect();
    Ok(LabelMap::Lambda { codomain: f.codomain, table })
}

/// Searches an image embedding `tau` that raises labels pointwise.
pub fn label_leq(l1: &LabelMap, l2: &LabelMap) -> Option<ValueMap> {
    match (l1, l2) {
        (
            LabelMap::Gamma { codomain: c1, table: t1, tail: k1 },
            LabelMap::Gamma { codomain: c2, table: t2, tail: k2 },
        ) => gamma_leq(*c1, t1, k1.as_ref(), *c2, t2, k2.as_ref()),
        (LabelMap::Lambda { codomain: c1, table: t1 }, LabelMap::Lambda { codomain: c2, table: t2 }) => {
            let left: Vec<(&Value, Space)> = t1.iter().map(|(v, c)| (v, c.to_space())).collect();
            let right: Vec<(&Value, Space)> = t2.iter().map(|(v, c)| (v, c.to_space())).collect();
            let adj: Vec<Vec<usize>> = left
                .iter()
                .map(|(_, a)| (0..right.len()).filter(|&j| space_embeds(a, &right[j].1).is_yes()).collect())
                .collect();
            let m = crate::func::bipartite_match(&adj, right.len())?;
            let mut tau = ValueMap::new(*c1, *c2);
            for (i, j) in m.into_iter().enumerate() {
                tau.table.insert(left[i].0.clone(), right[j].0.clone());
            }
            Some(tau)
        }
        _ => None,
    }
}

fn gamma_leq(
    c1: Codomain,
    t1: &BTreeMap<Value, LabelL>,
    k1: Option<&TailLabel>,
    c2: Codomain,
    t2: &BTreeMap<Value, LabelL>,
    k2: Option<&TailLabel>,
) -> Option<ValueMap> {
    let limit = |t: &BTreeMap<Value, LabelL>| {
        t.iter().find_map(|(v, l)| match l {
            LabelL::Limit(c) => Some((v.clone(), *c)),
            _ => None,
        })
    };
    let (lf, cf) = limit(t1)?;
    let (lg, cg) = limit(t2)?;
    if cf > cg || (k1.is_some() && k2.is_none()) {
        return None;
    }
    let isolated = |t: &BTreeMap<Value, LabelL>| -> Vec<(Value, u64)> {
        t.iter()
            .filter_map(|(v, l)| match l {
                LabelL::Isolated(n) => Some((v.clone(), *n)),
                _ => None,
            })
            .collect()
    };
    let fi = isolated(t1);
    let gi = isolated(t2);
    // right vertices: the isolated specials of g, then one generic slot per source value
    let slot_size = match k2.map(|k| k.label) {
        Some(LabelL::Isolated(n)) => n,
        _ => 0,
    };
    let adj: Vec<Vec<usize>> = fi
        .iter()
        .enumerate()
        .map(|(i, (_, n))| {
            let mut v: Vec<usize> = (0..gi.len()).filter(|&j| gi[j].1 >= *n).collect();
            if k2.is_some() && *n <= slot_size {
                v.push(gi.len() + i);
            }
            v
        })
        .collect();
    let m = crate::func::bipartite_match(&adj, gi.len() + fi.len())?;
    let mut tau = ValueMap::new(c1, c2);
    tau.table.insert(lf, lg);
    let mut slots = 0;
    for (i, j) in m.into_iter().enumerate() {
        let w = if j < gi.len() {
            gi[j].0.clone()
        } else {
            let k = k2.expect("slots exist only with a tail");
            let w = k.key.value(c2, k.threshold + slots);
            slots += 1;
            w
        };
        tau.table.insert(fi[i].0.clone(), w);
    }
    if let (Some(a), Some(b)) = (k1, k2) {
        tau.rules.push(ClusterRule {
            from: a.key.clone(),
            from_exp: a.threshold,
            to: b.key.clone(),
            offset: b.threshold + slots,
            stride: 1,
        });
    }
    Some(tau)
}

/// Builds `(sigma, tau)` from a label witness, fiber by fiber.
pub fn witness_from_labels(f: &FnRep, g: &FnRep, tau: &ValueMap) -> Result<FnEmbWitness> {
    let mismatch = |m: String| Error::LabelMismatch(m);
    match (lambda_label(f), lambda_label(g)) {
        (Ok(lf), Ok(lg)) if f.domain != Space::tower(1) || g.domain != Space::tower(1) || tau.rules.is_empty() => {
            for (q, w) in &tau.table {
                let (a, b) = (fiber(f, q)?.space, fiber(g, w)?.space);
                if lf.describe(q) == "*" || lg.describe(w) == "*" || !space_embeds(&a, &b).is_yes() {
                    return Err(mismatch(format!("fiber over {q} does not fit the fiber over {w}")));
                }
            }
            let pairs: Vec<(Value, Value)> = tau.table.iter().map(|(a, b)| (a.clone(), b.clone())).collect();
            return crate::func::fiberwise_witness(f, g, &pairs);
        }
        _ => {}
    }
    let (LabelMap::Gamma { table: t1, .. }, LabelMap::Gamma { table: t2, tail: k2, .. }) =
        (gamma_label(f)?, gamma_label(g)?)
    else {
        unreachable!("gamma_label builds gamma maps")
    };
    let mut targets = BTreeMap::new();
    for (q, l) in &t1 {
        let w = tau.apply(q).ok_or_else(|| mismatch(format!("tau undefined at {q}")))?;
        let lw = match t2.get(&w) {
            Some(x) => *x,
            None => k2.as_ref().map_or(LabelL::Star, |k| k.label),
        };
        if !l.leq(&lw) {
            return Err(mismatch(format!("label {l} at {q} exceeds {lw} at {w}")));
        }
        let t = if t2.contains_key(&w) {
            SpecialTarget::Special(w)
        } else {
            SpecialTarget::Generic(k2.as_ref().expect("non-special targets are generic").key.clone())
        };
        targets.insert(q.clone(), t);
    }
    let w = assignment_witness(f, g, targets).ok_or_else(|| mismatch("fibers do not fit".into()))?;
    match &w.tau {
        TauMap::Map(m) if m == tau => Ok(w),
        _ => Err(mismatch("the label map and the constructed map differ".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::{fn_embeds, verify_fn_witness, Body, Tail};
    use crate::space::Addr;
    use crate::value::Approach;

    fn lim_pt(inf: Value, exc: &[(u64, Value)], tail: Tail) -> FnRep {
        let exc = exc.iter().map(|(n, v)| (*n, Body::Pt(v.clone()))).collect();
        FnRep::new(Space::tower(1), Codomain::OmegaPlusOne, Body::Lim { inf, exc, tail }).unwrap()
    }

    #[test]
    fn gamma_examples() {
        let c = FnRep::constant(Space::tower(1), Codomain::OmegaPlusOne, Value::Nat(3)).unwrap();
        assert_eq!(gamma_label(&c).unwrap().to_string(), "{3 -> (0,w)}");
        let id = lim_pt(Value::Omega, &[], Tail::Approach(Approach::Up { base: 0 }));
        let g = gamma_label(&id).unwrap();
        assert_eq!(g.describe(&Value::Omega), "(0,1)");
        assert_eq!(g.describe(&Value::Nat(7)), "(1,1)");
        let h = lim_pt(Value::Nat(2), &[(0, Value::Nat(2))], Tail::Const(Value::Nat(2)));
        assert_eq!(gamma_label(&h).unwrap().describe(&Value::Nat(2)), "(0,w)");
        assert!(label_leq(&gamma_label(&c).unwrap(), &g).is_none());
        assert!(label_leq(&g, &g).is_some());
    }

    #[test]
    fn gamma_extra_fiber_point() {
        // value 1 at the limit with fiber sizes 2 and 3
        let tail = || {
            Tail::Approach(Approach::Dyadic {
                center: num_rational::BigRational::from_integer(1.into()),
                sign: crate::value::Sign::Minus,
                base: 1,
            })
        };
        let mk = |k: u64| {
            let exc = (0..k).map(|n| (n, Body::Pt(Value::int(1)))).collect();
            FnRep::new(Space::tower(1), Codomain::Rationals, Body::Lim { inf: Value::int(1), exc, tail: tail() })
                .unwrap()
        };
        let (f, g) = (mk(1), mk(2));
        let tau = label_leq(&gamma_label(&f).unwrap(), &gamma_label(&g).unwrap()).unwrap();
        let w = witness_from_labels(&f, &g, &tau).unwrap();
        assert_eq!(w.sigma.apply(&Addr::Inf), Some(Addr::Inf));
        for d in 1..=8 {
            assert!(verify_fn_witness(&w, &f, &g, d).passed);
        }
        assert!(label_leq(&gamma_label(&g).unwrap(), &gamma_label(&f).unwrap()).is_none());
        assert!(!fn_embeds(&g, &f).unwrap().is_yes());
    }

    #[test]
    fn lambda_examples() {
        let c = FnRep::constant(Space::tower(1), Codomain::Nat, Value::Nat(0)).unwrap();
        assert_eq!(lambda_label(&c).unwrap().to_string(), "{0 -> lim(pt)}");
        let f = FnRep::new(
            Space::Sum(vec![Space::tower(1), Space::Fin(3)]),
            Codomain::Nat,
            Body::Sum(vec![
                Body::Lim { inf: Value::Nat(0), exc: BTreeMap::new(), tail: Tail::Const(Value::Nat(0)) },
                Body::Fin(vec![Value::Nat(1); 3]),
            ]),
        )
        .unwrap();
        let lf = lambda_label(&f).unwrap();
        assert_eq!(lf.describe(&Value::Nat(1)), "fin(3)");
        let two =
            FnRep::constant(Space::Sum(vec![Space::tower(1), Space::tower(1)]), Codomain::Nat, Value::Nat(5)).unwrap();
        let tau = label_leq(&lambda_label(&c).unwrap(), &lambda_label(&two).unwrap()).unwrap();
        let w = witness_from_labels(&c, &two, &tau).unwrap();
        assert!(verify_fn_witness(&w, &c, &two, 6).passed);
        assert!(matches!(
            lambda_label(&lim_pt(Value::Omega, &[], Tail::Approach(Approach::Up { base: 0 }))),
            Err(Error::NotLocallyConstant)
        ));
        let one = FnRep::constant(Space::Fin(1), Codomain::Nat, Value::Nat(0)).unwrap();
        assert_eq!(lambda_label(&one).unwrap().to_string(), "{0 -> pt}");
    }

    #[test]
    fn label_order() {
        use LabelL::*;
        let all = [Limit(Card::Finite(1)), Limit(Card::Aleph0), Isolated(0), Isolated(3), Star];
        for a in &all {
            assert!(a.leq(a));
            for b in &all {
                let same = std::mem::discriminant(a) == std::mem::discriminant(b);
                if !same {
                    assert!(!a.leq(b));
                }
            }
        }
        assert!(Limit(Card::Finite(4)).leq(&Limit(Card::Aleph0)));
        assert!(!Isolated(2).leq(&Isolated(1)));
    }
}
