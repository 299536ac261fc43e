//! The embeddability decision between functions.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::classify::{continuity_check, Continuity};
use super::dclass;
use super::image::{fiber, image_profile, Card, FiberMap};
use super::{FnEmbWitness, FnRep, TauMap, ValueMap};
use crate::error::{Error, Result};
use crate::space::{space_embeds, Space, SpaceEmbWitness, WitnessKind};
use crate::value::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FnObstructionKind {
    ImageCardinality,
    LimitValueMismatch,
    FiberCardinality,
    FiberSpace,
    ConvergenceCapacity,
    ExhaustedAssignment,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FnObstruction {
    pub kind: FnObstructionKind,
    pub detail: String,
}

impl fmt::Display for FnObstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.kind, self.detail)
    }
}

#[derive(Debug, Clone)]
pub enum FnVerdict {
    Yes(FnEmbWitness),
    No(FnObstruction),
}

impl FnVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, FnVerdict::Yes(_))
    }

    pub fn witness(self) -> Option<FnEmbWitness> {
        match self {
            FnVerdict::Yes(w) => Some(w),
            FnVerdict::No(_) => None,
        }
    }
}

fn no(kind: FnObstructionKind, detail: String) -> FnVerdict {
    FnVerdict::No(FnObstruction { kind, detail })
}

/// Finite sums of `pt`, `fin(n)`, `omega` and `lim(pt)`.
pub fn in_class_d(t: &Space) -> bool {
    t.leaves().iter().all(|(_, s)| match s {
        Space::Pt | Space::Fin(_) | Space::Omega => true,
        Space::Lim(u) => **u == Space::Pt,
        _ => false,
    })
}

fn limit_points(t: &Space) -> usize {
    t.leaves().iter().filter(|(_, s)| matches!(s, Space::Lim(_))).count()
}

/// Decides `f <= g`: an embedding `sigma` of domains and an embedding `tau`
/// of images with `tau . f = g . sigma`.
///
/// Locally constant pairs on any domains are decided by matching values
/// whose fibers embed. Other pairs need both domains in the restricted
/// class, where a normal-form search is run.
pub fn fn_embeds(f: &FnRep, g: &FnRep) -> Result<FnVerdict> {
    let fc = continuity_check(f) == Continuity::Continuous;
    let gc = continuity_check(g) == Continuity::Continuous;
    if !fc && gc {
        return Ok(no(
            FnObstructionKind::ConvergenceCapacity,
            "the source is discontinuous and the target continuous".into(),
        ));
    }
    let dclass = in_class_d(&f.domain) && in_class_d(&g.domain);
    let lc = fc && gc && f.has_finite_image() && g.has_finite_image();
    if !lc && !dclass {
        return Err(Error::UnsupportedDomain(format!(
            "{} and {} are not both in the supported class",
            f.domain, g.domain
        )));
    }
    let (pf, pg) = (image_profile(f)?, image_profile(g)?);
    if pf.card() > pg.card() {
        return Ok(no(
            FnObstructionKind::ImageCardinality,
            format!("image of size {} does not fit into one of size {}", pf.card(), pg.card()),
        ));
    }
    if pf.max_fiber() > pg.max_fiber() {
        return Ok(no(
            FnObstructionKind::FiberCardinality,
            format!("a fiber of size {} has no target of that size (largest {})", pf.max_fiber(), pg.max_fiber()),
        ));
    }
    if lc {
        return locally_constant(f, g, &pf.special, &pg.special);
    }
    if limit_points(&f.domain) > limit_points(&g.domain) {
        return Ok(no(
            FnObstructionKind::ConvergenceCapacity,
            "the source has more limit points than the target".into(),
        ));
    }
    match dclass::search(f, g) {
        (Some(w), _) => Ok(FnVerdict::Yes(w)),
        (None, true) => Err(Error::SearchBudget(format!("{f} into {g}"))),
        (None, false) => Ok(no(
            FnObstructionKind::ExhaustedAssignment,
            "no assignment of limit points, clusters and special values fits".into(),
        )),
    }
}

/// Kuhn's augmenting paths; `adj[i]` lists the right vertices of left `i`.
pub(crate) fn bipartite_match(adj: &[Vec<usize>], right: usize) -> Option<Vec<usize>> {
    fn augment(i: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &j in &adj[i] {
            if seen[j] {
                continue;
            }
            seen[j] = true;
            if owner[j].is_none_or(|k| augment(k, adj, seen, owner)) {
                owner[j] = Some(i);
                return true;
            }
        }
        false
    }
    let mut owner = vec![None; right];
    for i in 0..adj.len() {
        if !augment(i, adj, &mut vec![false; right], &mut owner) {
            return None;
        }
    }
    let mut out = vec![0; adj.len()];
    for (j, o) in owner.iter().enumerate() {
        if let Some(i) = o {
            out[*i] = j;
        }
    }
    Some(out)
}

/// A witness for locally constant functions from a value matching: each
/// fiber goes into the fiber over its partner by a space witness.
pub(crate) fn fiberwise_witness(f: &FnRep, g: &FnRep, pairs: &[(Value, Value)]) -> Result<FnEmbWitness> {
    let mut parts: Vec<(Value, FiberMap, FiberMap, SpaceEmbWitness)> = Vec::new();
    let mut tau = ValueMap::new(f.codomain, g.codomain);
    let mut placements = Vec::new();
    for (q, w) in pairs {
        let (fq, gw) = (fiber(f, q)?, fiber(g, w)?);
        let sw = space_embeds(&fq.space, &gw.space)
            .witness()
            .ok_or_else(|| Error::InvalidWitness(format!("fiber over {q} does not embed into fiber over {w}")))?;
        placements.push(format!("fiber {q} ({}) -> fiber {w} ({})", fq.space, gw.space));
        tau.table.insert(q.clone(), w.clone());
        parts.push((q.clone(), fq, gw, sw));
    }
    let src = f.clone();
    let parts = Arc::new(parts);
    let sigma = SpaceEmbWitness::new(WitnessKind::Pattern, placements, move |a| {
        let v = src.eval(a).ok()?;
        let (_, fq, gw, sw) = parts.iter().find(|p| p.0 == v)?;
        gw.to_dom(&sw.apply(&fq.lift_dom(a)?)?)
    });
    Ok(FnEmbWitness { sigma, tau: TauMap::Map(tau) })
}

fn locally_constant(
    f: &FnRep,
    g: &FnRep,
    fs: &[(Value, super::Fiber)],
    gs: &[(Value, super::Fiber)],
) -> Result<FnVerdict> {
    let adj: Vec<Vec<usize>> = fs
        .iter()
        .map(|(_, a)| {
            (0..gs.len())
                .filter(|&j| gs[j].1.card >= a.card && space_embeds(&a.space, &gs[j].1.space).is_yes())
                .collect()
        })
        .collect();
    if let Some(i) = adj.iter().position(Vec::is_empty) {
        let kind = if fs[i].1.card == Card::Aleph0 || gs.iter().any(|(_, b)| b.card >= fs[i].1.card) {
            FnObstructionKind::FiberSpace
        } else {
            FnObstructionKind::FiberCardinality
        };
        return Ok(no(
            kind,
            format!("the fiber over {} ({}) embeds into no fiber of the target", fs[i].0, fs[i].1.space),
        ));
    }
    let Some(m) = bipartite_match(&adj, gs.len()) else {
        return Ok(no(FnObstructionKind::FiberSpace, "fibers cannot be matched injectively".into()));
    };
    let pairs: Vec<(Value, Value)> = m.iter().enumerate().map(|(i, &j)| (fs[i].0.clone(), gs[j].0.clone())).collect();
    Ok(FnVerdict::Yes(fiberwise_witness(f, g, &pairs)?))
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::super::{d0, d1, verify_fn_witness, Body, Tail};
    use super::*;
    use crate::value::{Approach, Codomain};
    use num_rational::BigRational;

    fn lim_pt(inf: Value, exc: &[(u64, Value)], tail: Tail, cod: Codomain) -> FnRep {
        let exc = exc.iter().map(|(n, v)| (*n, Body::Pt(v.clone()))).collect();
        FnRep::new(Space::tower(1), cod, Body::Lim { inf, exc, tail }).unwrap()
    }

    fn up(base: u64) -> Tail {
        Tail::Approach(Approach::Up { base })
    }

    fn assert_yes(f: &FnRep, g: &FnRep) {
        match fn_embeds(f, g).unwrap() {
            FnVerdict::Yes(w) => {
                let rep = verify_fn_witness(&w, f, g, 8);
                assert!(rep.passed, "{f} into {g}: {:?}", rep.failures);
            }
            FnVerdict::No(o) => panic!("{f} into {g}: {o}"),
        }
    }

    fn assert_no(f: &FnRep, g: &FnRep) -> FnObstructionKind {
        match fn_embeds(f, g).unwrap() {
            FnVerdict::Yes(w) => panic!("{f} into {g}: unexpected {:?}", w.sigma.placements),
            FnVerdict::No(o) => o.kind,
        }
    }

    #[test]
    fn constant_versus_injective() {
        let c = FnRep::constant(Space::tower(1), Codomain::Rationals, Value::rat(1, 2)).unwrap();
        let g = lim_pt(Value::Omega, &[], up(0), Codomain::OmegaPlusOne);
        assert_eq!(assert_no(&c, &g), FnObstructionKind::FiberCardinality);
        assert_eq!(assert_no(&g, &c), FnObstructionKind::ImageCardinality);
        assert_yes(&g, &g);
        assert_yes(&c, &c);
    }

    #[test]
    fn discontinuous_pairs() {
        assert_eq!(assert_no(&d0(), &d1()), FnObstructionKind::FiberCardinality);
        assert_eq!(assert_no(&d1(), &d0()), FnObstructionKind::ImageCardinality);
        assert_yes(&d0(), &d0());
        assert_yes(&d1(), &d1());
        let c = lim_pt(Value::Omega, &[], up(0), Codomain::OmegaPlusOne);
        assert_eq!(assert_no(&d0(), &c), FnObstructionKind::ConvergenceCapacity);
    }

    #[test]
    fn exceptions_and_shifts() {
        let g = lim_pt(Value::Omega, &[(0, Value::Nat(5))], up(1), Codomain::OmegaPlusOne);
        let f = lim_pt(Value::Omega, &[], up(0), Codomain::OmegaPlusOne);
        assert_yes(&f, &g);
        // copy 4 of g also takes the value 5
        assert_eq!(assert_no(&g, &f), FnObstructionKind::FiberCardinality);
        let g2 = lim_pt(Value::Omega, &[(0, Value::Nat(0))], up(1), Codomain::OmegaPlusOne);
        assert_yes(&g2, &f);
        assert_yes(&f, &g2);
        // the limit of the cluster is attained in g but the source value 7 is isolated
        let h = lim_pt(Value::Nat(7), &[], Tail::Const(Value::Nat(7)), Codomain::OmegaPlusOne);
        assert_eq!(assert_no(&h, &g), FnObstructionKind::FiberCardinality);
    }

    #[test]
    fn omega_streams_interleave() {
        use crate::value::Sign;
        let two = FnRep::new(
            Space::Sum(vec![Space::Omega, Space::Omega]),
            Codomain::Rationals,
            Body::Sum(vec![
                Body::Omega { exc: BTreeMap::new(), tail: up(1) },
                Body::Omega {
                    exc: BTreeMap::new(),
                    tail: Tail::Approach(Approach::Dyadic {
                        center: BigRational::from_integer(0.into()),
                        sign: Sign::Plus,
                        base: 2,
                    }),
                },
            ]),
        )
        .unwrap();
        let one =
            FnRep::new(Space::Omega, Codomain::Rationals, Body::Omega { exc: BTreeMap::new(), tail: up(0) }).unwrap();
        assert_yes(&two, &one);
        assert_yes(&one, &two);
    }

    #[test]
    fn locally_constant_matching() {
        let f = FnRep::new(
            Space::Sum(vec![Space::tower(2), Space::Pt]),
            Codomain::Fin(2),
            Body::Sum(vec![
                super::super::constant_body(&Space::tower(2), &Value::Nat(0)).unwrap(),
                Body::Pt(Value::Nat(1)),
            ]),
        )
        .unwrap();
        let g = FnRep::new(
            Space::Sum(vec![Space::tower(1), Space::tower(3)]),
            Codomain::Nat,
            Body::Sum(vec![
                super::super::constant_body(&Space::tower(1), &Value::Nat(4)).unwrap(),
                super::super::constant_body(&Space::tower(3), &Value::Nat(9)).unwrap(),
            ]),
        )
        .unwrap();
        assert_yes(&f, &g);
        assert_eq!(assert_no(&g, &f), FnObstructionKind::FiberSpace);
    }

    #[test]
    fn matching_finds_augmenting_paths() {
        let adj = vec![vec![0, 1], vec![0]];
        assert_eq!(bipartite_match(&adj, 2), Some(vec![1, 0]));
        assert_eq!(bipartite_match(&[vec![0], vec![0]], 2), None);
    }
}
