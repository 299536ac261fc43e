//! Function embedding witnesses and their verification at depth.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::FnRep;
use crate::error::Result;
use crate::space::{truncate, verify_space_witness, Addr, Space, SpaceEmbWitness, VerifyReport};
use crate::value::{ClusterKey, Codomain, Value};

/// Anything that can be evaluated at addresses of a space term.
pub trait Evaluate: Send + Sync {
    fn domain(&self) -> &Space;
    fn codomain(&self) -> Codomain;
    fn eval(&self, a: &Addr) -> Result<Value>;
}

impl Evaluate for FnRep {
    fn domain(&self) -> &Space {
        &self.domain
    }

    fn codomain(&self) -> Codomain {
        self.codomain
    }

    fn eval(&self, a: &Addr) -> Result<Value> {
        FnRep::eval(self, a)
    }
}

/// Sends `from` at exponent `e >= from_exp` to `to` at exponent
/// `offset + stride * (e - from_exp)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterRule {
    pub from: ClusterKey,
    pub from_exp: u64,
    pub to: ClusterKey,
    pub offset: u64,
    pub stride: u64,
}

impl ClusterRule {
    pub fn target_exp(&self, e: u64) -> u64 {
        self.offset + self.stride * (e - self.from_exp)
    }
}

impl fmt::Display for ClusterRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}[e >= {}] -> {}[{} + {}(e - {})]",
            self.from, self.from_exp, self.to, self.offset, self.stride, self.from_exp
        )
    }
}

/// A map between images: a finite table plus affine rules on clusters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValueMap {
    pub source: Codomain,
    pub target: Codomain,
    pub table: BTreeMap<Value, Value>,
    pub rules: Vec<ClusterRule>,
}

impl ValueMap {
    pub fn new(source: Codomain, target: Codomain) -> ValueMap {
        ValueMap { source, target, table: BTreeMap::new(), rules: Vec::new() }
    }

    pub fn apply(&self, v: &Value) -> Option<Value> {
        if let Some(w) = self.table.get(v) {
            return Some(w.clone());
        }
        self.rules.iter().find_map(|r| {
            let e = r.from.exponent_of(self.source, v)?;
            (e >= r.from_exp).then(|| r.to.value(self.target, r.target_exp(e)))
        })
    }

    /// Failures of injectivity or of continuity in either direction that
    /// can be read off the table and rules.
    pub fn structural_failures(&self, samples: u64) -> Vec<String> {
        let mut out = Vec::new();
        let mut seen: HashMap<Value, Value> = HashMap::new();
        let mut note = |from: Value, to: Value, out: &mut Vec<String>| {
            if let Some(prev) = seen.insert(to.clone(), from.clone()) {
                if prev != from {
                    out.push(format!("tau sends both {prev} and {from} to {to}"));
                }
            }
        };
        for (k, v) in &self.table {
            note(k.clone(), v.clone(), &mut out);
        }
        for r in &self.rules {
            for e in r.from_exp..r.from_exp + samples {
                let v = r.from.value(self.source, e);
                let w = r.to.value(self.target, r.target_exp(e));
                if self.apply(&v).as_ref() != Some(&w) {
                    out.push(format!("rule {r} is shadowed at {v}"));
                }
                note(v, w, &mut out);
            }
            let lim = r.from.limit(self.source);
            let tlim = r.to.limit(self.target);
            if let Some(t) = lim.as_ref().and_then(|l| self.table.get(l)) {
                if tlim.as_ref() != Some(t) {
                    out.push(format!("values of {} converge to a point sent to {t}, images do not", r.from));
                }
            }
            if let Some(tl) = &tlim {
                for (k, v) in &self.table {
                    if v == tl && lim.as_ref() != Some(k) {
                        out.push(format!(
                            "images of {} converge to tau({k}) but the values do not converge to {k}",
                            r.from
                        ));
                    }
                }
            }
        }
        out
    }
}

impl Serialize for ValueMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("ValueMap", 2)?;
        let table: Vec<[String; 2]> = self.table.iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect();
        let rules: Vec<String> = self.rules.iter().map(ToString::to_string).collect();
        st.serialize_field("table", &table)?;
        st.serialize_field("rules", &rules)?;
        st.end()
    }
}

type ValueFn = Arc<dyn Fn(&Value) -> Option<Value> + Send + Sync>;

#[derive(Clone)]
pub enum TauMap {
    Map(ValueMap),
    Oracle(ValueFn),
}

impl TauMap {
    pub fn apply(&self, v: &Value) -> Option<Value> {
        match self {
            TauMap::Map(m) => m.apply(v),
            TauMap::Oracle(f) => f(v),
        }
    }
}

impl fmt::Debug for TauMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TauMap::Map(m) => m.fmt(f),
            TauMap::Oracle(_) => write!(f, "Oracle"),
        }
    }
}

impl Serialize for TauMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            TauMap::Map(m) => m.serialize(s),
            TauMap::Oracle(_) => s.serialize_str("oracle"),
        }
    }
}

/// A pair `(sigma, tau)` with `tau . f = g . sigma`.
#[derive(Debug, Clone, Serialize)]
pub struct FnEmbWitness {
    pub sigma: SpaceEmbWitness,
    pub tau: TauMap,
}

impl FnEmbWitness {
    /// The witness for `f <= h` obtained from witnesses for `f <= g` and
    /// `g <= h`.
    pub fn then(&self, other: &FnEmbWitness) -> FnEmbWitness {
        let (t0, t1) = (self.tau.clone(), other.tau.clone());
        FnEmbWitness {
            sigma: self.sigma.then(&other.sigma),
            tau: TauMap::Oracle(Arc::new(move |v| t0.apply(v).and_then(|w| t1.apply(&w)))),
        }
    }
}

pub type FnVerifyReport = VerifyReport;

/// Checks `w` on the truncation of the domain of `f` at depth `d`: sigma is
/// an embedding there, the square commutes, tau is injective on the values
/// met, and (for table witnesses) tau respects convergence of clusters.
pub fn verify_fn_witness(w: &FnEmbWitness, f: &dyn Evaluate, g: &dyn Evaluate, d: u64) -> FnVerifyReport {
    let mut rep = verify_space_witness(&w.sigma, f.domain(), g.domain(), d);
    let mut failures = std::mem::take(&mut rep.failures);
    let tr = truncate(f.domain(), d);
    let mut tau_seen: HashMap<Value, Value> = HashMap::new();
    for p in &tr.points {
        let Some(q) = w.sigma.apply(p) else { continue };
        let fv = match f.eval(p) {
            Ok(v) => v,
            Err(e) => {
                failures.push(format!("source undefined at {p}: {e}"));
                continue;
            }
        };
        let gv = match g.eval(&q) {
            Ok(v) => v,
            Err(e) => {
                failures.push(format!("target undefined at {q}: {e}"));
                continue;
            }
        };
        match w.tau.apply(&fv) {
            None => failures.push(format!("tau undefined at {fv}")),
            Some(t) if t != gv => failures.push(format!("at {p}: tau({fv}) = {t} but g({q}) = {gv}")),
            Some(t) => {
                if let Some(prev) = tau_seen.insert(t.clone(), fv.clone()) {
                    if prev != fv {
                        failures.push(format!("tau sends both {prev} and {fv} to {t}"));
                    }
                }
            }
        }
    }
    if let TauMap::Map(m) = &w.tau {
        failures.extend(m.structural_failures(2 * d + 4));
    }
    VerifyReport::new(d, rep.checked_points, failures)
}
