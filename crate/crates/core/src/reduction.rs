//! Graphs to functions on `w^2+1` and, through regular pseudo-embeddings,
//! on any term with infinitely many limit points.

use std::collections::BTreeSet;

use num_integer::Roots;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::func::{nth_free, rank_free, unwrap, verify_fn_witness, wrap, Evaluate, FnEmbWitness, Seg, TauMap};
use crate::graph::{ihom_decide, is_ihom, FiniteGraph, IhomMap};
use crate::space::{closeness, truncate, Addr, Space, SpaceEmbWitness, WitnessKind};
use crate::value::{Closeness, Codomain, Value};

/// Cantor pairing `(m+n)(m+n+1)/2 + n`.
pub fn pair0(m: u64, n: u64) -> Option<u64> {
    let s = u128::from(m) + u128::from(n);
    u64::try_from(s.checked_mul(s + 1)? / 2 + u128::from(n)).ok()
}

pub fn unpair0(z: u64) -> (u64, u64) {
    let z = u128::from(z);
    let w = ((8 * z + 1).sqrt() - 1) / 2;
    let n = z - w * (w + 1) / 2;
    ((w - n) as u64, n as u64)
}

/// Unordered pairs: `{m,n}` with `m < n` goes to `pair0(m, n-m-1)`.
pub fn pair1(m: u64, n: u64) -> Option<u64> {
    let (a, b) = (m.min(n), m.max(n));
    if a == b {
        return None;
    }
    pair0(a, b - a - 1)
}

pub fn unpair1(z: u64) -> (u64, u64) {
    let (a, d) = unpair0(z);
    (a, a + d + 1)
}

/// `2 * pair0(m, p) + i` for `i` in `{0, 1}`.
pub fn pair2(i: u64, m: u64, p: u64) -> Option<u64> {
    debug_assert!(i < 2);
    pair0(m, p)?.checked_mul(2)?.checked_add(i)
}

pub fn unpair2(z: u64) -> (u64, u64, u64) {
    let (m, p) = unpair0(z / 2);
    (z % 2, m, p)
}

fn overflow(a: &Addr) -> Error {
    Error::BadAddress(format!("{a} (code overflow)"))
}

/// The term for `w^2+1`.
pub fn omega_squared_plus_one() -> Space {
    Space::tower(2)
}

/// Evaluates `f^G` extended by `inf -> w` at an address of `w^2+1`.
pub fn graph_to_fn_eval(g: &FiniteGraph, a: &Addr) -> Result<Value> {
    match a {
        Addr::Inf => Ok(Value::Omega),
        Addr::Copy(_, inner) if **inner == Addr::Inf => Ok(Value::Omega),
        Addr::Copy(m, inner) => match &**inner {
            Addr::Copy(q, pt) if **pt == Addr::Here => {
                let (n, p) = unpair0(*q);
                let code = if g.has_edge(*m, n) && *m != n {
                    pair2(1, pair1(*m, n).ok_or_else(|| overflow(a))?, p)
                } else {
                    pair2(0, pair0(*m, n).ok_or_else(|| overflow(a))?, p)
                };
                code.map(Value::Nat).ok_or_else(|| overflow(a))
            }
            _ => Err(Error::BadAddress(a.to_string())),
        },
        _ => Err(Error::BadAddress(a.to_string())),
    }
}

/// A continuous `rho` from a closed piece `F_0` of a term onto `w^2+1`.
///
/// `F_0` is a limit point `x_inf` of some `lim(u)` with `u` infinite,
/// together with one copy of `lim(v)`, `v` finite, in every copy of `u`.
/// The copy of `lim(v)` inside copy `m` is sent onto column `m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularPE {
    space: Space,
    outer: Vec<Seg>,
    inner: Vec<Seg>,
    block: Vec<Addr>,
}

impl RegularPE {
    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn inf_preimage(&self) -> Option<Addr> {
        Some(wrap(&self.outer, Addr::Inf))
    }

    pub fn limit_preimage(&self, m: u64) -> Addr {
        wrap(&self.outer, Addr::copy(m, wrap(&self.inner, Addr::Inf)))
    }

    pub fn isolated_preimage(&self, m: u64, n: u64) -> Addr {
        let k = self.block.len() as u64;
        let b = self.block[(n % k) as usize].clone();
        wrap(&self.outer, Addr::copy(m, wrap(&self.inner, Addr::copy(n / k, b))))
    }

    /// `rho(a)`, or `None` off `F_0`.
    pub fn rho(&self, a: &Addr) -> Option<Addr> {
        match unwrap(&self.outer, a)? {
            Addr::Inf => Some(Addr::Inf),
            Addr::Copy(m, rest) => match unwrap(&self.inner, rest)? {
                Addr::Inf => Some(Addr::copy(*m, Addr::Inf)),
                Addr::Copy(j, b) => {
                    let i = self.block.iter().position(|x| x == &**b)? as u64;
                    let n = j.checked_mul(self.block.len() as u64)?.checked_add(i)?;
                    Some(Addr::copy(*m, Addr::copy(n, Addr::Here)))
                }
                _ => None,
            },
            _ => None,
        }
    }

    /// `rho` extended by `inf` off `F_0`.
    pub fn pi(&self, a: &Addr) -> Addr {
        self.rho(a).unwrap_or(Addr::Inf)
    }

    /// The three regularity clauses and the pseudo-embedding law, checked
    /// on the truncation at depth `d`.
    pub fn failures(&self, d: u64) -> Vec<String> {
        let mut out = Vec::new();
        let tr = truncate(&self.space, d);
        let images: Vec<(Addr, Addr)> = tr.points.iter().filter_map(|a| Some((a.clone(), self.rho(a)?))).collect();
        let count = |y: &Addr| images.iter().filter(|(_, z)| z == y).count();
        if count(&Addr::Inf) > 1 {
            out.push("more than one preimage of inf".into());
        }
        for m in 0..d {
            let y = Addr::copy(m, Addr::Inf);
            if count(&y) != 1 {
                out.push(format!("{y} has {} preimages", count(&y)));
            }
        }
        let mut seen = BTreeSet::new();
        for (a, z) in &images {
            if matches!(z, Addr::Copy(_, s) if matches!(**s, Addr::Copy(..))) && !seen.insert(z.clone()) {
                out.push(format!("isolated fiber over {z} has more than one point, e.g. {a}"));
            }
        }
        let w2 = omega_squared_plus_one();
        let climbs = |y: &Addr, zs: &[Addr], t: &Space| {
            let levels: Vec<Closeness> = zs.iter().map(|z| closeness(t, y, z)).collect();
            levels.windows(2).all(|w| match (w[0], w[1]) {
                (Closeness::Level(a), Closeness::Level(b)) => a < b,
                _ => false,
            })
        };
        for (x, seq) in &tr.limits {
            let Some(y) = self.rho(x) else { continue };
            let zs: Vec<Addr> = seq.iter().filter_map(|s| self.rho(s)).collect();
            if zs.len() > 1 && zs.windows(2).any(|w| w[0] != w[1]) && !climbs(&y, &zs, &w2) {
                out.push(format!("images of the sequence at {x} do not converge to {y}"));
            }
        }
        for m in 0..d {
            let xs: Vec<Addr> = (0..d).map(|n| self.isolated_preimage(m, n * self.block.len() as u64)).collect();
            if !climbs(&self.limit_preimage(m), &xs, &self.space) {
                out.push(format!("preimages of column {m} do not converge to its limit"));
            }
        }
        let lims: Vec<Addr> = (0..d).map(|m| self.limit_preimage(m)).collect();
        if let Some(x) = self.inf_preimage() {
            if !climbs(&x, &lims, &self.space) {
                out.push("preimages of the column limits do not converge to the preimage of inf".into());
            }
        }
        out
    }
}

impl Serialize for RegularPE {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("RegularPE", 4)?;
        st.serialize_field("space", &self.space.to_string())?;
        st.serialize_field("infPreimage", &self.inf_preimage())?;
        let lims: Vec<Addr> = (0..3).map(|m| self.limit_preimage(m)).collect();
        st.serialize_field("limitPreimages", &lims)?;
        let iso: Vec<Addr> = (0..3).map(|n| self.isolated_preimage(0, n)).collect();
        st.serialize_field("isolatedPreimagesOfColumn0", &iso)?;
        st.end()
    }
}

fn find_outer(t: &Space, path: &mut Vec<Seg>) -> Option<Space> {
    match t {
        Space::Lim(u) if u.is_infinite() => Some((**u).clone()),
        Space::Sum(ts) => ts.iter().enumerate().find_map(|(i, s)| {
            path.push(Seg::Branch(i));
            let r = find_outer(s, path);
            if r.is_none() {
                path.pop();
            }
            r
        }),
        _ => None,
    }
}

fn find_inner(u: &Space, path: &mut Vec<Seg>) -> Option<Space> {
    match u {
        Space::Lim(v) if !v.is_infinite() => Some((**v).clone()),
        Space::Lim(v) => {
            path.push(Seg::Copy(0));
            find_inner(v, path)
        }
        Space::Sum(ts) => {
            let i = ts.iter().position(Space::is_infinite)?;
            path.push(Seg::Branch(i));
            find_inner(&ts[i], path)
        }
        _ => None,
    }
}

/// A regular pseudo-embedding onto `w^2+1` from a closed piece of `t`.
pub fn build_regular_pe(t: &Space) -> Result<RegularPE> {
    t.validate()?;
    let mut outer = Vec::new();
    let u = find_outer(t, &mut outer).ok_or(Error::TooFewLimitPoints)?;
    let mut inner = Vec::new();
    let v = find_inner(&u, &mut inner).expect("an infinite compact term contains lim of a finite term");
    let block = truncate(&v, 1).points;
    Ok(RegularPE { space: t.clone(), outer, inner, block })
}

/// `f^G . pi`, or `f^G` itself on `w^2+1` when `pe` is absent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FnOracle {
    pub graph: FiniteGraph,
    pub pe: Option<RegularPE>,
    domain: Space,
}

impl FnOracle {
    pub fn on_omega_squared(graph: FiniteGraph) -> FnOracle {
        FnOracle { graph, pe: None, domain: omega_squared_plus_one() }
    }

    /// An address whose value is the code of `(m, q)` in column `m`.
    fn probe(&self, m: u64, q: u64) -> Addr {
        match &self.pe {
            Some(pe) => pe.isolated_preimage(m, q),
            None => Addr::copy(m, Addr::copy(q, Addr::Here)),
        }
    }
}

impl Evaluate for FnOracle {
    fn domain(&self) -> &Space {
        &self.domain
    }

    fn codomain(&self) -> Codomain {
        Codomain::OmegaPlusOne
    }

    fn eval(&self, a: &Addr) -> Result<Value> {
        self.domain.check_addr(a)?;
        match &self.pe {
            Some(pe) => graph_to_fn_eval(&self.graph, &pe.pi(a)),
            None => graph_to_fn_eval(&self.graph, a),
        }
    }
}

/// `f^G . pi` on `t`.
pub fn reduce_on_space(g: &FiniteGraph, t: &Space) -> Result<FnOracle> {
    let pe = build_regular_pe(t)?;
    Ok(FnOracle { graph: g.clone(), domain: t.clone(), pe: Some(pe) })
}

/// Reads the graph on `0..m` off the values of an oracle: `{a, b}` is an
/// edge iff the `b`-sequence at `a` and the `a`-sequence at `b` agree.
pub fn recover_graph(f: &FnOracle, m: u32) -> Result<FiniteGraph> {
    let mut edges = Vec::new();
    for (a, b) in FiniteGraph::all_pairs(m) {
        let (a64, b64) = (u64::from(a), u64::from(b));
        let x = f.eval(&f.probe(a64, pair0(b64, 0).expect("small")))?;
        let y = f.eval(&f.probe(b64, pair0(a64, 0).expect("small")))?;
        if x == y {
            edges.push((a, b));
        }
    }
    FiniteGraph::new(m, edges)
}

/// `h` extended to a bijection of the naturals.
struct Extended {
    h: IhomMap,
    dom: BTreeSet<u64>,
    rng: BTreeSet<u64>,
}

impl Extended {
    fn new(h: &IhomMap) -> Extended {
        Extended {
            h: h.clone(),
            dom: h.keys().map(|&v| u64::from(v)).collect(),
            rng: h.values().map(|&v| u64::from(v)).collect(),
        }
    }

    fn at(&self, v: u64) -> u64 {
        match u32::try_from(v).ok().and_then(|v| self.h.get(&v)) {
            Some(&w) => u64::from(w),
            None => nth_free(&self.rng, rank_free(&self.dom, v).expect("outside the domain")),
        }
    }

    fn inverse(&self, w: u64) -> u64 {
        match self.h.iter().find(|(_, &x)| u64::from(x) == w) {
            Some((&v, _)) => u64::from(v),
            None => nth_free(&self.dom, rank_free(&self.rng, w).expect("outside the range")),
        }
    }
}

/// The witness of `f^G <= f^H` built from an injective homomorphism.
///
/// Sequences follow `h` column by column. A non-edge sent onto an edge
/// cannot keep its own code, so its sequence moves to the odd slots of the
/// diagonal sequence of its column, whose own points then use the even
/// slots.
pub fn ihom_to_fn_witness(h: &IhomMap, g: &FiniteGraph, target: &FiniteGraph) -> Result<FnEmbWitness> {
    if !is_ihom(h, g, target) {
        return Err(Error::InvalidWitness("the map is not an injective homomorphism".into()));
    }
    let ext = Extended::new(h);
    let mut reroute = BTreeSet::new();
    for (x, y) in target.edges() {
        let (m, n) = (ext.inverse(u64::from(x)), ext.inverse(u64::from(y)));
        if !g.has_edge(m, n) {
            reroute.insert((m, n));
            reroute.insert((n, m));
        }
    }
    let split: BTreeSet<u64> = reroute.iter().map(|&(m, _)| m).collect();
    let ext = std::sync::Arc::new(ext);
    let (reroute, split) = (std::sync::Arc::new(reroute), std::sync::Arc::new(split));
    // target column and position code for the point with code (n, p) in column m
    let slot = {
        let (ext, reroute, split) = (ext.clone(), reroute.clone(), split.clone());
        move |m: u64, n: u64, p: u64| -> Option<(u64, u64)> {
            let em = ext.at(m);
            if m == n {
                let p = if split.contains(&m) { p.checked_mul(2)? } else { p };
                Some((em, p))
            } else if reroute.contains(&(m, n)) {
                Some((em, pair0(n, p)?.checked_mul(2)?.checked_add(1)?))
            } else {
                Some((ext.at(n), p))
            }
        }
    };
    let slot2 = slot.clone();
    let sigma = SpaceEmbWitness::new(
        WitnessKind::Oracle,
        vec!["column m to column h(m); non-edges sent onto edges move to the diagonal".into()],
        move |a| match a {
            Addr::Inf => Some(Addr::Inf),
            Addr::Copy(m, inner) => {
                let em = ext.at(*m);
                match &**inner {
                    Addr::Inf => Some(Addr::copy(em, Addr::Inf)),
                    Addr::Copy(q, pt) if **pt == Addr::Here => {
                        let (n, p) = unpair0(*q);
                        let (k, p) = slot(*m, n, p)?;
                        Some(Addr::copy(em, Addr::copy(pair0(k, p)?, Addr::Here)))
                    }
                    _ => None,
                }
            }
            _ => None,
        },
    );
    let ext2 = Extended::new(h);
    let tau = TauMap::Oracle(std::sync::Arc::new(move |v: &Value| match v {
        Value::Omega => Some(Value::Omega),
        Value::Nat(c) => {
            let (i, code, p) = unpair2(*c);
            if i == 1 {
                let (a, b) = unpair1(code);
                pair2(1, pair1(ext2.at(a), ext2.at(b))?, p).map(Value::Nat)
            } else {
                let (m, n) = unpair0(code);
                let (k, p) = slot2(m, n, p)?;
                pair2(0, pair0(ext2.at(m), k)?, p).map(Value::Nat)
            }
        }
        Value::Rat(_) => None,
    }));
    Ok(FnEmbWitness { sigma, tau })
}

/// Moves a witness on `w^2+1` to the term of `pe` through `rho`, fixing
/// every point outside `F_0`.
pub fn lift_witness(w: &FnEmbWitness, pe: &RegularPE) -> FnEmbWitness {
    let (pe, sigma) = (pe.clone(), w.sigma.clone());
    let lifted = SpaceEmbWitness::new(WitnessKind::Oracle, vec!["lift through rho".into()], move |a| {
        let Some(y) = pe.rho(a) else { return Some(a.clone()) };
        match sigma.apply(&y)? {
            Addr::Inf => pe.inf_preimage(),
            Addr::Copy(m, inner) => match *inner {
                Addr::Inf => Some(pe.limit_preimage(m)),
                Addr::Copy(n, _) => Some(pe.isolated_preimage(m, n)),
                _ => None,
            },
            _ => None,
        }
    });
    FnEmbWitness { sigma: lifted, tau: w.tau.clone() }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReductionReport {
    pub ihom: bool,
    /// Present when `ihom` holds.
    pub forward_witness_verified: Option<bool>,
    pub recovery_consistent: bool,
    pub depth: u64,
    /// The instance of `G <=ihom H` iff `f^G . pi <= f^H . pi` is confirmed.
    pub holds: bool,
    pub failures: Vec<String>,
}

/// Checks one instance of the reduction on the term `t` at depth `d`.
///
/// A `No` is not decided on the function side; the report re-reads both
/// graphs from the oracles and re-runs the graph decision on them.
pub fn reduction_check(g: &FiniteGraph, h: &FiniteGraph, t: &Space, d: u64) -> Result<ReductionReport> {
    let fg = reduce_on_space(g, t)?;
    let fh = reduce_on_space(h, t)?;
    let pe = fg.pe.clone().expect("built on t");
    let mut failures = pe.failures(d);
    let m = g.support().max(h.support());
    let (rg, rh) = (recover_graph(&fg, m)?, recover_graph(&fh, m)?);
    let same = |a: &FiniteGraph, b: &FiniteGraph| a.edges().eq(b.edges());
    let mut recovery_consistent = same(&rg, g) && same(&rh, h);
    if !recovery_consistent {
        failures.push("recovered graphs differ from the inputs".into());
    }
    let map = ihom_decide(g, h);
    let forward_witness_verified = match &map {
        Some(map) => {
            let w = lift_witness(&ihom_to_fn_witness(map, g, h)?, &pe);
            let r = verify_fn_witness(&w, &fg, &fh, d);
            failures.extend(r.failures);
            Some(r.passed)
        }
        None => {
            let again = ihom_decide(&rg, &rh).is_none();
            if !again {
                failures.push("recovered graphs are ihom-comparable".into());
            }
            recovery_consistent &= again;
            None
        }
    };
    let holds = failures.is_empty() && recovery_consistent && forward_witness_verified != Some(false);
    Ok(ReductionReport {
        ihom: map.is_some(),
        forward_witness_verified,
        recovery_consistent,
        depth: d,
        holds,
        failures,
    })
}
