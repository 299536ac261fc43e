//! Embeddings between functions on finite sums of `pt`, `fin(n)`, `omega`
//! and `lim(pt)`.
//!
//! A function there is a point model: limit points with their tails, omega
//! summands with theirs, and isolated points. Values split into finitely
//! many specials and the generic runs of each cluster key. An embedding in
//! normal form pairs limit points injectively, sends each source key to one
//! target key by an affine exponent rule, routes each family to a target
//! family, and sends each special value to a special value or to a fresh
//! generic value. The fibers over specials are then filled greedily.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use super::image::{nth_free, rank_free, unwrap, wrap, ImageModel, Seg};
use super::{Body, ClusterRule, FnEmbWitness, FnRep, Tail, TauMap, ValueMap};
use crate::space::{Addr, Space, SpaceEmbWitness, WitnessKind};
use crate::value::{ClusterKey, Value};

#[derive(Debug, Clone)]
pub(crate) struct Comp {
    pub path: Vec<Seg>,
    /// The value at the limit point; `None` for an `omega` summand.
    pub inf: Option<Value>,
    pub skip: BTreeSet<u64>,
    pub tail: Tail,
    pub family: Option<usize>,
}

impl Comp {
    fn is_lim(&self) -> bool {
        self.inf.is_some()
    }

    fn const_value(&self) -> Option<&Value> {
        match &self.tail {
            Tail::Const(c) => Some(c),
            Tail::Approach(_) => None,
        }
    }

    /// The `pos`-th point outside the exceptions.
    fn tail_point(&self, pos: u64) -> Addr {
        let n = nth_free(&self.skip, pos);
        if self.is_lim() {
            wrap(&self.path, Addr::copy(n, Addr::Here))
        } else {
            wrap(&self.path, Addr::Idx(n))
        }
    }

    /// Position of a tail point among the points outside the exceptions.
    fn tail_rank(&self, a: &Addr) -> Option<u64> {
        match (self.is_lim(), a) {
            (true, Addr::Copy(n, s)) if **s == Addr::Here => rank_free(&self.skip, *n),
            (false, Addr::Idx(n)) => rank_free(&self.skip, *n),
            _ => None,
        }
    }

    fn index(&self, a: &Addr) -> Option<u64> {
        match (self.is_lim(), a) {
            (true, Addr::Copy(n, s)) if **s == Addr::Here => Some(*n),
            (false, Addr::Idx(n)) => Some(*n),
            _ => None,
        }
    }
}

/// The point model of a function on a domain of the restricted class.
#[derive(Debug, Clone)]
pub(crate) struct DModel {
    pub img: ImageModel,
    pub lims: Vec<Comp>,
    pub omegas: Vec<Comp>,
    /// Isolated points outside every generic run, by value.
    pub iso: BTreeMap<Value, Vec<Addr>>,
}

fn body_at<'a>(b: &'a Body, path: &[usize]) -> &'a Body {
    path.iter().fold(b, |b, &i| match b {
        Body::Sum(bs) => &bs[i],
        _ => b,
    })
}

impl DModel {
    pub fn new(f: &FnRep) -> DModel {
        let img = ImageModel::new(f);
        let cod = f.codomain;
        let mut lims = Vec::new();
        let mut omegas = Vec::new();
        let mut iso: BTreeMap<Value, Vec<Addr>> = BTreeMap::new();
        let family_at = |path: &[Seg]| img.families.iter().position(|fam| fam.path == path);
        for (bpath, leaf) in f.domain.leaves() {
            let path: Vec<Seg> = bpath.iter().map(|&i| Seg::Branch(i)).collect();
            let body = body_at(&f.body, &bpath);
            match (leaf, body) {
                (Space::Pt, Body::Pt(v)) => iso.entry(v.clone()).or_default().push(wrap(&path, Addr::Here)),
                (Space::Fin(_), Body::Fin(vs)) => {
                    for (i, v) in vs.iter().enumerate() {
                        iso.entry(v.clone()).or_default().push(wrap(&path, Addr::Idx(i as u64)));
                    }
                }
                (Space::Omega, Body::Omega { exc, tail }) => {
                    for (i, v) in exc {
                        iso.entry(v.clone()).or_default().push(wrap(&path, Addr::Idx(*i)));
                    }
                    omegas.push(Comp {
                        family: family_at(&path),
                        path,
                        inf: None,
                        skip: exc.keys().copied().collect(),
                        tail: tail.clone(),
                    });
                }
                (Space::Lim(_), Body::Lim { inf, exc, tail }) => {
                    for (n, b) in exc {
                        if let Body::Pt(v) = b {
                            iso.entry(v.clone()).or_default().push(wrap(&path, Addr::copy(*n, Addr::Here)));
                        }
                    }
                    lims.push(Comp {
                        family: family_at(&path),
                        path,
                        inf: Some(inf.clone()),
                        skip: exc.keys().copied().collect(),
                        tail: tail.clone(),
                    });
                }
                _ => {}
            }
        }
        for fam in &img.families {
            let t = img.thresholds[&fam.key];
            for e in fam.base..t {
                if let Some(n) = fam.index_of(e) {
                    iso.entry(fam.key.value(cod, e)).or_default().push(fam.member(n));
                }
            }
        }
        for v in iso.values_mut() {
            v.sort();
        }
        DModel { img, lims, omegas, iso }
    }

    fn iso_count(&self, v: &Value) -> usize {
        self.iso.get(v).map_or(0, Vec::len)
    }

    fn key_of(&self, fam: usize) -> &ClusterKey {
        &self.img.families[fam].key
    }

    fn family_count(&self, key: &ClusterKey) -> usize {
        self.img.families_of(key).count()
    }

    /// The component a family lives in.
    fn family_home(&self, fam: usize) -> Home {
        if let Some(i) = self.lims.iter().position(|c| c.family == Some(fam)) {
            Home::Lim(i)
        } else {
            Home::Omega(self.omegas.iter().position(|c| c.family == Some(fam)).expect("every family has a home"))
        }
    }

    fn comp(&self, h: Home) -> &Comp {
        match h {
            Home::Lim(i) => &self.lims[i],
            Home::Omega(j) => &self.omegas[j],
        }
    }

    fn const_hosts<'a>(&'a self, w: &'a Value) -> impl Iterator<Item = Home> + 'a {
        let om = self
            .omegas
            .iter()
            .enumerate()
            .filter(move |(_, c)| c.const_value() == Some(w))
            .map(|(j, _)| Home::Omega(j));
        let li =
            self.lims.iter().enumerate().filter(move |(_, c)| c.const_value() == Some(w)).map(|(i, _)| Home::Lim(i));
        om.chain(li)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Home {
    Lim(usize),
    Omega(usize),
}

/// Where a special value of the source goes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum SpecialTarget {
    Special(Value),
    /// A fresh generic value of the given target key.
    Generic(ClusterKey),
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Assignment {
    pub alpha: Vec<usize>,
    pub beta: BTreeMap<ClusterKey, ClusterKey>,
    pub iota: BTreeMap<usize, usize>,
    pub tau: BTreeMap<Value, SpecialTarget>,
}

impl Assignment {
    fn set_tau(&mut self, q: &Value, t: SpecialTarget) -> bool {
        if let Some(old) = self.tau.get(q) {
            return *old == t;
        }
        if matches!(t, SpecialTarget::Special(_)) && self.tau.values().any(|x| *x == t) {
            return false;
        }
        self.tau.insert(q.clone(), t);
        true
    }

    fn set_beta(&mut self, k: &ClusterKey, t: &ClusterKey) -> bool {
        match self.beta.get(k) {
            Some(old) => old == t,
            None => {
                self.beta.insert(k.clone(), t.clone());
                true
            }
        }
    }
}

struct Search<'a> {
    f: &'a DModel,
    g: &'a DModel,
    fr: &'a FnRep,
    gr: &'a FnRep,
    budget: u64,
}

/// Searches normal-form embeddings of `f` into `g`. `None` when there are
/// none, or when the search budget runs out (reported by the flag).
pub(crate) fn search(fr: &FnRep, gr: &FnRep) -> (Option<FnEmbWitness>, bool) {
    let f = DModel::new(fr);
    let g = DModel::new(gr);
    if f.lims.len() > g.lims.len() {
        return (None, false);
    }
    let mut s = Search { f: &f, g: &g, fr, gr, budget: 2_000_000 };
    let w = s.alpha(Assignment::default());
    (w, s.budget == 0)
}

impl Search<'_> {
    fn tick(&mut self) -> bool {
        if self.budget == 0 {
            return false;
        }
        self.budget -= 1;
        true
    }

    fn alpha(&mut self, asg: Assignment) -> Option<FnEmbWitness> {
        if !self.tick() {
            return None;
        }
        let i = asg.alpha.len();
        if i == self.f.lims.len() {
            return self.keys(asg);
        }
        let c = &self.f.lims[i];
        for (j, d) in self.g.lims.iter().enumerate() {
            if asg.alpha.contains(&j) {
                continue;
            }
            let mut a = asg.clone();
            let ok = match (&c.tail, &d.tail) {
                (Tail::Const(x), Tail::Const(y)) => a.set_tau(x, SpecialTarget::Special(y.clone())),
                (Tail::Approach(x), Tail::Approach(y)) => {
                    a.set_beta(&x.cluster(), &y.cluster()) && {
                        a.iota.insert(c.family.expect("approach tails are families"), d.family.expect("same"));
                        true
                    }
                }
                _ => false,
            };
            let ok = ok
                && a.set_tau(
                    c.inf.as_ref().expect("limit component"),
                    SpecialTarget::Special(d.inf.clone().expect("limit component")),
                );
            if !ok {
                continue;
            }
            a.alpha.push(j);
            if let Some(w) = self.alpha(a) {
                return Some(w);
            }
        }
        None
    }

    /// Families of the target that an omega family of the source may use.
    fn open_families(&self, asg: &Assignment, key: &ClusterKey) -> Vec<usize> {
        self.g
            .img
            .families_of(key)
            .filter(|(psi, _)| match self.g.family_home(*psi) {
                Home::Omega(_) => true,
                Home::Lim(j) => !asg.alpha.contains(&j),
            })
            .map(|(psi, _)| psi)
            .collect()
    }

    fn keys(&mut self, asg: Assignment) -> Option<FnEmbWitness> {
        if !self.tick() {
            return None;
        }
        // the first source family still lacking a target family
        let Some(phi) = (0..self.f.img.families.len()).find(|p| !asg.iota.contains_key(p)) else {
            return self.specials(asg);
        };
        let key = self.f.key_of(phi).clone();
        let targets: Vec<ClusterKey> = match asg.beta.get(&key) {
            Some(t) => vec![t.clone()],
            None => self.g.img.thresholds.keys().cloned().collect(),
        };
        for t in targets {
            let mut a = asg.clone();
            a.set_beta(&key, &t);
            if !self.clusters_agree(&a, true) {
                continue;
            }
            let taken: BTreeSet<usize> =
                a.iota.iter().filter(|(p, _)| *self.f.key_of(**p) == key).map(|(_, psi)| *psi).collect();
            for psi in self.open_families(&a, &t) {
                if taken.contains(&psi) {
                    continue;
                }
                let mut b = a.clone();
                b.iota.insert(phi, psi);
                if let Some(w) = self.keys(b) {
                    return Some(w);
                }
            }
        }
        None
    }

    fn free_infs(&self, asg: &Assignment, w: &Value) -> usize {
        self.g
            .lims
            .iter()
            .enumerate()
            .filter(|(j, d)| {
                d.inf.as_ref() == Some(w)
                    && !asg.alpha.contains(j)
                    && !d.family.is_some_and(|psi| asg.iota.values().any(|x| *x == psi))
            })
            .count()
    }

    fn fits(&self, asg: &Assignment, q: &Value, t: &SpecialTarget) -> bool {
        let f = self.f;
        let need_omega = f.omegas.iter().any(|c| c.const_value() == Some(q));
        let c = f.iso_count(q);
        match t {
            SpecialTarget::Generic(k) => {
                !need_omega
                    && !f.lims.iter().any(|l| l.inf.as_ref() == Some(q) || l.const_value() == Some(q))
                    && c <= self.g.family_count(k)
            }
            SpecialTarget::Special(w) => {
                let g = self.g;
                let omega_host = g.omegas.iter().any(|o| o.const_value() == Some(w))
                    || g.lims.iter().enumerate().any(|(j, d)| d.const_value() == Some(w) && !asg.alpha.contains(&j));
                if need_omega && !omega_host {
                    return false;
                }
                let unbounded = g.const_hosts(w).next().is_some();
                unbounded || c <= g.iso_count(w) + self.free_infs(asg, w)
            }
        }
    }

    fn specials(&mut self, asg: Assignment) -> Option<FnEmbWitness> {
        for (q, t) in &asg.tau {
            if !self.fits(&asg, q, t) {
                return None;
            }
        }
        let rest: Vec<Value> = self.f.img.specials.iter().filter(|q| !asg.tau.contains_key(*q)).cloned().collect();
        self.place(asg, rest)
    }

    /// The targets `q` may still take under `asg`.
    fn options(&self, asg: &Assignment, q: &Value) -> Vec<Assignment> {
        let cands = self
            .g
            .img
            .specials
            .iter()
            .map(|w| SpecialTarget::Special(w.clone()))
            .chain(self.g.img.thresholds.keys().map(|k| SpecialTarget::Generic(k.clone())));
        cands
            .filter(|t| self.fits(asg, q, t))
            .filter_map(|t| {
                let mut a = asg.clone();
                (a.set_tau(q, t) && self.clusters_agree(&a, true)).then_some(a)
            })
            .collect()
    }

    /// Places the remaining specials, always branching on the one with the
    /// fewest options left.
    fn place(&mut self, asg: Assignment, mut rest: Vec<Value>) -> Option<FnEmbWitness> {
        if !self.tick() {
            return None;
        }
        if rest.is_empty() {
            return self.finish(&asg);
        }
        let mut best: Option<(usize, Vec<Assignment>)> = None;
        for (i, q) in rest.iter().enumerate() {
            let opts = self.options(&asg, q);
            if opts.is_empty() {
                return None;
            }
            if best.as_ref().is_none_or(|(_, b)| opts.len() < b.len()) {
                best = Some((i, opts));
            }
        }
        let (i, opts) = best.expect("rest is nonempty");
        rest.swap_remove(i);
        for a in opts {
            if let Some(w) = self.place(a, rest.clone()) {
                return Some(w);
            }
        }
        None
    }

    /// Convergence of clusters must match on both sides. Values not yet
    /// placed are treated as open, so partial assignments can be pruned.
    fn clusters_agree(&self, asg: &Assignment, partial: bool) -> bool {
        asg.beta.iter().all(|(k, t)| {
            let l = self.f.img.limit_attained(k);
            let lam = self.g.img.limit_attained(t);
            let lam_taken = |lam: &Value| asg.tau.values().any(|x| *x == SpecialTarget::Special(lam.clone()));
            match (l, lam) {
                (Some(l), Some(lam)) => match asg.tau.get(&l) {
                    Some(x) => *x == SpecialTarget::Special(lam),
                    None => partial && !lam_taken(&lam),
                },
                (Some(_), None) => false,
                (None, Some(lam)) => !lam_taken(&lam),
                (None, None) => true,
            }
        })
    }

    fn finish(&mut self, asg: &Assignment) -> Option<FnEmbWitness> {
        if !self.clusters_agree(asg, false) {
            return None;
        }
        build(self.fr, self.gr, self.f, self.g, asg)
    }
}

fn site(path: &[Seg]) -> String {
    if path.is_empty() {
        return "root".into();
    }
    let segs: Vec<String> = path
        .iter()
        .map(|s| match s {
            Seg::Branch(i) => i.to_string(),
            Seg::Copy(n) => format!("copy{n}"),
        })
        .collect();
    segs.join("/")
}

/// The finished placement used by the address map.
struct Plan {
    f: DModel,
    g: DModel,
    finite: HashMap<Addr, Addr>,
    alpha: Vec<usize>,
    /// Points of each const-tail host reserved for isolated atoms.
    reserve: HashMap<Home, u64>,
    /// Omega summands with a const tail, interleaved into one host.
    omega_hosts: BTreeMap<usize, (Home, usize, usize)>,
    rules: BTreeMap<ClusterKey, ClusterRule>,
    iota: BTreeMap<usize, usize>,
}

impl Plan {
    fn sigma(&self, a: &Addr) -> Option<Addr> {
        if let Some(b) = self.finite.get(a) {
            return Some(b.clone());
        }
        for (i, c) in self.f.lims.iter().enumerate() {
            let Some(rest) = unwrap(&c.path, a) else { continue };
            let d = &self.g.lims[self.alpha[i]];
            if *rest == Addr::Inf {
                return Some(wrap(&d.path, Addr::Inf));
            }
            return match &c.tail {
                Tail::Const(_) => {
                    let k = c.tail_rank(rest)?;
                    let r = self.reserve.get(&Home::Lim(self.alpha[i])).copied().unwrap_or(0);
                    Some(d.tail_point(r + k))
                }
                Tail::Approach(_) => self.generic(c, rest),
            };
        }
        for (j, c) in self.f.omegas.iter().enumerate() {
            let Some(rest) = unwrap(&c.path, a) else { continue };
            return match &c.tail {
                Tail::Const(_) => {
                    let k = c.tail_rank(rest)?;
                    let &(host, slot, width) = self.omega_hosts.get(&j)?;
                    let r = self.reserve.get(&host).copied().unwrap_or(0);
                    Some(self.g.comp(host).tail_point(r + k * width as u64 + slot as u64))
                }
                Tail::Approach(_) => self.generic(c, rest),
            };
        }
        None
    }

    fn generic(&self, c: &Comp, rest: &Addr) -> Option<Addr> {
        let phi = c.family?;
        let fam = &self.f.img.families[phi];
        let e = fam.base + c.index(rest)?;
        let rule = self.rules.get(&fam.key)?;
        if e < rule.from_exp {
            return None;
        }
        let tfam = &self.g.img.families[*self.iota.get(&phi)?];
        let n = tfam.index_of(rule.target_exp(e))?;
        Some(tfam.member(n))
    }
}

/// Builds the witness for an assignment, filling fibers over specials.
pub(crate) fn build(fr: &FnRep, gr: &FnRep, f: &DModel, g: &DModel, asg: &Assignment) -> Option<FnEmbWitness> {
    let mut placements = Vec::new();
    let mut finite: HashMap<Addr, Addr> = HashMap::new();
    let mut reserve: HashMap<Home, u64> = HashMap::new();
    let mut omega_hosts = BTreeMap::new();
    let mut tail_busy: BTreeSet<usize> = asg
        .iota
        .values()
        .filter_map(|psi| match g.family_home(*psi) {
            Home::Lim(j) if !asg.alpha.contains(&j) => Some(j),
            _ => None,
        })
        .collect();
    let mut inf_busy: BTreeSet<usize> = BTreeSet::new();
    let mut table = BTreeMap::new();
    let mut slots: BTreeMap<ClusterKey, u64> = BTreeMap::new();
    let empty = Vec::new();

    for (i, &j) in asg.alpha.iter().enumerate() {
        placements.push(format!("{} -> {}", wrap(&f.lims[i].path, Addr::Inf), wrap(&g.lims[j].path, Addr::Inf)));
    }
    for (q, t) in &asg.tau {
        let atoms = f.iso.get(q).unwrap_or(&empty);
        match t {
            SpecialTarget::Generic(k) => {
                let slot = slots.entry(k.clone()).or_insert(0);
                let e = g.img.thresholds[k] + *slot;
                *slot += 1;
                let fams: Vec<_> = g.img.families_of(k).collect();
                if atoms.len() > fams.len() {
                    return None;
                }
                for (a, (_, fam)) in atoms.iter().zip(fams) {
                    finite.insert(a.clone(), fam.member(fam.index_of(e)?));
                }
                table.insert(q.clone(), k.value(g.img.cod, e));
            }
            SpecialTarget::Special(w) => {
                table.insert(q.clone(), w.clone());
                let streams: Vec<usize> =
                    (0..f.omegas.len()).filter(|&j| f.omegas[j].const_value() == Some(q)).collect();
                if !streams.is_empty() {
                    let host =
                        g.omegas.iter().position(|o| o.const_value() == Some(w)).map(Home::Omega).or_else(|| {
                            (0..g.lims.len())
                                .find(|&j| {
                                    g.lims[j].const_value() == Some(w)
                                        && !asg.alpha.contains(&j)
                                        && !tail_busy.contains(&j)
                                        && !inf_busy.contains(&j)
                                })
                                .map(Home::Lim)
                        })?;
                    if let Home::Lim(j) = host {
                        tail_busy.insert(j);
                    }
                    for (slot, &j) in streams.iter().enumerate() {
                        omega_hosts.insert(j, (host, slot, streams.len()));
                    }
                    placements.push(format!("omega points with value {q} -> tail at {}", site(&g.comp(host).path)));
                }
                let targets = g.iso.get(w).unwrap_or(&empty);
                let paired = atoms.len().min(targets.len());
                for (a, b) in atoms.iter().zip(targets) {
                    finite.insert(a.clone(), b.clone());
                }
                let left = &atoms[paired..];
                if left.is_empty() {
                    continue;
                }
                if let Some(host) = g.const_hosts(w).next() {
                    let r = reserve.entry(host).or_insert(0);
                    for a in left {
                        finite.insert(a.clone(), g.comp(host).tail_point(*r));
                        *r += 1;
                    }
                } else {
                    for a in left {
                        let j = (0..g.lims.len()).find(|&j| {
                            g.lims[j].inf.as_ref() == Some(w)
                                && !asg.alpha.contains(&j)
                                && !tail_busy.contains(&j)
                                && !inf_busy.contains(&j)
                        })?;
                        inf_busy.insert(j);
                        finite.insert(a.clone(), wrap(&g.lims[j].path, Addr::Inf));
                    }
                }
            }
        }
    }

    // affine rules: source keys sharing a target key take residues mod r
    let mut by_target: BTreeMap<ClusterKey, Vec<ClusterKey>> = BTreeMap::new();
    for (k, t) in &asg.beta {
        by_target.entry(t.clone()).or_default().push(k.clone());
    }
    let mut rules = BTreeMap::new();
    let mut tau = ValueMap::new(fr.codomain, gr.codomain);
    tau.table = table;
    for (t, ks) in by_target {
        let start = g.img.thresholds[&t] + slots.get(&t).copied().unwrap_or(0);
        let stride = ks.len() as u64;
        for (i, k) in ks.into_iter().enumerate() {
            let rule = ClusterRule {
                from: k.clone(),
                from_exp: f.img.thresholds[&k],
                to: t.clone(),
                offset: start + i as u64,
                stride,
            };
            placements.push(format!("values {rule}"));
            tau.rules.push(rule.clone());
            rules.insert(k, rule);
        }
    }
    let plan = Arc::new(Plan {
        f: f.clone(),
        g: g.clone(),
        finite,
        alpha: asg.alpha.clone(),
        reserve,
        omega_hosts,
        rules,
        iota: asg.iota.clone(),
    });
    let sigma = SpaceEmbWitness::new(WitnessKind::Pattern, placements, move |a| plan.sigma(a));
    Some(FnEmbWitness { sigma, tau: TauMap::Map(tau) })
}

/// The witness for a given value assignment, used when the assignment
/// comes from labels.
pub(crate) fn assignment_witness(fr: &FnRep, gr: &FnRep, tau: BTreeMap<Value, SpecialTarget>) -> Option<FnEmbWitness> {
    let f = DModel::new(fr);
    let g = DModel::new(gr);
    let mut asg = Assignment { tau, ..Assignment::default() };
    // the limit points pair up in order, families with them
    for c in &f.lims {
        let target = asg.tau.get(c.inf.as_ref()?)?.clone();
        let j = (0..g.lims.len()).find(|j| {
            !asg.alpha.contains(j) && g.lims[*j].inf.clone().map(SpecialTarget::Special).as_ref() == Some(&target)
        })?;
        if let (Some(phi), Some(psi)) = (c.family, g.lims[j].family) {
            asg.beta.insert(f.key_of(phi).clone(), g.key_of(psi).clone());
            asg.iota.insert(phi, psi);
        }
        asg.alpha.push(j);
    }
    for (phi, fam) in f.img.families.iter().enumerate() {
        if asg.iota.contains_key(&phi) {
            continue;
        }
        let t = match asg.beta.get(&fam.key) {
            Some(t) => t.clone(),
            None => g.img.thresholds.keys().next()?.clone(),
        };
        asg.beta.insert(fam.key.clone(), t.clone());
        let used: BTreeSet<usize> = asg.iota.values().copied().collect();
        let psi = g.img.families_of(&t).map(|(p, _)| p).find(|p| !used.contains(p))?;
        asg.iota.insert(phi, psi);
    }
    build(fr, gr, &f, &g, &asg)
}
