//! Finite-support graphs on the naturals and injective homomorphisms.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A graph on the naturals whose edges all lie inside `0..support`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "GraphFile", into = "GraphFile")]
pub struct FiniteGraph {
    support: u32,
    edges: BTreeSet<(u32, u32)>,
}

#[derive(Serialize, Deserialize)]
struct GraphFile {
    support: u32,
    edges: Vec<[u32; 2]>,
}

impl TryFrom<GraphFile> for FiniteGraph {
    type Error = Error;

    fn try_from(f: GraphFile) -> Result<FiniteGraph> {
        FiniteGraph::new(f.support, f.edges.iter().map(|e| (e[0], e[1])))
    }
}

impl From<FiniteGraph> for GraphFile {
    fn from(g: FiniteGraph) -> GraphFile {
        GraphFile { support: g.support, edges: g.edges.iter().map(|&(a, b)| [a, b]).collect() }
    }
}

impl FiniteGraph {
    pub fn new(support: u32, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<FiniteGraph> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::ShapeMismatch(format!("self-loop at {a}")));
            }
            let e = (a.min(b), a.max(b));
            if e.1 >= support {
                return Err(Error::ShapeMismatch(format!("edge {{{},{}}} outside support {support}", e.0, e.1)));
            }
            set.insert(e);
        }
        Ok(FiniteGraph { support, edges: set })
    }

    pub fn empty(support: u32) -> FiniteGraph {
        FiniteGraph { support, edges: BTreeSet::new() }
    }

    /// The graph on `support` vertices whose edges are the pairs selected by
    /// the bits of `mask`, pairs taken in lexicographic order.
    pub fn from_mask(support: u32, mask: u64) -> FiniteGraph {
        let edges = Self::all_pairs(support).enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, e)| e).collect();
        FiniteGraph { support, edges }
    }

    pub fn all_pairs(support: u32) -> impl Iterator<Item = (u32, u32)> {
        (0..support).flat_map(move |a| (a + 1..support).map(move |b| (a, b)))
    }

    pub fn support(&self) -> u32 {
        self.support
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edge membership for arbitrary naturals; false beyond the support.
    pub fn has_edge(&self, a: u64, b: u64) -> bool {
        let (a, b) = (a.min(b), a.max(b));
        match (u32::try_from(a), u32::try_from(b)) {
            (Ok(a), Ok(b)) => self.edges.contains(&(a, b)),
            _ => false,
        }
    }

    /// Vertices with at least one edge.
    pub fn touched(&self) -> BTreeSet<u32> {
        self.edges.iter().flat_map(|&(a, b)| [a, b]).collect()
    }

    pub fn degree(&self, v: u32) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// The graph with every vertex renamed by `h`; used for isomorphic copies.
    pub fn relabel(&self, h: &BTreeMap<u32, u32>, support: u32) -> Result<FiniteGraph> {
        let f = |v: u32| h.get(&v).copied().unwrap_or(v);
        FiniteGraph::new(support, self.edges.iter().map(|&(a, b)| (f(a), f(b))))
    }

    pub fn restrict(&self, support: u32) -> FiniteGraph {
        FiniteGraph { support, edges: self.edges.iter().copied().filter(|&(_, b)| b < support).collect() }
    }
}

/// An injective map on the edge-touched vertices of the source carrying
/// edges to edges.
pub type IhomMap = BTreeMap<u32, u32>;

/// Decides `g <=ihom h` by backtracking over injective assignments of the
/// edge-touched vertices of `g`.
pub fn ihom_decide(g: &FiniteGraph, h: &FiniteGraph) -> Option<IhomMap> {
    if g.edge_count() > h.edge_count() {
        return None;
    }
    let mut order: Vec<u32> = g.touched().into_iter().collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
    let targets: Vec<(u32, usize)> = h.touched().into_iter().map(|v| (v, h.degree(v))).collect();
    let mut map = IhomMap::new();
    let mut used = BTreeSet::new();
    search(g, h, &order, &targets, &mut map, &mut used).then_some(map)
}

fn search(
    g: &FiniteGraph,
    h: &FiniteGraph,
    order: &[u32],
    targets: &[(u32, usize)],
    map: &mut IhomMap,
    used: &mut BTreeSet<u32>,
) -> bool {
    let Some((&v, rest)) = order.split_first() else {
        return true;
    };
    let need = g.degree(v);
    for &(w, deg) in targets {
        if deg < need || used.contains(&w) {
            continue;
        }
        let consistent = map
            .iter()
            .all(|(&u, &x)| !g.has_edge(u64::from(u), u64::from(v)) || h.has_edge(u64::from(x), u64::from(w)));
        if !consistent {
            continue;
        }
        map.insert(v, w);
        used.insert(w);
        if search(g, h, rest, targets, map, used) {
            return true;
        }
        map.remove(&v);
        used.remove(&w);
    }
    false
}

/// Checks that `map` is an injective homomorphism from `g` to `h`.
pub fn is_ihom(map: &IhomMap, g: &FiniteGraph, h: &FiniteGraph) -> bool {
    let injective = map.values().collect::<BTreeSet<_>>().len() == map.len();
    injective
        && g.edges().all(|(a, b)| match (map.get(&a), map.get(&b)) {
            (Some(&x), Some(&y)) => h.has_edge(u64::from(x), u64::from(y)),
            _ => false,
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> FiniteGraph {
        FiniteGraph::new(3, [(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn examples() {
        let h = triangle();
        assert_eq!(ihom_decide(&FiniteGraph::empty(4), &h), Some(IhomMap::new()));
        let edge = FiniteGraph::new(2, [(0, 1)]).unwrap();
        let m = ihom_decide(&edge, &h).unwrap();
        assert!(is_ihom(&m, &edge, &h));
        let c4 = FiniteGraph::new(4, [(0, 1), (1, 2), (2, 3), (0, 3)]).unwrap();
        assert_eq!(ihom_decide(&triangle(), &c4), None);
    }

    #[test]
    fn json_shape() {
        let g: FiniteGraph = serde_json::from_str(r#"{"support": 3, "edges": [[2,0],[1,2]]}"#).unwrap();
        assert_eq!(serde_json::to_string(&g).unwrap(), r#"{"support":3,"edges":[[0,2],[1,2]]}"#);
        assert!(serde_json::from_str::<FiniteGraph>(r#"{"support": 2, "edges": [[0,2]]}"#).is_err());
        assert!(serde_json::from_str::<FiniteGraph>(r#"{"support": 2, "edges": [[1,1]]}"#).is_err());
    }

    #[test]
    fn masks_enumerate_all_graphs() {
        let all: BTreeSet<FiniteGraph> = (0..64).map(|m| FiniteGraph::from_mask(4, m)).collect();
        assert_eq!(all.len(), 64);
    }
}
