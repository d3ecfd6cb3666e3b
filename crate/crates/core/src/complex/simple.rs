use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::MultiGraph;

/// Undirected simple graph on nodes `1..=n`, remembering which pairs carried
/// parallel edges in the multigraph it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    n: u32,
    /// `adj[v]` is the sorted neighbour list of `v`; `adj[0]` is unused.
    adj: Vec<Vec<u32>>,
    /// Pairs `(u, v)` with `u < v` and multiplicity at least 2.
    parallel: BTreeMap<(u32, u32), u32>,
}

impl SimpleGraph {
    /// Graph on `1..=n` from an edge list. Duplicates collapse silently;
    /// self-loops and out-of-range endpoints are errors.
    pub fn from_edges<I: IntoIterator<Item = (u32, u32)>>(n: u32, edges: I) -> Result<Self> {
        let mut adj = vec![Vec::new(); n as usize + 1];
        for (u, v) in edges {
            if u == v {
                return Err(Error::InvalidParams(format!("self-loop at {u}")));
            }
            for w in [u, v] {
                if w < 1 || w > n {
                    return Err(Error::UnknownVertex(w));
                }
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        Ok(SimpleGraph { n, adj, parallel: BTreeMap::new() })
    }

    pub fn complete(n: u32) -> Self {
        let edges = (1..=n).flat_map(|u| (u + 1..=n).map(move |v| (u, v)));
        Self::from_edges(n, edges).expect("valid edges")
    }

    /// Cycle `1 - 2 - ... - n - 1`.
    pub fn cycle(n: u32) -> Self {
        let edges = (1..=n).map(|u| (u, u % n + 1));
        Self::from_edges(n, edges).expect("valid edges")
    }

    pub fn node_count(&self) -> u32 {
        self.n
    }

    pub fn edge_count(&self) -> u64 {
        self.adj.iter().map(|a| a.len() as u64).sum::<u64>() / 2
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (1..=self.n).flat_map(move |u| self.higher_neighbors(u).iter().map(move |&v| (u, v)))
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    /// Neighbours strictly greater than `v`.
    pub fn higher_neighbors(&self, v: u32) -> &[u32] {
        let a = &self.adj[v as usize];
        &a[a.partition_point(|&w| w <= v)..]
    }

    /// Neighbours strictly smaller than `v`.
    pub fn lower_neighbors(&self, v: u32) -> &[u32] {
        let a = &self.adj[v as usize];
        &a[..a.partition_point(|&w| w < v)]
    }

    pub fn is_adjacent(&self, u: u32, v: u32) -> bool {
        u != v && u >= 1 && u <= self.n && self.adj[u as usize].binary_search(&v).is_ok()
    }

    /// Number of parallel edges joining `u` and `v` in the source multigraph
    /// (0 or 1 for graphs not built by [`collapse`]).
    pub fn multiplicity(&self, u: u32, v: u32) -> u32 {
        if !self.is_adjacent(u, v) {
            return 0;
        }
        let key = (u.min(v), u.max(v));
        self.parallel.get(&key).copied().unwrap_or(1)
    }

    /// Node pairs joined by at least two parallel edges.
    pub fn biangle_pairs(&self) -> u64 {
        self.parallel.len() as u64
    }

    /// Biangles counted as two-edge subgraphs: `sum over pairs of C(mult, 2)`.
    pub fn biangles(&self) -> u64 {
        self.parallel.values().map(|&k| k as u64 * (k as u64 - 1) / 2).sum()
    }

    /// Induced subgraph on `vertices`, relabelled `1..=k` in the given order.
    pub fn induced(&self, vertices: &[u32]) -> SimpleGraph {
        let k = vertices.len() as u32;
        let mut edges = Vec::new();
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.is_adjacent(u, v) {
                    edges.push((i as u32 + 1, j as u32 + 1));
                }
            }
        }
        SimpleGraph::from_edges(k, edges).expect("relabelled edges are valid")
    }
}

/// Replace parallel edges by single edges, recording multiplicities.
pub fn collapse(g: &MultiGraph) -> SimpleGraph {
    let n = g.nodes();
    let mut adj = vec![Vec::new(); n as usize + 1];
    let mut parallel = BTreeMap::new();
    let mut slots = Vec::with_capacity(g.m() as usize);
    for t in 2..=n {
        slots.clear();
        slots.extend_from_slice(g.targets(t));
        slots.sort_unstable();
        // a pair {v, t} with v < t only receives edges from t's own slots
        for run in slots.chunk_by(|a, b| a == b) {
            let v = run[0];
            adj[t as usize].push(v);
            adj[v as usize].push(t);
            if run.len() >= 2 {
                parallel.insert((v, t), run.len() as u32);
            }
        }
    }
    for a in &mut adj {
        a.sort_unstable();
    }
    SimpleGraph { n, adj, parallel }
}

/// Nodes `t > after` adjacent to every vertex of `vs`, ascending.
pub fn common_neighbors(g: &SimpleGraph, vs: &[u32], after: u32) -> Vec<u32> {
    let Some(&seed) = vs.iter().min_by_key(|&&v| g.neighbors(v).len()) else {
        return Vec::new();
    };
    g.neighbors(seed)
        .iter()
        .copied()
        .filter(|&t| t > after && vs.iter().all(|&v| v != t && g.is_adjacent(v, t)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Formulation, PaParams};

    fn multigraph(nodes: u32, m: u32, targets: Vec<u32>) -> MultiGraph {
        MultiGraph::from_targets(PaParams::new(nodes, m, 0.0, 0).unwrap(), Formulation::Polya, targets).unwrap()
    }

    #[test]
    fn node_two_collapses_to_one_edge() {
        let g = collapse(&multigraph(2, 2, vec![1, 1]));
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.biangle_pairs(), 1);
        assert_eq!(g.biangles(), 1);
        let g = collapse(&multigraph(2, 3, vec![1, 1, 1]));
        assert_eq!(g.biangle_pairs(), 1);
        assert_eq!(g.biangles(), 3);
        assert_eq!(g.multiplicity(2, 1), 3);
    }

    #[test]
    fn distinct_targets_have_no_biangles() {
        let g = collapse(&multigraph(4, 1, vec![1, 1, 2]));
        assert_eq!(g.biangles(), 0);
        assert_eq!(g.edge_count(), 3);
    }

    #[test]
    fn doubled_slots_on_node_three() {
        let g = collapse(&multigraph(3, 2, vec![1, 1, 1, 1]));
        let edges: Vec<_> = g.edges().collect();
        assert_eq!(edges, vec![(1, 2), (1, 3)]);
        assert_eq!(g.biangles(), 2);
        assert_eq!(g.biangle_pairs(), 2);
    }

    #[test]
    fn biangle_bound_holds_on_generated_graphs() {
        let p = PaParams::new(500, 6, -5.5, 3).unwrap();
        let g = collapse(&crate::graph::generate(p, Formulation::Polya).unwrap());
        assert!(g.biangles() <= 499 * 15);
        for (u, v) in g.edges() {
            assert!(g.is_adjacent(v, u));
            assert_ne!(u, v);
        }
    }

    #[test]
    fn common_neighbors_fixtures() {
        let k4 = SimpleGraph::complete(4);
        assert_eq!(common_neighbors(&k4, &[1, 2], 0), vec![3, 4]);
        assert_eq!(common_neighbors(&k4, &[1, 2], 3), vec![4]);
        let c4 = SimpleGraph::cycle(4);
        assert_eq!(common_neighbors(&c4, &[1, 3], 0), vec![2, 4]);
        assert!(common_neighbors(&c4, &[1, 2], 0).is_empty());
    }
}
