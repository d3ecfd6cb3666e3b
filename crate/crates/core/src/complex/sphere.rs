use super::simple::SimpleGraph;
use super::simplicial::{clique_complex_with_cap, SimplicialComplex};
use crate::error::{Error, Result};

/// Default search-node limit for [`find_induced_sphere`].
pub const DEFAULT_SEARCH_BUDGET: u64 = 10_000_000;

/// Graph on `1..=2q` with `i ~ j` iff `i - j` is not divisible by `q`.
pub fn octahedral_graph(q: u32) -> SimpleGraph {
    let n = 2 * q;
    let edges = (1..=n).flat_map(|i| (i + 1..=n).filter(move |j| (j - i) % q != 0).map(move |j| (i, j)));
    SimpleGraph::from_edges(n, edges).expect("valid edges")
}

/// Clique complex of [`octahedral_graph`], the boundary of the `q`-dimensional
/// cross-polytope, a `(q-1)`-sphere. Built through dimension `q`, which is
/// empty, so the complex is complete.
pub fn octahedral_sphere(q: u32) -> Result<SimplicialComplex> {
    if q < 1 {
        return Err(Error::InvalidParams("octahedral sphere needs q >= 1".into()));
    }
    clique_complex_with_cap(&octahedral_graph(q), q as usize, u64::MAX)
}

/// Whether `g` induces the octahedral pattern on `vertices`: they split into
/// non-adjacent pairs and every cross pair is adjacent. The empty set counts as
/// the `(-1)`-sphere.
pub fn is_octahedral_pattern(g: &SimpleGraph, vertices: &[u32]) -> bool {
    if !vertices.len().is_multiple_of(2) {
        return false;
    }
    let mut sorted = vertices.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) || sorted.iter().any(|&v| v < 1 || v > g.node_count()) {
        return false;
    }
    sorted.iter().all(|&u| sorted.iter().filter(|&&w| w != u && !g.is_adjacent(u, w)).count() == 1)
}

struct SphereSearch<'a> {
    g: &'a SimpleGraph,
    size: usize,
    budget: u64,
    nodes: u64,
    set: Vec<u32>,
    /// `partner[i]` is the index in `set` of the vertex non-adjacent to `set[i]`.
    partner: Vec<Option<usize>>,
}

impl SphereSearch<'_> {
    fn unpaired(&self) -> usize {
        self.partner.iter().filter(|p| p.is_none()).count()
    }

    fn candidates(&self) -> Vec<u32> {
        let last = *self.set.last().expect("nonempty");
        if self.set.len() < 2 {
            return (last + 1..=self.g.node_count()).collect();
        }
        // a member of the pattern misses at most one other member, so it is
        // adjacent to at least one of the first two
        let (a, b) = (self.g.neighbors(self.set[0]), self.g.neighbors(self.set[1]));
        let mut out: Vec<u32> = a.iter().chain(b).copied().filter(|&w| w > last).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    fn dfs(&mut self) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::Budget(format!("induced sphere search exceeded {} nodes", self.budget)));
        }
        if self.set.len() == self.size {
            return Ok(self.unpaired() == 0);
        }
        let remaining = self.size - self.set.len();
        for w in self.candidates() {
            let mut missed = None;
            let mut ok = true;
            for (i, &u) in self.set.iter().enumerate() {
                if !self.g.is_adjacent(u, w) {
                    if missed.is_some() || self.partner[i].is_some() {
                        ok = false;
                        break;
                    }
                    missed = Some(i);
                }
            }
            if !ok {
                continue;
            }
            let unpaired_after = match missed {
                Some(_) => self.unpaired() - 1,
                None => self.unpaired() + 1,
            };
            if unpaired_after > remaining - 1 {
                continue;
            }
            let idx = self.set.len();
            self.set.push(w);
            self.partner.push(missed);
            if let Some(i) = missed {
                self.partner[i] = Some(idx);
            }
            if self.dfs()? {
                return Ok(true);
            }
            if let Some(i) = missed {
                self.partner[i] = None;
            }
            self.partner.pop();
            self.set.pop();
        }
        Ok(false)
    }
}

/// Lexicographically first vertex set of size `2(q+1)` inducing the octahedral
/// `q`-sphere pattern, or `None`.
///
/// Depth-first over ascending vertex tuples, tracking the antipodal pairing:
/// each new vertex either opens a pair or closes one with the single earlier
/// member it misses, and branches with more open pairs than free slots are cut.
pub fn find_induced_sphere(g: &SimpleGraph, q: u32, budget: u64) -> Result<Option<Vec<u32>>> {
    let size = 2 * (q as usize + 1);
    if size > g.node_count() as usize {
        return Ok(None);
    }
    let mut s = SphereSearch { g, size, budget, nodes: 0, set: Vec::new(), partner: Vec::new() };
    for v in 1..=g.node_count() {
        s.set.push(v);
        s.partner.push(None);
        if s.dfs()? {
            debug_assert!(is_octahedral_pattern(g, &s.set));
            return Ok(Some(s.set));
        }
        s.set.pop();
        s.partner.pop();
    }
    Ok(None)
}
