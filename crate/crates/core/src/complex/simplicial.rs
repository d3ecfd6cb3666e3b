use std::cmp::Ordering;
use std::io::{BufRead, Write};

use super::simple::SimpleGraph;
use crate::error::{Error, Result};

/// Default cap on the number of simplices a clique enumeration may produce.
pub const DEFAULT_SIMPLEX_BUDGET: u64 = 50_000_000;

/// Compare vertex tuples in colexicographic order (by largest vertex first).
/// Sorting by colex puts every simplex after its faces and groups simplices by
/// their latest vertex, so the simplices of `X^(t)` form a prefix of each layer.
pub fn colex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    a.iter().rev().cmp(b.iter().rev())
}

/// The `d`-simplices of a complex, stored flat with stride `d + 1`, colex-sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Layer {
    width: usize,
    verts: Vec<u32>,
}

impl Layer {
    fn new(dim: usize) -> Self {
        Layer { width: dim + 1, verts: Vec::new() }
    }

    fn len(&self) -> usize {
        self.verts.len() / self.width
    }

    fn get(&self, i: usize) -> &[u32] {
        &self.verts[i * self.width..(i + 1) * self.width]
    }

    fn iter(&self) -> std::slice::ChunksExact<'_, u32> {
        self.verts.chunks_exact(self.width)
    }

    fn index_of(&self, s: &[u32]) -> Option<usize> {
        if s.len() != self.width {
            return None;
        }
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            match colex_cmp(self.get(mid), s) {
                Ordering::Less => lo = mid + 1,
                Ordering::Greater => hi = mid,
                Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    /// Number of simplices whose largest vertex is at most `t`.
    fn prefix_len(&self, t: u32) -> usize {
        let (mut lo, mut hi) = (0, self.len());
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.get(mid)[self.width - 1] <= t {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }

    fn sort_dedup(&mut self) {
        let w = self.width;
        let mut chunks: Vec<&[u32]> = self.verts.chunks_exact(w).collect();
        chunks.sort_unstable_by(|a, b| colex_cmp(a, b));
        chunks.dedup();
        self.verts = chunks.concat();
    }
}

/// A finite simplicial complex on `u32` vertex labels, stored by dimension up to
/// a cap. Each simplex is a strictly increasing vertex tuple.
///
/// A complex is `truncated` when it was enumerated from a graph with a dimension
/// cap and the graph has cliques above the cap; homology at the top dimension of
/// a truncated complex is then only an upper bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    layers: Vec<Layer>,
    truncated: bool,
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        SimplicialComplex { layers: vec![Layer::new(0)], truncated: false }
    }

    fn with_cap(cap: usize) -> Self {
        SimplicialComplex { layers: (0..=cap).map(Layer::new).collect(), truncated: false }
    }

    /// Build from an explicit list of simplices, which must be closed under faces.
    pub fn from_simplices<I, S>(simplices: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u32]>,
    {
        let c = Self::collect(simplices, false);
        c.check_closure()?;
        Ok(c)
    }

    /// The smallest complex containing every given simplex.
    pub fn closure<I, S>(facets: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u32]>,
    {
        Self::collect(facets, true)
    }

    fn collect<I, S>(simplices: I, add_faces: bool) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u32]>,
    {
        let mut c = Self::empty();
        for s in simplices {
            let mut s = s.as_ref().to_vec();
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                continue;
            }
            if add_faces {
                let k = s.len();
                for mask in 1u64..(1u64 << k) {
                    let face: Vec<u32> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect();
                    c.push_raw(&face);
                }
            } else {
                c.push_raw(&s);
            }
        }
        for l in &mut c.layers {
            l.sort_dedup();
        }
        c
    }

    fn push_raw(&mut self, s: &[u32]) {
        let d = s.len() - 1;
        while self.layers.len() <= d {
            let next = self.layers.len();
            self.layers.push(Layer::new(next));
        }
        self.layers[d].verts.extend_from_slice(s);
    }

    /// Extend the dimension cap with empty layers.
    pub fn pad_to_cap(&mut self, cap: usize) {
        while self.layers.len() <= cap {
            let next = self.layers.len();
            self.layers.push(Layer::new(next));
        }
    }

    /// Every `(q-1)`-face of every stored `q`-simplex is stored.
    pub fn check_closure(&self) -> Result<()> {
        for d in 1..self.layers.len() {
            for s in self.layers[d].iter() {
                for i in 0..s.len() {
                    let face: Vec<u32> = s.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, &v)| v).collect();
                    if self.layers[d - 1].index_of(&face).is_none() {
                        return Err(Error::MissingFace { simplex: s.to_vec(), face });
                    }
                }
            }
        }
        Ok(())
    }

    /// Highest dimension for which simplices were enumerated.
    pub fn dim_cap(&self) -> usize {
        self.layers.len() - 1
    }

    /// Highest dimension with at least one simplex, `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.layers.iter().rposition(|l| l.len() > 0)
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    /// `(f_0, ..., f_cap)`.
    pub fn f_vector(&self) -> Vec<u64> {
        self.layers.iter().map(|l| l.len() as u64).collect()
    }

    pub fn count(&self, d: usize) -> usize {
        self.layers.get(d).map_or(0, Layer::len)
    }

    pub fn total_count(&self) -> usize {
        self.layers.iter().map(Layer::len).sum()
    }

    /// Number of `d`-simplices whose vertices are all at most `t`.
    pub fn prefix_count(&self, d: usize, t: u32) -> usize {
        self.layers.get(d).map_or(0, |l| l.prefix_len(t))
    }

    /// The `d`-simplices in colex order.
    pub fn simplices(&self, d: usize) -> impl ExactSizeIterator<Item = &[u32]> + '_ {
        let layer = self.layers.get(d);
        let w = d + 1;
        layer.map_or(&[][..], |l| &l.verts[..]).chunks_exact(w)
    }

    pub fn simplex(&self, d: usize, i: usize) -> &[u32] {
        self.layers[d].get(i)
    }

    /// Position of `s` within its dimension's colex order.
    pub fn index_of(&self, s: &[u32]) -> Option<usize> {
        if s.is_empty() {
            return None;
        }
        self.layers.get(s.len() - 1)?.index_of(s)
    }

    pub fn contains(&self, s: &[u32]) -> bool {
        self.index_of(s).is_some()
    }

    pub fn vertices(&self) -> &[u32] {
        &self.layers[0].verts
    }

    /// Subcomplex of simplices not containing `v` whose union with `v` is a simplex.
    pub fn link(&self, v: u32) -> Result<Self> {
        if !self.contains(&[v]) {
            return Err(Error::UnknownVertex(v));
        }
        let cap = self.dim_cap().saturating_sub(1);
        let mut out = Self::with_cap(cap);
        for d in 1..self.layers.len() {
            for s in self.layers[d].iter() {
                if s.binary_search(&v).is_ok() {
                    let rest: Vec<u32> = s.iter().copied().filter(|&w| w != v).collect();
                    out.layers[d - 1].verts.extend_from_slice(&rest);
                }
            }
        }
        for l in &mut out.layers {
            l.sort_dedup();
        }
        out.truncated = self.truncated;
        Ok(out)
    }

    /// Closed star: simplices containing `v` and all their faces, i.e. the cone
    /// from `v` over its link.
    pub fn star(&self, v: u32) -> Result<Self> {
        let link = self.link(v)?;
        let mut out = Self::with_cap(self.dim_cap());
        out.layers[0].verts.push(v);
        for d in 0..link.layers.len() {
            for s in link.layers[d].iter() {
                out.layers[d].verts.extend_from_slice(s);
                let mut coned = s.to_vec();
                let pos = coned.partition_point(|&w| w < v);
                coned.insert(pos, v);
                out.layers[d + 1].verts.extend_from_slice(&coned);
            }
        }
        for l in &mut out.layers {
            l.sort_dedup();
        }
        out.truncated = self.truncated;
        Ok(out)
    }

    /// Link when `star_instead` is false, closed star otherwise.
    pub fn link_or_star(&self, v: u32, star_instead: bool) -> Result<Self> {
        if star_instead {
            self.star(v)
        } else {
            self.link(v)
        }
    }

    /// Full subcomplex spanned by `vertices`.
    pub fn induced(&self, vertices: &[u32]) -> Self {
        let mut keep: Vec<u32> = vertices.to_vec();
        keep.sort_unstable();
        let mut out = Self::with_cap(self.dim_cap());
        for (d, l) in self.layers.iter().enumerate() {
            for s in l.iter() {
                if s.iter().all(|v| keep.binary_search(v).is_ok()) {
                    out.layers[d].verts.extend_from_slice(s);
                }
            }
        }
        out.truncated = self.truncated;
        out
    }

    /// `X^(t)`: the simplices whose vertices are all at most `t`.
    pub fn restrict_to(&self, t: u32) -> Self {
        let mut out = Self::with_cap(self.dim_cap());
        for (d, l) in self.layers.iter().enumerate() {
            let k = l.prefix_len(t);
            out.layers[d].verts.extend_from_slice(&l.verts[..k * l.width]);
        }
        out.truncated = self.truncated;
        out
    }

    /// Error with the first simplex of `self` that `other` lacks.
    pub fn check_subcomplex_of(&self, other: &SimplicialComplex) -> Result<()> {
        for l in &self.layers {
            for s in l.iter() {
                if !other.contains(s) {
                    return Err(Error::NotSubcomplex(s.to_vec()));
                }
            }
        }
        Ok(())
    }

    /// The 1-skeleton as a graph on `1..=max vertex`.
    pub fn one_skeleton(&self) -> SimpleGraph {
        let n = self.vertices().iter().copied().max().unwrap_or(0);
        let edges: Vec<(u32, u32)> = self.simplices(1).map(|e| (e[0], e[1])).collect();
        SimpleGraph::from_edges(n, edges).expect("complex edges are valid")
    }

    /// Text dump: `# dim d` headers followed by one simplex per line.
    pub fn write_dump<W: Write>(&self, mut out: W) -> Result<()> {
        for (d, l) in self.layers.iter().enumerate() {
            writeln!(out, "# dim {d}")?;
            for s in l.iter() {
                let line: Vec<String> = s.iter().map(u32::to_string).collect();
                writeln!(out, "{}", line.join(" "))?;
            }
        }
        Ok(())
    }

    pub fn read_dump<R: BufRead>(input: R) -> Result<Self> {
        let mut simplices = Vec::new();
        let mut cap = 0usize;
        let mut current: Option<usize> = None;
        for (i, line) in input.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("# dim") {
                let d: usize = rest.trim().parse().map_err(|_| Error::Parse {
                    line: i + 1,
                    msg: format!("bad dimension header {line:?}"),
                })?;
                cap = cap.max(d);
                current = Some(d);
                continue;
            }
            let s: Vec<u32> = line
                .split_whitespace()
                .map(|t| {
                    t.parse().map_err(|_| Error::Parse { line: i + 1, msg: format!("bad vertex {t:?}") })
                })
                .collect::<Result<_>>()?;
            if current != Some(s.len().wrapping_sub(1)) {
                return Err(Error::Parse { line: i + 1, msg: "simplex size does not match its header".into() });
            }
            simplices.push(s);
        }
        let mut c = Self::from_simplices(simplices)?;
        while c.layers.len() <= cap {
            let next = c.layers.len();
            c.layers.push(Layer::new(next));
        }
        Ok(c)
    }
}

/// Sorted intersection of two ascending lists.
fn intersect_into(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    out.clear();
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if small.len() * 8 < large.len() {
        out.extend(small.iter().copied().filter(|x| large.binary_search(x).is_ok()));
        return;
    }
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
}

fn intersects(a: &[u32], b: &[u32]) -> bool {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    small.iter().any(|x| large.binary_search(x).is_ok())
}

struct Enumerator<'a> {
    g: &'a SimpleGraph,
    cap: usize,
    budget: u64,
    count: u64,
    out: SimplicialComplex,
}

impl Enumerator<'_> {
    fn emit(&mut self, clique: &[u32]) -> Result<()> {
        self.count += 1;
        if self.count > self.budget {
            return Err(Error::Budget(format!("clique enumeration exceeded {} simplices", self.budget)));
        }
        self.out.layers[clique.len() - 1].verts.extend_from_slice(clique);
        Ok(())
    }

    /// Extend `clique` by each candidate in turn; candidates are the common
    /// higher-indexed neighbours of the clique, so every clique is reached once.
    fn extend(&mut self, clique: &mut Vec<u32>, cands: &[u32]) -> Result<()> {
        let mut next = Vec::new();
        for (i, &w) in cands.iter().enumerate() {
            clique.push(w);
            self.emit(clique)?;
            let rest = &cands[i + 1..];
            let higher = self.g.higher_neighbors(w);
            if clique.len() <= self.cap {
                intersect_into(rest, higher, &mut next);
                if !next.is_empty() {
                    let owned = std::mem::take(&mut next);
                    self.extend(clique, &owned)?;
                    next = owned;
                }
            } else if !self.out.truncated && intersects(rest, higher) {
                self.out.truncated = true;
            }
            clique.pop();
        }
        Ok(())
    }
}

/// Clique complex of `g` through dimension `dim_cap` (cliques of at most
/// `dim_cap + 1` vertices), by ordered extension.
pub fn build_clique_complex(g: &SimpleGraph, dim_cap: usize, max_simplices: u64) -> Result<SimplicialComplex> {
    if dim_cap < 1 {
        return Err(Error::InvalidParams("dim_cap must be at least 1".into()));
    }
    clique_complex_with_cap(g, dim_cap, max_simplices)
}

pub(crate) fn clique_complex_with_cap(g: &SimpleGraph, cap: usize, budget: u64) -> Result<SimplicialComplex> {
    let mut e = Enumerator { g, cap, budget, count: 0, out: SimplicialComplex::with_cap(cap) };
    let mut clique = Vec::with_capacity(cap + 1);
    for v in 1..=g.node_count() {
        clique.push(v);
        e.emit(&clique)?;
        let higher = g.higher_neighbors(v);
        if cap >= 1 {
            e.extend(&mut clique, higher)?;
        } else if !higher.is_empty() {
            e.out.truncated = true;
        }
        clique.pop();
    }
    let mut out = e.out;
    for l in &mut out.layers[1..] {
        l.sort_dedup();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn binom(n: u64, k: u64) -> u64 {
        if k > n {
            return 0;
        }
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn complete_graph_f_vector() {
        let c = build_clique_complex(&SimpleGraph::complete(4), 3, 1000).unwrap();
        assert_eq!(c.f_vector(), vec![4, 6, 4, 1]);
        assert!(!c.is_truncated());
        for n in 1..8u32 {
            let c = build_clique_complex(&SimpleGraph::complete(n), n as usize, 10_000).unwrap();
            for d in 0..=n as usize {
                assert_eq!(c.f_vector()[d], binom(n as u64, d as u64 + 1));
            }
        }
    }

    #[test]
    fn four_cycle_f_vector() {
        let c = build_clique_complex(&SimpleGraph::cycle(4), 2, 1000).unwrap();
        assert_eq!(c.f_vector(), vec![4, 4, 0]);
    }

    #[test]
    fn cap_marks_truncation() {
        let c = build_clique_complex(&SimpleGraph::complete(5), 2, 1000).unwrap();
        assert_eq!(c.f_vector(), vec![5, 10, 10]);
        assert!(c.is_truncated());
        let c = build_clique_complex(&SimpleGraph::complete(3), 2, 1000).unwrap();
        assert!(!c.is_truncated());
    }

    #[test]
    fn budget_is_enforced() {
        let err = build_clique_complex(&SimpleGraph::complete(10), 4, 50).unwrap_err();
        assert!(err.is_budget());
        assert!(build_clique_complex(&SimpleGraph::complete(3), 0, 50).is_err());
    }

    #[test]
    fn link_and_star_fixtures() {
        let k4 = build_clique_complex(&SimpleGraph::complete(4), 3, 1000).unwrap();
        let link = k4.link(1).unwrap();
        assert_eq!(link.f_vector()[..3], [3, 3, 1]);
        assert_eq!(link.simplices(2).next().unwrap(), &[2, 3, 4]);
        let c4 = build_clique_complex(&SimpleGraph::cycle(4), 2, 1000).unwrap();
        let link = c4.link(1).unwrap();
        assert_eq!(link.vertices(), &[2, 4]);
        assert_eq!(link.count(1), 0);
        assert!(matches!(c4.link(9), Err(Error::UnknownVertex(9))));

        let star = c4.star(1).unwrap();
        assert_eq!(star.vertices(), &[1, 2, 4]);
        assert_eq!(star.simplices(1).collect::<Vec<_>>(), vec![&[1, 2][..], &[1, 4][..]]);
        assert_eq!(c4.link_or_star(1, true).unwrap(), star);
    }

    #[test]
    fn closure_and_missing_faces() {
        let tri = SimplicialComplex::closure([[1u32, 2, 3]]);
        assert_eq!(tri.f_vector(), vec![3, 3, 1]);
        let err = SimplicialComplex::from_simplices([vec![1u32], vec![2], vec![1, 2, 3]]).unwrap_err();
        assert!(matches!(err, Error::MissingFace { .. }));
    }

    #[test]
    fn prefix_matches_restriction() {
        let g = SimpleGraph::complete(6);
        let c = build_clique_complex(&g, 3, 10_000).unwrap();
        let r = c.restrict_to(4);
        assert_eq!(r.f_vector(), vec![4, 6, 4, 1]);
        for d in 0..=3 {
            assert_eq!(c.prefix_count(d, 4), r.count(d));
        }
    }

    #[test]
    fn dump_round_trip() {
        let c = build_clique_complex(&SimpleGraph::cycle(5), 2, 1000).unwrap();
        let mut buf = Vec::new();
        c.write_dump(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# dim 0\n1\n2\n"));
        let back = SimplicialComplex::read_dump(buf.as_slice()).unwrap();
        assert_eq!(back.f_vector(), c.f_vector());
        assert_eq!(back.simplices(1).collect::<Vec<_>>(), c.simplices(1).collect::<Vec<_>>());
    }

    fn random_graph(n: u32, bits: &[bool]) -> SimpleGraph {
        let mut edges = Vec::new();
        let mut k = 0;
        for u in 1..=n {
            for v in u + 1..=n {
                if bits[k] {
                    edges.push((u, v));
                }
                k += 1;
            }
        }
        SimpleGraph::from_edges(n, edges).unwrap()
    }

    proptest! {
        #[test]
        fn clique_complex_is_closed_and_exact(bits in proptest::collection::vec(any::<bool>(), 45)) {
            let g = random_graph(10, &bits);
            let c = build_clique_complex(&g, 4, 100_000).unwrap();
            c.check_closure().unwrap();
            // a tuple is a simplex iff it is a clique: check all triples
            for a in 1..=10u32 { for b in a + 1..=10 { for d in b + 1..=10 {
                let clique = g.is_adjacent(a, b) && g.is_adjacent(a, d) && g.is_adjacent(b, d);
                prop_assert_eq!(c.contains(&[a, b, d]), clique);
            }}}
            for v in c.vertices().to_vec() {
                let link = c.link(v).unwrap();
                let star = c.star(v).unwrap();
                prop_assert!(!link.contains(&[v]));
                prop_assert!(star.contains(&[v]));
                link.check_subcomplex_of(&star).unwrap();
                star.check_subcomplex_of(&c).unwrap();
                // link in a clique complex is the clique complex of the neighbourhood
                let nb = g.neighbors(v).to_vec();
                let local = build_clique_complex(&g.induced(&nb), 3, 100_000).unwrap();
                prop_assert_eq!(local.f_vector(), link.f_vector());
            }
        }
    }
}
