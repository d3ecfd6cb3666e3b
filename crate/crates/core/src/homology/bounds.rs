use serde::{Deserialize, Serialize};

use super::betti::{betti, relative_betti};
use super::field::FieldSpec;
use crate::complex::{clique_complex_with_cap, collapse, is_octahedral_pattern, SimpleGraph, SimplicialComplex};
use crate::error::{Error, Result};
use crate::graph::MultiGraph;

/// Budget for the clique complex of a single link (at most `m` vertices).
const LINK_BUDGET: u64 = 1 << 24;

/// The Morse-inequality sandwich `-(|F| + B) <= beta_1 - (|E| - |V|) <= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorseBounds {
    pub vertices: u64,
    /// Multigraph edge count `m (T - 1)`.
    pub edges: u64,
    /// Triangles counted with edge multiplicity.
    pub triangles: u64,
    /// `sum over node pairs of C(multiplicity, 2)`.
    pub biangles: u64,
    pub beta1: u64,
    pub lower: i64,
    pub upper: i64,
    pub holds: bool,
}

impl MorseBounds {
    /// Evaluate from a multigraph, its collapse, a clique complex of the
    /// collapse built through dimension 2 or more, and `beta_1` of that complex.
    pub fn evaluate(g: &MultiGraph, simple: &SimpleGraph, c: &SimplicialComplex, beta1: u64) -> Self {
        let triangles: u64 = c
            .simplices(2)
            .map(|s| {
                simple.multiplicity(s[0], s[1]) as u64
                    * simple.multiplicity(s[0], s[2]) as u64
                    * simple.multiplicity(s[1], s[2]) as u64
            })
            .sum();
        let vertices = g.nodes() as u64;
        let edges = g.edge_count();
        let biangles = simple.biangles();
        let lower = -((triangles + biangles) as i64);
        let upper = 1;
        let mid = beta1 as i64 - (edges as i64 - vertices as i64);
        MorseBounds { vertices, edges, triangles, biangles, beta1, lower, upper, holds: lower <= mid && mid <= upper }
    }
}

/// Morse bounds for `beta_1` of the clique complex of `g`, over `GF(2)`.
pub fn morse_bounds_beta1(g: &MultiGraph) -> Result<MorseBounds> {
    let simple = collapse(g);
    let c = clique_complex_with_cap(&simple, 2, crate::complex::DEFAULT_SIMPLEX_BUDGET)?;
    let b = betti(&c, FieldSpec::GF2, 1)?;
    Ok(MorseBounds::evaluate(g, &simple, &c, b.betti[1]))
}

/// `sum_t beta_{q-1}(L^(t))` where `L^(t)` is the clique complex of the
/// neighbours of `t` that precede it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkBettiSum {
    pub q: usize,
    pub sum: u64,
    /// `per_t[t - 1] = beta_{q-1}(L^(t))`.
    pub per_t: Vec<u64>,
}

/// Link of `t` in `X^(t)`: the clique complex of its lower neighbourhood.
pub fn lower_link(g: &SimpleGraph, t: u32, cap: usize) -> Result<SimplicialComplex> {
    let lower = g.lower_neighbors(t);
    let local = g.induced(lower);
    let c = clique_complex_with_cap(&local, cap, LINK_BUDGET)?;
    // relabel back to node indices; induced() numbers vertices in list order
    let simplices: Vec<Vec<u32>> = (0..=c.dim_cap())
        .flat_map(|d| c.simplices(d).map(|s| s.iter().map(|&i| lower[i as usize - 1]).collect()).collect::<Vec<_>>())
        .collect();
    let mut out = SimplicialComplex::from_simplices(simplices)?;
    out.pad_to_cap(cap);
    Ok(out)
}

pub fn link_betti_sum_simple(g: &SimpleGraph, q: usize, field: FieldSpec) -> Result<LinkBettiSum> {
    if q < 1 {
        return Err(Error::InvalidParams("link decomposition needs q >= 1".into()));
    }
    let mut per_t = Vec::with_capacity(g.node_count() as usize);
    for t in 1..=g.node_count() {
        let lower = g.lower_neighbors(t);
        let b = if lower.is_empty() {
            0
        } else {
            let local = clique_complex_with_cap(&g.induced(lower), q, LINK_BUDGET)?;
            betti(&local, field, q - 1)?.betti[q - 1]
        };
        per_t.push(b);
    }
    Ok(LinkBettiSum { q, sum: per_t.iter().sum(), per_t })
}

pub fn link_betti_sum(g: &MultiGraph, q: usize, field: FieldSpec) -> Result<LinkBettiSum> {
    link_betti_sum_simple(&collapse(g), q, field)
}

/// `beta_q(X) <= sum_t beta_{q-1}(L^(t))`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionCheck {
    pub q: usize,
    pub beta_q: u64,
    pub link_sum: u64,
    pub holds: bool,
}

pub fn decomposition_check(g: &SimpleGraph, beta_q: u64, q: usize, field: FieldSpec) -> Result<DecompositionCheck> {
    let s = link_betti_sum_simple(g, q, field)?;
    Ok(DecompositionCheck { q, beta_q, link_sum: s.sum, holds: beta_q <= s.sum })
}

fn cross_polytope_f(q: usize, d: usize) -> u64 {
    let binom = (0..d as u64 + 1).fold(1u64, |acc, i| acc * (q as u64 - i) / (i + 1));
    (1u64 << (d + 1)) * binom
}

/// Whether `s` is the clique complex of an octahedral `(q-1)`-sphere pattern.
fn is_octahedral_sphere(s: &SimplicialComplex, q: usize) -> bool {
    let verts = s.vertices();
    if verts.len() != 2 * q || !is_octahedral_pattern(&s.one_skeleton(), verts) {
        return false;
    }
    let dims_match = (0..q).all(|d| s.count(d) as u64 == cross_polytope_f(q, d));
    dims_match && (q..=s.dim_cap()).all(|d| s.count(d) == 0)
}

/// `1[S(S, q, s, t)] * 1[beta_q(L^(t), S) > 0]`.
///
/// The event `S(S, q, s, t)` requires `S` to be an octahedral `(q-1)`-sphere
/// whose vertices are all adjacent to both `s` and `t`. `L^(t)` is the link of
/// `t` in the complex restricted to vertices `<= t`.
pub fn b_ik_indicator(
    complex_at_t: &SimplicialComplex,
    sphere: &SimplicialComplex,
    s: u32,
    t: u32,
    q: usize,
    field: FieldSpec,
) -> Result<u8> {
    if q < 1 {
        return Err(Error::InvalidParams("b_IK needs q >= 1".into()));
    }
    if !(s < t) || sphere.vertices().iter().any(|&v| v >= s) {
        return Err(Error::Ordering(format!("need every vertex of S < s = {s} < t = {t}")));
    }
    sphere.check_subcomplex_of(complex_at_t)?;
    if !is_octahedral_sphere(sphere, q) {
        return Ok(0);
    }
    let event = sphere
        .vertices()
        .iter()
        .all(|&v| complex_at_t.contains(&[v, s]) && complex_at_t.contains(&[v, t]));
    if !event {
        return Ok(0);
    }
    let link = complex_at_t.restrict_to(t).link(t)?;
    Ok((relative_betti(&link, sphere, field, q)? > 0) as u8)
}
