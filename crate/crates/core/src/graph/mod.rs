//! Affine preferential attachment multigraphs.
//!
//! Nodes are labelled `1..=T`. Node 2 sends all of its `m` edges to node 1; every
//! later node `t` sends `m` edges, one per slot `alpha`, to earlier nodes. The
//! [`MultiGraph`] stores only these slot targets, so parallel edges are kept.

mod exact;
mod format;
mod polya;
mod sequential;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

pub use exact::{enumeration_size, exact_distribution, total_variation, ExactDistribution};
pub use format::{parse_graph, read_graph, write_graph};
pub use polya::{conditional_edge_prob, generate_polya, s_deviation, sample_polya_weights, PolyaWeights};
pub use sequential::generate_sequential;
pub(crate) use polya::beta_variate;

/// Tolerance used when classifying floats against exact thresholds.
pub const THRESHOLD_TOL: f64 = 1e-12;

/// Model parameters. `nodes` is the final node count `T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PaParams {
    pub nodes: u32,
    pub m: u32,
    pub delta: f64,
    pub seed: u64,
}

impl PaParams {
    pub fn new(nodes: u32, m: u32, delta: f64, seed: u64) -> Result<Self> {
        let p = PaParams { nodes, m, delta, seed };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes < 2 {
            return Err(Error::InvalidParams(format!("T = {} must be at least 2", self.nodes)));
        }
        if self.m < 1 {
            return Err(Error::InvalidParams("m must be at least 1".into()));
        }
        if !self.delta.is_finite() || self.delta <= -(self.m as f64) {
            return Err(Error::Domain { delta: self.delta, m: self.m });
        }
        Ok(())
    }

    /// The decay exponent `x(delta, m)` of these parameters.
    pub fn x(&self) -> f64 {
        compute_x(self.delta, self.m).expect("validated parameters")
    }
}

/// `x(delta, m) = 1 - 1/(2 + delta/m)`, the exponent governing attachment decay
/// and all phase thresholds. Lies in `[0, 1)` for `delta > -m`.
pub fn compute_x(delta: f64, m: u32) -> Result<f64> {
    if m < 1 {
        return Err(Error::InvalidParams("m must be at least 1".into()));
    }
    if !delta.is_finite() || delta <= -(m as f64) {
        return Err(Error::Domain { delta, m });
    }
    Ok(1.0 - 1.0 / (2.0 + delta / m as f64))
}

/// Which construction produced a graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Formulation {
    #[serde(rename = "seq")]
    Sequential,
    #[default]
    Polya,
}

impl fmt::Display for Formulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Formulation::Sequential => "seq",
            Formulation::Polya => "polya",
        })
    }
}

impl FromStr for Formulation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "seq" | "sequential" => Ok(Formulation::Sequential),
            "polya" => Ok(Formulation::Polya),
            other => Err(Error::InvalidParams(format!("unknown formulation {other:?}"))),
        }
    }
}

/// A labelled preferential attachment multigraph.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiGraph {
    params: PaParams,
    formulation: Formulation,
    /// Slot targets for nodes `2..=T`, `m` per node, in `(t, alpha)` order.
    targets: Vec<u32>,
}

impl MultiGraph {
    /// Build from explicit slot targets of nodes `2..=T` (flattened, `m` per node).
    /// Checks every structural invariant.
    pub fn from_targets(params: PaParams, formulation: Formulation, targets: Vec<u32>) -> Result<Self> {
        params.validate()?;
        let m = params.m as usize;
        let expected = (params.nodes as usize - 1) * m;
        if targets.len() != expected {
            return Err(Error::InvalidParams(format!(
                "expected {expected} slot targets, got {}",
                targets.len()
            )));
        }
        for (i, &v) in targets.iter().enumerate() {
            let t = (i / m) as u32 + 2;
            if v < 1 || v >= t {
                return Err(Error::InvalidParams(format!(
                    "slot {} of node {t} targets {v}, outside [1, {}]",
                    i % m + 1,
                    t - 1
                )));
            }
        }
        Ok(MultiGraph { params, formulation, targets })
    }

    pub(crate) fn from_parts_unchecked(params: PaParams, formulation: Formulation, targets: Vec<u32>) -> Self {
        debug_assert_eq!(targets.len(), (params.nodes as usize - 1) * params.m as usize);
        MultiGraph { params, formulation, targets }
    }

    pub fn params(&self) -> &PaParams {
        &self.params
    }

    pub fn formulation(&self) -> Formulation {
        self.formulation
    }

    pub fn nodes(&self) -> u32 {
        self.params.nodes
    }

    pub fn m(&self) -> u32 {
        self.params.m
    }

    /// Slot targets of node `t` (empty for node 1).
    pub fn targets(&self, t: u32) -> &[u32] {
        if t < 2 || t > self.params.nodes {
            return &[];
        }
        let m = self.params.m as usize;
        let start = (t as usize - 2) * m;
        &self.targets[start..start + m]
    }

    /// All slot targets of nodes `2..=T`, flattened.
    pub fn all_targets(&self) -> &[u32] {
        &self.targets
    }

    /// Edges as `(t, alpha, v)` in lexicographic `(t, alpha)` order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32, u32)> + '_ {
        let m = self.params.m as usize;
        self.targets
            .iter()
            .enumerate()
            .map(move |(i, &v)| ((i / m) as u32 + 2, (i % m) as u32 + 1, v))
    }

    pub fn edge_count(&self) -> u64 {
        self.targets.len() as u64
    }

    /// Degree of each node, indexed `0..T` for nodes `1..=T`.
    pub fn degrees(&self) -> Vec<u64> {
        let mut deg = vec![0u64; self.params.nodes as usize];
        for (t, _, v) in self.edges() {
            deg[t as usize - 1] += 1;
            deg[v as usize - 1] += 1;
        }
        deg
    }

    /// The induced multigraph on nodes `1..=t`, which is distributed as `G(t, delta, m)`.
    pub fn prefix(&self, t: u32) -> Result<MultiGraph> {
        if t < 2 || t > self.params.nodes {
            return Err(Error::Index(format!("prefix {t} outside [2, {}]", self.params.nodes)));
        }
        let m = self.params.m as usize;
        let params = PaParams { nodes: t, ..self.params };
        Ok(MultiGraph {
            params,
            formulation: self.formulation,
            targets: self.targets[..(t as usize - 1) * m].to_vec(),
        })
    }
}

/// Generate with the stream derived from `params.seed`.
pub fn generate(params: PaParams, formulation: Formulation) -> Result<MultiGraph> {
    params.validate()?;
    let mut rng = rng::stream(params.seed, "pa-graph", &[]);
    match formulation {
        Formulation::Sequential => generate_sequential(params, &mut rng),
        Formulation::Polya => generate_polya(params, &mut rng),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x_at_phase_boundaries() {
        assert_eq!(compute_x(0.0, 7).unwrap(), 0.5);
        assert!((compute_x(-2.0, 3).unwrap() - 0.25).abs() < 1e-15);
        // approaches 0 as delta -> -m
        let near = compute_x(-7.0 + 1e-9, 7).unwrap();
        assert!(near > 0.0 && near < 1e-9);
    }

    #[test]
    fn x_rejects_ill_posed_delta() {
        assert!(matches!(compute_x(-3.0, 3), Err(Error::Domain { .. })));
        assert!(matches!(compute_x(-4.0, 3), Err(Error::Domain { .. })));
    }

    #[test]
    fn x_is_monotone_in_delta_over_m() {
        let mut prev = -1.0;
        for i in 1..200 {
            let x = compute_x(-5.0 + 0.05 * i as f64, 5).unwrap();
            assert!(x > prev);
            assert!((0.0..1.0).contains(&x));
            prev = x;
        }
    }

    #[test]
    fn params_validation() {
        assert!(PaParams::new(1, 2, 0.0, 0).is_err());
        assert!(PaParams::new(5, 0, 0.0, 0).is_err());
        assert!(PaParams::new(5, 2, -2.0, 0).is_err());
        assert!(PaParams::new(5, 2, -1.999, 0).is_ok());
    }

    #[test]
    fn from_targets_checks_structure() {
        let p = PaParams::new(3, 1, 0.0, 0).unwrap();
        assert!(MultiGraph::from_targets(p, Formulation::Polya, vec![1, 2]).is_ok());
        assert!(MultiGraph::from_targets(p, Formulation::Polya, vec![1, 3]).is_err());
        assert!(MultiGraph::from_targets(p, Formulation::Polya, vec![1]).is_err());
    }

    #[test]
    fn prefix_keeps_early_slots() {
        let g = generate(PaParams::new(50, 3, 0.5, 9).unwrap(), Formulation::Polya).unwrap();
        let h = g.prefix(20).unwrap();
        assert_eq!(h.nodes(), 20);
        for t in 2..=20 {
            assert_eq!(g.targets(t), h.targets(t));
        }
    }
}
