use rand::Rng;

use super::{Formulation, MultiGraph, PaParams};
use crate::error::Result;

/// Grow `G(T, delta, m)` edge by edge.
///
/// The `alpha`-th edge of node `t` picks `v < t` with probability
/// `(d(v) + delta) / C(t, delta, m, alpha)` where degrees are taken in the graph
/// that already contains the first `alpha - 1` edges of `t`.
///
/// Every candidate has degree at least `m`, so the weight splits into a
/// non-negative excess `d(v) - m` and a positive uniform part `m + delta`. The
/// excess part is sampled by picking a uniform entry of the list of past slot
/// targets (each placement adds one unit of excess to its target), which makes
/// each edge O(1).
pub fn generate_sequential<R: Rng + ?Sized>(params: PaParams, rng: &mut R) -> Result<MultiGraph> {
    params.validate()?;
    let n = params.nodes as usize;
    let m = params.m as usize;
    let base = params.m as f64 + params.delta;

    let mut targets = Vec::with_capacity((n - 1) * m);
    targets.extend(std::iter::repeat_n(1u32, m));
    // targets placed by nodes >= 3; node 2's edges only build node 1's base degree
    let mut excess: Vec<u32> = Vec::with_capacity(n.saturating_sub(2) * m);

    for t in 3..=params.nodes {
        let uniform_mass = (t - 1) as f64 * base;
        for _ in 0..m {
            let excess_mass = excess.len() as f64;
            let u = rng.random::<f64>() * (excess_mass + uniform_mass);
            let v = if u < excess_mass {
                excess[(u as usize).min(excess.len() - 1)]
            } else {
                let k = ((u - excess_mass) / base) as u32;
                1 + k.min(t - 2)
            };
            targets.push(v);
            excess.push(v);
        }
    }
    Ok(MultiGraph::from_parts_unchecked(params, Formulation::Sequential, targets))
}
