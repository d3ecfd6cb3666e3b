use std::collections::{BTreeMap, HashMap};

use super::{MultiGraph, PaParams};
use crate::error::{Error, Result};

/// Largest number of attachment sequences [`exact_distribution`] will enumerate.
pub const ENUMERATION_BUDGET: u64 = 1_000_000;

/// Exact law of `G(T, delta, m)` over slot-target sequences, keyed by
/// [`MultiGraph::all_targets`].
#[derive(Debug, Clone)]
pub struct ExactDistribution {
    pub params: PaParams,
    pub probs: BTreeMap<Vec<u32>, f64>,
}

impl ExactDistribution {
    pub fn prob(&self, g: &MultiGraph) -> f64 {
        self.probs.get(g.all_targets()).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.probs.values().sum()
    }
}

/// Number of attachment sequences: `prod_{t=3}^{T} (t - 1)^m`, saturating.
pub fn enumeration_size(params: &PaParams) -> u64 {
    (3..=params.nodes as u64).fold(1u64, |acc, t| acc.saturating_mul((t - 1).saturating_pow(params.m)))
}

/// Enumerate every attachment sequence of the edge-by-edge model and multiply
/// the conditional probabilities `(d(v) + delta) / C(t, delta, m, alpha)` along it.
pub fn exact_distribution(params: PaParams) -> Result<ExactDistribution> {
    params.validate()?;
    let size = enumeration_size(&params);
    if size > ENUMERATION_BUDGET {
        return Err(Error::Budget(format!(
            "{size} attachment sequences exceed the enumeration budget {ENUMERATION_BUDGET}"
        )));
    }
    let n = params.nodes as usize;
    let m = params.m as usize;
    let mut degree = vec![0u32; n + 1];
    degree[1] = params.m;
    degree[2] = params.m;
    let mut seq: Vec<u32> = vec![1; m];
    let mut probs = BTreeMap::new();
    let slots: Vec<(u32, u32)> = (3..=params.nodes)
        .flat_map(|t| (1..=params.m).map(move |a| (t, a)))
        .collect();
    enumerate(&params, &slots, 0, 1.0, &mut degree, &mut seq, &mut probs);
    Ok(ExactDistribution { params, probs })
}

fn enumerate(
    params: &PaParams,
    slots: &[(u32, u32)],
    depth: usize,
    prob: f64,
    degree: &mut [u32],
    seq: &mut Vec<u32>,
    out: &mut BTreeMap<Vec<u32>, f64>,
) {
    let Some(&(t, alpha)) = slots.get(depth) else {
        *out.entry(seq.clone()).or_insert(0.0) += prob;
        return;
    };
    let m = params.m as f64;
    let c = 2.0 * (t as f64 - 2.0) * m + (alpha as f64 - 1.0) + (t as f64 - 1.0) * params.delta;
    for v in 1..t {
        let p = (degree[v as usize] as f64 + params.delta) / c;
        degree[v as usize] += 1;
        if alpha == params.m {
            // node t's degree only counts once all its slots are placed
            degree[t as usize] += params.m;
        }
        seq.push(v);
        enumerate(params, slots, depth + 1, prob * p, degree, seq, out);
        seq.pop();
        if alpha == params.m {
            degree[t as usize] -= params.m;
        }
        degree[v as usize] -= 1;
    }
}

/// Total-variation distance between the exact law and an empirical sample.
pub fn total_variation(exact: &ExactDistribution, counts: &HashMap<Vec<u32>, u64>) -> f64 {
    let n: u64 = counts.values().sum();
    if n == 0 {
        return 1.0;
    }
    let mut tv = 0.0;
    for (k, &p) in &exact.probs {
        let q = counts.get(k).copied().unwrap_or(0) as f64 / n as f64;
        tv += (p - q).abs();
    }
    for (k, &c) in counts {
        if !exact.probs.contains_key(k) {
            tv += c as f64 / n as f64;
        }
    }
    tv / 2.0
}
