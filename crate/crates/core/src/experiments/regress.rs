use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::stats::{fit_loglog, mean_se, FitResult};
use crate::complex::{clique_complex_with_cap, collapse, common_neighbors};
use crate::error::{Error, Result};
use crate::graph::{beta_variate, compute_x, generate, Formulation, PaParams, THRESHOLD_TOL};
use crate::homology::{betti_at_times, FieldSpec};
use crate::rng;

/// Mean of a statistic at one `T`, with its standard error.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub t: u32,
    pub mean: f64,
    pub se: f64,
    pub samples: usize,
}

/// A growth-rate regression and the exponent it is compared against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateEstimate {
    pub points: Vec<GridPoint>,
    /// Grid values left out of the fit (zero mean).
    pub dropped: Vec<u32>,
    pub fit: Option<FitResult>,
    pub theoretical_slope: Option<f64>,
}

fn check_grid(grid: &[u32]) -> Result<()> {
    if grid.len() < 2 || grid.windows(2).any(|w| w[0] >= w[1]) || grid[0] < 2 {
        return Err(Error::InvalidParams("T-grid must hold at least two ascending values >= 2".into()));
    }
    Ok(())
}

fn finish(points: Vec<GridPoint>, theoretical_slope: Option<f64>) -> RateEstimate {
    let dropped = points.iter().filter(|p| p.mean <= 0.0).map(|p| p.t).collect();
    let xy: Vec<(f64, f64)> = points.iter().filter(|p| p.mean > 0.0).map(|p| (p.t as f64, p.mean)).collect();
    RateEstimate { points, dropped, fit: fit_loglog(&xy).ok(), theoretical_slope }
}

fn grid_points(grid: &[u32], per_trial: &[Vec<f64>]) -> Vec<GridPoint> {
    grid.iter()
        .enumerate()
        .map(|(i, &t)| {
            let xs: Vec<f64> = per_trial.iter().map(|v| v[i]).collect();
            let (mean, se) = mean_se(&xs);
            GridPoint { t, mean, se, samples: xs.len() }
        })
        .collect()
}

/// Configuration shared by the Monte Carlo regressions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateConfig {
    pub m: u32,
    pub delta: f64,
    pub trials: usize,
    pub seed: u64,
}

/// Regress `ln E[beta_q(X(T))]` on `ln T`. One graph is grown per trial to the
/// largest `T` of the grid; the smaller `T` are its nested prefixes.
///
/// The theoretical slope is `1 - 2 q x` when `x < 1/(2q)` and `0` when
/// `x > 1/(2q)` with `q >= 2`.
pub fn scaling_regression(
    cfg: RateConfig,
    grid: &[u32],
    q: usize,
    field: FieldSpec,
    max_simplices: u64,
) -> Result<RateEstimate> {
    check_grid(grid)?;
    let x = compute_x(cfg.delta, cfg.m)?;
    let t_max = *grid.last().expect("nonempty grid");
    let per_trial: Vec<Vec<f64>> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| -> Result<Vec<f64>> {
            let seed = rng::derive_seed(cfg.seed, "scaling", &[q as u64, i as u64]);
            let g = generate(PaParams::new(t_max, cfg.m, cfg.delta, seed)?, Formulation::Polya)?;
            let c = clique_complex_with_cap(&collapse(&g), q + 1, max_simplices)?;
            let snaps = betti_at_times(&c, field, q, grid)?;
            Ok(snaps.iter().map(|b| b.betti[q] as f64).collect())
        })
        .collect::<Result<_>>()?;
    let boundary = 1.0 / (2.0 * q as f64);
    let theory = if x < boundary - THRESHOLD_TOL {
        Some(1.0 - 2.0 * q as f64 * x)
    } else if x > boundary + THRESHOLD_TOL && q >= 2 {
        Some(0.0)
    } else {
        None
    };
    Ok(finish(grid_points(grid, &per_trial), theory))
}

/// Mean `beta_1 / T` across the grid, the quantity that tends to `m - 1`.
pub fn beta1_per_node(est: &RateEstimate) -> Vec<(u32, f64)> {
    est.points.iter().map(|p| (p.t, p.mean / p.t as f64)).collect()
}

/// Regress the mean number of common neighbours of nodes `1..=k` arriving up
/// to `T` on `T`. Theory: slope `1 - k x` for `x < 1/k`.
pub fn common_neighbor_growth(cfg: RateConfig, grid: &[u32], k: u32) -> Result<RateEstimate> {
    check_grid(grid)?;
    if k < 1 || k > cfg.m {
        return Err(Error::InvalidParams(format!("need 1 <= k <= m, got k = {k}")));
    }
    let x = compute_x(cfg.delta, cfg.m)?;
    let t_max = *grid.last().expect("nonempty grid");
    let vs: Vec<u32> = (1..=k).collect();
    let per_trial: Vec<Vec<f64>> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| -> Result<Vec<f64>> {
            let seed = rng::derive_seed(cfg.seed, "common-neighbors", &[k as u64, i as u64]);
            let g = generate(PaParams::new(t_max, cfg.m, cfg.delta, seed)?, Formulation::Polya)?;
            let cn = common_neighbors(&collapse(&g), &vs, k);
            Ok(grid.iter().map(|&t| cn.partition_point(|&u| u <= t) as f64).collect())
        })
        .collect::<Result<_>>()?;
    let theory = (x < 1.0 / k as f64 - THRESHOLD_TOL).then_some(1.0 - k as f64 * x);
    Ok(finish(grid_points(grid, &per_trial), theory))
}

/// Monte Carlo frequency that node `T` sends at least one edge to each node in
/// `vs`, for every `T` in the grid.
///
/// Each sample draws Polya weights `psi_2..psi_{T_max - 1}` once. Given the
/// weights, each slot of node `T` lands on `v` with probability
/// `psi_v prod_{v < s < T} (1 - psi_s)`, independently across slots, so node
/// `T` hits `v` with probability `1 - (1 - p)^m`, which one uniform draw
/// decides.
pub fn attachment_frequencies(cfg: RateConfig, vs: &[u32], grid: &[u32]) -> Result<Vec<Vec<f64>>> {
    check_grid(grid)?;
    let params = PaParams::new(*grid.last().expect("nonempty"), cfg.m, cfg.delta, cfg.seed)?;
    if vs.iter().any(|&v| v < 1 || v >= grid[0]) {
        return Err(Error::InvalidParams("every v must precede the smallest T".into()));
    }
    let m = cfg.m as f64;
    let a = m + cfg.delta;
    let hits: Vec<Vec<u64>> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let mut r = rng::stream(cfg.seed, "attachment", &[i as u64]);
            let mut log_psi = vec![0.0f64; params.nodes as usize + 1];
            let mut log_one_minus = vec![0.0f64; params.nodes as usize + 1];
            for t in 2..params.nodes as usize {
                let b = (2.0 * m + cfg.delta) * t as f64 - (3.0 * m + cfg.delta);
                let (p, l) = beta_variate(a, b, &mut r);
                log_psi[t] = p.ln();
                log_one_minus[t] = l;
            }
            let mut out = vec![0u64; vs.len() * grid.len()];
            for (vi, &v) in vs.iter().enumerate() {
                // running sum of ln(1 - psi_s) for v < s < T
                let mut acc = 0.0;
                let mut s = v as usize + 1;
                for (gi, &t) in grid.iter().enumerate() {
                    while s < t as usize {
                        acc += log_one_minus[s];
                        s += 1;
                    }
                    let log_p = log_psi[v as usize] + acc;
                    let p_hit = -((cfg.m as f64) * (-log_p.exp()).ln_1p()).exp_m1();
                    if r.random::<f64>() < p_hit {
                        out[vi * grid.len() + gi] += 1;
                    }
                }
            }
            out
        })
        .collect();
    let n = cfg.trials as f64;
    Ok((0..vs.len())
        .map(|vi| {
            (0..grid.len())
                .map(|gi| hits.iter().map(|h| h[vi * grid.len() + gi]).sum::<u64>() as f64 / n)
                .collect()
        })
        .collect())
}

/// Regress the attachment frequency of node `v` on `T`. Theory: slope `-x`.
pub fn attachment_prob_estimate(cfg: RateConfig, v: u32, grid: &[u32]) -> Result<RateEstimate> {
    let x = compute_x(cfg.delta, cfg.m)?;
    let freq = attachment_frequencies(cfg, &[v], grid)?.remove(0);
    let n = cfg.trials as f64;
    let points = grid
        .iter()
        .zip(freq)
        .map(|(&t, p)| GridPoint { t, mean: p, se: (p * (1.0 - p) / n).sqrt(), samples: cfg.trials })
        .collect();
    Ok(finish(points, Some(-x)))
}

/// Log-spaced integer grid from `lo` to `hi` inclusive.
pub fn log_grid(lo: u32, hi: u32, points: usize) -> Vec<u32> {
    let (a, b) = ((lo as f64).ln(), (hi as f64).ln());
    let mut g: Vec<u32> = (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1).max(1) as f64).exp().round() as u32)
        .collect();
    g.dedup();
    g
}
