use rand::Rng;
use rand_distr::{Distribution, Gamma};

use super::{Formulation, MultiGraph, PaParams};
use crate::error::{Error, Result};

/// Independent Beta weights of the Polya-urn representation and the derived
/// interval endpoints.
///
/// `psi[t - 1]` holds `psi_t` for `t = 1..=T` (with `psi_1 = 1`). `s[v]` holds
/// `S_v = prod_{v < t <= T} (1 - psi_t)` for `v = 0..=T`, so `S_0 = 0` and
/// `S_T = 1`. Node `v` owns the interval `[S_{v-1}, S_v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyaWeights {
    psi: Vec<f64>,
    s: Vec<f64>,
    log_s: Vec<f64>,
}

impl PolyaWeights {
    /// Build from explicit weights `psi_1..psi_T`. `psi_1` must be 1 and the rest
    /// in `[0, 1)`; zeros are accepted for synthetic inputs.
    pub fn from_psi(psi: Vec<f64>) -> Result<Self> {
        if psi.len() < 2 {
            return Err(Error::InvalidParams("need at least two weights".into()));
        }
        if psi[0] != 1.0 {
            return Err(Error::InvalidParams("psi_1 must equal 1".into()));
        }
        if let Some(bad) = psi[1..].iter().find(|p| !(0.0..1.0).contains(*p)) {
            return Err(Error::InvalidParams(format!("weight {bad} outside [0, 1)")));
        }
        let log_one_minus: Vec<f64> = psi.iter().map(|p| (-p).ln_1p()).collect();
        Ok(Self::from_logs(psi, &log_one_minus))
    }

    /// `log_one_minus[t - 1] = ln(1 - psi_t)`; the entry for `t = 1` is ignored.
    fn from_logs(psi: Vec<f64>, log_one_minus: &[f64]) -> Self {
        let n = psi.len();
        let mut log_s = vec![0.0; n + 1];
        log_s[0] = f64::NEG_INFINITY;
        // log S_v = sum_{t = v+1}^{T} ln(1 - psi_t)
        for v in (1..n).rev() {
            log_s[v] = log_s[v + 1] + log_one_minus[v];
        }
        let s = log_s.iter().map(|l| l.exp()).collect();
        PolyaWeights { psi, s, log_s }
    }

    pub fn nodes(&self) -> u32 {
        self.psi.len() as u32
    }

    /// `psi_t` for `t = 1..=T`.
    pub fn psi(&self, t: u32) -> f64 {
        self.psi[t as usize - 1]
    }

    /// `S_v` for `v = 0..=T`.
    pub fn s(&self, v: u32) -> f64 {
        self.s[v as usize]
    }

    /// `ln S_v` for `v = 0..=T` (`-inf` at 0).
    pub fn log_s(&self, v: u32) -> f64 {
        self.log_s[v as usize]
    }

    /// `phi_v = S_v - S_{v-1}`, the length of node `v`'s interval.
    pub fn phi(&self, v: u32) -> f64 {
        self.s[v as usize] - self.s[v as usize - 1]
    }

    pub fn s_values(&self) -> &[f64] {
        &self.s
    }

    /// Node whose interval contains `u`, restricted to nodes `< t`. Requires
    /// `0 <= u < S_{t-1}`; rounding at the top end is clamped to `t - 1`.
    pub fn locate(&self, u: f64, t: u32) -> u32 {
        let upper = &self.s[1..t as usize];
        let idx = upper.partition_point(|&x| x <= u);
        (idx as u32 + 1).min(t - 1)
    }

    /// Check the structural invariants: `psi_1 = 1`, `psi_t` in `(0, 1)`,
    /// `S_0 = 0`, `S_T = 1`, `S` strictly increasing.
    pub fn check_invariants(&self) -> Result<()> {
        let n = self.psi.len();
        if self.psi[0] != 1.0 {
            return Err(Error::InvalidParams("psi_1 != 1".into()));
        }
        if let Some(t) = (1..n).find(|&i| !(self.psi[i] > 0.0 && self.psi[i] < 1.0)) {
            return Err(Error::InvalidParams(format!("psi_{} = {} outside (0, 1)", t + 1, self.psi[t])));
        }
        if self.s[0] != 0.0 || self.s[n] != 1.0 {
            return Err(Error::InvalidParams("S_0 != 0 or S_T != 1".into()));
        }
        if let Some(v) = (1..=n).find(|&v| self.s[v] <= self.s[v - 1]) {
            return Err(Error::InvalidParams(format!("S not increasing at {v}")));
        }
        Ok(())
    }
}

/// `ln X` for `X ~ Gamma(shape, 1)`, stable for small shapes via
/// `Gamma(a) = Gamma(a + 1) * U^(1/a)`.
fn ln_gamma_variate<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> f64 {
    if shape >= 1.0 {
        Gamma::new(shape, 1.0).expect("positive shape").sample(rng).ln()
    } else {
        let g = Gamma::new(shape + 1.0, 1.0).expect("positive shape").sample(rng).ln();
        let u: f64 = rng.random::<f64>();
        // u is in [0, 1); guard the measure-zero 0
        g + (u.max(f64::MIN_POSITIVE)).ln() / shape
    }
}

/// Sample `Beta(a, b)` as `X / (X + Y)` with independent Gammas, returning
/// `(psi, ln(1 - psi))` computed in log space.
pub(crate) fn beta_variate<R: Rng + ?Sized>(a: f64, b: f64, rng: &mut R) -> (f64, f64) {
    let lx = ln_gamma_variate(a, rng);
    let ly = ln_gamma_variate(b, rng);
    let hi = lx.max(ly);
    let lse = hi + ((lx.min(ly) - hi).exp()).ln_1p();
    ((lx - lse).exp(), ly - lse)
}

/// Draw `psi_t ~ Beta(m + delta, (2m + delta) t - (3m + delta))` independently for
/// `t = 2..=T` and derive `S` by the backward product.
pub fn sample_polya_weights<R: Rng + ?Sized>(params: PaParams, rng: &mut R) -> Result<PolyaWeights> {
    params.validate()?;
    let m = params.m as f64;
    let d = params.delta;
    let a = m + d;
    let n = params.nodes as usize;
    let mut psi = Vec::with_capacity(n);
    let mut log_one_minus = Vec::with_capacity(n);
    psi.push(1.0);
    log_one_minus.push(f64::NEG_INFINITY);
    for t in 2..=n {
        let b = (2.0 * m + d) * t as f64 - (3.0 * m + d);
        assert!(a > 0.0 && b > 0.0, "Beta parameters ({a}, {b}) must be positive");
        let (p, l) = beta_variate(a, b, rng);
        psi.push(p);
        log_one_minus.push(l);
    }
    Ok(PolyaWeights::from_logs(psi, &log_one_minus))
}

/// Generate `G(T, delta, m)` through the Polya representation: draw the weights,
/// then for every slot draw `U ~ Unif(0, S_{t-1})` and attach to the node whose
/// interval contains `U` (binary search over `S`).
pub fn generate_polya<R: Rng + ?Sized>(params: PaParams, rng: &mut R) -> Result<MultiGraph> {
    let w = sample_polya_weights(params, rng)?;
    Ok(attach_by_weights(params, &w, rng))
}

pub(crate) fn attach_by_weights<R: Rng + ?Sized>(params: PaParams, w: &PolyaWeights, rng: &mut R) -> MultiGraph {
    let m = params.m as usize;
    let mut targets = Vec::with_capacity((params.nodes as usize - 1) * m);
    targets.extend(std::iter::repeat_n(1u32, m));
    for t in 3..=params.nodes {
        let top = w.s(t - 1);
        for _ in 0..m {
            let u = rng.random::<f64>() * top;
            targets.push(w.locate(u, t));
        }
    }
    MultiGraph::from_parts_unchecked(params, Formulation::Polya, targets)
}

/// Conditional probability, given the weights, that any single edge of node `t`
/// lands on `v < t`: `psi_v S_v / S_{t-1}`.
pub fn conditional_edge_prob(w: &PolyaWeights, v: u32, t: u32) -> Result<f64> {
    if v < 1 || v >= t || t > w.nodes() {
        return Err(Error::Index(format!("need 1 <= v < t <= {}, got v = {v}, t = {t}", w.nodes())));
    }
    Ok(w.psi(v) * w.s(v) / w.s(t - 1))
}

/// `max_v |ln S_v - x ln(v / T)|`.
pub fn s_deviation(w: &PolyaWeights, x: f64) -> f64 {
    let n = w.nodes() as f64;
    (1..=w.nodes())
        .map(|v| (w.log_s(v) - x * (v as f64 / n).ln()).abs())
        .fold(0.0, f64::max)
}
