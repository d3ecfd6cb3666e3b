use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which CCDF points enter a tail fit. Points with zero CCDF are always dropped.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum TailPolicy {
    /// `w > 1`: above the mean when samples are mean-normalized.
    #[default]
    AboveOne,
    /// `w > threshold`.
    Above(f64),
    /// Every point with positive `w`.
    All,
}

impl TailPolicy {
    fn admits(&self, w: f64) -> bool {
        match *self {
            TailPolicy::AboveOne => w > 1.0,
            TailPolicy::Above(x) => w > x,
            TailPolicy::All => w > 0.0,
        }
    }
}

impl fmt::Display for TailPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TailPolicy::AboveOne => f.write_str("above-one"),
            TailPolicy::Above(x) => write!(f, "above:{x}"),
            TailPolicy::All => f.write_str("all"),
        }
    }
}

impl FromStr for TailPolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "above-one" => Ok(TailPolicy::AboveOne),
            "all" => Ok(TailPolicy::All),
            _ => {
                let x = s
                    .strip_prefix("above:")
                    .and_then(|x| x.parse::<f64>().ok())
                    .ok_or_else(|| Error::Config(format!("unknown tail policy {s:?}")))?;
                Ok(TailPolicy::Above(x))
            }
        }
    }
}

/// Least-squares line through `(ln w, ln y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub residual_se: f64,
    pub points: usize,
    pub policy: String,
}

/// Empirical complementary CDF at each distinct sample value, counting samples
/// strictly greater. With `normalize_by_mean`, samples are first divided by
/// their mean.
pub fn ccdf(samples: &[f64], normalize_by_mean: bool) -> Result<Vec<(f64, f64)>> {
    if samples.is_empty() {
        return Err(Error::InvalidParams("ccdf of an empty sample".into()));
    }
    let n = samples.len() as f64;
    let scale = if normalize_by_mean {
        let mean = samples.iter().sum::<f64>() / n;
        if mean == 0.0 {
            return Err(Error::InvalidParams("cannot normalize by a zero mean".into()));
        }
        mean
    } else {
        1.0
    };
    let mut xs: Vec<f64> = samples.iter().map(|x| x / scale).collect();
    xs.sort_by(f64::total_cmp);
    let mut out = Vec::new();
    let mut i = 0;
    while i < xs.len() {
        let mut j = i;
        while j < xs.len() && xs[j] == xs[i] {
            j += 1;
        }
        out.push((xs[i], (xs.len() - j) as f64 / n));
        i = j;
    }
    Ok(out)
}

fn least_squares(xy: &[(f64, f64)], policy: String) -> Result<FitResult> {
    let n = xy.len();
    if n < 3 {
        return Err(Error::InsufficientPoints { need: 3, have: n });
    }
    let nf = n as f64;
    let mx = xy.iter().map(|p| p.0).sum::<f64>() / nf;
    let my = xy.iter().map(|p| p.1).sum::<f64>() / nf;
    let sxx: f64 = xy.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidParams("all abscissae coincide".into()));
    }
    let sxy: f64 = xy.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = xy.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    Ok(FitResult { slope, intercept, residual_se: (ssr / (nf - 2.0)).sqrt(), points: n, policy })
}

/// Least-squares fit of `ln y` on `ln w` over points with both coordinates positive.
pub fn fit_loglog(points: &[(f64, f64)]) -> Result<FitResult> {
    let xy: Vec<(f64, f64)> = points.iter().filter(|p| p.0 > 0.0 && p.1 > 0.0).map(|p| (p.0.ln(), p.1.ln())).collect();
    least_squares(&xy, "all".into())
}

/// Tail exponent estimate: log-log fit of CCDF points admitted by `policy`.
pub fn fit_loglog_tail(points: &[(f64, f64)], policy: TailPolicy) -> Result<FitResult> {
    let xy: Vec<(f64, f64)> = points
        .iter()
        .filter(|p| p.1 > 0.0 && p.0 > 0.0 && policy.admits(p.0))
        .map(|p| (p.0.ln(), p.1.ln()))
        .collect();
    least_squares(&xy, policy.to_string())
}

/// Sup-norm distance between the empirical CDFs of `a` and `b`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::InvalidParams("KS statistic needs two nonempty samples".into()));
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// One snapshot of a KS evolution series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KsPoint {
    pub t: u32,
    pub ks: f64,
    /// Why the point is left out of the fit, if it is.
    pub excluded: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KsEvolution {
    pub series: Vec<KsPoint>,
    pub fit: Option<FitResult>,
}

fn normalized(xs: &[f64]) -> Option<Vec<f64>> {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    (mean != 0.0 && var > 0.0).then(|| xs.iter().map(|x| x / mean).collect())
}

/// KS distance between each snapshot's mean-normalized sample and the final
/// snapshot's, with a log-log fit of KS against `t`. Snapshots must be given in
/// ascending time; degenerate ones (zero mean or zero variance) are excluded.
pub fn ks_evolution(snapshots: &[(u32, Vec<f64>)]) -> Result<KsEvolution> {
    if snapshots.len() < 2 {
        return Err(Error::InvalidParams("KS evolution needs at least two snapshots".into()));
    }
    if snapshots.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(Error::InvalidParams("snapshot times must ascend".into()));
    }
    let (t_final, last) = snapshots.last().expect("nonempty");
    let reference = normalized(last).ok_or_else(|| {
        Error::InvalidParams(format!("final snapshot t = {t_final} has zero mean or zero variance"))
    })?;
    let mut series = Vec::with_capacity(snapshots.len());
    for (t, xs) in snapshots {
        let point = match normalized(xs) {
            None => KsPoint { t: *t, ks: f64::NAN, excluded: Some("degenerate".into()) },
            Some(v) => {
                let ks = ks_two_sample(&v, &reference)?;
                let excluded = if t == t_final {
                    Some("reference".into())
                } else if ks == 0.0 {
                    Some("zero".into())
                } else {
                    None
                };
                KsPoint { t: *t, ks, excluded }
            }
        };
        series.push(point);
    }
    let pts: Vec<(f64, f64)> = series.iter().filter(|p| p.excluded.is_none()).map(|p| (p.t as f64, p.ks)).collect();
    let fit = fit_loglog(&pts).ok();
    Ok(KsEvolution { series, fit })
}

/// `n` draws from the Pareto law `P(X > w) = w^{-a}` on `[1, inf)`.
pub fn pareto_sample<R: Rng + ?Sized>(a: f64, n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| (1.0 - rng.random::<f64>()).powf(-1.0 / a)).collect()
}

/// Sample mean and its standard error.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, f64::NAN);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}
