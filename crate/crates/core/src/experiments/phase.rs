use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{compute_x, THRESHOLD_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseRegion {
    /// `m >= 2(q+1)` and `x <= 1/(2q+2)`.
    HomotopyConnected,
    /// `m >= 2q` and `1/(2q+2) < x <= 1/(2q)`.
    BettiInfinite,
    /// `x > 1/(2q)` with `q >= 2`.
    BettiFinite,
    /// The exponent condition of a region holds but its bound on `m` fails.
    InsufficientM,
    /// `q = 1` and `x > 1/2`, where no result applies.
    Unclassified,
}

/// A phase label together with the thresholds it was decided against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseResult {
    pub q: u32,
    pub m: u32,
    pub delta: f64,
    pub x: f64,
    /// `1/(2q+2)`.
    pub lower: f64,
    /// `1/(2q)`.
    pub upper: f64,
    pub region: PhaseRegion,
}

impl PhaseResult {
    pub fn label(&self) -> String {
        match self.region {
            PhaseRegion::HomotopyConnected => format!("{}-homotopy-connected", self.q),
            PhaseRegion::BettiInfinite => format!("beta_{} infinite", self.q),
            PhaseRegion::BettiFinite => format!("beta_{} finite", self.q),
            PhaseRegion::InsufficientM => "insufficient m".into(),
            PhaseRegion::Unclassified => "unclassified".into(),
        }
    }
}

impl fmt::Display for PhaseResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (x={}, bounds ({}, {}])", self.label(), self.x, self.lower, self.upper)
    }
}

fn region(q: u32, m: u32, below_lower: bool, below_upper: bool) -> PhaseRegion {
    if below_lower {
        if m >= 2 * (q + 1) {
            PhaseRegion::HomotopyConnected
        } else {
            PhaseRegion::InsufficientM
        }
    } else if below_upper {
        if m >= 2 * q {
            PhaseRegion::BettiInfinite
        } else {
            PhaseRegion::InsufficientM
        }
    } else if q >= 2 {
        PhaseRegion::BettiFinite
    } else {
        PhaseRegion::Unclassified
    }
}

/// Region of `(delta, m)` in dimension `q >= 1`. Comparisons against the
/// thresholds allow a `1e-12` tolerance so that values meant to lie on a
/// boundary are classified with the closed inequality.
pub fn phase_classify(delta: f64, m: u32, q: u32) -> Result<PhaseResult> {
    if q < 1 {
        return Err(Error::InvalidParams("phase classification needs q >= 1".into()));
    }
    let x = compute_x(delta, m)?;
    let lower = 1.0 / (2.0 * q as f64 + 2.0);
    let upper = 1.0 / (2.0 * q as f64);
    let region = region(q, m, x <= lower + THRESHOLD_TOL, x <= upper + THRESHOLD_TOL);
    Ok(PhaseResult { q, m, delta, x, lower, upper, region })
}

/// [`phase_classify`] for `delta = num/den` with exact integer comparisons:
/// `x = (m den + num) / (2 m den + num)`.
pub fn phase_classify_rational(num: i64, den: i64, m: u32, q: u32) -> Result<PhaseResult> {
    if den == 0 {
        return Err(Error::InvalidParams("zero denominator".into()));
    }
    if q < 1 {
        return Err(Error::InvalidParams("phase classification needs q >= 1".into()));
    }
    let (num, den) = if den < 0 { (-(num as i128), -(den as i128)) } else { (num as i128, den as i128) };
    let md = m as i128 * den;
    let delta = num as f64 / den as f64;
    if num <= -md {
        return Err(Error::Domain { delta, m });
    }
    let (xn, xd) = (md + num, 2 * md + num);
    let q2 = 2 * q as i128;
    let below_lower = xn * (q2 + 2) <= xd;
    let below_upper = xn * q2 <= xd;
    let x = xn as f64 / xd as f64;
    Ok(PhaseResult {
        q,
        m,
        delta,
        x,
        lower: 1.0 / (q2 + 2) as f64,
        upper: 1.0 / q2 as f64,
        region: region(q, m, below_lower, below_upper),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        let r = phase_classify(0.0, 8, 1).unwrap();
        assert_eq!(r.region, PhaseRegion::BettiInfinite);
        assert_eq!(r.label(), "beta_1 infinite");
        assert_eq!((r.x, r.lower, r.upper), (0.5, 0.25, 0.5));

        let r = phase_classify(-4.0, 6, 1).unwrap();
        assert!((r.x - 0.25).abs() < 1e-15);
        assert_eq!(r.label(), "1-homotopy-connected");
        assert_eq!(phase_classify_rational(-4, 1, 6, 1).unwrap().region, PhaseRegion::HomotopyConnected);

        let r = phase_classify(-6.4, 8, 2).unwrap();
        assert_eq!(r.label(), "2-homotopy-connected");
        assert_eq!(phase_classify_rational(-32, 5, 8, 2).unwrap().region, PhaseRegion::HomotopyConnected);
    }

    #[test]
    fn other_regions() {
        assert_eq!(phase_classify(0.0, 5, 2).unwrap().region, PhaseRegion::BettiFinite);
        assert_eq!(phase_classify(1.0, 5, 1).unwrap().region, PhaseRegion::Unclassified);
        assert_eq!(phase_classify(-2.0, 3, 1).unwrap().region, PhaseRegion::InsufficientM);
        assert_eq!(phase_classify(0.0, 1, 1).unwrap().region, PhaseRegion::InsufficientM);
        assert!(phase_classify(-8.0, 8, 1).is_err());
        assert!(phase_classify(0.0, 8, 0).is_err());
        assert!(phase_classify_rational(-8, 1, 8, 1).is_err());
    }

    #[test]
    fn float_and_rational_agree_off_boundaries() {
        for m in 1..12u32 {
            for num in (-(m as i64) * 7 + 1)..(m as i64 * 14) {
                for q in 1..5 {
                    let r = phase_classify_rational(num, 7, m, q).unwrap();
                    let f = phase_classify(num as f64 / 7.0, m, q).unwrap();
                    assert_eq!(r.region, f.region, "delta = {num}/7, m = {m}, q = {q}");
                }
            }
        }
    }
}
