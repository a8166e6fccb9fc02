//! Maximum-eigenvalue detection: threshold calibration, the spiked law of
//! the statistic under H1, and the analytical detection probability.
//!
//! `T = λ_max((1/n) X Xᴴ) / σ_u²`. Under H0, `T` sits at the bulk edge
//! `(1+√c)²` with Tracy-Widom fluctuations of size `N^{-2/3}`. Under H1 with
//! gain `g > √c` the top eigenvalue separates and is Gaussian with
//! `μ_T = g+1+c+c/g`, `v_T = ((g+1)²/n)(1 − c/g²)`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gain::GainDistribution;
use crate::linalg::{largest_eigenvalue, ComplexMatrix, EigenOptions, LinalgError};
use crate::quadrature::integrate_adaptive;
use crate::tracy_widom::{tw2_cdf, tw2_quantile, wishart_edge_scaling, Tw2Error};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DetectorError {
    #[error("invalid sensing configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    TracyWidom(#[from] Tw2Error),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("detection-probability quadrature did not converge (error estimate {estimate:e})")]
    Quadrature { estimate: f64 },
}

/// Detector-side parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensingConfig {
    /// Antennas `N`.
    pub antennas: usize,
    /// Samples per decision `n`.
    pub samples: usize,
    /// Ratio `c = N/n` used in the asymptotic formulas.
    pub c: f64,
    /// False-alarm cap `α`.
    pub alpha: f64,
    pub sigma_u_sq: f64,
    pub sigma_s_sq: f64,
}

impl SensingConfig {
    /// `n = round(N/c)`, unit noise and signal powers.
    pub fn new(antennas: usize, c: f64, alpha: f64) -> Result<Self, DetectorError> {
        if !(c > 0.0 && c < 1.0) {
            return Err(DetectorError::InvalidConfig(format!(
                "c must lie in (0, 1), got {c}"
            )));
        }
        let cfg = Self {
            antennas,
            samples: (antennas as f64 / c).round() as usize,
            c,
            alpha,
            sigma_u_sq: 1.0,
            sigma_s_sq: 1.0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), DetectorError> {
        let bad = |m: String| Err(DetectorError::InvalidConfig(m));
        if self.antennas == 0 {
            return bad("antennas must be ≥ 1".into());
        }
        if !(self.c > 0.0 && self.c < 1.0) {
            return bad(format!("c must lie in (0, 1), got {}", self.c));
        }
        if self.samples != (self.antennas as f64 / self.c).round() as usize {
            return bad(format!(
                "samples {} inconsistent with N = {} and c = {}",
                self.samples, self.antennas, self.c
            ));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad(format!("alpha must lie in (0, 1), got {}", self.alpha));
        }
        if !(self.sigma_u_sq > 0.0 && self.sigma_u_sq.is_finite()) {
            return bad("sigma_u_sq must be > 0".into());
        }
        if !(self.sigma_s_sq >= 0.0 && self.sigma_s_sq.is_finite()) {
            return bad("sigma_s_sq must be ≥ 0".into());
        }
        Ok(())
    }

    pub fn sqrt_c(&self) -> f64 {
        self.c.sqrt()
    }

    /// Spike strength `τ − 1` of a channel with gain `g`.
    pub fn spike(&self, g: f64) -> f64 {
        g * self.sigma_s_sq / self.sigma_u_sq
    }
}

/// `γ = N^{-2/3}(1+√c)^{4/3}√c · F2⁻¹(1−α) + (1+√c)²`.
pub fn detection_threshold(cfg: &SensingConfig) -> Result<f64, DetectorError> {
    if !(cfg.alpha > 0.0 && cfg.alpha < 1.0) {
        return Err(DetectorError::InvalidConfig(format!(
            "alpha must lie in (0, 1), got {}",
            cfg.alpha
        )));
    }
    let (center, scale) = wishart_edge_scaling(cfg.antennas, cfg.c);
    Ok(center + scale * tw2_quantile(1.0 - cfg.alpha)?)
}

/// Asymptotic false-alarm probability of threshold `gamma`.
pub fn analytical_pfa(gamma: f64, cfg: &SensingConfig) -> f64 {
    let (center, scale) = wishart_edge_scaling(cfg.antennas, cfg.c);
    1.0 - tw2_cdf((gamma - center) / scale)
}

/// Law of `T` under H1 for a fixed gain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpikedLaw {
    /// `g ≤ √c`: no separation, Tracy-Widom at the edge.
    BulkEdge,
    Spiked {
        mu_t: f64,
        v_t: f64,
    },
}

/// `μ_T(g) = g+1+c+c/g` (valid for `g > 0`).
pub fn spiked_mean(g: f64, c: f64) -> f64 {
    g + 1.0 + c + c / g
}

/// `v_T(g) = ((g+1)²/n)(1 − c/g²)`, clamped at zero.
pub fn spiked_variance(g: f64, c: f64, n: usize) -> f64 {
    ((g + 1.0).powi(2) / n as f64 * (1.0 - c / (g * g))).max(0.0)
}

pub fn spiked_law(g: f64, cfg: &SensingConfig) -> SpikedLaw {
    let s = cfg.spike(g);
    if s <= cfg.sqrt_c() {
        SpikedLaw::BulkEdge
    } else {
        SpikedLaw::Spiked {
            mu_t: spiked_mean(s, cfg.c),
            v_t: spiked_variance(s, cfg.c, cfg.samples),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decision {
    D0,
    D1,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecisionOutcome {
    pub decision: Decision,
    pub statistic: f64,
}

/// Declare D1 iff `T > γ`.
pub fn decide(statistic: f64, gamma: f64) -> Decision {
    if statistic > gamma {
        Decision::D1
    } else {
        Decision::D0
    }
}

pub fn med_decide(
    samples: &ComplexMatrix,
    gamma: f64,
    cfg: &SensingConfig,
    opts: &EigenOptions,
) -> Result<DecisionOutcome, DetectorError> {
    let statistic = largest_eigenvalue(samples, opts)? / cfg.sigma_u_sq;
    Ok(DecisionOutcome {
        decision: decide(statistic, gamma),
        statistic,
    })
}

/// Gaussian upper tail `Q(x)`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// `P(T > γ | g)` under the asymptotic laws; `pfa` on the bulk-edge branch.
pub fn conditional_pd(g: f64, gamma: f64, pfa: f64, cfg: &SensingConfig) -> f64 {
    match spiked_law(g, cfg) {
        SpikedLaw::BulkEdge => pfa,
        SpikedLaw::Spiked { mu_t, v_t } => {
            if v_t == 0.0 {
                return if mu_t > gamma {
                    1.0
                } else if mu_t < gamma {
                    0.0
                } else {
                    0.5
                };
            }
            q_function((gamma - mu_t) / v_t.sqrt())
        }
    }
}

/// Quadrature tolerance on the detection probability.
pub const PD_TOLERANCE: f64 = 1e-9;
const PD_SIGMAS: f64 = 8.0;

/// Analytical detection probability with the calibrated threshold.
pub fn analytical_pd(dist: &GainDistribution, cfg: &SensingConfig) -> Result<f64, DetectorError> {
    let gamma = detection_threshold(cfg)?;
    pd_integral(dist, cfg, gamma, cfg.alpha)
}

/// Analytical detection probability for an arbitrary threshold; the
/// bulk-edge branch then uses the threshold's own false-alarm level.
pub fn analytical_pd_at_threshold(
    dist: &GainDistribution,
    cfg: &SensingConfig,
    gamma: f64,
) -> Result<f64, DetectorError> {
    pd_integral(dist, cfg, gamma, analytical_pfa(gamma, cfg))
}

/// `P_d = P_fa·P(g ≤ √c) + ∫_{√c}^∞ Q((γ−μ_T(g))/σ_T(g)) p(g) dg`.
fn pd_integral(
    dist: &GainDistribution,
    cfg: &SensingConfig,
    gamma: f64,
    pfa: f64,
) -> Result<f64, DetectorError> {
    // Gains are compared against √c after the σ_s²/σ_u² scaling.
    let edge = cfg.sqrt_c() * cfg.sigma_u_sq / cfg.sigma_s_sq.max(f64::MIN_POSITIVE);
    let sd = dist.std_dev();
    if sd == 0.0 {
        return Ok(conditional_pd(dist.mean, gamma, pfa, cfg));
    }
    let below = dist.cdf(edge);
    let lo = edge.max(dist.mean - PD_SIGMAS * sd);
    let hi = dist.mean + PD_SIGMAS * sd;
    let mut total = pfa * below;
    if hi <= lo {
        return Ok(total.clamp(0.0, 1.0));
    }
    let integrand = |g: f64| conditional_pd(g, gamma, pfa, cfg) * dist.density(g);

    // Split at the gain where μ_T crosses γ; the inner tail switches from 0
    // to 1 across a window of width σ_T/μ_T' there.
    let mut cuts = vec![lo];
    let (s_scale, c) = (cfg.spike(1.0), cfg.c);
    let b = gamma - 1.0 - c;
    let disc = b * b - 4.0 * c;
    if b > 0.0 && disc >= 0.0 {
        let s_star = 0.5 * (b + disc.sqrt());
        let g_star = s_star / s_scale;
        let slope = (1.0 - c / (s_star * s_star)).max(1e-12);
        let width = spiked_variance(s_star, c, cfg.samples).sqrt() / slope / s_scale;
        for x in [
            g_star - PD_SIGMAS * width,
            g_star,
            g_star + PD_SIGMAS * width,
        ] {
            if x > lo && x < hi {
                cuts.push(x);
            }
        }
    }
    cuts.push(hi);
    let mut err = 0.0;
    for w in cuts.windows(2) {
        let r = integrate_adaptive(integrand, w[0], w[1], PD_TOLERANCE, 30);
        total += r.value;
        err += r.error_estimate;
    }
    if err > 1e2 * PD_TOLERANCE {
        return Err(DetectorError::Quadrature { estimate: err });
    }
    Ok(total.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gain::GainCase;

    fn law(mean: f64, variance: f64) -> GainDistribution {
        GainDistribution {
            mean,
            variance,
            case: GainCase::Rician,
        }
    }

    #[test]
    fn threshold_coefficient() {
        let cfg = SensingConfig::new(64, 0.01, 0.1).unwrap();
        let gamma = detection_threshold(&cfg).unwrap();
        let q = tw2_quantile(0.9).unwrap();
        assert!((gamma - (1.21 + 0.007_096_92 * q)).abs() < 1e-7, "{gamma}");
        assert!((analytical_pfa(gamma, &cfg) - 0.1).abs() < 1e-6);
    }

    #[test]
    fn threshold_below_edge_near_half() {
        let cfg = SensingConfig::new(64, 0.01, 0.499).unwrap();
        assert!(detection_threshold(&cfg).unwrap() < 1.21);
        let bad = SensingConfig { alpha: 1.0, ..cfg };
        assert!(detection_threshold(&bad).is_err());
    }

    #[test]
    fn spiked_examples() {
        let cfg = SensingConfig::new(64, 0.01, 0.1).unwrap();
        assert_eq!(cfg.samples, 6400);
        assert_eq!(spiked_law(0.1, &cfg), SpikedLaw::BulkEdge);
        match spiked_law(0.2, &cfg) {
            SpikedLaw::Spiked { mu_t, v_t } => {
                assert!((mu_t - 1.26).abs() < 1e-14);
                assert!((v_t - 1.6875e-4).abs() < 1e-16);
            }
            other => panic!("{other:?}"),
        }
        assert!((spiked_mean(0.1, 0.01) - 1.21).abs() < 1e-15);
        assert!(spiked_variance(0.1, 0.01, 6400) < 1e-18);
    }

    #[test]
    fn decisions() {
        let cfg = SensingConfig::new(4, 0.25, 0.1).unwrap();
        let zero = ComplexMatrix::zeros(4, 16).unwrap();
        let out = med_decide(&zero, 1.5, &cfg, &EigenOptions::default()).unwrap();
        assert_eq!((out.decision, out.statistic), (Decision::D0, 0.0));
        let planted = ComplexMatrix::from_fn(4, 16, |i, _| {
            num_complex::Complex64::new(if i == 0 { 10.0 } else { 0.0 }, 0.0)
        })
        .unwrap();
        let out = med_decide(&planted, 1.5, &cfg, &EigenOptions::default()).unwrap();
        assert_eq!(out.decision, Decision::D1);
    }

    #[test]
    fn pd_limits() {
        let cfg = SensingConfig::new(64, 0.01, 0.1).unwrap();
        let sd = 1e-3;
        let below = law(0.1 - 10.0 * sd, sd * sd);
        assert!((analytical_pd(&below, &cfg).unwrap() - 0.1).abs() < 1e-12);
        let point = law(0.5, 0.0);
        assert!(analytical_pd(&point, &cfg).unwrap() >= 0.9987);
    }

    #[test]
    fn pd_monotone_in_mean_and_alpha() {
        let cfg = SensingConfig::new(64, 0.01, 0.1).unwrap();
        let mut last = 0.0;
        for k in 0..40 {
            let p = analytical_pd(&law(0.05 + 0.005 * k as f64, 1e-4), &cfg).unwrap();
            assert!(p >= last - 1e-12, "k = {k}");
            last = p;
        }
        let d = law(0.16, 1e-4);
        let lo = analytical_pd(
            &d,
            &SensingConfig {
                alpha: 0.01,
                ..cfg.clone()
            },
        )
        .unwrap();
        let hi = analytical_pd(&d, &SensingConfig { alpha: 0.2, ..cfg }).unwrap();
        assert!(hi > lo);
    }
}
