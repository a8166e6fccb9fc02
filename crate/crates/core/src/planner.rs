//! Reflecting-element planning.
//!
//! Two sufficient-style counts come from a `k`-sigma margin on the gain law,
//! `g_m(M) = μ_g(M) − k σ_g(M)`:
//!
//! * `M_inf`, the first `M` with `g_m(M) ≥ √c`, below which the spike is
//!   mostly buried in the bulk;
//! * `M_PD`, the first `M` with `g_m(M) ≥ g₀`, where `g₀` is the larger root
//!   of `f(g) = μ_T(g) − k σ_T(g) = γ`.
//!
//! [`m_for_target_pd`] instead searches the analytical detection
//! probability directly.

use serde::Serialize;
use thiserror::Error;

use crate::channel::ChannelConfig;
use crate::detector::{
    analytical_pd, detection_threshold, spiked_mean, spiked_variance, DetectorError, SensingConfig,
};
use crate::gain::{gain_law, GainCase};

/// Default multiplier in the sigma margins.
pub const THREE_SIGMA: f64 = 3.0;
/// Largest element count the searches will consider.
pub const MAX_ELEMENTS: usize = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PlanError {
    #[error("no element count up to {limit} satisfies the requirement")]
    Infeasible { limit: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("bracket search failed: {0}")]
    Bracket(String),
    #[error(transparent)]
    Detector(#[from] DetectorError),
}

/// Search settings shared by the planner entry points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlanOptions {
    pub sigmas: f64,
    pub max_elements: usize,
}

impl Default for PlanOptions {
    fn default() -> Self {
        Self {
            sigmas: THREE_SIGMA,
            max_elements: MAX_ELEMENTS,
        }
    }
}

/// `μ_g(m) − k σ_g(m)` for the case's gain law.
pub fn g_margin(m: f64, cfg: &ChannelConfig, case: GainCase, sigmas: f64) -> f64 {
    gain_law(cfg, case, m).margin(sigmas)
}

/// `f(g) = μ_T(g) − k σ_T(g)` on `g > √c` (gain already scaled to a spike).
pub fn f_of_g(g: f64, sensing: &SensingConfig, sigmas: f64) -> Result<f64, PlanError> {
    let c = sensing.c;
    if !(g > c.sqrt()) {
        return Err(PlanError::Domain(format!(
            "f(g) needs g > √c = {}, got {g}",
            c.sqrt()
        )));
    }
    Ok(spiked_mean(g, c) - sigmas * spiked_variance(g, c, sensing.samples).sqrt())
}

/// Larger root of `f(g) = γ` with its certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RootCertificate {
    pub root: f64,
    /// Final bisection bracket `(lo, hi)` with `f(lo) ≤ γ ≤ f(hi)`.
    pub bracket: (f64, f64),
    pub residual: f64,
    pub iterations: usize,
    /// Minimizer of `f` and the minimum value.
    pub minimizer: f64,
    pub min_value: f64,
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section minimizer of `f` on `(√c, ∞)`; `f` falls and then rises.
fn minimize_f(sensing: &SensingConfig, sigmas: f64) -> Result<(f64, f64, usize), PlanError> {
    let sc = sensing.c.sqrt();
    let f = |g: f64| f_of_g(g, sensing, sigmas);
    let a0 = sc * (1.0 + 1e-12);
    let mut b = 2.0 * sc;
    let mut grown = 0;
    // Grow until f increases at b, which puts the minimizer inside (a0, b).
    while f(b * 1.01)? <= f(b)? {
        b *= 2.0;
        grown += 1;
        if grown > 200 {
            return Err(PlanError::Bracket("minimizer of f not bracketed".into()));
        }
    }
    let (mut lo, mut hi) = (a0, b * 1.01);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    let mut iters = 0;
    while hi - lo > 1e-13 * hi {
        iters += 1;
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        }
        if iters > 500 {
            break;
        }
    }
    let g = 0.5 * (lo + hi);
    Ok((g, f(g)?, iters + grown))
}

/// Larger root of `f(g) = γ`, in spike units; `None` when `f > γ` on the
/// whole domain.
pub fn g0_root(
    gamma: f64,
    sensing: &SensingConfig,
    sigmas: f64,
) -> Result<Option<RootCertificate>, PlanError> {
    let (gmin, fmin, mut iters) = minimize_f(sensing, sigmas)?;
    if fmin > gamma {
        return Ok(None);
    }
    let f = |g: f64| f_of_g(g, sensing, sigmas);
    let mut lo = gmin;
    let mut hi = gmin.max(1e-3) * 2.0;
    while f(hi)? < gamma {
        lo = hi;
        hi *= 2.0;
        iters += 1;
        if hi > 1e12 {
            return Err(PlanError::Bracket("upper root bracket exhausted".into()));
        }
    }
    while hi - lo > 1e-13 * hi {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? < gamma {
            lo = mid;
        } else {
            hi = mid;
        }
        iters += 1;
    }
    let root = if (f(lo)? - gamma).abs() <= (f(hi)? - gamma).abs() {
        lo
    } else {
        hi
    };
    Ok(Some(RootCertificate {
        root,
        bracket: (lo, hi),
        residual: f(root)? - gamma,
        iterations: iters,
        minimizer: gmin,
        min_value: fmin,
    }))
}

/// Integer crossing with its certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Crossing {
    pub m: usize,
    /// Real-valued crossing found before rounding (absent for `m ≤ 1`).
    pub real_root: Option<f64>,
    pub evaluations: usize,
}

/// Smallest integer `M` with `g_margin(M) ≥ level`.
///
/// The margin is assumed to be quasi-convex in `M ≥ 1` (it may dip while
/// the variance grows faster than the mean, then rises for good), so the
/// crossing from below is unique. The real root is bracketed exponentially,
/// refined by bisection, rounded up, and corrected locally until the
/// integer certificate holds.
pub fn margin_crossing(
    cfg: &ChannelConfig,
    case: GainCase,
    level: f64,
    opts: &PlanOptions,
) -> Result<Crossing, PlanError> {
    let gm = |m: f64| g_margin(m, cfg, case, opts.sigmas);
    let mut evals = 2;
    if gm(0.0) >= level {
        return Ok(Crossing {
            m: 0,
            real_root: None,
            evaluations: 1,
        });
    }
    if gm(1.0) >= level {
        return Ok(Crossing {
            m: 1,
            real_root: None,
            evaluations: 2,
        });
    }
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    while gm(hi) < level {
        lo = hi;
        hi *= 2.0;
        evals += 1;
        if hi > opts.max_elements as f64 * 2.0 {
            return Err(PlanError::Infeasible {
                limit: opts.max_elements,
            });
        }
    }
    while hi - lo > 1e-9 * hi {
        let mid = 0.5 * (lo + hi);
        if gm(mid) < level {
            lo = mid;
        } else {
            hi = mid;
        }
        evals += 1;
    }
    let mut m = hi.ceil() as usize;
    while gm(m as f64) < level {
        m += 1;
        evals += 1;
    }
    while m > 1 && gm((m - 1) as f64) >= level {
        m -= 1;
        evals += 1;
    }
    if m > opts.max_elements {
        return Err(PlanError::Infeasible {
            limit: opts.max_elements,
        });
    }
    Ok(Crossing {
        m,
        real_root: Some(hi),
        evaluations: evals,
    })
}

/// Level `√c` expressed as a gain.
fn edge_gain(sensing: &SensingConfig) -> f64 {
    sensing.c.sqrt() / sensing.spike(1.0)
}

pub fn m_inf(
    cfg: &ChannelConfig,
    sensing: &SensingConfig,
    case: GainCase,
    opts: &PlanOptions,
) -> Result<Crossing, PlanError> {
    margin_crossing(cfg, case, edge_gain(sensing), opts)
}

/// `g₀` expressed as a gain, or `None` when `f(g) = γ` has no root.
pub fn g0_gain(
    sensing: &SensingConfig,
    opts: &PlanOptions,
) -> Result<Option<RootCertificate>, PlanError> {
    let gamma = detection_threshold(sensing)?;
    let scale = sensing.spike(1.0);
    Ok(g0_root(gamma, sensing, opts.sigmas)?.map(|mut r| {
        r.root /= scale;
        r.bracket = (r.bracket.0 / scale, r.bracket.1 / scale);
        r.minimizer /= scale;
        r
    }))
}

pub fn m_pd(
    cfg: &ChannelConfig,
    sensing: &SensingConfig,
    case: GainCase,
    opts: &PlanOptions,
) -> Result<Crossing, PlanError> {
    match g0_gain(sensing, opts)? {
        Some(r) => margin_crossing(cfg, case, r.root, opts),
        None => m_inf(cfg, sensing, case, opts),
    }
}

/// Minimum `M` meeting a detection-probability target.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TargetSearch {
    pub m: usize,
    pub pd_at_m: f64,
    pub evaluations: usize,
    /// Every spot check of `P_d(M)` along the bracket was nondecreasing.
    pub monotone_checks_passed: bool,
}

/// Smallest `M` with `analytical_pd(law(M)) ≥ target`, by exponential
/// bracketing and integer bisection.
pub fn m_for_target_pd(
    cfg: &ChannelConfig,
    sensing: &SensingConfig,
    case: GainCase,
    target: f64,
    opts: &PlanOptions,
) -> Result<TargetSearch, PlanError> {
    if !(target > 0.0 && target < 1.0) {
        return Err(PlanError::Domain(format!(
            "target must lie in (0, 1), got {target}"
        )));
    }
    let pd = |m: usize| analytical_pd(&gain_law(cfg, case, m as f64), sensing);
    let mut evals = 1;
    let p0 = pd(0)?;
    if target <= sensing.alpha || p0 >= target {
        return Ok(TargetSearch {
            m: 0,
            pd_at_m: p0,
            evaluations: evals,
            monotone_checks_passed: true,
        });
    }
    let mut monotone = true;
    let (mut lo, mut hi) = (0usize, 1usize);
    let mut p_lo = p0;
    let mut p_hi = pd(hi)?;
    evals += 1;
    while p_hi < target {
        monotone &= p_hi >= p_lo - 1e-12;
        lo = hi;
        p_lo = p_hi;
        hi *= 2;
        if hi > 2 * opts.max_elements {
            return Err(PlanError::Infeasible {
                limit: opts.max_elements,
            });
        }
        p_hi = pd(hi)?;
        evals += 1;
    }
    monotone &= p_hi >= p_lo - 1e-12;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        let p = pd(mid)?;
        evals += 1;
        monotone &= p >= p_lo - 1e-12 && p <= p_hi + 1e-12;
        if p < target {
            lo = mid;
            p_lo = p;
        } else {
            hi = mid;
            p_hi = p;
        }
    }
    if hi > opts.max_elements {
        return Err(PlanError::Infeasible {
            limit: opts.max_elements,
        });
    }
    Ok(TargetSearch {
        m: hi,
        pd_at_m: p_hi,
        evaluations: evals,
        monotone_checks_passed: monotone,
    })
}

/// All planner outputs for one parameter point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanResult {
    pub gamma: f64,
    pub m_inf: usize,
    /// Gain `g₀`; `None` when `f = γ` has no root and `M_inf` suffices.
    pub g0: Option<f64>,
    pub m_pd: usize,
    pub root: Option<RootCertificate>,
    pub m_inf_crossing: Crossing,
    pub m_pd_crossing: Crossing,
}

impl PlanResult {
    /// `M_PD` fell back to `M_inf` because `g₀` is absent.
    pub fn m_pd_not_required(&self) -> bool {
        self.g0.is_none()
    }
}

pub fn plan(
    cfg: &ChannelConfig,
    sensing: &SensingConfig,
    case: GainCase,
    opts: &PlanOptions,
) -> Result<PlanResult, PlanError> {
    let gamma = detection_threshold(sensing)?;
    let inf = m_inf(cfg, sensing, case, opts)?;
    let root = g0_gain(sensing, opts)?;
    let pd = match &root {
        Some(r) => margin_crossing(cfg, case, r.root, opts)?,
        None => inf,
    };
    Ok(PlanResult {
        gamma,
        m_inf: inf.m,
        g0: root.map(|r| r.root),
        m_pd: pd.m,
        root,
        m_inf_crossing: inf,
        m_pd_crossing: pd,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn planning_setup(c: f64) -> (ChannelConfig, SensingConfig) {
        let ch = ChannelConfig {
            antennas: 64,
            beta_d: 0.01 / 64.0,
            beta_f: 1e-3,
            beta_g: 1e-3,
            kappa_f: 5.0,
            kappa_g: 5.0,
            ..ChannelConfig::default()
        };
        (ch, SensingConfig::new(64, c, 0.1).unwrap())
    }

    #[test]
    fn margin_examples() {
        let (ch, _) = planning_setup(0.01);
        let m0 = g_margin(0.0, &ch, GainCase::Rician, 3.0);
        assert!((m0 - (0.01 - 3.0 * 8.0 * ch.beta_d)).abs() < 1e-15);
        let los = ChannelConfig { los: true, ..ch };
        let m = g_margin(40.0, &los, GainCase::LoS, 3.0);
        assert!((m - (0.1124 - 3.0 * 3.2e-5f64.sqrt())).abs() < 1e-12, "{m}");
    }

    #[test]
    fn f_examples() {
        let s = SensingConfig::new(64, 0.01, 0.1).unwrap();
        assert!((f_of_g(0.2, &s, 3.0).unwrap() - (1.26 - 3.0 * 1.6875e-4f64.sqrt())).abs() < 1e-12);
        // Near the edge f − (1+√c)² ≈ −3√(2ε(1+√c)²/n), so the gap is
        // 1.8e−6 at n = 6400 and below 1e−6 once n ≥ 23 000.
        let g = 0.1 * (1.0 + 1e-9);
        let expected = 3.0 * (2e-9 * 1.21 / 6400.0f64).sqrt();
        assert!(((1.21 - f_of_g(g, &s, 3.0).unwrap()) / expected - 1.0).abs() < 1e-3);
        let big = SensingConfig::new(512, 0.01, 0.1).unwrap();
        assert!((f_of_g(g, &big, 3.0).unwrap() - 1.21).abs() < 1e-6);
        assert!(f_of_g(0.1, &s, 3.0).is_err());
    }

    #[test]
    fn g0_properties() {
        let s = SensingConfig::new(64, 0.01, 0.1).unwrap();
        let gamma = detection_threshold(&s).unwrap();
        let r = g0_root(gamma, &s, 3.0).unwrap().expect("root exists");
        assert!(r.residual.abs() < 1e-10);
        assert!(f_of_g(1.01 * r.root, &s, 3.0).unwrap() > gamma);
        assert!(g0_root(r.min_value - 1e-6, &s, 3.0).unwrap().is_none());
    }

    #[test]
    fn m_inf_certificate_and_zero_case() {
        let (ch, s) = planning_setup(0.01);
        let opts = PlanOptions::default();
        let m = m_inf(&ch, &s, GainCase::Rician, &opts).unwrap().m;
        assert!(g_margin(m as f64, &ch, GainCase::Rician, 3.0) >= 0.1);
        assert!(g_margin((m - 1) as f64, &ch, GainCase::Rician, 3.0) < 0.1);
        let strong = ChannelConfig { beta_d: 1.0, ..ch };
        assert_eq!(m_inf(&strong, &s, GainCase::Rician, &opts).unwrap().m, 0);
    }

    #[test]
    fn ordering() {
        let (ch, s) = planning_setup(0.01);
        let opts = PlanOptions::default();
        let p = plan(&ch, &s, GainCase::Rician, &opts).unwrap();
        assert!(p.m_pd >= p.m_inf);
        let t: Vec<usize> = [0.9, 0.99, 0.999]
            .iter()
            .map(|&t| {
                m_for_target_pd(&ch, &s, GainCase::Rician, t, &opts)
                    .unwrap()
                    .m
            })
            .collect();
        assert!(t[0] <= t[1] && t[1] <= t[2], "{t:?}");
        assert_eq!(
            m_for_target_pd(&ch, &s, GainCase::Rician, 0.1, &opts)
                .unwrap()
                .m,
            0
        );
    }

    #[test]
    fn infeasible_reported() {
        let (ch, s) = planning_setup(0.01);
        let dead = ChannelConfig { beta_f: 0.0, ..ch };
        assert!(matches!(
            m_inf(&dead, &s, GainCase::Rician, &PlanOptions::default()),
            Err(PlanError::Infeasible { .. })
        ));
    }
}
