//! Asymptotic Gaussian laws of the channel gains.
//!
//! Three gains matter: the direct power `‖d‖²`, the cascade power
//! `r = ‖GΦf‖²`, and the equivalent gain `g = ‖d + GΦf‖²`. Every law here is
//! evaluated for a real-valued element count `m`, so the planner can solve
//! for crossings continuously before rounding.
//!
//! Rician notation: `a = β̄_f`, `b = β̃_f`, `A = β̄_G`, `B = β̃_G`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::ChannelConfig;
use crate::linalg::{ComplexMatrix, LinalgError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GainError {
    #[error("component index {0} outside 1..=25")]
    ComponentIndex(usize),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GainCase {
    Direct,
    #[serde(rename = "los")]
    LoS,
    Rayleigh,
    Rician,
}

impl GainCase {
    /// Case implied by the channel configuration (surface present).
    pub fn for_config(cfg: &ChannelConfig) -> Self {
        if cfg.los {
            Self::LoS
        } else if cfg.kappa_f == 0.0 && cfg.kappa_g == 0.0 {
            Self::Rayleigh
        } else {
            Self::Rician
        }
    }
}

impl std::fmt::Display for GainCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Direct => "direct",
            Self::LoS => "los",
            Self::Rayleigh => "rayleigh",
            Self::Rician => "rician",
        })
    }
}

impl std::str::FromStr for GainCase {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "direct" => Ok(Self::Direct),
            "los" => Ok(Self::LoS),
            "rayleigh" => Ok(Self::Rayleigh),
            "rician" => Ok(Self::Rician),
            other => Err(format!("unknown gain case '{other}'")),
        }
    }
}

/// Gaussian law `N(mean, variance)` tagged with the case that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainDistribution {
    pub mean: f64,
    pub variance: f64,
    pub case: GainCase,
}

impl GainDistribution {
    pub fn std_dev(&self) -> f64 {
        self.variance.max(0.0).sqrt()
    }

    /// `mean − k·σ`.
    pub fn margin(&self, sigmas: f64) -> f64 {
        self.mean - sigmas * self.std_dev()
    }

    pub fn density(&self, x: f64) -> f64 {
        let s = self.std_dev();
        if s == 0.0 {
            return 0.0;
        }
        let z = (x - self.mean) / s;
        (-0.5 * z * z).exp() / (s * (2.0 * std::f64::consts::PI).sqrt())
    }

    pub fn cdf(&self, x: f64) -> f64 {
        let s = self.std_dev();
        if s == 0.0 {
            return if x >= self.mean { 1.0 } else { 0.0 };
        }
        0.5 * libm::erfc(-(x - self.mean) / (s * std::f64::consts::SQRT_2))
    }
}

fn n_of(cfg: &ChannelConfig) -> f64 {
    cfg.antennas as f64
}

/// `(N β_d, N β_d²)`.
pub fn gain_dist_direct(cfg: &ChannelConfig) -> GainDistribution {
    let n = n_of(cfg);
    GainDistribution {
        mean: n * cfg.beta_d,
        variance: n * cfg.beta_d * cfg.beta_d,
        case: GainCase::Direct,
    }
}

/// Line-of-sight surface with designed phases:
/// `μ = Nβ_d + m²Nβ_fβ_G`, `v = 2m²Nβ_dβ_fβ_G`.
pub fn gain_dist_los_at(cfg: &ChannelConfig, m: f64) -> GainDistribution {
    if m == 0.0 {
        return gain_dist_direct(cfg);
    }
    let n = n_of(cfg);
    let bb = cfg.cascade_loss();
    GainDistribution {
        mean: n * cfg.beta_d + m * m * n * bb,
        variance: 2.0 * m * m * n * cfg.beta_d * bb,
        case: GainCase::LoS,
    }
}

pub fn gain_dist_los(cfg: &ChannelConfig) -> GainDistribution {
    gain_dist_los_at(cfg, cfg.elements as f64)
}

/// Rayleigh cascade: `μ_r = mNβ_fβ_G`, `v_r = (m+N)mN(β_fβ_G)²`.
pub fn cascade_dist_rayleigh_at(cfg: &ChannelConfig, m: f64) -> GainDistribution {
    let n = n_of(cfg);
    let bb = cfg.cascade_loss();
    GainDistribution {
        mean: m * n * bb,
        variance: (m + n) * m * n * bb * bb,
        case: GainCase::Rayleigh,
    }
}

pub fn cascade_dist_rayleigh(cfg: &ChannelConfig) -> GainDistribution {
    cascade_dist_rayleigh_at(cfg, cfg.elements as f64)
}

/// Rayleigh equivalent gain through the surrogate `β_r = √((m+N)m) β_fβ_G`:
/// `μ = Nβ_d + mNβ_fβ_G`, `v = N(β_d + β_r)²`.
pub fn gain_dist_rayleigh_at(cfg: &ChannelConfig, m: f64) -> GainDistribution {
    if m == 0.0 {
        return gain_dist_direct(cfg);
    }
    let n = n_of(cfg);
    let bb = cfg.cascade_loss();
    let beta_r = ((m + n) * m).sqrt() * bb;
    GainDistribution {
        mean: n * cfg.beta_d + m * n * bb,
        variance: n * (cfg.beta_d + beta_r).powi(2),
        case: GainCase::Rayleigh,
    }
}

pub fn gain_dist_rayleigh(cfg: &ChannelConfig) -> GainDistribution {
    gain_dist_rayleigh_at(cfg, cfg.elements as f64)
}

/// Rician cascade mean and the seven-term variance (designed phases).
pub fn cascade_dist_rician_at(cfg: &ChannelConfig, m: f64) -> GainDistribution {
    let n = n_of(cfg);
    let (a, b) = cfg.split_f();
    let (ga, gb) = cfg.split_g();
    GainDistribution {
        mean: rician_cascade_mean(m, n, a, b, ga, gb),
        variance: rician_cascade_variance(m, n, a, b, ga, gb),
        case: GainCase::Rician,
    }
}

pub fn cascade_dist_rician(cfg: &ChannelConfig) -> GainDistribution {
    cascade_dist_rician_at(cfg, cfg.elements as f64)
}

/// `m²N aA + mN(bA + aB + bB)`.
pub fn rician_cascade_mean(m: f64, n: f64, a: f64, b: f64, ga: f64, gb: f64) -> f64 {
    m * m * n * a * ga + m * n * (b * ga + a * gb + b * gb)
}

pub fn rician_cascade_variance(m: f64, n: f64, a: f64, b: f64, ga: f64, gb: f64) -> f64 {
    let (m2, m3, n2) = (m * m, m * m * m, n * n);
    2.0 * m3 * n2 * a * b * ga * ga
        + 2.0 * m3 * n * a * a * ga * gb
        + (2.0 * m3 * n + 4.0 * m2 * n2 + 4.0 * m2 * n) * a * b * ga * gb
        + m2 * n2 * b * b * ga * ga
        + 2.0 * m2 * n * b * b * ga * gb
        + 2.0 * (m + n) * m * n * a * b * gb * gb
        + (m + n) * m * n * b * b * gb * gb
}

/// Parameters of the Rician vector with the same first two moments as `r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RicianEquivalents {
    /// `‖h̄‖²`.
    pub hbar_sq: f64,
    /// `σ_h²`.
    pub sigma_h_sq: f64,
    /// The radicand `μ_r² − N v_r` was negative and `‖h̄‖²` was set to 0.
    pub clamped: bool,
}

/// `‖h̄‖² = √(N(μ_r²/N − v_r))`, `σ_h² = (μ_r − ‖h̄‖²)/N`.
pub fn rician_equivalents(mu_r: f64, v_r: f64, n: usize) -> RicianEquivalents {
    let nf = n as f64;
    let radicand = nf * (mu_r * mu_r / nf - v_r);
    let (hbar_sq, clamped) = if radicand >= 0.0 {
        (radicand.sqrt(), false)
    } else {
        (0.0, true)
    };
    RicianEquivalents {
        hbar_sq,
        sigma_h_sq: (mu_r - hbar_sq) / nf,
        clamped,
    }
}

/// Rician equivalent gain together with the mapping used to build it.
pub fn gain_dist_rician_detailed(
    cfg: &ChannelConfig,
    m: f64,
) -> (GainDistribution, RicianEquivalents) {
    let r = cascade_dist_rician_at(cfg, m);
    let eq = rician_equivalents(r.mean, r.variance, cfg.antennas);
    if m == 0.0 {
        return (gain_dist_direct(cfg), eq);
    }
    let n = n_of(cfg);
    let s = eq.sigma_h_sq + cfg.beta_d;
    (
        GainDistribution {
            mean: n * s + eq.hbar_sq,
            variance: n * s * s + 2.0 * eq.hbar_sq * s,
            case: GainCase::Rician,
        },
        eq,
    )
}

/// `μ = N(σ_h²+β_d) + ‖h̄‖²`, `v = N(σ_h²+β_d)² + 2‖h̄‖²(σ_h²+β_d)`.
pub fn gain_dist_rician_at(cfg: &ChannelConfig, m: f64) -> GainDistribution {
    gain_dist_rician_detailed(cfg, m).0
}

pub fn gain_dist_rician(cfg: &ChannelConfig) -> GainDistribution {
    gain_dist_rician_at(cfg, cfg.elements as f64)
}

/// Equivalent-gain law of `case` at real element count `m`.
pub fn gain_law(cfg: &ChannelConfig, case: GainCase, m: f64) -> GainDistribution {
    match case {
        GainCase::Direct => gain_dist_direct(cfg),
        GainCase::LoS => gain_dist_los_at(cfg, m),
        GainCase::Rayleigh => gain_dist_rayleigh_at(cfg, m),
        GainCase::Rician => gain_dist_rician_at(cfg, m),
    }
}

/// Cascade law of `case` at real `m`; line of sight gives a point mass.
pub fn cascade_law(cfg: &ChannelConfig, case: GainCase, m: f64) -> GainDistribution {
    match case {
        GainCase::Direct => GainDistribution {
            mean: 0.0,
            variance: 0.0,
            case,
        },
        GainCase::LoS => GainDistribution {
            mean: m * m * n_of(cfg) * cfg.cascade_loss(),
            variance: 0.0,
            case,
        },
        GainCase::Rayleigh => cascade_dist_rayleigh_at(cfg, m),
        GainCase::Rician => cascade_dist_rician_at(cfg, m),
    }
}

/// Variance of `(xᴴAx − Tr A)/√M` for `x` with i.i.d. circular entries of
/// unit power and fourth moment `E|x|⁴`:
/// `(1/M)[Tr A² + Σ A_ii² (E|x|⁴ − 2)]`.
pub fn quadratic_form_clt_variance(
    a: &ComplexMatrix,
    fourth_moment: f64,
) -> Result<f64, GainError> {
    a.check_hermitian(1e-12)?;
    let m = a.rows();
    let mut tr_a2 = 0.0;
    let mut diag2 = 0.0;
    for i in 0..m {
        for j in 0..m {
            tr_a2 += a[(i, j)].norm_sqr();
        }
        diag2 += a[(i, i)].re * a[(i, i)].re;
    }
    Ok((tr_a2 + diag2 * (fourth_moment - 2.0)) / m as f64)
}

/// Line-of-sight (`Bar`) or scattered (`Tilde`) part of a link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Part {
    Bar,
    Tilde,
}

/// Bilinear term `f_Lᴴ Φᴴ G_Lᴴ G_R Φ f_R` identified by the parts used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Term {
    pub f_left: Part,
    pub g_left: Part,
    pub g_right: Part,
    pub f_right: Part,
}

impl Term {
    const fn new(f_left: Part, g_left: Part, g_right: Part, f_right: Part) -> Self {
        Self {
            f_left,
            g_left,
            g_right,
            f_right,
        }
    }

    /// Path-loss weight `√(β_{f_L} β_{G_L} β_{G_R} β_{f_R})`.
    pub fn weight(&self, a: f64, b: f64, ga: f64, gb: f64) -> f64 {
        let f = |p: Part| if p == Part::Bar { a } else { b };
        let g = |p: Part| if p == Part::Bar { ga } else { gb };
        (f(self.f_left) * g(self.g_left) * g(self.g_right) * f(self.f_right)).sqrt()
    }
}

use Part::{Bar as B_, Tilde as T_};

/// The 16 terms of `r` in component order: `C_k` for `k ≤ 16` is the
/// squared modulus of `TERMS[k-1]`.
pub const TERMS: [Term; 16] = [
    Term::new(B_, B_, B_, B_),
    Term::new(B_, B_, B_, T_),
    Term::new(B_, B_, T_, B_),
    Term::new(B_, B_, T_, T_),
    Term::new(T_, B_, B_, B_),
    Term::new(T_, B_, B_, T_),
    Term::new(T_, B_, T_, B_),
    Term::new(T_, B_, T_, T_),
    Term::new(B_, T_, B_, B_),
    Term::new(B_, T_, B_, T_),
    Term::new(B_, T_, T_, B_),
    Term::new(B_, T_, T_, T_),
    Term::new(T_, T_, B_, B_),
    Term::new(T_, T_, B_, T_),
    Term::new(T_, T_, T_, B_),
    Term::new(T_, T_, T_, T_),
];

/// Component `C_k = conj(first) · second`, as 0-based indices into [`TERMS`].
pub const COMPONENTS: [(usize, usize); 25] = [
    (0, 0),
    (1, 1),
    (2, 2),
    (3, 3),
    (4, 4),
    (5, 5),
    (6, 6),
    (7, 7),
    (8, 8),
    (9, 9),
    (10, 10),
    (11, 11),
    (12, 12),
    (13, 13),
    (14, 14),
    (15, 15),
    (0, 5),
    (0, 10),
    (0, 15),
    (5, 10),
    (5, 15),
    (10, 15),
    (1, 11),
    (4, 14),
    (8, 13),
];

/// Closed-form `E[C_k]` for unit path losses and designed phases.
pub fn rician_component_expectation(index: usize, m: f64, n: f64) -> Result<f64, GainError> {
    let (m2, m3, m4, n2) = (m * m, m * m * m, m * m * m * m, n * n);
    Ok(match index {
        1 => m4 * n2,
        2 => m3 * n2,
        3 => m3 * n,
        4 => m3 * n,
        5 => m3 * n2,
        6 => 2.0 * m2 * n2,
        7 => m2 * n,
        8 => m2 * n,
        9 => m3 * n,
        10 => m2 * n,
        11 => m2 * n2,
        12 => (m + n) * m * n,
        13 => m3 * n,
        14 => m2 * n,
        15 => (m + n) * m * n,
        16 => (m + n + m * n) * m * n,
        17 | 18 | 19 => m3 * n2,
        20..=24 => m2 * n2,
        25 => m2 * n,
        other => return Err(GainError::ComponentIndex(other)),
    })
}

/// Weight `β_k` of component `k` in `r²`. The eight path losses of a
/// nonvanishing component pair up, so the weight is a plain monomial.
pub fn component_weight(index: usize, a: f64, b: f64, ga: f64, gb: f64) -> Result<f64, GainError> {
    if !(1..=25).contains(&index) {
        return Err(GainError::ComponentIndex(index));
    }
    let (i, j) = COMPONENTS[index - 1];
    // Exponents of (a, b, A, B) over both terms.
    let mut e = [0i32; 4];
    for t in [TERMS[i], TERMS[j]] {
        for (p, off) in [(t.f_left, 0), (t.f_right, 0), (t.g_left, 2), (t.g_right, 2)] {
            e[off + usize::from(p == Part::Tilde)] += 1;
        }
    }
    if e.iter().all(|x| x % 2 == 0) {
        Ok(a.powi(e[0] / 2) * b.powi(e[1] / 2) * ga.powi(e[2] / 2) * gb.powi(e[3] / 2))
    } else {
        Ok(TERMS[i].weight(a, b, ga, gb) * TERMS[j].weight(a, b, ga, gb))
    }
}

/// Unit-loss mean of `TERMS[i]`; only the four diagonal-type terms have one.
pub fn term_mean(i: usize, m: f64, n: f64) -> f64 {
    match i {
        0 => m * m * n,
        5 | 10 | 15 => m * n,
        _ => 0.0,
    }
}

/// `E[r²] = Σ_{k≤16} β_k C_k + 2 Σ_{k>16} β_k C_k` from the component table.
pub fn rician_second_moment(m: f64, n: f64, a: f64, b: f64, ga: f64, gb: f64) -> f64 {
    (1..=25)
        .map(|k| {
            let w = component_weight(k, a, b, ga, gb).expect("index in range");
            let c = rician_component_expectation(k, m, n).expect("index in range");
            if k <= 16 {
                w * c
            } else {
                2.0 * w * c
            }
        })
        .sum()
}

/// Cascade variance rebuilt from the component table. Each component is
/// centered by the product of its term means before weighting, so the
/// `E[r²] − μ²` cancellation happens exactly instead of in floating point.
pub fn rician_variance_from_components(m: f64, n: f64, a: f64, b: f64, ga: f64, gb: f64) -> f64 {
    (1..=25)
        .map(|k| {
            let (i, j) = COMPONENTS[k - 1];
            let w = component_weight(k, a, b, ga, gb).expect("index in range");
            let c = rician_component_expectation(k, m, n).expect("index in range");
            let centered = c - term_mean(i, m, n) * term_mean(j, m, n);
            if k <= 16 {
                w * centered
            } else {
                2.0 * w * centered
            }
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reference_cfg(m: usize) -> ChannelConfig {
        ChannelConfig {
            antennas: 64,
            elements: m,
            beta_d: 0.01 / 64.0,
            beta_f: 1e-3,
            beta_g: 1e-3,
            ..ChannelConfig::default()
        }
    }

    fn close(a: f64, b: f64, rel: f64) -> bool {
        (a - b).abs() <= rel * b.abs().max(1e-300)
    }

    #[test]
    fn direct_examples() {
        let z = gain_dist_direct(&ChannelConfig {
            beta_d: 0.0,
            ..reference_cfg(0)
        });
        assert_eq!((z.mean, z.variance), (0.0, 0.0));
        let d = gain_dist_direct(&reference_cfg(0));
        assert!(close(d.mean, 0.01, 1e-14));
        assert!(close(d.variance, 1.5625e-6, 1e-12));
    }

    #[test]
    fn los_examples() {
        let l = gain_dist_los(&ChannelConfig {
            los: true,
            ..reference_cfg(40)
        });
        assert!(close(l.mean, 0.1124, 1e-12));
        assert!(close(l.variance, 3.2e-5, 1e-12));
        assert_eq!(
            gain_dist_los(&reference_cfg(0)),
            gain_dist_direct(&reference_cfg(0))
        );
    }

    #[test]
    fn rayleigh_examples() {
        let c = cascade_dist_rayleigh(&reference_cfg(500));
        assert!(close(c.mean, 0.032, 1e-12));
        assert!(close(c.variance, 1.8048e-5, 1e-12));
        let r0 = cascade_dist_rayleigh(&reference_cfg(0));
        assert_eq!((r0.mean, r0.variance), (0.0, 0.0));
        let g = gain_dist_rayleigh(&reference_cfg(500));
        assert!(close(g.mean, 0.042, 1e-12));
        assert!(close(g.variance, 3.0232e-5, 1e-4));
        let no_cascade = ChannelConfig {
            beta_f: 0.0,
            ..reference_cfg(500)
        };
        let law = gain_dist_rayleigh(&no_cascade);
        assert_eq!(
            (law.mean, law.variance),
            (
                gain_dist_direct(&no_cascade).mean,
                gain_dist_direct(&no_cascade).variance
            )
        );
    }

    #[test]
    fn rician_at_zero_kappa_is_rayleigh() {
        for m in [1usize, 7, 40, 500] {
            let c = reference_cfg(m);
            let ri = cascade_dist_rician(&c);
            let ra = cascade_dist_rayleigh(&c);
            assert!(close(ri.mean, ra.mean, 1e-15));
            assert!(close(ri.variance, ra.variance, 1e-15));
            assert!(close(
                gain_dist_rician(&c).mean,
                gain_dist_rayleigh(&c).mean,
                1e-14
            ));
        }
    }

    #[test]
    fn rician_los_limit() {
        let c = ChannelConfig {
            los: true,
            ..reference_cfg(40)
        };
        let r = cascade_dist_rician(&c);
        assert!(close(r.mean, 40.0 * 40.0 * 64.0 * 1e-6, 1e-14));
        assert_eq!(r.variance, 0.0);
        let g = gain_dist_rician(&c);
        let l = gain_dist_los(&c);
        assert!(close(g.mean, l.mean, 1e-14));
        // The equivalent-Rician law keeps the direct-path variance N β_d².
        assert!(close(
            g.variance - l.variance,
            64.0 * c.beta_d * c.beta_d,
            1e-10
        ));
    }

    #[test]
    fn equivalents_limits_and_clamp() {
        let e = rician_equivalents(2.0, 4.0 / 8.0, 8);
        assert!(e.hbar_sq.abs() < 1e-15 && close(e.sigma_h_sq, 0.25, 1e-15) && !e.clamped);
        let e = rician_equivalents(2.0, 0.0, 8);
        assert!(close(e.hbar_sq, 2.0, 1e-15) && e.sigma_h_sq.abs() < 1e-15);
        let e = rician_equivalents(2.0, 1.0, 8);
        assert!(e.clamped && e.hbar_sq == 0.0);
        assert!(close(8.0 * e.sigma_h_sq + e.hbar_sq, 2.0, 1e-12));
    }

    #[test]
    fn quadratic_form_examples() {
        let i = ComplexMatrix::identity(5).unwrap();
        assert!(close(
            quadratic_form_clt_variance(&i, 2.0).unwrap(),
            1.0,
            1e-15
        ));
        let z = ComplexMatrix::zeros(3, 3).unwrap();
        assert_eq!(quadratic_form_clt_variance(&z, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn table_values() {
        assert_eq!(
            rician_component_expectation(1, 40.0, 64.0).unwrap(),
            1.048576e10
        );
        assert_eq!(rician_component_expectation(16, 2.0, 2.0).unwrap(), 32.0);
        assert!(rician_component_expectation(0, 2.0, 2.0).is_err());
        assert!(rician_component_expectation(26, 2.0, 2.0).is_err());
    }

    #[test]
    fn component_reconstruction_matches_variance() {
        let (m, n, a, b, ga, gb) = (13.0, 7.0, 0.3, 0.9, 1.7, 0.2);
        let v = rician_cascade_variance(m, n, a, b, ga, gb);
        let r = rician_variance_from_components(m, n, a, b, ga, gb);
        assert!(close(r, v, 1e-12), "{r} vs {v}");
    }

    #[test]
    fn case_selection() {
        assert_eq!(GainCase::for_config(&reference_cfg(4)), GainCase::Rayleigh);
        assert_eq!(
            GainCase::for_config(&ChannelConfig {
                kappa_f: 5.0,
                ..reference_cfg(4)
            }),
            GainCase::Rician
        );
        assert_eq!(
            GainCase::for_config(&ChannelConfig {
                los: true,
                ..reference_cfg(4)
            }),
            GainCase::LoS
        );
    }
}
