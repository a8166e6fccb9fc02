//! Channel ensembles for the direct link `d`, the transmitter-to-surface
//! link `f` and the surface-to-receiver link `G`, plus RIS phase designs.
//!
//! Both RIS links follow a Rician split into a steering-vector part and a
//! scattered part:
//!
//! ```text
//! f = √β̄_f a_f + √β̃_f f̃,      G = √β̄_G a_G b_Gᴴ + √β̃_G G̃,
//! β̄ = β κ/(κ+1),  β̃ = β/(κ+1)
//! ```
//!
//! `κ = 0` is Rayleigh fading and the `los` flag stands for `κ → ∞` without
//! forming `β/(κ+1)` numerically.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{inner, norm_sqr, ComplexMatrix};
use crate::rng::{complex_gaussian, fill_complex_gaussian, uniform_phase, RngStream};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChannelError {
    #[error("invalid channel configuration: {0}")]
    Invalid(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// Full description of the `(d, f, G)` ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    /// Receiver antennas `N`.
    pub antennas: usize,
    /// Reflecting elements `M`; zero means no surface.
    pub elements: usize,
    /// Per-antenna direct path loss.
    pub beta_d: f64,
    pub beta_f: f64,
    pub beta_g: f64,
    pub kappa_f: f64,
    pub kappa_g: f64,
    /// Pure line-of-sight RIS links (`κ_f = κ_G = ∞`).
    pub los: bool,
    pub theta_f_aoa: f64,
    pub theta_g_aoa: f64,
    pub theta_g_aod: f64,
    /// Element spacing in wavelengths.
    pub spacing: f64,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        Self {
            antennas: 64,
            elements: 0,
            beta_d: 0.01 / 64.0,
            beta_f: 1e-3,
            beta_g: 1e-3,
            kappa_f: 0.0,
            kappa_g: 0.0,
            los: false,
            theta_f_aoa: 0.0,
            theta_g_aoa: 0.0,
            theta_g_aod: 0.0,
            spacing: 0.5,
        }
    }
}

impl ChannelConfig {
    pub fn validate(&self) -> Result<(), ChannelError> {
        let bad = |m: String| Err(ChannelError::Invalid(m));
        if self.antennas == 0 {
            return bad("antennas must be ≥ 1".into());
        }
        for (name, v) in [
            ("beta_d", self.beta_d),
            ("beta_f", self.beta_f),
            ("beta_g", self.beta_g),
            ("kappa_f", self.kappa_f),
            ("kappa_g", self.kappa_g),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return bad(format!("{name} must be finite and ≥ 0, got {v}"));
            }
        }
        if !(self.spacing.is_finite() && self.spacing > 0.0) {
            return bad(format!("spacing must be > 0, got {}", self.spacing));
        }
        for (name, v) in [
            ("theta_f_aoa", self.theta_f_aoa),
            ("theta_g_aoa", self.theta_g_aoa),
            ("theta_g_aod", self.theta_g_aod),
        ] {
            if !v.is_finite() {
                return bad(format!("{name} must be finite"));
            }
        }
        Ok(())
    }

    pub fn with_elements(&self, m: usize) -> Self {
        Self {
            elements: m,
            ..self.clone()
        }
    }

    /// Product `β_f β_G` of the cascaded path loss.
    pub fn cascade_loss(&self) -> f64 {
        self.beta_f * self.beta_g
    }

    /// `(β̄_f, β̃_f)`.
    pub fn split_f(&self) -> (f64, f64) {
        split(self.beta_f, self.kappa_f, self.los)
    }

    /// `(β̄_G, β̃_G)`.
    pub fn split_g(&self) -> (f64, f64) {
        split(self.beta_g, self.kappa_g, self.los)
    }

    /// Steering vector of the transmitter-to-surface link at the surface.
    pub fn a_f(&self) -> Vec<Complex64> {
        steering_vector(self.elements, self.theta_f_aoa, self.spacing)
    }

    /// Arrival steering vector of `G` at the receiver array.
    pub fn a_g(&self) -> Vec<Complex64> {
        steering_vector(self.antennas, self.theta_g_aoa, self.spacing)
    }

    /// Departure steering vector of `G` at the surface.
    pub fn b_g(&self) -> Vec<Complex64> {
        steering_vector(self.elements, self.theta_g_aod, self.spacing)
    }
}

fn split(beta: f64, kappa: f64, los: bool) -> (f64, f64) {
    if los {
        (beta, 0.0)
    } else {
        (beta * kappa / (kappa + 1.0), beta / (kappa + 1.0))
    }
}

/// Uniform linear array response: entry `k` is `exp(j 2π s k sin θ)`.
pub fn steering_vector(len: usize, angle: f64, spacing: f64) -> Vec<Complex64> {
    let w = TAU * spacing * angle.sin();
    (0..len)
        .map(|k| Complex64::from_polar(1.0, w * k as f64))
        .collect()
}

/// One draw of `(d, f, G)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    pub d: Vec<Complex64>,
    pub f: Vec<Complex64>,
    /// `N×M`; `None` when the surface is absent.
    pub g: Option<ComplexMatrix>,
}

/// Unit-modulus diagonal `Φ = diag(e^{jφ_i})`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseShiftVector {
    phases: Vec<f64>,
}

impl PhaseShiftVector {
    /// Phases are reduced to `[0, 2π)`.
    pub fn new(phases: Vec<f64>) -> Self {
        Self {
            phases: phases.into_iter().map(|p| p.rem_euclid(TAU)).collect(),
        }
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    /// `Φ x`.
    pub fn apply(&self, x: &[Complex64]) -> Result<Vec<Complex64>, ChannelError> {
        if x.len() != self.phases.len() {
            return Err(ChannelError::DimensionMismatch(format!(
                "{} phases applied to a vector of length {}",
                self.phases.len(),
                x.len()
            )));
        }
        Ok(x.iter()
            .zip(&self.phases)
            .map(|(z, &p)| z * Complex64::from_polar(1.0, p))
            .collect())
    }

    /// Same design rotated by a global phase.
    pub fn rotated(&self, c: f64) -> Self {
        Self::new(self.phases.iter().map(|p| p + c).collect())
    }
}

/// Draw `d ~ CN(0, β_d I)`, then `f`, then `G`.
pub fn sample_channels(cfg: &ChannelConfig, stream: RngStream) -> ChannelRealization {
    sample_channels_with(cfg, &mut stream.rng())
}

pub fn sample_channels_with<R: Rng + ?Sized>(
    cfg: &ChannelConfig,
    rng: &mut R,
) -> ChannelRealization {
    let n = cfg.antennas;
    let m = cfg.elements;
    let mut d = vec![Complex64::new(0.0, 0.0); n];
    fill_complex_gaussian(&mut d, cfg.beta_d, rng);
    if m == 0 {
        return ChannelRealization {
            d,
            f: Vec::new(),
            g: None,
        };
    }
    let (fb, ft) = cfg.split_f();
    let (gb, gt) = cfg.split_g();
    let a_f = cfg.a_f();
    let f: Vec<Complex64> = a_f
        .iter()
        .map(|a| {
            a * fb.sqrt()
                + if ft > 0.0 {
                    complex_gaussian(rng, ft)
                } else {
                    Complex64::new(0.0, 0.0)
                }
        })
        .collect();
    let a_g = cfg.a_g();
    let b_g = cfg.b_g();
    let mut g = ComplexMatrix::zeros(n, m).expect("positive dimensions");
    for i in 0..n {
        let row = g.row_mut(i);
        for (j, entry) in row.iter_mut().enumerate() {
            let los = a_g[i] * b_g[j].conj() * gb.sqrt();
            let scatter = if gt > 0.0 {
                complex_gaussian(rng, gt)
            } else {
                Complex64::new(0.0, 0.0)
            };
            *entry = los + scatter;
        }
    }
    ChannelRealization { d, f, g: Some(g) }
}

/// Phases `φ_i = −∠(conj(b_G(i)) a_f(i))` that align every line-of-sight
/// term, giving `b_Gᴴ Φ a_f = M`.
pub fn statistical_phase_design(cfg: &ChannelConfig) -> PhaseShiftVector {
    let a_f = cfg.a_f();
    let b_g = cfg.b_g();
    PhaseShiftVector::new(
        a_f.iter()
            .zip(&b_g)
            .map(|(a, b)| -(b.conj() * a).arg())
            .collect(),
    )
}

/// Arrival/departure angles `(θ_f, θ_G^AoA, θ_G^AoD)`, uniform on
/// `[−π/2, π/2)`.
pub fn draw_angles(stream: RngStream) -> [f64; 3] {
    let mut rng = stream.rng();
    let half = std::f64::consts::FRAC_PI_2;
    [(); 3].map(|_| rng.gen_range(-half..half))
}

impl ChannelConfig {
    pub fn with_angles(&self, [f, ga, gd]: [f64; 3]) -> Self {
        Self {
            theta_f_aoa: f,
            theta_g_aoa: ga,
            theta_g_aod: gd,
            ..self.clone()
        }
    }
}

/// I.i.d. uniform phases.
pub fn random_phase_design(m: usize, stream: RngStream) -> PhaseShiftVector {
    let mut rng = stream.rng();
    random_phase_design_with(m, &mut rng)
}

pub fn random_phase_design_with<R: Rng + ?Sized>(m: usize, rng: &mut R) -> PhaseShiftVector {
    PhaseShiftVector::new((0..m).map(|_| uniform_phase(rng)).collect())
}

/// Reflected component `G Φ f` (empty surface gives zeros).
pub fn cascade_vector(
    real: &ChannelRealization,
    phi: &PhaseShiftVector,
) -> Result<Vec<Complex64>, ChannelError> {
    let n = real.d.len();
    match &real.g {
        None => {
            if !phi.is_empty() || !real.f.is_empty() {
                return Err(ChannelError::DimensionMismatch(
                    "phases or f given without a surface channel".into(),
                ));
            }
            Ok(vec![Complex64::new(0.0, 0.0); n])
        }
        Some(g) => {
            if g.rows() != n || g.cols() != real.f.len() {
                return Err(ChannelError::DimensionMismatch(format!(
                    "G is {}x{}, d has {} and f has {} entries",
                    g.rows(),
                    g.cols(),
                    n,
                    real.f.len()
                )));
            }
            let w = phi.apply(&real.f)?;
            g.mul_vec(&w)
                .map_err(|e| ChannelError::DimensionMismatch(e.to_string()))
        }
    }
}

/// Equivalent channel `h = d + G Φ f`.
pub fn equivalent_channel(
    real: &ChannelRealization,
    phi: &PhaseShiftVector,
) -> Result<Vec<Complex64>, ChannelError> {
    let c = cascade_vector(real, phi)?;
    Ok(real.d.iter().zip(&c).map(|(a, b)| a + b).collect())
}

/// `g = ‖d + G Φ f‖²`.
pub fn effective_gain(
    real: &ChannelRealization,
    phi: &PhaseShiftVector,
) -> Result<f64, ChannelError> {
    Ok(norm_sqr(&equivalent_channel(real, phi)?))
}

/// How the surface phases are chosen in a simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseMode {
    Statistical,
    Random,
    /// No reflection at all, whatever the element count.
    None,
}

impl std::str::FromStr for PhaseMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "statistical" => Ok(Self::Statistical),
            "random" => Ok(Self::Random),
            "none" => Ok(Self::None),
            other => Err(format!("unknown phase mode '{other}'")),
        }
    }
}

impl std::fmt::Display for PhaseMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Statistical => "statistical",
            Self::Random => "random",
            Self::None => "none",
        })
    }
}

/// Equivalent channel of one trial together with its power split.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalentDraw {
    pub h: Vec<Complex64>,
    /// `‖d‖²`.
    pub direct_gain: f64,
    /// `‖G Φ f‖²`.
    pub cascade_gain: f64,
    /// `‖d + G Φ f‖²`.
    pub gain: f64,
}

/// Draws `h = d + G Φ f` without materializing `G`.
///
/// With `w = Φ f`, conditionally on `w` the scattered term `G̃ w` is
/// `CN(0, ‖w‖² I_N)`, so
///
/// ```text
/// G Φ f  =ᵈ  √β̄_G a_G (b_Gᴴ w) + √β̃_G ‖w‖ z,   z ~ CN(0, I_N)
/// ```
///
/// which is exact in distribution and costs `O(M + N)` per draw.
pub struct CompressedSampler {
    cfg: ChannelConfig,
    mode: PhaseMode,
    a_f: Vec<Complex64>,
    a_g: Vec<Complex64>,
    b_g: Vec<Complex64>,
    designed: Option<PhaseShiftVector>,
    split_f: (f64, f64),
    split_g: (f64, f64),
}

impl CompressedSampler {
    pub fn new(cfg: &ChannelConfig, mode: PhaseMode) -> Result<Self, ChannelError> {
        cfg.validate()?;
        let designed = match mode {
            PhaseMode::Statistical if cfg.elements > 0 => Some(statistical_phase_design(cfg)),
            _ => None,
        };
        Ok(Self {
            cfg: cfg.clone(),
            mode,
            a_f: cfg.a_f(),
            a_g: cfg.a_g(),
            b_g: cfg.b_g(),
            designed,
            split_f: cfg.split_f(),
            split_g: cfg.split_g(),
        })
    }

    pub fn config(&self) -> &ChannelConfig {
        &self.cfg
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> EquivalentDraw {
        let n = self.cfg.antennas;
        let m = self.cfg.elements;
        let mut d = vec![Complex64::new(0.0, 0.0); n];
        fill_complex_gaussian(&mut d, self.cfg.beta_d, rng);
        let direct_gain = norm_sqr(&d);
        if m == 0 || self.mode == PhaseMode::None {
            return EquivalentDraw {
                h: d,
                direct_gain,
                cascade_gain: 0.0,
                gain: direct_gain,
            };
        }
        let (fb, ft) = self.split_f;
        let (gb, gt) = self.split_g;
        let random;
        let phi = match &self.designed {
            Some(p) => p,
            None => {
                random = random_phase_design_with(m, rng);
                &random
            }
        };
        let w: Vec<Complex64> = self
            .a_f
            .iter()
            .zip(phi.phases())
            .map(|(a, &p)| {
                let scatter = if ft > 0.0 {
                    complex_gaussian(rng, ft)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                (a * fb.sqrt() + scatter) * Complex64::from_polar(1.0, p)
            })
            .collect();
        let coherent = inner(&self.b_g, &w) * gb.sqrt();
        let spread = (gt * norm_sqr(&w)).sqrt();
        let mut h = d;
        let mut cascade_gain = 0.0;
        for (hi, ai) in h.iter_mut().zip(&self.a_g) {
            let z = if spread > 0.0 {
                complex_gaussian(rng, 1.0) * spread
            } else {
                Complex64::new(0.0, 0.0)
            };
            let c = ai * coherent + z;
            cascade_gain += c.norm_sqr();
            *hi += c;
        }
        let gain = norm_sqr(&h);
        EquivalentDraw {
            h,
            direct_gain,
            cascade_gain,
            gain,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn cfg() -> ChannelConfig {
        ChannelConfig {
            antennas: 6,
            elements: 5,
            beta_d: 0.3,
            beta_f: 0.7,
            beta_g: 1.3,
            kappa_f: 2.0,
            kappa_g: 0.5,
            los: false,
            theta_f_aoa: 0.4,
            theta_g_aoa: -1.1,
            theta_g_aod: 2.3,
            spacing: 0.5,
        }
    }

    #[test]
    fn steering_vector_examples() {
        assert!(steering_vector(4, 0.0, 0.37)
            .iter()
            .all(|z| (z - 1.0).norm() < 1e-15));
        let v = steering_vector(2, PI / 2.0, 0.5);
        assert!((v[0] - 1.0).norm() < 1e-15);
        assert!((v[1] + 1.0).norm() < 1e-15);
    }

    #[test]
    fn zero_angles_give_identity_phases() {
        let c = ChannelConfig {
            theta_f_aoa: 0.0,
            theta_g_aoa: 0.0,
            theta_g_aod: 0.0,
            ..cfg()
        };
        let p = statistical_phase_design(&c);
        assert!(p
            .phases()
            .iter()
            .all(|&x| x.abs() < 1e-15 || (x - TAU).abs() < 1e-15));
    }

    #[test]
    fn designed_phases_are_coherent() {
        let c = cfg();
        let p = statistical_phase_design(&c);
        let w = p.apply(&c.a_f()).unwrap();
        let s = inner(&c.b_g(), &w);
        assert!((s - Complex64::new(5.0, 0.0)).norm() < 1e-12, "{s}");
    }

    #[test]
    fn los_realization_is_deterministic_and_coherent() {
        let c = ChannelConfig {
            antennas: 64,
            elements: 40,
            beta_d: 0.0,
            beta_f: 1e-3,
            beta_g: 1e-3,
            los: true,
            ..cfg()
        };
        let r1 = sample_channels(&c, RngStream::new(1, 1));
        let r2 = sample_channels(&c, RngStream::new(2, 9));
        assert_eq!(r1.f, r2.f);
        assert_eq!(r1.g, r2.g);
        let phi = statistical_phase_design(&c);
        let g = effective_gain(&r1, &phi).unwrap();
        assert!((g / 0.1024 - 1.0).abs() < 1e-10, "{g}");
    }

    #[test]
    fn effective_gain_edge_cases() {
        let c = ChannelConfig {
            elements: 0,
            ..cfg()
        };
        let mut real = sample_channels(&c, RngStream::new(0, 0));
        real.d = vec![Complex64::new(0.0, 0.0); 6];
        real.d[0] = Complex64::new(3.0, 0.0);
        let empty = PhaseShiftVector::new(vec![]);
        assert!((effective_gain(&real, &empty).unwrap() - 9.0).abs() < 1e-15);
        real.d[0] = Complex64::new(0.0, 0.0);
        assert_eq!(effective_gain(&real, &empty).unwrap(), 0.0);
        let wrong = PhaseShiftVector::new(vec![0.0; 3]);
        assert!(effective_gain(&real, &wrong).is_err());
    }

    #[test]
    fn random_phases_reproducible() {
        assert!(random_phase_design(0, RngStream::new(1, 0)).is_empty());
        assert_eq!(
            random_phase_design(7, RngStream::new(5, 5)),
            random_phase_design(7, RngStream::new(5, 5))
        );
    }

    #[test]
    fn random_phase_first_moment_vanishes() {
        let mut rng = RngStream::new(11, 0).rng();
        let n = 100_000;
        let s: Complex64 = (0..n)
            .map(|_| Complex64::from_polar(1.0, random_phase_design_with(1, &mut rng).phases()[0]))
            .sum();
        assert!((s / n as f64).norm() < 0.02);
    }

    #[test]
    fn rayleigh_entry_power() {
        let c = ChannelConfig {
            antennas: 4,
            elements: 3,
            kappa_f: 0.0,
            kappa_g: 0.0,
            beta_g: 2.0,
            ..cfg()
        };
        let mut rng = RngStream::new(3, 0).rng();
        let draws = 100_000;
        let mut acc = 0.0;
        for _ in 0..draws {
            let r = sample_channels_with(&c, &mut rng);
            acc += r.g.unwrap()[(1, 2)].norm_sqr();
        }
        let mean = acc / draws as f64;
        assert!((mean / 2.0 - 1.0).abs() < 0.02, "{mean}");
    }

    #[test]
    fn rician_mean_of_f() {
        let c = ChannelConfig {
            kappa_f: 5.0,
            beta_f: 1.0,
            ..cfg()
        };
        let mut rng = RngStream::new(4, 0).rng();
        let draws = 20_000;
        let mut acc = vec![Complex64::new(0.0, 0.0); 5];
        for _ in 0..draws {
            let r = sample_channels_with(&c, &mut rng);
            for (a, f) in acc.iter_mut().zip(&r.f) {
                *a += f;
            }
        }
        let target = (5.0f64 / 6.0).sqrt();
        // Per-component stderr of the mean: √(β̃/2 / draws).
        let se = (1.0 / 6.0 / 2.0 / draws as f64).sqrt();
        for (a, af) in acc.iter().zip(c.a_f()) {
            let m = a / draws as f64 - af * target;
            assert!(m.re.abs() < 4.0 * se && m.im.abs() < 4.0 * se, "{m}");
        }
    }

    #[test]
    fn config_validation() {
        assert!(cfg().validate().is_ok());
        assert!(ChannelConfig {
            beta_f: -1.0,
            ..cfg()
        }
        .validate()
        .is_err());
        assert!(ChannelConfig {
            spacing: 0.0,
            ..cfg()
        }
        .validate()
        .is_err());
        assert!(ChannelConfig {
            antennas: 0,
            ..cfg()
        }
        .validate()
        .is_err());
    }
}
