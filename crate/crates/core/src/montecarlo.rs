//! Seeded Monte-Carlo trials of the detector.
//!
//! Each trial owns the random stream `(master_seed, hash(hypothesis, cell,
//! trial))`, so outcomes do not depend on scheduling and trials can fan out
//! over any number of rayon workers.
//!
//! Two engines produce the statistic `T`:
//!
//! * [`Engine::Samples`] builds the `N×n` block `X = h sᵀ + U` and runs
//!   Lanczos on it.
//! * [`Engine::Reduced`] uses the fact that a complex Gaussian matrix with
//!   covariance `I + (τ−1) e₁e₁ᵀ` is unitarily equivalent to a lower
//!   bidiagonal matrix with independent chi entries
//!   (`d_i² ~ Γ(n−i)`, `e_i² ~ Γ(N−1−i)`), with only `d₀` scaled by `√τ`.
//!   `λ_max` of the resulting tridiagonal follows from Sturm bisection in
//!   `O(N)` memory, which makes `N = 512`, `n = 51 200` cheap.
//!
//! Both engines draw the channel once per trial and hold it over the block.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::{
    equivalent_channel, random_phase_design_with, sample_channels_with, statistical_phase_design,
    ChannelConfig, ChannelError, CompressedSampler, PhaseMode, PhaseShiftVector,
};
use crate::detector::{
    decide, detection_threshold, med_decide, Decision, DetectorError, SensingConfig,
};
use crate::linalg::{
    norm_sqr, tridiagonal_max_eigenvalue, ComplexMatrix, EigenOptions, LinalgError,
};
use crate::rng::{complex_gaussian, RngStream, StreamRng};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MonteCarloError {
    #[error("invalid experiment: {0}")]
    Invalid(String),
    #[error(transparent)]
    Channel(#[from] ChannelError),
    #[error(transparent)]
    Detector(#[from] DetectorError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Samples,
    Reduced,
}

impl std::str::FromStr for Engine {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "samples" => Ok(Self::Samples),
            "reduced" => Ok(Self::Reduced),
            other => Err(format!("unknown engine '{other}'")),
        }
    }
}

impl std::fmt::Display for Engine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Samples => "samples",
            Self::Reduced => "reduced",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Hypothesis {
    H0,
    H1,
}

impl Hypothesis {
    fn label(self) -> u64 {
        match self {
            Self::H0 => 0,
            Self::H1 => 1,
        }
    }
}

/// Everything needed to reproduce one simulation cell.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub sensing: SensingConfig,
    pub channel: ChannelConfig,
    pub phase_mode: PhaseMode,
    pub trials: usize,
    pub master_seed: u64,
    /// Cell label mixed into every stream index.
    pub cell_id: u64,
    pub engine: Engine,
    pub eigen: EigenOptions,
    /// Replace the random channel by a fixed gain (point-mass ensembles).
    pub fixed_gain: Option<f64>,
}

impl ExperimentSpec {
    pub fn new(sensing: SensingConfig, channel: ChannelConfig, master_seed: u64) -> Self {
        Self {
            sensing,
            channel,
            phase_mode: PhaseMode::Statistical,
            trials: 1000,
            master_seed,
            cell_id: 0,
            engine: Engine::Reduced,
            eigen: EigenOptions::default(),
            fixed_gain: None,
        }
    }

    pub fn validate(&self) -> Result<(), MonteCarloError> {
        self.sensing.validate()?;
        self.channel.validate()?;
        if self.trials == 0 {
            return Err(MonteCarloError::Invalid("trials must be ≥ 1".into()));
        }
        if self.sensing.antennas != self.channel.antennas {
            return Err(MonteCarloError::Invalid(format!(
                "sensing has N = {} but channel has N = {}",
                self.sensing.antennas, self.channel.antennas
            )));
        }
        if self.sensing.antennas > self.sensing.samples {
            return Err(MonteCarloError::Invalid("need N ≤ n".into()));
        }
        if let Some(g) = self.fixed_gain {
            if !(g >= 0.0 && g.is_finite()) {
                return Err(MonteCarloError::Invalid(format!(
                    "fixed gain must be ≥ 0, got {g}"
                )));
            }
        }
        Ok(())
    }

    pub fn stream(&self, hypothesis: Hypothesis, trial: u64) -> RngStream {
        RngStream::derived(self.master_seed, &[hypothesis.label(), self.cell_id, trial])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    pub statistic: f64,
    pub decision: Decision,
    /// Realized `g` under H1.
    pub gain: Option<f64>,
    pub hypothesis: Hypothesis,
}

/// Precomputed per-cell state shared by all trials.
pub struct TrialRunner {
    spec: ExperimentSpec,
    gamma: f64,
    sampler: CompressedSampler,
    gamma_d: Vec<Gamma<f64>>,
    gamma_e: Vec<Gamma<f64>>,
    designed: Option<PhaseShiftVector>,
}

impl TrialRunner {
    pub fn new(spec: &ExperimentSpec) -> Result<Self, MonteCarloError> {
        spec.validate()?;
        let gamma = detection_threshold(&spec.sensing)?;
        let (big_n, n) = (spec.sensing.antennas, spec.sensing.samples);
        let shape = |k: usize| Gamma::new(k as f64, 1.0).expect("positive shape");
        let (gamma_d, gamma_e) = if spec.engine == Engine::Reduced {
            (
                (0..big_n).map(|i| shape(n - i)).collect(),
                (0..big_n.saturating_sub(1))
                    .map(|i| shape(big_n - 1 - i))
                    .collect(),
            )
        } else {
            (Vec::new(), Vec::new())
        };
        let designed = match spec.phase_mode {
            PhaseMode::Statistical if spec.channel.elements > 0 => {
                Some(statistical_phase_design(&spec.channel))
            }
            _ => None,
        };
        Ok(Self {
            spec: spec.clone(),
            gamma,
            sampler: CompressedSampler::new(&spec.channel, spec.phase_mode)?,
            gamma_d,
            gamma_e,
            designed,
        })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn spec(&self) -> &ExperimentSpec {
        &self.spec
    }

    pub fn run(&self, hypothesis: Hypothesis, trial: u64) -> Result<TrialOutcome, MonteCarloError> {
        let mut rng = self.spec.stream(hypothesis, trial).rng();
        let (statistic, gain) = match self.spec.engine {
            Engine::Reduced => self.reduced(hypothesis, &mut rng),
            Engine::Samples => self.samples(hypothesis, &mut rng)?,
        };
        Ok(TrialOutcome {
            statistic,
            decision: decide(statistic, self.gamma),
            gain,
            hypothesis,
        })
    }

    fn draw_gain(&self, rng: &mut StreamRng) -> f64 {
        match self.spec.fixed_gain {
            Some(g) => g,
            None => self.sampler.draw(rng).gain,
        }
    }

    fn reduced(&self, hypothesis: Hypothesis, rng: &mut StreamRng) -> (f64, Option<f64>) {
        let gain = match hypothesis {
            Hypothesis::H0 => None,
            Hypothesis::H1 => Some(self.draw_gain(rng)),
        };
        let tau = 1.0 + gain.map_or(0.0, |g| self.spec.sensing.spike(g));
        let big_n = self.spec.sensing.antennas;
        let d2: Vec<f64> = self.gamma_d.iter().map(|g| g.sample(rng)).collect();
        let e2: Vec<f64> = self.gamma_e.iter().map(|g| g.sample(rng)).collect();
        let mut diag = vec![0.0; big_n];
        let mut off = vec![0.0; big_n.saturating_sub(1)];
        for i in 0..big_n {
            let di2 = if i == 0 { tau * d2[0] } else { d2[i] };
            diag[i] = di2 + if i > 0 { e2[i - 1] } else { 0.0 };
            if i + 1 < big_n {
                off[i] = di2.sqrt() * e2[i].sqrt();
            }
        }
        let lambda = tridiagonal_max_eigenvalue(&diag, &off, 1e-13);
        (lambda / self.spec.sensing.samples as f64, gain)
    }

    fn samples(
        &self,
        hypothesis: Hypothesis,
        rng: &mut StreamRng,
    ) -> Result<(f64, Option<f64>), MonteCarloError> {
        let s = &self.spec.sensing;
        let (big_n, n) = (s.antennas, s.samples);
        let h = match hypothesis {
            Hypothesis::H0 => None,
            Hypothesis::H1 => Some(match self.spec.fixed_gain {
                // Point mass: any direction with ‖h‖² = g.
                Some(g) => {
                    let mut h = vec![Complex64::new(0.0, 0.0); big_n];
                    h[0] = Complex64::new(g.sqrt(), 0.0);
                    h
                }
                None => self.full_channel(rng)?,
            }),
        };
        let gain = h.as_ref().map(|v| norm_sqr(v));
        let symbols: Vec<Complex64> = match &h {
            Some(_) => (0..n)
                .map(|_| complex_gaussian(rng, s.sigma_s_sq))
                .collect(),
            None => Vec::new(),
        };
        let mut data = Vec::with_capacity(big_n * n);
        for i in 0..big_n {
            for k in 0..n {
                let noise = complex_gaussian(rng, s.sigma_u_sq);
                let signal = h
                    .as_ref()
                    .map_or(Complex64::new(0.0, 0.0), |h| h[i] * symbols[k]);
                data.push(signal + noise);
            }
        }
        let x = ComplexMatrix::from_row_major(big_n, n, data)?;
        let out = med_decide(&x, self.gamma, s, &self.spec.eigen)?;
        Ok((out.statistic, gain))
    }

    fn full_channel(&self, rng: &mut StreamRng) -> Result<Vec<Complex64>, MonteCarloError> {
        let cfg = if self.spec.phase_mode == PhaseMode::None {
            self.spec.channel.with_elements(0)
        } else {
            self.spec.channel.clone()
        };
        let real = sample_channels_with(&cfg, rng);
        let phi = match (&self.designed, self.spec.phase_mode) {
            (Some(p), _) => p.clone(),
            (None, PhaseMode::Random) => random_phase_design_with(cfg.elements, rng),
            _ => PhaseShiftVector::new(vec![0.0; cfg.elements]),
        };
        Ok(equivalent_channel(&real, &phi)?)
    }
}

/// One trial of `spec` (convenience wrapper; builds the runner each call).
pub fn run_trial(
    spec: &ExperimentSpec,
    hypothesis: Hypothesis,
    trial: u64,
) -> Result<TrialOutcome, MonteCarloError> {
    TrialRunner::new(spec)?.run(hypothesis, trial)
}

/// All trials of one hypothesis, in trial order.
pub fn run_bank(
    runner: &TrialRunner,
    hypothesis: Hypothesis,
) -> Result<Vec<TrialOutcome>, MonteCarloError> {
    (0..runner.spec().trials as u64)
        .into_par_iter()
        .map(|t| runner.run(hypothesis, t))
        .collect()
}

/// 95 % Wilson score interval.
pub fn wilson_interval(successes: usize, trials: usize) -> (f64, f64) {
    const Z: f64 = 1.959_963_984_540_054;
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // At p = 0 or 1 the exact bound is 0 or 1; rounding would miss it.
    let lo = if successes == 0 {
        0.0
    } else {
        (center - half).max(0.0)
    };
    let hi = if successes == trials {
        1.0
    } else {
        (center + half).min(1.0)
    };
    (lo, hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Proportion {
    pub value: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub successes: usize,
    pub trials: usize,
}

impl Proportion {
    pub fn from_counts(successes: usize, trials: usize) -> Self {
        let (ci_lo, ci_hi) = wilson_interval(successes, trials);
        Self {
            value: successes as f64 / trials.max(1) as f64,
            ci_lo,
            ci_hi,
            successes,
            trials,
        }
    }

    fn of(outcomes: &[TrialOutcome]) -> Self {
        let hits = outcomes
            .iter()
            .filter(|o| o.decision == Decision::D1)
            .count();
        Self::from_counts(hits, outcomes.len())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbabilityEstimate {
    pub gamma: f64,
    pub pfa: Proportion,
    pub pd: Proportion,
}

/// Empirical `P_fa` and `P_d` from disjoint H0 and H1 banks.
pub fn estimate_probs(spec: &ExperimentSpec) -> Result<ProbabilityEstimate, MonteCarloError> {
    let runner = TrialRunner::new(spec)?;
    let h0 = run_bank(&runner, Hypothesis::H0)?;
    let h1 = run_bank(&runner, Hypothesis::H1)?;
    Ok(ProbabilityEstimate {
        gamma: runner.gamma(),
        pfa: Proportion::of(&h0),
        pd: Proportion::of(&h1),
    })
}

/// Empirical `P_d` only.
pub fn estimate_pd(spec: &ExperimentSpec) -> Result<Proportion, MonteCarloError> {
    let runner = TrialRunner::new(spec)?;
    Ok(Proportion::of(&run_bank(&runner, Hypothesis::H1)?))
}

/// Which channel power [`empirical_gain_samples`] returns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GainQuantity {
    /// `‖d‖²`.
    Direct,
    /// `‖GΦf‖²`.
    Cascade,
    /// `‖d + GΦf‖²`.
    Equivalent,
}

impl std::str::FromStr for GainQuantity {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "direct" => Ok(Self::Direct),
            "cascade" => Ok(Self::Cascade),
            "equivalent" => Ok(Self::Equivalent),
            other => Err(format!("unknown gain quantity '{other}'")),
        }
    }
}

impl std::fmt::Display for GainQuantity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Direct => "direct",
            Self::Cascade => "cascade",
            Self::Equivalent => "equivalent",
        })
    }
}

/// How channel draws are produced for gain statistics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelSampling {
    /// Materialize `(d, f, G)` every draw.
    Full,
    /// Exact-in-distribution `O(M+N)` draw of `h`.
    Compressed,
}

/// Independent draws of one gain quantity, in draw order.
pub fn empirical_gain_samples(
    spec: &ExperimentSpec,
    quantity: GainQuantity,
    draws: usize,
    sampling: ChannelSampling,
) -> Result<Vec<f64>, MonteCarloError> {
    spec.channel.validate()?;
    let sampler = CompressedSampler::new(&spec.channel, spec.phase_mode)?;
    let designed = match spec.phase_mode {
        PhaseMode::Statistical if spec.channel.elements > 0 => {
            Some(statistical_phase_design(&spec.channel))
        }
        _ => None,
    };
    let no_ris = spec.phase_mode == PhaseMode::None || spec.channel.elements == 0;
    (0..draws as u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = RngStream::derived(spec.master_seed, &[2, spec.cell_id, k]).rng();
            match sampling {
                ChannelSampling::Compressed => {
                    let d = sampler.draw(&mut rng);
                    Ok(match quantity {
                        GainQuantity::Direct => d.direct_gain,
                        GainQuantity::Cascade => d.cascade_gain,
                        GainQuantity::Equivalent => d.gain,
                    })
                }
                ChannelSampling::Full => {
                    let cfg = if no_ris {
                        spec.channel.with_elements(0)
                    } else {
                        spec.channel.clone()
                    };
                    let real = sample_channels_with(&cfg, &mut rng);
                    let phi = match &designed {
                        Some(p) if !no_ris => p.clone(),
                        _ if no_ris => PhaseShiftVector::new(vec![]),
                        _ => random_phase_design_with(cfg.elements, &mut rng),
                    };
                    let direct = norm_sqr(&real.d);
                    Ok(match quantity {
                        GainQuantity::Direct => direct,
                        GainQuantity::Cascade => {
                            norm_sqr(&crate::channel::cascade_vector(&real, &phi)?)
                        }
                        GainQuantity::Equivalent => norm_sqr(&equivalent_channel(&real, &phi)?),
                    })
                }
            }
        })
        .collect()
}

/// Smallest `M` in `candidates` (ascending) whose empirical `P_d` reaches
/// `target`. The same streams are reused for every `M`, so the estimates
/// along the scan share their randomness.
pub fn minimal_elements_empirical(
    spec: &ExperimentSpec,
    candidates: impl IntoIterator<Item = usize>,
    target: f64,
) -> Result<Option<(usize, Proportion)>, MonteCarloError> {
    for m in candidates {
        let s = ExperimentSpec {
            channel: spec.channel.with_elements(m),
            ..spec.clone()
        };
        let p = estimate_pd(&s)?;
        if p.value >= target {
            return Ok(Some((m, p)));
        }
    }
    Ok(None)
}

/// Draw `n` symbols; exposed for examples that build blocks by hand.
pub fn sample_symbols<R: Rng + ?Sized>(n: usize, power: f64, rng: &mut R) -> Vec<Complex64> {
    (0..n).map(|_| complex_gaussian(rng, power)).collect()
}
