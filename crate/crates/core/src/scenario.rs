//! Scenario files: a versioned TOML document with `[sensing]`, `[channel]`
//! and `[experiment]` tables.
//!
//! Physical quantities are linear. Any of them may instead be given in dB
//! through the matching `_db` key, but not both. Angles left out of the file
//! are drawn from the run seed and written back into the resolved echo, so
//! the echo alone reproduces the run.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::{draw_angles, ChannelConfig, PhaseMode};
use crate::detector::SensingConfig;
use crate::gain::GainCase;
use crate::montecarlo::{Engine, ExperimentSpec, GainQuantity};
use crate::rng::RngStream;
use crate::sweep::{from_db, SweepAxis};

pub const SCHEMA_VERSION: u32 = 1;

/// Stream reserved for drawing missing angles.
const ANGLE_STREAM: u64 = 0xA0_61E5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScenarioError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("key '{key}': {message}")]
    Key { key: String, message: String },
    #[error("unsupported schema_version {found} (expected {SCHEMA_VERSION})")]
    Version { found: u32 },
}

fn key_err<T>(key: &str, message: impl Into<String>) -> Result<T, ScenarioError> {
    Err(ScenarioError::Key {
        key: key.into(),
        message: message.into(),
    })
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensingSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub antennas: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_u_sq: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_u_sq_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_s_sq: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_s_sq_db: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elements: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_d: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_d_db: Option<f64>,
    /// `N β_d` in dB.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snr_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_f: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_f_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_g: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_g_db: Option<f64>,
    /// `β_f β_G` in dB, split evenly.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cascade_loss_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_f: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_f_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_g: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa_g_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub los: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_f_aoa: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_g_aoa: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_g_aod: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spacing: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phase_mode: Option<PhaseMode>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub engine: Option<Engine>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<GainCase>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elements_grid: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub antennas_grid: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_grid: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub targets: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub draws: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bins: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quantities: Option<Vec<GainQuantity>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigmas: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axes: Option<Vec<SweepAxis>>,
}

/// The file as written, before defaults and dB conversion.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub schema_version: u32,
    #[serde(default)]
    pub sensing: SensingSection,
    #[serde(default)]
    pub channel: ChannelSection,
    #[serde(default)]
    pub experiment: ExperimentSection,
}

impl Default for ScenarioFile {
    fn default() -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            sensing: SensingSection::default(),
            channel: ChannelSection::default(),
            experiment: ExperimentSection::default(),
        }
    }
}

/// Experiment settings after defaults.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSettings {
    pub phase_mode: PhaseMode,
    pub trials: usize,
    pub engine: Engine,
    /// Gain law override; inferred from the channel when absent.
    pub case: Option<GainCase>,
    pub elements_grid: Vec<usize>,
    pub antennas_grid: Vec<usize>,
    pub c_grid: Vec<f64>,
    pub targets: Vec<f64>,
    pub draws: usize,
    pub bins: usize,
    pub quantities: Vec<GainQuantity>,
    pub sigmas: f64,
    pub axes: Vec<SweepAxis>,
}

/// Fully resolved scenario in linear units.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub sensing: SensingConfig,
    pub channel: ChannelConfig,
    pub experiment: ExperimentSettings,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub antennas: Option<usize>,
    pub alpha: Option<f64>,
    pub c: Option<f64>,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |i| i + 1) + 1;
    (line, column)
}

impl ScenarioFile {
    pub fn parse(text: &str) -> Result<Self, ScenarioError> {
        let file: Self = toml::from_str(text).map_err(|e| {
            let (line, column) = e.span().map_or((0, 0), |s| line_col(text, s.start));
            ScenarioError::Parse {
                line,
                column,
                message: e.message().to_string(),
            }
        })?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(ScenarioError::Version {
                found: file.schema_version,
            });
        }
        Ok(file)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(n) = o.antennas {
            self.sensing.antennas = Some(n);
        }
        if let Some(a) = o.alpha {
            self.sensing.alpha = Some(a);
        }
        if let Some(c) = o.c {
            self.sensing.c = Some(c);
            self.sensing.samples = None;
        }
    }

    /// Apply defaults, convert dB keys and draw missing angles from `seed`.
    pub fn resolve(&self, seed: u64) -> Result<Scenario, ScenarioError> {
        let s = &self.sensing;
        let antennas = s.antennas.unwrap_or(64);
        if antennas == 0 {
            return key_err("sensing.antennas", "must be ≥ 1");
        }
        let c = match (s.c, s.samples) {
            (Some(_), Some(_)) => {
                return key_err("sensing.samples", "give either c or samples, not both")
            }
            (Some(c), None) => c,
            (None, Some(0)) => return key_err("sensing.samples", "must be ≥ 1"),
            (None, Some(n)) => antennas as f64 / n as f64,
            (None, None) => 0.01,
        };
        let alpha = s.alpha.unwrap_or(0.1);
        let mut sensing = SensingConfig::new(antennas, c, alpha)
            .or_else(|e| key_err("sensing", e.to_string()))?;
        if let Some(n) = s.samples {
            sensing.samples = n;
        }
        sensing.sigma_u_sq =
            linear("sensing.sigma_u_sq", s.sigma_u_sq, s.sigma_u_sq_db)?.unwrap_or(1.0);
        sensing.sigma_s_sq =
            linear("sensing.sigma_s_sq", s.sigma_s_sq, s.sigma_s_sq_db)?.unwrap_or(1.0);
        sensing
            .validate()
            .or_else(|e| key_err("sensing", e.to_string()))?;

        let ch = &self.channel;
        let beta_d = match (ch.beta_d, ch.beta_d_db, ch.snr_db) {
            (v, None, None) => v.unwrap_or(0.01 / antennas as f64),
            (None, Some(db), None) => from_db(db),
            (None, None, Some(db)) => from_db(db) / antennas as f64,
            _ => return key_err("channel.beta_d", "give one of beta_d, beta_d_db, snr_db"),
        };
        let single_f = linear("channel.beta_f", ch.beta_f, ch.beta_f_db)?;
        let single_g = linear("channel.beta_g", ch.beta_g, ch.beta_g_db)?;
        let (beta_f, beta_g) = match (ch.cascade_loss_db, single_f, single_g) {
            (Some(db), None, None) => {
                let each = from_db(db).sqrt();
                (each, each)
            }
            (Some(_), _, _) => {
                return key_err("channel.cascade_loss_db", "conflicts with beta_f/beta_g")
            }
            (None, f, g) => (f.unwrap_or(1e-3), g.unwrap_or(1e-3)),
        };
        let both = linear("channel.kappa", ch.kappa, ch.kappa_db)?;
        let kf = linear("channel.kappa_f", ch.kappa_f, ch.kappa_f_db)?;
        let kg = linear("channel.kappa_g", ch.kappa_g, ch.kappa_g_db)?;
        let (kappa_f, kappa_g) = match (both, kf, kg) {
            (Some(k), None, None) => (k, k),
            (Some(_), _, _) => return key_err("channel.kappa", "conflicts with kappa_f/kappa_g"),
            (None, f, g) => (f.unwrap_or(0.0), g.unwrap_or(0.0)),
        };
        let drawn = draw_angles(RngStream::new(seed, ANGLE_STREAM));
        let channel = ChannelConfig {
            antennas,
            elements: ch.elements.unwrap_or(0),
            beta_d,
            beta_f,
            beta_g,
            kappa_f,
            kappa_g,
            los: ch.los.unwrap_or(false),
            theta_f_aoa: ch.theta_f_aoa.unwrap_or(drawn[0]),
            theta_g_aoa: ch.theta_g_aoa.unwrap_or(drawn[1]),
            theta_g_aod: ch.theta_g_aod.unwrap_or(drawn[2]),
            spacing: ch.spacing.unwrap_or(0.5),
        };
        channel
            .validate()
            .or_else(|e| key_err("channel", e.to_string()))?;

        let e = &self.experiment;
        let trials = e.trials.unwrap_or(1000);
        if trials == 0 {
            return key_err("experiment.trials", "must be ≥ 1");
        }
        let targets = e.targets.clone().unwrap_or_else(|| vec![0.9]);
        if let Some(t) = targets.iter().find(|t| !(**t > 0.0 && **t < 1.0)) {
            return key_err(
                "experiment.targets",
                format!("targets must lie in (0, 1), got {t}"),
            );
        }
        let experiment = ExperimentSettings {
            phase_mode: e.phase_mode.unwrap_or(PhaseMode::Statistical),
            trials,
            engine: e.engine.unwrap_or(Engine::Reduced),
            case: e.case,
            elements_grid: e
                .elements_grid
                .clone()
                .unwrap_or_else(|| (0..=100).step_by(10).collect()),
            antennas_grid: e.antennas_grid.clone().unwrap_or_else(|| vec![antennas]),
            c_grid: e.c_grid.clone().unwrap_or_else(|| vec![sensing.c]),
            targets,
            draws: e.draws.unwrap_or(100_000),
            bins: e.bins.unwrap_or(60),
            quantities: e.quantities.clone().unwrap_or_else(|| {
                vec![
                    GainQuantity::Direct,
                    GainQuantity::Cascade,
                    GainQuantity::Equivalent,
                ]
            }),
            sigmas: e.sigmas.unwrap_or(crate::planner::THREE_SIGMA),
            axes: e.axes.clone().unwrap_or_default(),
        };
        if experiment.bins == 0 || experiment.draws == 0 {
            return key_err("experiment", "draws and bins must be ≥ 1");
        }
        Ok(Scenario {
            sensing,
            channel,
            experiment,
        })
    }
}

fn linear(key: &str, lin: Option<f64>, db: Option<f64>) -> Result<Option<f64>, ScenarioError> {
    match (lin, db) {
        (Some(_), Some(_)) => key_err(key, format!("give either {key} or {key}_db, not both")),
        (Some(v), None) => Ok(Some(v)),
        (None, Some(d)) => Ok(Some(from_db(d))),
        (None, None) => Ok(None),
    }
}

impl Scenario {
    /// Linear-unit file that resolves back to `self` under any seed.
    pub fn echo(&self) -> ScenarioFile {
        let (s, ch, e) = (&self.sensing, &self.channel, &self.experiment);
        ScenarioFile {
            schema_version: SCHEMA_VERSION,
            sensing: SensingSection {
                antennas: Some(s.antennas),
                c: Some(s.c),
                alpha: Some(s.alpha),
                sigma_u_sq: Some(s.sigma_u_sq),
                sigma_s_sq: Some(s.sigma_s_sq),
                ..Default::default()
            },
            channel: ChannelSection {
                elements: Some(ch.elements),
                beta_d: Some(ch.beta_d),
                beta_f: Some(ch.beta_f),
                beta_g: Some(ch.beta_g),
                kappa_f: Some(ch.kappa_f),
                kappa_g: Some(ch.kappa_g),
                los: Some(ch.los),
                theta_f_aoa: Some(ch.theta_f_aoa),
                theta_g_aoa: Some(ch.theta_g_aoa),
                theta_g_aod: Some(ch.theta_g_aod),
                spacing: Some(ch.spacing),
                ..Default::default()
            },
            experiment: ExperimentSection {
                phase_mode: Some(e.phase_mode),
                trials: Some(e.trials),
                engine: Some(e.engine),
                case: e.case,
                elements_grid: Some(e.elements_grid.clone()),
                antennas_grid: Some(e.antennas_grid.clone()),
                c_grid: Some(e.c_grid.clone()),
                targets: Some(e.targets.clone()),
                draws: Some(e.draws),
                bins: Some(e.bins),
                quantities: Some(e.quantities.clone()),
                sigmas: Some(e.sigmas),
                axes: Some(e.axes.clone()),
            },
        }
    }

    pub fn experiment_spec(&self, seed: u64) -> ExperimentSpec {
        ExperimentSpec {
            phase_mode: self.experiment.phase_mode,
            trials: self.experiment.trials,
            engine: self.experiment.engine,
            ..ExperimentSpec::new(self.sensing.clone(), self.channel.clone(), seed)
        }
    }

    /// Gain law for analytical columns: the override, else no surface at
    /// `M = 0`, else the law implied by the channel.
    pub fn case_for(&self, elements: usize) -> GainCase {
        match self.experiment.case {
            Some(c) => c,
            None if elements == 0 => GainCase::Direct,
            None => GainCase::for_config(&self.channel),
        }
    }

    /// `config.`-prefixed dotted `key=value` lines; each line is valid TOML.
    pub fn metadata_entries(&self) -> Vec<(String, String)> {
        let value = toml::Value::try_from(self.echo()).expect("scenario converts to toml");
        let mut out = Vec::new();
        flatten("config", &value, &mut out);
        out
    }
}

fn flatten(prefix: &str, v: &toml::Value, out: &mut Vec<(String, String)>) {
    match v {
        toml::Value::Table(t) => {
            for (k, val) in t {
                flatten(&format!("{prefix}.{k}"), val, out);
            }
        }
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

/// Recover the scenario echoed in a metadata sidecar.
pub fn scenario_from_metadata(text: &str) -> Result<ScenarioFile, ScenarioError> {
    let table: toml::Table = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((0, 0), |s| line_col(text, s.start));
        ScenarioError::Parse {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;
    let Some(cfg) = table.get("config").cloned() else {
        return key_err("config", "metadata carries no config entries");
    };
    cfg.try_into()
        .map_err(|e: toml::de::Error| ScenarioError::Key {
            key: "config".into(),
            message: e.message().to_string(),
        })
}
