//! Cartesian parameter sweeps combining analytical and simulated results.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detector::{analytical_pd, analytical_pfa, detection_threshold, SensingConfig};
use crate::gain::{gain_law, GainCase};
use crate::montecarlo::{estimate_probs, ExperimentSpec, MonteCarloError, Proportion};
use crate::planner::{plan, PlanOptions, PlanResult};

/// Parameter that a sweep axis varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    /// Reflecting elements `M`.
    Elements,
    /// Antennas `N`; `Nβ_d` is held fixed and `n = round(N/c)`.
    Antennas,
    /// Ratio `c = N/n`.
    C,
    Alpha,
    /// Sets `κ_f` and `κ_G` together.
    Kappa,
    KappaF,
    KappaG,
    /// `Nβ_d` in dB.
    SnrDb,
    /// `β_f β_G` in dB, split evenly between the two links.
    CascadeLossDb,
}

impl SweepParam {
    pub const ALL: [SweepParam; 9] = [
        Self::Elements,
        Self::Antennas,
        Self::C,
        Self::Alpha,
        Self::Kappa,
        Self::KappaF,
        Self::KappaG,
        Self::SnrDb,
        Self::CascadeLossDb,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Elements => "elements",
            Self::Antennas => "antennas",
            Self::C => "c",
            Self::Alpha => "alpha",
            Self::Kappa => "kappa",
            Self::KappaF => "kappa_f",
            Self::KappaG => "kappa_g",
            Self::SnrDb => "snr_db",
            Self::CascadeLossDb => "cascade_loss_db",
        }
    }

    fn is_integer(self) -> bool {
        matches!(self, Self::Elements | Self::Antennas)
    }

    /// Write `value` into `spec`.
    pub fn apply(self, spec: &mut ExperimentSpec, value: f64) -> Result<(), MonteCarloError> {
        let bad = |m: String| Err(MonteCarloError::Invalid(m));
        if self.is_integer() && (value < 0.0 || value.fract() != 0.0) {
            return bad(format!(
                "{} takes non-negative integers, got {value}",
                self.name()
            ));
        }
        let (ch, s) = (&mut spec.channel, &mut spec.sensing);
        match self {
            Self::Elements => ch.elements = value as usize,
            Self::Antennas => {
                let n_new = value as usize;
                let snr = ch.beta_d * ch.antennas as f64;
                ch.antennas = n_new;
                ch.beta_d = snr / n_new.max(1) as f64;
                *s = rebuild(s, n_new, s.c)?;
            }
            Self::C => *s = rebuild(s, s.antennas, value)?,
            Self::Alpha => s.alpha = value,
            Self::Kappa => {
                ch.kappa_f = value;
                ch.kappa_g = value;
            }
            Self::KappaF => ch.kappa_f = value,
            Self::KappaG => ch.kappa_g = value,
            Self::SnrDb => ch.beta_d = from_db(value) / ch.antennas as f64,
            Self::CascadeLossDb => {
                let each = from_db(value).sqrt();
                ch.beta_f = each;
                ch.beta_g = each;
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for SweepParam {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Self::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| format!("unknown sweep parameter '{s}'"))
    }
}

fn rebuild(s: &SensingConfig, antennas: usize, c: f64) -> Result<SensingConfig, MonteCarloError> {
    let fresh = SensingConfig::new(antennas, c, s.alpha)?;
    Ok(SensingConfig {
        sigma_u_sq: s.sigma_u_sq,
        sigma_s_sq: s.sigma_s_sq,
        ..fresh
    })
}

pub fn to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepAxis {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: ExperimentSpec,
    /// Axes in nesting order; the first axis varies slowest.
    pub axes: Vec<SweepAxis>,
    /// Gain law for the analytical columns; inferred per cell when `None`.
    pub case: Option<GainCase>,
    pub plan: PlanOptions,
    /// Skip the simulation and emit analytical columns only.
    pub analytical_only: bool,
}

impl SweepSpec {
    pub fn new(base: ExperimentSpec, axes: Vec<SweepAxis>) -> Self {
        Self {
            base,
            axes,
            case: None,
            plan: PlanOptions::default(),
            analytical_only: false,
        }
    }

    /// Grid points in row order.
    pub fn cells(&self) -> Vec<Vec<f64>> {
        let mut out = vec![Vec::new()];
        for axis in &self.axes {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    axis.values.iter().map(move |&v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
                })
                .collect();
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub cell: usize,
    /// `(parameter, value)` per axis.
    pub params: Vec<(SweepParam, f64)>,
    pub antennas: usize,
    pub samples: usize,
    pub elements: usize,
    pub case: Option<GainCase>,
    pub gamma: Option<f64>,
    pub pfa_analytical: Option<f64>,
    pub pd_analytical: Option<f64>,
    pub pd_empirical: Option<Proportion>,
    pub pfa_empirical: Option<Proportion>,
    pub plan: Option<PlanResult>,
    /// `"ok"` or a semicolon-separated list of per-stage failures.
    pub status: String,
}

/// Evaluate every grid point. Cells run in parallel; the rows come back in
/// grid order, and a failure in one cell is recorded in its status.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>, MonteCarloError> {
    if spec.axes.is_empty() || spec.axes.iter().any(|a| a.values.is_empty()) {
        return Err(MonteCarloError::Invalid(
            "sweep axes must be nonempty".into(),
        ));
    }
    let cells = spec.cells();
    Ok(cells
        .par_iter()
        .enumerate()
        .map(|(i, values)| run_cell(spec, i, values))
        .collect())
}

fn run_cell(spec: &SweepSpec, index: usize, values: &[f64]) -> SweepRow {
    let params: Vec<_> = spec
        .axes
        .iter()
        .map(|a| a.param)
        .zip(values.iter().copied())
        .collect();
    let mut row = SweepRow {
        cell: index,
        params: params.clone(),
        antennas: spec.base.sensing.antennas,
        samples: spec.base.sensing.samples,
        elements: spec.base.channel.elements,
        case: None,
        gamma: None,
        pfa_analytical: None,
        pd_analytical: None,
        pd_empirical: None,
        pfa_empirical: None,
        plan: None,
        status: String::new(),
    };
    let mut errors = Vec::new();
    let mut cell = ExperimentSpec {
        cell_id: index as u64,
        ..spec.base.clone()
    };
    for &(p, v) in &params {
        if let Err(e) = p.apply(&mut cell, v) {
            row.status = format!("config: {e}");
            return row;
        }
    }
    row.antennas = cell.sensing.antennas;
    row.samples = cell.sensing.samples;
    row.elements = cell.channel.elements;
    if let Err(e) = cell.validate() {
        row.status = format!("config: {e}");
        return row;
    }
    let case = match spec.case {
        Some(c) => c,
        None if cell.channel.elements == 0 => GainCase::Direct,
        None => GainCase::for_config(&cell.channel),
    };
    row.case = Some(case);
    match detection_threshold(&cell.sensing) {
        Ok(g) => {
            row.gamma = Some(g);
            row.pfa_analytical = Some(analytical_pfa(g, &cell.sensing));
        }
        Err(e) => errors.push(format!("threshold: {e}")),
    }
    let law = gain_law(&cell.channel, case, cell.channel.elements as f64);
    match analytical_pd(&law, &cell.sensing) {
        Ok(p) => row.pd_analytical = Some(p),
        Err(e) => errors.push(format!("pd: {e}")),
    }
    if case != GainCase::Direct {
        match plan(&cell.channel, &cell.sensing, case, &spec.plan) {
            Ok(p) => row.plan = Some(p),
            Err(e) => errors.push(format!("plan: {e}")),
        }
    }
    if !spec.analytical_only {
        match estimate_probs(&cell) {
            Ok(est) => {
                row.pd_empirical = Some(est.pd);
                row.pfa_empirical = Some(est.pfa);
            }
            Err(e) => errors.push(format!("simulation: {e}")),
        }
    }
    row.status = if errors.is_empty() {
        "ok".into()
    } else {
        errors.join("; ")
    };
    row
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ChannelConfig;

    fn base() -> ExperimentSpec {
        let sensing = SensingConfig::new(16, 0.05, 0.1).unwrap();
        let channel = ChannelConfig {
            antennas: 16,
            kappa_f: 5.0,
            kappa_g: 5.0,
            ..ChannelConfig::default()
        };
        ExperimentSpec {
            trials: 100,
            ..ExperimentSpec::new(sensing, channel, 5)
        }
    }

    #[test]
    fn grid_order_is_row_major() {
        let spec = SweepSpec::new(
            base(),
            vec![
                SweepAxis {
                    param: SweepParam::C,
                    values: vec![0.01, 0.02],
                },
                SweepAxis {
                    param: SweepParam::Elements,
                    values: vec![0.0, 5.0, 10.0],
                },
            ],
        );
        let cells = spec.cells();
        assert_eq!(cells.len(), 6);
        assert_eq!(cells[1], vec![0.01, 5.0]);
        assert_eq!(cells[3], vec![0.02, 0.0]);
    }

    #[test]
    fn bad_cells_do_not_abort() {
        let spec = SweepSpec::new(
            base(),
            vec![SweepAxis {
                param: SweepParam::Elements,
                values: vec![2.5, 4.0],
            }],
        );
        let rows = sweep(&spec).unwrap();
        assert!(rows[0].status.starts_with("config"));
        assert_eq!(rows[1].status, "ok");
        assert!(rows[1].pd_empirical.is_some());
    }

    #[test]
    fn antennas_axis_keeps_snr() {
        let mut s = base();
        let snr = s.channel.beta_d * 16.0;
        SweepParam::Antennas.apply(&mut s, 64.0).unwrap();
        assert!((s.channel.beta_d * 64.0 - snr).abs() < 1e-15);
        assert_eq!(s.sensing.samples, 1280);
    }

    #[test]
    fn empty_axes_rejected() {
        assert!(sweep(&SweepSpec::new(base(), vec![])).is_err());
    }
}
