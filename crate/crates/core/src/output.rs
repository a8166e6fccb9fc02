//! CSV tables and key=value metadata sidecars.
//!
//! Every table has a fixed header so downstream plotting can rely on column
//! names. Numbers use Rust's shortest round-trip formatting, missing values
//! are empty cells, and lines end in LF.

use std::io::Write;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::gain::GainDistribution;
use crate::montecarlo::{GainQuantity, Proportion};
use crate::sweep::SweepRow;

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub const PD_CURVE_HEADER: [&str; 11] = [
    "N",
    "M",
    "gamma",
    "pd_analytical",
    "pd_empirical",
    "ci_lo",
    "ci_hi",
    "pfa_empirical",
    "pfa_ci_lo",
    "pfa_ci_hi",
    "status",
];

pub const PLAN_HEADER: [&str; 9] = [
    "c",
    "n",
    "gamma",
    "m_inf",
    "g0",
    "m_pd",
    "target_pd",
    "m_target",
    "status",
];

pub const GAIN_PDF_HEADER: [&str; 6] = [
    "quantity",
    "bin_lo",
    "bin_hi",
    "bin_center",
    "empirical_density",
    "analytical_density",
];

/// Sweep columns after the `cell` column and the per-axis columns.
pub const SWEEP_TRAILER: [&str; 17] = [
    "N",
    "n",
    "M",
    "case",
    "gamma",
    "pfa_analytical",
    "pd_analytical",
    "pd_empirical",
    "pd_ci_lo",
    "pd_ci_hi",
    "pfa_empirical",
    "pfa_ci_lo",
    "pfa_ci_hi",
    "m_inf",
    "g0",
    "m_pd",
    "status",
];

pub const VALIDATION_HEADER: [&str; 4] = ["criterion", "title", "result", "detail"];

pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_f64).unwrap_or_default()
}

fn opt_usize(x: Option<usize>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PdCurveRow {
    pub antennas: usize,
    pub elements: usize,
    pub gamma: f64,
    pub pd_analytical: Option<f64>,
    pub pd_empirical: Option<Proportion>,
    pub pfa_empirical: Option<Proportion>,
    pub status: String,
}

pub fn write_pd_curve<W: Write>(out: W, rows: &[PdCurveRow]) -> Result<(), OutputError> {
    let mut w = writer(out);
    w.write_record(PD_CURVE_HEADER)?;
    for r in rows {
        let pd = r.pd_empirical.as_ref();
        let pfa = r.pfa_empirical.as_ref();
        w.write_record([
            r.antennas.to_string(),
            r.elements.to_string(),
            fmt_f64(r.gamma),
            opt(r.pd_analytical),
            opt(pd.map(|p| p.value)),
            opt(pd.map(|p| p.ci_lo)),
            opt(pd.map(|p| p.ci_hi)),
            opt(pfa.map(|p| p.value)),
            opt(pfa.map(|p| p.ci_lo)),
            opt(pfa.map(|p| p.ci_hi)),
            r.status.clone(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanRow {
    pub c: f64,
    pub samples: usize,
    pub gamma: Option<f64>,
    pub m_inf: Option<usize>,
    pub g0: Option<f64>,
    pub m_pd: Option<usize>,
    pub target_pd: Option<f64>,
    pub m_target: Option<usize>,
    pub status: String,
}

pub fn write_plan<W: Write>(out: W, rows: &[PlanRow]) -> Result<(), OutputError> {
    let mut w = writer(out);
    w.write_record(PLAN_HEADER)?;
    for r in rows {
        w.write_record([
            fmt_f64(r.c),
            r.samples.to_string(),
            opt(r.gamma),
            opt_usize(r.m_inf),
            opt(r.g0),
            opt_usize(r.m_pd),
            opt(r.target_pd),
            opt_usize(r.m_target),
            r.status.clone(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct GainPdfRow {
    pub quantity: GainQuantity,
    pub bin_lo: f64,
    pub bin_hi: f64,
    pub empirical_density: f64,
    pub analytical_density: Option<f64>,
}

impl GainPdfRow {
    pub fn center(&self) -> f64 {
        0.5 * (self.bin_lo + self.bin_hi)
    }
}

/// Equal-width histogram over the sample range, normalized to a density,
/// with the law's density at each bin center. Degenerate laws (zero
/// variance) leave the analytical column empty.
pub fn gain_histogram(
    quantity: GainQuantity,
    samples: &[f64],
    bins: usize,
    law: Option<&GainDistribution>,
) -> Vec<GainPdfRow> {
    if samples.is_empty() || bins == 0 {
        return Vec::new();
    }
    let lo = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let mut hi = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi <= lo {
        hi = lo + lo.abs().max(1e-300) * 1e-9;
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &x in samples {
        let k = (((x - lo) / width) as usize).min(bins - 1);
        counts[k] += 1;
    }
    let total = samples.len() as f64;
    counts
        .iter()
        .enumerate()
        .map(|(k, &n)| {
            let bin_lo = lo + k as f64 * width;
            let bin_hi = if k + 1 == bins {
                hi
            } else {
                lo + (k + 1) as f64 * width
            };
            let center = 0.5 * (bin_lo + bin_hi);
            GainPdfRow {
                quantity,
                bin_lo,
                bin_hi,
                empirical_density: n as f64 / (total * width),
                analytical_density: law.filter(|l| l.variance > 0.0).map(|l| l.density(center)),
            }
        })
        .collect()
}

pub fn write_gain_pdf<W: Write>(out: W, rows: &[GainPdfRow]) -> Result<(), OutputError> {
    let mut w = writer(out);
    w.write_record(GAIN_PDF_HEADER)?;
    for r in rows {
        w.write_record([
            r.quantity.to_string(),
            fmt_f64(r.bin_lo),
            fmt_f64(r.bin_hi),
            fmt_f64(r.center()),
            fmt_f64(r.empirical_density),
            opt(r.analytical_density),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Header of a sweep table with the given axis parameter names.
pub fn sweep_header(axis_names: &[&str]) -> Vec<String> {
    std::iter::once("cell")
        .chain(axis_names.iter().copied())
        .chain(SWEEP_TRAILER)
        .map(String::from)
        .collect()
}

pub fn write_sweep<W: Write>(
    out: W,
    axis_names: &[&str],
    rows: &[SweepRow],
) -> Result<(), OutputError> {
    let mut w = writer(out);
    w.write_record(sweep_header(axis_names))?;
    for r in rows {
        let mut rec = vec![r.cell.to_string()];
        rec.extend(r.params.iter().map(|(_, v)| fmt_f64(*v)));
        let pd = r.pd_empirical.as_ref();
        let pfa = r.pfa_empirical.as_ref();
        let plan = r.plan.as_ref();
        rec.extend([
            r.antennas.to_string(),
            r.samples.to_string(),
            r.elements.to_string(),
            r.case.map(|c| c.to_string()).unwrap_or_default(),
            opt(r.gamma),
            opt(r.pfa_analytical),
            opt(r.pd_analytical),
            opt(pd.map(|p| p.value)),
            opt(pd.map(|p| p.ci_lo)),
            opt(pd.map(|p| p.ci_hi)),
            opt(pfa.map(|p| p.value)),
            opt(pfa.map(|p| p.ci_lo)),
            opt(pfa.map(|p| p.ci_hi)),
            opt_usize(plan.map(|p| p.m_inf)),
            opt(plan.and_then(|p| p.g0)),
            opt_usize(plan.map(|p| p.m_pd)),
            r.status.clone(),
        ]);
        w.write_record(rec)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// CSV text of a sweep, as written by [`write_sweep`].
pub fn sweep_to_string(axis_names: &[&str], rows: &[SweepRow]) -> Result<String, OutputError> {
    let mut buf = Vec::new();
    write_sweep(&mut buf, axis_names, rows)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

/// Sidecar path next to a CSV: `out.csv` -> `out.csv.meta`.
pub fn metadata_path(csv_path: &Path) -> PathBuf {
    let mut s = csv_path.as_os_str().to_owned();
    s.push(".meta");
    PathBuf::from(s)
}

/// Write `key=value` lines. Values are expected to already be valid TOML
/// literals so the sidecar itself parses as TOML.
pub fn write_metadata(path: &Path, entries: &[(String, String)]) -> Result<(), OutputError> {
    let mut text = String::new();
    for (k, v) in entries {
        text.push_str(k);
        text.push('=');
        text.push_str(v);
        text.push('\n');
    }
    std::fs::write(path, text).map_err(|source| OutputError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gain::GainCase;

    #[test]
    fn histogram_is_a_density() {
        let xs: Vec<f64> = (0..1000).map(|i| i as f64 / 999.0).collect();
        let rows = gain_histogram(GainQuantity::Direct, &xs, 10, None);
        let mass: f64 = rows
            .iter()
            .map(|r| r.empirical_density * (r.bin_hi - r.bin_lo))
            .sum();
        assert!((mass - 1.0).abs() < 1e-12);
        assert_eq!(rows.last().unwrap().bin_hi, 1.0);
    }

    #[test]
    fn point_mass_law_has_no_density() {
        let law = GainDistribution {
            mean: 1.0,
            variance: 0.0,
            case: GainCase::LoS,
        };
        let rows = gain_histogram(GainQuantity::Cascade, &[1.0, 1.0], 3, Some(&law));
        assert!(rows.iter().all(|r| r.analytical_density.is_none()));
    }

    #[test]
    fn lines_end_in_lf() {
        let mut buf = Vec::new();
        write_plan(&mut buf, &[]).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s, "c,n,gamma,m_inf,g0,m_pd,target_pd,m_target,status\n");
    }
}
