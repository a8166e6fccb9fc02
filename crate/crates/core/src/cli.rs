//! Command-line front end.
//!
//! Every subcommand resolves a scenario (file, then flag overrides), runs on
//! a rayon pool capped by `--workers`, writes its CSV to `--out`, and puts
//! a `key=value` sidecar next to it. Exit codes: 0 success, 1 failed
//! validation, 2 configuration error, 3 numerical failure.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::detector::{analytical_pfa, detection_threshold};
use crate::gain::{cascade_law, gain_dist_direct, gain_law, GainCase};
use crate::montecarlo::{empirical_gain_samples, ChannelSampling, GainQuantity};
use crate::output::{
    gain_histogram, metadata_path, write_gain_pdf, write_metadata, write_pd_curve, write_plan,
    write_sweep, OutputError, PdCurveRow, PlanRow, VALIDATION_HEADER,
};
use crate::planner::{m_for_target_pd, plan, PlanOptions};
use crate::scenario::{Overrides, Scenario, ScenarioFile};
use crate::sweep::{sweep, SweepAxis, SweepParam, SweepSpec};
use crate::tracy_widom::{tw2, wishart_edge_scaling};
use crate::validation::{run_criterion, CriterionReport, ValidationContext};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "ris-sense",
    version,
    about = "Maximum-eigenvalue sensing with a reflecting surface"
)]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Master seed for every random draw.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Scenario file (TOML).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Receiver antennas, overriding the file.
    #[arg(long = "N", global = true)]
    pub antennas: Option<usize>,
    /// False-alarm target, overriding the file.
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Ratio N/n, overriding the file.
    #[arg(long, global = true)]
    pub c: Option<f64>,
    /// Output CSV path; a `.meta` sidecar is written beside it.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the detection threshold and its inputs.
    Threshold,
    /// Histograms of the channel gains with analytical densities.
    GainPdf,
    /// P_d against M (and N): analytical and simulated.
    PdCurve,
    /// Element counts M_inf, M_PD and per-target minima over a c grid.
    Plan,
    /// Cartesian sweep over the scenario's axes.
    Sweep,
    /// Run the acceptance criteria.
    Validate {
        /// Criterion ids to run (all when omitted).
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Self::Threshold => "threshold",
            Self::GainPdf => "gain-pdf",
            Self::PdCurve => "pd-curve",
            Self::Plan => "plan",
            Self::Sweep => "sweep",
            Self::Validate { .. } => "validate",
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
    ValidationFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => EXIT_CONFIG,
            Self::Numerical(_) => EXIT_NUMERICAL,
            Self::ValidationFailed(_) => EXIT_VALIDATION_FAILED,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Config(m) => write!(f, "configuration error: {m}"),
            Self::Numerical(m) => write!(f, "numerical failure: {m}"),
            Self::ValidationFailed(n) => write!(f, "{n} criteria failed"),
        }
    }
}

impl From<OutputError> for CliError {
    fn from(e: OutputError) -> Self {
        Self::Config(e.to_string())
    }
}

fn numerical(e: impl std::fmt::Display) -> CliError {
    CliError::Numerical(e.to_string())
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("ris-sense: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let seed = cli
        .common
        .seed
        .ok_or_else(|| CliError::Config("--seed is required".into()))?;
    let scenario = load_scenario(&cli.common, seed)?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cli.common.workers {
        if w == 0 {
            return Err(CliError::Config("--workers must be ≥ 1".into()));
        }
        pool = pool.num_threads(w);
    }
    let pool = pool.build().map_err(|e| CliError::Config(e.to_string()))?;
    let started = Instant::now();
    let out = cli
        .common
        .out
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}.csv", cli.command.name())));
    let ctx = RunContext {
        scenario: &scenario,
        seed,
        out: &out,
    };
    let (extra, outcome) = pool.install(|| match &cli.command {
        Command::Threshold => cmd_threshold(&ctx).map(|e| (e, Ok(()))),
        Command::GainPdf => cmd_gain_pdf(&ctx).map(|e| (e, Ok(()))),
        Command::PdCurve => cmd_pd_curve(&ctx).map(|e| (e, Ok(()))),
        Command::Plan => cmd_plan(&ctx).map(|e| (e, Ok(()))),
        Command::Sweep => cmd_sweep(&ctx).map(|e| (e, Ok(()))),
        Command::Validate { only } => cmd_validate(&ctx, only),
    })?;
    if !matches!(cli.command, Command::Threshold) {
        let mut meta = vec![
            ("tool".to_string(), quote("ris-sense")),
            ("tool_version".to_string(), quote(env!("CARGO_PKG_VERSION"))),
            ("command".to_string(), quote(cli.command.name())),
            ("seed".to_string(), seed.to_string()),
            (
                "workers".to_string(),
                pool.current_num_threads().to_string(),
            ),
            (
                "wall_time_s".to_string(),
                format!("{:.3}", started.elapsed().as_secs_f64()),
            ),
            ("tw2_table_sha256".to_string(), quote(tw2().checksum())),
        ];
        meta.extend(extra);
        meta.extend(scenario.metadata_entries());
        write_metadata(&metadata_path(&out), &meta)?;
    }
    outcome
}

fn quote(s: &str) -> String {
    toml::Value::String(s.to_string()).to_string()
}

fn load_scenario(common: &CommonArgs, seed: u64) -> Result<Scenario, CliError> {
    let mut file = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            ScenarioFile::parse(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?
        }
        None => ScenarioFile::default(),
    };
    file.apply(&Overrides {
        antennas: common.antennas,
        alpha: common.alpha,
        c: common.c,
    });
    file.resolve(seed)
        .map_err(|e| CliError::Config(e.to_string()))
}

pub struct RunContext<'a> {
    pub scenario: &'a Scenario,
    pub seed: u64,
    pub out: &'a Path,
}

type Meta = Vec<(String, String)>;

fn create(path: &Path) -> Result<std::io::BufWriter<std::fs::File>, CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::Config(format!("{}: {e}", dir.display())))?;
    }
    std::fs::File::create(path)
        .map(std::io::BufWriter::new)
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

pub fn cmd_threshold(ctx: &RunContext) -> Result<Meta, CliError> {
    let s = &ctx.scenario.sensing;
    let gamma = detection_threshold(s).map_err(numerical)?;
    let (center, scale) = wishart_edge_scaling(s.antennas, s.c);
    let q = tw2().quantile(1.0 - s.alpha).map_err(numerical)?;
    let mut lines = vec![
        ("gamma".to_string(), gamma.to_string()),
        ("alpha".to_string(), s.alpha.to_string()),
        (
            "pfa_analytical".to_string(),
            analytical_pfa(gamma, s).to_string(),
        ),
        ("tw2_quantile".to_string(), q.to_string()),
        ("edge_center".to_string(), center.to_string()),
        ("edge_scale".to_string(), scale.to_string()),
        ("N".to_string(), s.antennas.to_string()),
        ("n".to_string(), s.samples.to_string()),
        ("c".to_string(), s.c.to_string()),
    ];
    lines.extend(ctx.scenario.metadata_entries());
    for (k, v) in &lines {
        println!("{k}={v}");
    }
    Ok(Vec::new())
}

pub fn cmd_gain_pdf(ctx: &RunContext) -> Result<Meta, CliError> {
    let sc = ctx.scenario;
    let m = sc.channel.elements;
    let case = sc.case_for(m);
    let spec = sc.experiment_spec(ctx.seed);
    let mut rows = Vec::new();
    for &q in &sc.experiment.quantities {
        let xs = empirical_gain_samples(&spec, q, sc.experiment.draws, ChannelSampling::Compressed)
            .map_err(numerical)?;
        let law = match q {
            GainQuantity::Direct => gain_dist_direct(&sc.channel),
            GainQuantity::Cascade => cascade_law(&sc.channel, case, m as f64),
            GainQuantity::Equivalent => gain_law(&sc.channel, case, m as f64),
        };
        rows.extend(gain_histogram(q, &xs, sc.experiment.bins, Some(&law)));
    }
    write_gain_pdf(create(ctx.out)?, &rows)?;
    Ok(vec![
        ("case".into(), quote(&case.to_string())),
        ("draws".into(), sc.experiment.draws.to_string()),
        ("rows".into(), rows.len().to_string()),
    ])
}

fn sweep_spec(ctx: &RunContext, axes: Vec<SweepAxis>) -> SweepSpec {
    let sc = ctx.scenario;
    SweepSpec {
        case: sc.experiment.case,
        plan: PlanOptions {
            sigmas: sc.experiment.sigmas,
            ..PlanOptions::default()
        },
        ..SweepSpec::new(sc.experiment_spec(ctx.seed), axes)
    }
}

pub fn cmd_pd_curve(ctx: &RunContext) -> Result<Meta, CliError> {
    let e = &ctx.scenario.experiment;
    let axes = vec![
        SweepAxis {
            param: SweepParam::Antennas,
            values: e.antennas_grid.iter().map(|&n| n as f64).collect(),
        },
        SweepAxis {
            param: SweepParam::Elements,
            values: e.elements_grid.iter().map(|&m| m as f64).collect(),
        },
    ];
    let rows = sweep(&sweep_spec(ctx, axes)).map_err(|e| CliError::Config(e.to_string()))?;
    let table: Vec<PdCurveRow> = rows
        .iter()
        .map(|r| PdCurveRow {
            antennas: r.antennas,
            elements: r.elements,
            gamma: r.gamma.unwrap_or(f64::NAN),
            pd_analytical: r.pd_analytical,
            pd_empirical: r.pd_empirical,
            pfa_empirical: r.pfa_empirical,
            status: r.status.clone(),
        })
        .collect();
    write_pd_curve(create(ctx.out)?, &table)?;
    Ok(vec![
        ("trials_per_hypothesis".into(), e.trials.to_string()),
        ("rows".into(), table.len().to_string()),
    ])
}

pub fn cmd_plan(ctx: &RunContext) -> Result<Meta, CliError> {
    let sc = ctx.scenario;
    let case = sc.case_for(sc.channel.elements.max(1));
    if case == GainCase::Direct {
        return Err(CliError::Config(
            "planning needs a surface gain law, not 'direct'".into(),
        ));
    }
    let opts = PlanOptions {
        sigmas: sc.experiment.sigmas,
        ..PlanOptions::default()
    };
    let mut rows = Vec::new();
    for &c in &sc.experiment.c_grid {
        let sensing =
            match crate::detector::SensingConfig::new(sc.sensing.antennas, c, sc.sensing.alpha) {
                Ok(s) => crate::detector::SensingConfig {
                    sigma_u_sq: sc.sensing.sigma_u_sq,
                    sigma_s_sq: sc.sensing.sigma_s_sq,
                    ..s
                },
                Err(e) => return Err(CliError::Config(format!("c = {c}: {e}"))),
            };
        let base = plan(&sc.channel, &sensing, case, &opts);
        for &t in &sc.experiment.targets {
            let mut row = PlanRow {
                c,
                samples: sensing.samples,
                gamma: None,
                m_inf: None,
                g0: None,
                m_pd: None,
                target_pd: Some(t),
                m_target: None,
                status: "ok".into(),
            };
            let mut errors = Vec::new();
            match &base {
                Ok(p) => {
                    row.gamma = Some(p.gamma);
                    row.m_inf = Some(p.m_inf);
                    row.g0 = p.g0;
                    row.m_pd = Some(p.m_pd);
                }
                Err(e) => errors.push(format!("plan: {e}")),
            }
            match m_for_target_pd(&sc.channel, &sensing, case, t, &opts) {
                Ok(s) => row.m_target = Some(s.m),
                Err(e) => errors.push(format!("target: {e}")),
            }
            if !errors.is_empty() {
                row.status = errors.join("; ");
            }
            rows.push(row);
        }
    }
    write_plan(create(ctx.out)?, &rows)?;
    Ok(vec![
        ("case".into(), quote(&case.to_string())),
        ("sigmas".into(), sc.experiment.sigmas.to_string()),
        ("rows".into(), rows.len().to_string()),
    ])
}

pub fn cmd_sweep(ctx: &RunContext) -> Result<Meta, CliError> {
    let axes = ctx.scenario.experiment.axes.clone();
    if axes.is_empty() {
        return Err(CliError::Config(
            "sweep needs at least one [[experiment.axes]] entry".into(),
        ));
    }
    let names: Vec<&str> = axes.iter().map(|a| a.param.name()).collect();
    let rows =
        sweep(&sweep_spec(ctx, axes.clone())).map_err(|e| CliError::Config(e.to_string()))?;
    write_sweep(create(ctx.out)?, &names, &rows)?;
    let failed = rows.iter().filter(|r| r.status != "ok").count();
    Ok(vec![
        (
            "trials_per_hypothesis".into(),
            ctx.scenario.experiment.trials.to_string(),
        ),
        ("rows".into(), rows.len().to_string()),
        ("failed_cells".into(), failed.to_string()),
    ])
}

pub fn cmd_validate(
    ctx: &RunContext,
    only: &[u8],
) -> Result<(Meta, Result<(), CliError>), CliError> {
    let ids: Vec<u8> = if only.is_empty() {
        (1..=11).collect()
    } else {
        only.to_vec()
    };
    if let Some(bad) = ids.iter().find(|id| !(1..=11).contains(*id)) {
        return Err(CliError::Config(format!(
            "no criterion {bad}; ids run from 1 to 11"
        )));
    }
    let vctx = ValidationContext { seed: ctx.seed };
    let reports: Vec<CriterionReport> = ids
        .iter()
        .map(|&id| {
            let r = run_criterion(id, &vctx);
            println!("{r}");
            r
        })
        .collect();
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(create(ctx.out)?);
    let csv_err = |e: csv::Error| CliError::from(OutputError::from(e));
    w.write_record(VALIDATION_HEADER).map_err(csv_err)?;
    for r in &reports {
        w.write_record([
            r.id.to_string(),
            r.title.to_string(),
            if r.passed { "PASS" } else { "FAIL" }.to_string(),
            r.detail.clone(),
        ])
        .map_err(csv_err)?;
    }
    w.flush().map_err(|e| CliError::Config(e.to_string()))?;
    let failed = reports.iter().filter(|r| !r.passed).count();
    let meta = vec![
        ("criteria".into(), reports.len().to_string()),
        ("failed".into(), failed.to_string()),
    ];
    let outcome = if failed == 0 {
        Ok(())
    } else {
        Err(CliError::ValidationFailed(failed))
    };
    Ok((meta, outcome))
}
