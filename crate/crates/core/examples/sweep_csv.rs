//! A two-axis sweep written as CSV to stdout.
//!
//! `cargo run --release --example sweep_csv`

use ris_sense::channel::ChannelConfig;
use ris_sense::detector::SensingConfig;
use ris_sense::montecarlo::ExperimentSpec;
use ris_sense::output::write_sweep;
use ris_sense::sweep::{sweep, SweepAxis, SweepParam, SweepSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let base = ExperimentSpec {
        trials: 300,
        ..ExperimentSpec::new(
            SensingConfig::new(64, 0.01, 0.1)?,
            ChannelConfig::default(),
            7,
        )
    };
    let spec = SweepSpec::new(
        base,
        vec![
            SweepAxis {
                param: SweepParam::Kappa,
                values: vec![0.0, 5.0],
            },
            SweepAxis {
                param: SweepParam::Elements,
                values: vec![0.0, 40.0, 80.0],
            },
        ],
    );
    let rows = sweep(&spec)?;
    write_sweep(std::io::stdout().lock(), &["kappa", "elements"], &rows)?;
    Ok(())
}
