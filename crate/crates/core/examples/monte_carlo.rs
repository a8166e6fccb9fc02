//! Empirical false-alarm and detection rates with Wilson intervals.
//!
//! `cargo run --release --example monte_carlo -- [M] [trials]`

use ris_sense::channel::ChannelConfig;
use ris_sense::detector::{analytical_pd, SensingConfig};
use ris_sense::gain::{gain_law, GainCase};
use ris_sense::montecarlo::{estimate_probs, ExperimentSpec};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .map(|a| a.parse())
        .collect::<Result<_, _>>()?;
    let m = args.first().copied().unwrap_or(50);
    let trials = args.get(1).copied().unwrap_or(2000);
    let sensing = SensingConfig::new(64, 0.01, 0.1)?;
    let channel = ChannelConfig {
        antennas: 64,
        elements: m,
        kappa_f: 5.0,
        kappa_g: 5.0,
        ..ChannelConfig::default()
    };
    let spec = ExperimentSpec {
        trials,
        ..ExperimentSpec::new(sensing.clone(), channel.clone(), 2024)
    };
    let est = estimate_probs(&spec)?;
    let case = if m == 0 {
        GainCase::Direct
    } else {
        GainCase::Rician
    };
    let pd = analytical_pd(&gain_law(&channel, case, m as f64), &sensing)?;
    println!(
        "M = {m}, {trials} trials per hypothesis, gamma = {:.6}",
        est.gamma
    );
    println!(
        "P_fa = {:.4}  [{:.4}, {:.4}]",
        est.pfa.value, est.pfa.ci_lo, est.pfa.ci_hi
    );
    println!(
        "P_d  = {:.4}  [{:.4}, {:.4}]   analytical {pd:.4}",
        est.pd.value, est.pd.ci_lo, est.pd.ci_hi
    );
    Ok(())
}
