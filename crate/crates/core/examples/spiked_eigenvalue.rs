//! Largest sample eigenvalue under a rank-one spike: the full sample engine,
//! the bidiagonal engine and the asymptotic law side by side.
//!
//! `cargo run --release --example spiked_eigenvalue -- [g]`

use ris_sense::channel::ChannelConfig;
use ris_sense::detector::{spiked_law, SensingConfig};
use ris_sense::montecarlo::{run_bank, Engine, ExperimentSpec, Hypothesis, TrialRunner};

fn moments(xs: &[f64]) -> (f64, f64) {
    let m = xs.iter().sum::<f64>() / xs.len() as f64;
    (
        m,
        xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64,
    )
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g: f64 = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(1.0);
    let sensing = SensingConfig::new(32, 0.1, 0.1)?;
    let channel = ChannelConfig {
        antennas: 32,
        ..ChannelConfig::default()
    };
    println!(
        "N = 32, n = {}, g = {g}: {:?}",
        sensing.samples,
        spiked_law(g, &sensing)
    );
    for engine in [Engine::Samples, Engine::Reduced] {
        let spec = ExperimentSpec {
            engine,
            trials: 400,
            fixed_gain: Some(g),
            ..ExperimentSpec::new(sensing.clone(), channel.clone(), 8)
        };
        let runner = TrialRunner::new(&spec)?;
        let ts: Vec<f64> = run_bank(&runner, Hypothesis::H1)?
            .iter()
            .map(|o| o.statistic)
            .collect();
        let (m, v) = moments(&ts);
        println!("{engine:>8}: mean T = {m:.5}, var T = {v:.3e}");
    }
    Ok(())
}
