//! Gaussian laws of the channel gain against simulation, for each case.
//!
//! `cargo run --release --example gain_laws -- [M]`

use ris_sense::channel::{ChannelConfig, PhaseMode};
use ris_sense::detector::SensingConfig;
use ris_sense::gain::{gain_law, GainCase};
use ris_sense::montecarlo::{
    empirical_gain_samples, ChannelSampling, ExperimentSpec, GainQuantity,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let m: usize = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(40);
    let base = ChannelConfig {
        antennas: 64,
        elements: m,
        beta_d: 0.01 / 64.0,
        beta_f: 1e-3,
        beta_g: 1e-3,
        theta_f_aoa: 0.3,
        theta_g_aoa: -0.2,
        theta_g_aod: 0.7,
        ..ChannelConfig::default()
    };
    let sensing = SensingConfig::new(64, 0.01, 0.1)?;
    println!("M = {m}, N = 64, N·beta_d = -20 dB, beta_f·beta_G = -60 dB, 1e5 draws\n");
    println!(
        "{:<9} {:>12} {:>12} {:>12} {:>12}",
        "case", "law mean", "sim mean", "law var", "sim var"
    );
    for case in [
        GainCase::Direct,
        GainCase::LoS,
        GainCase::Rayleigh,
        GainCase::Rician,
    ] {
        let channel = ChannelConfig {
            los: case == GainCase::LoS,
            kappa_f: if case == GainCase::Rician { 5.0 } else { 0.0 },
            kappa_g: if case == GainCase::Rician { 5.0 } else { 0.0 },
            elements: if case == GainCase::Direct { 0 } else { m },
            ..base.clone()
        };
        let spec = ExperimentSpec {
            phase_mode: if case == GainCase::Rayleigh {
                PhaseMode::Random
            } else {
                PhaseMode::Statistical
            },
            ..ExperimentSpec::new(sensing.clone(), channel.clone(), 11)
        };
        let xs = empirical_gain_samples(
            &spec,
            GainQuantity::Equivalent,
            100_000,
            ChannelSampling::Compressed,
        )?;
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
        let law = gain_law(&channel, case, channel.elements as f64);
        println!(
            "{:<9} {:>12.5e} {:>12.5e} {:>12.5e} {:>12.5e}",
            case.to_string(),
            law.mean,
            mean,
            law.variance,
            var
        );
    }
    Ok(())
}
