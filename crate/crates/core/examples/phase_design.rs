//! Statistical phase design against random phases on one Rician realization
//! ensemble.
//!
//! `cargo run --release --example phase_design`

use ris_sense::channel::{
    effective_gain, random_phase_design, sample_channels, statistical_phase_design, ChannelConfig,
};
use ris_sense::rng::RngStream;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = ChannelConfig {
        antennas: 16,
        elements: 64,
        beta_d: 0.0,
        beta_f: 1.0,
        beta_g: 1.0,
        kappa_f: 5.0,
        kappa_g: 5.0,
        theta_f_aoa: 0.4,
        theta_g_aoa: -0.1,
        theta_g_aod: 1.1,
        ..ChannelConfig::default()
    };
    let designed = statistical_phase_design(&cfg);
    let a_f = cfg.a_f();
    let b_g = cfg.b_g();
    let aligned: num_complex::Complex64 = b_g
        .iter()
        .zip(designed.apply(&a_f)?)
        .map(|(b, x)| b.conj() * x)
        .sum();
    println!(
        "|b_G^H Phi a_f| with designed phases = {:.6} (M = {})",
        aligned.norm(),
        cfg.elements
    );

    let draws = 2000;
    let (mut g_designed, mut g_random) = (0.0, 0.0);
    for k in 0..draws {
        let real = sample_channels(&cfg, RngStream::new(3, k));
        g_designed += effective_gain(&real, &designed)?;
        g_random += effective_gain(
            &real,
            &random_phase_design(cfg.elements, RngStream::new(4, k)),
        )?;
    }
    println!(
        "mean cascade gain, designed phases: {:.1}",
        g_designed / draws as f64
    );
    println!(
        "mean cascade gain, random phases:   {:.1}",
        g_random / draws as f64
    );
    Ok(())
}
