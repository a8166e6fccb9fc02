//! Analytical detection probability against the number of elements.
//!
//! `cargo run --release --example detection_probability -- [N] [kappa]`

use ris_sense::channel::ChannelConfig;
use ris_sense::detector::{analytical_pd, spiked_law, SensingConfig};
use ris_sense::gain::{gain_law, GainCase};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .map(|a| a.parse())
        .collect::<Result<_, _>>()?;
    let n = args.first().copied().unwrap_or(64.0) as usize;
    let kappa = args.get(1).copied().unwrap_or(5.0);
    let sensing = SensingConfig::new(n, 0.01, 0.1)?;
    let channel = ChannelConfig {
        antennas: n,
        beta_d: 0.01 / n as f64,
        kappa_f: kappa,
        kappa_g: kappa,
        ..ChannelConfig::default()
    };
    let case = if kappa == 0.0 {
        GainCase::Rayleigh
    } else {
        GainCase::Rician
    };
    println!("N = {n}, c = 0.01, kappa = {kappa}\n");
    println!("{:>4} {:>11} {:>11} {:>8}", "M", "mean g", "sd g", "P_d");
    for m in (0..=120).step_by(10) {
        let law = if m == 0 {
            gain_law(&channel, GainCase::Direct, 0.0)
        } else {
            gain_law(&channel, case, m as f64)
        };
        let pd = analytical_pd(&law, &sensing)?;
        println!(
            "{m:>4} {:>11.5} {:>11.5} {pd:>8.5}",
            law.mean,
            law.std_dev()
        );
    }
    println!("\nspiked law at g = 0.2: {:?}", spiked_law(0.2, &sensing));
    Ok(())
}
