//! Detection threshold from the Tracy-Widom quantile.
//!
//! `cargo run --example threshold -- [N] [c] [alpha]`

use ris_sense::detector::{analytical_pfa, detection_threshold, SensingConfig};
use ris_sense::tracy_widom::{tw2, wishart_edge_scaling};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .map(|a| a.parse())
        .collect::<Result<_, _>>()?;
    let n = args.first().copied().unwrap_or(64.0) as usize;
    let c = args.get(1).copied().unwrap_or(0.01);
    let alpha = args.get(2).copied().unwrap_or(0.1);

    let cfg = SensingConfig::new(n, c, alpha)?;
    let gamma = detection_threshold(&cfg)?;
    let (center, scale) = wishart_edge_scaling(n, c);
    println!("N = {n}, n = {}, c = {c}, alpha = {alpha}", cfg.samples);
    println!("F2^-1(1 - alpha) = {:.6}", tw2().quantile(1.0 - alpha)?);
    println!("edge center (1+sqrt c)^2 = {center:.6}, scale = {scale:.3e}");
    println!("gamma = {gamma:.8}");
    println!("P_fa at gamma = {:.6}", analytical_pfa(gamma, &cfg));

    println!("\nalpha   gamma");
    for a in [0.01, 0.05, 0.1, 0.2] {
        let g = detection_threshold(&SensingConfig::new(n, c, a)?)?;
        println!("{a:<7} {g:.6}");
    }
    Ok(())
}
