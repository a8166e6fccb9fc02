//! Element-count planning: M_inf, M_PD and the minimum for target P_d.
//!
//! `cargo run --release --example plan_elements -- [N] [kappa]`

use ris_sense::channel::ChannelConfig;
use ris_sense::detector::SensingConfig;
use ris_sense::gain::GainCase;
use ris_sense::planner::{m_for_target_pd, plan, PlanOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .map(|a| a.parse())
        .collect::<Result<_, _>>()?;
    let n = args.first().copied().unwrap_or(64.0) as usize;
    let kappa = args.get(1).copied().unwrap_or(5.0);
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
    let opts = PlanOptions::default();
    println!(
        "{:>7} {:>6} {:>9} {:>6} {:>9} {:>6} {:>8}",
        "c", "n", "gamma", "M_inf", "g0", "M_PD", "M(0.99)"
    );
    for c in [0.005, 0.01, 0.02, 0.03, 0.04, 0.05] {
        let sensing = SensingConfig::new(n, c, 0.1)?;
        let p = plan(&channel, &sensing, case, &opts)?;
        let t = m_for_target_pd(&channel, &sensing, case, 0.99, &opts)?;
        let g0 = p.g0.map_or("-".to_string(), |g| format!("{g:.5}"));
        println!(
            "{c:>7} {:>6} {:>9.5} {:>6} {g0:>9} {:>6} {:>8}",
            sensing.samples, p.gamma, p.m_inf, p.m_pd, t.m
        );
    }
    Ok(())
}
