use ris_sense::channel::{ChannelConfig, PhaseMode};
use ris_sense::detector::SensingConfig;
use ris_sense::montecarlo::{
    empirical_gain_samples, run_bank, wilson_interval, ChannelSampling, Engine, ExperimentSpec,
    GainQuantity, Hypothesis, TrialRunner,
};
use ris_sense::tracy_widom::{tw2, wishart_edge_scaling};

fn spec(n: usize, c: f64, m: usize, seed: u64) -> ExperimentSpec {
    let channel = ChannelConfig {
        antennas: n,
        elements: m,
        kappa_f: 4.0,
        kappa_g: 4.0,
        theta_f_aoa: 0.2,
        theta_g_aoa: -0.6,
        theta_g_aod: 0.9,
        ..ChannelConfig::default()
    };
    ExperimentSpec::new(SensingConfig::new(n, c, 0.1).unwrap(), channel, seed)
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn two_sample_ks(a: &mut [f64], b: &mut [f64]) -> f64 {
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
        d = d.max((i as f64 / a.len() as f64 - j as f64 / b.len() as f64).abs());
    }
    d
}

#[test]
fn noise_only_statistic_sits_at_the_tracy_widom_offset() {
    let s = ExperimentSpec {
        trials: 4000,
        ..spec(64, 0.05, 0, 3)
    };
    let runner = TrialRunner::new(&s).unwrap();
    let ts: Vec<f64> = run_bank(&runner, Hypothesis::H0)
        .unwrap()
        .iter()
        .map(|o| o.statistic)
        .collect();
    let (center, scale) = wishart_edge_scaling(64, 0.05);
    let tw_mean = -1.7710868;
    let normalized = (mean(&ts) - center) / scale;
    assert!(
        (normalized - tw_mean).abs() < 0.15,
        "normalized mean {normalized}"
    );
    assert!((mean(&ts) - (1.0 + 0.05f64.sqrt()).powi(2)).abs() < 8.0 * scale);
    assert!(tw2().cdf(normalized) > 0.3);
}

#[test]
fn trials_are_independent_of_execution_order() {
    let s = ExperimentSpec {
        trials: 64,
        ..spec(16, 0.1, 20, 77)
    };
    let runner = TrialRunner::new(&s).unwrap();
    let bank = run_bank(&runner, Hypothesis::H1).unwrap();
    for k in (0..64).rev() {
        assert_eq!(runner.run(Hypothesis::H1, k).unwrap(), bank[k as usize]);
    }
    let again = run_bank(&TrialRunner::new(&s).unwrap(), Hypothesis::H1).unwrap();
    assert_eq!(bank, again);
    let other = run_bank(
        &TrialRunner::new(&ExperimentSpec {
            master_seed: 78,
            ..s
        })
        .unwrap(),
        Hypothesis::H1,
    )
    .unwrap();
    assert_ne!(bank, other);
}

#[test]
fn engines_agree_on_the_statistic_law() {
    let mut means = Vec::new();
    for engine in [Engine::Samples, Engine::Reduced] {
        let s = ExperimentSpec {
            engine,
            trials: 1500,
            ..spec(16, 0.1, 30, 5)
        };
        let runner = TrialRunner::new(&s).unwrap();
        for h in [Hypothesis::H0, Hypothesis::H1] {
            let ts: Vec<f64> = run_bank(&runner, h)
                .unwrap()
                .iter()
                .map(|o| o.statistic)
                .collect();
            means.push(mean(&ts));
        }
    }
    assert!((means[0] - means[2]).abs() < 0.01, "{means:?}");
    assert!((means[1] - means[3]).abs() < 0.02 * means[1], "{means:?}");
}

#[test]
fn compressed_sampler_matches_full_channel_draws() {
    // Two-sample KS critical value at level 1e-3 for 4000 vs 4000 is about 0.044.
    for (mode, kappa) in [(PhaseMode::Statistical, 3.0), (PhaseMode::Random, 0.0)] {
        let mut s = spec(8, 0.1, 12, 21);
        s.phase_mode = mode;
        s.channel.kappa_f = kappa;
        s.channel.kappa_g = kappa;
        let mut full =
            empirical_gain_samples(&s, GainQuantity::Equivalent, 4000, ChannelSampling::Full)
                .unwrap();
        s.master_seed = 22;
        let mut fast = empirical_gain_samples(
            &s,
            GainQuantity::Equivalent,
            4000,
            ChannelSampling::Compressed,
        )
        .unwrap();
        let d = two_sample_ks(&mut full, &mut fast);
        assert!(d < 0.044, "{mode}: KS {d}");
    }
}

#[test]
fn wilson_interval_brackets_the_estimate() {
    for (k, n) in [(0, 10), (3, 10), (10, 10), (517, 1000)] {
        let (lo, hi) = wilson_interval(k, n);
        let p = k as f64 / n as f64;
        assert!(lo <= p && p <= hi && (0.0..=1.0).contains(&lo) && hi <= 1.0);
    }
}
