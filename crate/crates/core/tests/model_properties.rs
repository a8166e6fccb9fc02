use proptest::prelude::*;
use ris_sense::channel::{
    cascade_vector, random_phase_design, sample_channels, statistical_phase_design, ChannelConfig,
};
use ris_sense::detector::{analytical_pd, analytical_pfa, detection_threshold, SensingConfig};
use ris_sense::gain::{
    gain_law, rician_cascade_variance, rician_variance_from_components, GainCase,
};
use ris_sense::planner::{m_for_target_pd, plan, PlanOptions};
use ris_sense::quadrature::integrate_adaptive;
use ris_sense::rng::RngStream;
use ris_sense::sweep::{from_db, to_db};

fn angle() -> impl Strategy<Value = f64> {
    -1.5f64..1.5
}

fn rician(n: usize, m: usize, kappa: f64, angles: (f64, f64, f64)) -> ChannelConfig {
    ChannelConfig {
        antennas: n,
        elements: m,
        beta_d: 0.01 / n as f64,
        kappa_f: kappa,
        kappa_g: kappa,
        theta_f_aoa: angles.0,
        theta_g_aoa: angles.1,
        theta_g_aod: angles.2,
        ..ChannelConfig::default()
    }
}

fn aligned_sum(cfg: &ChannelConfig, phases: &ris_sense::channel::PhaseShiftVector) -> f64 {
    let w = phases.apply(&cfg.a_f()).unwrap();
    cfg.b_g()
        .iter()
        .zip(&w)
        .map(|(b, x)| b.conj() * x)
        .sum::<num_complex::Complex64>()
        .norm()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn db_round_trip(x in 1e-12f64..1e12) {
        prop_assert!((from_db(to_db(x)) - x).abs() <= 1e-12 * x);
    }

    #[test]
    fn threshold_meets_the_false_alarm_target(
        n in 8usize..512, c in 0.002f64..0.5, alpha in 0.005f64..0.5
    ) {
        let cfg = SensingConfig::new(n, c, alpha).unwrap();
        let gamma = detection_threshold(&cfg).unwrap();
        prop_assert!((analytical_pfa(gamma, &cfg) - alpha).abs() < 1e-9);
    }

    #[test]
    fn designed_phases_reach_the_coherent_bound(
        m in 1usize..200, n in 1usize..64, a in angle(), b in angle(), d in angle(), seed in any::<u64>()
    ) {
        let cfg = rician(n, m, 5.0, (a, b, d));
        let best = aligned_sum(&cfg, &statistical_phase_design(&cfg));
        prop_assert!((best - m as f64).abs() <= 1e-9 * m as f64);
        let random = aligned_sum(&cfg, &random_phase_design(m, RngStream::new(seed, 0)));
        prop_assert!(random <= m as f64 * (1.0 + 1e-12));
    }

    #[test]
    fn common_phase_rotation_leaves_cascade_power_unchanged(
        m in 1usize..40, n in 1usize..16, rot in -10.0f64..10.0, seed in any::<u64>()
    ) {
        let cfg = rician(n, m, 2.0, (0.3, -0.4, 0.9));
        let real = sample_channels(&cfg, RngStream::new(seed, 0));
        let phi = random_phase_design(m, RngStream::new(seed, 1));
        let p0: f64 = cascade_vector(&real, &phi).unwrap().iter().map(|z| z.norm_sqr()).sum();
        let p1: f64 = cascade_vector(&real, &phi.rotated(rot)).unwrap().iter().map(|z| z.norm_sqr()).sum();
        prop_assert!((p0 - p1).abs() <= 1e-10 * p0.max(1e-300));
    }

    #[test]
    fn pd_is_nondecreasing_in_elements(
        kappa in 0.5f64..20.0, c in 0.005f64..0.05, n in 16usize..256, start in 0usize..150
    ) {
        let sensing = SensingConfig::new(n, c, 0.1).unwrap();
        let cfg = rician(n, 0, kappa, (0.2, 0.5, -0.7));
        let mut prev = 0.0;
        for m in (start..start + 60).step_by(6) {
            let pd = analytical_pd(&gain_law(&cfg, GainCase::Rician, m as f64), &sensing).unwrap();
            prop_assert!(pd >= prev - 1e-9, "P_d fell from {prev} to {pd} at M = {m}");
            prev = pd;
        }
    }

    #[test]
    fn m_pd_is_never_below_m_inf(
        kappa in 0.5f64..20.0, c in 0.005f64..0.05, n in 16usize..256
    ) {
        let sensing = SensingConfig::new(n, c, 0.1).unwrap();
        let cfg = rician(n, 0, kappa, (0.1, 0.2, 0.3));
        let p = plan(&cfg, &sensing, GainCase::Rician, &PlanOptions::default()).unwrap();
        prop_assert!(p.m_inf <= p.m_pd);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn component_reconstruction_matches_closed_form(
        m in 1.0f64..512.0, n in 1.0f64..512.0, a in 0.0f64..1.0, b in 0.0f64..1.0,
        ga in 0.0f64..1.0, gb in 0.0f64..1.0
    ) {
        let exact = rician_cascade_variance(m, n, a, b, ga, gb);
        let rebuilt = rician_variance_from_components(m, n, a, b, ga, gb);
        prop_assert!((rebuilt - exact).abs() <= 1e-9 * exact.abs().max(1e-300));
    }

    #[test]
    fn bisection_agrees_with_a_linear_scan(
        kappa in 1.0f64..15.0, c in 0.005f64..0.05, target in 0.2f64..0.99
    ) {
        let sensing = SensingConfig::new(64, c, 0.1).unwrap();
        let cfg = rician(64, 0, kappa, (0.4, -0.2, 0.1));
        let found = m_for_target_pd(&cfg, &sensing, GainCase::Rician, target, &PlanOptions::default()).unwrap();
        let scan = (0..)
            .find(|&m| {
                let law = gain_law(&cfg, if m == 0 { GainCase::Direct } else { GainCase::Rician }, m as f64);
                analytical_pd(&law, &sensing).unwrap() >= target
            })
            .unwrap();
        prop_assert_eq!(found.m, scan);
    }

    #[test]
    fn halving_the_quadrature_tolerance_stays_within_it(
        w in 0.5f64..30.0, s in 0.05f64..2.0, tol in 1e-12f64..1e-6
    ) {
        let f = |x: f64| (w * x).cos() * (-x * x / (2.0 * s * s)).exp();
        // Truncated tails lie below e^-72.
        let a = integrate_adaptive(f, -12.0 * s, 12.0 * s, tol, 40);
        let b = integrate_adaptive(f, -12.0 * s, 12.0 * s, tol / 2.0, 40);
        prop_assert!((a.value - b.value).abs() <= tol);
        let exact = s * (2.0 * std::f64::consts::PI).sqrt() * (-(w * s).powi(2) / 2.0).exp();
        prop_assert!((b.value - exact).abs() <= tol + 1e-15);
    }
}
