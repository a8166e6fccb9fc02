//! Offline construction of the F2 table from the Painlevé II representation.
//!
//! With `q'' = s q + 2 q³` and the Hastings-McLeod decay `q(s) ~ Ai(s)` as
//! `s → ∞`, `log F2 = H` solves `H'' = −q²`. The system `(q, q', H, H')` is
//! started at `s = 8`, where `q` equals `Ai` to far below double precision,
//! and integrated leftward with classical RK4. The solution is a separatrix,
//! so rounding eventually pushes the march off it near `s ≈ −8`; by then
//! `F2 < 1e−20` and the table is unaffected at double precision.

use super::{Tw2Error, Tw2Table};

/// Identifier written into the table header.
pub const GENERATOR_ID: &str = "painleve-ii/rk4";

pub const GRID_START: f64 = -10.0;
pub const GRID_END: f64 = 6.0;
const START_POINT: f64 = 8.0;
const MAX_STEP: f64 = 1e-3;

/// `(Ai(x), Ai'(x))` for `x ≥ 5` from the exponentially small asymptotic
/// series, truncated at its smallest term.
pub fn airy_ai_large(x: f64) -> (f64, f64) {
    assert!(x >= 5.0, "asymptotic Airy series needs x ≥ 5");
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let mut u = 1.0;
    let mut sum_ai = 1.0;
    let mut sum_dai = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
        let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
        let term = u / zeta.powi(k);
        if term.abs() >= prev {
            break;
        }
        prev = term.abs();
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        sum_ai += sign * term;
        sum_dai += sign * v / zeta.powi(k);
    }
    let pre = (-zeta).exp() / (2.0 * std::f64::consts::PI.sqrt());
    (pre / x.powf(0.25) * sum_ai, -pre * x.powf(0.25) * sum_dai)
}

type State = [f64; 4];

fn rhs(s: f64, y: &State) -> State {
    let (q, dq, _h, dh) = (y[0], y[1], y[2], y[3]);
    [dq, s * q + 2.0 * q * q * q, dh, -q * q]
}

fn rk4_step(s: f64, y: &State, h: f64) -> State {
    let add = |a: &State, b: &State, k: f64| -> State {
        [
            a[0] + k * b[0],
            a[1] + k * b[1],
            a[2] + k * b[2],
            a[3] + k * b[3],
        ]
    };
    let k1 = rhs(s, y);
    let k2 = rhs(s + 0.5 * h, &add(y, &k1, 0.5 * h));
    let k3 = rhs(s + 0.5 * h, &add(y, &k2, 0.5 * h));
    let k4 = rhs(s + h, &add(y, &k3, h));
    let mut out = *y;
    for i in 0..4 {
        out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    out
}

/// Initial state at `s0` with `q = Ai`, so `H' = ∫ Ai² = Ai'² − s Ai²` and
/// `H = −∫(x − s) Ai² dx` equals the Airy-kernel closed form below.
fn initial_state(s0: f64) -> State {
    let (ai, dai) = airy_ai_large(s0);
    let dh = dai * dai - s0 * ai * ai;
    let h = -(2.0 / 3.0 * s0 * s0 * ai * ai - 2.0 / 3.0 * s0 * dai * dai - ai * dai / 3.0);
    [ai, dai, h, dh]
}

fn integrate(y: &mut State, from: f64, to: f64, steps: usize) {
    let h = (to - from) / steps as f64;
    for k in 0..steps {
        *y = rk4_step(from + k as f64 * h, y, h);
    }
}

/// Tabulate F2 on `resolution + 1` equispaced nodes spanning `[-10, 6]`.
pub fn generate_tw2_table(resolution: usize) -> Result<Tw2Table, Tw2Error> {
    if resolution < 256 {
        return Err(Tw2Error::Resolution(resolution));
    }
    let spacing = (GRID_END - GRID_START) / resolution as f64;
    let sub = (spacing / MAX_STEP).ceil() as usize;

    let mut y = initial_state(START_POINT);
    let lead = ((START_POINT - GRID_END) / MAX_STEP).ceil() as usize;
    integrate(&mut y, START_POINT, GRID_END, lead);

    let mut grid = vec![0.0; resolution + 1];
    let mut log_cdf = vec![0.0; resolution + 1];
    grid[resolution] = GRID_END;
    log_cdf[resolution] = y[2];
    for k in (0..resolution).rev() {
        let from = GRID_START + (k + 1) as f64 * spacing;
        let to = GRID_START + k as f64 * spacing;
        integrate(&mut y, from, to, sub);
        if !y.iter().all(|v| v.is_finite()) {
            return Err(Tw2Error::Integration(format!(
                "non-finite state at s = {to}"
            )));
        }
        grid[k] = to;
        log_cdf[k] = y[2];
    }
    let cdf: Vec<f64> = log_cdf.iter().map(|h| h.exp()).collect();
    Tw2Table::new(grid, cdf, GENERATOR_ID)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn airy_reference_values() {
        let (ai, dai) = airy_ai_large(8.0);
        assert!((ai / 4.692_207_616_099_224e-8 - 1.0).abs() < 1e-12, "{ai}");
        assert!(
            (dai / -1.341_439_297_906_784_4e-7 - 1.0).abs() < 1e-12,
            "{dai}"
        );
        let (ai5, _) = airy_ai_large(5.0);
        assert!(
            (ai5 / 1.083_444_281_360_743_3e-4 - 1.0).abs() < 1e-7,
            "{ai5}"
        );
    }

    #[test]
    fn rejects_coarse_resolution() {
        assert!(matches!(
            generate_tw2_table(100),
            Err(Tw2Error::Resolution(100))
        ));
    }

    #[test]
    fn hastings_mcleod_profile() {
        // q(−6) from a high-order adaptive solve, close to √(−s/2) = 1.7321.
        // Past s ≈ −8 any double-precision march leaves the separatrix, but
        // F2 is below 1e−20 there.
        let mut y = initial_state(START_POINT);
        integrate(&mut y, START_POINT, -6.0, 14_000);
        assert!((y[0] - 1.731_025).abs() < 1e-4, "q(-6) = {}", y[0]);
    }
}
