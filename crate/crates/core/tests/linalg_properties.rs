use num_complex::Complex64;
use proptest::prelude::*;
use ris_sense::linalg::{hermitian_eigenvalues, largest_eigenvalue, ComplexMatrix, EigenOptions};
use ris_sense::rng::{sample_complex_gaussian, RngStream};

fn samples(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
    ComplexMatrix::random_gaussian(rows, cols, 1.0, RngStream::new(seed, 0)).unwrap()
}

fn quadratic_form(cov: &ComplexMatrix, v: &[Complex64]) -> f64 {
    let cv = cov.mul_vec(v).unwrap();
    let num: Complex64 = v.iter().zip(&cv).map(|(a, b)| a.conj() * b).sum();
    num.re / v.iter().map(|z| z.norm_sqr()).sum::<f64>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rayleigh_quotients_never_exceed_lambda_max(
        rows in 2usize..12, extra in 0usize..40, seed in any::<u64>()
    ) {
        let x = samples(rows, rows + extra, seed);
        let cov = x.sample_covariance();
        let lam = largest_eigenvalue(&x, &EigenOptions::default()).unwrap();
        let mut rng = RngStream::new(seed, 1).rng();
        for _ in 0..8 {
            let v = sample_complex_gaussian(rows, 1.0, &mut rng);
            prop_assert!(quadratic_form(&cov, &v) <= lam * (1.0 + 1e-9));
        }
        let dense = *hermitian_eigenvalues(&cov).unwrap().last().unwrap();
        prop_assert!((lam - dense).abs() <= 1e-8 * dense);
    }

    #[test]
    fn column_order_does_not_matter(
        rows in 2usize..10, extra in 0usize..30, seed in any::<u64>(), shift in 1usize..50
    ) {
        let x = samples(rows, rows + extra, seed);
        let n = x.cols();
        let perm: Vec<usize> = (0..n).map(|j| (j * 7 + shift) % n).collect();
        let mut sorted = perm.clone();
        sorted.sort_unstable();
        prop_assume!(sorted.windows(2).all(|w| w[0] != w[1]));
        let opts = EigenOptions::default();
        let a = largest_eigenvalue(&x, &opts).unwrap();
        let b = largest_eigenvalue(&x.permute_columns(&perm).unwrap(), &opts).unwrap();
        prop_assert!((a - b).abs() <= 1e-9 * a);
    }

    #[test]
    fn scaling_multiplies_by_squared_modulus(
        rows in 2usize..10, extra in 0usize..30, seed in any::<u64>(),
        re in -3.0f64..3.0, im in -3.0f64..3.0
    ) {
        let s = Complex64::new(re, im);
        prop_assume!(s.norm() > 1e-2);
        let x = samples(rows, rows + extra, seed);
        let opts = EigenOptions::default();
        let a = largest_eigenvalue(&x, &opts).unwrap();
        let b = largest_eigenvalue(&x.scaled(s), &opts).unwrap();
        prop_assert!((b - s.norm_sqr() * a).abs() <= 1e-9 * b);
    }
}
