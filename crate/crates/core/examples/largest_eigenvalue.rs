//! Lanczos largest eigenvalue of a sample covariance against a dense solve.
//!
//! `cargo run --release --example largest_eigenvalue -- [N] [n]`

use ris_sense::linalg::{
    hermitian_eigenvalues, largest_eigenvalue_detailed, ComplexMatrix, EigenOptions,
};
use ris_sense::rng::RngStream;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .map(|a| a.parse())
        .collect::<Result<_, _>>()?;
    let n_ant = args.first().copied().unwrap_or(48);
    let n = args.get(1).copied().unwrap_or(480);
    let x = ComplexMatrix::random_gaussian(n_ant, n, 1.0, RngStream::new(5, 0))?;
    // Lanczos works on the samples directly; the dense solve needs (1/n) X Xᴴ.
    let est = largest_eigenvalue_detailed(&x, &EigenOptions::default())?;
    let dense = *hermitian_eigenvalues(&x.sample_covariance())?
        .last()
        .expect("nonempty");
    let c: f64 = n_ant as f64 / n as f64;
    println!(
        "N = {n_ant}, n = {n}, bulk edge (1+sqrt c)^2 = {:.6}",
        (1.0 + c.sqrt()).powi(2)
    );
    println!(
        "Lanczos: {:.12} after {} iterations (residual {:.1e})",
        est.value, est.iterations, est.residual
    );
    println!("dense:   {dense:.12}");
    Ok(())
}
