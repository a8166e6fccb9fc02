//! Component expectations of the squared cascade gain: closed forms against
//! simulation at small M = N.
//!
//! `cargo run --release --example table_one -- [size] [draws]`

use ris_sense::gain::{rician_component_expectation, COMPONENTS};
use ris_sense::validation::table_component_estimates;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<usize> = std::env::args()
        .skip(1)
        .map(|a| a.parse())
        .collect::<Result<_, _>>()?;
    let size = args.first().copied().unwrap_or(4);
    let draws = args.get(1).copied().unwrap_or(200_000);
    let est = table_component_estimates(size, draws, 1);
    println!("M = N = {size}, {draws} draws\n");
    println!(
        "{:>4} {:>8} {:>12} {:>12} {:>8}",
        "k", "terms", "closed form", "simulated", "z"
    );
    for (k, (mean, se)) in est.iter().enumerate() {
        let exact = rician_component_expectation(k + 1, size as f64, size as f64)?;
        let (i, j) = COMPONENTS[k];
        println!(
            "{:>4} {:>8} {exact:>12.2} {mean:>12.2} {:>8.1}",
            k + 1,
            format!("{i},{j}"),
            (mean - exact) / se.max(1e-300)
        );
    }
    Ok(())
}
