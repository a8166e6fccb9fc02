//! Parse, resolve and echo a scenario file.
//!
//! `cargo run --example scenario_file -- [path] [seed]`

use ris_sense::scenario::ScenarioFile;

const DEFAULT: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/pd_curve.toml");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| DEFAULT.to_string());
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(1);
    let file = ScenarioFile::parse(&std::fs::read_to_string(&path)?)?;
    let resolved = file.resolve(seed)?;
    println!("# resolved from {path} with seed {seed}\n");
    print!("{}", resolved.echo().to_toml());
    Ok(())
}
