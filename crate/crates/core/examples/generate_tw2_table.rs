//! Regenerate the shipped Tracy-Widom table.
//!
//! ```text
//! cargo run --release --example generate_tw2_table -- [resolution] [output]
//! ```

use ris_sense::tracy_widom::generate_tw2_table;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let resolution: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(2048);
    let out = args
        .next()
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/tw2_table.txt").to_string());
    let table = generate_tw2_table(resolution)?;
    std::fs::write(&out, table.to_text())?;
    println!(
        "wrote {} rows to {out} (mean {:.10}, variance {:.10}, sha256 {})",
        table.grid().len(),
        table.mean(),
        table.variance(),
        table.checksum()
    );
    Ok(())
}
