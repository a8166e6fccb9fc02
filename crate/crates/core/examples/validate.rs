//! Run the acceptance criteria and print one line per criterion.
//!
//! `cargo run --release --example validate [seed] [id...]`

use std::time::Instant;

use ris_sense::validation::{run_criterion, ValidationContext};

fn main() {
    let mut args = std::env::args().skip(1);
    let ctx = match args.next() {
        Some(s) => ValidationContext {
            seed: s.parse().expect("seed must be an integer"),
        },
        None => ValidationContext::default(),
    };
    let ids: Vec<u8> = args
        .map(|a| a.parse().expect("criterion ids are integers"))
        .collect();
    let ids = if ids.is_empty() {
        (1..=11).collect()
    } else {
        ids
    };
    let mut failed = 0;
    for id in ids {
        let t = Instant::now();
        let r = run_criterion(id, &ctx);
        failed += usize::from(!r.passed);
        println!("{r}  [{:.1}s]", t.elapsed().as_secs_f64());
    }
    std::process::exit(i32::from(failed > 0));
}
