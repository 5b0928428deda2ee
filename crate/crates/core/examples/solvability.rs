//! Tabulates which (n, m, k) puzzles are solvable, by the counting criterion
//! and by exhaustive search, for every spec up to a given number of gods.
//!
//! Usage: `cargo run --release --example solvability [max_gods]`

use std::time::Instant;

use godpuzzle::synthesis::{self, SearchConfig};
use godpuzzle::PuzzleSpec;

fn main() -> anyhow::Result<()> {
    let max: usize = std::env::args().nth(1).map(|a| a.parse()).transpose()?.unwrap_or(6);
    println!("{:<10} {:>6} {:>9} {:>7} {:>10}", "spec", "worlds", "criterion", "search", "time");
    let mut disagreements = 0;
    for n in 1..=max {
        for m in 0..=n {
            for k in 0..=n - m {
                let spec = PuzzleSpec::new(n, m, k)?;
                let start = Instant::now();
                let found = synthesis::solvable_by_search(spec, SearchConfig::default())?;
                let expected = spec.meets_solvability_criterion();
                disagreements += (found != expected) as u32;
                println!(
                    "{:<10} {:>6} {:>9} {:>7} {:>10.2?}",
                    spec.to_string(),
                    spec.possibility_count(),
                    expected,
                    found,
                    start.elapsed()
                );
            }
        }
    }
    println!("{disagreements} disagreements");
    Ok(())
}
