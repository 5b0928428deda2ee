//! Plays every built-in strategy many times against randomly drawn worlds
//! and compares the average number of questions with the exact expectation.
//!
//! Usage: `cargo run --release --example monte_carlo [episodes] [seed]`

use godpuzzle::commands;
use godpuzzle::strategy::{self, StrategyFile};

fn main() -> anyhow::Result<()> {
    let mut args = std::env::args().skip(1);
    let episodes: u64 = args.next().map(|a| a.parse()).transpose()?.unwrap_or(100_000);
    let seed: u64 = args.next().map(|a| a.parse()).transpose()?.unwrap_or(0);
    for b in strategy::builtins() {
        let exact = strategy::verify(&b.tree, b.spec, b.mode)?.expected;
        let exact_f = *exact.numer() as f64 / *exact.denom() as f64;
        let file = StrategyFile::new(b.spec, b.tree);
        let sim = commands::simulate(&file, episodes, seed, b.mode)?;
        let z = if sim.std_error > 0.0 { (sim.mean - exact_f) / sim.std_error } else { 0.0 };
        println!("{} ({} mode), exact expected {}", b.name, b.mode, strategy::render_rational(exact));
        print!("{sim}");
        println!("deviation = {z:+.2} standard errors\n");
    }
    Ok(())
}
