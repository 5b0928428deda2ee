//! Searches for strategies with the fewest expected questions and compares
//! them with the hand-made solutions.
//!
//! Usage: `cargo run --release --example expected_optimum [n m k]`

use std::time::Instant;

use godpuzzle::strategy::{self, render_rational, StrategyFile};
use godpuzzle::synthesis::{self, SearchConfig, SearchValue};
use godpuzzle::{PuzzleSpec, RandomMode};

fn main() -> anyhow::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let specs = match args[..] {
        [n, m, k] => vec![PuzzleSpec::new(n, m, k)?],
        _ => vec![PuzzleSpec::classic(), PuzzleSpec::five_gods()],
    };
    for spec in specs {
        let start = Instant::now();
        let result = synthesis::min_expected(spec, SearchConfig::default())?;
        let SearchValue::Expected(value) = result.value else {
            println!("{spec}: unsolvable");
            continue;
        };
        let status = if result.optimal { "optimal" } else { "best found" };
        println!(
            "{spec}: {status} expected = {} ({} states, {:.2?})",
            render_rational(value),
            result.nodes_explored,
            start.elapsed()
        );
        let witness = result.witness.expect("solvable");
        let report = strategy::verify(&witness, spec, RandomMode::Escaping)?;
        println!("  witness re-verified: correct = {}, expected = {}", report.correct, render_rational(report.expected));
        for b in strategy::builtins().into_iter().filter(|b| b.spec == spec && b.mode == RandomMode::Escaping) {
            let r = strategy::verify(&b.tree, spec, RandomMode::Escaping)?;
            println!("  built-in {}: expected = {}", b.name, render_rational(r.expected));
        }
        if spec.gods() <= 3 {
            print!("{}", StrategyFile::new(spec, witness));
        }
    }
    Ok(())
}
