//! Writes a built-in strategy as a strategy file, reads it back, breaks it
//! on purpose and shows what the parser and the verifier report.
//!
//! Usage: `cargo run --example strategy_files`

use godpuzzle::strategy::{self, StrategyFile};
use godpuzzle::RandomMode;

fn main() -> anyhow::Result<()> {
    let b = strategy::builtin("three_roberts")?;
    let file = StrategyFile::new(b.spec, b.tree).with_comment(b.summary);
    let text = file.to_string();
    print!("{text}");

    let parsed: StrategyFile = text.parse()?;
    println!("\nreads back identically: {}", parsed.to_string() == text);

    let swapped = text.replacen("declare=TFR", "declare=FTR", 1);
    let report = strategy::verify(&StrategyFile::parse(&swapped)?.tree, b.spec, RandomMode::Escaping)?;
    println!("\nwith one leaf changed: correct = {}", report.correct);
    for (world, outcome) in report.failures() {
        println!("  world {world} via {} declares {}", outcome.path, outcome.declared);
    }

    println!("\nmalformed files:");
    for (what, bad) in [
        ("bad question", text.replacen("question=\"", "question=\"g9=T | ", 1)),
        ("bad indentation", text.replacen("\n  true", "\n true", 1)),
        ("truncated", text.lines().take(4).collect::<Vec<_>>().join("\n")),
    ] {
        println!("  {what}: {}", StrategyFile::parse(&bad).unwrap_err());
    }
    Ok(())
}
