//! Verifies the hand-made five-god strategy (two random, three truthful)
//! and prints the cost profile of every assignment, then the named
//! questions it is built from.
//!
//! Usage: `cargo run --example five_gods`

use godpuzzle::question;
use godpuzzle::strategy;
use godpuzzle::{Enumeration, PuzzleSpec, RandomMode};

fn main() -> anyhow::Result<()> {
    let b = strategy::builtin("five_gods")?;
    println!("{}: {}", b.name, b.summary);
    println!("{}", strategy::verify(&b.tree, b.spec, RandomMode::Escaping)?);

    let e = Enumeration::new(PuzzleSpec::five_gods());
    println!("named questions:");
    for entry in question::catalog().values().filter(|c| c.spec == b.spec) {
        let set = entry.formula.truth_set(&e)?;
        println!("  {:<11} {{{}}}", entry.name, e.render(&set).join(", "));
        println!("  {:<11} {}", "", entry.summary);
    }
    Ok(())
}
