//! Parses questions, evaluates them, and normalizes them to disjunctions of
//! complete assignments.
//!
//! Usage: `cargo run --example formulas ["<formula>" [n m k]]`

use godpuzzle::{question, Enumeration, Formula, PuzzleSpec};

fn show(f: &Formula, spec: PuzzleSpec) -> anyhow::Result<()> {
    let e = Enumeration::new(spec);
    let set = f.truth_set(&e)?;
    println!("{f}");
    println!("  true in {} of {}: {{{}}}", set.len(), e.len(), e.render(&set).join(", "));
    println!("  normal form: {}", f.to_dnf(spec)?);
    Ok(())
}

fn main() -> anyhow::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if let Some(text) = args.first() {
        let spec = match args[1..] {
            [ref n, ref m, ref k] => PuzzleSpec::new(n.parse()?, m.parse()?, k.parse()?)?,
            _ => PuzzleSpec::classic(),
        };
        return show(&Formula::parse(text)?, spec);
    }
    let spec = PuzzleSpec::classic();
    for text in ["g1=R", "!(g2=T | g3!=F)", "g1=T & g2=R | g3=F", "true & !false"] {
        show(&Formula::parse(text)?, spec)?;
    }
    println!("\nerrors point at the offending column:");
    for bad in ["g1=T &", "g4=X", "(g1=T"] {
        println!("  {bad:<8} {}", Formula::parse(bad).unwrap_err());
    }
    println!("\nnamed questions for {spec}:");
    for entry in question::catalog().values().filter(|c| c.spec == spec) {
        println!("  {}: {}", entry.name, entry.summary);
        show(&entry.formula, spec)?;
    }
    Ok(())
}
