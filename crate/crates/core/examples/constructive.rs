//! Runs the general solver on a puzzle: first find a god who is surely not
//! random, then make that god identify everyone.
//!
//! Usage: `cargo run --example constructive [n m k]` (default 5 2 2)

use godpuzzle::simulator::SeededCoins;
use godpuzzle::strategy::{self, Interrogator, SimulatedInterrogator};
use godpuzzle::{Formula, PuzzleSpec, RandomMode, WordSemantics};

/// Prints every question on its way to the simulated gods.
struct Logged<I>(I);

impl<I: Interrogator> Interrogator for Logged<I> {
    fn ask(&mut self, god: usize, formula: &Formula) -> godpuzzle::Result<bool> {
        let bit = self.0.ask(god, formula)?;
        println!("  ask g{} {formula}: {bit}", god + 1);
        Ok(bit)
    }
}

fn main() -> anyhow::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let (n, m, k) = match args[..] {
        [n, m, k] => (n, m, k),
        _ => (5, 2, 2),
    };
    let spec = PuzzleSpec::new(n, m, k)?;

    let worlds = spec.enumerate();
    let world = &worlds[worlds.len() / 2];
    let mut coins = SeededCoins::new(5);
    println!("{spec}, hidden world {world}: searching for a non-random god");
    let mut oracle = Logged(SimulatedInterrogator::new(world, WordSemantics::CHI_YES, &mut coins));
    let god = strategy::find_non_random(spec, &mut oracle)?;
    println!("  g{} is not random (actually {})\n", god + 1, world[god]);

    let tree = strategy::constructive_solve(spec)?;
    let report = strategy::verify(&tree, spec, RandomMode::Escaping)?;
    println!("full strategy: {} nodes, depth {}", tree.node_count(), tree.depth());
    println!("correct = {}", report.correct);
    println!("worst case = {}", report.worst_case);
    println!("expected = {}", strategy::render_rational(report.expected));
    Ok(())
}
