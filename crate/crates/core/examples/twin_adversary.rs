//! Demonstrates why half random and half truthful gods cannot be told
//! apart: in two alternating worlds the random gods can always echo the
//! truthful god of the other world, so every answer is the same in both.
//!
//! Usage: `cargo run --example twin_adversary [n]` (n even, default 4)

use godpuzzle::service::balance_hint;
use godpuzzle::strategy::StrategyTree;
use godpuzzle::{knowledge, KnowledgeState, PuzzleSpec};

/// Greedy strategy that always asks the most balanced question.
fn greedy(state: &KnowledgeState, depth: u32) -> anyhow::Result<StrategyTree> {
    let first = || {
        let i = state.possible().first().expect("non-empty state");
        StrategyTree::leaf(state.enumeration().assignments()[i].clone())
    };
    if depth == 0 || state.len() <= 1 {
        return Ok(first());
    }
    let Some((god, formula)) = balance_hint(state) else {
        return Ok(first());
    };
    let (yes, no) = (
        state.update_formula(god, &formula, true)?,
        state.update_formula(god, &formula, false)?,
    );
    Ok(StrategyTree::node(god, formula, greedy(&yes, depth - 1)?, greedy(&no, depth - 1)?))
}

fn main() -> anyhow::Result<()> {
    let n: usize = std::env::args().nth(1).map(|a| a.parse()).transpose()?.unwrap_or(4);
    let spec = PuzzleSpec::new(n, n / 2, n / 2)?;
    let witness = knowledge::twin_adversary(spec)?;
    let [a, b] = witness.twins();
    println!("{spec}: twins {a} and {b}");

    let tree = greedy(&KnowledgeState::new(spec), 6)?;
    let run = witness.run_lockstep(&tree)?;
    println!("greedy strategy, {} questions:", run.transcripts[0].entries.len());
    for (x, y) in run.transcripts[0].entries.iter().zip(&run.transcripts[1].entries) {
        println!("  g{} says {} in {a} and {} in {b}", x.god + 1, x.word, y.word);
    }
    println!("identical transcripts: {}", run.identical());
    println!("both twins still possible: {}", witness.both_survive(run.state.possible()));
    println!("declared {}", run.declared);

    let depth = if n <= 4 { 6 } else { 2 };
    let explored = witness.explore(depth)?;
    println!(
        "every move sequence of length {depth}: {} states, {} moves, twins never separated",
        explored.states, explored.moves
    );
    Ok(())
}
