//! Plays the classic three-god bottom-up strategy against every world and
//! prints how the set of possible assignments shrinks after each answer.
//!
//! Usage: `cargo run --example bottom_up [seed]`

use godpuzzle::simulator::{self, RandomMode, SeededCoins, WordSemantics};
use godpuzzle::strategy::{self, StrategyTree};
use godpuzzle::KnowledgeState;

fn main() -> anyhow::Result<()> {
    let seed: u64 = std::env::args().nth(1).map(|a| a.parse()).transpose()?.unwrap_or(0);
    let b = strategy::builtin("three_bottom_up")?;
    println!("{}: {}\n", b.name, b.summary);
    let mut coins = SeededCoins::new(seed);
    for world in b.spec.enumerate() {
        let ep = simulator::run_episode(b.spec, &world, WordSemantics::CHI_NO, &b.tree, &mut coins, RandomMode::Escaping)?;
        println!("world {world}:");
        let mut state = KnowledgeState::new(b.spec);
        let mut node = &b.tree;
        for entry in &ep.transcript.entries {
            let StrategyTree::Node { god, question, yes, no } = node else {
                unreachable!("transcript is longer than the strategy path")
            };
            let bit = simulator::decode_template(entry.word);
            state = state.update_formula(*god, question, bit)?;
            println!("  ask g{} {question}: {} -> {{{}}}", god + 1, entry.word, state.render().join(", "));
            node = if bit { yes } else { no };
        }
        println!("  declare {} ({})", ep.declared, if ep.correct() { "correct" } else { "WRONG" });
    }
    println!("\n{}", strategy::verify(&b.tree, b.spec, RandomMode::Escaping)?);
    Ok(())
}
