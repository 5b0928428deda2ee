//! Shows that no strategy solves the classic three-god puzzle in two
//! questions, by exhausting every two-question strategy, and that three
//! questions suffice.
//!
//! Usage: `cargo run --example lower_bound`

use godpuzzle::synthesis::{self, SearchConfig, SearchValue};
use godpuzzle::PuzzleSpec;

fn main() -> anyhow::Result<()> {
    let spec = PuzzleSpec::classic();
    let exhaustive = SearchConfig {
        prune_inseparable: false,
        ..SearchConfig::default()
    };
    for depth in 0..=3 {
        let r = synthesis::exists_within(spec, depth, exhaustive)?;
        println!(
            "{spec} within {depth} questions: {} ({} states, {} moves tried)",
            if r.exists { "possible" } else { "impossible" },
            r.states,
            r.moves
        );
    }
    let best = synthesis::min_worst_case(spec, SearchConfig::default())?;
    if let SearchValue::Depth(d) = best.value {
        println!("minimum worst case = {d} ({} states explored)", best.nodes_explored);
    }
    Ok(())
}
