//! Checks the self-referential question template in all eight cases (two
//! truth values, truthful or lying god, two meanings of `χ`), then shows a
//! templated question and how every god in a world answers it.
//!
//! Usage: `cargo run --example template_theorem`

use godpuzzle::simulator::{self, AskNode, RandomMode, SeededCoins, WordSemantics};
use godpuzzle::{Assignment, Formula};

fn main() -> anyhow::Result<()> {
    println!("{}\n", simulator::template_theorem_check());

    let q = Formula::parse("g1=R")?;
    let world: Assignment = "TFR".parse()?;
    let mut coins = SeededCoins::new(1);
    for ws in [WordSemantics::CHI_YES, WordSemantics::CHI_NO] {
        let meaning = if ws.chi_means_yes { "yes" } else { "no" };
        println!("world {world}, χ means {meaning}, q: {q} (q is {})", q.eval(&world)?);
        for god in 0..world.len() {
            let ask = AskNode::templated(god, q.clone());
            let word = simulator::god_answer(&world, ws, god, &ask, &mut coins, RandomMode::Escaping)?;
            let decoded = simulator::decode_template(word);
            println!("  g{} ({}): {}", god + 1, world[god], ask.render_english());
            println!("    says {word}, decoded as {decoded}");
        }
    }
    Ok(())
}
