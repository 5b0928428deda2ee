use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::model::PuzzleSpec;
use crate::question::named;
use crate::simulator::RandomMode;

use super::StrategyTree;

pub const BUILTIN_NAMES: [&str; 4] = ["three_nonrandom", "three_bottom_up", "three_roberts", "five_gods"];

/// A hand-transcribed solution.
#[derive(Clone, Debug)]
pub struct Builtin {
    pub name: &'static str,
    pub spec: PuzzleSpec,
    /// The reading of the random god the strategy is meant for.
    pub mode: RandomMode,
    pub summary: &'static str,
    pub tree: StrategyTree,
}

// Gods are 1-based here to match the printed form.
fn ask(god: usize, question: Formula, yes: StrategyTree, no: StrategyTree) -> StrategyTree {
    StrategyTree::node(god - 1, question, yes, no)
}

fn leaf(a: &str) -> StrategyTree {
    StrategyTree::leaf(a.parse().expect("builtin assignment"))
}

fn cat(name: &str) -> Formula {
    named(name).expect("catalog question")
}

fn f(text: &str) -> Formula {
    Formula::parse(text).expect("builtin formula")
}

/// Ask the final splitting question and declare on each side.
fn split(god: usize, question: &str, yes: &str, no: &str) -> StrategyTree {
    ask(god, f(question), leaf(yes), leaf(no))
}

fn three_nonrandom() -> StrategyTree {
    ask(
        1,
        cat("q_Rbar"),
        ask(2, f("g2=T"), leaf("RTF"), split(2, "g1=T", "TFR", "RFT")),
        ask(1, f("g1=T"), leaf("TRF"), split(1, "g2=T", "FTR", "FRT")),
    )
}

fn three_bottom_up() -> StrategyTree {
    ask(
        1,
        cat("q1"),
        ask(2, f("g2=T"), split(2, "g1=R", "RTF", "FTR"), split(2, "g1=R", "RFT", "TFR")),
        ask(3, f("g3=T"), split(3, "g1=R", "RFT", "FRT"), split(3, "g1=R", "RTF", "TRF")),
    )
}

fn three_roberts() -> StrategyTree {
    ask(
        1,
        f("g3=R"),
        ask(2, f("g1!=R"), split(2, "g2=T", "FTR", "TFR"), split(2, "g2=T", "RTF", "RFT")),
        ask(3, f("g1!=R"), split(3, "g3=T", "FRT", "TRF"), split(3, "g3=T", "RFT", "RTF")),
    )
}

fn five_gods() -> StrategyTree {
    let after_q2 = ask(
        3,
        f("g4!=R"),
        split(3, "g5!=R", "RRTTT", "RTTTR"),
        split(3, "g5!=R", "RTTRT", "TTTRR"),
    );
    let after_not_q2 = ask(
        4,
        cat("q3_5"),
        split(2, "g4!=R", "TTRTR", "TTRRT"),
        ask(5, f("g4!=R"), split(5, "g3!=R", "RRTTT", "RTRTT"), leaf("TTRRT")),
    );
    let after_q2bar = ask(
        4,
        f("g2!=R"),
        split(4, "g3!=R", "RTTTR", "RTRTT"),
        split(4, "g3!=R", "TRTTR", "TRRTT"),
    );
    let after_not_q2bar = ask(
        5,
        f("g4!=R"),
        ask(5, f("g1!=R"), leaf("TRRTT"), split(5, "g3!=R", "RRTTT", "RTRTT")),
        split(5, "g1!=R", "TRTRT", "RTTRT"),
    );
    ask(
        1,
        cat("q1_5"),
        ask(2, cat("q2_5"), after_q2, after_not_q2),
        ask(3, cat("q2bar_5"), after_q2bar, after_not_q2bar),
    )
}

/// All built-in strategies in a fixed order.
pub fn builtins() -> Vec<Builtin> {
    BUILTIN_NAMES.iter().map(|n| builtin(n).expect("known name")).collect()
}

pub fn builtin(name: &str) -> Result<Builtin> {
    let classic = PuzzleSpec::classic();
    let (spec, mode, summary, tree) = match name {
        "three_nonrandom" => (
            classic,
            RandomMode::Reliable,
            "three gods, random god read as a random truth-teller or liar",
            three_nonrandom(),
        ),
        "three_bottom_up" => (
            classic,
            RandomMode::Escaping,
            "three gods, balanced first question, always three asks",
            three_bottom_up(),
        ),
        "three_roberts" => (
            classic,
            RandomMode::Escaping,
            "three gods, first ask whether g3 is random",
            three_roberts(),
        ),
        "five_gods" => (
            PuzzleSpec::five_gods(),
            RandomMode::Escaping,
            "five gods, two random, hides five-ask cases behind random gods",
            five_gods(),
        ),
        _ => return Err(Error::UnknownBuiltin(name.to_string())),
    };
    let name = BUILTIN_NAMES.iter().find(|n| **n == name).copied().expect("matched");
    Ok(Builtin {
        name,
        spec,
        mode,
        summary,
        tree,
    })
}
