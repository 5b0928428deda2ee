//! Acceptance suite: one PASS/FAIL line per criterion, each with a pinned
//! time limit. Runs without the test harness so the lines print in order.

use std::path::Path;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use godpuzzle::commands;
use godpuzzle::knowledge::twin_adversary;
use godpuzzle::model::{Assignment, GodType, PuzzleSpec};
use godpuzzle::simulator::{self, PatternCoins, RandomMode, Transcript, WordSemantics};
use godpuzzle::strategy::{self, Rational, StrategyFile, StrategyTree};
use godpuzzle::synthesis::{self, SearchConfig, SearchValue};
use godpuzzle::{question, Formula};

type Check = Result<String, String>;

fn ensure(cond: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(message())
    }
}

fn spec(n: usize, m: usize, k: usize) -> PuzzleSpec {
    PuzzleSpec::new(n, m, k).unwrap()
}

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d)
}

fn template_theorem() -> Check {
    let outcome = commands::cmd_template_check();
    let lines: Vec<&str> = outcome.text.lines().collect();
    ensure(outcome.success, || outcome.text.clone())?;
    ensure(lines.len() == 9 && lines[8] == "8/8 pass", || outcome.text.clone())?;
    ensure(lines[0].starts_with("q=1, γ=𝒯, χ=1"), || lines[0].to_string())?;
    Ok("8/8 cases pass".into())
}

fn every_coin_pattern_solves(name: &str, ws_both: bool) -> Result<usize, String> {
    let b = strategy::builtin(name).map_err(|e| e.to_string())?;
    let depth = b.tree.depth() as u32;
    let mut episodes = 0;
    let meanings = if ws_both {
        vec![WordSemantics::CHI_YES, WordSemantics::CHI_NO]
    } else {
        vec![WordSemantics::CHI_YES]
    };
    for world in b.spec.enumerate() {
        for &ws in &meanings {
            for pattern in 0..1u64 << depth {
                let mut coins = PatternCoins::new(pattern);
                let ep = simulator::run_episode(b.spec, &world, ws, &b.tree, &mut coins, RandomMode::Escaping)
                    .map_err(|e| e.to_string())?;
                ensure(coins.used() <= depth, || format!("{name}: more coins than depth"))?;
                ensure(ep.declared == world, || {
                    format!("{name}: world {world} pattern {pattern:b} declared {}", ep.declared)
                })?;
                episodes += 1;
            }
        }
    }
    Ok(episodes)
}

fn three_gods_solution() -> Check {
    let b = strategy::builtin("three_bottom_up").map_err(|e| e.to_string())?;
    let report = strategy::verify(&b.tree, b.spec, RandomMode::Escaping).map_err(|e| e.to_string())?;
    ensure(report.correct, || report.to_string())?;
    ensure(report.per_assignment.len() == 6, || "expected 6 assignments".into())?;
    ensure(report.worst_case == 3, || format!("worst case {}", report.worst_case))?;
    let episodes = every_coin_pattern_solves("three_bottom_up", true)?;
    Ok(format!("correct, worst case 3, {episodes}/{episodes} simulated episodes correct"))
}

fn lower_bound() -> Check {
    let result = synthesis::min_worst_case(PuzzleSpec::classic(), SearchConfig::default()).map_err(|e| e.to_string())?;
    ensure(result.value == SearchValue::Depth(3), || format!("{:?}", result.value))?;
    let witness = result.witness.ok_or("no witness")?;
    let report = strategy::verify(&witness, PuzzleSpec::classic(), RandomMode::Escaping).map_err(|e| e.to_string())?;
    ensure(report.correct && report.worst_case == 3, || report.to_string())?;
    let two = synthesis::exists_within(PuzzleSpec::classic(), 2, SearchConfig::default()).map_err(|e| e.to_string())?;
    ensure(!two.exists, || "a depth-2 strategy was found".into())?;
    Ok(format!(
        "min worst case 3; depth 2 exhausted ({} states, {} moves)",
        two.states, two.moves
    ))
}

fn non_random_reading() -> Check {
    let b = strategy::builtin("three_nonrandom").map_err(|e| e.to_string())?;
    let report = strategy::verify(&b.tree, b.spec, RandomMode::Reliable).map_err(|e| e.to_string())?;
    ensure(report.correct, || report.to_string())?;
    ensure(report.expected == r(8, 3), || format!("expected {}", report.expected))?;
    let printed = format!("{:.2}", 8.0 / 3.0);
    ensure(printed == "2.67", || printed.clone())?;
    Ok("correct in reliable mode, expected 8/3 (2.67)".into())
}

fn five_gods() -> Check {
    let b = strategy::builtin("five_gods").map_err(|e| e.to_string())?;
    let report = strategy::verify(&b.tree, b.spec, RandomMode::Escaping).map_err(|e| e.to_string())?;
    ensure(report.correct, || report.to_string())?;
    ensure(report.expected == r(83, 20), || format!("expected {}", report.expected))?;
    // The cost table, row by row, outcomes in the printed order.
    let q = |p: (i64, i64), c: u32| (r(p.0, p.1), c);
    let rows: Vec<(&str, Vec<(Rational, u32)>)> = vec![
        ("RRTTT", vec![q((1, 4), 4), q((1, 4), 5), q((1, 2), 5)]),
        ("RTTTR", vec![q((1, 2), 4), q((1, 2), 4)]),
        ("RTTRT", vec![q((1, 2), 4), q((1, 2), 4)]),
        ("TTTRR", vec![q((1, 1), 4)]),
        ("TTRTR", vec![q((1, 1), 4)]),
        ("TTRRT", vec![q((1, 2), 4), q((1, 2), 4)]),
        ("RTRTT", vec![q((1, 2), 5), q((1, 4), 4), q((1, 4), 5)]),
        ("TRTTR", vec![q((1, 1), 4)]),
        ("TRRTT", vec![q((1, 2), 4), q((1, 2), 4)]),
        ("TRTRT", vec![q((1, 1), 4)]),
    ];
    for (world, expected) in &rows {
        let a: Assignment = world.parse().unwrap();
        let got = report.profile(&a).ok_or_else(|| format!("no row {world}"))?;
        ensure(&got == expected, || format!("{world}: {got:?}"))?;
    }
    let episodes = every_coin_pattern_solves("five_gods", true)?;
    Ok(format!("expected 83/20, all 10 table rows match, {episodes} simulated episodes correct"))
}

fn solvability_by_search() -> Check {
    let mut checked = 0;
    for n in 1..=6 {
        for m in 0..=n {
            for k in 0..=n - m {
                let s = spec(n, m, k);
                let found = synthesis::solvable_by_search(s, SearchConfig::default()).map_err(|e| e.to_string())?;
                ensure(found == (m < n - m), || format!("{s}: search says {found}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} specs with n <= 6 agree with m < n - m"))
}

fn twin_corpus(s: PuzzleSpec) -> Vec<StrategyTree> {
    let n = s.gods();
    let leaf = |a: &Assignment| StrategyTree::leaf(a.clone());
    let all = s.enumerate();
    let lit = |g: usize, ty| Formula::is(g % n, ty);
    let mut out = vec![leaf(&all[0])];
    // One question per god about every other god, in several shapes.
    for asker in 0..n {
        for about in 0..n {
            for ty in GodType::ALL {
                out.push(StrategyTree::node(asker, lit(about, ty), leaf(&all[0]), leaf(&all[all.len() - 1])));
            }
        }
    }
    // Lemma-style scan: ask g1 about each later god being random, then
    // interrogate the "found" god.
    let mut chain = leaf(&all[1 % all.len()]);
    for i in (1..n).rev() {
        let follow = (0..n).rev().fold(leaf(&all[0]), |acc, g| {
            StrategyTree::node(i, lit(g, GodType::Truthful), acc.clone(), StrategyTree::node(i, lit(g, GodType::Random), acc, leaf(&all[0])))
        });
        chain = StrategyTree::node(0, lit(i, GodType::Random), follow, chain);
    }
    out.push(chain);
    // Every DNF question over the full enumeration, asked of every god, twice.
    for god in 0..n {
        for mask in 0u32..1 << all.len().min(6) {
            let members: Vec<&Assignment> = all.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, a)| a).collect();
            let f = Formula::dnf_of(members);
            let inner = StrategyTree::node((god + 1) % n, f.clone(), leaf(&all[0]), leaf(&all[1]));
            out.push(StrategyTree::node(god, f, inner.clone(), inner));
        }
    }
    out
}

fn unsolvability_adversary() -> Check {
    let mut runs = 0;
    let mut states = 0;
    for s in [spec(2, 1, 1), spec(4, 2, 2)] {
        let witness = twin_adversary(s).map_err(|e| e.to_string())?;
        for tree in twin_corpus(s) {
            let run = witness.run_lockstep(&tree).map_err(|e| format!("{s}: {e}"))?;
            ensure(run.identical(), || format!("{s}: transcripts differ"))?;
            ensure(witness.both_survive(run.state.possible()), || format!("{s}: twin eliminated"))?;
            ensure(witness.twins().iter().any(|t| *t != run.declared), || "declared both".into())?;
            runs += 1;
        }
        let explored = witness.explore(6).map_err(|e| format!("{s}: {e}"))?;
        states += explored.states;
    }
    Ok(format!(
        "{runs} corpus strategies in lockstep; all move sequences to depth 6 keep both twins ({states} states)"
    ))
}

fn constructive_solver() -> Check {
    let mut solved = 0;
    for n in 1..=5 {
        for m in 0..=n {
            for k in 0..=n - m {
                let s = spec(n, m, k);
                if !s.meets_solvability_criterion() {
                    continue;
                }
                let tree = strategy::constructive_solve(s).map_err(|e| format!("{s}: {e}"))?;
                let report = strategy::verify(&tree, s, RandomMode::Escaping).map_err(|e| e.to_string())?;
                ensure(report.correct, || format!("{s}: incorrect tree"))?;
                solved += 1;
            }
        }
    }
    let mut runs = 0;
    const BITS: u32 = 12;
    for s in [PuzzleSpec::classic(), PuzzleSpec::five_gods()] {
        for world in s.enumerate() {
            for ws in [WordSemantics::CHI_YES, WordSemantics::CHI_NO] {
                for pattern in 0..1u64 << BITS {
                    let mut coins = PatternCoins::new(pattern);
                    let mut asker = strategy::SimulatedInterrogator::new(&world, ws, &mut coins);
                    let god = strategy::find_non_random(s, &mut asker).map_err(|e| e.to_string())?;
                    ensure(world[god] != GodType::Random, || format!("{s}: {world} pattern {pattern:b} gave g{}", god + 1))?;
                    ensure(coins.used() <= BITS, || "coin patterns too short".into())?;
                    runs += 1;
                }
            }
        }
    }
    Ok(format!("{solved} solvable specs with n <= 5 solved; {runs} adversarial runs found a non-random god"))
}

fn monte_carlo() -> Check {
    let text = commands::cmd_export("five_gods").map_err(|e| e.to_string())?.text;
    let file = StrategyFile::parse(&text).map_err(|e| e.to_string())?;
    let report = commands::simulate(&file, 100_000, 2024, RandomMode::Escaping).map_err(|e| e.to_string())?;
    ensure(report.all_correct(), || report.to_string())?;
    let gap = (report.mean - 4.15).abs();
    ensure(gap <= 3.0 * report.std_error, || report.to_string())?;
    Ok(format!(
        "100% success, mean {:.4} within {:.2} standard errors of 4.15",
        report.mean,
        gap / report.std_error
    ))
}

/// Golden transcripts and the built-in strategy each was recorded with.
pub const GOLDEN: [(&str, &str); 5] = [
    ("three_bottom_up", "bottom_up_rtf_seed7.txt"),
    ("three_roberts", "roberts_frt_seed3.txt"),
    ("three_nonrandom", "nonrandom_rft_seed5.txt"),
    ("five_gods", "five_rrttt_seed11.txt"),
    ("five_gods", "five_rtrtt_seed12.txt"),
];

fn formats() -> Check {
    let mut trees = Vec::new();
    for b in strategy::builtins() {
        trees.push((b.spec, b.tree));
    }
    for s in [PuzzleSpec::classic(), PuzzleSpec::five_gods()] {
        trees.push((s, strategy::constructive_solve(s).map_err(|e| e.to_string())?));
    }
    let mut formulas = 0;
    for (s, tree) in &trees {
        let text = StrategyFile::new(*s, tree.clone()).to_string();
        let back = StrategyFile::parse(&text).map_err(|e| e.to_string())?;
        ensure(&back.tree == tree && back.to_string() == text, || format!("strategy file changed:\n{text}"))?;
        let mut stack = vec![tree];
        while let Some(t) = stack.pop() {
            if let StrategyTree::Node { question, yes, no, .. } = t {
                let printed = question.to_string();
                let parsed = Formula::parse(&printed).map_err(|e| e.to_string())?;
                ensure(&parsed == question && parsed.to_string() == printed, || printed.clone())?;
                formulas += 1;
                stack.push(yes);
                stack.push(no);
            }
        }
    }
    for entry in question::catalog().values() {
        let printed = entry.formula.to_string();
        ensure(Formula::parse(&printed).as_ref() == Ok(&entry.formula), || printed.clone())?;
        formulas += 1;
    }
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for (name, file) in GOLDEN {
        let text = std::fs::read_to_string(dir.join(file)).map_err(|e| format!("{file}: {e}"))?;
        let golden: Transcript = text.parse().map_err(|e| format!("{file}: {e}"))?;
        ensure(golden.to_string() == text, || format!("{file} does not re-print identically"))?;
        let tree = strategy::builtin(name).map_err(|e| e.to_string())?.tree;
        let replayed = simulator::replay(&golden, &tree).map_err(|e| e.to_string())?;
        ensure(replayed.to_string() == text, || format!("{file} replays as\n{replayed}"))?;
    }
    Ok(format!(
        "{} strategy files and {formulas} formulas round-trip; {} golden transcripts replay exactly",
        trees.len(),
        GOLDEN.len()
    ))
}

/// Number, title, time limit in seconds, check.
type Criterion = (u32, &'static str, u64, fn() -> Check);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        (1, "template theorem", 1, template_theorem),
        (2, "three-god solution", 1, three_gods_solution),
        (3, "lower bound of three questions", 10, lower_bound),
        (4, "non-random reading costs 8/3", 1, non_random_reading),
        (5, "five-god strategy costs 83/20", 5, five_gods),
        (6, "solvability by search, n <= 6", 300, solvability_by_search),
        (7, "unsolvability adversary", 60, unsolvability_adversary),
        (8, "constructive general solver", 60, constructive_solver),
        (9, "Monte-Carlo consistency", 60, monte_carlo),
        (10, "formats round-trip", 10, formats),
    ];
    let mut failed = 0;
    for (id, title, limit, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let limit = Duration::from_secs(limit);
        let verdict = match result {
            Ok(detail) if elapsed < limit => format!("PASS  {detail}"),
            Ok(detail) => format!("FAIL  too slow ({elapsed:.2?} >= {limit:?}); {detail}"),
            Err(why) => format!("FAIL  {why}"),
        };
        if verdict.starts_with("FAIL") {
            failed += 1;
        }
        println!("[{id:>2}] {title:<32} {verdict} ({elapsed:.2?}, limit {limit:?})");
    }
    println!("{} of 10 criteria pass", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
