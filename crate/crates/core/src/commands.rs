//! Command implementations behind the `godpuzzle` binary. Each returns the
//! text to print and whether the check it performs passed.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::PuzzleSpec;
use crate::simulator::{self, RandomMode, SeededCoins, WordSemantics};
use crate::strategy::{self, render_rational, StrategyFile};
use crate::synthesis::{self, SearchConfig, SearchValue};

/// Text output plus pass/fail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub success: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, success: true }
    }
}

/// Exit code for a command result: 0 ok, 1 failed check or unsolvable spec,
/// 2 usage or input error.
pub fn exit_code(result: &Result<Outcome>) -> i32 {
    match result {
        Ok(o) if o.success => 0,
        Ok(_) | Err(Error::Unsolvable { .. }) => 1,
        Err(_) => 2,
    }
}

/// Largest spec size the solvable command cross-checks by search.
pub const SEARCH_CHECK_MAX_GODS: usize = 6;

pub fn cmd_solvable(n: usize, m: usize, k: usize) -> Result<Outcome> {
    let spec = PuzzleSpec::new(n, m, k)?;
    let yes = spec.meets_solvability_criterion();
    let word = |b: bool| if b { "yes" } else { "no" };
    let relation = if yes { "<" } else { "is not <" };
    let mut text = format!(
        "{spec}: {}\ncriterion: {} random {relation} {} non-random\n",
        word(yes),
        spec.random(),
        spec.non_random()
    );
    let mut success = true;
    if n <= SEARCH_CHECK_MAX_GODS {
        let found = synthesis::solvable_by_search(spec, SearchConfig::default())?;
        success = found == yes;
        let agreement = if success { "agrees" } else { "DISAGREES" };
        text.push_str(&format!("search: {} ({agreement})\n", word(found)));
    }
    Ok(Outcome { text, success })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SolveMethod {
    OptimalWorst,
    OptimalExpected,
    Constructive,
}

/// Emits a strategy file for the spec, re-verified before printing.
pub fn cmd_solve(n: usize, m: usize, k: usize, method: SolveMethod) -> Result<Outcome> {
    let spec = PuzzleSpec::new(n, m, k)?;
    let unsolvable = || Error::Unsolvable {
        spec: spec.to_string(),
        random: spec.random(),
        non_random: spec.non_random(),
    };
    let mut comments = Vec::new();
    let tree = match method {
        SolveMethod::Constructive => {
            comments.push("method = constructive".to_string());
            strategy::constructive_solve(spec)?
        }
        SolveMethod::OptimalWorst | SolveMethod::OptimalExpected => {
            if !spec.meets_solvability_criterion() {
                return Err(unsolvable());
            }
            let config = SearchConfig::default();
            let result = if method == SolveMethod::OptimalWorst {
                synthesis::min_worst_case(spec, config)?
            } else {
                synthesis::min_expected(spec, config)?
            };
            match &result.value {
                SearchValue::Depth(d) => comments.push(format!("optimal worst case = {d}")),
                SearchValue::Expected(v) => {
                    let label = if result.optimal { "optimal" } else { "best found (not proven optimal)" };
                    comments.push(format!("{label} expected = {}", render_rational(*v)));
                }
                SearchValue::Unsolvable => return Err(unsolvable()),
            }
            comments.push(format!("states explored = {}", result.nodes_explored));
            result.witness.ok_or_else(unsolvable)?
        }
    };
    let report = strategy::verify(&tree, spec, RandomMode::Escaping)?;
    if !report.correct {
        return Err(Error::Domain("internal: produced strategy failed verification".into()));
    }
    comments.push(format!("verified worst case = {}", report.worst_case));
    comments.push(format!("verified expected = {}", render_rational(report.expected)));
    let mut file = StrategyFile::new(spec, tree);
    file.comments = comments;
    Ok(Outcome::ok(file.to_string()))
}

/// Verifies a strategy file.
pub fn cmd_verify(text: &str, mode: RandomMode) -> Result<Outcome> {
    let file = StrategyFile::parse(text)?;
    let report = strategy::verify(&file.tree, file.spec, mode)?;
    Ok(Outcome {
        text: report.to_string(),
        success: report.correct,
    })
}

/// Prints a built-in strategy as a strategy file.
pub fn cmd_export(name: &str) -> Result<Outcome> {
    let b = strategy::builtin(name)?;
    let file = StrategyFile::new(b.spec, b.tree)
        .with_comment(format!("builtin {}", b.name))
        .with_comment(format!("intended mode = {}", b.mode));
    Ok(Outcome::ok(file.to_string()))
}

/// Monte-Carlo summary.
#[derive(Clone, Debug, PartialEq)]
pub struct SimulationReport {
    pub episodes: u64,
    pub successes: u64,
    pub mean: f64,
    pub std_error: f64,
    pub max_questions: usize,
}

impl SimulationReport {
    pub fn all_correct(&self) -> bool {
        self.successes == self.episodes
    }
}

impl fmt::Display for SimulationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "episodes = {}", self.episodes)?;
        if self.episodes == 0 {
            return writeln!(f, "success = 0/0 (vacuous)");
        }
        let rate = 100.0 * self.successes as f64 / self.episodes as f64;
        writeln!(f, "success = {}/{} ({rate:.2}%)", self.successes, self.episodes)?;
        writeln!(f, "mean questions = {:.4}", self.mean)?;
        writeln!(f, "standard error = {:.4}", self.std_error)?;
        writeln!(f, "max questions = {}", self.max_questions)
    }
}

/// Runs `episodes` simulated games: uniform true assignment, fair meaning of
/// `χ`, fresh seeded coins per episode, all drawn from `seed`.
pub fn simulate(file: &StrategyFile, episodes: u64, seed: u64, mode: RandomMode) -> Result<SimulationReport> {
    let assignments = file.spec.enumerate();
    file.tree.check(file.spec)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut successes, mut sum, mut sum_sq, mut max) = (0u64, 0f64, 0f64, 0usize);
    for _ in 0..episodes {
        let world = &assignments[rng.random_range(0..assignments.len())];
        let ws = WordSemantics {
            chi_means_yes: rng.random(),
        };
        let mut coins = SeededCoins::new(rng.random());
        let episode = simulator::run_episode(file.spec, world, ws, &file.tree, &mut coins, mode)?;
        successes += episode.correct() as u64;
        let q = episode.questions as f64;
        sum += q;
        sum_sq += q * q;
        max = max.max(episode.questions);
    }
    let n = episodes as f64;
    let (mean, std_error) = if episodes == 0 {
        (0.0, 0.0)
    } else {
        let mean = sum / n;
        let var = if episodes > 1 { (sum_sq - n * mean * mean).max(0.0) / (n - 1.0) } else { 0.0 };
        (mean, (var / n).sqrt())
    };
    Ok(SimulationReport {
        episodes,
        successes,
        mean,
        std_error,
        max_questions: max,
    })
}

pub fn cmd_simulate(text: &str, episodes: u64, seed: u64, mode: RandomMode) -> Result<Outcome> {
    let file = StrategyFile::parse(text)?;
    let report = simulate(&file, episodes, seed, mode)?;
    Ok(Outcome {
        text: report.to_string(),
        success: report.all_correct(),
    })
}

pub fn cmd_template_check() -> Outcome {
    let report = simulator::template_theorem_check();
    Outcome {
        text: format!("{report}\n"),
        success: report.all_pass(),
    }
}
