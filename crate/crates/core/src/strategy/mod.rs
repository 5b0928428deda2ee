//! Strategy trees, their exhaustive verification with exact costs, the
//! built-in solutions and the general constructive solver.

mod builtin;
mod constructive;
mod format;

pub use builtin::{builtin, builtins, Builtin, BUILTIN_NAMES};
pub use constructive::{constructive_solve, find_non_random, Interrogator, SimulatedInterrogator};
pub use format::{StrategyFile, FORMAT_TAG};

use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::knowledge::KnowledgeState;
use crate::model::{Assignment, Enumeration, GodType, PuzzleSpec};
use crate::simulator::RandomMode;

/// Exact probabilities and expectations.
pub type Rational = Ratio<i64>;

/// Deepest tree the verifier accepts; path probabilities are `2^-depth`.
pub const MAX_VERIFY_DEPTH: usize = 60;

/// An adaptive questioning plan. Every node's question is put to its god
/// through the self-template. `god` is 0-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum StrategyTree {
    Leaf(Assignment),
    Node {
        god: usize,
        question: Formula,
        yes: Box<StrategyTree>,
        no: Box<StrategyTree>,
    },
}

impl StrategyTree {
    pub fn leaf(assignment: Assignment) -> Self {
        StrategyTree::Leaf(assignment)
    }

    pub fn node(god: usize, question: Formula, yes: StrategyTree, no: StrategyTree) -> Self {
        StrategyTree::Node {
            god,
            question,
            yes: Box::new(yes),
            no: Box::new(no),
        }
    }

    /// Longest root-to-leaf path, in questions.
    pub fn depth(&self) -> usize {
        match self {
            StrategyTree::Leaf(_) => 0,
            StrategyTree::Node { yes, no, .. } => 1 + yes.depth().max(no.depth()),
        }
    }

    pub fn node_count(&self) -> usize {
        match self {
            StrategyTree::Leaf(_) => 1,
            StrategyTree::Node { yes, no, .. } => 1 + yes.node_count() + no.node_count(),
        }
    }

    /// Checks gods, formulas and declarations against `spec`, reporting the
    /// path of the first offending node.
    pub fn check(&self, spec: PuzzleSpec) -> Result<()> {
        self.check_at(spec, &mut String::from("root"))
    }

    fn check_at(&self, spec: PuzzleSpec, path: &mut String) -> Result<()> {
        let fail = |path: &str, message: String| Error::Strategy {
            path: path.to_string(),
            message,
        };
        match self {
            StrategyTree::Leaf(a) => spec.check(a).map_err(|e| fail(path, e.to_string())),
            StrategyTree::Node { god, question, yes, no } => {
                if *god >= spec.gods() {
                    return Err(fail(path, format!("god g{} is out of range for {spec}", god + 1)));
                }
                question.check_gods(spec).map_err(|e| fail(path, e.to_string()))?;
                let len = path.len();
                path.push_str(".true");
                yes.check_at(spec, path)?;
                path.truncate(len);
                path.push_str(".false");
                no.check_at(spec, path)?;
                path.truncate(len);
                Ok(())
            }
        }
    }
}

/// One possible run for a fixed true assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub probability: Rational,
    pub cost: u32,
    pub declared: Assignment,
    pub path: String,
}

/// Exhaustive verification result.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    pub spec: PuzzleSpec,
    pub mode: RandomMode,
    pub correct: bool,
    pub worst_case: u32,
    pub expected: Rational,
    /// Outcomes per assignment in canonical order; outcomes in depth-first,
    /// true-branch-first order.
    pub per_assignment: Vec<(Assignment, Vec<Outcome>)>,
}

impl VerificationReport {
    /// `(probability, cost)` pairs for one assignment.
    pub fn profile(&self, assignment: &Assignment) -> Option<Vec<(Rational, u32)>> {
        self.per_assignment
            .iter()
            .find(|(a, _)| a == assignment)
            .map(|(_, o)| o.iter().map(|o| (o.probability, o.cost)).collect())
    }

    /// Outcomes that declare the wrong assignment.
    pub fn failures(&self) -> Vec<(&Assignment, &Outcome)> {
        self.per_assignment
            .iter()
            .flat_map(|(a, outs)| outs.iter().filter(move |o| &o.declared != a).map(move |o| (a, o)))
            .collect()
    }
}

/// `a/b` plus a decimal: `= 4.15` when the expansion terminates within six
/// places, `≈ 2.67` otherwise; integers print bare.
pub fn render_rational(r: Rational) -> String {
    if r.is_integer() {
        return r.to_integer().to_string();
    }
    let mut d = *r.denom();
    for p in [2, 5] {
        while d % p == 0 {
            d /= p;
        }
    }
    let value = *r.numer() as f64 / *r.denom() as f64;
    if d == 1 {
        let mut places = 0;
        let mut scaled = r;
        while !scaled.is_integer() {
            scaled *= Rational::from_integer(10);
            places += 1;
        }
        if places <= 6 {
            return format!("{r} = {value:.places$}");
        }
    }
    format!("{r} ≈ {value:.2}")
}

pub fn render_profile(outcomes: &[(Rational, u32)]) -> String {
    let items: Vec<String> = outcomes.iter().map(|(p, c)| format!("{p}:{c}")).collect();
    format!("{{{}}}", items.join(", "))
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "spec {}", self.spec)?;
        writeln!(f, "mode {}", self.mode)?;
        writeln!(f, "correct = {}", if self.correct { "yes" } else { "no" })?;
        writeln!(f, "worst case = {}", self.worst_case)?;
        writeln!(f, "expected = {}", render_rational(self.expected))?;
        writeln!(f, "per-assignment profile:")?;
        for (a, outcomes) in &self.per_assignment {
            let pairs: Vec<_> = outcomes.iter().map(|o| (o.probability, o.cost)).collect();
            writeln!(f, "  {a}  {}", render_profile(&pairs))?;
        }
        for (a, o) in self.failures() {
            writeln!(f, "wrong: world {a} declared {} at {}", o.declared, o.path)?;
        }
        Ok(())
    }
}

/// Walks the tree for every assignment of `spec`. In escaping mode a node
/// whose god is random in the true world takes both branches with
/// probability 1/2; otherwise, and always in reliable mode, the branch is
/// the formula's truth value.
pub fn verify(tree: &StrategyTree, spec: PuzzleSpec, mode: RandomMode) -> Result<VerificationReport> {
    tree.check(spec)?;
    if tree.depth() > MAX_VERIFY_DEPTH {
        return Err(Error::Strategy {
            path: "root".into(),
            message: format!("depth {} exceeds the verifier limit of {MAX_VERIFY_DEPTH}", tree.depth()),
        });
    }
    let mut per_assignment = Vec::new();
    let mut total = Rational::from_integer(0);
    let mut worst = 0;
    let mut correct = true;
    for a in spec.enumerate() {
        let mut outcomes = Vec::new();
        walk(tree, &a, mode, Rational::from_integer(1), 0, &mut String::from("root"), &mut outcomes)?;
        for o in &outcomes {
            total += o.probability * Rational::from_integer(o.cost as i64);
            worst = worst.max(o.cost);
            correct &= o.declared == a;
        }
        per_assignment.push((a, outcomes));
    }
    let count = per_assignment.len() as i64;
    Ok(VerificationReport {
        spec,
        mode,
        correct,
        worst_case: worst,
        expected: total / Rational::from_integer(count),
        per_assignment,
    })
}

fn walk(
    tree: &StrategyTree,
    world: &Assignment,
    mode: RandomMode,
    probability: Rational,
    cost: u32,
    path: &mut String,
    out: &mut Vec<Outcome>,
) -> Result<()> {
    match tree {
        StrategyTree::Leaf(declared) => {
            out.push(Outcome {
                probability,
                cost,
                declared: declared.clone(),
                path: path.clone(),
            });
            Ok(())
        }
        StrategyTree::Node { god, question, yes, no } => {
            let len = path.len();
            let mut branch = |child: &StrategyTree, label: &str, p: Rational, path: &mut String| {
                path.push_str(label);
                let r = walk(child, world, mode, p, cost + 1, path, out);
                path.truncate(len);
                r
            };
            if mode == RandomMode::Escaping && world[*god] == GodType::Random {
                let half = probability / Rational::from_integer(2);
                branch(yes, ".true", half, path)?;
                branch(no, ".false", half, path)
            } else if question.eval(world)? {
                branch(yes, ".true", probability, path)
            } else {
                branch(no, ".false", probability, path)
            }
        }
    }
}

/// Paths (escaping-mode knowledge) whose leaf declares an assignment that is
/// no longer possible there.
pub fn audit_leaves(tree: &StrategyTree, spec: PuzzleSpec) -> Result<Vec<String>> {
    fn go(tree: &StrategyTree, state: &KnowledgeState, path: &mut String, bad: &mut Vec<String>) -> Result<()> {
        match tree {
            StrategyTree::Leaf(a) => {
                let index = state.enumeration().index_of(a)?;
                if !state.possible().contains(index) {
                    bad.push(path.clone());
                }
                Ok(())
            }
            StrategyTree::Node { god, question, yes, no } => {
                let len = path.len();
                for (bit, child) in [(true, yes), (false, no)] {
                    let next = state.update_formula(*god, question, bit)?;
                    if next.is_empty() {
                        continue;
                    }
                    path.push_str(if bit { ".true" } else { ".false" });
                    go(child, &next, path, bad)?;
                    path.truncate(len);
                }
                Ok(())
            }
        }
    }
    tree.check(spec)?;
    let state = KnowledgeState::full(Arc::new(Enumeration::new(spec)));
    let mut bad = Vec::new();
    go(tree, &state, &mut String::from("root"), &mut bad)?;
    Ok(bad)
}
