//! The general solver: first locate a god who cannot be random, then ask
//! that god about everyone.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::knowledge::update_set;
use crate::model::{Assignment, Enumeration, GodType, PossibilitySet, PuzzleSpec};
use crate::simulator::{self, AskNode, CoinSource, RandomMode, WordSemantics};

use super::StrategyTree;

/// Something that can be asked templated questions and returns decoded bits.
pub trait Interrogator {
    fn ask(&mut self, god: usize, question: &Formula) -> Result<bool>;
}

/// Interrogates a simulated world.
pub struct SimulatedInterrogator<'a, C: CoinSource> {
    pub world: &'a Assignment,
    pub ws: WordSemantics,
    pub mode: RandomMode,
    pub coins: &'a mut C,
    pub asked: usize,
}

impl<'a, C: CoinSource> SimulatedInterrogator<'a, C> {
    pub fn new(world: &'a Assignment, ws: WordSemantics, coins: &'a mut C) -> Self {
        SimulatedInterrogator {
            world,
            ws,
            mode: RandomMode::Escaping,
            coins,
            asked: 0,
        }
    }
}

impl<C: CoinSource> Interrogator for SimulatedInterrogator<'_, C> {
    fn ask(&mut self, god: usize, question: &Formula) -> Result<bool> {
        self.asked += 1;
        let node = AskNode::templated(god, question.clone());
        let word = simulator::god_answer(self.world, self.ws, god, &node, self.coins, self.mode)?;
        Ok(simulator::decode_template(word))
    }
}

/// Finds a god (0-based) who is non-random in every world consistent with
/// the answers. Asks the first remaining god, for each later god in turn,
/// whether that god is random. A yes drops both gods; running out of gods
/// drops the first. Either way the rest still has fewer random than
/// non-random gods, so the recursion ends on one or two gods, the first of
/// whom is returned.
///
/// Only meaningful when the spec has fewer random than non-random gods.
pub fn find_non_random(spec: PuzzleSpec, interrogator: &mut impl Interrogator) -> Result<usize> {
    let mut gods: Vec<usize> = (0..spec.gods()).collect();
    'outer: while gods.len() > 2 {
        let first = gods[0];
        for i in 1..gods.len() {
            let other = gods[i];
            if interrogator.ask(first, &Formula::is(other, GodType::Random))? {
                gods.retain(|&g| g != first && g != other);
                continue 'outer;
            }
        }
        gods.remove(0);
    }
    gods.first()
        .copied()
        .ok_or_else(|| Error::Domain(format!("no candidate god left for {spec}")))
}

struct Builder {
    enumeration: Arc<Enumeration>,
}

impl Builder {
    fn split(&self, state: &PossibilitySet, god: usize, question: &Formula) -> Result<(PossibilitySet, PossibilitySet)> {
        let truth = question.truth_set(&self.enumeration)?;
        Ok((
            update_set(&self.enumeration, state, god, &truth, true)?,
            update_set(&self.enumeration, state, god, &truth, false)?,
        ))
    }

    /// Search phase over the candidate list `gods`.
    fn find(&self, gods: &[usize], state: PossibilitySet) -> Result<StrategyTree> {
        if gods.len() <= 2 {
            return self.identify(gods[0], state);
        }
        self.scan(gods, 1, state)
    }

    fn scan(&self, gods: &[usize], i: usize, state: PossibilitySet) -> Result<StrategyTree> {
        if i == gods.len() {
            return self.find(&gods[1..], state);
        }
        let (first, other) = (gods[0], gods[i]);
        let question = Formula::is(other, GodType::Random);
        let (yes, no) = self.split(&state, first, &question)?;
        let rest: Vec<usize> = gods.iter().copied().filter(|&g| g != first && g != other).collect();
        // A branch no consistent world can take is left out, along with its ask.
        if yes.is_empty() {
            return self.scan(gods, i + 1, no);
        }
        if no.is_empty() {
            return self.find(&rest, yes);
        }
        Ok(StrategyTree::node(
            first,
            question,
            self.find(&rest, yes)?,
            self.scan(gods, i + 1, no)?,
        ))
    }

    /// Identification phase: `oracle` is non-random throughout `state`.
    fn identify(&self, oracle: usize, state: PossibilitySet) -> Result<StrategyTree> {
        let e = &*self.enumeration;
        if !state.intersection(e.random_at(oracle)?).is_empty() {
            return Err(Error::Domain(format!(
                "internal: g{} may still be random after the search phase",
                oracle + 1
            )));
        }
        let n = e.spec().gods();
        let order = (0..n).filter(|&g| g != oracle).chain([oracle]);
        for god in order {
            let present: Vec<GodType> = GodType::ALL
                .into_iter()
                .filter(|&ty| state.iter().any(|i| e.assignments()[i][god] == ty))
                .collect();
            if present.len() < 2 {
                continue;
            }
            let ty = if present.contains(&GodType::Random) {
                GodType::Random
            } else {
                GodType::Truthful
            };
            let question = Formula::is(god, ty);
            let (yes, no) = self.split(&state, oracle, &question)?;
            return Ok(StrategyTree::node(
                oracle,
                question,
                self.identify(oracle, yes)?,
                self.identify(oracle, no)?,
            ));
        }
        match state.first() {
            Some(i) if state.len() == 1 => Ok(StrategyTree::leaf(e.assignments()[i].clone())),
            _ => Err(Error::Domain("internal: identification ended without a unique assignment".into())),
        }
    }
}

/// A correct (not necessarily short) strategy for any spec with fewer random
/// than non-random gods.
pub fn constructive_solve(spec: PuzzleSpec) -> Result<StrategyTree> {
    if !spec.meets_solvability_criterion() {
        return Err(Error::Unsolvable {
            spec: spec.to_string(),
            random: spec.random(),
            non_random: spec.non_random(),
        });
    }
    let builder = Builder {
        enumeration: Arc::new(Enumeration::new(spec)),
    };
    let gods: Vec<usize> = (0..spec.gods()).collect();
    builder.find(&gods, builder.enumeration.full())
}
