//! The questioner's knowledge: which assignments are still possible, how a
//! decoded answer narrows them, and the twin-world adversary that keeps two
//! worlds indistinguishable when random gods are as many as the rest.

use std::collections::HashSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::model::{Assignment, Enumeration, GodType, PossibilitySet, PuzzleSpec};
use crate::question::Question;
use crate::simulator::{self, AskNode, CoinSource, RandomMode, Transcript, TranscriptEntry, WordSemantics};
use crate::strategy::StrategyTree;

/// Escaping update on a bare set: members where `god` is random survive
/// either answer, the rest survive iff they agree with `bit`.
pub fn update_set(
    enumeration: &Enumeration,
    set: &PossibilitySet,
    god: usize,
    truth: &PossibilitySet,
    bit: bool,
) -> Result<PossibilitySet> {
    let random = enumeration.random_at(god)?;
    let agreeing = if bit {
        set.intersection(truth)
    } else {
        set.difference(truth)
    };
    Ok(agreeing.union(&set.intersection(random)))
}

/// The set of assignments consistent with every decoded answer so far.
#[derive(Clone, Debug)]
pub struct KnowledgeState {
    enumeration: Arc<Enumeration>,
    possible: PossibilitySet,
}

impl PartialEq for KnowledgeState {
    fn eq(&self, other: &Self) -> bool {
        self.spec() == other.spec() && self.possible == other.possible
    }
}

impl Eq for KnowledgeState {}

impl KnowledgeState {
    /// Nothing known yet: every assignment of the spec is possible.
    pub fn new(spec: PuzzleSpec) -> Self {
        Self::full(Arc::new(Enumeration::new(spec)))
    }

    pub fn full(enumeration: Arc<Enumeration>) -> Self {
        let possible = enumeration.full();
        KnowledgeState { enumeration, possible }
    }

    pub fn with_possible(enumeration: Arc<Enumeration>, possible: PossibilitySet) -> Self {
        assert_eq!(possible.universe(), enumeration.len(), "set from another enumeration");
        KnowledgeState { enumeration, possible }
    }

    pub fn spec(&self) -> PuzzleSpec {
        self.enumeration.spec()
    }

    pub fn enumeration(&self) -> &Arc<Enumeration> {
        &self.enumeration
    }

    pub fn possible(&self) -> &PossibilitySet {
        &self.possible
    }

    pub fn len(&self) -> usize {
        self.possible.len()
    }

    pub fn is_empty(&self) -> bool {
        self.possible.is_empty()
    }

    /// State after `god` (0-based) answered the templated `question` with
    /// decoded `bit`.
    pub fn update(&self, god: usize, question: &Question, bit: bool) -> Result<Self> {
        if question.truth_set().universe() != self.enumeration.len() {
            return Err(Error::Domain("question was built for a different spec".into()));
        }
        Ok(KnowledgeState {
            enumeration: Arc::clone(&self.enumeration),
            possible: update_set(&self.enumeration, &self.possible, god, question.truth_set(), bit)?,
        })
    }

    /// [`update`](Self::update) for a bare formula.
    pub fn update_formula(&self, god: usize, formula: &Formula, bit: bool) -> Result<Self> {
        let question = Question::new(formula.clone(), &self.enumeration)?;
        self.update(god, &question, bit)
    }

    /// Both children of asking `god` about `question`: `(true, false)`.
    pub fn children(&self, god: usize, question: &Question) -> Result<(Self, Self)> {
        Ok((self.update(god, question, true)?, self.update(god, question, false)?))
    }

    pub fn is_solved(&self) -> bool {
        self.possible.len() == 1
    }

    /// Empty state: the answers contradict every assignment of the spec.
    pub fn is_inconsistent(&self) -> bool {
        self.possible.is_empty()
    }

    /// The remaining assignment, once solved.
    pub fn solution(&self) -> Option<&Assignment> {
        if self.is_solved() {
            self.possible.first().and_then(|i| self.enumeration.get(i))
        } else {
            None
        }
    }

    /// Gods (0-based) that are non-random in every remaining possibility.
    pub fn safe_gods(&self) -> Vec<usize> {
        (0..self.spec().gods())
            .filter(|&god| {
                self.possible
                    .iter()
                    .all(|i| self.enumeration.assignments()[i][god] != GodType::Random)
            })
            .collect()
    }

    pub fn render(&self) -> Vec<String> {
        self.enumeration.render(&self.possible)
    }
}

/// Forces a random god's single coin to a chosen value.
struct ForcedCoin(bool);

impl CoinSource for ForcedCoin {
    fn flip(&mut self) -> bool {
        self.0
    }
}

/// The two alternating worlds of an equal-split spec (`n` even, half random,
/// half truthful) together with the echo rule that keeps them apart from
/// any questioner: a random god always says what the truthful god in the
/// other world would say.
#[derive(Clone, Debug)]
pub struct TwinWitness {
    enumeration: Arc<Enumeration>,
    twins: [Assignment; 2],
    indices: [usize; 2],
}

/// Result of running one strategy against both twins.
#[derive(Clone, Debug)]
pub struct LockstepRun {
    pub transcripts: [Transcript; 2],
    pub state: KnowledgeState,
    pub declared: Assignment,
}

impl LockstepRun {
    /// Same words at every step in both worlds.
    pub fn identical(&self) -> bool {
        self.transcripts[0].entries == self.transcripts[1].entries
    }
}

/// Counts from an exhaustive exploration of reachable knowledge states.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Exploration {
    pub states: usize,
    pub moves: usize,
}

/// Builds the twin witness for an equal-split spec.
pub fn twin_adversary(spec: PuzzleSpec) -> Result<TwinWitness> {
    let n = spec.gods();
    if !n.is_multiple_of(2) || spec.random() * 2 != n || spec.truthful() * 2 != n {
        return Err(Error::Domain(format!(
            "twin adversary needs n even with n/2 random and n/2 truthful gods, got {spec}"
        )));
    }
    let alternating = |truthful_first: bool| {
        Assignment::new(
            (0..n)
                .map(|i| {
                    if (i % 2 == 0) == truthful_first {
                        GodType::Truthful
                    } else {
                        GodType::Random
                    }
                })
                .collect(),
        )
    };
    let enumeration = Arc::new(Enumeration::new(spec));
    let twins = [alternating(true), alternating(false)];
    let indices = [enumeration.index_of(&twins[0])?, enumeration.index_of(&twins[1])?];
    Ok(TwinWitness {
        enumeration,
        twins,
        indices,
    })
}

impl TwinWitness {
    pub fn twins(&self) -> &[Assignment; 2] {
        &self.twins
    }

    pub fn spec(&self) -> PuzzleSpec {
        self.enumeration.spec()
    }

    pub fn enumeration(&self) -> &Arc<Enumeration> {
        &self.enumeration
    }

    /// Index (0 or 1) of the twin in which `god` is truthful.
    fn truthful_twin(&self, god: usize) -> usize {
        if god.is_multiple_of(2) {
            0
        } else {
            1
        }
    }

    /// Decoded bit both worlds produce when `god` is asked `formula`.
    pub fn witness_bit(&self, god: usize, formula: &Formula) -> Result<bool> {
        if god >= self.spec().gods() {
            return Err(Error::GodOutOfRange {
                god: god + 1,
                gods: self.spec().gods(),
            });
        }
        formula.eval(&self.twins[self.truthful_twin(god)])
    }

    /// Whether both twins are still possible in `state`.
    pub fn both_survive(&self, state: &PossibilitySet) -> bool {
        self.indices.iter().all(|&i| state.contains(i))
    }

    /// Runs `strategy` in both twin worlds through the god simulator. The
    /// truthful god answers for real; the random god's coin is forced to echo
    /// the witness bit. Errors if the truthful answer ever disagrees with the
    /// witness bit or a twin is eliminated.
    pub fn run_lockstep(&self, strategy: &StrategyTree) -> Result<LockstepRun> {
        let spec = self.spec();
        let mut transcripts = self.twins.clone().map(|w| {
            let mut t = Transcript::new(spec);
            t.world = Some((w, WordSemantics::CHI_YES));
            t
        });
        let mut state = KnowledgeState::full(Arc::clone(&self.enumeration));
        let mut node = strategy;
        let mut path = String::from("root");
        loop {
            match node {
                StrategyTree::Leaf(declared) => {
                    for t in &mut transcripts {
                        t.declared = Some(declared.clone());
                    }
                    return Ok(LockstepRun {
                        transcripts,
                        state,
                        declared: declared.clone(),
                    });
                }
                StrategyTree::Node { god, question, yes, no } => {
                    let bit = self.witness_bit(*god, question)?;
                    let ask = AskNode::templated(*god, question.clone());
                    for (twin, t) in self.twins.iter().zip(&mut transcripts) {
                        let mut coin = ForcedCoin(bit);
                        let word = simulator::god_answer(
                            twin,
                            WordSemantics::CHI_YES,
                            *god,
                            &ask,
                            &mut coin,
                            RandomMode::Escaping,
                        )?;
                        if simulator::decode_template(word) != bit {
                            return Err(Error::Strategy {
                                path,
                                message: format!("twin {twin} broke lockstep"),
                            });
                        }
                        t.entries.push(TranscriptEntry {
                            god: *god,
                            ask: ask.clone(),
                            word,
                        });
                    }
                    state = state.update_formula(*god, question, bit)?;
                    if !self.both_survive(state.possible()) {
                        return Err(Error::Strategy {
                            path,
                            message: "a twin was eliminated".into(),
                        });
                    }
                    path.push_str(if bit { ".true" } else { ".false" });
                    node = if bit { yes } else { no };
                }
            }
        }
    }

    /// Explores every sequence of up to `depth` semantic moves (any god, any
    /// split of its non-random possibilities) answered by the witness, and
    /// checks both twins survive throughout. A strategy of depth at most
    /// `depth` follows exactly one such sequence against the witness, so this
    /// covers every strategy of that depth.
    pub fn explore(&self, depth: u32) -> Result<Exploration> {
        let e = &*self.enumeration;
        let mut seen: HashSet<(PossibilitySet, u32)> = HashSet::new();
        let mut stats = Exploration { states: 0, moves: 0 };
        let mut stack = vec![(e.full(), depth)];
        while let Some((state, left)) = stack.pop() {
            if !seen.insert((state.clone(), left)) {
                continue;
            }
            stats.states += 1;
            if !self.both_survive(&state) {
                return Err(Error::Domain(format!(
                    "twin eliminated in state {:?}",
                    e.render(&state)
                )));
            }
            if left == 0 {
                continue;
            }
            for god in 0..self.spec().gods() {
                let random = e.random_at(god)?;
                let nonrandom: Vec<usize> = state.difference(random).iter().collect();
                let witness = self.indices[self.truthful_twin(god)];
                // Subsets of the non-random members, as truth sets. Members
                // outside the state do not affect the update.
                for bits in 0u64..(1u64 << nonrandom.len()) {
                    let truth = PossibilitySet::from_indices(
                        e.len(),
                        nonrandom
                            .iter()
                            .enumerate()
                            .filter(|(j, _)| bits >> j & 1 == 1)
                            .map(|(_, &i)| i),
                    );
                    let bit = truth.contains(witness);
                    stats.moves += 1;
                    stack.push((update_set(e, &state, god, &truth, bit)?, left - 1));
                }
            }
        }
        Ok(stats)
    }
}
