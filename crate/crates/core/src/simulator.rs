//! Ground-truth world simulation: how gods answer, the self-referential
//! question template, and whole episodes played against a strategy tree.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::model::{Assignment, GodType, PuzzleSpec};
use crate::strategy::StrategyTree;

/// One of the two answer words. Which of them means "yes" is hidden.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Word {
    /// `χ`, serialized as `"chi"` on the wire.
    Chi,
    /// `_`, serialized as `"other"` on the wire.
    Other,
}

impl Word {
    pub fn wire_name(self) -> &'static str {
        match self {
            Word::Chi => "chi",
            Word::Other => "other",
        }
    }

    fn from_bit(chi: bool) -> Word {
        if chi {
            Word::Chi
        } else {
            Word::Other
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Word::Chi => "χ",
            Word::Other => "_",
        })
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        match s {
            "χ" | "chi" => Ok(Word::Chi),
            "_" | "other" => Ok(Word::Other),
            _ => Err(Error::UnknownWord(s.to_string())),
        }
    }
}

/// What `χ` means in a given world.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WordSemantics {
    pub chi_means_yes: bool,
}

impl WordSemantics {
    pub const CHI_YES: WordSemantics = WordSemantics { chi_means_yes: true };
    pub const CHI_NO: WordSemantics = WordSemantics { chi_means_yes: false };

    /// The word whose meaning is `value`.
    pub fn word_for(self, value: bool) -> Word {
        Word::from_bit(value == self.chi_means_yes)
    }

    pub fn meaning(self, word: Word) -> bool {
        (word == Word::Chi) == self.chi_means_yes
    }
}

/// The questioner-side decoding of a self-templated ask: `true` iff the god
/// answered `χ`. Never needs the meaning of `χ`.
pub fn decode_template(word: Word) -> bool {
    word == Word::Chi
}

/// A question as put to a god.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AskNode {
    /// Ask the formula directly.
    Base(Formula),
    /// "Would `subject` answer `inner` with `χ`?"
    Meta { subject: usize, inner: Box<AskNode> },
}

impl AskNode {
    /// The template ask `god("god(q) = χ")`.
    pub fn templated(god: usize, formula: Formula) -> AskNode {
        AskNode::Meta {
            subject: god,
            inner: Box::new(AskNode::Base(formula)),
        }
    }

    /// The base formula, if this is a self-templated ask addressed to `god`.
    pub fn self_template_formula(&self, god: usize) -> Option<&Formula> {
        match self {
            AskNode::Meta { subject, inner } if *subject == god => match &**inner {
                AskNode::Base(f) => Some(f),
                _ => None,
            },
            _ => None,
        }
    }

    /// English rendering for display.
    pub fn render_english(&self) -> String {
        match self {
            AskNode::Base(f) => format!("Is it the case that {f}?"),
            AskNode::Meta { subject, inner } => {
                let inner = match &**inner {
                    AskNode::Base(f) => format!("whether {f}"),
                    other => format!("\"{}\"", other.render_english()),
                };
                format!("If g{} were asked {inner}, would the answer be 'χ'?", subject + 1)
            }
        }
    }
}

/// How a random god behaves.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RandomMode {
    /// Answers with a fair coin flip.
    #[default]
    Escaping,
    /// Flips a coin per question to act as a truth-teller or a liar.
    Reliable,
}

impl fmt::Display for RandomMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RandomMode::Escaping => "escaping",
            RandomMode::Reliable => "reliable",
        })
    }
}

impl FromStr for RandomMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "escaping" => Ok(RandomMode::Escaping),
            "reliable" => Ok(RandomMode::Reliable),
            _ => Err(Error::Domain(format!("unknown mode {s:?}; expected escaping or reliable"))),
        }
    }
}

/// Source of random-god coin flips.
pub trait CoinSource {
    fn flip(&mut self) -> bool;

    /// Seed to record in transcripts, if replayable from one.
    fn seed(&self) -> Option<u64> {
        None
    }
}

/// Deterministic seeded coins.
#[derive(Clone, Debug)]
pub struct SeededCoins {
    seed: u64,
    rng: ChaCha8Rng,
}

impl SeededCoins {
    pub fn new(seed: u64) -> Self {
        SeededCoins {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl CoinSource for SeededCoins {
    fn flip(&mut self) -> bool {
        self.rng.random()
    }

    fn seed(&self) -> Option<u64> {
        Some(self.seed)
    }
}

/// Coins read from the bits of a fixed pattern, lowest bit first. Once the
/// pattern's 64 bits are used up every flip is `false`.
#[derive(Clone, Debug)]
pub struct PatternCoins {
    pattern: u64,
    used: u32,
}

impl PatternCoins {
    pub fn new(pattern: u64) -> Self {
        PatternCoins { pattern, used: 0 }
    }

    pub fn used(&self) -> u32 {
        self.used
    }
}

impl CoinSource for PatternCoins {
    fn flip(&mut self) -> bool {
        let bit = self.used < 64 && self.pattern >> self.used & 1 == 1;
        self.used += 1;
        bit
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Behavior {
    Truthful,
    Liar,
    Coin,
}

/// Everything the simulator needs to answer a question in one world.
struct World<'a, C: CoinSource> {
    assignment: &'a Assignment,
    ws: WordSemantics,
    mode: RandomMode,
    coins: &'a mut C,
}

impl<C: CoinSource> World<'_, C> {
    fn type_of(&self, god: usize) -> Result<GodType> {
        self.assignment.get(god).ok_or(Error::GodOutOfRange {
            god: god + 1,
            gods: self.assignment.len(),
        })
    }

    fn behavior_of(&mut self, god: usize) -> Result<Behavior> {
        Ok(match self.type_of(god)? {
            GodType::Truthful => Behavior::Truthful,
            GodType::Liar => Behavior::Liar,
            GodType::Random => match self.mode {
                RandomMode::Escaping => Behavior::Coin,
                RandomMode::Reliable => {
                    if self.coins.flip() {
                        Behavior::Truthful
                    } else {
                        Behavior::Liar
                    }
                }
            },
        })
    }

    fn answer_as(&mut self, behavior: Behavior, addressee: usize, node: &AskNode) -> Result<Word> {
        match behavior {
            // The outer answer is random, so the question's own value is never needed.
            Behavior::Coin => Ok(Word::from_bit(self.coins.flip())),
            Behavior::Truthful | Behavior::Liar => {
                let value = self.resolve(node, addressee, behavior)?;
                Ok(self.ws.word_for(value == (behavior == Behavior::Truthful)))
            }
        }
    }

    /// Truth value of `node` in this world. A Meta node about the addressee
    /// reuses the addressee's behavior for this question; any other random
    /// subject gets a fresh coin.
    fn resolve(&mut self, node: &AskNode, addressee: usize, addressee_behavior: Behavior) -> Result<bool> {
        match node {
            AskNode::Base(f) => f.eval(self.assignment),
            AskNode::Meta { subject, inner } => {
                let behavior = if *subject == addressee {
                    addressee_behavior
                } else {
                    self.behavior_of(*subject)?
                };
                Ok(self.answer_as(behavior, *subject, inner)? == Word::Chi)
            }
        }
    }

    fn answer(&mut self, god: usize, node: &AskNode) -> Result<Word> {
        let behavior = self.behavior_of(god)?;
        self.answer_as(behavior, god, node)
    }
}

/// The word `god` (0-based) answers to `node` in world `assignment`.
pub fn god_answer<C: CoinSource>(
    assignment: &Assignment,
    ws: WordSemantics,
    god: usize,
    node: &AskNode,
    coins: &mut C,
    mode: RandomMode,
) -> Result<Word> {
    World {
        assignment,
        ws,
        mode,
        coins,
    }
    .answer(god, node)
}

/// One row of the template check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplateCase {
    pub q: bool,
    pub god: GodType,
    pub chi_means_yes: bool,
    /// Whether the god's direct answer to `q` would be `χ`.
    pub inner_is_chi: bool,
    pub answer: Word,
    pub pass: bool,
}

impl TemplateCase {
    pub fn label(&self) -> String {
        let god = match self.god {
            GodType::Truthful => "𝒯",
            GodType::Liar => "ℱ",
            GodType::Random => "ℛ",
        };
        format!("q={}, γ={}, χ={}", self.q as u8, god, self.chi_means_yes as u8)
    }
}

impl fmt::Display for TemplateCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = |b: bool| if b { "=" } else { "≠" };
        write!(
            f,
            "{}: γ(q){}χ, γ(\"γ(q)=χ\"){}χ  {}",
            self.label(),
            rel(self.inner_is_chi),
            rel(self.answer == Word::Chi),
            if self.pass { "pass" } else { "FAIL" }
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplateReport {
    pub cases: Vec<TemplateCase>,
}

impl TemplateReport {
    pub fn all_pass(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }

    pub fn passed(&self) -> usize {
        self.cases.iter().filter(|c| c.pass).count()
    }
}

impl fmt::Display for TemplateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for case in &self.cases {
            writeln!(f, "{case}")?;
        }
        write!(f, "{}/{} pass", self.passed(), self.cases.len())
    }
}

/// The eight `(q, god type, meaning of χ)` cases, in the order
/// `q` descending, truthful before liar, `χ=1` before `χ=0`.
pub fn template_cases() -> Vec<(bool, GodType, WordSemantics)> {
    let mut out = Vec::new();
    for q in [true, false] {
        for god in [GodType::Truthful, GodType::Liar] {
            for ws in [WordSemantics::CHI_YES, WordSemantics::CHI_NO] {
                out.push((q, god, ws));
            }
        }
    }
    out
}

/// Checks that decoding a self-templated answer recovers `q` for every
/// non-random god and both meanings of `χ`.
pub fn template_theorem_check() -> TemplateReport {
    template_check_with(|world, ws, node, coins| god_answer(world, ws, 0, node, coins, RandomMode::Escaping))
}

/// Template check against an arbitrary answering function (used to mutation
/// test the check itself).
pub fn template_check_with(
    mut answer: impl FnMut(&Assignment, WordSemantics, &AskNode, &mut SeededCoins) -> Result<Word>,
) -> TemplateReport {
    let mut coins = SeededCoins::new(0);
    let cases = template_cases()
        .into_iter()
        .map(|(q, god, ws)| {
            let world = Assignment::new(vec![god]);
            let base = AskNode::Base(Formula::Const(q));
            let inner = answer(&world, ws, &base, &mut coins);
            let outer = answer(&world, ws, &AskNode::templated(0, Formula::Const(q)), &mut coins);
            // Both steps of the case analysis are checked: the direct answer
            // must follow the god's type, and the template must decode to q.
            let expected_inner = ws.word_for(q == (god == GodType::Truthful)) == Word::Chi;
            let (inner_is_chi, answer, pass) = match (inner, outer) {
                (Ok(i), Ok(o)) => {
                    let i = i == Word::Chi;
                    (i, o, i == expected_inner && decode_template(o) == q)
                }
                _ => (false, Word::Other, false),
            };
            TemplateCase {
                q,
                god,
                chi_means_yes: ws.chi_means_yes,
                inner_is_chi,
                answer,
                pass,
            }
        })
        .collect();
    TemplateReport { cases }
}

/// One ask in a transcript.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranscriptEntry {
    pub god: usize,
    pub ask: AskNode,
    pub word: Word,
}

/// Record of an episode, replayable from its header.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub spec: PuzzleSpec,
    pub mode: RandomMode,
    pub seed: Option<u64>,
    pub world: Option<(Assignment, WordSemantics)>,
    pub entries: Vec<TranscriptEntry>,
    pub declared: Option<Assignment>,
}

impl Transcript {
    pub fn new(spec: PuzzleSpec) -> Self {
        Transcript {
            spec,
            mode: RandomMode::Escaping,
            seed: None,
            world: None,
            entries: Vec::new(),
            declared: None,
        }
    }

    pub fn questions(&self) -> usize {
        self.entries.len()
    }
}

impl fmt::Display for Transcript {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "transcript v1")?;
        writeln!(
            f,
            "spec {} {} {}",
            self.spec.gods(),
            self.spec.random(),
            self.spec.truthful()
        )?;
        writeln!(f, "mode {}", self.mode)?;
        if let Some(seed) = self.seed {
            writeln!(f, "seed {seed}")?;
        }
        if let Some((world, ws)) = &self.world {
            let chi = if ws.chi_means_yes { "yes" } else { "no" };
            writeln!(f, "world {world} chi={chi}")?;
        }
        for entry in &self.entries {
            let god = entry.god + 1;
            match (&entry.ask, entry.ask.self_template_formula(entry.god)) {
                (_, Some(q)) => writeln!(f, "ask g{god} \"{q}\" -> {}", entry.word)?,
                (AskNode::Base(q), None) => writeln!(f, "ask g{god} raw \"{q}\" -> {}", entry.word)?,
                (other, None) => writeln!(f, "ask g{god} nested {other:?} -> {}", entry.word)?,
            }
        }
        if let Some(declared) = &self.declared {
            writeln!(f, "declare {declared}")?;
        }
        Ok(())
    }
}

impl FromStr for Transcript {
    type Err = Error;

    fn from_str(text: &str) -> Result<Transcript> {
        let err = |line: usize, message: &str| Error::StrategyFormat {
            line,
            column: 1,
            message: message.to_string(),
        };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, "transcript v1")) => {}
            _ => return Err(err(1, "expected header 'transcript v1'")),
        }
        let mut spec = None;
        let mut out: Option<Transcript> = None;
        for (i, line) in lines {
            let n = i + 1;
            let (keyword, rest) = line.split_once(' ').unwrap_or((line, ""));
            if keyword != "spec" && out.is_none() {
                let s: PuzzleSpec = spec.ok_or_else(|| err(n, "missing spec line"))?;
                out = Some(Transcript::new(s));
            }
            match keyword {
                "spec" => {
                    let nums: Vec<usize> = rest
                        .split_whitespace()
                        .map(|x| x.parse().map_err(|_| err(n, "bad spec number")))
                        .collect::<Result<_>>()?;
                    let [g, m, k] = nums[..] else {
                        return Err(err(n, "spec needs three numbers"));
                    };
                    spec = Some(PuzzleSpec::new(g, m, k)?);
                }
                "mode" => {
                    out.as_mut().unwrap().mode = rest.trim().parse()?;
                }
                "seed" => {
                    let t = out.as_mut().unwrap();
                    t.seed = Some(rest.trim().parse().map_err(|_| err(n, "bad seed"))?);
                }
                "world" => {
                    let t = out.as_mut().unwrap();
                    let (a, chi) = rest.split_once(' ').ok_or_else(|| err(n, "bad world line"))?;
                    let ws = match chi {
                        "chi=yes" => WordSemantics::CHI_YES,
                        "chi=no" => WordSemantics::CHI_NO,
                        _ => return Err(err(n, "expected chi=yes or chi=no")),
                    };
                    t.world = Some((a.parse()?, ws));
                }
                "ask" => {
                    let t = out.as_mut().unwrap();
                    let (head, word) = rest.rsplit_once(" -> ").ok_or_else(|| err(n, "missing ' -> '"))?;
                    let (god, body) = head.split_once(' ').ok_or_else(|| err(n, "bad ask line"))?;
                    let god: usize = god
                        .strip_prefix('g')
                        .and_then(|g| g.parse().ok())
                        .filter(|&g| g >= 1)
                        .ok_or_else(|| err(n, "bad god"))?;
                    let (raw, quoted) = match body.strip_prefix("raw ") {
                        Some(q) => (true, q),
                        None => (false, body),
                    };
                    let formula = quoted
                        .strip_prefix('"')
                        .and_then(|q| q.strip_suffix('"'))
                        .ok_or_else(|| err(n, "expected a quoted formula"))?;
                    let formula = Formula::parse(formula)?;
                    let ask = if raw {
                        AskNode::Base(formula)
                    } else {
                        AskNode::templated(god - 1, formula)
                    };
                    t.entries.push(TranscriptEntry {
                        god: god - 1,
                        ask,
                        word: word.trim().parse()?,
                    });
                }
                "declare" => {
                    out.as_mut().unwrap().declared = Some(rest.trim().parse()?);
                }
                _ => return Err(err(n, "unknown line")),
            }
        }
        match out {
            Some(t) => Ok(t),
            None => spec.map(Transcript::new).ok_or_else(|| err(1, "missing spec line")),
        }
    }
}

/// Outcome of a simulated episode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Episode {
    pub declared: Assignment,
    pub questions: usize,
    pub transcript: Transcript,
}

impl Episode {
    pub fn correct(&self) -> bool {
        self.transcript
            .world
            .as_ref()
            .is_some_and(|(w, _)| *w == self.declared)
    }
}

/// Plays `strategy` against the world `(assignment, ws)`: every node's
/// question is put to its god through the self-template and the answer word
/// decoded to pick a branch.
pub fn run_episode<C: CoinSource>(
    spec: PuzzleSpec,
    assignment: &Assignment,
    ws: WordSemantics,
    strategy: &StrategyTree,
    coins: &mut C,
    mode: RandomMode,
) -> Result<Episode> {
    spec.check(assignment)?;
    let mut transcript = Transcript::new(spec);
    transcript.mode = mode;
    transcript.seed = coins.seed();
    transcript.world = Some((assignment.clone(), ws));
    let mut node = strategy;
    let mut path = String::from("root");
    loop {
        match node {
            StrategyTree::Leaf(declared) => {
                transcript.declared = Some(declared.clone());
                return Ok(Episode {
                    declared: declared.clone(),
                    questions: transcript.entries.len(),
                    transcript,
                });
            }
            StrategyTree::Node { god, question, yes, no } => {
                if *god >= spec.gods() {
                    return Err(Error::Strategy {
                        path,
                        message: format!("god g{} is out of range", god + 1),
                    });
                }
                let ask = AskNode::templated(*god, question.clone());
                let word = god_answer(assignment, ws, *god, &ask, coins, mode)?;
                transcript.entries.push(TranscriptEntry { god: *god, ask, word });
                if decode_template(word) {
                    path.push_str(".true");
                    node = yes;
                } else {
                    path.push_str(".false");
                    node = no;
                }
            }
        }
    }
}

/// Re-runs the episode described by a transcript's header lines. For a
/// transcript produced by [`run_episode`] the result is identical to it.
pub fn replay(transcript: &Transcript, strategy: &StrategyTree) -> Result<Transcript> {
    let (world, ws) = transcript
        .world
        .clone()
        .ok_or_else(|| Error::Domain("transcript has no world line".into()))?;
    let seed = transcript
        .seed
        .ok_or_else(|| Error::Domain("transcript has no seed line".into()))?;
    let mut coins = SeededCoins::new(seed);
    Ok(run_episode(transcript.spec, &world, ws, strategy, &mut coins, transcript.mode)?.transcript)
}
