//! Puzzle specifications, god types, assignments and their canonical enumeration.
//!
//! Gods are indexed from 0 internally. Every user-facing rendering (formula
//! text, strategy files, transcripts, the HTTP API) uses 1-based `g1..gn`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The three kinds of god. The derived order (`Truthful < Liar < Random`) is
/// the canonical type order used by [`Enumeration`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GodType {
    Truthful,
    Liar,
    Random,
}

impl GodType {
    pub const ALL: [GodType; 3] = [GodType::Truthful, GodType::Liar, GodType::Random];

    /// Single-letter symbol: `T`, `F` (false / liar) or `R`.
    pub fn symbol(self) -> char {
        match self {
            GodType::Truthful => 'T',
            GodType::Liar => 'F',
            GodType::Random => 'R',
        }
    }

    pub fn from_symbol(c: char) -> Option<GodType> {
        match c {
            'T' => Some(GodType::Truthful),
            'F' => Some(GodType::Liar),
            'R' => Some(GodType::Random),
            _ => None,
        }
    }

    fn rank(self) -> usize {
        self as usize
    }
}

impl fmt::Display for GodType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// An `(n, m, k)` puzzle: `n` gods of which `m` are random, `k` truthful and
/// the remaining `n - m - k` lying.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PuzzleSpec {
    gods: usize,
    random: usize,
    truthful: usize,
}

impl PuzzleSpec {
    pub fn new(gods: usize, random: usize, truthful: usize) -> Result<Self> {
        let invalid = |reason| Error::InvalidSpec {
            gods,
            random,
            truthful,
            reason,
        };
        if gods == 0 {
            return Err(invalid("a puzzle needs at least one god"));
        }
        if random.checked_add(truthful).is_none_or(|s| s > gods) {
            return Err(invalid("random + truthful exceeds the number of gods"));
        }
        Ok(PuzzleSpec {
            gods,
            random,
            truthful,
        })
    }

    /// The classic three-god puzzle: one truthful, one liar, one random.
    pub fn classic() -> Self {
        PuzzleSpec {
            gods: 3,
            random: 1,
            truthful: 1,
        }
    }

    /// Five gods, two of them random and three truthful.
    pub fn five_gods() -> Self {
        PuzzleSpec {
            gods: 5,
            random: 2,
            truthful: 3,
        }
    }

    pub fn gods(&self) -> usize {
        self.gods
    }

    pub fn random(&self) -> usize {
        self.random
    }

    pub fn truthful(&self) -> usize {
        self.truthful
    }

    pub fn liars(&self) -> usize {
        self.gods - self.random - self.truthful
    }

    pub fn non_random(&self) -> usize {
        self.gods - self.random
    }

    /// Closed-form solvability: strictly fewer random than non-random gods.
    pub fn meets_solvability_criterion(&self) -> bool {
        self.random < self.non_random()
    }

    pub fn count_of(&self, ty: GodType) -> usize {
        match ty {
            GodType::Truthful => self.truthful,
            GodType::Liar => self.liars(),
            GodType::Random => self.random,
        }
    }

    /// `n! / (m! k! (n-m-k)!)`.
    pub fn possibility_count(&self) -> u128 {
        multinomial([self.truthful, self.liars(), self.random])
    }

    pub fn enumerate(&self) -> Vec<Assignment> {
        let mut out = Vec::new();
        let mut remaining = [self.truthful, self.liars(), self.random];
        let mut current = Vec::with_capacity(self.gods);
        enumerate_into(&mut remaining, &mut current, self.gods, &mut out);
        out
    }

    /// Position of `assignment` in [`PuzzleSpec::enumerate`].
    pub fn index_of(&self, assignment: &Assignment) -> Result<usize> {
        self.check(assignment)?;
        let mut remaining = [self.truthful, self.liars(), self.random];
        let mut index: u128 = 0;
        for &ty in &assignment.0 {
            for smaller in GodType::ALL.iter().take(ty.rank()) {
                let r = smaller.rank();
                if remaining[r] > 0 {
                    remaining[r] -= 1;
                    index += multinomial(remaining);
                    remaining[r] += 1;
                }
            }
            remaining[ty.rank()] -= 1;
        }
        Ok(index as usize)
    }

    /// Checks that an assignment has this spec's length and type counts.
    pub fn check(&self, assignment: &Assignment) -> Result<()> {
        let ok = assignment.len() == self.gods
            && GodType::ALL
                .iter()
                .all(|&ty| assignment.count(ty) == self.count_of(ty));
        if ok {
            Ok(())
        } else {
            Err(Error::AssignmentMismatch {
                assignment: assignment.to_string(),
                spec: self.to_string(),
            })
        }
    }
}

impl fmt::Display for PuzzleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.gods, self.random, self.truthful)
    }
}

fn enumerate_into(
    remaining: &mut [usize; 3],
    current: &mut Vec<GodType>,
    gods: usize,
    out: &mut Vec<Assignment>,
) {
    if current.len() == gods {
        out.push(Assignment(current.clone()));
        return;
    }
    for ty in GodType::ALL {
        let r = ty.rank();
        if remaining[r] == 0 {
            continue;
        }
        remaining[r] -= 1;
        current.push(ty);
        enumerate_into(remaining, current, gods, out);
        current.pop();
        remaining[r] += 1;
    }
}

fn multinomial(counts: [usize; 3]) -> u128 {
    // Built as a product of binomials to stay exact without factorial overflow.
    let mut total = 0usize;
    let mut acc: u128 = 1;
    for c in counts {
        for i in 1..=c {
            total += 1;
            acc = acc * total as u128 / i as u128;
        }
    }
    acc
}

/// One god type per position.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Assignment(Vec<GodType>);

impl Assignment {
    pub fn new(types: Vec<GodType>) -> Self {
        Assignment(types)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Type of the god at 0-based position `god`.
    pub fn get(&self, god: usize) -> Option<GodType> {
        self.0.get(god).copied()
    }

    pub fn types(&self) -> &[GodType] {
        &self.0
    }

    pub fn count(&self, ty: GodType) -> usize {
        self.0.iter().filter(|&&t| t == ty).count()
    }
}

impl std::ops::Index<usize> for Assignment {
    type Output = GodType;

    fn index(&self, god: usize) -> &GodType {
        &self.0[god]
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ty in &self.0 {
            write!(f, "{}", ty.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for Assignment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::InvalidAssignment(s.to_string()));
        }
        s.chars()
            .map(GodType::from_symbol)
            .collect::<Option<Vec<_>>>()
            .map(Assignment)
            .ok_or_else(|| Error::InvalidAssignment(s.to_string()))
    }
}

/// The canonical enumeration of a spec, with per-god lookup masks.
#[derive(Clone, Debug)]
pub struct Enumeration {
    spec: PuzzleSpec,
    assignments: Vec<Assignment>,
    random_at: Vec<PossibilitySet>,
}

impl Enumeration {
    pub fn new(spec: PuzzleSpec) -> Self {
        let assignments = spec.enumerate();
        let random_at = (0..spec.gods())
            .map(|god| {
                PossibilitySet::from_indices(
                    assignments.len(),
                    assignments
                        .iter()
                        .enumerate()
                        .filter(|(_, a)| a[god] == GodType::Random)
                        .map(|(i, _)| i),
                )
            })
            .collect();
        Enumeration {
            spec,
            assignments,
            random_at,
        }
    }

    pub fn spec(&self) -> PuzzleSpec {
        self.spec
    }

    pub fn len(&self) -> usize {
        self.assignments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignments.is_empty()
    }

    pub fn assignments(&self) -> &[Assignment] {
        &self.assignments
    }

    pub fn get(&self, index: usize) -> Option<&Assignment> {
        self.assignments.get(index)
    }

    pub fn index_of(&self, assignment: &Assignment) -> Result<usize> {
        self.spec.index_of(assignment)
    }

    pub fn full(&self) -> PossibilitySet {
        PossibilitySet::full(self.len())
    }

    /// Assignments in which `god` (0-based) is random.
    pub fn random_at(&self, god: usize) -> Result<&PossibilitySet> {
        self.random_at.get(god).ok_or(Error::GodOutOfRange {
            god: god + 1,
            gods: self.spec.gods(),
        })
    }

    /// Builds a set from assignment strings like `"RTF"`.
    pub fn set_of(&self, assignments: &[&str]) -> Result<PossibilitySet> {
        let mut set = PossibilitySet::empty(self.len());
        for s in assignments {
            let a: Assignment = s.parse()?;
            set.insert(self.index_of(&a)?);
        }
        Ok(set)
    }

    /// Renders the members of `set` as assignment strings in canonical order.
    pub fn render(&self, set: &PossibilitySet) -> Vec<String> {
        set.iter().map(|i| self.assignments[i].to_string()).collect()
    }
}

/// A subset of a spec's enumeration, stored as a bitset over indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PossibilitySet {
    universe: usize,
    words: Vec<u64>,
}

impl PossibilitySet {
    pub fn empty(universe: usize) -> Self {
        PossibilitySet {
            universe,
            words: vec![0; universe.div_ceil(64)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut set = Self::empty(universe);
        for i in 0..universe {
            set.insert(i);
        }
        set
    }

    pub fn from_indices(universe: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut set = Self::empty(universe);
        for i in indices {
            set.insert(i);
        }
        set
    }

    /// Size of the enumeration this set indexes into.
    pub fn universe(&self) -> usize {
        self.universe
    }

    /// Panics if `index` is outside the universe.
    pub fn insert(&mut self, index: usize) {
        assert!(index < self.universe, "index {index} outside universe {}", self.universe);
        self.words[index / 64] |= 1 << (index % 64);
    }

    pub fn remove(&mut self, index: usize) {
        if index < self.universe {
            self.words[index / 64] &= !(1 << (index % 64));
        }
    }

    pub fn contains(&self, index: usize) -> bool {
        index < self.universe && self.words[index / 64] & (1 << (index % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.universe).filter(move |&i| self.contains(i))
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    fn zip_with(&self, other: &Self, op: impl Fn(u64, u64) -> u64) -> Self {
        assert_eq!(self.universe, other.universe, "sets over different enumerations");
        PossibilitySet {
            universe: self.universe,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a & !b)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    /// Low 128 bits as a mask; `None` when the universe is larger.
    pub fn to_mask(&self) -> Option<u128> {
        if self.universe > 128 {
            return None;
        }
        let lo = self.words.first().copied().unwrap_or(0) as u128;
        let hi = self.words.get(1).copied().unwrap_or(0) as u128;
        Some(lo | hi << 64)
    }

    pub fn from_mask(universe: usize, mask: u128) -> Self {
        Self::from_indices(universe, (0..universe.min(128)).filter(|i| mask >> i & 1 == 1))
    }
}
