//! Exhaustive strategy search over knowledge states.
//!
//! A move is a god `i` and a set `Q` of assignments where `i` is not random.
//! Asking `i` the question whose truth set is `Q` leaves `Q ∪ R` on a yes and
//! `(N \ Q) ∪ R` on a no, where `R` and `N` are the random and non-random
//! members at `i`. Only moves whose children are both strictly smaller are
//! considered. `Q` and `N \ Q` give the same pair of children, so only the
//! `Q` holding the lowest member of `N` is tried. Moves are tried smallest
//! god first, then in increasing bitmask order of `Q`; the first best move
//! found wins.
//!
//! Sets are `u128` masks, so searches are limited to 128 assignments.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::model::{Enumeration, GodType, PossibilitySet, PuzzleSpec};
use crate::simulator::RandomMode;
use crate::strategy::{self, Rational, StrategyTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Abort after this many distinct states have been expanded.
    pub node_budget: u64,
    /// Treat a state as dead as soon as two of its members cannot be told
    /// apart by any god (each god is random in one of them).
    pub prune_inseparable: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            node_budget: 5_000_000,
            prune_inseparable: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchValue {
    Depth(u32),
    Expected(Rational),
    Unsolvable,
}

#[derive(Clone, Debug)]
pub struct SearchResult {
    pub value: SearchValue,
    pub witness: Option<StrategyTree>,
    pub nodes_explored: u64,
    /// False when the value is only a bound found after the budget ran out.
    pub optimal: bool,
}

/// Outcome of [`exists_within`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundedSearch {
    pub exists: bool,
    pub states: u64,
    pub moves: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Move {
    god: usize,
    q: u128,
}

struct Space {
    enumeration: Arc<Enumeration>,
    /// Per god, members where that god is random.
    random: Vec<u128>,
    /// Per assignment, bitmask of gods that are not random.
    steady: Vec<u64>,
    full: u128,
    config: SearchConfig,
    nodes: u64,
}

fn bits(mask: u128) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            i
        })
    })
}

fn scatter(x: u64, positions: &[usize]) -> u128 {
    positions
        .iter()
        .enumerate()
        .filter(|(j, _)| x >> j & 1 == 1)
        .fold(0, |acc, (_, &p)| acc | 1u128 << p)
}

fn ceil_log2(n: u32) -> u32 {
    32 - (n.max(1) - 1).leading_zeros()
}

impl Space {
    fn new(spec: PuzzleSpec, config: SearchConfig) -> Result<Self> {
        if spec.possibility_count() > 128 {
            return Err(Error::Domain(format!(
                "{spec} has {} assignments; search supports at most 128",
                spec.possibility_count()
            )));
        }
        if spec.gods() > 64 {
            return Err(Error::Domain("search supports at most 64 gods".into()));
        }
        let enumeration = Arc::new(Enumeration::new(spec));
        let random = (0..spec.gods())
            .map(|g| {
                enumeration
                    .random_at(g)
                    .map(|s| s.to_mask().expect("at most 128 members"))
            })
            .collect::<Result<_>>()?;
        let steady = enumeration
            .assignments()
            .iter()
            .map(|a| {
                a.types()
                    .iter()
                    .enumerate()
                    .filter(|(_, &t)| t != GodType::Random)
                    .fold(0u64, |acc, (g, _)| acc | 1 << g)
            })
            .collect();
        let full = enumeration.full().to_mask().expect("at most 128 members");
        Ok(Space {
            enumeration,
            random,
            steady,
            full,
            config,
            nodes: 0,
        })
    }

    fn gods(&self) -> usize {
        self.random.len()
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.config.node_budget {
            return Err(Error::BudgetExceeded {
                budget: self.config.node_budget,
            });
        }
        Ok(())
    }

    fn separable(&self, s: u128) -> bool {
        let members: Vec<usize> = bits(s).collect();
        members.iter().enumerate().all(|(i, &a)| {
            members[i + 1..]
                .iter()
                .all(|&b| self.steady[a] & self.steady[b] != 0)
        })
    }

    /// Non-random members at `god`: the lowest one and the positions of
    /// the rest. `None` when fewer than two, since no move splits them.
    fn move_basis(&self, s: u128, god: usize) -> Result<Option<(u128, Vec<usize>)>> {
        let nonrandom = s & !self.random[god];
        let k = nonrandom.count_ones();
        if k < 2 {
            return Ok(None);
        }
        if k - 1 > 63 {
            return Err(Error::BudgetExceeded {
                budget: self.config.node_budget,
            });
        }
        let low = nonrandom & nonrandom.wrapping_neg();
        Ok(Some((low, bits(nonrandom ^ low).collect())))
    }

    /// Canonical moves at `god` in state `s`, in increasing bitmask order.
    fn moves(&self, s: u128, god: usize) -> Result<impl Iterator<Item = u128>> {
        let basis = self.move_basis(s, god)?;
        let (low, rest, count) = match basis {
            Some((low, rest)) => {
                let count = (1u64 << rest.len()) - 1;
                (low, rest, count)
            }
            None => (0, Vec::new(), 0),
        };
        Ok((0..count).map(move |x| low | scatter(x, &rest)))
    }

    /// Canonical moves at `god` in state `s`, smallest `Q` first.
    fn moves_by_size(&self, s: u128, god: usize) -> Result<impl Iterator<Item = u128>> {
        let (low, rest) = self.move_basis(s, god)?.unwrap_or((0, Vec::new()));
        let width = rest.len() as u32;
        // Every size short of taking all of `rest`, each in increasing order
        // (Gosper's next-combination step).
        let sizes = if low == 0 { 0..0 } else { 0..width };
        Ok(sizes.flat_map(move |size| {
            let last = if size == 0 { 0 } else { ((1u64 << size) - 1) << (width - size) };
            let mut next = Some((1u64 << size) - 1);
            std::iter::from_fn(move || {
                let x = next?;
                next = (x != last).then(|| {
                    let c = x & x.wrapping_neg();
                    let r = x + c;
                    (((r ^ x) >> 2) / c) | r
                });
                Some(x)
            })
        })
        .map(move |x| low | scatter(x, &rest)))
    }

    fn children(&self, s: u128, m: Move) -> (u128, u128) {
        let random = s & self.random[m.god];
        let nonrandom = s & !self.random[m.god];
        (m.q | random, (nonrandom & !m.q) | random)
    }

    fn formula(&self, q: u128) -> Formula {
        let set = PossibilitySet::from_mask(self.enumeration.len(), q);
        Formula::dnf_of_set(&self.enumeration, &set)
    }

    fn leaf(&self, s: u128) -> StrategyTree {
        let i = s.trailing_zeros() as usize;
        StrategyTree::leaf(self.enumeration.assignments()[i].clone())
    }
}

// ---- worst case -------------------------------------------------------------

struct Worst {
    space: Space,
    memo: HashMap<u128, (Option<u32>, Option<Move>)>,
}

impl Worst {
    fn value(&mut self, s: u128) -> Result<Option<u32>> {
        let size = s.count_ones();
        if size <= 1 {
            return Ok(Some(0));
        }
        if let Some(&(v, _)) = self.memo.get(&s) {
            return Ok(v);
        }
        self.space.tick()?;
        if self.space.config.prune_inseparable && !self.space.separable(s) {
            self.memo.insert(s, (None, None));
            return Ok(None);
        }
        let floor = ceil_log2(size);
        let mut best: Option<(u32, Move)> = None;
        'gods: for god in 0..self.space.gods() {
            for q in self.space.moves(s, god)? {
                let m = Move { god, q };
                let (yes, no) = self.space.children(s, m);
                let Some(vy) = self.value(yes)? else { continue };
                if best.is_some_and(|(b, _)| 1 + vy >= b) {
                    continue;
                }
                let Some(vn) = self.value(no)? else { continue };
                let v = 1 + vy.max(vn);
                if best.is_none_or(|(b, _)| v < b) {
                    best = Some((v, m));
                    if v == floor {
                        break 'gods;
                    }
                }
            }
        }
        let entry = (best.map(|b| b.0), best.map(|b| b.1));
        self.memo.insert(s, entry);
        Ok(entry.0)
    }

    fn witness(&self, s: u128) -> StrategyTree {
        if s.count_ones() == 1 {
            return self.space.leaf(s);
        }
        let m = self.memo[&s].1.expect("solved state has a move");
        let (yes, no) = self.space.children(s, m);
        StrategyTree::node(m.god, self.space.formula(m.q), self.witness(yes), self.witness(no))
    }
}

/// Fewest questions that always suffice, with a witness tree.
pub fn min_worst_case(spec: PuzzleSpec, config: SearchConfig) -> Result<SearchResult> {
    let space = Space::new(spec, config)?;
    let full = space.full;
    let mut search = Worst {
        space,
        memo: HashMap::new(),
    };
    let value = search.value(full)?;
    Ok(SearchResult {
        witness: value.map(|_| search.witness(full)),
        value: value.map_or(SearchValue::Unsolvable, SearchValue::Depth),
        nodes_explored: search.space.nodes,
        optimal: true,
    })
}

/// Whether some strategy of depth at most `depth` solves `spec`. Tries every
/// move at every level; no bounds or pruning beyond the move canonicalization.
pub fn exists_within(spec: PuzzleSpec, depth: u32, config: SearchConfig) -> Result<BoundedSearch> {
    fn go(space: &mut Space, memo: &mut HashMap<(u128, u32), bool>, moves: &mut u64, s: u128, d: u32) -> Result<bool> {
        if s.count_ones() <= 1 {
            return Ok(true);
        }
        if d == 0 {
            return Ok(false);
        }
        if let Some(&v) = memo.get(&(s, d)) {
            return Ok(v);
        }
        space.tick()?;
        let mut found = false;
        'gods: for god in 0..space.gods() {
            for q in space.moves(s, god)? {
                *moves += 1;
                let (yes, no) = space.children(s, Move { god, q });
                if go(space, memo, moves, yes, d - 1)? && go(space, memo, moves, no, d - 1)? {
                    found = true;
                    break 'gods;
                }
            }
        }
        memo.insert((s, d), found);
        Ok(found)
    }
    let mut space = Space::new(spec, config)?;
    let mut moves = 0;
    let full = space.full;
    let exists = go(&mut space, &mut HashMap::new(), &mut moves, full, depth)?;
    Ok(BoundedSearch {
        exists,
        states: space.nodes,
        moves,
    })
}

// ---- feasibility --------------------------------------------------------------

/// Whether any finite strategy solves `spec`, decided by search. Moves are
/// tried in order of increasing `|Q|`. A spec with no non-random god is
/// reported unsolvable even when it has a single assignment: nobody can be
/// questioned.
pub fn solvable_by_search(spec: PuzzleSpec, config: SearchConfig) -> Result<bool> {
    fn go(space: &mut Space, memo: &mut HashMap<u128, bool>, s: u128) -> Result<bool> {
        if s.count_ones() <= 1 {
            return Ok(true);
        }
        if let Some(&v) = memo.get(&s) {
            return Ok(v);
        }
        space.tick()?;
        if space.config.prune_inseparable && !space.separable(s) {
            memo.insert(s, false);
            return Ok(false);
        }
        let mut found = false;
        'gods: for god in 0..space.gods() {
            for q in space.moves_by_size(s, god)? {
                let (yes, no) = space.children(s, Move { god, q });
                if go(space, memo, yes)? && go(space, memo, no)? {
                    found = true;
                    break 'gods;
                }
            }
        }
        memo.insert(s, found);
        Ok(found)
    }
    if spec.non_random() == 0 {
        return Ok(false);
    }
    let mut space = Space::new(spec, config)?;
    let full = space.full;
    go(&mut space, &mut HashMap::new(), full)
}

// ---- expectation ----------------------------------------------------------------

/// Members carry weight `2^-e`. Values are stored for exponent vectors
/// shifted to minimum 0 and scaled back on lookup.
type ExpKey = (u128, Vec<u8>);

struct Expect {
    space: Space,
    memo: HashMap<ExpKey, (Option<Rational>, Option<Move>)>,
}

fn weight(exps: &[u8]) -> Rational {
    exps.iter().map(|&e| Rational::new(1, 1i64 << e)).sum()
}

/// Lower bound on the weighted cost of a state: at least one question, and
/// at least the entropy of the weights in bits.
fn lower_bound(exps: &[u8]) -> f64 {
    if exps.len() <= 1 {
        return 0.0;
    }
    let ws: Vec<f64> = exps.iter().map(|&e| (-(e as f64)).exp2()).collect();
    let total: f64 = ws.iter().sum();
    let entropy: f64 = ws.iter().map(|w| -(w / total) * (w / total).log2()).sum();
    total * entropy.max(1.0)
}

fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

impl Expect {
    /// Exponents of the children of move `m`: random members gain one.
    fn split(&self, s: u128, exps: &[u8], m: Move) -> ((u128, Vec<u8>), (u128, Vec<u8>)) {
        let (yes, no) = self.space.children(s, m);
        let random = self.space.random[m.god];
        let pick = |child: u128| {
            bits(s)
                .zip(exps)
                .filter(|(i, _)| child >> i & 1 == 1)
                .map(|(i, &e)| if random >> i & 1 == 1 { e + 1 } else { e })
                .collect::<Vec<u8>>()
        };
        ((yes, pick(yes)), (no, pick(no)))
    }

    /// Weighted cost `Σ w_a · E[questions | a]` of the best strategy.
    fn value(&mut self, s: u128, exps: &[u8]) -> Result<Option<Rational>> {
        if s.count_ones() <= 1 {
            return Ok(Some(Rational::from_integer(0)));
        }
        let shift = *exps.iter().min().expect("non-empty");
        let scale = Rational::new(1, 1i64 << shift);
        let key: ExpKey = (s, exps.iter().map(|e| e - shift).collect());
        if let Some((v, _)) = self.memo.get(&key) {
            return Ok(v.map(|v| v * scale));
        }
        self.space.tick()?;
        if self.space.config.prune_inseparable && !self.space.separable(s) {
            self.memo.insert(key, (None, None));
            return Ok(None);
        }
        if key.1.iter().any(|&e| e > 48) {
            return Err(Error::BudgetExceeded {
                budget: self.space.config.node_budget,
            });
        }
        let exps = key.1.clone();
        let total = weight(&exps);
        let mut best: Option<(Rational, Move)> = None;
        for god in 0..self.space.gods() {
            for q in self.space.moves(s, god)? {
                let m = Move { god, q };
                let ((yes, ey), (no, en)) = self.split(s, &exps, m);
                let bound = |partial: f64, best: &Option<(Rational, Move)>| {
                    best.as_ref().is_some_and(|(b, _)| partial > to_f64(*b) + 1e-9)
                };
                if bound(to_f64(total) + lower_bound(&ey) + lower_bound(&en), &best) {
                    continue;
                }
                let Some(hy) = self.value(yes, &ey)? else { continue };
                if bound(to_f64(total + hy) + lower_bound(&en), &best) {
                    continue;
                }
                let Some(hn) = self.value(no, &en)? else { continue };
                let v = total + hy + hn;
                if best.as_ref().is_none_or(|(b, _)| v < *b) {
                    best = Some((v, m));
                }
            }
        }
        let entry = (best.map(|b| b.0), best.map(|b| b.1));
        self.memo.insert(key, entry);
        Ok(entry.0.map(|v| v * scale))
    }

    fn witness(&self, s: u128, exps: &[u8]) -> StrategyTree {
        if s.count_ones() == 1 {
            return self.space.leaf(s);
        }
        let shift = *exps.iter().min().expect("non-empty");
        let key: ExpKey = (s, exps.iter().map(|e| e - shift).collect());
        let m = self.memo[&key].1.expect("solved state has a move");
        let ((yes, ey), (no, en)) = self.split(s, exps, m);
        StrategyTree::node(m.god, self.space.formula(m.q), self.witness(yes, &ey), self.witness(no, &en))
    }
}

/// Least expected number of questions under a uniform prior with random
/// gods answering by fair coin. If the budget runs out, falls back to the
/// best of the known strategies for the spec and marks the result as not
/// optimal.
pub fn min_expected(spec: PuzzleSpec, config: SearchConfig) -> Result<SearchResult> {
    let space = Space::new(spec, config)?;
    let full = space.full;
    let count = full.count_ones();
    let mut search = Expect {
        space,
        memo: HashMap::new(),
    };
    let zeros = vec![0u8; count as usize];
    match search.value(full, &zeros) {
        Ok(value) => Ok(SearchResult {
            witness: value.map(|_| search.witness(full, &zeros)),
            value: value.map_or(SearchValue::Unsolvable, |v| {
                SearchValue::Expected(v / Rational::from_integer(count as i64))
            }),
            nodes_explored: search.space.nodes,
            optimal: true,
        }),
        Err(Error::BudgetExceeded { .. }) => fallback(spec, search.space.nodes),
        Err(e) => Err(e),
    }
}

fn fallback(spec: PuzzleSpec, nodes: u64) -> Result<SearchResult> {
    let mut candidates: Vec<StrategyTree> = strategy::builtins()
        .into_iter()
        .filter(|b| b.spec == spec)
        .map(|b| b.tree)
        .collect();
    if let Ok(tree) = strategy::constructive_solve(spec) {
        candidates.push(tree);
    }
    let mut best: Option<(Rational, StrategyTree)> = None;
    for tree in candidates {
        let report = strategy::verify(&tree, spec, RandomMode::Escaping)?;
        if report.correct && best.as_ref().is_none_or(|(b, _)| report.expected < *b) {
            best = Some((report.expected, tree));
        }
    }
    let (value, witness) = match best {
        Some((v, t)) => (SearchValue::Expected(v), Some(t)),
        None => (SearchValue::Unsolvable, None),
    };
    Ok(SearchResult {
        value,
        witness,
        nodes_explored: nodes,
        optimal: false,
    })
}
