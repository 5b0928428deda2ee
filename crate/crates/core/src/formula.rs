//! Boolean formulas over god-type literals.
//!
//! Text grammar (whitespace insignificant):
//!
//! ```text
//! or      := and ('|' and)*
//! and     := unary ('&' unary)*
//! unary   := '!' unary | atom
//! atom    := '(' or ')' | 'true' | 'false' | literal
//! literal := 'g' digits ('=' | '!=') ('T' | 'F' | 'R')
//! ```

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{Assignment, Enumeration, GodType, PossibilitySet, PuzzleSpec};

/// `g<i> = T` or `g<i> != T`. `god` is 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub god: usize,
    pub ty: GodType,
    pub negated: bool,
}

impl Literal {
    pub fn eval(&self, assignment: &Assignment) -> Result<bool> {
        let actual = assignment.get(self.god).ok_or(Error::GodOutOfRange {
            god: self.god + 1,
            gods: assignment.len(),
        })?;
        Ok((actual == self.ty) != self.negated)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.negated { "!=" } else { "=" };
        write!(f, "g{}{}{}", self.god + 1, op, self.ty)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Const(bool),
    Lit(Literal),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

impl Formula {
    /// `g<god+1> = ty`.
    pub fn is(god: usize, ty: GodType) -> Formula {
        Formula::Lit(Literal {
            god,
            ty,
            negated: false,
        })
    }

    /// `g<god+1> != ty`.
    pub fn is_not(god: usize, ty: GodType) -> Formula {
        Formula::Lit(Literal {
            god,
            ty,
            negated: true,
        })
    }

    pub fn negate(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    /// Conjunction fixing every god to its type in `assignment`.
    pub fn conjunct(assignment: &Assignment) -> Formula {
        Formula::And(
            assignment
                .types()
                .iter()
                .enumerate()
                .map(|(god, &ty)| Formula::is(god, ty))
                .collect(),
        )
    }

    /// Disjunction of complete conjuncts, in the given order. Empty input is `false`.
    pub fn dnf_of<'a>(assignments: impl IntoIterator<Item = &'a Assignment>) -> Formula {
        let conjuncts: Vec<Formula> = assignments.into_iter().map(Formula::conjunct).collect();
        if conjuncts.is_empty() {
            Formula::Const(false)
        } else {
            Formula::Or(conjuncts)
        }
    }

    /// Disjunction of the members of `set`, in canonical order.
    pub fn dnf_of_set(enumeration: &Enumeration, set: &PossibilitySet) -> Formula {
        Formula::dnf_of(set.iter().map(|i| &enumeration.assignments()[i]))
    }

    pub fn parse(text: &str) -> Result<Formula> {
        Parser::new(text).parse()
    }

    pub fn eval(&self, assignment: &Assignment) -> Result<bool> {
        Ok(match self {
            Formula::Const(b) => *b,
            Formula::Lit(lit) => lit.eval(assignment)?,
            Formula::Not(inner) => !inner.eval(assignment)?,
            Formula::And(items) => {
                // evaluate every item so that range errors are never masked
                let mut all = true;
                for item in items {
                    all &= item.eval(assignment)?;
                }
                all
            }
            Formula::Or(items) => {
                let mut any = false;
                for item in items {
                    any |= item.eval(assignment)?;
                }
                any
            }
        })
    }

    /// Largest 0-based god index mentioned, if any.
    pub fn max_god(&self) -> Option<usize> {
        match self {
            Formula::Const(_) => None,
            Formula::Lit(lit) => Some(lit.god),
            Formula::Not(inner) => inner.max_god(),
            Formula::And(items) | Formula::Or(items) => items.iter().filter_map(|f| f.max_god()).max(),
        }
    }

    /// Fails if the formula mentions a god outside `spec`.
    pub fn check_gods(&self, spec: PuzzleSpec) -> Result<()> {
        match self.max_god() {
            Some(god) if god >= spec.gods() => Err(Error::GodOutOfRange {
                god: god + 1,
                gods: spec.gods(),
            }),
            _ => Ok(()),
        }
    }

    pub fn truth_set(&self, enumeration: &Enumeration) -> Result<PossibilitySet> {
        self.check_gods(enumeration.spec())?;
        let mut set = PossibilitySet::empty(enumeration.len());
        for (i, a) in enumeration.assignments().iter().enumerate() {
            if self.eval(a)? {
                set.insert(i);
            }
        }
        Ok(set)
    }

    /// Disjunctive normal form over `spec` whose conjuncts are complete
    /// assignments, deduplicated and in canonical enumeration order.
    ///
    /// Works syntactically: negations are pushed to the literals, `!=`
    /// literals become disjunctions over the other two types, conjunctions
    /// are distributed as partial assignments, and each partial assignment is
    /// then completed against the spec's type counts.
    pub fn to_dnf(&self, spec: PuzzleSpec) -> Result<Formula> {
        self.check_gods(spec)?;
        let partials = dnf_partials(self, false, spec.gods());
        let mut complete: BTreeSet<(usize, Assignment)> = BTreeSet::new();
        for partial in &partials {
            for a in complete_partial(partial, spec) {
                let index = spec.index_of(&a)?;
                complete.insert((index, a));
            }
        }
        Ok(Formula::dnf_of(complete.iter().map(|(_, a)| a)))
    }

    /// The conjuncts of a formula already in complete-assignment DNF.
    pub fn dnf_conjuncts(&self) -> Option<Vec<Assignment>> {
        fn conjunct(f: &Formula) -> Option<Assignment> {
            let Formula::And(lits) = f else { return None };
            let mut types = vec![None; lits.len()];
            for lit in lits {
                match lit {
                    Formula::Lit(Literal {
                        god,
                        ty,
                        negated: false,
                    }) if *god < types.len() && types[*god].is_none() => types[*god] = Some(*ty),
                    _ => return None,
                }
            }
            types.into_iter().collect::<Option<Vec<_>>>().map(Assignment::new)
        }
        match self {
            Formula::Const(false) => Some(Vec::new()),
            Formula::Or(items) => items.iter().map(conjunct).collect(),
            Formula::And(_) => conjunct(self).map(|a| vec![a]),
            _ => None,
        }
    }

    fn write_child(child: &Formula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // compound children are always parenthesized, so DNFs print as `(..) | (..)`
        match child {
            Formula::And(items) | Formula::Or(items) if items.len() > 1 => write!(f, "({child})"),
            _ => write!(f, "{child}"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Const(b) => write!(f, "{b}"),
            Formula::Lit(lit) => write!(f, "{lit}"),
            Formula::Not(inner) => {
                if matches!(**inner, Formula::Const(_) | Formula::Lit(_) | Formula::Not(_)) {
                    write!(f, "!{inner}")
                } else {
                    write!(f, "!({inner})")
                }
            }
            Formula::And(items) if items.is_empty() => write!(f, "true"),
            Formula::Or(items) if items.is_empty() => write!(f, "false"),
            Formula::And(items) | Formula::Or(items) => {
                let sep = if matches!(self, Formula::And(_)) { " & " } else { " | " };
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(sep)?;
                    }
                    Formula::write_child(item, f)?;
                }
                Ok(())
            }
        }
    }
}

impl FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Formula> {
        Formula::parse(s)
    }
}

type Partial = Vec<Option<GodType>>;

/// DNF as a list of partial assignments. `negate` tracks an odd number of
/// enclosing negations.
fn dnf_partials(f: &Formula, negate: bool, gods: usize) -> Vec<Partial> {
    match (f, negate) {
        (Formula::Const(b), _) => {
            if *b != negate {
                vec![vec![None; gods]]
            } else {
                Vec::new()
            }
        }
        (Formula::Lit(lit), _) => {
            let positive = lit.negated == negate;
            GodType::ALL
                .iter()
                .filter(|&&ty| (ty == lit.ty) == positive)
                .map(|&ty| {
                    let mut p = vec![None; gods];
                    p[lit.god] = Some(ty);
                    p
                })
                .collect()
        }
        (Formula::Not(inner), _) => dnf_partials(inner, !negate, gods),
        (Formula::Or(items), false) | (Formula::And(items), true) => {
            let mut out: Vec<Partial> = items
                .iter()
                .flat_map(|item| dnf_partials(item, negate, gods))
                .collect();
            out.sort();
            out.dedup();
            out
        }
        (Formula::And(items), false) | (Formula::Or(items), true) => {
            let mut acc: Vec<Partial> = vec![vec![None; gods]];
            for item in items {
                let rhs = dnf_partials(item, negate, gods);
                let mut next = Vec::new();
                for l in &acc {
                    for r in &rhs {
                        if let Some(m) = merge(l, r) {
                            next.push(m);
                        }
                    }
                }
                next.sort();
                next.dedup();
                acc = next;
                if acc.is_empty() {
                    break;
                }
            }
            acc
        }
    }
}

fn merge(a: &Partial, b: &Partial) -> Option<Partial> {
    a.iter()
        .zip(b)
        .map(|(x, y)| match (x, y) {
            (Some(x), Some(y)) if x != y => Err(()),
            (Some(x), _) => Ok(Some(*x)),
            (None, y) => Ok(*y),
        })
        .collect::<std::result::Result<Partial, ()>>()
        .ok()
}

/// All complete assignments of `spec` that extend `partial`.
fn complete_partial(partial: &Partial, spec: PuzzleSpec) -> Vec<Assignment> {
    let mut remaining = [spec.truthful(), spec.liars(), spec.random()];
    for ty in partial.iter().flatten() {
        let slot = &mut remaining[*ty as usize];
        if *slot == 0 {
            return Vec::new();
        }
        *slot -= 1;
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(partial.len());
    fill(partial, &mut remaining, &mut current, &mut out);
    out
}

fn fill(
    partial: &Partial,
    remaining: &mut [usize; 3],
    current: &mut Vec<GodType>,
    out: &mut Vec<Assignment>,
) {
    let pos = current.len();
    if pos == partial.len() {
        out.push(Assignment::new(current.clone()));
        return;
    }
    if let Some(ty) = partial[pos] {
        current.push(ty);
        fill(partial, remaining, current, out);
        current.pop();
        return;
    }
    for ty in GodType::ALL {
        let r = ty as usize;
        if remaining[r] > 0 {
            remaining[r] -= 1;
            current.push(ty);
            fill(partial, remaining, current, out);
            current.pop();
            remaining[r] += 1;
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn parse(mut self) -> Result<Formula> {
        let f = self.or()?;
        self.skip_ws();
        if self.pos < self.src.len() {
            return Err(self.error("unexpected trailing input"));
        }
        Ok(f)
    }

    /// 1-based character column of the current position.
    fn column(&self) -> usize {
        self.src[..self.pos].chars().count() + 1
    }

    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            column: self.column(),
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn or(&mut self) -> Result<Formula> {
        let mut items = vec![self.and()?];
        while self.eat("|") {
            items.push(self.and()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Formula::Or(items)
        })
    }

    fn and(&mut self) -> Result<Formula> {
        let mut items = vec![self.unary()?];
        while self.eat("&") {
            items.push(self.unary()?);
        }
        Ok(if items.len() == 1 {
            items.pop().unwrap()
        } else {
            Formula::And(items)
        })
    }

    fn unary(&mut self) -> Result<Formula> {
        if self.eat("!") {
            return Ok(self.unary()?.negate());
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula> {
        self.skip_ws();
        if self.eat("(") {
            let inner = self.or()?;
            if !self.eat(")") {
                return Err(self.error("expected ')'"));
            }
            return Ok(inner);
        }
        if self.keyword("true") {
            return Ok(Formula::Const(true));
        }
        if self.keyword("false") {
            return Ok(Formula::Const(false));
        }
        match self.peek() {
            Some('g') => self.literal(),
            Some(_) => Err(self.error("expected a literal, constant, '!' or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn keyword(&mut self, word: &str) -> bool {
        let rest = &self.src[self.pos..];
        if rest.starts_with(word)
            && !rest[word.len()..]
                .chars()
                .next()
                .is_some_and(|c| c.is_alphanumeric() || c == '_')
        {
            self.pos += word.len();
            true
        } else {
            false
        }
    }

    fn literal(&mut self) -> Result<Formula> {
        self.pos += 1; // 'g'
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a god number after 'g'"));
        }
        let number: usize = self.src[start..self.pos]
            .parse()
            .map_err(|_| self.error("god number too large"))?;
        if number == 0 {
            self.pos = start;
            return Err(self.error("god numbers start at 1"));
        }
        let negated = if self.eat("!=") {
            true
        } else if self.eat("=") {
            false
        } else {
            return Err(self.error("expected '=' or '!='"));
        };
        self.skip_ws();
        let ty = match self.peek().and_then(GodType::from_symbol) {
            Some(ty) => ty,
            None => return Err(self.error("expected a god type T, F or R")),
        };
        self.pos += 1;
        Ok(Formula::Lit(Literal {
            god: number - 1,
            ty,
            negated,
        }))
    }
}
