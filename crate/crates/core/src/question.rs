//! Questions (formula plus truth set), the balance metric and the catalog of
//! named questions used by the built-in strategies.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::formula::Formula;
use crate::model::{Enumeration, PossibilitySet, PuzzleSpec};

/// A formula together with the assignments of a spec that satisfy it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Question {
    formula: Formula,
    truth: PossibilitySet,
}

impl Question {
    pub fn new(formula: Formula, enumeration: &Enumeration) -> Result<Self> {
        let truth = formula.truth_set(enumeration)?;
        Ok(Question { formula, truth })
    }

    pub fn formula(&self) -> &Formula {
        &self.formula
    }

    pub fn truth_set(&self) -> &PossibilitySet {
        &self.truth
    }

    /// Sizes of the (true, false) children when `god` (0-based) is asked this
    /// question in knowledge state `state`. Assignments where `god` is random
    /// land on both sides.
    pub fn balance(
        &self,
        enumeration: &Enumeration,
        state: &PossibilitySet,
        god: usize,
    ) -> Result<(usize, usize)> {
        let random = enumeration.random_at(god)?.intersection(state);
        let yes = state.intersection(&self.truth).union(&random);
        let no = state.difference(&self.truth).union(&random);
        Ok((yes.len(), no.len()))
    }
}

/// A named question from the catalog.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub spec: PuzzleSpec,
    pub formula: Formula,
    pub summary: &'static str,
}

const CLASSIC: &[(&str, &str, &[&str])] = &[
    (
        "q_Rbar",
        "optimal first split when the random god behaves like a truth-teller or liar",
        &["RTF", "RFT", "TFR"],
    ),
    ("q1", "balanced first question of the bottom-up solution", &["RTF", "RFT", "TFR", "FTR"]),
    ("qbar1R", "negation of q1 with the g1=R possibilities added", &["TRF", "FRT", "RFT", "RTF"]),
];

const FIVE: &[(&str, &str, &[&str])] = &[
    ("q1_5", "first question put to g1", &["RTTTR", "RTTRT", "TTTRR", "TTRTR", "TTRRT"]),
    (
        "q15R",
        "q1_5 with the g1=R possibilities added",
        &["RTRTT", "RRTTT", "RTTTR", "RTTRT", "TTTRR", "TTRTR", "TTRRT"],
    ),
    (
        "qbar15R",
        "negation of q1_5 with the g1=R possibilities added",
        &["TRTTR", "TRTRT", "TRRTT", "RTRTT", "RRTTT", "RTTTR", "RTTRT"],
    ),
    ("q2_5", "second question put to g2", &["RRTTT", "RTTTR", "RTTRT", "TTTRR"]),
    ("qbar25R", "negation of q2_5 within q15R, g2=R added", &["RRTTT", "RTRTT", "TTRTR", "TTRRT"]),
    ("q3_5", "third question put to g4", &["TTRTR", "TTRRT"]),
    ("qbar35R", "negation of q3_5 within qbar25R, g4=R added", &["RTRTT", "RRTTT", "TTRRT"]),
    ("q2bar_5", "second question put to g3 after a negative first answer", &["TRTTR", "TRRTT", "RTTTR"]),
    ("q2bar5R", "q2bar_5 with the g3=R possibilities added", &["RTRTT", "TRTTR", "TRRTT", "RTTTR"]),
    (
        "qbar2bar5R",
        "negation of q2bar_5 within qbar15R, g3=R added",
        &["TRTRT", "RTTRT", "RRTTT", "RTRTT", "TRRTT"],
    ),
];

/// Every named question, keyed by name.
pub fn catalog() -> BTreeMap<&'static str, CatalogEntry> {
    let mut out = BTreeMap::new();
    let mut add = |spec: PuzzleSpec, rows: &[(&'static str, &'static str, &[&str])]| {
        for &(name, summary, conjuncts) in rows {
            let assignments: Vec<_> = conjuncts
                .iter()
                .map(|s| s.parse().expect("catalog assignment"))
                .collect();
            out.insert(
                name,
                CatalogEntry {
                    name,
                    spec,
                    formula: Formula::dnf_of(&assignments),
                    summary,
                },
            );
        }
    };
    add(PuzzleSpec::classic(), CLASSIC);
    add(PuzzleSpec::five_gods(), FIVE);
    out.insert(
        "q1_alt",
        CatalogEntry {
            name: "q1_alt",
            spec: PuzzleSpec::classic(),
            formula: Formula::parse("g3=R | (g1=R & g2=T & g3=F)").expect("catalog formula"),
            summary: "alternative balanced first question",
        },
    );
    out
}

/// Looks up a catalog formula by name.
pub fn named(name: &str) -> Option<Formula> {
    catalog().remove(name).map(|e| e.formula)
}
