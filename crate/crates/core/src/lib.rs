//! Solving generalized versions of the three-gods puzzle: `n` gods, each
//! truthful, lying or random, answering yes/no questions in words whose
//! meaning is unknown.
//!
//! The pieces, bottom up:
//!
//! - [`model`]: specs, assignments and their canonical enumeration.
//! - [`formula`] and [`question`]: the question language and named questions.
//! - [`simulator`]: how gods answer, the self-referential question template,
//!   seeded episodes and transcripts.
//! - [`knowledge`]: the questioner's possibility set and the twin-world
//!   adversary for unsolvable specs.
//! - [`strategy`]: strategy trees, exact verification, built-in solutions and
//!   the general constructive solver.
//! - [`synthesis`]: exhaustive optimal-strategy search.
//! - [`service`] and [`commands`]: the HTTP session API and the command
//!   implementations behind the `godpuzzle` binary.


pub mod commands;
pub mod error;
pub mod formula;
pub mod knowledge;
pub mod model;
pub mod question;
pub mod service;

pub mod simulator;
pub mod strategy;
pub mod synthesis;

pub use error::{Error, Result};
pub use formula::Formula;
pub use knowledge::KnowledgeState;
pub use model::{Assignment, Enumeration, GodType, PossibilitySet, PuzzleSpec};
pub use question::Question;
pub use simulator::{RandomMode, Word, WordSemantics};
pub use strategy::{verify, Rational, StrategyTree, VerificationReport};
