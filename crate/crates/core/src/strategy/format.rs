//! Text form of a strategy tree.
//!
//! ```text
//! format godpuzzle-strategy/1
//! spec 3 1 1
//! # free comment lines
//! root node god=1 question="g3=R"
//!   true leaf declare=TFR
//!   false leaf declare=RTF
//! ```
//!
//! Nodes come in preorder, indented two spaces per level; each names the
//! branch it hangs from (`root`, `true` or `false`).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::model::{Assignment, PuzzleSpec};

use super::StrategyTree;

pub const FORMAT_TAG: &str = "godpuzzle-strategy/1";

/// A parsed strategy file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrategyFile {
    pub spec: PuzzleSpec,
    /// Comment lines without their leading `# `.
    pub comments: Vec<String>,
    pub tree: StrategyTree,
}

impl StrategyFile {
    pub fn new(spec: PuzzleSpec, tree: StrategyTree) -> Self {
        StrategyFile {
            spec,
            comments: Vec::new(),
            tree,
        }
    }

    pub fn with_comment(mut self, comment: impl Into<String>) -> Self {
        self.comments.push(comment.into());
        self
    }

    pub fn parse(text: &str) -> Result<Self> {
        Reader::new(text).file()
    }
}

impl fmt::Display for StrategyFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "format {FORMAT_TAG}")?;
        writeln!(
            f,
            "spec {} {} {}",
            self.spec.gods(),
            self.spec.random(),
            self.spec.truthful()
        )?;
        for c in &self.comments {
            writeln!(f, "# {c}")?;
        }
        write_tree(f, &self.tree, "root", 0)
    }
}

impl FromStr for StrategyFile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StrategyFile::parse(s)
    }
}

fn write_tree(f: &mut fmt::Formatter<'_>, tree: &StrategyTree, branch: &str, depth: usize) -> fmt::Result {
    let indent = "  ".repeat(depth);
    match tree {
        StrategyTree::Leaf(a) => writeln!(f, "{indent}{branch} leaf declare={a}"),
        StrategyTree::Node { god, question, yes, no } => {
            writeln!(f, "{indent}{branch} node god={} question=\"{question}\"", god + 1)?;
            write_tree(f, yes, "true", depth + 1)?;
            write_tree(f, no, "false", depth + 1)
        }
    }
}

struct Line<'a> {
    number: usize,
    indent: usize,
    text: &'a str,
}

struct Reader<'a> {
    lines: Vec<Line<'a>>,
    pos: usize,
    last_line: usize,
    spec: Option<PuzzleSpec>,
}

fn error(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::StrategyFormat {
        line,
        column,
        message: message.into(),
    }
}

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> Self {
        let mut last_line = 0;
        let lines = text
            .lines()
            .enumerate()
            .filter_map(|(i, raw)| {
                last_line = i + 1;
                let trimmed = raw.trim_start_matches(' ');
                if trimmed.trim().is_empty() {
                    return None;
                }
                Some(Line {
                    number: i + 1,
                    indent: raw.len() - trimmed.len(),
                    text: trimmed.trim_end(),
                })
            })
            .collect();
        Reader {
            lines,
            pos: 0,
            last_line,
            spec: None,
        }
    }

    fn next_line(&mut self, what: &str) -> Result<&Line<'a>> {
        let line = self
            .lines
            .get(self.pos)
            .ok_or_else(|| error(self.last_line + 1, 1, format!("unexpected end of file, expected {what}")))?;
        self.pos += 1;
        Ok(line)
    }

    fn file(mut self) -> Result<StrategyFile> {
        let header = self.next_line("format header")?;
        if header.indent != 0 || header.text != format!("format {FORMAT_TAG}") {
            return Err(error(header.number, header.indent + 1, format!("expected 'format {FORMAT_TAG}'")));
        }
        let spec_line = self.next_line("spec line")?;
        let spec = parse_spec(spec_line)?;
        self.spec = Some(spec);
        let mut comments = Vec::new();
        while let Some(line) = self.lines.get(self.pos) {
            match line.text.strip_prefix('#') {
                Some(c) => {
                    comments.push(c.strip_prefix(' ').unwrap_or(c).to_string());
                    self.pos += 1;
                }
                None => break,
            }
        }
        let tree = self.tree("root", 0)?;
        if let Some(extra) = self.lines.get(self.pos) {
            return Err(error(extra.number, extra.indent + 1, "unexpected line after the tree"));
        }
        Ok(StrategyFile { spec, comments, tree })
    }

    fn tree(&mut self, branch: &str, depth: usize) -> Result<StrategyTree> {
        let spec = self.spec.expect("spec is read before the tree");
        let line = self.next_line(&format!("'{branch}' line"))?;
        let (number, indent, text) = (line.number, line.indent, line.text);
        if text.starts_with('#') {
            return Err(error(number, indent + 1, "comments are only allowed before the tree"));
        }
        if indent != depth * 2 {
            return Err(error(number, 1, format!("expected indentation of {} spaces", depth * 2)));
        }
        let col = |offset: usize| indent + text[..offset].chars().count() + 1;
        let Some(rest) = text.strip_prefix(branch).and_then(|r| r.strip_prefix(' ')) else {
            return Err(error(number, col(0), format!("expected '{branch}'")));
        };
        let kind_at = text.len() - rest.len();
        if let Some(decl) = rest.strip_prefix("leaf ") {
            let value_at = kind_at + "leaf ".len();
            let value = decl
                .strip_prefix("declare=")
                .ok_or_else(|| error(number, col(value_at), "expected 'declare='"))?;
            let assignment: Assignment = value
                .parse()
                .map_err(|_| error(number, col(value_at + "declare=".len()), format!("invalid assignment {value:?}")))?;
            spec.check(&assignment)
                .map_err(|e| error(number, col(value_at + "declare=".len()), e.to_string()))?;
            return Ok(StrategyTree::Leaf(assignment));
        }
        let Some(fields) = rest.strip_prefix("node ") else {
            return Err(error(number, col(kind_at), "expected 'node' or 'leaf'"));
        };
        let fields_at = kind_at + "node ".len();
        let god_text = fields
            .strip_prefix("god=")
            .ok_or_else(|| error(number, col(fields_at), "expected 'god='"))?;
        let digits = god_text.find(|c: char| !c.is_ascii_digit()).unwrap_or(god_text.len());
        let god_at = fields_at + "god=".len();
        let god: usize = god_text[..digits]
            .parse()
            .ok()
            .filter(|&g| g >= 1)
            .ok_or_else(|| error(number, col(god_at), "expected a god number starting at 1"))?;
        if god > spec.gods() {
            return Err(error(number, col(god_at), format!("god {god} out of range for {spec}")));
        }
        let q_at = god_at + digits;
        let quoted = text[q_at..]
            .strip_prefix(" question=\"")
            .ok_or_else(|| error(number, col(q_at), "expected ' question=\"'"))?;
        let formula_at = q_at + " question=\"".len();
        let formula_text = quoted
            .strip_suffix('"')
            .ok_or_else(|| error(number, col(text.len()), "expected closing '\"'"))?;
        let question = Formula::parse(formula_text).map_err(|e| match e {
            Error::Syntax { column, message } => error(number, col(formula_at) + column - 1, message),
            other => other,
        })?;
        question
            .check_gods(spec)
            .map_err(|e| error(number, col(formula_at), e.to_string()))?;
        let yes = self.tree("true", depth + 1)?;
        let no = self.tree("false", depth + 1)?;
        Ok(StrategyTree::node(god - 1, question, yes, no))
    }
}

fn parse_spec(line: &Line<'_>) -> Result<PuzzleSpec> {
    let fail = || error(line.number, line.indent + 1, "expected 'spec <n> <m> <k>'");
    let rest = line.text.strip_prefix("spec ").ok_or_else(fail)?;
    let nums: Vec<usize> = rest
        .split_whitespace()
        .map(|x| x.parse().map_err(|_| fail()))
        .collect::<Result<_>>()?;
    let [n, m, k] = nums[..] else { return Err(fail()) };
    PuzzleSpec::new(n, m, k).map_err(|e| error(line.number, line.indent + 1, e.to_string()))
}
