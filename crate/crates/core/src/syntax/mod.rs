//! Surface syntax: one judgment per file, `logic` header first.
//!
//! ```text
//! logic k1;
//! ctx { neg: a |+ ~a };
//! cmd < $0 | inr neg . { pos => < $0 | inl pos . #0 > } >
//! ```

mod lexer;
mod parser;
mod printer;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::j::J;
use crate::k1::K1;
use crate::kernel::{Context, Instance, TypeDec};
use crate::term::{Command, DecTerm, Goal, Judgment, Positive};

pub use parser::{parse_atom, parse_molecule, parse_positioned, Parser};
pub use printer::{print_command, print_dec_term, print_positive, print_type_dec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Logic {
    K1,
    J,
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Logic::K1 => "k1",
            Logic::J => "j",
        })
    }
}

impl std::str::FromStr for Logic {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "k1" => Ok(Logic::K1),
            "j" => Ok(Logic::J),
            _ => Err(format!("unknown logic `{s}` (expected k1 or j)")),
        }
    }
}

/// A goal whose term may be a `?` hole.
#[derive(Clone, Debug, PartialEq)]
pub enum SourceGoal<I: Instance> {
    Pos {
        term: Option<Positive<I>>,
        molecule: I::Molecule,
    },
    Dec {
        term: Option<DecTerm<I>>,
        dec: TypeDec<I>,
    },
    Cmd(Option<Command<I>>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Source<I: Instance> {
    pub context: Context<I>,
    pub goal: SourceGoal<I>,
}

impl<I: Instance> Source<I> {
    /// `None` if the goal has a hole.
    pub fn judgment(&self) -> Option<Judgment<I>> {
        let goal = match &self.goal {
            SourceGoal::Pos { term, molecule } => Goal::Pos {
                term: term.clone()?,
                molecule: molecule.clone(),
            },
            SourceGoal::Dec { term, dec } => Goal::Dec {
                term: term.clone()?,
                dec: dec.clone(),
            },
            SourceGoal::Cmd(c) => Goal::Cmd(c.clone()?),
        };
        Some(Judgment {
            context: self.context.clone(),
            goal,
        })
    }

    pub fn from_judgment(j: &Judgment<I>) -> Self {
        let goal = match &j.goal {
            Goal::Pos { term, molecule } => SourceGoal::Pos {
                term: Some(term.clone()),
                molecule: molecule.clone(),
            },
            Goal::Dec { term, dec } => SourceGoal::Dec {
                term: Some(term.clone()),
                dec: dec.clone(),
            },
            Goal::Cmd(c) => SourceGoal::Cmd(Some(c.clone())),
        };
        Source {
            context: j.context.clone(),
            goal,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SourceJudgment {
    K1(Source<K1>),
    J(Source<J>),
}

impl SourceJudgment {
    pub fn logic(&self) -> Logic {
        match self {
            SourceJudgment::K1(_) => Logic::K1,
            SourceJudgment::J(_) => Logic::J,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: expected {}, found {found}", render_expected(.expected))]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: BTreeSet<String>,
    pub found: String,
}

fn render_expected(expected: &BTreeSet<String>) -> String {
    let items: Vec<&str> = expected.iter().map(String::as_str).collect();
    match items.as_slice() {
        [] => "nothing".into(),
        [one] => one.to_string(),
        _ => format!("one of {}", items.join(", ")),
    }
}

/// Per-instance pieces of the grammar.
pub trait Surface: Instance {
    fn parse_atom(p: &mut Parser) -> Result<Self::Atom, ParseError>;
    fn parse_molecule(p: &mut Parser) -> Result<Self::Molecule, ParseError>;
    fn parse_pattern(p: &mut Parser) -> Result<Self::Pattern, ParseError>;
    fn parse_pos_label(p: &mut Parser) -> Result<Self::PosLabel, ParseError>;
    fn parse_neg_label(p: &mut Parser) -> Result<Self::NegLabel, ParseError>;
    /// The inside of `ctx { ... }`.
    fn parse_context(p: &mut Parser) -> Result<Context<Self>, ParseError>;
    fn print_context(ctx: &Context<Self>) -> String;
}

pub fn parse_judgment(src: &str) -> Result<SourceJudgment, ParseError> {
    parser::parse_judgment(src)
}

pub fn print_judgment(j: &SourceJudgment) -> String {
    match j {
        SourceJudgment::K1(s) => printer::print_source(Logic::K1, s),
        SourceJudgment::J(s) => printer::print_source(Logic::J, s),
    }
}
