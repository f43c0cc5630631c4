//! Proof-terms: positive terms, decomposition terms and commands.

use std::collections::BTreeMap;

use crate::kernel::{Context, Instance, TypeDec};

/// `p·d`
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Positive<I: Instance> {
    pub pattern: I::Pattern,
    pub dec: DecTerm<I>,
}

/// Branch functions are finite maps keyed in the instance's canonical
/// pattern order.
pub type BranchMap<I> = BTreeMap<<I as Instance>::Pattern, Command<I>>;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DecTerm<I: Instance> {
    Label(I::PosLabel),
    Branches(BranchMap<I>),
    Unit,
    Pair(Box<DecTerm<I>>, Box<DecTerm<I>>),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Command<I: Instance> {
    /// `⟨x⁻ | t⁺⟩`
    Select(I::NegLabel, Positive<I>),
    /// `⟨f | t⁺⟩`, annotated with the cut molecule.
    Cut {
        branches: BranchMap<I>,
        molecule: I::Molecule,
        arg: Positive<I>,
    },
}

impl<I: Instance> Positive<I> {
    pub fn new(pattern: I::Pattern, dec: DecTerm<I>) -> Self {
        Positive { pattern, dec }
    }
}

impl<I: Instance> DecTerm<I> {
    pub fn pair(left: Self, right: Self) -> Self {
        DecTerm::Pair(Box::new(left), Box::new(right))
    }

    pub fn branches(entries: impl IntoIterator<Item = (I::Pattern, Command<I>)>) -> Self {
        DecTerm::Branches(entries.into_iter().collect())
    }
}

/// The three sequent kinds, with the term being checked.
#[derive(Clone, Debug, PartialEq)]
pub enum Goal<I: Instance> {
    Pos {
        term: Positive<I>,
        molecule: I::Molecule,
    },
    Dec {
        term: DecTerm<I>,
        dec: TypeDec<I>,
    },
    Cmd(Command<I>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Judgment<I: Instance> {
    pub context: Context<I>,
    pub goal: Goal<I>,
}

// Phase-alternation depth: a synchronous phase costs one, each
// asynchronous branch adds one on top of its command.

pub fn positive_depth<I: Instance>(t: &Positive<I>) -> usize {
    dec_depth(&t.dec).max(1)
}

pub fn dec_depth<I: Instance>(d: &DecTerm<I>) -> usize {
    match d {
        DecTerm::Label(_) | DecTerm::Unit => 0,
        DecTerm::Pair(l, r) => dec_depth(l).max(dec_depth(r)),
        DecTerm::Branches(f) => branches_depth(f),
    }
}

pub fn branches_depth<I: Instance>(f: &BranchMap<I>) -> usize {
    f.values().map(|c| 1 + command_depth(c)).max().unwrap_or(0)
}

pub fn command_depth<I: Instance>(c: &Command<I>) -> usize {
    match c {
        Command::Select(_, t) => positive_depth(t),
        Command::Cut { branches, arg, .. } => branches_depth(branches).max(positive_depth(arg)),
    }
}

pub fn goal_depth<I: Instance>(g: &Goal<I>) -> usize {
    match g {
        Goal::Pos { term, .. } => positive_depth(term),
        Goal::Dec { term, .. } => dec_depth(term),
        Goal::Cmd(c) => command_depth(c),
    }
}
