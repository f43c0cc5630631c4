//! The classical one-sided instance: polarised classical formulae with
//! De Morgan negation, parametric contexts.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::contexts::{DecStructure, Decomposition, NegLabel, ParametricContext, PosLabel};
use crate::kernel::{Context, Instance, Payload, TypeDec};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(s: &str) -> Self {
        Name(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Polarity {
    Positive,
    Negative,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FormulaK1 {
    Atom(Name),
    NegAtom(Name),
    TrueP,
    FalseP,
    TrueN,
    FalseN,
    AndP(Box<FormulaK1>, Box<FormulaK1>),
    OrP(Box<FormulaK1>, Box<FormulaK1>),
    AndN(Box<FormulaK1>, Box<FormulaK1>),
    OrN(Box<FormulaK1>, Box<FormulaK1>),
}

impl FormulaK1 {
    pub fn atom(name: &str) -> Self {
        FormulaK1::Atom(Name::new(name))
    }

    pub fn neg_atom(name: &str) -> Self {
        FormulaK1::NegAtom(Name::new(name))
    }

    pub fn and_p(a: Self, b: Self) -> Self {
        FormulaK1::AndP(Box::new(a), Box::new(b))
    }

    pub fn or_p(a: Self, b: Self) -> Self {
        FormulaK1::OrP(Box::new(a), Box::new(b))
    }

    pub fn and_n(a: Self, b: Self) -> Self {
        FormulaK1::AndN(Box::new(a), Box::new(b))
    }

    pub fn or_n(a: Self, b: Self) -> Self {
        FormulaK1::OrN(Box::new(a), Box::new(b))
    }

    pub fn polarity(&self) -> Polarity {
        use FormulaK1::*;
        match self {
            Atom(_) | TrueP | FalseP | AndP(..) | OrP(..) => Polarity::Positive,
            NegAtom(_) | TrueN | FalseN | AndN(..) | OrN(..) => Polarity::Negative,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.polarity() == Polarity::Positive
    }

    /// De Morgan dual.
    pub fn negate(&self) -> Self {
        use FormulaK1::*;
        match self {
            Atom(a) => NegAtom(a.clone()),
            NegAtom(a) => Atom(a.clone()),
            TrueP => FalseN,
            FalseN => TrueP,
            FalseP => TrueN,
            TrueN => FalseP,
            AndP(a, b) => FormulaK1::or_n(a.negate(), b.negate()),
            OrN(a, b) => FormulaK1::and_p(a.negate(), b.negate()),
            OrP(a, b) => FormulaK1::and_n(a.negate(), b.negate()),
            AndN(a, b) => FormulaK1::or_p(a.negate(), b.negate()),
        }
    }

    /// Connective count; literals and units count one.
    pub fn size(&self) -> usize {
        use FormulaK1::*;
        match self {
            Atom(_) | NegAtom(_) | TrueP | FalseP | TrueN | FalseN => 1,
            AndP(a, b) | OrP(a, b) | AndN(a, b) | OrN(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn subformulae(&self) -> Vec<&FormulaK1> {
        let mut out = vec![self];
        let mut i = 0;
        while i < out.len() {
            use FormulaK1::*;
            if let AndP(a, b) | OrP(a, b) | AndN(a, b) | OrN(a, b) = out[i] {
                out.push(a);
                out.push(b);
            }
            i += 1;
        }
        out
    }

    fn binary(&self) -> Option<(&FormulaK1, &'static str, &FormulaK1)> {
        use FormulaK1::*;
        match self {
            AndP(a, b) => Some((a, "&+", b)),
            OrP(a, b) => Some((a, "|+", b)),
            AndN(a, b) => Some((a, "&-", b)),
            OrN(a, b) => Some((a, "|-", b)),
            _ => None,
        }
    }
}

impl fmt::Display for FormulaK1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use FormulaK1::*;
        match self {
            Atom(a) => write!(f, "{a}"),
            NegAtom(a) => write!(f, "~{a}"),
            TrueP => f.write_str("true+"),
            FalseP => f.write_str("false+"),
            TrueN => f.write_str("true-"),
            FalseN => f.write_str("false-"),
            _ => {
                let (a, op, b) = self.binary().unwrap();
                let side = |x: &FormulaK1, f: &mut fmt::Formatter<'_>| {
                    if x.binary().is_some() {
                        write!(f, "({x})")
                    } else {
                        write!(f, "{x}")
                    }
                };
                side(a, f)?;
                write!(f, " {op} ")?;
                side(b, f)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Choice {
    First,
    Second,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternK1 {
    Pos,
    Neg,
    True,
    Pair(Box<PatternK1>, Box<PatternK1>),
    Inj(Choice, Box<PatternK1>),
}

impl PatternK1 {
    pub fn pair(a: Self, b: Self) -> Self {
        PatternK1::Pair(Box::new(a), Box::new(b))
    }

    pub fn inj(i: Choice, p: Self) -> Self {
        PatternK1::Inj(i, Box::new(p))
    }
}

impl fmt::Display for PatternK1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternK1::Pos => f.write_str("pos"),
            PatternK1::Neg => f.write_str("neg"),
            PatternK1::True => f.write_str("unit"),
            PatternK1::Pair(a, b) => write!(f, "({a}, {b})"),
            PatternK1::Inj(Choice::First, p) => write!(f, "inl {p}"),
            PatternK1::Inj(Choice::Second, p) => write!(f, "inr {p}"),
        }
    }
}

pub type K1Context = ParametricContext<Name, FormulaK1>;
pub type K1Dec = Decomposition<Name, FormulaK1>;

/// Decompositions of an arbitrary formula; negative formulae only admit
/// the `neg` pattern.
fn decompose(a: &FormulaK1) -> Vec<(PatternK1, K1Dec)> {
    use FormulaK1::*;
    match a {
        Atom(x) => vec![(PatternK1::Pos, Decomposition::PosLeaf(x.clone()))],
        TrueP => vec![(PatternK1::True, Decomposition::Unit)],
        FalseP => vec![],
        AndP(a1, a2) => {
            let right = decompose(a2);
            let mut out = Vec::new();
            for (p1, d1) in decompose(a1) {
                for (p2, d2) in &right {
                    out.push((
                        PatternK1::pair(p1.clone(), p2.clone()),
                        Decomposition::pair(d1.clone(), d2.clone()),
                    ));
                }
            }
            out
        }
        OrP(a1, a2) => {
            let mut out: Vec<_> = decompose(a1)
                .into_iter()
                .map(|(p, d)| (PatternK1::inj(Choice::First, p), d))
                .collect();
            out.extend(
                decompose(a2)
                    .into_iter()
                    .map(|(p, d)| (PatternK1::inj(Choice::Second, p), d)),
            );
            out
        }
        n => vec![(PatternK1::Neg, Decomposition::NegLeaf(n.negate()))],
    }
}

/// The decomposition relation restricted to molecules (positive formulae).
pub fn decompositions_k1(m: &FormulaK1) -> Vec<(PatternK1, K1Dec)> {
    if !m.is_positive() {
        return Vec::new();
    }
    decompose(m)
}

pub fn pattern_structure_k1(p: &PatternK1) -> DecStructure {
    match p {
        PatternK1::Pos => Decomposition::PosLeaf(()),
        PatternK1::Neg => Decomposition::NegLeaf(()),
        PatternK1::True => Decomposition::Unit,
        PatternK1::Pair(a, b) => Decomposition::pair(pattern_structure_k1(a), pattern_structure_k1(b)),
        PatternK1::Inj(_, p) => pattern_structure_k1(p),
    }
}

/// The classical instance.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct K1;

pub fn k1_signature() -> K1 {
    K1
}

impl Instance for K1 {
    type Atom = Name;
    type Molecule = FormulaK1;
    type Pattern = PatternK1;
    type PosLabel = PosLabel;
    type NegLabel = NegLabel;
    type Store<A: Payload, B: Payload> = ParametricContext<A, B>;

    fn decompositions(&self, m: &FormulaK1) -> Vec<(PatternK1, TypeDec<Self>)> {
        decompositions_k1(m)
    }

    fn pattern_structure(&self, p: &PatternK1) -> DecStructure {
        pattern_structure_k1(p)
    }

    fn is_molecule(&self, m: &FormulaK1) -> bool {
        m.is_positive()
    }

    fn empty_context(&self) -> Context<Self> {
        ParametricContext::empty()
    }
}

/// Molecules reachable from `roots`: every positive subformula, and the
/// negation of every negative one. Closed under `≺`.
pub fn molecule_closure<'a>(roots: impl IntoIterator<Item = &'a FormulaK1>) -> Vec<FormulaK1> {
    let mut out = BTreeSet::new();
    for root in roots {
        for a in root.subformulae() {
            out.insert(if a.is_positive() { a.clone() } else { a.negate() });
        }
    }
    out.into_iter().collect()
}
