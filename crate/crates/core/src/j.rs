//! The intuitionistic two-sided instance: formulae positioned on a side of
//! the sequent, and contexts with a single overwritable right-hand entry.

use std::collections::BTreeSet;
use std::fmt;

use crate::contexts::{dense, ContextError, DecStructure, Decomposition, Place, Store};
use crate::k1::{Choice, Name, Polarity};
use crate::kernel::{Context, Instance, Payload, TypeDec};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FormulaJ {
    PosLit(Name),
    TrueP,
    FalseP,
    AndP(Box<FormulaJ>, Box<FormulaJ>),
    Or(Box<FormulaJ>, Box<FormulaJ>),
    NegLit(Name),
    TrueN,
    FalseN,
    AndN(Box<FormulaJ>, Box<FormulaJ>),
    Imp(Box<FormulaJ>, Box<FormulaJ>),
    Not(Box<FormulaJ>),
}

impl FormulaJ {
    pub fn pos_lit(name: &str) -> Self {
        FormulaJ::PosLit(Name::new(name))
    }

    pub fn neg_lit(name: &str) -> Self {
        FormulaJ::NegLit(Name::new(name))
    }

    pub fn and_p(a: Self, b: Self) -> Self {
        FormulaJ::AndP(Box::new(a), Box::new(b))
    }

    pub fn or(a: Self, b: Self) -> Self {
        FormulaJ::Or(Box::new(a), Box::new(b))
    }

    pub fn and_n(a: Self, b: Self) -> Self {
        FormulaJ::AndN(Box::new(a), Box::new(b))
    }

    pub fn imp(a: Self, b: Self) -> Self {
        FormulaJ::Imp(Box::new(a), Box::new(b))
    }

    pub fn not(a: Self) -> Self {
        FormulaJ::Not(Box::new(a))
    }

    pub fn polarity(&self) -> Polarity {
        use FormulaJ::*;
        match self {
            PosLit(_) | TrueP | FalseP | AndP(..) | Or(..) => Polarity::Positive,
            NegLit(_) | TrueN | FalseN | AndN(..) | Imp(..) | Not(_) => Polarity::Negative,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.polarity() == Polarity::Positive
    }

    pub fn size(&self) -> usize {
        use FormulaJ::*;
        match self {
            PosLit(_) | TrueP | FalseP | NegLit(_) | TrueN | FalseN => 1,
            Not(a) => 1 + a.size(),
            AndP(a, b) | Or(a, b) | AndN(a, b) | Imp(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn subformulae(&self) -> Vec<&FormulaJ> {
        let mut out = vec![self];
        let mut i = 0;
        while i < out.len() {
            use FormulaJ::*;
            match out[i] {
                AndP(a, b) | Or(a, b) | AndN(a, b) | Imp(a, b) => {
                    out.push(a);
                    out.push(b);
                }
                Not(a) => out.push(a),
                _ => {}
            }
            i += 1;
        }
        out
    }

    /// Placed in the molecule position for its polarity.
    pub fn as_molecule(&self) -> Positioned {
        let side = if self.is_positive() { Side::Right } else { Side::Left };
        Positioned::new(self.clone(), side)
    }

    fn is_compound(&self) -> bool {
        use FormulaJ::*;
        matches!(self, AndP(..) | Or(..) | AndN(..) | Imp(..) | Not(_))
    }
}

impl fmt::Display for FormulaJ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use FormulaJ::*;
        let sub = |x: &FormulaJ, f: &mut fmt::Formatter<'_>| {
            if x.is_compound() {
                write!(f, "({x})")
            } else {
                write!(f, "{x}")
            }
        };
        let bin = |a: &FormulaJ, op: &str, b: &FormulaJ, f: &mut fmt::Formatter<'_>| {
            sub(a, f)?;
            write!(f, " {op} ")?;
            sub(b, f)
        };
        match self {
            PosLit(a) => write!(f, "{a}"),
            NegLit(a) => write!(f, "~{a}"),
            TrueP => f.write_str("true+"),
            FalseP => f.write_str("false+"),
            TrueN => f.write_str("true-"),
            FalseN => f.write_str("false-"),
            AndP(a, b) => bin(a, "&+", b, f),
            Or(a, b) => bin(a, "|+", b, f),
            AndN(a, b) => bin(a, "&-", b, f),
            Imp(a, b) => bin(a, "=>", b, f),
            Not(a) => {
                f.write_str("not ")?;
                sub(a, f)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Side {
    Left,
    Right,
}

/// A formula together with the side of the sequent it sits on.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Positioned {
    pub formula: FormulaJ,
    pub side: Side,
}

pub type AtomJ = Positioned;
pub type MoleculeJ = Positioned;

impl Positioned {
    pub fn new(formula: FormulaJ, side: Side) -> Self {
        Positioned { formula, side }
    }

    pub fn right(formula: FormulaJ) -> Self {
        Self::new(formula, Side::Right)
    }

    pub fn left(formula: FormulaJ) -> Self {
        Self::new(formula, Side::Left)
    }

    pub fn absurd() -> Self {
        Self::left(FormulaJ::FalseN)
    }

    /// `(l⁺, Right)`, `(l⁻, Left)` or `(⊥⁻, Left)`.
    pub fn is_atom(&self) -> bool {
        matches!(
            (&self.formula, self.side),
            (FormulaJ::PosLit(_), Side::Right) | (FormulaJ::NegLit(_), Side::Left) | (FormulaJ::FalseN, Side::Left)
        )
    }

    /// `(P, Right)` or `(N, Left)`.
    pub fn is_molecule(&self) -> bool {
        self.formula.is_positive() == (self.side == Side::Right)
    }
}

impl fmt::Display for Positioned {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.side {
            Side::Left => write!(f, "L({})", self.formula),
            Side::Right => write!(f, "R({})", self.formula),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternJ {
    PosR,
    NegR,
    TrueR,
    Pair(Box<PatternJ>, Box<PatternJ>),
    Inj(Choice, Box<PatternJ>),
    PosL,
    NegL,
    TrueL,
    Cons(Box<PatternJ>, Box<PatternJ>),
    Proj(Choice, Box<PatternJ>),
    Switch(Box<PatternJ>),
}

impl PatternJ {
    pub fn pair(a: Self, b: Self) -> Self {
        PatternJ::Pair(Box::new(a), Box::new(b))
    }

    pub fn inj(i: Choice, p: Self) -> Self {
        PatternJ::Inj(i, Box::new(p))
    }

    pub fn cons(a: Self, b: Self) -> Self {
        PatternJ::Cons(Box::new(a), Box::new(b))
    }

    pub fn proj(i: Choice, p: Self) -> Self {
        PatternJ::Proj(i, Box::new(p))
    }

    pub fn switch(p: Self) -> Self {
        PatternJ::Switch(Box::new(p))
    }
}

impl fmt::Display for PatternJ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // prefix operators and the left of `::` take an atomic operand
        let arg = |p: &PatternJ, f: &mut fmt::Formatter<'_>| {
            if matches!(p, PatternJ::Cons(..)) {
                write!(f, "({p})")
            } else {
                write!(f, "{p}")
            }
        };
        match self {
            PatternJ::PosR => f.write_str("pos"),
            PatternJ::NegR => f.write_str("neg"),
            PatternJ::TrueR => f.write_str("unit"),
            PatternJ::PosL => f.write_str("pos_l"),
            PatternJ::NegL => f.write_str("neg_l"),
            PatternJ::TrueL => f.write_str("unit_l"),
            PatternJ::Pair(a, b) => write!(f, "({a}, {b})"),
            PatternJ::Inj(i, p) => {
                f.write_str(if *i == Choice::First { "inl " } else { "inr " })?;
                arg(p, f)
            }
            PatternJ::Proj(i, p) => {
                f.write_str(if *i == Choice::First { "fst " } else { "snd " })?;
                arg(p, f)
            }
            PatternJ::Switch(p) => {
                f.write_str("switch ")?;
                arg(p, f)
            }
            PatternJ::Cons(a, b) => {
                arg(a, f)?;
                write!(f, " :: {b}")
            }
        }
    }
}

pub type JDec = Decomposition<AtomJ, MoleculeJ>;

fn decompose(a: &FormulaJ, side: Side) -> Vec<(PatternJ, JDec)> {
    use FormulaJ::*;
    match side {
        Side::Right => match a {
            n if !n.is_positive() => vec![(PatternJ::NegR, Decomposition::NegLeaf(Positioned::left(n.clone())))],
            PosLit(_) => vec![(PatternJ::PosR, Decomposition::PosLeaf(Positioned::right(a.clone())))],
            TrueP => vec![(PatternJ::TrueR, Decomposition::Unit)],
            FalseP => vec![],
            AndP(a1, a2) => {
                let right = decompose(a2, Side::Right);
                let mut out = Vec::new();
                for (p1, d1) in decompose(a1, Side::Right) {
                    for (p2, d2) in &right {
                        out.push((
                            PatternJ::pair(p1.clone(), p2.clone()),
                            Decomposition::pair(d1.clone(), d2.clone()),
                        ));
                    }
                }
                out
            }
            Or(a1, a2) => {
                let mut out: Vec<_> = decompose(a1, Side::Right)
                    .into_iter()
                    .map(|(p, d)| (PatternJ::inj(Choice::First, p), d))
                    .collect();
                out.extend(
                    decompose(a2, Side::Right)
                        .into_iter()
                        .map(|(p, d)| (PatternJ::inj(Choice::Second, p), d)),
                );
                out
            }
            _ => unreachable!("negative formulae handled above"),
        },
        Side::Left => match a {
            p if p.is_positive() => vec![(PatternJ::NegL, Decomposition::NegLeaf(Positioned::right(p.clone())))],
            NegLit(_) => vec![(PatternJ::PosL, Decomposition::PosLeaf(Positioned::left(a.clone())))],
            FalseN => vec![(PatternJ::TrueL, Decomposition::PosLeaf(Positioned::absurd()))],
            TrueN => vec![],
            Not(inner) => decompose(inner, Side::Right)
                .into_iter()
                .map(|(p, d)| {
                    (
                        PatternJ::switch(p),
                        Decomposition::pair(d, Decomposition::PosLeaf(Positioned::absurd())),
                    )
                })
                .collect(),
            Imp(a1, a2) => {
                let right = decompose(a2, Side::Left);
                let mut out = Vec::new();
                for (p1, d1) in decompose(a1, Side::Right) {
                    for (p2, d2) in &right {
                        out.push((
                            PatternJ::cons(p1.clone(), p2.clone()),
                            Decomposition::pair(d1.clone(), d2.clone()),
                        ));
                    }
                }
                out
            }
            AndN(a1, a2) => {
                let mut out: Vec<_> = decompose(a1, Side::Left)
                    .into_iter()
                    .map(|(p, d)| (PatternJ::proj(Choice::First, p), d))
                    .collect();
                out.extend(
                    decompose(a2, Side::Left)
                        .into_iter()
                        .map(|(p, d)| (PatternJ::proj(Choice::Second, p), d)),
                );
                out
            }
            _ => unreachable!("positive formulae handled above"),
        },
    }
}

/// The decomposition relation restricted to molecules.
pub fn decompositions_j(m: &MoleculeJ) -> Vec<(PatternJ, JDec)> {
    if !m.is_molecule() {
        return Vec::new();
    }
    decompose(&m.formula, m.side)
}

pub fn pattern_structure_j(p: &PatternJ) -> DecStructure {
    use PatternJ::*;
    match p {
        PosR | PosL | TrueL => Decomposition::PosLeaf(()),
        NegR | NegL => Decomposition::NegLeaf(()),
        TrueR => Decomposition::Unit,
        Pair(a, b) | Cons(a, b) => Decomposition::pair(pattern_structure_j(a), pattern_structure_j(b)),
        Inj(_, p) | Proj(_, p) => pattern_structure_j(p),
        Switch(p) => Decomposition::pair(pattern_structure_j(p), Decomposition::PosLeaf(())),
    }
}

fn pattern_places_j(p: &PatternJ, out: &mut Vec<Place>) {
    use PatternJ::*;
    match p {
        PosR | NegR => out.push(Place::Stable),
        PosL | NegL | TrueL => out.push(Place::Right),
        TrueR => {}
        Pair(a, b) | Cons(a, b) => {
            pattern_places_j(a, out);
            pattern_places_j(b, out);
        }
        Inj(_, p) | Proj(_, p) => pattern_places_j(p, out),
        Switch(p) => {
            pattern_places_j(p, out);
            out.push(Place::Right);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum JPosLabel {
    Stable(usize),
    RSlot,
    Absurd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum JNegLabel {
    Stable(usize),
    RSlot,
}

impl fmt::Display for JPosLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JPosLabel::Stable(k) => write!(f, "#{k}"),
            JPosLabel::RSlot => f.write_str("#rs"),
            JPosLabel::Absurd => f.write_str("#absurd"),
        }
    }
}

impl fmt::Display for JNegLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            JNegLabel::Stable(k) => write!(f, "${k}"),
            JNegLabel::RSlot => f.write_str("$rs"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RightSlot<A, B> {
    Empty,
    Atom(A),
    Molecule(B),
}

/// Stable stores plus one right-hand entry and the always-present
/// absurdity payload.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JStore<A, B> {
    pos: Vec<A>,
    neg: Vec<B>,
    slot: RightSlot<A, B>,
    absurd: A,
}

pub type JContext = JStore<AtomJ, MoleculeJ>;

impl<A, B> JStore<A, B> {
    pub fn new(absurd: A) -> Self {
        JStore {
            pos: Vec::new(),
            neg: Vec::new(),
            slot: RightSlot::Empty,
            absurd,
        }
    }

    pub fn with_entries(pos: Vec<A>, neg: Vec<B>, slot: RightSlot<A, B>, absurd: A) -> Self {
        JStore { pos, neg, slot, absurd }
    }

    pub fn pos_stable(&self) -> &[A] {
        &self.pos
    }

    pub fn neg_stable(&self) -> &[B] {
        &self.neg
    }

    pub fn right_slot(&self) -> &RightSlot<A, B> {
        &self.slot
    }

    pub fn absurd(&self) -> &A {
        &self.absurd
    }
}

impl<A, B> Store<A, B> for JStore<A, B>
where
    A: Clone + fmt::Debug + PartialEq,
    B: Clone + fmt::Debug + PartialEq,
{
    type PosLabel = JPosLabel;
    type NegLabel = JNegLabel;

    fn lookup_pos(&self, x: &JPosLabel) -> Option<&A> {
        match x {
            JPosLabel::Stable(k) => self.pos.get(*k),
            JPosLabel::RSlot => match &self.slot {
                RightSlot::Atom(a) => Some(a),
                _ => None,
            },
            JPosLabel::Absurd => Some(&self.absurd),
        }
    }

    fn lookup_neg(&self, x: &JNegLabel) -> Option<&B> {
        match x {
            JNegLabel::Stable(k) => self.neg.get(*k),
            JNegLabel::RSlot => match &self.slot {
                RightSlot::Molecule(b) => Some(b),
                _ => None,
            },
        }
    }

    fn pos_labels(&self) -> Vec<JPosLabel> {
        let mut out: Vec<_> = (0..self.pos.len()).map(JPosLabel::Stable).collect();
        if matches!(self.slot, RightSlot::Atom(_)) {
            out.push(JPosLabel::RSlot);
        }
        out.push(JPosLabel::Absurd);
        out
    }

    fn neg_labels(&self) -> Vec<JNegLabel> {
        let mut out: Vec<_> = (0..self.neg.len()).map(JNegLabel::Stable).collect();
        if matches!(self.slot, RightSlot::Molecule(_)) {
            out.push(JNegLabel::RSlot);
        }
        out
    }

    // A right-hand write replaces whatever the slot held, of either kind.
    fn push_pos(&mut self, a: A, place: Place) {
        match place {
            Place::Stable => self.pos.push(a),
            Place::Right => self.slot = RightSlot::Atom(a),
        }
    }

    fn push_neg(&mut self, b: B, place: Place) {
        match place {
            Place::Stable => self.neg.push(b),
            Place::Right => self.slot = RightSlot::Molecule(b),
        }
    }

    fn from_bindings(pos: Vec<(JPosLabel, A)>, neg: Vec<(JNegLabel, B)>) -> Result<Self, ContextError> {
        let mut stable_pos = Vec::new();
        let mut slot = RightSlot::Empty;
        let mut absurd = None;
        for (x, a) in pos {
            match x {
                JPosLabel::Stable(k) => stable_pos.push((k, a)),
                JPosLabel::RSlot => {
                    if !matches!(slot, RightSlot::Empty) {
                        return Err(ContextError::DuplicateLabel(x.to_string()));
                    }
                    slot = RightSlot::Atom(a);
                }
                JPosLabel::Absurd => {
                    if absurd.replace(a).is_some() {
                        return Err(ContextError::DuplicateLabel(x.to_string()));
                    }
                }
            }
        }
        let mut stable_neg = Vec::new();
        for (x, b) in neg {
            match x {
                JNegLabel::Stable(k) => stable_neg.push((k, b)),
                JNegLabel::RSlot => {
                    match slot {
                        RightSlot::Empty => {}
                        RightSlot::Atom(_) => return Err(ContextError::SlotConflict),
                        RightSlot::Molecule(_) => return Err(ContextError::DuplicateLabel(x.to_string())),
                    }
                    slot = RightSlot::Molecule(b);
                }
            }
        }
        Ok(JStore {
            pos: dense(stable_pos)?,
            neg: dense(stable_neg)?,
            slot,
            absurd: absurd.ok_or(ContextError::MissingAbsurd)?,
        })
    }

    fn sizes(&self) -> (usize, usize, usize) {
        let rs = usize::from(!matches!(self.slot, RightSlot::Empty));
        (self.pos.len(), self.neg.len(), rs)
    }
}

/// The intuitionistic instance.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct J;

pub fn j_signature() -> J {
    J
}

impl Instance for J {
    type Atom = AtomJ;
    type Molecule = MoleculeJ;
    type Pattern = PatternJ;
    type PosLabel = JPosLabel;
    type NegLabel = JNegLabel;
    type Store<A: Payload, B: Payload> = JStore<A, B>;

    fn decompositions(&self, m: &MoleculeJ) -> Vec<(PatternJ, TypeDec<Self>)> {
        decompositions_j(m)
    }

    fn pattern_structure(&self, p: &PatternJ) -> DecStructure {
        pattern_structure_j(p)
    }

    fn is_molecule(&self, m: &MoleculeJ) -> bool {
        m.is_molecule()
    }

    fn empty_context(&self) -> Context<Self> {
        JStore::new(Positioned::absurd())
    }

    fn atom_place(&self, a: &AtomJ) -> Place {
        match a.side {
            Side::Right => Place::Stable,
            Side::Left => Place::Right,
        }
    }

    fn molecule_place(&self, m: &MoleculeJ) -> Place {
        match m.side {
            Side::Left => Place::Stable,
            Side::Right => Place::Right,
        }
    }

    fn pattern_places(&self, p: &PatternJ) -> Vec<Place> {
        let mut out = Vec::new();
        pattern_places_j(p, &mut out);
        out
    }
}

/// Molecules for every subformula of `roots`, each on the side where it is
/// a molecule. Closed under `≺`.
pub fn molecule_closure_j<'a>(roots: impl IntoIterator<Item = &'a FormulaJ>) -> Vec<MoleculeJ> {
    let mut out = BTreeSet::new();
    for root in roots {
        for a in root.subformulae() {
            out.insert(a.as_molecule());
        }
    }
    out.into_iter().collect()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::contexts::{acc_neg_set, acc_pos_set, Leaf};
    use crate::kernel::{check_well_founded, structure_violations};
    use proptest::prelude::*;

    fn l() -> FormulaJ {
        FormulaJ::pos_lit("l")
    }

    #[test]
    fn decomposition_examples() {
        assert_eq!(
            decompositions_j(&Positioned::right(FormulaJ::TrueP)),
            vec![(PatternJ::TrueR, Decomposition::Unit)]
        );
        assert_eq!(
            decompositions_j(&Positioned::absurd()),
            vec![(PatternJ::TrueL, Decomposition::PosLeaf(Positioned::absurd()))]
        );
        assert_eq!(
            decompositions_j(&Positioned::left(FormulaJ::imp(l(), l()))),
            vec![(
                PatternJ::cons(PatternJ::PosR, PatternJ::NegL),
                Decomposition::pair(
                    Decomposition::PosLeaf(Positioned::right(l())),
                    Decomposition::NegLeaf(Positioned::right(l()))
                )
            )]
        );
        assert!(decompositions_j(&Positioned::right(FormulaJ::FalseP)).is_empty());
        // not molecules
        assert!(decompositions_j(&Positioned::left(l())).is_empty());
        assert!(decompositions_j(&Positioned::right(FormulaJ::FalseN)).is_empty());
    }

    #[test]
    fn pattern_structure_examples() {
        assert_eq!(pattern_structure_j(&PatternJ::NegR), Decomposition::NegLeaf(()));
        assert_eq!(
            pattern_structure_j(&PatternJ::switch(PatternJ::TrueR)),
            Decomposition::pair(Decomposition::Unit, Decomposition::PosLeaf(()))
        );
        let empty = J.empty_context();
        assert_eq!(empty.lookup_pos(&JPosLabel::Absurd), Some(&Positioned::absurd()));
        assert_eq!(empty.pos_labels(), vec![JPosLabel::Absurd]);
        assert!(empty.neg_labels().is_empty());
    }

    #[test]
    fn extension_examples() {
        let p = Positioned::right(FormulaJ::TrueP);
        let n = Positioned::left(FormulaJ::imp(l(), l()));
        let mut g = J.empty_context();
        g.push_neg(p.clone(), Place::Right);

        let lm = Positioned::left(FormulaJ::neg_lit("m"));
        let g2 = J.extend(&g, &Decomposition::PosLeaf(lm.clone()));
        assert_eq!(g2.right_slot(), &RightSlot::Atom(lm));
        assert_eq!(g2.pos_stable(), g.pos_stable());
        assert_eq!(g2.neg_stable(), g.neg_stable());

        let g3 = J.extend(
            &J.empty_context(),
            &Decomposition::pair(Decomposition::PosLeaf(Positioned::right(l())), Decomposition::NegLeaf(n.clone())),
        );
        assert_eq!(g3.pos_stable(), &[Positioned::right(l())]);
        assert_eq!(g3.neg_stable(), &[n]);
        assert_eq!(g3.right_slot(), &RightSlot::Empty);

        assert_eq!(J.extend(&g, &Decomposition::Unit), g);
    }

    #[test]
    fn labels_display() {
        assert_eq!(JPosLabel::Stable(2).to_string(), "#2");
        assert_eq!(JPosLabel::RSlot.to_string(), "#rs");
        assert_eq!(JPosLabel::Absurd.to_string(), "#absurd");
        assert_eq!(JNegLabel::RSlot.to_string(), "$rs");
    }

    #[test]
    fn from_bindings_rejects_conflicts() {
        let a = Positioned::left(FormulaJ::neg_lit("x"));
        let m = Positioned::right(FormulaJ::TrueP);
        assert_eq!(
            JContext::from_bindings(vec![(JPosLabel::RSlot, a.clone()), (JPosLabel::Absurd, Positioned::absurd())], vec![(JNegLabel::RSlot, m)]),
            Err(ContextError::SlotConflict)
        );
        assert_eq!(JContext::from_bindings(vec![(JPosLabel::RSlot, a)], vec![]), Err(ContextError::MissingAbsurd));
    }

    pub(crate) fn arb_formula_j() -> impl Strategy<Value = FormulaJ> {
        let leaf = prop_oneof![
            prop_oneof![Just("l"), Just("m")].prop_map(FormulaJ::pos_lit),
            prop_oneof![Just("x"), Just("y")].prop_map(FormulaJ::neg_lit),
            Just(FormulaJ::TrueP),
            Just(FormulaJ::FalseP),
            Just(FormulaJ::TrueN),
            Just(FormulaJ::FalseN),
        ];
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(x, y)| FormulaJ::and_p(x, y)),
                (inner.clone(), inner.clone()).prop_map(|(x, y)| FormulaJ::or(x, y)),
                (inner.clone(), inner.clone()).prop_map(|(x, y)| FormulaJ::and_n(x, y)),
                (inner.clone(), inner.clone()).prop_map(|(x, y)| FormulaJ::imp(x, y)),
                inner.prop_map(FormulaJ::not),
            ]
        })
    }

    fn arb_atom() -> impl Strategy<Value = AtomJ> {
        prop_oneof![
            Just(Positioned::right(FormulaJ::pos_lit("l"))),
            Just(Positioned::right(FormulaJ::pos_lit("m"))),
            Just(Positioned::left(FormulaJ::neg_lit("x"))),
            Just(Positioned::absurd()),
        ]
    }

    fn arb_molecule() -> impl Strategy<Value = MoleculeJ> {
        arb_formula_j().prop_map(|f| f.as_molecule())
    }

    fn arb_leafy_dec() -> impl Strategy<Value = JDec> {
        let leaf = prop_oneof![
            Just(Decomposition::Unit),
            arb_atom().prop_map(Decomposition::PosLeaf),
            arb_molecule().prop_map(Decomposition::NegLeaf),
        ];
        leaf.prop_recursive(3, 8, 2, |inner| (inner.clone(), inner).prop_map(|(a, b)| Decomposition::pair(a, b)))
    }

    fn arb_context() -> impl Strategy<Value = JContext> {
        proptest::collection::vec(arb_leafy_dec(), 0..4)
            .prop_map(|ds| ds.iter().fold(J.empty_context(), |g, d| J.extend(&g, d)))
    }

    fn right_entries(g: &JContext) -> usize {
        acc_pos_set(g)
            .iter()
            .filter(|a| a.side == Side::Left && a.formula != FormulaJ::FalseN)
            .count()
            + acc_neg_set(g).iter().filter(|m| m.side == Side::Right).count()
    }

    proptest! {
        #[test]
        fn closure_is_well_founded_and_decreasing(f in arb_formula_j()) {
            let universe = molecule_closure_j([&f]);
            let order = check_well_founded(&J, &universe).unwrap();
            for (smaller, bigger) in &order.edges {
                prop_assert!(smaller.formula.size() < bigger.formula.size());
            }
            prop_assert!(structure_violations(&J, &universe).is_empty());
        }

        #[test]
        fn patterns_are_functional_and_places_agree(f in arb_formula_j()) {
            let m = f.as_molecule();
            let decs = decompositions_j(&m);
            let patterns: BTreeSet<_> = decs.iter().map(|(p, _)| p).collect();
            prop_assert_eq!(patterns.len(), decs.len());
            for (p, d) in &decs {
                let typed: Vec<Place> = d.leaves().into_iter().map(|leaf| match leaf {
                    Leaf::Pos(a) => J.atom_place(a),
                    Leaf::Neg(m) => J.molecule_place(m),
                }).collect();
                prop_assert_eq!(J.pattern_places(p), typed);
            }
        }

        #[test]
        fn acc_equations(g in arb_context(), a in arb_atom(), m in arb_molecule(), d1 in arb_leafy_dec(), d2 in arb_leafy_dec()) {
            let plus = acc_pos_set(&g);
            let minus = acc_neg_set(&g);
            prop_assert!(plus.contains(&Positioned::absurd()));

            let ga = J.extend(&g, &Decomposition::PosLeaf(a.clone()));
            match a.side {
                Side::Right => {
                    let mut expected = plus.clone();
                    expected.insert(a.clone());
                    prop_assert_eq!(acc_pos_set(&ga), expected);
                    prop_assert_eq!(acc_neg_set(&ga), minus.clone());
                }
                Side::Left => {
                    let mut expected: BTreeSet<_> = plus.iter().filter(|x| x.side == Side::Right).cloned().collect();
                    expected.insert(a.clone());
                    expected.insert(Positioned::absurd());
                    prop_assert_eq!(acc_pos_set(&ga), expected);
                    // the literal equation keeps Acc⁻ unchanged; the right-hand
                    // molecule, if any, is cleared
                    let expected: BTreeSet<_> = minus.iter().filter(|x| x.side == Side::Left).cloned().collect();
                    prop_assert_eq!(acc_neg_set(&ga), expected);
                }
            }

            let gm = J.extend(&g, &Decomposition::NegLeaf(m.clone()));
            match m.side {
                Side::Left => {
                    prop_assert_eq!(acc_pos_set(&gm), plus.clone());
                    let mut expected = minus.clone();
                    expected.insert(m.clone());
                    prop_assert_eq!(acc_neg_set(&gm), expected);
                }
                Side::Right => {
                    let mut expected: BTreeSet<_> = minus.iter().filter(|x| x.side == Side::Left).cloned().collect();
                    expected.insert(m.clone());
                    prop_assert_eq!(acc_neg_set(&gm), expected);
                    let mut expected: BTreeSet<_> = plus.iter().filter(|x| x.side == Side::Right).cloned().collect();
                    expected.insert(Positioned::absurd());
                    prop_assert_eq!(acc_pos_set(&gm), expected);
                }
            }

            let gu = J.extend(&g, &Decomposition::Unit);
            prop_assert_eq!(&gu, &g);

            let gp = J.extend(&g, &Decomposition::pair(d1.clone(), d2.clone()));
            prop_assert_eq!(gp, J.extend(&J.extend(&g, &d1), &d2));
        }

        #[test]
        fn right_slot_stays_a_singleton(g in arb_context()) {
            prop_assert!(right_entries(&g) <= 1);
        }
    }
}
