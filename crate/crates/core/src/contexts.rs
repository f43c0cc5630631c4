//! Decomposition trees and context algebras.
//!
//! A decomposition packages elements of two sorts into a binary tree:
//! positive leaves carry an `A`, negative leaves (written `∙b`) carry a `B`.
//! Contexts are stores of such leaves addressed by labels. Labels are
//! De Bruijn *levels*: extension only ever appends, so a label that was
//! valid in a context stays valid, and denotes the same entry, in every
//! extension of it.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// An `(A, B)`-decomposition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Decomposition<A, B> {
    PosLeaf(A),
    NegLeaf(B),
    Unit,
    Pair(Box<Decomposition<A, B>>, Box<Decomposition<A, B>>),
}

/// Decomposition with payloads erased.
pub type DecStructure = Decomposition<(), ()>;

/// A borrowed leaf of a decomposition.
#[derive(Debug, PartialEq, Eq)]
pub enum Leaf<'a, A, B> {
    Pos(&'a A),
    Neg(&'a B),
}

impl<A, B> Clone for Leaf<'_, A, B> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<A, B> Copy for Leaf<'_, A, B> {}

impl<A, B> Decomposition<A, B> {
    pub fn pair(left: Self, right: Self) -> Self {
        Decomposition::Pair(Box::new(left), Box::new(right))
    }

    /// The homomorphic projection onto [`DecStructure`].
    pub fn structure(&self) -> DecStructure {
        match self {
            Decomposition::PosLeaf(_) => Decomposition::PosLeaf(()),
            Decomposition::NegLeaf(_) => Decomposition::NegLeaf(()),
            Decomposition::Unit => Decomposition::Unit,
            Decomposition::Pair(l, r) => Decomposition::pair(l.structure(), r.structure()),
        }
    }

    /// Leaves in left-to-right order.
    pub fn leaves(&self) -> Vec<Leaf<'_, A, B>> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<Leaf<'a, A, B>>) {
        match self {
            Decomposition::PosLeaf(a) => out.push(Leaf::Pos(a)),
            Decomposition::NegLeaf(b) => out.push(Leaf::Neg(b)),
            Decomposition::Unit => {}
            Decomposition::Pair(l, r) => {
                l.collect_leaves(out);
                r.collect_leaves(out);
            }
        }
    }

    pub fn map<A2, B2>(
        &self,
        pos: &mut impl FnMut(&A) -> A2,
        neg: &mut impl FnMut(&B) -> B2,
    ) -> Decomposition<A2, B2> {
        match self {
            Decomposition::PosLeaf(a) => Decomposition::PosLeaf(pos(a)),
            Decomposition::NegLeaf(b) => Decomposition::NegLeaf(neg(b)),
            Decomposition::Unit => Decomposition::Unit,
            Decomposition::Pair(l, r) => Decomposition::pair(l.map(pos, neg), r.map(pos, neg)),
        }
    }

    /// Negative-leaf payloads, left to right.
    pub fn neg_leaves(&self) -> impl Iterator<Item = &B> {
        self.leaves().into_iter().filter_map(|l| match l {
            Leaf::Neg(b) => Some(b),
            Leaf::Pos(_) => None,
        })
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Decomposition::PosLeaf(_) | Decomposition::NegLeaf(_) => 1,
            Decomposition::Unit => 0,
            Decomposition::Pair(l, r) => l.leaf_count() + r.leaf_count(),
        }
    }
}

impl fmt::Display for DecStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decomposition::PosLeaf(()) => write!(f, "•"),
            Decomposition::NegLeaf(()) => write!(f, "∙•"),
            Decomposition::Unit => write!(f, "●"),
            Decomposition::Pair(l, r) => write!(f, "({l}, {r})"),
        }
    }
}

/// Where an entry goes when a context is extended.
///
/// Parametric contexts only have stable storage. Contexts with a
/// right-hand slot (the intuitionistic instance) overwrite that slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Place {
    Stable,
    Right,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ContextError {
    #[error("label levels must be dense from 0, got {0:?}")]
    SparseLevels(Vec<usize>),
    #[error("duplicate binding for label {0}")]
    DuplicateLabel(String),
    #[error("right slot cannot hold both an atom and a molecule")]
    SlotConflict,
    #[error("the reserved absurdity label must be bound")]
    MissingAbsurd,
}

/// A context algebra over `(A, B)`: partial lookup by positive and
/// negative labels, plus extension by decompositions.
pub trait Store<A, B>: Clone + fmt::Debug + PartialEq {
    type PosLabel: Clone + fmt::Debug + PartialEq + Eq + Ord + std::hash::Hash;
    type NegLabel: Clone + fmt::Debug + PartialEq + Eq + Ord + std::hash::Hash;

    fn lookup_pos(&self, x: &Self::PosLabel) -> Option<&A>;
    fn lookup_neg(&self, x: &Self::NegLabel) -> Option<&B>;

    /// Domain of the positive lookup, in a fixed order.
    fn pos_labels(&self) -> Vec<Self::PosLabel>;
    fn neg_labels(&self) -> Vec<Self::NegLabel>;

    fn push_pos(&mut self, a: A, place: Place);
    fn push_neg(&mut self, b: B, place: Place);

    /// Builds a context with exactly the given bindings.
    fn from_bindings(
        pos: Vec<(Self::PosLabel, A)>,
        neg: Vec<(Self::NegLabel, B)>,
    ) -> Result<Self, ContextError>;

    /// `(stable positives, stable negatives, right slot occupied)`.
    fn sizes(&self) -> (usize, usize, usize);

    /// Extends by `d`, leaves left to right, each at the place chosen by `place`.
    fn extend_placed(
        &self,
        d: &Decomposition<A, B>,
        mut place: impl FnMut(Leaf<'_, A, B>) -> Place,
    ) -> Self
    where
        A: Clone,
        B: Clone,
    {
        let mut out = self.clone();
        for leaf in d.leaves() {
            let at = place(leaf);
            match leaf {
                Leaf::Pos(a) => out.push_pos(a.clone(), at),
                Leaf::Neg(b) => out.push_neg(b.clone(), at),
            }
        }
        out
    }
}

/// Referable atoms: image of the positive lookup, first occurrence order.
pub fn acc_pos<A: Clone + PartialEq, B, S: Store<A, B>>(ctx: &S) -> Vec<A> {
    let mut out: Vec<A> = Vec::new();
    for x in ctx.pos_labels() {
        if let Some(a) = ctx.lookup_pos(&x) {
            if !out.contains(a) {
                out.push(a.clone());
            }
        }
    }
    out
}

/// Referable molecules: image of the negative lookup, first occurrence order.
pub fn acc_neg<A, B: Clone + PartialEq, S: Store<A, B>>(ctx: &S) -> Vec<B> {
    let mut out: Vec<B> = Vec::new();
    for x in ctx.neg_labels() {
        if let Some(b) = ctx.lookup_neg(&x) {
            if !out.contains(b) {
                out.push(b.clone());
            }
        }
    }
    out
}

pub fn acc_pos_set<A: Clone + Ord, B, S: Store<A, B>>(ctx: &S) -> BTreeSet<A> {
    ctx.pos_labels()
        .iter()
        .filter_map(|x| ctx.lookup_pos(x).cloned())
        .collect()
}

pub fn acc_neg_set<A, B: Clone + Ord, S: Store<A, B>>(ctx: &S) -> BTreeSet<B> {
    ctx.neg_labels()
        .iter()
        .filter_map(|x| ctx.lookup_neg(x).cloned())
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PosLabel(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NegLabel(pub usize);

impl fmt::Display for PosLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for NegLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "${}", self.0)
    }
}

/// Append-only `(A, B)`-context, extension defined independently of `A`
/// and `B`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParametricContext<A, B> {
    pos: Vec<A>,
    neg: Vec<B>,
}

impl<A, B> Default for ParametricContext<A, B> {
    fn default() -> Self {
        ParametricContext {
            pos: Vec::new(),
            neg: Vec::new(),
        }
    }
}

impl<A: Clone, B: Clone> ParametricContext<A, B> {
    pub fn new(pos: Vec<A>, neg: Vec<B>) -> Self {
        ParametricContext { pos, neg }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn pos_store(&self) -> &[A] {
        &self.pos
    }

    pub fn neg_store(&self) -> &[B] {
        &self.neg
    }

    pub fn lookup_pos(&self, x: PosLabel) -> Option<&A> {
        self.pos.get(x.0)
    }

    pub fn lookup_neg(&self, x: NegLabel) -> Option<&B> {
        self.neg.get(x.0)
    }

    /// `Γ;Δ`: leaves appended in left-to-right order.
    pub fn extend(&self, d: &Decomposition<A, B>) -> Self {
        let mut out = self.clone();
        for leaf in d.leaves() {
            match leaf {
                Leaf::Pos(a) => out.pos.push(a.clone()),
                Leaf::Neg(b) => out.neg.push(b.clone()),
            }
        }
        out
    }
}

impl<A, B> Store<A, B> for ParametricContext<A, B>
where
    A: Clone + fmt::Debug + PartialEq,
    B: Clone + fmt::Debug + PartialEq,
{
    type PosLabel = PosLabel;
    type NegLabel = NegLabel;

    fn lookup_pos(&self, x: &PosLabel) -> Option<&A> {
        self.pos.get(x.0)
    }

    fn lookup_neg(&self, x: &NegLabel) -> Option<&B> {
        self.neg.get(x.0)
    }

    fn pos_labels(&self) -> Vec<PosLabel> {
        (0..self.pos.len()).map(PosLabel).collect()
    }

    fn neg_labels(&self) -> Vec<NegLabel> {
        (0..self.neg.len()).map(NegLabel).collect()
    }

    // Parametric: the place is irrelevant.
    fn push_pos(&mut self, a: A, _place: Place) {
        self.pos.push(a);
    }

    fn push_neg(&mut self, b: B, _place: Place) {
        self.neg.push(b);
    }

    fn from_bindings(
        pos: Vec<(PosLabel, A)>,
        neg: Vec<(NegLabel, B)>,
    ) -> Result<Self, ContextError> {
        Ok(ParametricContext {
            pos: dense(pos.into_iter().map(|(x, a)| (x.0, a)).collect())?,
            neg: dense(neg.into_iter().map(|(x, b)| (x.0, b)).collect())?,
        })
    }

    fn sizes(&self) -> (usize, usize, usize) {
        (self.pos.len(), self.neg.len(), 0)
    }
}

/// Orders level-indexed bindings into a vector, rejecting gaps and repeats.
pub(crate) fn dense<T>(mut bindings: Vec<(usize, T)>) -> Result<Vec<T>, ContextError> {
    bindings.sort_by_key(|(k, _)| *k);
    let levels: Vec<usize> = bindings.iter().map(|(k, _)| *k).collect();
    if levels.iter().enumerate().any(|(i, k)| i != *k) {
        if let Some(w) = levels.windows(2).find(|w| w[0] == w[1]) {
            return Err(ContextError::DuplicateLabel(w[0].to_string()));
        }
        return Err(ContextError::SparseLevels(levels));
    }
    Ok(bindings.into_iter().map(|(_, t)| t).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type D = Decomposition<char, &'static str>;

    fn pos(a: char) -> D {
        Decomposition::PosLeaf(a)
    }

    fn neg(b: &'static str) -> D {
        Decomposition::NegLeaf(b)
    }

    #[test]
    fn structure_erases_payloads() {
        assert_eq!(D::Unit.structure(), DecStructure::Unit);
        assert_eq!(
            D::pair(pos('a'), neg("M")).structure(),
            DecStructure::pair(Decomposition::PosLeaf(()), Decomposition::NegLeaf(()))
        );
        assert_eq!(
            D::pair(D::Unit, D::pair(pos('a'), D::Unit)).structure(),
            DecStructure::pair(
                DecStructure::Unit,
                DecStructure::pair(Decomposition::PosLeaf(()), DecStructure::Unit)
            )
        );
    }

    #[test]
    fn extension_appends_in_leaf_order() {
        let g = ParametricContext::new(vec!['a'], vec![]);
        let g2 = g.extend(&D::pair(pos('b'), neg("M")));
        assert_eq!(g2.pos_store(), &['a', 'b']);
        assert_eq!(g2.neg_store(), &["M"]);
        // the base context is untouched
        assert_eq!(g.pos_store(), &['a']);

        let e = ParametricContext::<char, &str>::empty();
        assert_eq!(e.extend(&D::Unit), e);

        let g = ParametricContext::<char, &str>::new(vec![], vec!["M1"]);
        let d = D::pair(neg("M2"), D::pair(D::Unit, neg("M3")));
        assert_eq!(g.extend(&d).neg_store(), &["M1", "M2", "M3"]);
    }

    #[test]
    fn lookup_by_level() {
        let g = ParametricContext::<char, &str>::new(vec!['a', 'b'], vec!["M"]);
        assert_eq!(g.lookup_pos(PosLabel(1)), Some(&'b'));
        assert_eq!(g.lookup_neg(NegLabel(0)), Some(&"M"));
        assert_eq!(
            ParametricContext::<char, &str>::empty().lookup_pos(PosLabel(0)),
            None
        );
    }

    #[test]
    fn acc_collapses_duplicates() {
        let g = ParametricContext::<char, &str>::new(vec!['a', 'a', 'b'], vec!["M1", "M2"]);
        assert_eq!(acc_pos(&g), vec!['a', 'b']);
        assert_eq!(acc_neg(&g), vec!["M1", "M2"]);
        let e = ParametricContext::<char, &str>::empty();
        assert!(acc_pos(&e).is_empty());
        assert!(acc_neg(&e).is_empty());
    }

    #[test]
    fn from_bindings_requires_dense_levels() {
        let ok = ParametricContext::<char, char>::from_bindings(
            vec![(PosLabel(1), 'b'), (PosLabel(0), 'a')],
            vec![],
        )
        .unwrap();
        assert_eq!(ok.pos_store(), &['a', 'b']);
        assert!(matches!(
            ParametricContext::<char, char>::from_bindings(vec![(PosLabel(1), 'b')], vec![]),
            Err(ContextError::SparseLevels(_))
        ));
        assert!(matches!(
            ParametricContext::<char, char>::from_bindings(
                vec![(PosLabel(0), 'b'), (PosLabel(0), 'c')],
                vec![]
            ),
            Err(ContextError::DuplicateLabel(_))
        ));
    }

    fn arb_dec() -> impl Strategy<Value = Decomposition<u8, u8>> {
        let leaf = prop_oneof![
            Just(Decomposition::Unit),
            (0u8..4).prop_map(Decomposition::PosLeaf),
            (0u8..4).prop_map(Decomposition::NegLeaf),
        ];
        leaf.prop_recursive(4, 16, 2, |inner| {
            (inner.clone(), inner).prop_map(|(l, r)| Decomposition::pair(l, r))
        })
    }

    fn arb_ctx() -> impl Strategy<Value = ParametricContext<u8, u8>> {
        (
            proptest::collection::vec(0u8..4, 0..4),
            proptest::collection::vec(0u8..4, 0..4),
        )
            .prop_map(|(p, n)| ParametricContext::new(p, n))
    }

    // direct recursive flatten, independent of the Store machinery
    fn flatten(d: &Decomposition<u8, u8>, pos: &mut Vec<u8>, neg: &mut Vec<u8>) {
        match d {
            Decomposition::PosLeaf(a) => pos.push(*a),
            Decomposition::NegLeaf(b) => neg.push(*b),
            Decomposition::Unit => {}
            Decomposition::Pair(l, r) => {
                flatten(l, pos, neg);
                flatten(r, pos, neg);
            }
        }
    }

    proptest! {
        #[test]
        fn lookup_after_extend(g in arb_ctx(), d in arb_dec()) {
            let ext = g.extend(&d);
            let (mut pos, mut neg) = (Vec::new(), Vec::new());
            flatten(&d, &mut pos, &mut neg);
            for (i, a) in pos.iter().enumerate() {
                prop_assert_eq!(ext.lookup_pos(PosLabel(g.pos_store().len() + i)), Some(a));
            }
            for (i, b) in neg.iter().enumerate() {
                prop_assert_eq!(ext.lookup_neg(NegLabel(g.neg_store().len() + i)), Some(b));
            }
            prop_assert_eq!(ext.pos_store().len(), g.pos_store().len() + pos.len());
            prop_assert_eq!(&ext.pos_store()[..g.pos_store().len()], g.pos_store());
        }

        #[test]
        fn pair_extension_is_sequential(g in arb_ctx(), d1 in arb_dec(), d2 in arb_dec()) {
            let both = g.extend(&Decomposition::pair(d1.clone(), d2.clone()));
            prop_assert_eq!(both, g.extend(&d1).extend(&d2));
        }

        #[test]
        fn acc_equations(g in arb_ctx(), a in 0u8..4, m in 0u8..4, d1 in arb_dec(), d2 in arb_dec()) {
            let plus = |c: &ParametricContext<u8, u8>| acc_pos_set(c);
            let minus = |c: &ParametricContext<u8, u8>| acc_neg_set(c);

            let ga = g.extend(&Decomposition::PosLeaf(a));
            let mut expected = plus(&g);
            expected.insert(a);
            prop_assert_eq!(plus(&ga), expected);
            prop_assert_eq!(minus(&ga), minus(&g));

            let gm = g.extend(&Decomposition::NegLeaf(m));
            prop_assert_eq!(plus(&gm), plus(&g));
            let mut expected = minus(&g);
            expected.insert(m);
            prop_assert_eq!(minus(&gm), expected);

            let gu = g.extend(&Decomposition::Unit);
            prop_assert_eq!(plus(&gu), plus(&g));
            prop_assert_eq!(minus(&gu), minus(&g));

            let gp = g.extend(&Decomposition::pair(d1.clone(), d2.clone()));
            let gs = g.extend(&d1).extend(&d2);
            prop_assert_eq!(plus(&gp), plus(&gs));
            prop_assert_eq!(minus(&gp), minus(&gs));
        }

        #[test]
        fn structure_idempotent(d in arb_dec()) {
            let s = d.structure();
            prop_assert_eq!(s.structure(), s);
        }
    }
}
