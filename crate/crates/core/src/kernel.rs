//! The generic typing system, parameterised by an [`Instance`].
//!
//! Three sequent kinds are checked: `Γ ⊢ t⁺ : M` (positive terms),
//! `Γ ⊢ d : Δ` (decomposition terms) and `Γ ⊢ c` (commands). Rules:
//! `sync`, unit, pair, `init`, `async`, `select`, `cut`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::hash::Hash;

use thiserror::Error;

use crate::contexts::{DecStructure, Decomposition, Leaf, Place, Store};
use crate::term::{BranchMap, Command, DecTerm, Goal, Judgment, Positive};

/// Bounds shared by every carrier the framework manipulates.
pub trait Payload: Clone + fmt::Debug + Eq + Ord + Hash {}
impl<T: Clone + fmt::Debug + Eq + Ord + Hash> Payload for T {}

/// The parameters of an instance: atoms, molecules, patterns, the
/// decomposition relation and the context algebra.
pub trait Instance: Clone + fmt::Debug + Eq + Ord + Hash {
    type Atom: Payload + fmt::Display;
    type Molecule: Payload + fmt::Display;
    type Pattern: Payload + fmt::Display;
    type PosLabel: Payload + fmt::Display;
    type NegLabel: Payload + fmt::Display;

    /// The context algebra family, instantiated at `(Atom, Molecule)` for
    /// typing, at semantic carriers for realisability and at runtime
    /// values for the machine.
    type Store<A: Payload, B: Payload>: Store<A, B, PosLabel = Self::PosLabel, NegLabel = Self::NegLabel>;

    /// All `(p, Δ)` with `⊢ Δ : p : M`, in a fixed order.
    fn decompositions(&self, m: &Self::Molecule) -> Vec<(Self::Pattern, TypeDec<Self>)>;

    fn pattern_structure(&self, p: &Self::Pattern) -> DecStructure;

    fn is_molecule(&self, _m: &Self::Molecule) -> bool {
        true
    }

    fn empty_context(&self) -> Context<Self>;

    fn atom_place(&self, _a: &Self::Atom) -> Place {
        Place::Stable
    }

    fn molecule_place(&self, _m: &Self::Molecule) -> Place {
        Place::Stable
    }

    /// Places of the leaves of any decomposition along `p`, left to right.
    fn pattern_places(&self, p: &Self::Pattern) -> Vec<Place> {
        vec![Place::Stable; self.pattern_structure(p).leaf_count()]
    }

    /// `Γ;Δ`
    fn extend(&self, ctx: &Context<Self>, d: &TypeDec<Self>) -> Context<Self> {
        ctx.extend_placed(d, |leaf| match leaf {
            Leaf::Pos(a) => self.atom_place(a),
            Leaf::Neg(m) => self.molecule_place(m),
        })
    }
}

pub type TypeDec<I> = Decomposition<<I as Instance>::Atom, <I as Instance>::Molecule>;
pub type Context<I> = <I as Instance>::Store<<I as Instance>::Atom, <I as Instance>::Molecule>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Sync,
    Unit,
    Pair,
    Init,
    Async,
    Select,
    Cut,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Sync => "sync",
            Rule::Unit => "unit",
            Rule::Pair => "pair",
            Rule::Init => "init",
            Rule::Async => "async",
            Rule::Select => "select",
            Rule::Cut => "cut",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("unbound label {0}")]
    UnboundLabel(String),
    #[error("pattern {pattern} decomposes nothing in {molecule}")]
    NoSuchDecomposition { pattern: String, molecule: String },
    #[error("{0} is not a molecule")]
    NotAMolecule(String),
    #[error("{term} cannot inhabit {expected}")]
    ShapeMismatch { term: String, expected: String },
    #[error("label {label} is bound to {found}, expected {expected}")]
    InitMismatch {
        label: String,
        expected: String,
        found: String,
    },
    #[error("branch patterns do not match decompositions (missing: [{}], extra: [{}])", .missing.join(", "), .extra.join(", "))]
    AsyncDomainMismatch {
        missing: Vec<String>,
        extra: Vec<String>,
    },
}

impl CheckError {
    pub fn kind(&self) -> &'static str {
        match self {
            CheckError::UnboundLabel(_) => "UnboundLabel",
            CheckError::NoSuchDecomposition { .. } => "NoSuchDecomposition",
            CheckError::NotAMolecule(_) => "NotAMolecule",
            CheckError::ShapeMismatch { .. } => "ShapeMismatch",
            CheckError::InitMismatch { .. } => "InitMismatch",
            CheckError::AsyncDomainMismatch { .. } => "AsyncDomainMismatch",
        }
    }
}

/// A failed check: the error and the child-index path to the offending
/// subterm.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{error} at path {path:?}")]
pub struct Rejection {
    pub error: CheckError,
    pub path: Vec<usize>,
}

/// Rule names in pre-order.
pub type Trace = Vec<Rule>;

pub type CheckResult = Result<Trace, Rejection>;

struct Checker<'a, I: Instance> {
    sig: &'a I,
    trace: Trace,
    path: Vec<usize>,
}

impl<'a, I: Instance> Checker<'a, I> {
    fn reject(&self, error: CheckError) -> Rejection {
        Rejection {
            error,
            path: self.path.clone(),
        }
    }

    fn child<T>(&mut self, i: usize, f: impl FnOnce(&mut Self) -> Result<T, Rejection>) -> Result<T, Rejection> {
        self.path.push(i);
        let r = f(self);
        self.path.pop();
        r
    }

    fn pos(&mut self, ctx: &Context<I>, t: &Positive<I>, m: &I::Molecule) -> Result<(), Rejection> {
        if !self.sig.is_molecule(m) {
            return Err(self.reject(CheckError::NotAMolecule(m.to_string())));
        }
        self.trace.push(Rule::Sync);
        let mark = self.trace.len();
        let mut first_err = None;
        for (p, delta) in self.sig.decompositions(m) {
            if p != t.pattern {
                continue;
            }
            match self.child(0, |c| c.dec(ctx, &t.dec, &delta)) {
                Ok(()) => return Ok(()),
                Err(e) => {
                    self.trace.truncate(mark);
                    first_err.get_or_insert(e);
                }
            }
        }
        Err(first_err.unwrap_or_else(|| {
            self.reject(CheckError::NoSuchDecomposition {
                pattern: t.pattern.to_string(),
                molecule: m.to_string(),
            })
        }))
    }

    fn dec(&mut self, ctx: &Context<I>, d: &DecTerm<I>, delta: &TypeDec<I>) -> Result<(), Rejection> {
        match (d, delta) {
            (DecTerm::Unit, Decomposition::Unit) => {
                self.trace.push(Rule::Unit);
                Ok(())
            }
            (DecTerm::Pair(d1, d2), Decomposition::Pair(x1, x2)) => {
                self.trace.push(Rule::Pair);
                self.child(0, |c| c.dec(ctx, d1, x1))?;
                self.child(1, |c| c.dec(ctx, d2, x2))
            }
            (DecTerm::Label(x), Decomposition::PosLeaf(a)) => {
                self.trace.push(Rule::Init);
                match ctx.lookup_pos(x) {
                    None => Err(self.reject(CheckError::UnboundLabel(x.to_string()))),
                    Some(found) if found == a => Ok(()),
                    Some(found) => Err(self.reject(CheckError::InitMismatch {
                        label: x.to_string(),
                        expected: a.to_string(),
                        found: found.to_string(),
                    })),
                }
            }
            (DecTerm::Branches(f), Decomposition::NegLeaf(m)) => self.refute(ctx, f, m),
            _ => Err(self.reject(CheckError::ShapeMismatch {
                term: dec_term_kind(d).to_string(),
                expected: dec_kind(delta).to_string(),
            })),
        }
    }

    fn refute(&mut self, ctx: &Context<I>, f: &BranchMap<I>, m: &I::Molecule) -> Result<(), Rejection> {
        if !self.sig.is_molecule(m) {
            return Err(self.reject(CheckError::NotAMolecule(m.to_string())));
        }
        self.trace.push(Rule::Async);
        let decs = self.sig.decompositions(m);
        let expected: BTreeSet<&I::Pattern> = decs.iter().map(|(p, _)| p).collect();
        let domain: BTreeSet<&I::Pattern> = f.keys().collect();
        if expected != domain {
            return Err(self.reject(CheckError::AsyncDomainMismatch {
                missing: expected.difference(&domain).map(|p| p.to_string()).collect(),
                extra: domain.difference(&expected).map(|p| p.to_string()).collect(),
            }));
        }
        let index: HashMap<&I::Pattern, usize> = f.keys().enumerate().map(|(i, p)| (p, i)).collect();
        for (p, delta) in &decs {
            let ext = self.sig.extend(ctx, delta);
            self.child(index[p], |c| c.cmd(&ext, &f[p]))?;
        }
        Ok(())
    }

    fn cmd(&mut self, ctx: &Context<I>, c: &Command<I>) -> Result<(), Rejection> {
        match c {
            Command::Select(x, t) => {
                self.trace.push(Rule::Select);
                let m = ctx
                    .lookup_neg(x)
                    .ok_or_else(|| self.reject(CheckError::UnboundLabel(x.to_string())))?
                    .clone();
                self.child(0, |c| c.pos(ctx, t, &m))
            }
            Command::Cut { branches, molecule, arg } => {
                self.trace.push(Rule::Cut);
                self.child(0, |c| c.refute(ctx, branches, molecule))?;
                self.child(1, |c| c.pos(ctx, arg, molecule))
            }
        }
    }
}

fn dec_term_kind<I: Instance>(d: &DecTerm<I>) -> &'static str {
    match d {
        DecTerm::Label(_) => "a label",
        DecTerm::Branches(_) => "a branch function",
        DecTerm::Unit => "()",
        DecTerm::Pair(..) => "a pair",
    }
}

fn dec_kind<A, B>(d: &Decomposition<A, B>) -> &'static str {
    match d {
        Decomposition::PosLeaf(_) => "an atom",
        Decomposition::NegLeaf(_) => "a refuted molecule",
        Decomposition::Unit => "●",
        Decomposition::Pair(..) => "a pair",
    }
}

fn run<I: Instance>(sig: &I, f: impl FnOnce(&mut Checker<'_, I>) -> Result<(), Rejection>) -> CheckResult {
    let mut checker = Checker {
        sig,
        trace: Vec::new(),
        path: Vec::new(),
    };
    f(&mut checker)?;
    Ok(checker.trace)
}

/// `Γ ⊢ t⁺ : M`
pub fn check_pos<I: Instance>(sig: &I, ctx: &Context<I>, t: &Positive<I>, m: &I::Molecule) -> CheckResult {
    run(sig, |c| c.pos(ctx, t, m))
}

/// `Γ ⊢ d : Δ`
pub fn check_dec<I: Instance>(sig: &I, ctx: &Context<I>, d: &DecTerm<I>, delta: &TypeDec<I>) -> CheckResult {
    run(sig, |c| c.dec(ctx, d, delta))
}

/// `Γ ⊢ c`
pub fn check_cmd<I: Instance>(sig: &I, ctx: &Context<I>, c: &Command<I>) -> CheckResult {
    run(sig, |k| k.cmd(ctx, c))
}

pub fn check_judgment<I: Instance>(sig: &I, j: &Judgment<I>) -> CheckResult {
    match &j.goal {
        Goal::Pos { term, molecule } => check_pos(sig, &j.context, term, molecule),
        Goal::Dec { term, dec } => check_dec(sig, &j.context, term, dec),
        Goal::Cmd(c) => check_cmd(sig, &j.context, c),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WellFoundedError<M: fmt::Display> {
    #[error("universe not closed: {missing} occurs refuted in a decomposition of {parent}")]
    UniverseNotClosed { missing: M, parent: M },
    #[error("cycle in the decomposition order: {}", .0.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(" ≺ "))]
    CycleFound(Vec<M>),
}

/// Edges `(M′, M)` with `M′ ≺ M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionOrder<M> {
    pub edges: Vec<(M, M)>,
}

/// Checks that `≺` restricted to `universe` is acyclic.
pub fn check_well_founded<I: Instance>(
    sig: &I,
    universe: &[I::Molecule],
) -> Result<DecompositionOrder<I::Molecule>, WellFoundedError<I::Molecule>> {
    let members: BTreeSet<&I::Molecule> = universe.iter().collect();
    let mut edges = Vec::new();
    let mut succ: HashMap<&I::Molecule, Vec<I::Molecule>> = HashMap::new();
    for m in &members {
        let mut smaller = BTreeSet::new();
        for (_, delta) in sig.decompositions(m) {
            for leaf in delta.neg_leaves() {
                if !members.contains(leaf) {
                    return Err(WellFoundedError::UniverseNotClosed {
                        missing: leaf.clone(),
                        parent: (*m).clone(),
                    });
                }
                smaller.insert(leaf.clone());
            }
        }
        for s in &smaller {
            edges.push((s.clone(), (*m).clone()));
        }
        succ.insert(m, smaller.into_iter().collect());
    }

    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        Fresh,
        Open,
        Done,
    }
    let mut marks: HashMap<&I::Molecule, Mark> = members.iter().map(|m| (*m, Mark::Fresh)).collect();
    for root in &members {
        if marks[root] != Mark::Fresh {
            continue;
        }
        // iterative DFS, stack of (node, next successor index)
        let mut stack: Vec<(&I::Molecule, usize)> = vec![(root, 0)];
        marks.insert(root, Mark::Open);
        while let Some((node, i)) = stack.last().cloned() {
            let next = succ[node].get(i);
            stack.last_mut().unwrap().1 += 1;
            match next {
                None => {
                    marks.insert(node, Mark::Done);
                    stack.pop();
                }
                Some(n) => {
                    let n = *members.get(n).unwrap();
                    match marks[n] {
                        Mark::Fresh => {
                            marks.insert(n, Mark::Open);
                            stack.push((n, 0));
                        }
                        Mark::Open => {
                            let start = stack.iter().position(|(m, _)| *m == n).unwrap();
                            let cycle = stack[start..].iter().map(|(m, _)| (*m).clone()).collect();
                            return Err(WellFoundedError::CycleFound(cycle));
                        }
                        Mark::Done => {}
                    }
                }
            }
        }
    }
    Ok(DecompositionOrder { edges })
}

/// Checks `structure(Δ) = pattern_structure(p)` for every decomposition of
/// every molecule in `universe`, returning the offending pairs.
pub fn structure_violations<I: Instance>(sig: &I, universe: &[I::Molecule]) -> Vec<(I::Molecule, I::Pattern)> {
    let mut bad = Vec::new();
    for m in universe {
        for (p, delta) in sig.decompositions(m) {
            if delta.structure() != sig.pattern_structure(&p) {
                bad.push((m.clone(), p));
            }
        }
    }
    bad
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::contexts::ParametricContext;

    /// A table-driven instance: molecules and atoms are small integers.
    #[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
    struct Table {
        rules: BTreeMap<u8, Vec<(u8, Decomposition<u8, u8>)>>,
    }

    impl Instance for Table {
        type Atom = u8;
        type Molecule = u8;
        type Pattern = u8;
        type PosLabel = crate::contexts::PosLabel;
        type NegLabel = crate::contexts::NegLabel;
        type Store<A: Payload, B: Payload> = ParametricContext<A, B>;

        fn decompositions(&self, m: &u8) -> Vec<(u8, Decomposition<u8, u8>)> {
            self.rules.get(m).cloned().unwrap_or_default()
        }

        fn pattern_structure(&self, p: &u8) -> DecStructure {
            self.rules
                .values()
                .flatten()
                .find(|(q, _)| q == p)
                .map(|(_, d)| d.structure())
                .unwrap_or(Decomposition::Unit)
        }

        fn empty_context(&self) -> Context<Self> {
            ParametricContext::empty()
        }
    }

    #[test]
    fn self_loop_is_a_cycle() {
        let sig = Table {
            rules: BTreeMap::from([(7, vec![(0, Decomposition::NegLeaf(7))])]),
        };
        assert_eq!(check_well_founded(&sig, &[7]), Err(WellFoundedError::CycleFound(vec![7])));
    }

    #[test]
    fn longer_cycle_and_open_universe() {
        let sig = Table {
            rules: BTreeMap::from([
                (1, vec![(0, Decomposition::NegLeaf(2))]),
                (2, vec![(0, Decomposition::NegLeaf(3))]),
                (3, vec![(0, Decomposition::NegLeaf(1))]),
            ]),
        };
        match check_well_founded(&sig, &[1, 2, 3]) {
            Err(WellFoundedError::CycleFound(c)) => assert_eq!(c.len(), 3),
            other => panic!("expected a cycle, got {other:?}"),
        }
        assert_eq!(
            check_well_founded(&sig, &[1]),
            Err(WellFoundedError::UniverseNotClosed { missing: 2, parent: 1 })
        );
    }

    #[test]
    fn relational_instance_tries_every_candidate() {
        // pattern 0 decomposes molecule 1 two ways; only the second fits
        let sig = Table {
            rules: BTreeMap::from([(
                1,
                vec![(0, Decomposition::PosLeaf(5)), (0, Decomposition::PosLeaf(6))],
            )]),
        };
        let ctx = ParametricContext::new(vec![6], vec![]);
        let t = Positive::<Table>::new(0, DecTerm::Label(crate::contexts::PosLabel(0)));
        assert_eq!(check_pos(&sig, &ctx, &t, &1), Ok(vec![Rule::Sync, Rule::Init]));

        // and async must handle both extensions with the one branch
        let refute = DecTerm::<Table>::branches([(
            0,
            Command::Select(
                crate::contexts::NegLabel(0),
                Positive::new(0, DecTerm::Label(crate::contexts::PosLabel(1))),
            ),
        )]);
        let ctx = ParametricContext::new(vec![6], vec![1]);
        // the branch's label #1 points at 5 in one extension and 6 in the other
        let r = check_dec(&sig, &ctx, &refute, &Decomposition::NegLeaf(1));
        assert!(r.is_ok(), "{r:?}");
    }

    #[test]
    fn shape_mismatch_reports_path() {
        let sig = Table { rules: BTreeMap::from([(1, vec![(0, Decomposition::Unit)])]) };
        let ctx = ParametricContext::empty();
        let t = Positive::<Table>::new(0, DecTerm::pair(DecTerm::Unit, DecTerm::Unit));
        let err = check_pos(&sig, &ctx, &t, &1).unwrap_err();
        assert_eq!(err.error.kind(), "ShapeMismatch");
        assert_eq!(err.path, vec![0]);
    }
}
