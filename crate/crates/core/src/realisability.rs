//! Finite realisability algebras, the interpretation of proof-terms and
//! types, and a harness that checks the conclusions of adequacy.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::contexts::{Decomposition, Leaf, Place, Store};
use crate::j::{Side, J};
use crate::k1::K1;
use crate::kernel::{check_judgment, Context, Instance, Payload, Rejection, TypeDec};
use crate::term::{BranchMap, Command, DecTerm, Goal, Judgment, Positive};

/// Carriers, orthogonality and the interpretation of patterns, branch
/// functions and atoms. Carriers are finite.
pub trait RealisabilityAlgebra<I: Instance> {
    type Prim: Payload + fmt::Display;
    type Pos: Payload + fmt::Display;
    type Neg: Payload + fmt::Display;

    fn name(&self) -> &str;

    fn prims(&self) -> Vec<Self::Prim>;
    fn positives(&self) -> Vec<Self::Pos>;
    fn negatives(&self) -> Vec<Self::Neg>;

    fn orth(&self, n: &Self::Neg, p: &Self::Pos) -> bool;

    /// `p̂(𝔇)`
    fn pattern_interp(&self, p: &I::Pattern, d: &Decomposition<Self::Prim, Self::Neg>) -> Option<Self::Pos>;

    /// `⟦f⟧ρ`
    fn function_interp(&self, f: &BranchMap<I>, rho: &SemContext<I, Self>) -> Option<Self::Neg>;

    /// `⟦a⟧`
    fn atom_interp(&self, a: &I::Atom) -> BTreeSet<Self::Prim>;

    fn prim_place(&self, _x: &Self::Prim) -> Place {
        Place::Stable
    }

    fn neg_place(&self, _n: &Self::Neg) -> Place {
        Place::Stable
    }

    /// `ρ;𝔇`
    fn extend(&self, rho: &SemContext<I, Self>, d: &SemDec<I, Self>) -> SemContext<I, Self> {
        rho.extend_placed(d, |leaf| match leaf {
            Leaf::Pos(x) => self.prim_place(x),
            Leaf::Neg(n) => self.neg_place(n),
        })
    }

    fn is_boolean(&self) -> bool {
        let pos = self.positives();
        self.negatives().iter().all(|n| pos.iter().all(|p| !self.orth(n, p)))
    }
}

pub type SemDec<I, A> =
    Decomposition<<A as RealisabilityAlgebra<I>>::Prim, <A as RealisabilityAlgebra<I>>::Neg>;
pub type SemContext<I, A> =
    <I as Instance>::Store<<A as RealisabilityAlgebra<I>>::Prim, <A as RealisabilityAlgebra<I>>::Neg>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Denotation<X, P, N> {
    Pos(P),
    Dec(Decomposition<X, N>),
    Cmd(N, P),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SemError {
    #[error("unbound label {0}")]
    UnboundLabel(String),
    #[error("the algebra does not interpret this branch function")]
    UninterpretableFunction,
    #[error("the algebra does not interpret pattern {0} on this decomposition")]
    UninterpretablePattern(String),
    #[error("interpretation of {0} does not terminate: cycle in the decomposition order")]
    NonTerminating(String),
    #[error("label domains differ: {0}")]
    DomainMismatch(String),
    #[error("the algebra is not boolean")]
    NotBoolean,
    #[error("judgment rejected by the kernel: {0}")]
    Unchecked(Rejection),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Adequacy {
    Holds,
    Fails,
    /// `ρ ∉ ⟦Γ⟧`
    VacuouslyTrue,
}

/// An interpretation session: memo tables for molecules and a guard
/// against cyclic decomposition orders.
pub struct Semantics<'a, I: Instance, A: RealisabilityAlgebra<I>> {
    pub sig: &'a I,
    pub alg: &'a A,
    pos_memo: HashMap<I::Molecule, BTreeSet<A::Pos>>,
    neg_memo: HashMap<I::Molecule, BTreeSet<A::Neg>>,
    open: HashSet<I::Molecule>,
}

impl<'a, I: Instance, A: RealisabilityAlgebra<I>> Semantics<'a, I, A> {
    pub fn new(sig: &'a I, alg: &'a A) -> Self {
        Semantics {
            sig,
            alg,
            pos_memo: HashMap::new(),
            neg_memo: HashMap::new(),
            open: HashSet::new(),
        }
    }

    pub fn interp_pos(&self, rho: &SemContext<I, A>, t: &Positive<I>) -> Result<A::Pos, SemError> {
        let d = self.interp_dec(rho, &t.dec)?;
        self.alg
            .pattern_interp(&t.pattern, &d)
            .ok_or_else(|| SemError::UninterpretablePattern(t.pattern.to_string()))
    }

    pub fn interp_dec(&self, rho: &SemContext<I, A>, d: &DecTerm<I>) -> Result<SemDec<I, A>, SemError> {
        Ok(match d {
            DecTerm::Label(x) => Decomposition::PosLeaf(
                rho.lookup_pos(x)
                    .cloned()
                    .ok_or_else(|| SemError::UnboundLabel(x.to_string()))?,
            ),
            DecTerm::Branches(f) => Decomposition::NegLeaf(self.interp_fun(rho, f)?),
            DecTerm::Unit => Decomposition::Unit,
            DecTerm::Pair(l, r) => Decomposition::pair(self.interp_dec(rho, l)?, self.interp_dec(rho, r)?),
        })
    }

    fn interp_fun(&self, rho: &SemContext<I, A>, f: &BranchMap<I>) -> Result<A::Neg, SemError> {
        self.alg.function_interp(f, rho).ok_or(SemError::UninterpretableFunction)
    }

    pub fn interp_cmd(&self, rho: &SemContext<I, A>, c: &Command<I>) -> Result<(A::Neg, A::Pos), SemError> {
        match c {
            Command::Select(x, t) => {
                let n = rho
                    .lookup_neg(x)
                    .cloned()
                    .ok_or_else(|| SemError::UnboundLabel(x.to_string()))?;
                Ok((n, self.interp_pos(rho, t)?))
            }
            Command::Cut { branches, arg, .. } => Ok((self.interp_fun(rho, branches)?, self.interp_pos(rho, arg)?)),
        }
    }

    pub fn interp_term(
        &self,
        rho: &SemContext<I, A>,
        goal: &Goal<I>,
    ) -> Result<Denotation<A::Prim, A::Pos, A::Neg>, SemError> {
        Ok(match goal {
            Goal::Pos { term, .. } => Denotation::Pos(self.interp_pos(rho, term)?),
            Goal::Dec { term, .. } => Denotation::Dec(self.interp_dec(rho, term)?),
            Goal::Cmd(c) => {
                let (n, p) = self.interp_cmd(rho, c)?;
                Denotation::Cmd(n, p)
            }
        })
    }

    /// `⟦M⟧⁺`
    pub fn pos_mol(&mut self, m: &I::Molecule) -> Result<BTreeSet<A::Pos>, SemError> {
        if let Some(s) = self.pos_memo.get(m) {
            return Ok(s.clone());
        }
        if !self.open.insert(m.clone()) {
            return Err(SemError::NonTerminating(m.to_string()));
        }
        let result = self.pos_mol_uncached(m);
        self.open.remove(m);
        let out = result?;
        self.pos_memo.insert(m.clone(), out.clone());
        Ok(out)
    }

    fn pos_mol_uncached(&mut self, m: &I::Molecule) -> Result<BTreeSet<A::Pos>, SemError> {
        let mut out = BTreeSet::new();
        for (p, delta) in self.sig.decompositions(m) {
            for d in self.decomp(&delta)? {
                let v = self
                    .alg
                    .pattern_interp(&p, &d)
                    .ok_or_else(|| SemError::UninterpretablePattern(p.to_string()))?;
                out.insert(v);
            }
        }
        Ok(out)
    }

    /// `⟦M⟧⁻`
    pub fn neg_mol(&mut self, m: &I::Molecule) -> Result<BTreeSet<A::Neg>, SemError> {
        if let Some(s) = self.neg_memo.get(m) {
            return Ok(s.clone());
        }
        let pos = self.pos_mol(m)?;
        let out: BTreeSet<_> = self
            .alg
            .negatives()
            .into_iter()
            .filter(|n| pos.iter().all(|p| self.alg.orth(n, p)))
            .collect();
        self.neg_memo.insert(m.clone(), out.clone());
        Ok(out)
    }

    /// `⟦Δ⟧`, enumerated.
    pub fn decomp(&mut self, delta: &TypeDec<I>) -> Result<Vec<SemDec<I, A>>, SemError> {
        Ok(match delta {
            Decomposition::Unit => vec![Decomposition::Unit],
            Decomposition::PosLeaf(a) => self
                .alg
                .atom_interp(a)
                .into_iter()
                .map(Decomposition::PosLeaf)
                .collect(),
            Decomposition::NegLeaf(m) => self.neg_mol(m)?.into_iter().map(Decomposition::NegLeaf).collect(),
            Decomposition::Pair(l, r) => {
                let left = self.decomp(l)?;
                let right = self.decomp(r)?;
                let mut out = Vec::with_capacity(left.len() * right.len());
                for x in &left {
                    for y in &right {
                        out.push(Decomposition::pair(x.clone(), y.clone()));
                    }
                }
                out
            }
        })
    }

    /// `𝔇 ∈ ⟦Δ⟧`, without enumerating.
    pub fn dec_member(&mut self, d: &SemDec<I, A>, delta: &TypeDec<I>) -> Result<bool, SemError> {
        Ok(match (d, delta) {
            (Decomposition::Unit, Decomposition::Unit) => true,
            (Decomposition::PosLeaf(x), Decomposition::PosLeaf(a)) => self.alg.atom_interp(a).contains(x),
            (Decomposition::NegLeaf(n), Decomposition::NegLeaf(m)) => self.neg_mol(m)?.contains(n),
            (Decomposition::Pair(x1, x2), Decomposition::Pair(d1, d2)) => {
                self.dec_member(x1, d1)? && self.dec_member(x2, d2)?
            }
            _ => false,
        })
    }

    /// `ρ ∈ ⟦Γ⟧`
    pub fn context_member(&mut self, ctx: &Context<I>, rho: &SemContext<I, A>) -> Result<bool, SemError> {
        let pos = ctx.pos_labels();
        let neg = ctx.neg_labels();
        if pos != rho.pos_labels() || neg != rho.neg_labels() {
            return Err(SemError::DomainMismatch(format!(
                "context binds [{}] / [{}], environment binds [{}] / [{}]",
                join(&pos),
                join(&neg),
                join(&rho.pos_labels()),
                join(&rho.neg_labels())
            )));
        }
        for x in &pos {
            let (Some(a), Some(v)) = (ctx.lookup_pos(x), rho.lookup_pos(x)) else {
                unreachable!("label domains agree")
            };
            if !self.alg.atom_interp(a).contains(v) {
                return Ok(false);
            }
        }
        for x in &neg {
            let (Some(m), Some(v)) = (ctx.lookup_neg(x), rho.lookup_neg(x)) else {
                unreachable!("label domains agree")
            };
            if !self.neg_mol(m)?.contains(v) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Checks the adequacy conclusion for an accepted judgment at `ρ`.
    pub fn check_adequacy(&mut self, j: &Judgment<I>, rho: &SemContext<I, A>) -> Result<Adequacy, SemError> {
        check_judgment(self.sig, j).map_err(SemError::Unchecked)?;
        if !self.context_member(&j.context, rho)? {
            return Ok(Adequacy::VacuouslyTrue);
        }
        let holds = match &j.goal {
            Goal::Pos { term, molecule } => {
                let v = self.interp_pos(rho, term)?;
                self.pos_mol(molecule)?.contains(&v)
            }
            Goal::Dec { term, dec } => {
                let d = self.interp_dec(rho, term)?;
                self.dec_member(&d, dec)?
            }
            Goal::Cmd(c) => {
                let (n, p) = self.interp_cmd(rho, c)?;
                self.alg.orth(&n, &p)
            }
        };
        Ok(if holds { Adequacy::Holds } else { Adequacy::Fails })
    }

    /// `⟦M⟧⁺ ≠ ∅`, for boolean algebras.
    pub fn sem_provable(&mut self, m: &I::Molecule) -> Result<bool, SemError> {
        if !self.alg.is_boolean() {
            return Err(SemError::NotBoolean);
        }
        Ok(!self.pos_mol(m)?.is_empty())
    }

    /// Every environment with the label domains of `ctx`, values drawn
    /// from the carriers. `None` if there are more than `limit`.
    pub fn environments(&self, ctx: &Context<I>, limit: usize) -> Option<Vec<SemContext<I, A>>> {
        let pos = ctx.pos_labels();
        let neg = ctx.neg_labels();
        let prims = self.alg.prims();
        let negs = self.alg.negatives();
        let mut count: usize = 1;
        for _ in &pos {
            count = count.checked_mul(prims.len())?;
        }
        for _ in &neg {
            count = count.checked_mul(negs.len())?;
        }
        if count > limit {
            return None;
        }
        let mut out = Vec::with_capacity(count);
        for k in 0..count {
            let mut r = k;
            let mut pick = |len: usize| {
                let i = r % len;
                r /= len;
                i
            };
            let pb = pos.iter().map(|x| (x.clone(), prims[pick(prims.len())].clone())).collect();
            let nb = neg.iter().map(|x| (x.clone(), negs[pick(negs.len())].clone())).collect();
            out.push(SemContext::<I, A>::from_bindings(pb, nb).expect("domains taken from a valid context"));
        }
        Some(out)
    }
}

fn join<T: fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

/// The single element of a unit carrier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Star;

impl fmt::Display for Star {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("•")
    }
}

/// Instances whose context extension ignores the payloads.
pub trait Parametric: Instance {}

impl Parametric for K1 {}

/// Unit carriers everywhere, constant interpretations. With
/// `orth_full` every pair is orthogonal instead of none.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrivialModel {
    orth_full: bool,
}

impl TrivialModel {
    pub fn new() -> Self {
        TrivialModel { orth_full: false }
    }

    pub fn orth_full() -> Self {
        TrivialModel { orth_full: true }
    }
}

impl Default for TrivialModel {
    fn default() -> Self {
        Self::new()
    }
}

impl<I: Parametric> RealisabilityAlgebra<I> for TrivialModel {
    type Prim = Star;
    type Pos = Star;
    type Neg = Star;

    fn name(&self) -> &str {
        if self.orth_full {
            "orth-full"
        } else {
            "trivial"
        }
    }

    fn prims(&self) -> Vec<Star> {
        vec![Star]
    }

    fn positives(&self) -> Vec<Star> {
        vec![Star]
    }

    fn negatives(&self) -> Vec<Star> {
        vec![Star]
    }

    fn orth(&self, _n: &Star, _p: &Star) -> bool {
        self.orth_full
    }

    fn pattern_interp(&self, _p: &I::Pattern, _d: &Decomposition<Star, Star>) -> Option<Star> {
        Some(Star)
    }

    fn function_interp(&self, _f: &BranchMap<I>, _rho: &I::Store<Star, Star>) -> Option<Star> {
        Some(Star)
    }

    fn atom_interp(&self, _a: &I::Atom) -> BTreeSet<Star> {
        BTreeSet::from([Star])
    }
}

/// Which side of the sequent a semantic entry belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Token {
    RightTok,
    LeftTok,
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Token::RightTok => "R",
            Token::LeftTok => "L",
        })
    }
}

/// Boolean model for the intuitionistic instance: entries carry their
/// side so that semantic contexts can mirror the right slot.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PositionalModel;

impl RealisabilityAlgebra<J> for PositionalModel {
    type Prim = Token;
    type Pos = Star;
    type Neg = Token;

    fn name(&self) -> &str {
        "positional"
    }

    fn prims(&self) -> Vec<Token> {
        vec![Token::RightTok, Token::LeftTok]
    }

    fn positives(&self) -> Vec<Star> {
        vec![Star]
    }

    fn negatives(&self) -> Vec<Token> {
        vec![Token::RightTok, Token::LeftTok]
    }

    fn orth(&self, _n: &Token, _p: &Star) -> bool {
        false
    }

    fn pattern_interp(&self, p: &crate::j::PatternJ, d: &Decomposition<Token, Token>) -> Option<Star> {
        (d.structure() == crate::j::pattern_structure_j(p)).then_some(Star)
    }

    fn function_interp(&self, _f: &BranchMap<J>, _rho: &crate::j::JStore<Token, Token>) -> Option<Token> {
        Some(Token::LeftTok)
    }

    fn atom_interp(&self, a: &crate::j::AtomJ) -> BTreeSet<Token> {
        BTreeSet::from([match a.side {
            Side::Right => Token::RightTok,
            Side::Left => Token::LeftTok,
        }])
    }

    fn prim_place(&self, x: &Token) -> Place {
        match x {
            Token::RightTok => Place::Stable,
            Token::LeftTok => Place::Right,
        }
    }

    fn neg_place(&self, n: &Token) -> Place {
        match n {
            Token::LeftTok => Place::Stable,
            Token::RightTok => Place::Right,
        }
    }
}

/// How `ρ;𝔇` is formed when sampling Typing correlation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SemPlacement {
    /// The algebra's own extension.
    Algebra,
    /// Each semantic leaf goes where the typing extension puts the
    /// corresponding leaf of `Δ`.
    FollowTypes,
}

/// Counterexamples found by [`check_hypotheses_sampled`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HypothesisReport {
    pub samples: usize,
    /// Samples whose premises held.
    pub correlation_live: usize,
    pub stability_live: usize,
    pub correlation_failures: usize,
    pub stability_failures: usize,
    /// A few rendered counterexamples.
    pub witnesses: Vec<String>,
}

impl HypothesisReport {
    pub fn clean(&self) -> bool {
        self.correlation_failures == 0 && self.stability_failures == 0
    }
}

/// The typed material samples are drawn from.
#[derive(Clone, Debug)]
pub struct SampleSpace<I: Instance> {
    pub molecules: Vec<I::Molecule>,
    pub atoms: Vec<I::Atom>,
}

impl<I: Instance> SampleSpace<I> {
    /// Molecules as given, atoms from their decompositions.
    pub fn from_universe(sig: &I, molecules: Vec<I::Molecule>) -> Self {
        let mut atoms = BTreeSet::new();
        for m in &molecules {
            for (_, d) in sig.decompositions(m) {
                for leaf in d.leaves() {
                    if let Leaf::Pos(a) = leaf {
                        atoms.insert(a.clone());
                    }
                }
            }
        }
        for x in sig.empty_context().pos_labels() {
            if let Some(a) = sig.empty_context().lookup_pos(&x) {
                atoms.insert(a.clone());
            }
        }
        SampleSpace {
            molecules,
            atoms: atoms.into_iter().collect(),
        }
    }
}

const MAX_WITNESSES: usize = 5;

/// Property-tests Typing correlation and Stability on `samples` random
/// draws.
pub fn check_hypotheses_sampled<I, A, R>(
    sig: &I,
    alg: &A,
    space: &SampleSpace<I>,
    samples: usize,
    placement: SemPlacement,
    rng: &mut R,
) -> Result<HypothesisReport, SemError>
where
    I: Instance,
    A: RealisabilityAlgebra<I>,
    R: Rng,
{
    let mut sem = Semantics::new(sig, alg);
    let mut report = HypothesisReport {
        samples,
        ..Default::default()
    };
    for _ in 0..samples {
        let ctx = random_context(sig, space, rng);
        let rho = random_env(&mut sem, &ctx, rng)?;
        let rho_ok = sem.context_member(&ctx, &rho)?;

        // Typing correlation
        let delta = random_type_dec(sig, space, rng, 2);
        let d = random_sem_dec(&mut sem, &delta, rng)?;
        if rho_ok && sem.dec_member(&d, &delta)? {
            report.correlation_live += 1;
            let ext_ctx = sig.extend(&ctx, &delta);
            let ext_rho = match placement {
                SemPlacement::Algebra => alg.extend(&rho, &d),
                SemPlacement::FollowTypes => follow_types(sig, &rho, &d, &delta),
            };
            let verdict = sem.context_member(&ext_ctx, &ext_rho);
            if !matches!(verdict, Ok(true)) {
                report.correlation_failures += 1;
                if report.witnesses.len() < MAX_WITNESSES {
                    let why = match verdict {
                        Err(e) => e.to_string(),
                        _ => "extended environment outside the extended context".into(),
                    };
                    report.witnesses.push(format!("correlation: Δ = {}: {why}", render_dec(&delta)));
                }
            }
        }

        // Stability
        let Some(m) = space.molecules.choose(rng) else { continue };
        let decs = sig.decompositions(m);
        let Some((p, delta)) = decs.choose(rng) else { continue };
        let dd = random_sem_dec(&mut sem, delta, rng)?;
        if !sem.dec_member(&dd, delta)? {
            continue;
        }
        let ext = alg.extend(&rho, &dd);
        let Some(c) = random_command(sig, space, &ext, rng) else { continue };
        let (n, q) = sem.interp_cmd(&ext, &c)?;
        if !alg.orth(&n, &q) {
            continue;
        }
        report.stability_live += 1;
        let f: BranchMap<I> = BranchMap::from([(p.clone(), c)]);
        let fv = alg.function_interp(&f, &rho).ok_or(SemError::UninterpretableFunction)?;
        let pv = alg
            .pattern_interp(p, &dd)
            .ok_or_else(|| SemError::UninterpretablePattern(p.to_string()))?;
        if !alg.orth(&fv, &pv) {
            report.stability_failures += 1;
            if report.witnesses.len() < MAX_WITNESSES {
                report.witnesses.push(format!("stability: molecule {m}, pattern {p}"));
            }
        }
    }
    Ok(report)
}

fn render_dec<A: fmt::Display, B: fmt::Display>(d: &Decomposition<A, B>) -> String {
    match d {
        Decomposition::PosLeaf(a) => a.to_string(),
        Decomposition::NegLeaf(b) => format!("∙{b}"),
        Decomposition::Unit => "●".into(),
        Decomposition::Pair(l, r) => format!("({}, {})", render_dec(l), render_dec(r)),
    }
}

fn follow_types<I: Instance, X: Payload, N: Payload>(
    sig: &I,
    rho: &I::Store<X, N>,
    d: &Decomposition<X, N>,
    delta: &TypeDec<I>,
) -> I::Store<X, N> {
    let places: Vec<Place> = delta
        .leaves()
        .into_iter()
        .map(|leaf| match leaf {
            Leaf::Pos(a) => sig.atom_place(a),
            Leaf::Neg(m) => sig.molecule_place(m),
        })
        .collect();
    let mut places = places.into_iter();
    rho.extend_placed(d, |_| places.next().expect("𝔇 has the structure of Δ"))
}

fn random_type_dec<I: Instance, R: Rng>(sig: &I, space: &SampleSpace<I>, rng: &mut R, depth: usize) -> TypeDec<I> {
    match rng.gen_range(0..if depth == 0 { 4 } else { 5 }) {
        0 => Decomposition::Unit,
        1 => match space.atoms.choose(rng) {
            Some(a) => Decomposition::PosLeaf(a.clone()),
            None => Decomposition::Unit,
        },
        2 => match space.molecules.choose(rng) {
            Some(m) => Decomposition::NegLeaf(m.clone()),
            None => Decomposition::Unit,
        },
        3 => {
            let decs: Vec<_> = space
                .molecules
                .choose(rng)
                .map(|m| sig.decompositions(m))
                .unwrap_or_default();
            decs.choose(rng).map(|(_, d)| d.clone()).unwrap_or(Decomposition::Unit)
        }
        _ => Decomposition::pair(
            random_type_dec(sig, space, rng, depth - 1),
            random_type_dec(sig, space, rng, depth - 1),
        ),
    }
}

fn random_context<I: Instance, R: Rng>(sig: &I, space: &SampleSpace<I>, rng: &mut R) -> Context<I> {
    let mut ctx = sig.empty_context();
    for _ in 0..rng.gen_range(0..4) {
        let d = random_type_dec(sig, space, rng, 1);
        ctx = sig.extend(&ctx, &d);
    }
    ctx
}

/// A random element of `⟦Δ⟧` when one exists, otherwise any `𝔇` of the
/// right structure.
fn random_sem_dec<I: Instance, A: RealisabilityAlgebra<I>, R: Rng>(
    sem: &mut Semantics<'_, I, A>,
    delta: &TypeDec<I>,
    rng: &mut R,
) -> Result<SemDec<I, A>, SemError> {
    Ok(match delta {
        Decomposition::Unit => Decomposition::Unit,
        Decomposition::PosLeaf(a) => {
            let good: Vec<_> = sem.alg.atom_interp(a).into_iter().collect();
            let pool = if good.is_empty() || rng.gen_bool(0.05) { sem.alg.prims() } else { good };
            Decomposition::PosLeaf(pool.choose(rng).expect("carriers are non-empty").clone())
        }
        Decomposition::NegLeaf(m) => {
            let good: Vec<_> = sem.neg_mol(m)?.into_iter().collect();
            let pool = if good.is_empty() || rng.gen_bool(0.05) { sem.alg.negatives() } else { good };
            Decomposition::NegLeaf(pool.choose(rng).expect("carriers are non-empty").clone())
        }
        Decomposition::Pair(l, r) => Decomposition::pair(random_sem_dec(sem, l, rng)?, random_sem_dec(sem, r, rng)?),
    })
}

fn random_env<I: Instance, A: RealisabilityAlgebra<I>, R: Rng>(
    sem: &mut Semantics<'_, I, A>,
    ctx: &Context<I>,
    rng: &mut R,
) -> Result<SemContext<I, A>, SemError> {
    let mut pos = Vec::new();
    for x in ctx.pos_labels() {
        let a = ctx.lookup_pos(&x).expect("label from the domain");
        let Decomposition::PosLeaf(v) = random_sem_dec(sem, &Decomposition::PosLeaf(a.clone()), rng)? else {
            unreachable!()
        };
        pos.push((x, v));
    }
    let mut neg = Vec::new();
    for x in ctx.neg_labels() {
        let m = ctx.lookup_neg(&x).expect("label from the domain");
        let Decomposition::NegLeaf(v) = random_sem_dec(sem, &Decomposition::NegLeaf(m.clone()), rng)? else {
            unreachable!()
        };
        neg.push((x, v));
    }
    Ok(SemContext::<I, A>::from_bindings(pos, neg).expect("domains taken from a valid context"))
}

/// A command whose labels are bound in `rho`; types are irrelevant here.
fn random_command<I: Instance, X: Payload, N: Payload, R: Rng>(
    sig: &I,
    space: &SampleSpace<I>,
    rho: &I::Store<X, N>,
    rng: &mut R,
) -> Option<Command<I>> {
    let m = space.molecules.choose(rng)?;
    let decs = sig.decompositions(m);
    let (p, delta) = decs.choose(rng)?;
    let labels = rho.pos_labels();
    let dec = random_dec_term(&delta.structure(), &labels, rng)?;
    let arg = Positive::new(p.clone(), dec);
    let neg = rho.neg_labels();
    match neg.choose(rng) {
        Some(x) if rng.gen_bool(0.5) => Some(Command::Select(x.clone(), arg)),
        _ => Some(Command::Cut {
            branches: BranchMap::new(),
            molecule: m.clone(),
            arg,
        }),
    }
}

fn random_dec_term<I: Instance, R: Rng>(
    shape: &crate::contexts::DecStructure,
    labels: &[I::PosLabel],
    rng: &mut R,
) -> Option<DecTerm<I>> {
    Some(match shape {
        Decomposition::Unit => DecTerm::Unit,
        Decomposition::PosLeaf(()) => DecTerm::Label(labels.choose(rng)?.clone()),
        Decomposition::NegLeaf(()) => DecTerm::Branches(BranchMap::new()),
        Decomposition::Pair(l, r) => DecTerm::pair(random_dec_term(l, labels, rng)?, random_dec_term(r, labels, rng)?),
    })
}
