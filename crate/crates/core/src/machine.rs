//! Head reduction of commands with environments and closures.
//!
//! `⟨ρ | ⟨f | p·d⟩⟩ → ⟨ρ;d′ | f(p)⟩`, where `d′` is `d` evaluated in `ρ`.
//! Selecting a stored closure continues in the closure's environment;
//! selecting an opaque constant ends the run.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

use crate::contexts::{Decomposition, Place, Store};
use crate::kernel::{Context, Instance};
use crate::term::{BranchMap, Command, DecTerm};

/// A positive runtime token.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PosVal(pub Arc<str>);

impl fmt::Display for PosVal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

pub struct Closure<I: Instance> {
    pub branches: BranchMap<I>,
    pub env: Env<I>,
}

impl<I: Instance> fmt::Debug for Closure<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Closure").field("branches", &self.branches.len()).finish_non_exhaustive()
    }
}

/// Closures compare by identity.
#[derive(Debug)]
pub enum NegVal<I: Instance> {
    Closure(Arc<Closure<I>>),
    Opaque(Arc<str>),
}

impl<I: Instance> Clone for NegVal<I> {
    fn clone(&self) -> Self {
        match self {
            NegVal::Closure(c) => NegVal::Closure(Arc::clone(c)),
            NegVal::Opaque(n) => NegVal::Opaque(Arc::clone(n)),
        }
    }
}

impl<I: Instance> NegVal<I> {
    fn key(&self) -> (u8, usize, &str) {
        match self {
            NegVal::Closure(c) => (0, Arc::as_ptr(c) as usize, ""),
            NegVal::Opaque(n) => (1, 0, n),
        }
    }
}

impl<I: Instance> PartialEq for NegVal<I> {
    fn eq(&self, other: &Self) -> bool {
        self.key() == other.key()
    }
}

impl<I: Instance> Eq for NegVal<I> {}

impl<I: Instance> PartialOrd for NegVal<I> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<I: Instance> Ord for NegVal<I> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl<I: Instance> Hash for NegVal<I> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key().hash(state)
    }
}

impl<I: Instance> fmt::Display for NegVal<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NegVal::Closure(c) => write!(f, "<closure/{}>", c.branches.len()),
            NegVal::Opaque(n) => f.write_str(n),
        }
    }
}

pub type Value<I> = Decomposition<PosVal, NegVal<I>>;
pub type Env<I> = <I as Instance>::Store<PosVal, NegVal<I>>;

pub struct Config<I: Instance> {
    pub env: Env<I>,
    pub command: Command<I>,
}

impl<I: Instance> Clone for Config<I> {
    fn clone(&self) -> Self {
        Config {
            env: self.env.clone(),
            command: self.command.clone(),
        }
    }
}

impl<I: Instance> fmt::Debug for Config<I> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Config")
            .field("env", &self.env.sizes())
            .field("command", &self.command)
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MachineError {
    #[error("no branch for pattern {0}")]
    MissingBranch(String),
    #[error("unbound label {0}")]
    UnboundLabel(String),
    #[error("value does not fit pattern {0}")]
    ShapeMismatch(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HaltReason {
    /// An answer was delivered to an opaque continuation.
    ReachedOpaque(String),
}

impl fmt::Display for HaltReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HaltReason::ReachedOpaque(n) => write!(f, "reached opaque {n}"),
        }
    }
}

#[derive(Debug)]
pub enum Step<I: Instance> {
    Next(Config<I>),
    Halt(HaltReason),
    Stuck(MachineError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Halted { trace: Vec<String>, reason: HaltReason },
    StuckAt { trace: Vec<String>, error: MachineError },
    OutOfFuel { trace: Vec<String> },
}

impl Outcome {
    pub fn trace(&self) -> &[String] {
        match self {
            Outcome::Halted { trace, .. } | Outcome::StuckAt { trace, .. } | Outcome::OutOfFuel { trace } => trace,
        }
    }

    pub fn steps(&self) -> usize {
        self.trace().len()
    }
}

/// `d′`
pub fn eval_dec<I: Instance>(env: &Env<I>, d: &DecTerm<I>) -> Result<Value<I>, MachineError> {
    Ok(match d {
        DecTerm::Label(x) => Decomposition::PosLeaf(
            env.lookup_pos(x)
                .cloned()
                .ok_or_else(|| MachineError::UnboundLabel(x.to_string()))?,
        ),
        DecTerm::Branches(f) => Decomposition::NegLeaf(NegVal::Closure(Arc::new(Closure {
            branches: f.clone(),
            env: env.clone(),
        }))),
        DecTerm::Unit => Decomposition::Unit,
        DecTerm::Pair(l, r) => Decomposition::pair(eval_dec(env, l)?, eval_dec(env, r)?),
    })
}

/// Values carry no types, so leaves are placed by the pattern that
/// produced them.
fn extend_by_pattern<I: Instance>(
    sig: &I,
    env: &Env<I>,
    p: &I::Pattern,
    v: &Value<I>,
) -> Result<Env<I>, MachineError> {
    let places = sig.pattern_places(p);
    if v.structure() != sig.pattern_structure(p) || places.len() != v.leaf_count() {
        return Err(MachineError::ShapeMismatch(p.to_string()));
    }
    let mut places = places.into_iter();
    Ok(env.extend_placed(v, |_| places.next().unwrap_or(Place::Stable)))
}

fn enter<I: Instance>(sig: &I, f: &BranchMap<I>, base: &Env<I>, p: &I::Pattern, v: &Value<I>) -> Step<I> {
    let Some(body) = f.get(p) else {
        return Step::Stuck(MachineError::MissingBranch(p.to_string()));
    };
    match extend_by_pattern(sig, base, p, v) {
        Ok(env) => Step::Next(Config {
            env,
            command: body.clone(),
        }),
        Err(e) => Step::Stuck(e),
    }
}

pub fn step<I: Instance>(sig: &I, cfg: &Config<I>) -> Step<I> {
    match &cfg.command {
        Command::Cut { branches, arg, .. } => match eval_dec(&cfg.env, &arg.dec) {
            Ok(v) => enter(sig, branches, &cfg.env, &arg.pattern, &v),
            Err(e) => Step::Stuck(e),
        },
        Command::Select(x, arg) => {
            let Some(target) = cfg.env.lookup_neg(x) else {
                return Step::Stuck(MachineError::UnboundLabel(x.to_string()));
            };
            match target {
                NegVal::Opaque(n) => Step::Halt(HaltReason::ReachedOpaque(n.to_string())),
                NegVal::Closure(c) => match eval_dec(&cfg.env, &arg.dec) {
                    Ok(v) => enter(sig, &c.branches, &c.env, &arg.pattern, &v),
                    Err(e) => Step::Stuck(e),
                },
            }
        }
    }
}

pub fn command_head<I: Instance>(c: &Command<I>) -> String {
    match c {
        Command::Select(x, t) => format!("select {x} {}", t.pattern),
        Command::Cut { molecule, arg, .. } => format!("cut {} on {molecule}", arg.pattern),
    }
}

pub fn trace_line<I: Instance>(n: usize, cfg: &Config<I>) -> String {
    let (p, q, rs) = cfg.env.sizes();
    format!("step {n}: {} | env sizes ({p},{q},{rs})", command_head(&cfg.command))
}

/// Steps at most `fuel` times.
pub fn run<I: Instance>(sig: &I, cfg: Config<I>, fuel: usize) -> Outcome {
    let mut trace = Vec::new();
    let mut cfg = cfg;
    for n in 1..=fuel {
        trace.push(trace_line(n, &cfg));
        match step(sig, &cfg) {
            Step::Next(next) => cfg = next,
            Step::Halt(reason) => return Outcome::Halted { trace, reason },
            Step::Stuck(error) => return Outcome::StuckAt { trace, error },
        }
    }
    Outcome::OutOfFuel { trace }
}

/// An environment with the label domains of `ctx`: fresh tokens for
/// positive labels, opaque constants for negative ones.
pub fn opaque_env<I: Instance>(ctx: &Context<I>) -> Env<I> {
    let pos = ctx
        .pos_labels()
        .into_iter()
        .enumerate()
        .map(|(i, x)| (x, PosVal(format!("v{i}").into())))
        .collect();
    let neg = ctx
        .neg_labels()
        .into_iter()
        .enumerate()
        .map(|(i, x)| (x, NegVal::Opaque(format!("k{i}").into())))
        .collect();
    Env::<I>::from_bindings(pos, neg).expect("domains taken from a valid context")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contexts::{NegLabel, ParametricContext, PosLabel};
    use crate::j::{FormulaJ, JNegLabel, JPosLabel, PatternJ, Positioned, J};
    use crate::k1::{Choice, FormulaK1, PatternK1, K1};
    use crate::term::Positive;

    fn unit_k1() -> Positive<K1> {
        Positive::new(PatternK1::True, DecTerm::Unit)
    }

    fn halt() -> Command<K1> {
        Command::Select(NegLabel(0), unit_k1())
    }

    fn k_env(pos: usize, opaque: usize) -> Env<K1> {
        ParametricContext::new(
            (0..pos).map(|i| PosVal(format!("v{i}").into())).collect(),
            (0..opaque).map(|i| NegVal::Opaque(format!("k{i}").into())).collect(),
        )
    }

    #[test]
    fn eval_examples() {
        let env = k_env(1, 0);
        assert_eq!(eval_dec::<K1>(&env, &DecTerm::Unit), Ok(Decomposition::Unit));
        assert_eq!(
            eval_dec::<K1>(&env, &DecTerm::Label(PosLabel(0))),
            Ok(Decomposition::PosLeaf(PosVal("v0".into())))
        );
        let f = BranchMap::<K1>::from([(PatternK1::True, halt())]);
        match eval_dec::<K1>(&env, &DecTerm::Branches(f.clone())) {
            Ok(Decomposition::NegLeaf(NegVal::Closure(c))) => {
                assert_eq!(c.branches, f);
                assert_eq!(c.env, env);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            eval_dec::<K1>(&env, &DecTerm::Label(PosLabel(3))),
            Err(MachineError::UnboundLabel("#3".into()))
        );
    }

    #[test]
    fn cut_rule() {
        let env = k_env(0, 1);
        let c = Command::Cut {
            branches: BranchMap::from([(PatternK1::True, halt())]),
            molecule: FormulaK1::TrueP,
            arg: unit_k1(),
        };
        match step(&K1, &Config { env: env.clone(), command: c }) {
            Step::Next(next) => {
                assert_eq!(next.env, env);
                assert_eq!(next.command, halt());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn opaque_and_unbound() {
        match step(&K1, &Config { env: k_env(0, 1), command: halt() }) {
            Step::Halt(HaltReason::ReachedOpaque(n)) => assert_eq!(n, "k0"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            step(&K1, &Config { env: k_env(0, 0), command: halt() }),
            Step::Stuck(MachineError::UnboundLabel(_))
        ));
    }

    #[test]
    fn missing_branch_is_stuck() {
        let c = Command::Cut {
            branches: BranchMap::new(),
            molecule: FormulaK1::TrueP,
            arg: unit_k1(),
        };
        let out = run(&K1, Config { env: k_env(0, 0), command: c }, 10);
        assert_eq!(
            out,
            Outcome::StuckAt {
                trace: vec!["step 1: cut unit on true+ | env sizes (0,0,0)".into()],
                error: MachineError::MissingBranch("unit".into()),
            }
        );
    }

    #[test]
    fn select_enters_closure_environment() {
        // ⟨$1 | pos·#0⟩ where $1 holds {pos ↦ ⟨$0 | unit·()⟩} captured with one negative
        let inner = halt();
        let closure_env = k_env(0, 1);
        let closure = NegVal::Closure(Arc::new(Closure {
            branches: BranchMap::from([(PatternK1::Pos, inner.clone())]),
            env: closure_env.clone(),
        }));
        let mut env = k_env(1, 1);
        env.push_neg(closure, Place::Stable);
        let c = Command::Select(NegLabel(1), Positive::new(PatternK1::Pos, DecTerm::Label(PosLabel(0))));
        match step(&K1, &Config { env, command: c }) {
            Step::Next(next) => {
                assert_eq!(next.env.pos_store(), &[PosVal("v0".into())]);
                assert_eq!(next.env.neg_store().len(), 1);
                assert_eq!(next.command, inner);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn excluded_middle_halts() {
        let inner = Command::Select(
            NegLabel(0),
            Positive::new(PatternK1::inj(Choice::First, PatternK1::Pos), DecTerm::Label(PosLabel(0))),
        );
        let em = Command::Select(
            NegLabel(0),
            Positive::new(
                PatternK1::inj(Choice::Second, PatternK1::Neg),
                DecTerm::branches([(PatternK1::Pos, inner)]),
            ),
        );
        let out = run(&K1, Config { env: k_env(0, 1), command: em }, 10);
        assert!(matches!(out, Outcome::Halted { .. }));
        assert!(out.steps() <= 3);
        assert_eq!(out.trace(), ["step 1: select $0 inr neg | env sizes (0,1,0)"]);
    }

    #[test]
    fn fuel_bounds_steps() {
        // the cut re-enters itself through the stored closure
        let again = Command::Select(
            NegLabel(0),
            Positive::new(PatternK1::Neg, DecTerm::branches([])),
        );
        let c = Command::Cut {
            branches: BranchMap::from([(PatternK1::Neg, again)]),
            molecule: FormulaK1::TrueP,
            arg: Positive::new(PatternK1::Neg, DecTerm::branches([])),
        };
        let out = run(&K1, Config { env: k_env(0, 0), command: c }, 1);
        assert!(matches!(out, Outcome::OutOfFuel { .. }));
        assert_eq!(out.steps(), 1);
    }

    #[test]
    fn j_places_by_pattern() {
        // switch pos_l puts both leaves in the right slot, the last one wins
        let body = Command::<J>::Select(JNegLabel::Stable(0), Positive::new(PatternJ::TrueR, DecTerm::Unit));
        let c = Command::Cut {
            branches: BranchMap::from([(PatternJ::cons(PatternJ::PosR, PatternJ::PosL), body.clone())]),
            molecule: Positioned::left(FormulaJ::imp(FormulaJ::pos_lit("l"), FormulaJ::neg_lit("x"))),
            arg: Positive::new(
                PatternJ::cons(PatternJ::PosR, PatternJ::PosL),
                DecTerm::pair(DecTerm::Label(JPosLabel::Absurd), DecTerm::Label(JPosLabel::Absurd)),
            ),
        };
        let env = opaque_env::<J>(&J.empty_context());
        match step(&J, &Config { env, command: c }) {
            Step::Next(next) => {
                assert_eq!(next.env.sizes(), (1, 0, 1));
                assert_eq!(next.command, body);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn opaque_env_matches_shape() {
        let mut g = J.empty_context();
        g.push_neg(Positioned::right(FormulaJ::TrueP), Place::Right);
        g.push_pos(Positioned::right(FormulaJ::pos_lit("l")), Place::Stable);
        let env = opaque_env::<J>(&g);
        assert_eq!(env.pos_labels(), g.pos_labels());
        assert_eq!(env.neg_labels(), g.neg_labels());
    }
}
