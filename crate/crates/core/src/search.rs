//! Bounded proof search by rule inversion, with iterative deepening on
//! phase depth. Cut molecules come from a finite candidate set.

use std::collections::{BTreeSet, HashSet};

use crate::contexts::{acc_neg_set, acc_pos_set, Decomposition, Store};
use crate::kernel::{check_cmd, check_dec, check_pos, Context, Instance, TypeDec};
use crate::term::{BranchMap, Command, DecTerm, Positive};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    /// Phase-alternation depth.
    pub depth: usize,
    /// Async nodes with more branches than this are abandoned.
    pub branch_cap: Option<usize>,
}

impl SearchBudget {
    pub fn depth(depth: usize) -> Self {
        SearchBudget { depth, branch_cap: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum GoalKey<I: Instance> {
    Pos(I::Molecule),
    Refute(I::Molecule),
    Dec(TypeDec<I>),
    Cmd,
}

type Key<I> = (
    Vec<<I as Instance>::Atom>,
    Vec<<I as Instance>::Molecule>,
    GoalKey<I>,
    usize,
);

pub struct Searcher<'a, I: Instance> {
    sig: &'a I,
    candidates: Vec<I::Molecule>,
    branch_cap: Option<usize>,
    // derivability only depends on the accessible atoms and molecules
    failed: HashSet<Key<I>>,
}

impl<'a, I: Instance> Searcher<'a, I> {
    pub fn new(sig: &'a I, candidates: &[I::Molecule], branch_cap: Option<usize>) -> Self {
        let uniq: BTreeSet<_> = candidates.iter().filter(|m| sig.is_molecule(m)).cloned().collect();
        Searcher {
            sig,
            candidates: uniq.into_iter().collect(),
            branch_cap,
            failed: HashSet::new(),
        }
    }

    fn key(&self, ctx: &Context<I>, goal: GoalKey<I>, depth: usize) -> Key<I> {
        (
            acc_pos_set(ctx).into_iter().collect(),
            acc_neg_set(ctx).into_iter().collect(),
            goal,
            depth,
        )
    }

    fn memo<T>(
        &mut self,
        ctx: &Context<I>,
        goal: GoalKey<I>,
        depth: usize,
        f: impl FnOnce(&mut Self) -> Option<T>,
    ) -> Option<T> {
        let key = self.key(ctx, goal, depth);
        if self.failed.contains(&key) {
            return None;
        }
        let r = f(self);
        if r.is_none() {
            self.failed.insert(key);
        }
        r
    }

    /// Exactly `depth` or less.
    pub fn pos(&mut self, ctx: &Context<I>, m: &I::Molecule, depth: usize) -> Option<Positive<I>> {
        if depth == 0 || !self.sig.is_molecule(m) {
            return None;
        }
        self.memo(ctx, GoalKey::Pos(m.clone()), depth, |s| {
            for (p, delta) in s.sig.decompositions(m) {
                if let Some(d) = s.dec(ctx, &delta, depth) {
                    return Some(Positive::new(p, d));
                }
            }
            None
        })
    }

    pub fn dec(&mut self, ctx: &Context<I>, delta: &TypeDec<I>, depth: usize) -> Option<DecTerm<I>> {
        match delta {
            Decomposition::Unit => Some(DecTerm::Unit),
            Decomposition::PosLeaf(a) => ctx
                .pos_labels()
                .into_iter()
                .find(|x| ctx.lookup_pos(x) == Some(a))
                .map(DecTerm::Label),
            Decomposition::NegLeaf(m) => self.refute(ctx, m, depth).map(DecTerm::Branches),
            Decomposition::Pair(l, r) => self.memo(ctx, GoalKey::Dec(delta.clone()), depth, |s| {
                let dl = s.dec(ctx, l, depth)?;
                let dr = s.dec(ctx, r, depth)?;
                Some(DecTerm::pair(dl, dr))
            }),
        }
    }

    pub fn refute(&mut self, ctx: &Context<I>, m: &I::Molecule, depth: usize) -> Option<BranchMap<I>> {
        if !self.sig.is_molecule(m) {
            return None;
        }
        self.memo(ctx, GoalKey::Refute(m.clone()), depth, |s| {
            let decs = s.sig.decompositions(m);
            if s.branch_cap.is_some_and(|cap| decs.len() > cap) {
                return None;
            }
            let mut f = BranchMap::new();
            for (p, delta) in decs {
                if depth == 0 {
                    return None;
                }
                let ext = s.sig.extend(ctx, &delta);
                let c = s.cmd(&ext, depth - 1)?;
                f.insert(p, c);
            }
            Some(f)
        })
    }

    pub fn cmd(&mut self, ctx: &Context<I>, depth: usize) -> Option<Command<I>> {
        if depth == 0 {
            return None;
        }
        self.memo(ctx, GoalKey::Cmd, depth, |s| {
            for x in ctx.neg_labels() {
                let m = ctx.lookup_neg(&x).expect("label from the domain").clone();
                if let Some(t) = s.pos(ctx, &m, depth) {
                    return Some(Command::Select(x, t));
                }
            }
            for m in s.candidates.clone() {
                let Some(arg) = s.pos(ctx, &m, depth) else { continue };
                if let Some(branches) = s.refute(ctx, &m, depth) {
                    return Some(Command::Cut {
                        branches,
                        molecule: m,
                        arg,
                    });
                }
            }
            None
        })
    }
}

fn deepen<T>(budget: SearchBudget, f: impl FnMut(usize) -> Option<T>) -> Option<T> {
    (0..=budget.depth).find_map(f)
}

// Everything returned below has been re-checked by the kernel.

pub fn search_pos<I: Instance>(
    sig: &I,
    ctx: &Context<I>,
    m: &I::Molecule,
    budget: SearchBudget,
    candidates: &[I::Molecule],
) -> Option<Positive<I>> {
    let mut s = Searcher::new(sig, candidates, budget.branch_cap);
    let t = deepen(budget, |d| s.pos(ctx, m, d))?;
    assert!(check_pos(sig, ctx, &t, m).is_ok(), "search produced an unchecked term: {t:?}");
    Some(t)
}

pub fn search_dec<I: Instance>(
    sig: &I,
    ctx: &Context<I>,
    delta: &TypeDec<I>,
    budget: SearchBudget,
    candidates: &[I::Molecule],
) -> Option<DecTerm<I>> {
    let mut s = Searcher::new(sig, candidates, budget.branch_cap);
    let d = deepen(budget, |k| s.dec(ctx, delta, k))?;
    assert!(check_dec(sig, ctx, &d, delta).is_ok(), "search produced an unchecked term: {d:?}");
    Some(d)
}

pub fn search_cmd<I: Instance>(
    sig: &I,
    ctx: &Context<I>,
    budget: SearchBudget,
    candidates: &[I::Molecule],
) -> Option<Command<I>> {
    let mut s = Searcher::new(sig, candidates, budget.branch_cap);
    let c = deepen(budget, |d| s.cmd(ctx, d))?;
    assert!(check_cmd(sig, ctx, &c).is_ok(), "search produced an unchecked term: {c:?}");
    Some(c)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepReport<I: Instance> {
    pub depth: usize,
    pub candidates: usize,
    /// A closed command would contradict consistency.
    pub counterexample: Option<Command<I>>,
}

impl<I: Instance> SweepReport<I> {
    pub fn consistent(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Looks for a command in `ctx` (normally the instance's empty context).
pub fn consistency_sweep<I: Instance>(
    sig: &I,
    ctx: &Context<I>,
    universe: &[I::Molecule],
    depth: usize,
) -> SweepReport<I> {
    SweepReport {
        depth,
        candidates: universe.len(),
        counterexample: search_cmd(sig, ctx, SearchBudget::depth(depth), universe),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contexts::{NegLabel, ParametricContext, PosLabel};
    use crate::j::{molecule_closure_j, FormulaJ, Positioned, J};
    use crate::k1::{molecule_closure, Choice, FormulaK1, Name, PatternK1, K1};
    use crate::term::command_depth;

    fn a() -> FormulaK1 {
        FormulaK1::atom("a")
    }

    fn not_a() -> FormulaK1 {
        FormulaK1::neg_atom("a")
    }

    fn k1_universe() -> Vec<FormulaK1> {
        let roots = [
            a(),
            not_a(),
            FormulaK1::TrueP,
            FormulaK1::FalseP,
            FormulaK1::and_p(a(), not_a()),
            FormulaK1::or_p(a(), not_a()),
        ];
        molecule_closure(roots.iter())
    }

    #[test]
    fn positive_examples() {
        let empty = ParametricContext::empty();
        assert_eq!(
            search_pos(&K1, &empty, &FormulaK1::TrueP, SearchBudget::depth(1), &[]),
            Some(Positive::new(PatternK1::True, DecTerm::Unit))
        );
        assert_eq!(search_pos(&K1, &empty, &FormulaK1::FalseP, SearchBudget::depth(6), &k1_universe()), None);
        let g = ParametricContext::new(vec![Name::new("a")], vec![]);
        assert_eq!(
            search_pos(&K1, &g, &a(), SearchBudget::depth(1), &[]),
            Some(Positive::new(PatternK1::Pos, DecTerm::Label(PosLabel(0))))
        );
    }

    #[test]
    fn excluded_middle_is_found() {
        let g = ParametricContext::new(vec![], vec![FormulaK1::or_p(a(), not_a())]);
        let c = search_cmd(&K1, &g, SearchBudget::depth(4), &k1_universe()).expect("found");
        let inner = Command::Select(
            NegLabel(0),
            Positive::new(PatternK1::inj(Choice::First, PatternK1::Pos), DecTerm::Label(PosLabel(0))),
        );
        let expected = Command::Select(
            NegLabel(0),
            Positive::new(
                PatternK1::inj(Choice::Second, PatternK1::Neg),
                DecTerm::branches([(PatternK1::Pos, inner)]),
            ),
        );
        assert_eq!(c, expected);
        assert_eq!(command_depth(&c), 2);
    }

    #[test]
    fn k1_consistency() {
        let empty = ParametricContext::empty();
        for d in 0..=4 {
            assert!(consistency_sweep(&K1, &empty, &k1_universe(), d).consistent(), "depth {d}");
        }
        let g = ParametricContext::new(vec![], vec![FormulaK1::TrueP]);
        let r = consistency_sweep(&K1, &g, &k1_universe(), 4);
        assert_eq!(
            r.counterexample,
            Some(Command::Select(NegLabel(0), Positive::new(PatternK1::True, DecTerm::Unit)))
        );
        // nothing applies at depth 0
        assert!(consistency_sweep(&K1, &g, &k1_universe(), 0).consistent());
    }

    #[test]
    fn j_consistency() {
        let l = FormulaJ::pos_lit("l");
        let roots = [FormulaJ::imp(l.clone(), l), FormulaJ::FalseN, FormulaJ::FalseP];
        let universe = molecule_closure_j(roots.iter());
        assert!(universe.contains(&Positioned::absurd()));
        assert!(consistency_sweep(&J, &J.empty_context(), &universe, 4).consistent());
    }

    #[test]
    fn j_refutes_through_the_slot() {
        // ⊢ {…} : ∙(l ⇒ l, Left) needs the slot molecule and the stable atom
        let l = FormulaJ::pos_lit("l");
        let m = Positioned::left(FormulaJ::imp(l.clone(), l));
        let d = search_dec(
            &J,
            &J.empty_context(),
            &Decomposition::NegLeaf(m.clone()),
            SearchBudget::depth(3),
            &[],
        );
        assert!(d.is_some());
    }

    #[test]
    fn branch_cap_abandons_wide_nodes() {
        let g = ParametricContext::new(vec![], vec![FormulaK1::or_p(a(), not_a())]);
        let budget = SearchBudget {
            depth: 4,
            branch_cap: Some(0),
        };
        assert_eq!(search_cmd(&K1, &g, budget, &[]), None);
    }

    #[test]
    fn deterministic() {
        let g = ParametricContext::new(vec![], vec![FormulaK1::or_p(a(), not_a()), FormulaK1::TrueP]);
        let x = search_cmd(&K1, &g, SearchBudget::depth(4), &k1_universe());
        let y = search_cmd(&K1, &g, SearchBudget::depth(4), &k1_universe());
        assert_eq!(x, y);
    }
}
