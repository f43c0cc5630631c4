//! Rendering of judgments as LKF (for K1) and LJF (for J) sequents.

use std::fmt;

use thiserror::Error;

use crate::contexts::{acc_neg, acc_pos, Decomposition, Leaf};
use crate::j::{JContext, MoleculeJ, Positioned, Side, J};
use crate::k1::{FormulaK1, Name, K1};
use crate::kernel::{Context, Instance};
use crate::term::Goal;

/// What the judgment focuses on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Focus<I: Instance> {
    /// A command: no focus.
    None,
    /// A label against an atom.
    Atom(I::Atom),
    /// A decomposition term against `∙M`.
    Refute(I::Molecule),
    /// A positive term against `M`.
    Positive(I::Molecule),
}

impl<I: Instance> Focus<I> {
    /// One focus per leaf of the goal; unit leaves yield nothing.
    pub fn of_goal(goal: &Goal<I>) -> Vec<Self> {
        match goal {
            Goal::Cmd(_) => vec![Focus::None],
            Goal::Pos { molecule, .. } => vec![Focus::Positive(molecule.clone())],
            Goal::Dec { dec, .. } => Self::of_dec(dec),
        }
    }

    pub fn of_dec(dec: &Decomposition<I::Atom, I::Molecule>) -> Vec<Self> {
        dec.leaves()
            .into_iter()
            .map(|l| match l {
                Leaf::Pos(a) => Focus::Atom(a.clone()),
                Leaf::Neg(m) => Focus::Refute(m.clone()),
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequentRendering(pub String);

impl fmt::Display for SequentRendering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("right-hand side has {} formulae: {}", .0.len(), .0.join(", "))]
pub struct SingletonViolation(pub Vec<String>);

fn join(items: &[String]) -> String {
    items.join(", ")
}

/// `|- ~Acc⁺, Acc⁻` with the focus bracket appended.
pub fn translate_k1(ctx: &Context<K1>, focus: &Focus<K1>) -> SequentRendering {
    let mut side: Vec<String> = acc_pos(ctx).iter().map(|a: &Name| format!("~{a}")).collect();
    side.extend(acc_neg(ctx).iter().map(FormulaK1::to_string));
    let bracket = match focus {
        Focus::None => None,
        Focus::Atom(a) => Some(a.to_string()),
        Focus::Refute(p) => Some(p.negate().to_string()),
        Focus::Positive(p) => Some(p.to_string()),
    };
    let mut out = String::from("|-");
    if !side.is_empty() {
        out.push(' ');
        out.push_str(&join(&side));
    }
    if let Some(b) = bracket {
        out.push_str(&format!(" [{b}]"));
    }
    SequentRendering(out)
}

/// Two-sided `Γ |- Δ`. Foci on left-side formulae go before the turnstile,
/// foci on right-side formulae replace the right-hand side.
pub fn translate_j(ctx: &JContext, focus: &Focus<J>) -> Result<SequentRendering, SingletonViolation> {
    let absurd = Positioned::absurd();
    let atoms = acc_pos(ctx);
    let mols: Vec<MoleculeJ> = acc_neg(ctx);
    let on = |xs: &[Positioned], s: Side| -> Vec<String> {
        xs.iter()
            .filter(|x| x.side == s && **x != absurd)
            .map(|x| x.formula.to_string())
            .collect()
    };
    let mut left = on(&atoms, Side::Right);
    left.extend(on(&mols, Side::Left));
    let mut right = on(&atoms, Side::Left);
    right.extend(on(&mols, Side::Right));

    let (lfocus, rfocus) = match focus {
        Focus::None => (None, None),
        Focus::Atom(a) | Focus::Refute(a) | Focus::Positive(a) => {
            let f = a.formula.to_string();
            // refuting (M, side) focuses on the opposite side from proving it
            let left_side = match focus {
                Focus::Refute(_) => a.side == Side::Right,
                _ => a.side == Side::Left,
            };
            if left_side {
                (Some(f), None)
            } else {
                (None, Some(f))
            }
        }
    };
    if rfocus.is_none() && right.len() > 1 {
        return Err(SingletonViolation(right));
    }
    let mut out = join(&left);
    if let Some(f) = lfocus {
        if !out.is_empty() {
            out.push(' ');
        }
        out.push_str(&format!("[{f}]"));
    }
    if !out.is_empty() {
        out.push(' ');
    }
    out.push_str("|-");
    let rhs = match rfocus {
        Some(f) => format!("[{f}]"),
        None => join(&right),
    };
    if !rhs.is_empty() {
        out.push(' ');
        out.push_str(&rhs);
    }
    Ok(SequentRendering(out))
}
