//! Proptest strategies for formulae, patterns and whole source judgments.

use proptest::prelude::*;

use crate::contexts::{Decomposition, NegLabel, ParametricContext, Place, PosLabel, Store};
use crate::j::{FormulaJ, JNegLabel, JPosLabel, PatternJ, Positioned, Side, J};
use crate::k1::{Choice, FormulaK1, Name, PatternK1, K1};
use crate::kernel::Instance;
use crate::syntax::{Source, SourceGoal};
use crate::term::{Command, DecTerm, Positive};

pub fn arb_name() -> impl Strategy<Value = String> {
    prop_oneof![Just("a"), Just("b"), Just("pos"), Just("R"), Just("x1")].prop_map(String::from)
}

pub fn arb_k1_formula() -> impl Strategy<Value = FormulaK1> {
    let leaf = prop_oneof![
        arb_name().prop_map(|n| FormulaK1::atom(&n)),
        arb_name().prop_map(|n| FormulaK1::neg_atom(&n)),
        Just(FormulaK1::TrueP),
        Just(FormulaK1::FalseP),
        Just(FormulaK1::TrueN),
        Just(FormulaK1::FalseN),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        (inner.clone(), inner, 0..4u8).prop_map(|(x, y, op)| match op {
            0 => FormulaK1::and_p(x, y),
            1 => FormulaK1::or_p(x, y),
            2 => FormulaK1::and_n(x, y),
            _ => FormulaK1::or_n(x, y),
        })
    })
}

pub fn arb_k1_pattern() -> impl Strategy<Value = PatternK1> {
    let leaf = prop_oneof![Just(PatternK1::Pos), Just(PatternK1::Neg), Just(PatternK1::True)];
    leaf.prop_recursive(3, 8, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| PatternK1::pair(a, b)),
            (any::<bool>(), inner).prop_map(|(l, p)| PatternK1::inj(if l { Choice::First } else { Choice::Second }, p)),
        ]
    })
}

pub fn arb_j_formula() -> impl Strategy<Value = FormulaJ> {
    let leaf = prop_oneof![
        arb_name().prop_map(|n| FormulaJ::pos_lit(&n)),
        arb_name().prop_map(|n| FormulaJ::neg_lit(&n)),
        Just(FormulaJ::TrueP),
        Just(FormulaJ::FalseP),
        Just(FormulaJ::TrueN),
        Just(FormulaJ::FalseN),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone(), 0..4u8).prop_map(|(x, y, op)| match op {
                0 => FormulaJ::and_p(x, y),
                1 => FormulaJ::or(x, y),
                2 => FormulaJ::and_n(x, y),
                _ => FormulaJ::imp(x, y),
            }),
            inner.prop_map(FormulaJ::not),
        ]
    })
}

pub fn arb_positioned() -> impl Strategy<Value = Positioned> {
    (arb_j_formula(), any::<bool>()).prop_map(|(f, r)| Positioned::new(f, if r { Side::Right } else { Side::Left }))
}

pub fn arb_j_pattern() -> impl Strategy<Value = PatternJ> {
    let leaf = prop_oneof![
        Just(PatternJ::PosR),
        Just(PatternJ::NegR),
        Just(PatternJ::TrueR),
        Just(PatternJ::PosL),
        Just(PatternJ::NegL),
        Just(PatternJ::TrueL),
    ];
    leaf.prop_recursive(3, 8, 2, |inner| {
        let choice = || any::<bool>().prop_map(|b| if b { Choice::First } else { Choice::Second });
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| PatternJ::pair(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| PatternJ::cons(a, b)),
            (choice(), inner.clone()).prop_map(|(c, p)| PatternJ::inj(c, p)),
            (choice(), inner.clone()).prop_map(|(c, p)| PatternJ::proj(c, p)),
            inner.prop_map(PatternJ::switch),
        ]
    })
}

fn arb_dec<I: Instance + 'static>(
    label: BoxedStrategy<I::PosLabel>,
    cmd: BoxedStrategy<Command<I>>,
    pattern: BoxedStrategy<I::Pattern>,
) -> BoxedStrategy<DecTerm<I>>
{
    let leaf = prop_oneof![
        Just(DecTerm::Unit),
        label.prop_map(DecTerm::Label),
        proptest::collection::btree_map(pattern, cmd, 0..3).prop_map(DecTerm::Branches),
    ];
    leaf.prop_recursive(2, 6, 2, |inner| (inner.clone(), inner).prop_map(|(a, b)| DecTerm::pair(a, b)))
        .boxed()
}

fn arb_command<I: Instance + 'static>(
    pos_label: BoxedStrategy<I::PosLabel>,
    neg_label: BoxedStrategy<I::NegLabel>,
    pattern: BoxedStrategy<I::Pattern>,
    molecule: BoxedStrategy<I::Molecule>,
    depth: u32,
) -> BoxedStrategy<Command<I>> {
    let flat_dec = prop_oneof![Just(DecTerm::<I>::Unit), pos_label.clone().prop_map(DecTerm::Label)].boxed();
    let positive = |dec: BoxedStrategy<DecTerm<I>>| {
        (pattern.clone(), dec).prop_map(|(p, d)| Positive::new(p, d)).boxed()
    };
    let base = (neg_label.clone(), positive(flat_dec.clone()))
        .prop_map(|(x, t)| Command::Select(x, t))
        .boxed();
    if depth == 0 {
        return base;
    }
    let sub = arb_command(pos_label.clone(), neg_label.clone(), pattern.clone(), molecule.clone(), depth - 1);
    let dec = arb_dec::<I>(pos_label, sub.clone(), pattern.clone());
    prop_oneof![
        (neg_label, positive(dec.clone())).prop_map(|(x, t)| Command::Select(x, t)),
        (proptest::collection::btree_map(pattern.clone(), sub, 0..3), molecule, positive(dec))
            .prop_map(|(branches, molecule, arg)| Command::Cut { branches, molecule, arg }),
    ]
    .boxed()
}

fn arb_goal<I: Instance + 'static>(
    pos_label: BoxedStrategy<I::PosLabel>,
    neg_label: BoxedStrategy<I::NegLabel>,
    pattern: BoxedStrategy<I::Pattern>,
    molecule: BoxedStrategy<I::Molecule>,
    atom: BoxedStrategy<I::Atom>,
) -> BoxedStrategy<SourceGoal<I>> {
    let cmd = arb_command::<I>(pos_label.clone(), neg_label, pattern.clone(), molecule.clone(), 2);
    let dec = arb_dec::<I>(pos_label, cmd.clone(), pattern.clone());
    let tdec = prop_oneof![
        Just(Decomposition::Unit),
        atom.prop_map(Decomposition::PosLeaf),
        molecule.clone().prop_map(Decomposition::NegLeaf),
    ]
    .prop_recursive(2, 6, 2, |inner| (inner.clone(), inner).prop_map(|(a, b)| Decomposition::pair(a, b)));
    prop_oneof![
        (proptest::option::of((pattern, dec.clone()).prop_map(|(p, d)| Positive::new(p, d))), molecule)
            .prop_map(|(term, molecule)| SourceGoal::Pos { term, molecule }),
        (proptest::option::of(dec), tdec).prop_map(|(term, dec)| SourceGoal::Dec { term, dec }),
        proptest::option::of(cmd).prop_map(SourceGoal::Cmd),
    ]
    .boxed()
}

pub fn arb_k1_source() -> impl Strategy<Value = Source<K1>> {
    let ctx = (
        proptest::collection::vec(arb_name().prop_map(|n| Name::new(&n)), 0..3),
        proptest::collection::vec(arb_k1_formula(), 0..3),
    )
        .prop_map(|(p, n)| ParametricContext::new(p, n));
    let goal = arb_goal::<K1>(
        (0..4usize).prop_map(PosLabel).boxed(),
        (0..4usize).prop_map(NegLabel).boxed(),
        arb_k1_pattern().boxed(),
        arb_k1_formula().boxed(),
        arb_name().prop_map(|n| Name::new(&n)).boxed(),
    );
    (ctx, goal).prop_map(|(context, goal)| Source { context, goal })
}

pub fn arb_j_source() -> impl Strategy<Value = Source<J>> {
    let ctx = (
        proptest::collection::vec(arb_name(), 0..3),
        proptest::collection::vec(arb_j_formula().prop_filter("negative", |f| !f.is_positive()), 0..3),
        prop_oneof![
            Just(None),
            arb_name().prop_map(|n: String| Some(Positioned::left(FormulaJ::neg_lit(&n)))),
            Just(Some(Positioned::absurd())),
            arb_j_formula().prop_filter("positive", |f| f.is_positive()).prop_map(|f| Some(Positioned::right(f))),
        ],
    )
        .prop_map(|(pos, neg, rs)| {
            let mut c = J.empty_context();
            for n in pos.iter() {
                c.push_pos(Positioned::right(FormulaJ::pos_lit(n)), Place::Stable);
            }
            for f in neg {
                c.push_neg(Positioned::left(f), Place::Stable);
            }
            match rs {
                Some(x) if x.side == Side::Left => c.push_pos(x, Place::Right),
                Some(x) => c.push_neg(x, Place::Right),
                None => {}
            }
            c
        });
    let pos_label = prop_oneof![
        (0..3usize).prop_map(JPosLabel::Stable),
        Just(JPosLabel::RSlot),
        Just(JPosLabel::Absurd)
    ];
    let neg_label = prop_oneof![(0..3usize).prop_map(JNegLabel::Stable), Just(JNegLabel::RSlot)];
    let goal = arb_goal::<J>(
        pos_label.boxed(),
        neg_label.boxed(),
        arb_j_pattern().boxed(),
        arb_positioned().boxed(),
        arb_positioned().boxed(),
    );
    (ctx, goal).prop_map(|(context, goal)| Source { context, goal })
}

