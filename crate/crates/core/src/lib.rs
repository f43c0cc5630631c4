//! A generic focussed sequent calculus, parametrised by an instance that
//! supplies atoms, molecules, patterns and decompositions.

#[cfg(any(test, feature = "arbitrary"))]
pub mod arbitrary;
pub mod contexts;
pub mod j;
pub mod k1;
pub mod realisability;
pub mod search;
pub mod sequent;
pub mod syntax;
pub mod kernel;
pub mod machine;
pub mod term;
