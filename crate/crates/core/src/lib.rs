//! First-order reasoning modulo rewrite systems: rewriting, unification,
//! clausification, saturation provers and a sequent-calculus proof checker.

pub mod clausify;
pub mod parse;
pub mod prover;
pub mod rewrite;
pub mod sequent;
pub mod syntax;
pub mod unify;

pub use syntax::*;
