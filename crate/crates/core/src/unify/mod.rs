//! Syntactic unification and narrowing-based equational unification.

use crate::syntax::{Atom, Substitution, Term};

mod narrowing;

pub use narrowing::{e_unify, e_unify_all, e_unify_atoms, EUnifier, EUnifyItem, EUnifyResult, UnifProblem};

/// Default narrowing depth for equational unification.
pub const DEFAULT_DEPTH: usize = 6;

/// Most general unifier of `t` and `u`, idempotent, with occurs check.
pub fn mgu(t: &Term, u: &Term) -> Option<Substitution> {
    unify_with(Substitution::new(), t, u)
}

/// Simultaneous unifier of every pair.
pub fn unify_pairs<'a>(pairs: impl IntoIterator<Item = (&'a Term, &'a Term)>) -> Option<Substitution> {
    pairs.into_iter().try_fold(Substitution::new(), |s, (t, u)| unify_with(s, t, u))
}

pub fn unify_atoms(a: &Atom, b: &Atom) -> Option<Substitution> {
    if a.pred != b.pred || a.args.len() != b.args.len() {
        return None;
    }
    unify_pairs(a.args.iter().zip(&b.args))
}

/// Extends the idempotent `sigma` to a unifier of `sigma(t)` and `sigma(u)`.
pub fn unify_with(sigma: Substitution, t: &Term, u: &Term) -> Option<Substitution> {
    let mut sigma = sigma;
    let mut pending = vec![(t.clone(), u.clone())];
    while let Some((t, u)) = pending.pop() {
        let t = sigma.apply(&t);
        let u = sigma.apply(&u);
        match (&t, &u) {
            (Term::Var(x), Term::Var(y)) if x == y => {}
            (Term::Var(x), other) | (other, Term::Var(x)) => {
                if other.occurs(x) {
                    return None;
                }
                sigma = sigma.compose(&Substitution::singleton(x.clone(), other.clone()));
            }
            (Term::App(f, xs), Term::App(g, ys)) => {
                if f != g || xs.len() != ys.len() {
                    return None;
                }
                pending.extend(xs.iter().cloned().zip(ys.iter().cloned()).rev());
            }
        }
    }
    Some(sigma)
}
