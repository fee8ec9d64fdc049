//! Terms, formulas, clauses, sequents and substitutions.

mod formula;
mod print;
mod signature;
mod subst;
mod term;

pub use formula::{formulas_alpha_eq, Atom, Clause, Formula, Literal, Sequent};
pub use signature::{Signature, SignatureError};
pub use subst::{rename_apart, rename_clause_avoiding, Substitution};
pub use term::{fresh_var, Name, Position, Term, Var, SUCC, ZERO};

/// Predicate used for equality literals.
pub const EQUALITY: &str = "eq";

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    fn var_strategy() -> impl Strategy<Value = Var> {
        prop_oneof![Just("X"), Just("Y"), Just("Z")].prop_map(Var::new)
    }

    pub(crate) fn term_strategy() -> impl Strategy<Value = Term> {
        let leaf =
            prop_oneof![var_strategy().prop_map(Term::Var), Just(Term::constant("a")), Just(Term::constant("b")),];
        leaf.prop_recursive(3, 16, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|t| Term::app("f", vec![t])),
                (inner.clone(), inner).prop_map(|(l, r)| Term::app("g", vec![l, r])),
            ]
        })
    }

    fn subst_strategy() -> impl Strategy<Value = Substitution> {
        proptest::collection::vec((var_strategy(), term_strategy()), 0..3).prop_map(|bs| bs.into_iter().collect())
    }

    fn formula_strategy() -> impl Strategy<Value = Formula> {
        let leaf = (term_strategy(), term_strategy()).prop_map(|(a, b)| Formula::atom("P", vec![a, b]));
        leaf.prop_recursive(3, 12, 2, |inner| {
            prop_oneof![
                (var_strategy(), inner.clone()).prop_map(|(v, f)| Formula::forall(v, f)),
                (var_strategy(), inner.clone()).prop_map(|(v, f)| Formula::exists(v, f)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                inner.prop_map(Formula::not),
            ]
        })
    }

    proptest! {
        #[test]
        fn composition_matches_sequential_application(
            s in subst_strategy(), t in subst_strategy(), e in term_strategy()
        ) {
            prop_assert_eq!(s.compose(&t).apply(&e), t.apply(&s.apply(&e)));
        }

        #[test]
        fn no_capture_under_binders(s in subst_strategy(), f in formula_strategy()) {
            let g = s.apply_formula(&f);
            // A captured variable would drop out of the free set.
            let mut expected = std::collections::BTreeSet::new();
            for v in f.free_vars() {
                match s.get(&v) {
                    Some(t) => expected.extend(t.vars()),
                    None => { expected.insert(v); }
                }
            }
            prop_assert_eq!(g.free_vars(), expected);
        }

        #[test]
        fn idempotent_apply_twice_equals_once(e in term_strategy(), t in term_strategy()) {
            let v = Var::new("X");
            if !t.occurs(&v) {
                let s = Substitution::singleton(v, t);
                prop_assert!(s.is_idempotent());
                prop_assert_eq!(s.apply(&s.apply(&e)), s.apply(&e));
            }
        }

        #[test]
        fn rename_apart_preserves_skeleton(a in term_strategy(), b in term_strategy()) {
            let c1 = Clause::new(vec![Literal::pos(Atom::new("P", vec![a.clone()]))]);
            let c2 = Clause::new(vec![Literal::neg(Atom::new("P", vec![a])), Literal::pos(Atom::new("Q", vec![b]))]);
            let (r1, r2) = rename_apart(&c1, &c2);
            prop_assert!(r1.vars().is_disjoint(&r2.vars()));
            prop_assert_eq!(r2.len(), c2.len());
            prop_assert_eq!(r2.weight(), c2.weight());
            for (x, y) in r2.literals.iter().zip(&c2.literals) {
                prop_assert_eq!(x.positive, y.positive);
                prop_assert_eq!(&x.atom.pred, &y.atom.pred);
            }
        }
    }

    #[test]
    fn free_vars_exclude_bound() {
        let f = Formula::forall(Var::new("X"), Formula::atom(EQUALITY, vec![Term::var("X"), Term::var("Y")]));
        assert_eq!(f.free_vars(), [Var::new("Y")].into_iter().collect());
        assert!(Clause::empty().vars().is_empty());
    }

    #[test]
    fn alpha_equivalence_ignores_bound_names() {
        let f = Formula::forall(Var::new("X"), Formula::atom("P", vec![Term::var("X")]));
        let g = Formula::forall(Var::new("Y"), Formula::atom("P", vec![Term::var("Y")]));
        let h = Formula::forall(Var::new("Y"), Formula::atom("P", vec![Term::var("X")]));
        assert!(f.alpha_eq(&g));
        assert!(!f.alpha_eq(&h));
    }

    #[test]
    fn numerals_round_trip() {
        for n in [0, 1, 4, 17] {
            assert_eq!(Term::numeral(n).as_numeral(), Some(n));
        }
        assert_eq!(Term::numeral(4).to_string(), "4");
        assert_eq!(Term::app(SUCC, vec![Term::var("X")]).to_string(), "s(X)");
    }
}
