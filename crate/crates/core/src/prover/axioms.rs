//! Compilation of a rewrite system into the axioms it stands for.

use crate::clausify::universal_closure;
use crate::rewrite::RewriteSystem;
use crate::syntax::{Formula, Name, Signature, Term, Var, EQUALITY};

fn eq(a: Term, b: Term) -> Formula {
    Formula::atom(EQUALITY, vec![a, b])
}

fn vars(prefix: &str, n: usize) -> Vec<Term> {
    (1..=n).map(|i| Term::var(format!("{prefix}{i}"))).collect()
}

fn congruence(args_eq: Vec<Formula>, conclusion: Formula) -> Formula {
    universal_closure(&Formula::implies(Formula::conjunction(args_eq), conclusion))
}

/// Every term rule `l -> r` as the closed equation `l = r`, every
/// proposition rule `A -> phi` as the closed equivalence `A <=> phi`, then
/// the axioms of equality when there are term rules: reflexivity,
/// symmetry, transitivity and congruence for every function and predicate
/// symbol of positive arity in `sig` or in the rules.
pub fn rules_to_axioms(rs: &RewriteSystem, sig: &Signature) -> Vec<Formula> {
    let mut out: Vec<Formula> = Vec::new();
    for r in &rs.term_rules {
        out.push(universal_closure(&eq(r.lhs().clone(), r.rhs().clone())));
    }
    for r in &rs.prop_rules {
        out.push(universal_closure(&Formula::iff(Formula::Atom(r.lhs().clone()), r.rhs().clone())));
    }
    if rs.term_rules.is_empty() {
        return out;
    }
    let (x, y, z) = (Term::var("X"), Term::var("Y"), Term::var("Z"));
    out.push(Formula::forall(Var::new("X"), eq(x.clone(), x.clone())));
    out.push(universal_closure(&Formula::implies(eq(x.clone(), y.clone()), eq(y.clone(), x.clone()))));
    out.push(universal_closure(&Formula::implies(Formula::and(eq(x.clone(), y.clone()), eq(y, z.clone())), eq(x, z))));

    let mut functions: Vec<(Name, usize)> = sig.functions().map(|(n, a)| (n.clone(), a)).collect();
    let mut predicates: Vec<(Name, usize)> = sig.predicates().map(|(n, a)| (n.clone(), a)).collect();
    let mut rule_symbols = |phi: &Formula| {
        for s in phi.functions() {
            if !functions.contains(&s) {
                functions.push(s);
            }
        }
        for s in phi.predicates() {
            if !predicates.contains(&s) {
                predicates.push(s);
            }
        }
    };
    for phi in out.clone() {
        rule_symbols(&phi);
    }
    for (f, n) in functions.into_iter().filter(|(_, n)| *n > 0) {
        let (xs, ys) = (vars("X", n), vars("Y", n));
        let premises = xs.iter().zip(&ys).map(|(a, b)| eq(a.clone(), b.clone())).collect();
        out.push(congruence(premises, eq(Term::app(&*f, xs), Term::app(&*f, ys))));
    }
    for (p, n) in predicates.into_iter().filter(|(p, n)| *n > 0 && p.as_ref() != EQUALITY) {
        let (xs, ys) = (vars("X", n), vars("Y", n));
        let mut premises: Vec<Formula> = xs.iter().zip(&ys).map(|(a, b)| eq(a.clone(), b.clone())).collect();
        premises.push(Formula::atom(&*p, xs));
        out.push(congruence(premises, Formula::atom(&*p, ys)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::{PropRule, TermRule};
    use crate::syntax::Atom;

    #[test]
    fn crabbe_rule_becomes_an_equivalence() {
        let rhs = Formula::and(Formula::prop("B"), Formula::not(Formula::prop("A")));
        let rs = RewriteSystem::from_prop_rules(vec![PropRule::new(Atom::prop("A"), rhs.clone()).unwrap()]);
        assert_eq!(rules_to_axioms(&rs, &Signature::new()), vec![Formula::iff(Formula::prop("A"), rhs)]);
    }

    #[test]
    fn times_zero_rule_is_closed() {
        let (x, y) = (Term::var("X"), Term::var("Y"));
        let lhs = Atom::new(EQUALITY, vec![Term::app("times", vec![x.clone(), y.clone()]), Term::numeral(0)]);
        let rhs = Formula::or(eq(x, Term::numeral(0)), eq(y, Term::numeral(0)));
        let rs = RewriteSystem::from_prop_rules(vec![PropRule::new(lhs.clone(), rhs.clone()).unwrap()]);
        let expected =
            Formula::forall(Var::new("X"), Formula::forall(Var::new("Y"), Formula::iff(Formula::Atom(lhs), rhs)));
        assert_eq!(rules_to_axioms(&rs, &Signature::new()), vec![expected]);
    }

    #[test]
    fn empty_system_has_no_axioms() {
        assert!(rules_to_axioms(&RewriteSystem::default(), &Signature::new()).is_empty());
    }

    #[test]
    fn term_rules_bring_equality_axioms() {
        let rs = RewriteSystem::from_term_rules(vec![TermRule::new(
            Term::app("f", vec![Term::constant("a")]),
            Term::constant("b"),
        )
        .unwrap()]);
        let mut sig = Signature::new();
        sig.declare_predicate("P", 1).unwrap();
        let axioms = rules_to_axioms(&rs, &sig);
        // rule, reflexivity, symmetry, transitivity, f-congruence, P-congruence
        assert_eq!(axioms.len(), 6);
        assert!(axioms.iter().all(|a| a.free_vars().is_empty()));
    }
}
