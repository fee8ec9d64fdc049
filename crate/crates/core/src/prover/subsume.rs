use crate::syntax::{Clause, Literal, Term, Var};

// Bindings live on a stack of borrowed pairs; backtracking truncates it.
type Bindings<'a> = Vec<(&'a Var, &'a Term)>;

fn match_into<'a>(pattern: &'a Term, subject: &'a Term, bindings: &mut Bindings<'a>) -> bool {
    match (pattern, subject) {
        (Term::Var(v), _) => match bindings.iter().find(|(w, _)| *w == v) {
            Some((_, bound)) => *bound == subject,
            None => {
                bindings.push((v, subject));
                true
            }
        },
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| match_into(x, y, bindings))
        }
        (Term::App(..), Term::Var(_)) => false,
    }
}

fn literal_into<'a>(l: &'a Literal, m: &'a Literal, bindings: &mut Bindings<'a>) -> bool {
    l.positive == m.positive
        && l.atom.pred == m.atom.pred
        && l.atom.args.len() == m.atom.args.len()
        && l.atom.args.iter().zip(&m.atom.args).all(|(a, b)| match_into(a, b, bindings))
}

fn search<'a>(lits: &'a [Literal], target: &'a Clause, bindings: &mut Bindings<'a>) -> bool {
    let Some((first, rest)) = lits.split_first() else { return true };
    for m in &target.literals {
        let mark = bindings.len();
        if literal_into(first, m, bindings) && search(rest, target, bindings) {
            return true;
        }
        bindings.truncate(mark);
    }
    false
}

/// `c` subsumes `d`: some substitution maps every literal of `c` onto a
/// literal of `d`, and `c` is no longer than `d`.
pub fn subsumes(c: &Clause, d: &Clause) -> bool {
    c.len() <= d.len() && search(&c.literals, d, &mut Vec::new())
}

/// Bitmask of the (sign, predicate) pairs of `c` and of the top symbols of
/// its non-variable arguments. When `c` subsumes `d`, `features(c)` is a
/// subset of `features(d)`.
pub(crate) fn features(c: &Clause) -> u64 {
    use std::hash::{Hash, Hasher};
    let bit = |key: &dyn Fn(&mut std::collections::hash_map::DefaultHasher)| {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        key(&mut h);
        1u64 << (h.finish() % 64)
    };
    let mut mask = 0;
    for l in &c.literals {
        let head = (l.positive, &*l.atom.pred, l.atom.args.len());
        mask |= bit(&|h| head.hash(h));
        for (i, a) in l.atom.args.iter().enumerate() {
            if let Term::App(f, xs) = a {
                mask |= bit(&|h| (head, i, &**f, xs.len()).hash(h));
            }
        }
    }
    mask
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::Atom;

    fn p(t: Term) -> Literal {
        Literal::pos(Atom::new("P", vec![t]))
    }

    #[test]
    fn instance_subsumption() {
        let general = Clause::new(vec![p(Term::var("X"))]);
        let specific = Clause::new(vec![p(Term::constant("a")), Literal::neg(Atom::prop("Q"))]);
        assert!(subsumes(&general, &specific));
        assert!(!subsumes(&specific, &general));
        assert!(subsumes(&Clause::empty(), &general));
        let two = Clause::new(vec![p(Term::var("X")), Literal::neg(Atom::new("P", vec![Term::var("X")]))]);
        let mixed = Clause::new(vec![p(Term::constant("a")), Literal::neg(Atom::new("P", vec![Term::constant("b")]))]);
        assert!(!subsumes(&two, &mixed));
    }

    fn literal() -> impl proptest::strategy::Strategy<Value = Literal> {
        use proptest::prelude::*;
        (any::<bool>(), prop::sample::select(vec!["P", "Q"]), crate::syntax::tests::term_strategy())
            .prop_map(|(sign, pred, t)| Literal { positive: sign, atom: Atom::new(pred, vec![t]) })
    }

    proptest::proptest! {
        #[test]
        fn instances_are_subsumed_and_keep_features(
            lits in proptest::collection::vec(literal(), 0..4),
            extra in proptest::collection::vec(literal(), 0..3),
            images in proptest::collection::vec(crate::syntax::tests::term_strategy(), 3),
        ) {
            let c = Clause::new(lits);
            let sigma: crate::syntax::Substitution =
                c.vars().into_iter().zip(images.into_iter().cycle()).collect();
            let mut d = sigma.apply_clause(&c);
            d.literals.extend(extra);
            proptest::prop_assert!(subsumes(&c, &d));
            proptest::prop_assert_eq!(features(&c) & !features(&d), 0);
        }
    }
}
