//! Workloads shared by the benchmarks.

use orient_core::parse::{parse_theory, TheoryFile};
use orient_core::rewrite::{RewriteSystem, TermRule};
use orient_core::{Atom, Clause, Literal, Term};

pub const ARITH: &str = include_str!("../../cli/examples/arith.thy");
pub const TIMESZERO: &str = include_str!("../../cli/examples/timeszero.thy");
pub const CRABBE: &str = include_str!("../../cli/examples/crabbe.thy");

pub fn theory(text: &str) -> TheoryFile {
    parse_theory(text).expect("bundled theory parses")
}

fn plus(a: Term, b: Term) -> Term {
    Term::app("plus", vec![a, b])
}

pub fn assoc() -> RewriteSystem {
    let (x, y, z) = (Term::var("X"), Term::var("Y"), Term::var("Z"));
    RewriteSystem::from_term_rules(vec![TermRule::new(
        plus(plus(x.clone(), y.clone()), z.clone()),
        plus(x, plus(y, z)),
    )
    .expect("valid rule")])
}

/// `((c0 + c1) + c2) + ... + c(n-1)`, which takes `n - 1` outer steps and
/// quadratically many in total to right-associate.
pub fn left_comb(n: usize) -> Term {
    (1..n).fold(Term::constant("c0"), |acc, i| plus(acc, Term::constant(format!("c{i}"))))
}

/// Clauses stating that `n + 1` pigeons fit into `n` holes, one per hole.
pub fn pigeonhole(n: usize) -> Vec<Clause> {
    let p = |i: usize, j: usize| Atom::prop(format!("P{i}_{j}"));
    let mut clauses = Vec::new();
    for i in 0..=n {
        clauses.push(Clause::new((0..n).map(|j| Literal::pos(p(i, j))).collect()));
    }
    for j in 0..n {
        for i in 0..=n {
            for k in i + 1..=n {
                clauses.push(Clause::new(vec![Literal::neg(p(i, j)), Literal::neg(p(k, j))]));
            }
        }
    }
    clauses
}

#[cfg(test)]
mod tests {
    use super::*;
    use orient_core::prover::{saturate, Outcome, ProverMode, SaturationLimits};
    use orient_core::rewrite::{normalize, DEFAULT_FUEL};

    #[test]
    fn left_comb_normalizes_to_a_right_comb() {
        let nf = normalize(&assoc(), &left_comb(6), DEFAULT_FUEL).unwrap();
        assert_eq!(nf.to_string(), "plus(c0,plus(c1,plus(c2,plus(c3,plus(c4,c5)))))");
    }

    #[test]
    fn pigeonhole_is_refuted() {
        let clauses = pigeonhole(2);
        assert_eq!(clauses.len(), 3 + 2 * 3);
        let outcome =
            saturate(&clauses, &RewriteSystem::default(), ProverMode::Resolution, &SaturationLimits::default());
        assert!(matches!(outcome, Outcome::Refuted(_)));
    }
}
