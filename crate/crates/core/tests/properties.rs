use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use orient_core::clausify::{cnf, tautology, universal_closure};
use orient_core::prover::{
    check_trace, rules_to_axioms, saturate, saturate_with, Outcome, ProverMode, SaturationLimits, SaturationOptions,
};
use orient_core::rewrite::{
    equivalent, match_term, normalize, normalize_traced, redexes, rewrite_step, PropRule, RewriteSystem, TermRule,
    DEFAULT_FUEL,
};
use orient_core::unify::{e_unify, e_unify_all, mgu, EUnifyItem};
use orient_core::{Atom, Clause, Formula, Literal, Signature, Substitution, Term, Var};

fn plus(a: Term, b: Term) -> Term {
    Term::app("plus", vec![a, b])
}

fn assoc() -> RewriteSystem {
    let (x, y, z) = (Term::var("X"), Term::var("Y"), Term::var("Z"));
    RewriteSystem::from_term_rules(vec![TermRule::new(
        plus(plus(x.clone(), y.clone()), z.clone()),
        plus(x, plus(y, z)),
    )
    .unwrap()])
}

fn peano() -> RewriteSystem {
    let (x, y) = (Term::var("X"), Term::var("Y"));
    let s = |t: Term| Term::app("s", vec![t]);
    let times = |a: Term, b: Term| Term::app("times", vec![a, b]);
    RewriteSystem::from_term_rules(vec![
        TermRule::new(plus(Term::numeral(0), y.clone()), y.clone()).unwrap(),
        TermRule::new(plus(s(x.clone()), y.clone()), s(plus(x.clone(), y.clone()))).unwrap(),
        TermRule::new(times(Term::numeral(0), y.clone()), Term::numeral(0)).unwrap(),
        TermRule::new(times(s(x.clone()), y.clone()), plus(y.clone(), times(x, y))).unwrap(),
    ])
}

/// Sums of the constants a..d under arbitrary bracketing.
fn sum_term() -> impl Strategy<Value = Term> {
    let leaf = prop::sample::select(vec!["a", "b", "c", "d"]).prop_map(Term::constant);
    leaf.prop_recursive(4, 16, 2, |inner| (inner.clone(), inner).prop_map(|(l, r)| plus(l, r)))
}

/// Peano expressions over small numerals.
fn arith_term() -> impl Strategy<Value = Term> {
    let leaf = (0u64..3).prop_map(Term::numeral);
    leaf.prop_recursive(3, 8, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| plus(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Term::app("times", vec![l, r])),
            inner.prop_map(|t| Term::app("s", vec![t])),
        ]
    })
}

/// Peano expressions with variables X and Y.
fn open_arith_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![(0u64..3).prop_map(Term::numeral), Just(Term::var("X")), Just(Term::var("Y"))];
    leaf.prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(l, r)| plus(l, r)),
            inner.prop_map(|t| Term::app("s", vec![t])),
        ]
    })
}

fn eval_arith(t: &Term) -> u64 {
    match t {
        Term::App(f, args) => match (&**f, args.as_slice()) {
            ("0", []) => 0,
            ("s", [a]) => eval_arith(a) + 1,
            ("plus", [a, b]) => eval_arith(a) + eval_arith(b),
            ("times", [a, b]) => eval_arith(a) * eval_arith(b),
            _ => panic!("not arithmetic: {t}"),
        },
        Term::Var(_) => panic!("open term"),
    }
}

fn leaves(t: &Term) -> Vec<String> {
    match t {
        Term::App(f, args) if &**f == "plus" => args.iter().flat_map(leaves).collect(),
        other => vec![other.to_string()],
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn each_step_is_one_rule_instance(t in sum_term()) {
        let rs = assoc();
        for r in redexes(&rs, &t) {
            let rule = &rs.term_rules[r.rule];
            let sub = t.subterm(&r.position).unwrap();
            let s = match_term(rule.lhs(), sub).expect("redex matches its rule");
            prop_assert_eq!(&t.replace_at(&r.position, s.apply(rule.rhs())), &r.result);
        }
        prop_assert_eq!(rewrite_step(&rs, &t).is_empty(), redexes(&rs, &t).is_empty());
    }

    #[test]
    fn random_reduction_order_reaches_the_same_normal_form(t in sum_term(), seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let rs = assoc();
        let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
        let mut current = t.clone();
        loop {
            let next = rewrite_step(&rs, &current);
            if next.is_empty() {
                break;
            }
            current = next[rng.gen_range(0..next.len())].clone();
        }
        prop_assert_eq!(&normalize(&rs, &t, DEFAULT_FUEL).unwrap(), &current);
        // The normal form is the right comb of the same leaves.
        prop_assert_eq!(leaves(&current), leaves(&t));
        prop_assert!(current.subterm(&[0]).is_none_or(|l| !matches!(l, Term::App(f, a) if &**f == "plus" && a.len() == 2)));
    }

    #[test]
    fn peano_normal_forms_are_values(t in arith_term()) {
        let nf = normalize(&peano(), &t, DEFAULT_FUEL).unwrap();
        prop_assert_eq!(nf.as_numeral(), Some(eval_arith(&t)));
    }

    #[test]
    fn equivalent_is_an_equivalence(a in sum_term(), b in sum_term(), c in sum_term()) {
        let rs = assoc();
        let eq = |x: &Term, y: &Term| equivalent(&rs, x, y, DEFAULT_FUEL).unwrap();
        prop_assert!(eq(&a, &a));
        prop_assert_eq!(eq(&a, &b), eq(&b, &a));
        if eq(&a, &b) && eq(&b, &c) {
            prop_assert!(eq(&a, &c));
        }
        prop_assert_eq!(eq(&a, &b), leaves(&a) == leaves(&b));
    }

    #[test]
    fn equivalent_terms_are_joined_by_their_traces(a in sum_term(), b in sum_term()) {
        let rs = assoc();
        if equivalent(&rs, &a, &b, DEFAULT_FUEL).unwrap() {
            let left = normalize_traced(&rs, &a, DEFAULT_FUEL).unwrap();
            let right = normalize_traced(&rs, &b, DEFAULT_FUEL).unwrap();
            prop_assert_eq!(left.result(), right.result());
            for (from, to) in left.terms().zip(left.terms().skip(1)) {
                prop_assert!(rewrite_step(&rs, from).contains(to));
            }
        }
    }
}

// Terms over a, b, f/1, g/2 and variables X, Y.
fn small_term() -> impl Strategy<Value = Term> {
    let leaf =
        prop_oneof![Just(Term::constant("a")), Just(Term::constant("b")), Just(Term::var("X")), Just(Term::var("Y")),];
    leaf.prop_recursive(2, 6, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|t| Term::app("f", vec![t])),
            (inner.clone(), inner).prop_map(|(l, r)| Term::app("g", vec![l, r])),
        ]
    })
}

fn ground_terms(height: usize) -> Vec<Term> {
    let mut all = vec![Term::constant("a"), Term::constant("b")];
    for _ in 0..height {
        let prev = all.clone();
        let mut next = prev.clone();
        for t in &prev {
            next.push(Term::app("f", vec![t.clone()]));
            for u in &prev {
                next.push(Term::app("g", vec![t.clone(), u.clone()]));
            }
        }
        next.sort();
        next.dedup();
        all = next;
    }
    all
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn mgu_failure_agrees_with_ground_search(t in small_term(), u in small_term()) {
        let space = ground_terms(2);
        let x = Var::new("X");
        let y = Var::new("Y");
        let ground_unifier = space.iter().any(|gx| {
            space.iter().any(|gy| {
                let s: Substitution = [(x.clone(), gx.clone()), (y.clone(), gy.clone())].into_iter().collect();
                s.apply(&t) == s.apply(&u)
            })
        });
        match mgu(&t, &u) {
            None => prop_assert!(!ground_unifier),
            Some(s) => {
                prop_assert_eq!(s.apply(&t), s.apply(&u));
                prop_assert_eq!(s.apply(&s.apply(&t)), s.apply(&t));
            }
        }
    }

    #[test]
    fn e_unifiers_are_arithmetically_sound(t in open_arith_term(), u in open_arith_term(), k in 0u64..3) {
        let rs = peano();
        for item in e_unify(&rs, &t, &u, 3) {
            let EUnifyItem::Unifier(s) = item else { continue };
            // Instantiate what remains open with a numeral and compare values.
            let close: Substitution = [Var::new("X"), Var::new("Y")]
                .into_iter()
                .chain(s.range_vars())
                .map(|v| (v, Term::numeral(k)))
                .collect();
            let (l, r) = (close.apply(&s.apply(&t)), close.apply(&s.apply(&u)));
            prop_assert!(l.is_ground() && r.is_ground());
            prop_assert_eq!(eval_arith(&l), eval_arith(&r), "{} vs {} under {}", t, u, s);
        }
    }

    #[test]
    fn depth_zero_is_mgu(t in small_term(), u in small_term()) {
        let result = e_unify_all(&assoc(), &t, &u, 0);
        match mgu(&t, &u) {
            Some(s) => prop_assert_eq!(result.unifiers.first(), Some(&s)),
            None => prop_assert!(result.unifiers.is_empty()),
        }
    }
}

/// First-order structure over a domain `0..size`.
struct Model<'a> {
    size: usize,
    functions: &'a BTreeMap<String, Vec<usize>>,
    predicates: &'a BTreeMap<String, Vec<bool>>,
}

impl Model<'_> {
    fn term(&self, t: &Term, env: &BTreeMap<Var, usize>) -> usize {
        match t {
            Term::Var(v) => env[v],
            Term::App(f, args) => {
                let index = args.iter().fold(0, |acc, a| acc * self.size + self.term(a, env));
                self.functions[&**f][index]
            }
        }
    }

    fn holds(&self, phi: &Formula, env: &mut BTreeMap<Var, usize>) -> bool {
        match phi {
            Formula::Atom(a) => {
                let index = a.args.iter().fold(0, |acc, t| acc * self.size + self.term(t, env));
                self.predicates[&*a.pred][index]
            }
            Formula::Top => true,
            Formula::Bottom => false,
            Formula::Not(a) => !self.holds(a, env),
            Formula::And(a, b) => self.holds(a, env) && self.holds(b, env),
            Formula::Or(a, b) => self.holds(a, env) || self.holds(b, env),
            Formula::Implies(a, b) => !self.holds(a, env) || self.holds(b, env),
            Formula::Iff(a, b) => self.holds(a, env) == self.holds(b, env),
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let universal = matches!(phi, Formula::Forall(..));
                let saved = env.get(v).copied();
                let mut result = universal;
                for d in 0..self.size {
                    env.insert(v.clone(), d);
                    if self.holds(body, env) != universal {
                        result = !universal;
                        break;
                    }
                }
                match saved {
                    Some(d) => env.insert(v.clone(), d),
                    None => env.remove(v),
                };
                result
            }
        }
    }
}

fn symbols(formulas: &[Formula]) -> Signature {
    let mut sig = Signature::new();
    for phi in formulas {
        for (f, n) in phi.functions() {
            sig.declare_function(&f, n).unwrap();
        }
        for (p, n) in phi.predicates() {
            sig.declare_predicate(&p, n).unwrap();
        }
    }
    sig
}

/// Whether some structure of the given size satisfies every closed formula,
/// or `None` when there are too many structures to enumerate.
fn satisfiable_in(formulas: &[Formula], size: usize) -> Option<bool> {
    let sig = symbols(formulas);
    let mut slots: Vec<(String, bool, usize)> = Vec::new();
    for (f, n) in sig.functions() {
        slots.push((f.to_string(), false, size.pow(n as u32)));
    }
    for (p, n) in sig.predicates() {
        slots.push((p.to_string(), true, size.pow(n as u32)));
    }
    let digits: Vec<usize> =
        slots.iter().flat_map(|(_, pred, len)| std::iter::repeat_n(if *pred { 2 } else { size }, *len)).collect();
    let total = digits.iter().try_fold(1usize, |acc, d| acc.checked_mul(*d))?;
    if total > 300_000 {
        return None;
    }
    let mut counter = vec![0usize; digits.len()];
    for _ in 0..total {
        let mut functions = BTreeMap::new();
        let mut predicates = BTreeMap::new();
        let mut at = 0;
        for (name, pred, len) in &slots {
            let values = &counter[at..at + len];
            if *pred {
                predicates.insert(name.clone(), values.iter().map(|v| *v == 1).collect());
            } else {
                functions.insert(name.clone(), values.to_vec());
            }
            at += len;
        }
        let model = Model { size, functions: &functions, predicates: &predicates };
        if formulas.iter().all(|phi| model.holds(phi, &mut BTreeMap::new())) {
            return Some(true);
        }
        for (c, d) in counter.iter_mut().zip(&digits) {
            *c += 1;
            if *c < *d {
                break;
            }
            *c = 0;
        }
    }
    Some(false)
}

fn fo_formula() -> impl Strategy<Value = Formula> {
    let var = prop::sample::select(vec!["X", "Y"]).prop_map(Var::new);
    let term =
        prop_oneof![Just(Term::constant("a")), Just(Term::constant("b")), Just(Term::var("X")), Just(Term::var("Y")),];
    let atom = prop_oneof![
        term.clone().prop_map(|t| Formula::atom("P", vec![t])),
        (term.clone(), term).prop_map(|(t, u)| Formula::atom("R", vec![t, u])),
    ];
    atom.prop_recursive(4, 10, 2, move |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            (var.clone(), inner.clone()).prop_map(|(v, a)| Formula::forall(v, a)),
            (var.clone(), inner).prop_map(|(v, a)| Formula::exists(v, a)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn cnf_is_equisatisfiable_on_small_domains(phi in fo_formula()) {
        let closed = universal_closure(&phi);
        let clauses: Vec<Formula> = cnf(&phi).iter().map(|c| universal_closure(&c.to_formula())).collect();
        for size in 1..=2 {
            let (Some(a), Some(b)) = (satisfiable_in(&[closed.clone()], size), satisfiable_in(&clauses, size)) else {
                continue;
            };
            prop_assert_eq!(a, b, "domain size {}: {} vs {:?}", size, closed, clauses.iter().map(|c| c.to_string()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn cnf_literals_are_atoms(phi in fo_formula()) {
        for c in cnf(&phi) {
            for l in &c.literals {
                let f = l.to_formula();
                let atom = if l.positive { &f } else { match &f { Formula::Not(a) => &**a, _ => &f } };
                prop_assert!(matches!(atom, Formula::Atom(_)));
            }
        }
    }
}

const ATOMS: [&str; 4] = ["A", "B", "C", "D"];

fn ground_clause() -> impl Strategy<Value = Clause> {
    prop::collection::vec((any::<bool>(), prop::sample::select(ATOMS.to_vec())), 1..4)
        .prop_map(|lits| lits.into_iter().map(|(s, a)| Literal { positive: s, atom: Atom::prop(a) }).collect())
}

fn prop_rules() -> impl Strategy<Value = Vec<PropRule>> {
    let leaf = prop_oneof![
        prop::sample::select(ATOMS.to_vec()).prop_map(Formula::prop),
        Just(Formula::Bottom),
        Just(Formula::Top),
    ];
    let rhs = leaf.prop_recursive(2, 5, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::or(a, b)),
        ]
    });
    prop::collection::vec((prop::sample::select(ATOMS.to_vec()), rhs), 0..3)
        .prop_map(|rules| rules.into_iter().map(|(a, r)| PropRule::new(Atom::prop(a), r).unwrap()).collect())
}

fn unsatisfiable(formulas: &[Formula]) -> bool {
    tautology(&Formula::not(Formula::conjunction(formulas.iter().cloned()))).unwrap()
}

fn small_limits() -> SaturationLimits {
    SaturationLimits { max_clauses: 400, max_iterations: 400, ..SaturationLimits::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn refutations_are_sound_and_replayable(
        clauses in prop::collection::vec(ground_clause(), 1..7),
        rules in prop_rules(),
    ) {
        let rs = RewriteSystem::from_prop_rules(rules);
        let mut theory: Vec<Formula> = clauses.iter().map(Clause::to_formula).collect();
        theory.extend(rules_to_axioms(&rs, &Signature::new()));
        let limits = small_limits();
        for mode in ProverMode::ALL {
            let run = saturate_with(&clauses, &rs, mode, &limits, &SaturationOptions::default());
            if let Outcome::Refuted(trace) = &run.outcome {
                let used: &[Formula] = if mode == ProverMode::ResolutionModulo { &theory } else { &theory[..clauses.len()] };
                prop_assert!(unsatisfiable(used), "{} refuted a satisfiable set", mode);
                prop_assert!(check_trace(trace, &clauses, &rs, mode, &limits).is_ok());
            }
            prop_assert!(check_trace(&run.trace, &clauses, &rs, mode, &limits).is_ok());
        }
    }

    #[test]
    fn plain_resolution_is_complete_on_ground_sets(clauses in prop::collection::vec(ground_clause(), 1..7)) {
        let theory: Vec<Formula> = clauses.iter().map(Clause::to_formula).collect();
        let outcome = saturate(&clauses, &RewriteSystem::default(), ProverMode::Resolution, &small_limits());
        prop_assert_eq!(matches!(outcome, Outcome::Refuted(_)), unsatisfiable(&theory));
    }

    #[test]
    fn paramodulation_refines_resolution(clauses in prop::collection::vec(ground_clause(), 1..7)) {
        let rs = RewriteSystem::default();
        let limits = small_limits();
        if matches!(saturate(&clauses, &rs, ProverMode::Resolution, &limits), Outcome::Refuted(_)) {
            prop_assert!(matches!(saturate(&clauses, &rs, ProverMode::Paramodulation, &limits), Outcome::Refuted(_)));
        }
    }
}

#[test]
fn ground_term_space_is_closed_under_subterms() {
    let space: BTreeSet<Term> = ground_terms(2).into_iter().collect();
    for t in &space {
        if let Term::App(_, args) = t {
            assert!(args.iter().all(|a| space.contains(a)), "{t}");
        }
    }
    assert!(space.contains(&Term::app("g", vec![Term::app("f", vec![Term::constant("a")]), Term::constant("b")])));
    assert!(!space.contains(&Term::app("f", vec![Term::app("f", vec![Term::app("f", vec![Term::constant("a")])])])));
}
