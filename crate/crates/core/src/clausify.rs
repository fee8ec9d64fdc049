//! Clausal form: negation normal form, Skolemization, distribution into
//! clauses, and comparisons of clause sets.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use thiserror::Error;

use crate::syntax::{Atom, Clause, Formula, Literal, Name, Term, Var};

/// Negation normal form: no `=>` or `<=>`, negation only on atoms.
/// `true` and `false` are kept.
pub fn nnf(phi: &Formula) -> Formula {
    to_nnf(phi, true)
}

fn to_nnf(phi: &Formula, positive: bool) -> Formula {
    match phi {
        Formula::Atom(_) => {
            if positive {
                phi.clone()
            } else {
                Formula::not(phi.clone())
            }
        }
        Formula::Top => {
            if positive {
                Formula::Top
            } else {
                Formula::Bottom
            }
        }
        Formula::Bottom => {
            if positive {
                Formula::Bottom
            } else {
                Formula::Top
            }
        }
        Formula::Not(a) => to_nnf(a, !positive),
        Formula::And(a, b) if positive => Formula::and(to_nnf(a, true), to_nnf(b, true)),
        Formula::And(a, b) => Formula::or(to_nnf(a, false), to_nnf(b, false)),
        Formula::Or(a, b) if positive => Formula::or(to_nnf(a, true), to_nnf(b, true)),
        Formula::Or(a, b) => Formula::and(to_nnf(a, false), to_nnf(b, false)),
        Formula::Implies(a, b) if positive => Formula::or(to_nnf(a, false), to_nnf(b, true)),
        Formula::Implies(a, b) => Formula::and(to_nnf(a, true), to_nnf(b, false)),
        Formula::Iff(a, b) if positive => {
            Formula::and(Formula::or(to_nnf(a, false), to_nnf(b, true)), Formula::or(to_nnf(a, true), to_nnf(b, false)))
        }
        Formula::Iff(a, b) => {
            Formula::and(Formula::or(to_nnf(a, true), to_nnf(b, true)), Formula::or(to_nnf(a, false), to_nnf(b, false)))
        }
        Formula::Forall(v, a) if positive => Formula::forall(v.clone(), to_nnf(a, true)),
        Formula::Forall(v, a) => Formula::exists(v.clone(), to_nnf(a, false)),
        Formula::Exists(v, a) if positive => Formula::exists(v.clone(), to_nnf(a, true)),
        Formula::Exists(v, a) => Formula::forall(v.clone(), to_nnf(a, false)),
    }
}

/// `forall` over the free variables, in name order, outermost first.
pub fn universal_closure(phi: &Formula) -> Formula {
    phi.free_vars().into_iter().rev().fold(phi.clone(), |body, v| Formula::forall(v, body))
}

/// Issues fresh Skolem symbols `sk<n>` and records their arities.
#[derive(Clone, Debug, Default)]
pub struct Skolemizer {
    taken: BTreeSet<Name>,
    next: usize,
    introduced: Vec<(Name, usize)>,
}

impl Skolemizer {
    /// A registry whose symbols avoid every name in `taken`.
    pub fn avoiding<'a>(taken: impl IntoIterator<Item = &'a str>) -> Self {
        Skolemizer { taken: taken.into_iter().map(Arc::from).collect(), ..Skolemizer::default() }
    }

    /// Symbols introduced so far, in order.
    pub fn symbols(&self) -> &[(Name, usize)] {
        &self.introduced
    }

    fn fresh(&mut self, arity: usize) -> Name {
        loop {
            let name: Name = Arc::from(format!("sk{}", self.next));
            self.next += 1;
            if self.taken.insert(name.clone()) {
                self.introduced.push((name.clone(), arity));
                return name;
            }
        }
    }

    /// Replaces each existential of the NNF formula `phi` by a Skolem term
    /// over the universal variables governing it. Bound variables must be
    /// pairwise distinct.
    pub fn skolemize(&mut self, phi: &Formula) -> Formula {
        self.go(phi, &mut Vec::new())
    }

    fn go(&mut self, phi: &Formula, universals: &mut Vec<Var>) -> Formula {
        match phi {
            Formula::Forall(v, a) => {
                universals.push(v.clone());
                let body = self.go(a, universals);
                universals.pop();
                Formula::forall(v.clone(), body)
            }
            Formula::Exists(v, a) => {
                let name = self.fresh(universals.len());
                let witness = Term::App(name, universals.iter().cloned().map(Term::Var).collect());
                let body = crate::syntax::Substitution::singleton(v.clone(), witness).apply_formula(a);
                self.go(&body, universals)
            }
            Formula::Not(a) => Formula::not(self.go(a, universals)),
            Formula::And(a, b) => Formula::and(self.go(a, universals), self.go(b, universals)),
            Formula::Or(a, b) => Formula::or(self.go(a, universals), self.go(b, universals)),
            Formula::Implies(a, b) => Formula::implies(self.go(a, universals), self.go(b, universals)),
            Formula::Iff(a, b) => Formula::iff(self.go(a, universals), self.go(b, universals)),
            Formula::Atom(_) | Formula::Top | Formula::Bottom => phi.clone(),
        }
    }
}

/// Skolemizes the closed NNF of `phi` with symbols fresh for `phi`.
pub fn skolemize(phi: &Formula) -> Formula {
    let symbols: Vec<(Name, usize)> = phi.functions();
    let mut sk = Skolemizer::avoiding(symbols.iter().map(|(n, _)| &**n));
    sk.skolemize(&prepare(phi))
}

fn prepare(phi: &Formula) -> Formula {
    nnf(&universal_closure(phi)).rename_bound_apart(&BTreeSet::new())
}

fn strip_universals(phi: &Formula) -> Formula {
    match phi {
        Formula::Forall(_, a) => strip_universals(a),
        Formula::And(a, b) => Formula::and(strip_universals(a), strip_universals(b)),
        Formula::Or(a, b) => Formula::or(strip_universals(a), strip_universals(b)),
        _ => phi.clone(),
    }
}

// Clauses of a quantifier-free NNF formula by plain distribution. `false`
// contributes the empty clause and `true` no clause at all.
fn distribute(phi: &Formula) -> Vec<Vec<Literal>> {
    match phi {
        Formula::Atom(a) => vec![vec![Literal::pos(a.clone())]],
        Formula::Not(a) => match &**a {
            Formula::Atom(a) => vec![vec![Literal::neg(a.clone())]],
            _ => unreachable!("negation normal form"),
        },
        Formula::Top => Vec::new(),
        Formula::Bottom => vec![Vec::new()],
        Formula::And(a, b) => {
            let mut out = distribute(a);
            out.extend(distribute(b));
            out
        }
        Formula::Or(a, b) => {
            let right = distribute(b);
            let mut out = Vec::new();
            for l in distribute(a) {
                for r in &right {
                    let mut c = l.clone();
                    c.extend(r.iter().cloned());
                    out.push(c);
                }
            }
            out
        }
        _ => unreachable!("quantifier-free negation normal form"),
    }
}

fn simplify(clauses: Vec<Vec<Literal>>, out: &mut Vec<Clause>) {
    for c in clauses {
        let c = Clause::new(c).merged();
        if !c.is_tautology() && !out.contains(&c) {
            out.push(c);
        }
    }
}

fn clauses_with(phi: &Formula, sk: &mut Skolemizer, out: &mut Vec<Clause>) {
    let skolemized = sk.skolemize(&prepare(phi));
    simplify(distribute(&strip_universals(&skolemized)), out);
}

/// Clause set of `phi`, equisatisfiable with its universal closure.
/// Literal order follows the formula; repeated literals, tautologies and
/// repeated clauses are removed.
pub fn cnf(phi: &Formula) -> Vec<Clause> {
    let symbols = phi.functions();
    let mut sk = Skolemizer::avoiding(symbols.iter().map(|(n, _)| &**n));
    let mut out = Vec::new();
    clauses_with(phi, &mut sk, &mut out);
    out
}

/// Clausal form of a sequent `gamma |- delta`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ClausalProblem {
    /// Clauses of the negated succedent first, then of the antecedent.
    pub clauses: Vec<Clause>,
    pub skolems: Vec<(Name, usize)>,
    /// Number of leading clauses that come from the negated succedent.
    pub goal_count: usize,
}

/// `cl(gamma, ~delta)`, with one Skolem registry shared by all formulas.
pub fn clausal_form(gamma: &[Formula], delta: &[Formula]) -> ClausalProblem {
    let mut taken = Vec::new();
    for phi in gamma.iter().chain(delta) {
        taken.extend(phi.functions().into_iter().map(|(n, _)| n));
    }
    let mut sk = Skolemizer::avoiding(taken.iter().map(|n| &**n));
    let mut clauses = Vec::new();
    for phi in delta {
        clauses_with(&Formula::not(phi.clone()), &mut sk, &mut clauses);
    }
    let goal_count = clauses.len();
    for phi in gamma {
        clauses_with(phi, &mut sk, &mut clauses);
    }
    ClausalProblem { clauses, skolems: sk.introduced, goal_count }
}

/// Bijective variable renaming making the clauses equal as literal multisets.
pub fn is_variant(c: &Clause, d: &Clause) -> bool {
    fn extend(
        forward: &mut BTreeMap<Var, Var>,
        backward: &mut BTreeMap<Var, Var>,
        s: &Term,
        t: &Term,
        log: &mut Vec<Var>,
    ) -> bool {
        match (s, t) {
            (Term::Var(x), Term::Var(y)) => match (forward.get(x), backward.get(y)) {
                (Some(fx), _) => fx == y,
                (None, Some(_)) => false,
                (None, None) => {
                    forward.insert(x.clone(), y.clone());
                    backward.insert(y.clone(), x.clone());
                    log.push(x.clone());
                    true
                }
            },
            (Term::App(f, xs), Term::App(g, ys)) => {
                f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(a, b)| extend(forward, backward, a, b, log))
            }
            _ => false,
        }
    }

    fn search(
        lits: &[Literal],
        pool: &[Literal],
        used: &mut Vec<bool>,
        forward: &mut BTreeMap<Var, Var>,
        backward: &mut BTreeMap<Var, Var>,
    ) -> bool {
        let Some((first, rest)) = lits.split_first() else { return true };
        for (k, cand) in pool.iter().enumerate() {
            if used[k] || cand.positive != first.positive || cand.atom.pred != first.atom.pred {
                continue;
            }
            let mut log = Vec::new();
            let ok = first.atom.args.len() == cand.atom.args.len()
                && first.atom.args.iter().zip(&cand.atom.args).all(|(a, b)| extend(forward, backward, a, b, &mut log));
            if ok {
                used[k] = true;
                if search(rest, pool, used, forward, backward) {
                    return true;
                }
                used[k] = false;
            }
            for x in log {
                let y = forward.remove(&x).expect("logged binding");
                backward.remove(&y);
            }
        }
        false
    }

    c.len() == d.len()
        && search(&c.literals, &d.literals, &mut vec![false; d.len()], &mut BTreeMap::new(), &mut BTreeMap::new())
}

/// Clause set with sorted, deduplicated literals, tautologies removed and
/// one representative per variant class.
pub fn normalize_clause_set(clauses: &[Clause]) -> Vec<Clause> {
    let mut out: Vec<Clause> = Vec::new();
    for c in clauses {
        let mut lits = c.literals.clone();
        lits.sort();
        lits.dedup();
        let c = Clause::new(lits);
        if !c.is_tautology() && !out.iter().any(|d| is_variant(d, &c)) {
            out.push(c);
        }
    }
    out.sort();
    out
}

/// The two axiom sets have the same clausal form up to variable renaming.
pub fn clausal_equiv(first: &[Formula], second: &[Formula]) -> bool {
    let a = normalize_clause_set(&clausal_form(first, &[]).clauses);
    let b = normalize_clause_set(&clausal_form(second, &[]).clauses);
    a.len() == b.len()
        && a.iter().all(|c| b.iter().any(|d| is_variant(c, d)))
        && b.iter().all(|d| a.iter().any(|c| is_variant(c, d)))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("formula is not ground and quantifier-free")]
pub struct NotGround;

/// Truth-table validity of a ground quantifier-free formula.
pub fn tautology(phi: &Formula) -> Result<bool, NotGround> {
    if !phi.is_quantifier_free() || !phi.free_vars().is_empty() {
        return Err(NotGround);
    }
    let mut atoms: Vec<Atom> = Vec::new();
    phi.visit_atoms(&mut |a| {
        if !atoms.contains(a) {
            atoms.push(a.clone());
        }
    });
    if atoms.len() >= usize::BITS as usize {
        return Err(NotGround);
    }
    Ok((0..1usize << atoms.len()).all(|row| {
        let value = |a: &Atom| {
            let i = atoms.iter().position(|b| b == a).expect("collected atom");
            row >> i & 1 == 1
        };
        evaluate(phi, &value)
    }))
}

/// Truth value of a quantifier-free formula under an atom valuation.
pub fn evaluate(phi: &Formula, value: &dyn Fn(&Atom) -> bool) -> bool {
    match phi {
        Formula::Atom(a) => value(a),
        Formula::Top => true,
        Formula::Bottom => false,
        Formula::Not(a) => !evaluate(a, value),
        Formula::And(a, b) => evaluate(a, value) && evaluate(b, value),
        Formula::Or(a, b) => evaluate(a, value) || evaluate(b, value),
        Formula::Implies(a, b) => !evaluate(a, value) || evaluate(b, value),
        Formula::Iff(a, b) => evaluate(a, value) == evaluate(b, value),
        Formula::Forall(..) | Formula::Exists(..) => panic!("quantifier in a propositional evaluation"),
    }
}
