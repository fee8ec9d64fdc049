use std::collections::{BTreeMap, BTreeSet};

use super::formula::{Atom, Clause, Formula, Literal};
use super::term::{fresh_var, Term, Var};

/// Finite map from variables to terms, applied simultaneously.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Substitution {
    map: BTreeMap<Var, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Substitution::default()
    }

    pub fn singleton(v: Var, t: Term) -> Self {
        let mut s = Substitution::new();
        s.bind(v, t);
        s
    }

    /// Adds a binding; a binding of a variable to itself is dropped.
    pub fn bind(&mut self, v: Var, t: Term) {
        if t.as_var() == Some(&v) {
            self.map.remove(&v);
        } else {
            self.map.insert(v, t);
        }
    }

    pub fn get(&self, v: &Var) -> Option<&Term> {
        self.map.get(v)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.map.iter()
    }

    pub fn domain(&self) -> BTreeSet<Var> {
        self.map.keys().cloned().collect()
    }

    /// Variables occurring in the images of the bindings.
    pub fn range_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.map.values().for_each(|t| t.collect_vars(&mut out));
        out
    }

    pub fn apply(&self, t: &Term) -> Term {
        if self.map.is_empty() {
            return t.clone();
        }
        match t {
            Term::Var(v) => self.map.get(v).cloned().unwrap_or_else(|| t.clone()),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| self.apply(a)).collect()),
        }
    }

    pub fn apply_atom(&self, a: &Atom) -> Atom {
        a.map_terms(&mut |t| self.apply(t))
    }

    pub fn apply_literal(&self, l: &Literal) -> Literal {
        Literal { positive: l.positive, atom: self.apply_atom(&l.atom) }
    }

    pub fn apply_clause(&self, c: &Clause) -> Clause {
        Clause::new(c.literals.iter().map(|l| self.apply_literal(l)).collect())
    }

    /// Capture-avoiding application: only free occurrences are replaced, and a
    /// binder that would capture a variable of an inserted term is renamed.
    pub fn apply_formula(&self, f: &Formula) -> Formula {
        if self.map.is_empty() {
            return f.clone();
        }
        match f {
            Formula::Atom(a) => Formula::Atom(self.apply_atom(a)),
            Formula::Top => Formula::Top,
            Formula::Bottom => Formula::Bottom,
            Formula::Not(a) => Formula::not(self.apply_formula(a)),
            Formula::And(a, b) => Formula::and(self.apply_formula(a), self.apply_formula(b)),
            Formula::Or(a, b) => Formula::or(self.apply_formula(a), self.apply_formula(b)),
            Formula::Implies(a, b) => Formula::implies(self.apply_formula(a), self.apply_formula(b)),
            Formula::Iff(a, b) => Formula::iff(self.apply_formula(a), self.apply_formula(b)),
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let (v2, body2) = self.apply_under_binder(v, body);
                if matches!(f, Formula::Forall(..)) {
                    Formula::forall(v2, body2)
                } else {
                    Formula::exists(v2, body2)
                }
            }
        }
    }

    fn apply_under_binder(&self, v: &Var, body: &Formula) -> (Var, Formula) {
        let free = body.free_vars();
        let mut inner = Substitution::new();
        for (x, t) in &self.map {
            if x != v && free.contains(x) {
                inner.map.insert(x.clone(), t.clone());
            }
        }
        let captured = inner.map.values().any(|t| t.occurs(v));
        if !captured {
            return (v.clone(), inner.apply_formula(body));
        }
        let mut avoid = free;
        avoid.extend(inner.range_vars());
        avoid.extend(inner.domain());
        avoid.extend(body.all_vars());
        let fresh = fresh_var(v, &avoid);
        inner.map.insert(v.clone(), Term::Var(fresh.clone()));
        (fresh, inner.apply_formula(body))
    }

    /// The substitution that behaves as `self` followed by `then`.
    pub fn compose(&self, then: &Substitution) -> Substitution {
        let mut out = Substitution::new();
        for (v, t) in &self.map {
            out.bind(v.clone(), then.apply(t));
        }
        for (v, t) in &then.map {
            if !self.map.contains_key(v) {
                out.bind(v.clone(), t.clone());
            }
        }
        out
    }

    /// No domain variable occurs in any image.
    pub fn is_idempotent(&self) -> bool {
        let range = self.range_vars();
        self.map.keys().all(|v| !range.contains(v))
    }

    /// Keeps only the bindings of the given variables.
    pub fn restrict(&self, vars: &BTreeSet<Var>) -> Substitution {
        Substitution {
            map: self.map.iter().filter(|(v, _)| vars.contains(*v)).map(|(v, t)| (v.clone(), t.clone())).collect(),
        }
    }

    pub fn is_renaming(&self) -> bool {
        let mut images = BTreeSet::new();
        self.map.values().all(|t| matches!(t, Term::Var(w) if images.insert(w.clone())))
    }
}

impl FromIterator<(Var, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (Var, Term)>>(iter: I) -> Self {
        let mut s = Substitution::new();
        for (v, t) in iter {
            s.bind(v, t);
        }
        s
    }
}

/// Renames the variables of `second` that also occur in `first`, leaving
/// `first` untouched. Deterministic, so inferences can be replayed.
pub fn rename_apart(first: &Clause, second: &Clause) -> (Clause, Clause) {
    let taken = first.vars();
    let (renamed, _) = rename_clause_avoiding(second, &taken);
    (first.clone(), renamed)
}

/// Renames every variable of `c` that occurs in `avoid`; returns the renaming used.
pub fn rename_clause_avoiding(c: &Clause, avoid: &BTreeSet<Var>) -> (Clause, Substitution) {
    let own = c.vars();
    let mut used: BTreeSet<Var> = avoid.union(&own).cloned().collect();
    let mut renaming = Substitution::new();
    for v in own.iter().filter(|v| avoid.contains(*v)) {
        let fresh = fresh_var(v, &used);
        used.insert(fresh.clone());
        renaming.bind(v.clone(), Term::Var(fresh));
    }
    (renaming.apply_clause(c), renaming)
}
