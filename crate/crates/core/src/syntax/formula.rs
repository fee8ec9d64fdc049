use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::term::{fresh_var, Name, Term, Var};

/// Predicate applied to terms. Propositional atoms have no arguments.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Atom {
    pub pred: Name,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn new(pred: impl AsRef<str>, args: Vec<Term>) -> Self {
        Atom { pred: Arc::from(pred.as_ref()), args }
    }

    pub fn prop(pred: impl AsRef<str>) -> Self {
        Atom::new(pred, Vec::new())
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        self.args.iter().for_each(|a| a.collect_vars(out));
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn size(&self) -> usize {
        1 + self.args.iter().map(Term::size).sum::<usize>()
    }

    /// Subterm at `pos`, whose first entry picks the argument.
    pub fn subterm(&self, pos: &[usize]) -> Option<&Term> {
        let (&i, rest) = pos.split_first()?;
        self.args.get(i)?.subterm(rest)
    }

    pub fn replace_at(&self, pos: &[usize], new: Term) -> Atom {
        let (&i, rest) = pos.split_first().expect("atom positions are non-empty");
        let mut args = self.args.clone();
        args[i] = args[i].replace_at(rest, new);
        Atom { pred: self.pred.clone(), args }
    }

    /// Non-variable subterm positions across all arguments.
    pub fn nonvar_positions(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for (i, a) in self.args.iter().enumerate() {
            for mut p in a.nonvar_positions() {
                p.insert(0, i);
                out.push(p);
            }
        }
        out
    }

    pub fn map_terms(&self, f: &mut dyn FnMut(&Term) -> Term) -> Atom {
        Atom { pred: self.pred.clone(), args: self.args.iter().map(|t| f(t)).collect() }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Formula {
    Atom(Atom),
    Top,
    Bottom,
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
}

impl From<Atom> for Formula {
    fn from(a: Atom) -> Self {
        Formula::Atom(a)
    }
}

impl Formula {
    pub fn atom(pred: impl AsRef<str>, args: Vec<Term>) -> Formula {
        Formula::Atom(Atom::new(pred, args))
    }

    pub fn prop(pred: impl AsRef<str>) -> Formula {
        Formula::Atom(Atom::prop(pred))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(v: Var, body: Formula) -> Formula {
        Formula::Forall(v, Box::new(body))
    }

    pub fn exists(v: Var, body: Formula) -> Formula {
        Formula::Exists(v, Box::new(body))
    }

    /// Right-nested conjunction; `Top` when empty.
    pub fn conjunction(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut items: Vec<Formula> = items.into_iter().collect();
        let Some(mut acc) = items.pop() else { return Formula::Top };
        while let Some(f) = items.pop() {
            acc = Formula::and(f, acc);
        }
        acc
    }

    /// Right-nested disjunction; `Bottom` when empty.
    pub fn disjunction(items: impl IntoIterator<Item = Formula>) -> Formula {
        let mut items: Vec<Formula> = items.into_iter().collect();
        let Some(mut acc) = items.pop() else { return Formula::Bottom };
        while let Some(f) = items.pop() {
            acc = Formula::or(f, acc);
        }
        acc
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bottom => true,
            Formula::Not(a) => a.is_quantifier_free(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            Formula::Forall(..) | Formula::Exists(..) => false,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free_vars(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free_vars(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Atom(a) => {
                for v in a.vars() {
                    if !bound.contains(&v) {
                        out.insert(v);
                    }
                }
            }
            Formula::Top | Formula::Bottom => {}
            Formula::Not(a) => a.collect_free_vars(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free_vars(bound, out);
                b.collect_free_vars(bound, out);
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                bound.push(v.clone());
                body.collect_free_vars(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.visit_atoms(&mut |a| a.collect_vars(&mut out));
        self.visit_binders(&mut |v| {
            out.insert(v.clone());
        });
        out
    }

    pub fn visit_atoms(&self, f: &mut dyn FnMut(&Atom)) {
        match self {
            Formula::Atom(a) => f(a),
            Formula::Top | Formula::Bottom => {}
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => a.visit_atoms(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.visit_atoms(f);
                b.visit_atoms(f);
            }
        }
    }

    fn visit_binders(&self, f: &mut dyn FnMut(&Var)) {
        match self {
            Formula::Atom(_) | Formula::Top | Formula::Bottom => {}
            Formula::Not(a) => a.visit_binders(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.visit_binders(f);
                b.visit_binders(f);
            }
            Formula::Forall(v, a) | Formula::Exists(v, a) => {
                f(v);
                a.visit_binders(f);
            }
        }
    }

    /// Rebuilds the formula applying `f` to every atom.
    pub fn map_atoms(&self, f: &mut dyn FnMut(&Atom) -> Formula) -> Formula {
        match self {
            Formula::Atom(a) => f(a),
            Formula::Top => Formula::Top,
            Formula::Bottom => Formula::Bottom,
            Formula::Not(a) => Formula::not(a.map_atoms(f)),
            Formula::And(a, b) => Formula::and(a.map_atoms(f), b.map_atoms(f)),
            Formula::Or(a, b) => Formula::or(a.map_atoms(f), b.map_atoms(f)),
            Formula::Implies(a, b) => Formula::implies(a.map_atoms(f), b.map_atoms(f)),
            Formula::Iff(a, b) => Formula::iff(a.map_atoms(f), b.map_atoms(f)),
            Formula::Forall(v, a) => Formula::forall(v.clone(), a.map_atoms(f)),
            Formula::Exists(v, a) => Formula::exists(v.clone(), a.map_atoms(f)),
        }
    }

    /// Predicate symbols with arities, in first-occurrence order.
    pub fn predicates(&self) -> Vec<(Name, usize)> {
        let mut out: Vec<(Name, usize)> = Vec::new();
        self.visit_atoms(&mut |a| {
            if !out.iter().any(|(p, n)| *p == a.pred && *n == a.args.len()) {
                out.push((a.pred.clone(), a.args.len()));
            }
        });
        out
    }

    pub fn functions(&self) -> Vec<(Name, usize)> {
        let mut out = Vec::new();
        self.visit_atoms(&mut |a| a.args.iter().for_each(|t| t.collect_symbols(&mut out)));
        out
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(a) => a.size(),
            Formula::Top | Formula::Bottom => 1,
            Formula::Not(a) | Formula::Forall(_, a) | Formula::Exists(_, a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    /// Representative of the alpha-equivalence class: bound variables are
    /// renamed by binding depth to names that cannot clash with user variables.
    pub fn canonical(&self) -> Formula {
        fn go(f: &Formula, env: &mut Vec<(Var, Var)>) -> Formula {
            let lookup =
                |env: &Vec<(Var, Var)>, v: &Var| env.iter().rev().find(|(from, _)| from == v).map(|(_, to)| to.clone());
            match f {
                Formula::Atom(a) => Formula::Atom(a.map_terms(&mut |t| t.rename(&|v| lookup(env, v)))),
                Formula::Top => Formula::Top,
                Formula::Bottom => Formula::Bottom,
                Formula::Not(a) => Formula::not(go(a, env)),
                Formula::And(a, b) => Formula::and(go(a, env), go(b, env)),
                Formula::Or(a, b) => Formula::or(go(a, env), go(b, env)),
                Formula::Implies(a, b) => Formula::implies(go(a, env), go(b, env)),
                Formula::Iff(a, b) => Formula::iff(go(a, env), go(b, env)),
                Formula::Forall(v, a) | Formula::Exists(v, a) => {
                    let fresh = Var::new(format!("#{}", env.len()));
                    env.push((v.clone(), fresh.clone()));
                    let body = go(a, env);
                    env.pop();
                    if matches!(f, Formula::Forall(..)) {
                        Formula::forall(fresh, body)
                    } else {
                        Formula::exists(fresh, body)
                    }
                }
            }
        }
        go(self, &mut Vec::new())
    }

    pub fn alpha_eq(&self, other: &Formula) -> bool {
        self == other || self.canonical() == other.canonical()
    }

    /// Renames bound variables so that no two binders share a name and no
    /// binder shadows a free variable or a name in `avoid`.
    pub fn rename_bound_apart(&self, avoid: &BTreeSet<Var>) -> Formula {
        let mut used: BTreeSet<Var> = avoid.clone();
        used.extend(self.free_vars());
        let mut env: BTreeMap<Var, Var> = BTreeMap::new();
        self.rename_bound_inner(&mut used, &mut env)
    }

    fn rename_bound_inner(&self, used: &mut BTreeSet<Var>, env: &mut BTreeMap<Var, Var>) -> Formula {
        match self {
            Formula::Atom(a) => Formula::Atom(a.map_terms(&mut |t| t.rename(&|v| env.get(v).cloned()))),
            Formula::Top => Formula::Top,
            Formula::Bottom => Formula::Bottom,
            Formula::Not(a) => Formula::not(a.rename_bound_inner(used, env)),
            Formula::And(a, b) => Formula::and(a.rename_bound_inner(used, env), b.rename_bound_inner(used, env)),
            Formula::Or(a, b) => Formula::or(a.rename_bound_inner(used, env), b.rename_bound_inner(used, env)),
            Formula::Implies(a, b) => {
                Formula::implies(a.rename_bound_inner(used, env), b.rename_bound_inner(used, env))
            }
            Formula::Iff(a, b) => Formula::iff(a.rename_bound_inner(used, env), b.rename_bound_inner(used, env)),
            Formula::Forall(v, a) | Formula::Exists(v, a) => {
                let fresh = fresh_var(v, used);
                used.insert(fresh.clone());
                let saved = env.insert(v.clone(), fresh.clone());
                let body = a.rename_bound_inner(used, env);
                match saved {
                    Some(s) => env.insert(v.clone(), s),
                    None => env.remove(v),
                };
                if matches!(self, Formula::Forall(..)) {
                    Formula::forall(fresh, body)
                } else {
                    Formula::exists(fresh, body)
                }
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Literal {
    pub positive: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn pos(atom: Atom) -> Self {
        Literal { positive: true, atom }
    }

    pub fn neg(atom: Atom) -> Self {
        Literal { positive: false, atom }
    }

    pub fn negated(&self) -> Literal {
        Literal { positive: !self.positive, atom: self.atom.clone() }
    }

    pub fn is_complement(&self, other: &Literal) -> bool {
        self.positive != other.positive && self.atom == other.atom
    }

    pub fn to_formula(&self) -> Formula {
        let f = Formula::Atom(self.atom.clone());
        if self.positive {
            f
        } else {
            Formula::not(f)
        }
    }

    pub fn map_terms(&self, f: &mut dyn FnMut(&Term) -> Term) -> Literal {
        Literal { positive: self.positive, atom: self.atom.map_terms(f) }
    }
}

/// A disjunction of literals whose variables are implicitly universally
/// quantified. The empty clause denotes a contradiction.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Clause {
    pub literals: Vec<Literal>,
}

impl Clause {
    pub fn new(literals: Vec<Literal>) -> Self {
        Clause { literals }
    }

    pub fn empty() -> Self {
        Clause::default()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.literals.iter().for_each(|l| l.atom.collect_vars(&mut out));
        out
    }

    pub fn is_ground(&self) -> bool {
        self.literals.iter().all(|l| l.atom.is_ground())
    }

    /// Symbol count, used as the selection weight.
    pub fn weight(&self) -> usize {
        self.literals.iter().map(|l| l.atom.size()).sum()
    }

    /// Contains a literal and its complement.
    pub fn is_tautology(&self) -> bool {
        self.literals.iter().enumerate().any(|(i, l)| self.literals[i + 1..].iter().any(|m| l.is_complement(m)))
    }

    /// Drops repeated occurrences of identical literals, keeping the first.
    pub fn merged(&self) -> Clause {
        let mut out: Vec<Literal> = Vec::with_capacity(self.literals.len());
        for l in &self.literals {
            if !out.contains(l) {
                out.push(l.clone());
            }
        }
        Clause::new(out)
    }

    pub fn without(&self, index: usize) -> Vec<Literal> {
        self.literals.iter().enumerate().filter(|(i, _)| *i != index).map(|(_, l)| l.clone()).collect()
    }

    /// The clause as a quantifier-free disjunction (`Bottom` when empty).
    pub fn to_formula(&self) -> Formula {
        Formula::disjunction(self.literals.iter().map(Literal::to_formula))
    }

    pub fn map_terms(&self, f: &mut dyn FnMut(&Term) -> Term) -> Clause {
        Clause::new(self.literals.iter().map(|l| l.map_terms(f)).collect())
    }

    pub fn rename(&self, map: &dyn Fn(&Var) -> Option<Var>) -> Clause {
        self.map_terms(&mut |t| t.rename(map))
    }
}

impl FromIterator<Literal> for Clause {
    fn from_iter<I: IntoIterator<Item = Literal>>(iter: I) -> Self {
        Clause::new(iter.into_iter().collect())
    }
}

/// Two-sided sequent `antecedent |- succedent`, kept as ordered lists.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Sequent {
    pub antecedent: Vec<Formula>,
    pub succedent: Vec<Formula>,
}

impl Sequent {
    pub fn new(antecedent: Vec<Formula>, succedent: Vec<Formula>) -> Self {
        Sequent { antecedent, succedent }
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        self.antecedent.iter().chain(&self.succedent).flat_map(Formula::free_vars).collect()
    }

    pub fn alpha_eq(&self, other: &Sequent) -> bool {
        formulas_alpha_eq(&self.antecedent, &other.antecedent) && formulas_alpha_eq(&self.succedent, &other.succedent)
    }
}

pub fn formulas_alpha_eq(a: &[Formula], b: &[Formula]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.alpha_eq(y))
}
