//! Term rewriting: matching, one-step reduction, normalization and the
//! congruence generated by a rule set. Proposition rules live in [`prop`],
//! critical-pair analysis in [`confluence`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::syntax::{Atom, Formula, Position, Substitution, Term, Var};

pub mod confluence;
pub mod prop;

pub use confluence::{
    critical_pairs, is_locally_confluent, CriticalPair, CriticalPairReport, Joinability, LocalConfluence,
};
pub use prop::{formula_equiv, formula_equiv_with_depth, normalize_formula, prop_rewrite_step};

/// Step budget used when no other is given.
pub const DEFAULT_FUEL: usize = 10_000;
/// Step budget for deciding a single critical pair.
pub const JOIN_FUEL: usize = 1_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("left-hand side of a rewrite rule cannot be a variable")]
    VariableLhs,
    #[error("right-hand side uses variable(s) {0} not bound by the left-hand side")]
    UnboundVariables(String),
    #[error("right-hand side of a proposition rule must be quantifier-free")]
    QuantifiedRhs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("no normal form within {fuel} rewrite steps")]
    FuelExhausted { fuel: usize },
}

fn unbound(lhs: &BTreeSet<Var>, rhs: &BTreeSet<Var>) -> Option<RuleError> {
    let extra: Vec<String> = rhs.difference(lhs).map(|v| v.to_string()).collect();
    (!extra.is_empty()).then(|| RuleError::UnboundVariables(extra.join(", ")))
}

/// Oriented equation `lhs -> rhs` between terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TermRule {
    lhs: Term,
    rhs: Term,
}

impl TermRule {
    pub fn new(lhs: Term, rhs: Term) -> Result<Self, RuleError> {
        if lhs.is_var() {
            return Err(RuleError::VariableLhs);
        }
        if let Some(e) = unbound(&lhs.vars(), &rhs.vars()) {
            return Err(e);
        }
        Ok(TermRule { lhs, rhs })
    }

    pub fn lhs(&self) -> &Term {
        &self.lhs
    }

    pub fn rhs(&self) -> &Term {
        &self.rhs
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.lhs.vars()
    }

    /// Variant of the rule whose variables avoid `avoid`.
    pub fn renamed_avoiding(&self, avoid: &BTreeSet<Var>) -> TermRule {
        let renaming = renaming_avoiding(&self.vars(), avoid);
        TermRule { lhs: renaming.apply(&self.lhs), rhs: renaming.apply(&self.rhs) }
    }
}

impl fmt::Display for TermRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs, self.rhs)
    }
}

/// Rewrite rule on propositions: an atom rewritten to a quantifier-free formula.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PropRule {
    lhs: Atom,
    rhs: Formula,
}

impl PropRule {
    pub fn new(lhs: Atom, rhs: Formula) -> Result<Self, RuleError> {
        if !rhs.is_quantifier_free() {
            return Err(RuleError::QuantifiedRhs);
        }
        if let Some(e) = unbound(&lhs.vars(), &rhs.free_vars()) {
            return Err(e);
        }
        Ok(PropRule { lhs, rhs })
    }

    pub fn lhs(&self) -> &Atom {
        &self.lhs
    }

    pub fn rhs(&self) -> &Formula {
        &self.rhs
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.lhs.vars()
    }

    pub fn renamed_avoiding(&self, avoid: &BTreeSet<Var>) -> PropRule {
        let renaming = renaming_avoiding(&self.vars(), avoid);
        PropRule { lhs: renaming.apply_atom(&self.lhs), rhs: renaming.apply_formula(&self.rhs) }
    }
}

impl fmt::Display for PropRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs, self.rhs)
    }
}

fn renaming_avoiding(own: &BTreeSet<Var>, avoid: &BTreeSet<Var>) -> Substitution {
    let mut used: BTreeSet<Var> = avoid.union(own).cloned().collect();
    let mut renaming = Substitution::new();
    for v in own.iter().filter(|v| avoid.contains(*v)) {
        let fresh = crate::syntax::fresh_var(v, &used);
        used.insert(fresh.clone());
        renaming.bind(v.clone(), Term::Var(fresh));
    }
    renaming
}

/// Term rules and proposition rules together.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RewriteSystem {
    pub term_rules: Vec<TermRule>,
    pub prop_rules: Vec<PropRule>,
}

impl RewriteSystem {
    pub fn new(term_rules: Vec<TermRule>, prop_rules: Vec<PropRule>) -> Self {
        RewriteSystem { term_rules, prop_rules }
    }

    pub fn from_term_rules(term_rules: Vec<TermRule>) -> Self {
        RewriteSystem { term_rules, prop_rules: Vec::new() }
    }

    pub fn from_prop_rules(prop_rules: Vec<PropRule>) -> Self {
        RewriteSystem { term_rules: Vec::new(), prop_rules }
    }

    pub fn is_empty(&self) -> bool {
        self.term_rules.is_empty() && self.prop_rules.is_empty()
    }

    /// The same system without its proposition rules.
    pub fn term_part(&self) -> RewriteSystem {
        RewriteSystem::from_term_rules(self.term_rules.clone())
    }
}

/// Display name of the `index`-th term rule.
pub fn term_rule_name(index: usize) -> String {
    format!("r{index}")
}

/// Display name of the `index`-th proposition rule.
pub fn prop_rule_name(index: usize) -> String {
    format!("p{index}")
}

/// Matches `pattern` against `subject`: the substitution `s` with
/// `s(pattern) == subject`, binding only pattern variables.
pub fn match_term(pattern: &Term, subject: &Term) -> Option<Substitution> {
    let mut bindings = BTreeMap::new();
    match_into(pattern, subject, &mut bindings).then(|| bindings.into_iter().collect())
}

pub fn match_atom(pattern: &Atom, subject: &Atom) -> Option<Substitution> {
    if pattern.pred != subject.pred || pattern.args.len() != subject.args.len() {
        return None;
    }
    let mut bindings = BTreeMap::new();
    pattern
        .args
        .iter()
        .zip(&subject.args)
        .all(|(p, t)| match_into(p, t, &mut bindings))
        .then(|| bindings.into_iter().collect())
}

// Identity bindings must stay visible while matching, so a plain map is
// used instead of `Substitution`, which drops them.
fn match_into(pattern: &Term, subject: &Term, bindings: &mut BTreeMap<Var, Term>) -> bool {
    match (pattern, subject) {
        (Term::Var(v), _) => match bindings.get(v) {
            Some(bound) => bound == subject,
            None => {
                bindings.insert(v.clone(), subject.clone());
                true
            }
        },
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| match_into(x, y, bindings))
        }
        (Term::App(..), Term::Var(_)) => false,
    }
}

/// A reducible position together with the rule that fires there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Redex {
    pub position: Position,
    pub rule: usize,
    pub result: Term,
}

/// Every one-step reduction of `t`, positions in pre-order, rules in order.
pub fn redexes(rs: &RewriteSystem, t: &Term) -> Vec<Redex> {
    let mut out = Vec::new();
    for position in t.nonvar_positions() {
        let sub = t.subterm(&position).expect("position from the term itself");
        for (rule, r) in rs.term_rules.iter().enumerate() {
            if let Some(s) = match_term(&r.lhs, sub) {
                out.push(Redex { result: t.replace_at(&position, s.apply(&r.rhs)), position: position.clone(), rule });
            }
        }
    }
    out
}

/// All one-step reducts of `t`; empty iff `t` is a normal form.
pub fn rewrite_step(rs: &RewriteSystem, t: &Term) -> Vec<Term> {
    let mut out: Vec<Term> = Vec::new();
    for r in redexes(rs, t) {
        if !out.contains(&r.result) {
            out.push(r.result);
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    LeftmostInnermost,
    LeftmostOutermost,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteStep {
    pub position: Position,
    pub rule: usize,
    pub result: Term,
}

/// A rewriting sequence `start -> ... -> result`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reduction {
    pub start: Term,
    pub steps: Vec<RewriteStep>,
}

impl Reduction {
    pub fn result(&self) -> &Term {
        self.steps.last().map(|s| &s.result).unwrap_or(&self.start)
    }

    /// The terms visited, starting term included.
    pub fn terms(&self) -> impl Iterator<Item = &Term> {
        std::iter::once(&self.start).chain(self.steps.iter().map(|s| &s.result))
    }
}

fn find_redex(rs: &RewriteSystem, t: &Term, strategy: Strategy) -> Option<(Position, usize, Term)> {
    fn visit(rs: &RewriteSystem, t: &Term, path: &mut Position, innermost: bool) -> Option<(Position, usize, Term)> {
        let Term::App(_, args) = t else { return None };
        let here =
            || rs.term_rules.iter().enumerate().find_map(|(i, r)| match_term(&r.lhs, t).map(|s| (i, s.apply(&r.rhs))));
        if !innermost {
            if let Some((i, rhs)) = here() {
                return Some((path.clone(), i, rhs));
            }
        }
        for (k, a) in args.iter().enumerate() {
            path.push(k);
            let found = visit(rs, a, path, innermost);
            path.pop();
            if found.is_some() {
                return found;
            }
        }
        if innermost {
            if let Some((i, rhs)) = here() {
                return Some((path.clone(), i, rhs));
            }
        }
        None
    }
    visit(rs, t, &mut Vec::new(), strategy == Strategy::LeftmostInnermost)
}

/// Normalizes with the given strategy, consuming from `budget` one unit per step.
pub(crate) fn reduce_with_budget(
    rs: &RewriteSystem,
    t: &Term,
    strategy: Strategy,
    budget: &mut usize,
    fuel: usize,
) -> Result<Reduction, RewriteError> {
    let mut steps = Vec::new();
    let mut current = t.clone();
    while let Some((position, rule, rhs)) = find_redex(rs, &current, strategy) {
        if *budget == 0 {
            return Err(RewriteError::FuelExhausted { fuel });
        }
        *budget -= 1;
        current = current.replace_at(&position, rhs);
        steps.push(RewriteStep { position, rule, result: current.clone() });
    }
    Ok(Reduction { start: t.clone(), steps })
}

/// Leftmost-innermost reduction to normal form, recording every step.
pub fn normalize_traced(rs: &RewriteSystem, t: &Term, fuel: usize) -> Result<Reduction, RewriteError> {
    normalize_with(rs, t, fuel, Strategy::LeftmostInnermost)
}

pub fn normalize_with(
    rs: &RewriteSystem,
    t: &Term,
    fuel: usize,
    strategy: Strategy,
) -> Result<Reduction, RewriteError> {
    let mut budget = fuel;
    reduce_with_budget(rs, t, strategy, &mut budget, fuel)
}

pub fn normalize(rs: &RewriteSystem, t: &Term, fuel: usize) -> Result<Term, RewriteError> {
    normalize_traced(rs, t, fuel).map(|r| r.result().clone())
}

/// Decides `t ≡ u` by comparing normal forms. Exact for confluent and
/// terminating systems; otherwise a `true` answer is still sound.
pub fn equivalent(rs: &RewriteSystem, t: &Term, u: &Term, fuel: usize) -> Result<bool, RewriteError> {
    if t == u {
        return Ok(true);
    }
    Ok(normalize(rs, t, fuel)? == normalize(rs, u, fuel)?)
}

/// Same predicate and pairwise equivalent arguments. Undecided within
/// `fuel` counts as not equivalent.
pub fn equivalent_atoms(rs: &RewriteSystem, a: &Atom, b: &Atom, fuel: usize) -> bool {
    a.pred == b.pred
        && a.args.len() == b.args.len()
        && a.args.iter().zip(&b.args).all(|(s, t)| equivalent(rs, s, t, fuel).unwrap_or(false))
}

/// Outcome of [`explain_equivalence`].
#[derive(Clone, Debug)]
pub struct EquivalenceReport {
    pub equivalent: bool,
    /// Reduction of the left term to its normal form.
    pub left: Reduction,
    /// Reduction of the right term to its normal form.
    pub right: Reduction,
    /// Set when the system is not known to be locally confluent, in which
    /// case a negative answer may be wrong.
    pub confluence: LocalConfluence,
}

/// Like [`equivalent`] but also returns the joining sequences and the local
/// confluence verdict of the system.
pub fn explain_equivalence(
    rs: &RewriteSystem,
    t: &Term,
    u: &Term,
    fuel: usize,
) -> Result<EquivalenceReport, RewriteError> {
    let left = normalize_traced(rs, t, fuel)?;
    let right = normalize_traced(rs, u, fuel)?;
    Ok(EquivalenceReport {
        equivalent: left.result() == right.result(),
        confluence: is_locally_confluent(rs, JOIN_FUEL),
        left,
        right,
    })
}
