//! Basic narrowing on unification problems. Narrowing happens only at
//! positions that come from the original problem or from inserted rule
//! right-hand sides, never inside terms introduced by the substitution.

use std::collections::{BTreeSet, VecDeque};

use super::unify_with;
use crate::rewrite::{equivalent, RewriteSystem, TermRule, DEFAULT_FUEL};
use crate::syntax::{fresh_var, Atom, Position, Substitution, Term, Var};

// Problems expanded per enumeration before it is reported as truncated.
const MAX_NODES: usize = 20_000;

/// Pending equations together with the substitution accumulated so far,
/// which is idempotent and already applied to the equations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnifProblem {
    pub equations: Vec<(Term, Term)>,
    pub sigma: Substitution,
    /// Narrowable positions per equation side.
    basic: Vec<[Vec<Position>; 2]>,
}

impl UnifProblem {
    pub fn new(equations: Vec<(Term, Term)>) -> Self {
        let basic = equations.iter().map(|(l, r)| [l.nonvar_positions(), r.nonvar_positions()]).collect();
        UnifProblem { equations, sigma: Substitution::new(), basic }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        for (l, r) in &self.equations {
            l.collect_vars(&mut out);
            r.collect_vars(&mut out);
        }
        out
    }

    /// Lazily enumerates equational unifiers, breadth-first on narrowing depth.
    pub fn enumerate(self, rs: &RewriteSystem, depth: usize, fuel: usize) -> EUnifier<'_> {
        let vars = self.vars();
        EUnifier {
            rs,
            depth,
            fuel,
            original: self.equations.clone(),
            vars,
            queue: VecDeque::from([(self, 0)]),
            ready: VecDeque::new(),
            emitted: Vec::new(),
            truncated: false,
            expanded: 0,
            done: false,
        }
    }

    fn solve(&self) -> Option<Substitution> {
        self.equations.iter().try_fold(self.sigma.clone(), |s, (l, r)| unify_with(s, l, r))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EUnifyItem {
    Unifier(Substitution),
    /// Emitted last when some branch was cut off by the depth bound.
    DepthExhausted,
}

/// Enumerator returned by [`e_unify`].
pub struct EUnifier<'a> {
    rs: &'a RewriteSystem,
    depth: usize,
    fuel: usize,
    original: Vec<(Term, Term)>,
    vars: BTreeSet<Var>,
    queue: VecDeque<(UnifProblem, usize)>,
    ready: VecDeque<Substitution>,
    emitted: Vec<Substitution>,
    truncated: bool,
    expanded: usize,
    done: bool,
}

impl EUnifier<'_> {
    fn sound(&self, s: &Substitution) -> bool {
        self.original.iter().all(|(l, r)| equivalent(self.rs, &s.apply(l), &s.apply(r), self.fuel).unwrap_or(false))
    }

    fn expand(&mut self, problem: UnifProblem, level: usize) {
        self.expanded += 1;
        if let Some(s) = problem.solve() {
            let s = s.restrict(&self.vars);
            if !self.emitted.contains(&s) && self.sound(&s) {
                self.emitted.push(s.clone());
                self.ready.push_back(s);
            }
        }
        let children = narrowings(self.rs, &problem, &self.vars);
        if children.is_empty() {
            return;
        }
        if level >= self.depth {
            self.truncated = true;
            return;
        }
        self.queue.extend(children.into_iter().map(|c| (c, level + 1)));
    }
}

impl Iterator for EUnifier<'_> {
    type Item = EUnifyItem;

    fn next(&mut self) -> Option<EUnifyItem> {
        loop {
            if let Some(s) = self.ready.pop_front() {
                return Some(EUnifyItem::Unifier(s));
            }
            if self.done {
                return None;
            }
            if self.expanded >= MAX_NODES && !self.queue.is_empty() {
                self.truncated = true;
                self.queue.clear();
            }
            match self.queue.pop_front() {
                Some((problem, level)) => self.expand(problem, level),
                None => {
                    self.done = true;
                    if self.truncated {
                        return Some(EUnifyItem::DepthExhausted);
                    }
                }
            }
        }
    }
}

/// One-step basic narrowings of `problem` with every term rule.
fn narrowings(rs: &RewriteSystem, problem: &UnifProblem, original: &BTreeSet<Var>) -> Vec<UnifProblem> {
    let mut avoid = problem.vars();
    avoid.extend(problem.sigma.domain());
    avoid.extend(problem.sigma.range_vars());
    avoid.extend(original.iter().cloned());
    // One renamed instance per rule serves every position: each child is a
    // separate problem.
    let rules: Vec<TermRule> = rs.term_rules.iter().map(|r| renamed_fully(r, &avoid)).collect();
    let mut out = Vec::new();
    for (k, (l, r)) in problem.equations.iter().enumerate() {
        for side in 0..2 {
            let term = if side == 0 { l } else { r };
            for p in &problem.basic[k][side] {
                let sub = term.subterm(p).expect("basic positions stay inside the term");
                for rule in &rules {
                    if let (Term::App(f, _), Term::App(g, _)) = (sub, rule.lhs()) {
                        if f != g {
                            continue;
                        }
                    }
                    let Some(theta) = unify_with(Substitution::new(), sub, rule.lhs()) else { continue };
                    out.push(child(problem, k, side, p, rule.rhs(), &theta));
                }
            }
        }
    }
    out
}

// Every rule variable gets a fresh `<name>_<n>` name, including those that
// do not clash yet, so a rule instance never shares a variable with the problem.
fn renamed_fully(rule: &TermRule, avoid: &BTreeSet<Var>) -> TermRule {
    let mut used = avoid.clone();
    used.extend(rule.vars());
    let mut renaming = Substitution::new();
    for v in rule.vars() {
        let fresh = fresh_var(&v, &used);
        used.insert(fresh.clone());
        renaming.bind(v, Term::Var(fresh));
    }
    TermRule::new(renaming.apply(rule.lhs()), renaming.apply(rule.rhs())).expect("renaming preserves rule invariants")
}

fn child(problem: &UnifProblem, k: usize, side: usize, p: &Position, rhs: &Term, theta: &Substitution) -> UnifProblem {
    let mut equations = Vec::with_capacity(problem.equations.len());
    for (i, (l, r)) in problem.equations.iter().enumerate() {
        let (mut l, mut r) = (l.clone(), r.clone());
        if i == k {
            let target = if side == 0 { &mut l } else { &mut r };
            *target = target.replace_at(p, rhs.clone());
        }
        equations.push((theta.apply(&l), theta.apply(&r)));
    }
    let mut basic = problem.basic.clone();
    let positions = &mut basic[k][side];
    positions.retain(|q| !q.starts_with(p));
    for q in rhs.nonvar_positions() {
        let mut full = p.clone();
        full.extend(q);
        positions.push(full);
    }
    positions.sort();
    UnifProblem { equations, sigma: problem.sigma.compose(theta), basic }
}

/// Equational unifiers of `t` and `u` modulo the term rules of `rs`.
pub fn e_unify<'a>(rs: &'a RewriteSystem, t: &Term, u: &Term, depth: usize) -> EUnifier<'a> {
    UnifProblem::new(vec![(t.clone(), u.clone())]).enumerate(rs, depth, DEFAULT_FUEL)
}

/// Equational unifiers of two atoms, argument-wise. Empty when the
/// predicates differ.
pub fn e_unify_atoms<'a>(rs: &'a RewriteSystem, a: &Atom, b: &Atom, depth: usize, fuel: usize) -> EUnifier<'a> {
    let equations = if a.pred == b.pred && a.args.len() == b.args.len() {
        a.args.iter().cloned().zip(b.args.iter().cloned()).collect()
    } else {
        Vec::new()
    };
    let mut enumerator = UnifProblem::new(equations).enumerate(rs, depth, fuel);
    if a.pred != b.pred || a.args.len() != b.args.len() {
        enumerator.queue.clear();
        enumerator.done = true;
    }
    enumerator
}

/// Every unifier an enumeration produced, and whether it was truncated.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EUnifyResult {
    pub unifiers: Vec<Substitution>,
    pub truncated: bool,
}

impl FromIterator<EUnifyItem> for EUnifyResult {
    fn from_iter<I: IntoIterator<Item = EUnifyItem>>(iter: I) -> Self {
        let mut out = EUnifyResult::default();
        for item in iter {
            match item {
                EUnifyItem::Unifier(s) => out.unifiers.push(s),
                EUnifyItem::DepthExhausted => out.truncated = true,
            }
        }
        out
    }
}

pub fn e_unify_all(rs: &RewriteSystem, t: &Term, u: &Term, depth: usize) -> EUnifyResult {
    e_unify(rs, t, u, depth).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::tests::{assoc, peano, plus};
    use crate::unify::mgu;

    fn c(n: &str) -> Term {
        Term::constant(n)
    }

    #[test]
    fn bracketings_unify_with_empty_substitution() {
        let t = plus(plus(c("a"), plus(c("b"), c("c"))), plus(c("d"), c("e")));
        let u = plus(plus(c("a"), c("b")), plus(plus(c("c"), c("d")), c("e")));
        let result = e_unify_all(&assoc(), &t, &u, crate::unify::DEFAULT_DEPTH);
        assert!(result.unifiers.contains(&Substitution::new()));
    }

    #[test]
    fn empty_system_matches_mgu() {
        let rs = RewriteSystem::default();
        let t = Term::app("f", vec![Term::var("X"), c("b")]);
        let u = Term::app("f", vec![c("a"), Term::var("Y")]);
        let result = e_unify_all(&rs, &t, &u, 4);
        assert_eq!(result.unifiers, vec![mgu(&t, &u).unwrap()]);
        assert!(!result.truncated);
        assert!(e_unify_all(&rs, &c("a"), &c("b"), 4).unifiers.is_empty());
    }

    #[test]
    fn peano_solves_x_plus_zero() {
        let t = plus(Term::var("X"), Term::numeral(0));
        let result = e_unify_all(&peano(), &t, &Term::numeral(1), 3);
        let expected = Substitution::singleton(Var::new("X"), Term::numeral(1));
        assert!(result.unifiers.contains(&expected), "{:?}", result.unifiers);
    }

    #[test]
    fn truncation_is_reported() {
        let t = plus(Term::var("X"), Term::var("Y"));
        let result = e_unify_all(&peano(), &t, &Term::numeral(3), 1);
        assert!(result.truncated);
    }

    #[test]
    fn depth_zero_is_syntactic() {
        let t = plus(Term::var("X"), c("b"));
        let u = plus(c("a"), Term::var("Y"));
        let first = e_unify(&assoc(), &t, &u, 0).next();
        assert_eq!(first, Some(EUnifyItem::Unifier(mgu(&t, &u).unwrap())));
    }

    #[test]
    fn mismatched_atoms_have_no_unifiers() {
        let rs = assoc();
        let a = Atom::new("P", vec![c("a")]);
        let b = Atom::new("Q", vec![c("a")]);
        assert_eq!(e_unify_atoms(&rs, &a, &b, 3, DEFAULT_FUEL).count(), 0);
    }
}
