//! Rewriting of propositions: atoms rewritten by proposition rules, terms
//! inside atoms by term rules, and the induced congruence on formulas.

use std::collections::HashSet;

use super::{match_atom, redexes, reduce_with_budget, RewriteError, RewriteSystem, Strategy};
use crate::syntax::{Atom, Formula};

/// Bound on the breadth-first search used when a formula has no normal form.
pub const DEFAULT_EQUIV_DEPTH: usize = 8;

// Deepest chain of nested proposition-rule unfoldings tried by
// `normalize_formula` before reporting non-termination.
const MAX_UNFOLD_NESTING: usize = 256;

/// Rebuilds `phi` once per alternative of each atom occurrence.
fn rewrite_each_atom(phi: &Formula, alternatives: &dyn Fn(&Atom) -> Vec<Formula>) -> Vec<Formula> {
    match phi {
        Formula::Atom(a) => alternatives(a),
        Formula::Top | Formula::Bottom => Vec::new(),
        Formula::Not(a) => rewrite_each_atom(a, alternatives).into_iter().map(Formula::not).collect(),
        Formula::Forall(v, a) => {
            rewrite_each_atom(a, alternatives).into_iter().map(|b| Formula::forall(v.clone(), b)).collect()
        }
        Formula::Exists(v, a) => {
            rewrite_each_atom(a, alternatives).into_iter().map(|b| Formula::exists(v.clone(), b)).collect()
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
            let rebuild = |x: Formula, y: Formula| match phi {
                Formula::And(..) => Formula::and(x, y),
                Formula::Or(..) => Formula::or(x, y),
                Formula::Implies(..) => Formula::implies(x, y),
                _ => Formula::iff(x, y),
            };
            let mut out: Vec<Formula> =
                rewrite_each_atom(a, alternatives).into_iter().map(|x| rebuild(x, (**b).clone())).collect();
            out.extend(rewrite_each_atom(b, alternatives).into_iter().map(|y| rebuild((**a).clone(), y)));
            out
        }
    }
}

fn prop_rule_reducts(rs: &RewriteSystem, a: &Atom) -> Vec<Formula> {
    rs.prop_rules.iter().filter_map(|r| match_atom(r.lhs(), a).map(|s| s.apply_formula(r.rhs()))).collect()
}

fn term_rule_reducts(rs: &RewriteSystem, a: &Atom) -> Vec<Formula> {
    let mut out = Vec::new();
    for (i, arg) in a.args.iter().enumerate() {
        for redex in redexes(rs, arg) {
            let mut args = a.args.clone();
            args[i] = redex.result;
            out.push(Formula::Atom(Atom { pred: a.pred.clone(), args }));
        }
    }
    out
}

fn dedup(items: Vec<Formula>) -> Vec<Formula> {
    let mut out: Vec<Formula> = Vec::new();
    for f in items {
        if !out.contains(&f) {
            out.push(f);
        }
    }
    out
}

/// Every formula obtained from `phi` by one rewrite: an atom occurrence by a
/// proposition rule, or a term occurrence by a term rule.
pub fn prop_rewrite_step(rs: &RewriteSystem, phi: &Formula) -> Vec<Formula> {
    dedup(rewrite_each_atom(phi, &|a| {
        let mut alts = prop_rule_reducts(rs, a);
        alts.extend(term_rule_reducts(rs, a));
        alts
    }))
}

/// Normalizes the terms of every atom with the term rules only.
pub(crate) fn normalize_terms(
    rs: &RewriteSystem,
    phi: &Formula,
    budget: &mut usize,
    fuel: usize,
) -> Result<Formula, RewriteError> {
    let mut err = None;
    let out = phi.map_atoms(&mut |a| {
        if err.is_some() {
            return Formula::Atom(a.clone());
        }
        match normalize_atom_terms(rs, a, budget, fuel) {
            Ok(b) => Formula::Atom(b),
            Err(e) => {
                err = Some(e);
                Formula::Atom(a.clone())
            }
        }
    });
    err.map_or(Ok(out), Err)
}

fn normalize_atom_terms(rs: &RewriteSystem, a: &Atom, budget: &mut usize, fuel: usize) -> Result<Atom, RewriteError> {
    let mut args = Vec::with_capacity(a.args.len());
    for t in &a.args {
        args.push(reduce_with_budget(rs, t, Strategy::LeftmostInnermost, budget, fuel)?.result().clone());
    }
    Ok(Atom { pred: a.pred.clone(), args })
}

/// Innermost normalization of a formula: terms by term rules, then atoms by
/// the first matching proposition rule, recursively. An atom that reappears
/// inside its own unfolding is reported as `FuelExhausted` straight away,
/// since such a system has no normal form for it.
pub fn normalize_formula(rs: &RewriteSystem, phi: &Formula, fuel: usize) -> Result<Formula, RewriteError> {
    let mut budget = fuel;
    let mut unfolding = Vec::new();
    normalize_inner(rs, phi, &mut budget, fuel, &mut unfolding)
}

fn normalize_inner(
    rs: &RewriteSystem,
    phi: &Formula,
    budget: &mut usize,
    fuel: usize,
    unfolding: &mut Vec<Atom>,
) -> Result<Formula, RewriteError> {
    let rec =
        |f: &Formula, budget: &mut usize, unfolding: &mut Vec<Atom>| normalize_inner(rs, f, budget, fuel, unfolding);
    Ok(match phi {
        Formula::Atom(a) => {
            let a = normalize_atom_terms(rs, a, budget, fuel)?;
            let fired = rs.prop_rules.iter().find_map(|r| match_atom(r.lhs(), &a).map(|s| s.apply_formula(r.rhs())));
            match fired {
                None => Formula::Atom(a),
                Some(rhs) => {
                    if *budget == 0 || unfolding.len() >= MAX_UNFOLD_NESTING || unfolding.contains(&a) {
                        return Err(RewriteError::FuelExhausted { fuel });
                    }
                    *budget -= 1;
                    unfolding.push(a);
                    let out = rec(&rhs, budget, unfolding);
                    unfolding.pop();
                    out?
                }
            }
        }
        Formula::Top => Formula::Top,
        Formula::Bottom => Formula::Bottom,
        Formula::Not(a) => Formula::not(rec(a, budget, unfolding)?),
        Formula::And(a, b) => Formula::and(rec(a, budget, unfolding)?, rec(b, budget, unfolding)?),
        Formula::Or(a, b) => Formula::or(rec(a, budget, unfolding)?, rec(b, budget, unfolding)?),
        Formula::Implies(a, b) => Formula::implies(rec(a, budget, unfolding)?, rec(b, budget, unfolding)?),
        Formula::Iff(a, b) => Formula::iff(rec(a, budget, unfolding)?, rec(b, budget, unfolding)?),
        Formula::Forall(v, a) => Formula::forall(v.clone(), rec(a, budget, unfolding)?),
        Formula::Exists(v, a) => Formula::exists(v.clone(), rec(a, budget, unfolding)?),
    })
}

/// Decides `phi ≡ psi` with the default search depth.
pub fn formula_equiv(rs: &RewriteSystem, phi: &Formula, psi: &Formula, fuel: usize) -> Result<bool, RewriteError> {
    formula_equiv_with_depth(rs, phi, psi, fuel, DEFAULT_EQUIV_DEPTH)
}

/// Decides `phi ≡ psi` up to alpha-equivalence. Normal forms are compared
/// when both exist; otherwise a bidirectional breadth-first search over
/// proposition-rule steps looks for a common reduct within `depth` levels.
/// `Ok(false)` is only returned when both reachable sets were exhausted;
/// a truncated search yields `FuelExhausted`.
pub fn formula_equiv_with_depth(
    rs: &RewriteSystem,
    phi: &Formula,
    psi: &Formula,
    fuel: usize,
    depth: usize,
) -> Result<bool, RewriteError> {
    if phi.alpha_eq(psi) {
        return Ok(true);
    }
    match (normalize_formula(rs, phi, fuel), normalize_formula(rs, psi, fuel)) {
        (Ok(a), Ok(b)) => Ok(a.alpha_eq(&b)),
        _ => bounded_search(rs, phi, psi, fuel, depth),
    }
}

fn bounded_search(
    rs: &RewriteSystem,
    phi: &Formula,
    psi: &Formula,
    fuel: usize,
    depth: usize,
) -> Result<bool, RewriteError> {
    let prepare = |f: &Formula| -> Result<Formula, RewriteError> {
        let mut budget = fuel;
        Ok(normalize_terms(rs, f, &mut budget, fuel)?.canonical())
    };
    let start_left = prepare(phi)?;
    let start_right = prepare(psi)?;
    if start_left == start_right {
        return Ok(true);
    }
    let mut seen = [HashSet::from([start_left.clone()]), HashSet::from([start_right.clone()])];
    let mut frontier = [vec![start_left], vec![start_right]];
    for level in 0..depth {
        // Smaller frontier first; ties alternate so both sides advance.
        let side = match (frontier[0].is_empty(), frontier[1].is_empty()) {
            (true, true) => return Ok(false),
            (false, true) => 0,
            (true, false) => 1,
            (false, false) => match frontier[0].len().cmp(&frontier[1].len()) {
                std::cmp::Ordering::Less => 0,
                std::cmp::Ordering::Greater => 1,
                std::cmp::Ordering::Equal => level % 2,
            },
        };
        let mut next = Vec::new();
        for f in std::mem::take(&mut frontier[side]) {
            for g in dedup(rewrite_each_atom(&f, &|a| prop_rule_reducts(rs, a))) {
                let g = prepare(&g)?;
                if seen[1 - side].contains(&g) {
                    return Ok(true);
                }
                if seen[side].insert(g.clone()) {
                    next.push(g);
                }
            }
        }
        frontier[side] = next;
    }
    if frontier.iter().all(Vec::is_empty) {
        Ok(false)
    } else {
        Err(RewriteError::FuelExhausted { fuel })
    }
}
