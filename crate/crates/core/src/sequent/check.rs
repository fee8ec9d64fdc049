use std::fmt;

use serde::Serialize;

use super::{NodePath, ProofNode, RuleTag, Side};
use crate::rewrite::{formula_equiv, RewriteSystem};
use crate::syntax::{formulas_alpha_eq, Formula, Sequent, Substitution, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum InvalidReason {
    ArityMismatch,
    SideConditionFailed,
    EigenvariableViolation,
    EquivUndecidedWithinFuel,
}

impl fmt::Display for InvalidReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckResult {
    Valid,
    /// First failing node in preorder.
    Invalid {
        path: NodePath,
        reason: InvalidReason,
        detail: String,
    },
}

impl CheckResult {
    pub fn is_valid(&self) -> bool {
        *self == CheckResult::Valid
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheckResult::Valid => f.write_str("Valid"),
            CheckResult::Invalid { path, reason, detail } => {
                let p: Vec<String> = path.iter().map(usize::to_string).collect();
                write!(f, "Invalid at [{}]: {reason}: {detail}", p.join("."))
            }
        }
    }
}

type Failure = (InvalidReason, String);

fn fail<T>(detail: impl Into<String>) -> Result<T, Failure> {
    Err((InvalidReason::SideConditionFailed, detail.into()))
}

/// Checks every node against its rule schema, with `≡` side conditions
/// decided by `formula_equiv` under `fuel`.
pub fn check_proof(p: &ProofNode, rs: &RewriteSystem, fuel: usize) -> CheckResult {
    let mut path = Vec::new();
    match walk(p, rs, fuel, &mut path) {
        Ok(()) => CheckResult::Valid,
        Err((reason, detail)) => CheckResult::Invalid { path, reason, detail },
    }
}

fn walk(p: &ProofNode, rs: &RewriteSystem, fuel: usize, path: &mut NodePath) -> Result<(), Failure> {
    Checker { rs, fuel }.node(p)?;
    for (i, q) in p.premises.iter().enumerate() {
        path.push(i);
        walk(q, rs, fuel, path)?;
        path.pop();
    }
    Ok(())
}

struct Checker<'a> {
    rs: &'a RewriteSystem,
    fuel: usize,
}

fn replaced(list: &[Formula], i: usize, items: &[Formula]) -> Vec<Formula> {
    let mut out = list[..i].to_vec();
    out.extend_from_slice(items);
    out.extend_from_slice(&list[i + 1..]);
    out
}

fn prepended(item: &Formula, list: &[Formula]) -> Vec<Formula> {
    let mut out = vec![item.clone()];
    out.extend_from_slice(list);
    out
}

fn component(list: &[Formula], i: usize) -> Result<&Formula, Failure> {
    match list.get(i) {
        Some(f) => Ok(f),
        None => fail("premise lacks the expected component"),
    }
}

fn same(premise: &Sequent, antecedent: &[Formula], succedent: &[Formula]) -> Result<(), Failure> {
    if formulas_alpha_eq(&premise.antecedent, antecedent) && formulas_alpha_eq(&premise.succedent, succedent) {
        Ok(())
    } else {
        let expected = Sequent::new(antecedent.to_vec(), succedent.to_vec());
        fail(format!("premise `{premise}` does not match `{expected}`"))
    }
}

impl Checker<'_> {
    fn equiv(&self, c: &Formula, d: &Formula) -> Result<(), Failure> {
        if c.alpha_eq(d) {
            return Ok(());
        }
        match formula_equiv(self.rs, c, d, self.fuel) {
            Ok(true) => Ok(()),
            Ok(false) => fail(format!("`{c}` is not equivalent to `{d}`")),
            Err(e) => Err((InvalidReason::EquivUndecidedWithinFuel, format!("`{c}` vs `{d}`: {e}"))),
        }
    }

    fn node(&self, p: &ProofNode) -> Result<(), Failure> {
        let rule = p.rule;
        if p.premises.len() != rule.arity() {
            return Err((
                InvalidReason::ArityMismatch,
                format!("{rule} takes {} premises, found {}", rule.arity(), p.premises.len()),
            ));
        }
        if p.witness.is_some() != rule.takes_witness() {
            return fail(format!("{rule} {} a witness", if rule.takes_witness() { "requires" } else { "takes no" }));
        }
        if p.eigen.is_some() != rule.takes_eigenvariable() {
            let verb = if rule.takes_eigenvariable() { "requires" } else { "takes no" };
            return fail(format!("{rule} {verb} an eigenvariable"));
        }
        let (gamma, delta) = (&p.conclusion.antecedent, &p.conclusion.succedent);
        let prem = |k: usize| &p.premises[k].conclusion;

        let Some(side) = rule.principal_side() else {
            if p.principal.is_some() {
                return fail(format!("{rule} has no principal formula"));
            }
            return match rule {
                RuleTag::Axiom => self.axiom(gamma, delta),
                _ => self.cut(gamma, delta, prem(0), prem(1)),
            };
        };
        let Some(principal) = p.principal else {
            return fail(format!("{rule} needs a principal formula"));
        };
        if principal.side != side {
            return fail(format!("{rule} acts on the {side:?} side, principal is {principal}"));
        }
        let i = principal.index;
        let on_side = if side == Side::Left { gamma } else { delta };
        let Some(c) = on_side.get(i) else {
            return fail(format!("principal {principal} is out of range"));
        };

        match rule {
            RuleTag::WeakeningLeft => same(prem(0), &replaced(gamma, i, &[]), delta),
            RuleTag::WeakeningRight => same(prem(0), gamma, &replaced(delta, i, &[])),
            RuleTag::ContractionLeft => same(prem(0), &replaced(gamma, i, &[c.clone(), c.clone()]), delta),
            RuleTag::ContractionRight => same(prem(0), gamma, &replaced(delta, i, &[c.clone(), c.clone()])),
            RuleTag::NotLeft => {
                let x = component(&prem(0).succedent, 0)?;
                same(prem(0), &replaced(gamma, i, &[]), &prepended(x, delta))?;
                self.equiv(c, &Formula::not(x.clone()))
            }
            RuleTag::NotRight => {
                let x = component(&prem(0).antecedent, 0)?;
                same(prem(0), &prepended(x, gamma), &replaced(delta, i, &[]))?;
                self.equiv(c, &Formula::not(x.clone()))
            }
            RuleTag::AndLeft | RuleTag::OrRight => {
                let list = if side == Side::Left { &prem(0).antecedent } else { &prem(0).succedent };
                let (x, y) = (component(list, i)?, component(list, i + 1)?);
                let parts = replaced(on_side, i, &[x.clone(), y.clone()]);
                if side == Side::Left {
                    same(prem(0), &parts, delta)?;
                    self.equiv(c, &Formula::and(x.clone(), y.clone()))
                } else {
                    same(prem(0), gamma, &parts)?;
                    self.equiv(c, &Formula::or(x.clone(), y.clone()))
                }
            }
            RuleTag::AndRight | RuleTag::OrLeft => {
                let pick = |k: usize| {
                    let list = if side == Side::Left { &prem(k).antecedent } else { &prem(k).succedent };
                    component(list, i)
                };
                let (x, y) = (pick(0)?, pick(1)?);
                for (k, part) in [x, y].into_iter().enumerate() {
                    let parts = replaced(on_side, i, std::slice::from_ref(part));
                    if side == Side::Left {
                        same(prem(k), &parts, delta)?;
                    } else {
                        same(prem(k), gamma, &parts)?;
                    }
                }
                let combined = if side == Side::Left {
                    Formula::or(x.clone(), y.clone())
                } else {
                    Formula::and(x.clone(), y.clone())
                };
                self.equiv(c, &combined)
            }
            RuleTag::ImpliesLeft => {
                let x = component(&prem(0).succedent, 0)?;
                let y = component(&prem(1).antecedent, i)?;
                same(prem(0), &replaced(gamma, i, &[]), &prepended(x, delta))?;
                same(prem(1), &replaced(gamma, i, std::slice::from_ref(y)), delta)?;
                self.equiv(c, &Formula::implies(x.clone(), y.clone()))
            }
            RuleTag::ImpliesRight => {
                let x = component(&prem(0).antecedent, 0)?;
                let y = component(&prem(0).succedent, i)?;
                same(prem(0), &prepended(x, gamma), &replaced(delta, i, std::slice::from_ref(y)))?;
                self.equiv(c, &Formula::implies(x.clone(), y.clone()))
            }
            RuleTag::ForallLeft | RuleTag::ExistsRight | RuleTag::ForallRight | RuleTag::ExistsLeft => {
                let (v, body) = match (rule, c) {
                    (RuleTag::ForallLeft | RuleTag::ForallRight, Formula::Forall(v, b)) => (v, b),
                    (RuleTag::ExistsLeft | RuleTag::ExistsRight, Formula::Exists(v, b)) => (v, b),
                    _ => return fail(format!("principal `{c}` has the wrong quantifier for {rule}")),
                };
                let t = match (&p.witness, &p.eigen) {
                    (Some(t), _) => t.clone(),
                    (None, Some(y)) => {
                        if p.conclusion.free_vars().contains(y) {
                            return Err((
                                InvalidReason::EigenvariableViolation,
                                format!("eigenvariable {y} is free in the conclusion"),
                            ));
                        }
                        Term::Var(y.clone())
                    }
                    (None, None) => unreachable!("witness or eigenvariable presence checked above"),
                };
                let instance = Substitution::singleton(v.clone(), t).apply_formula(body);
                let list = if side == Side::Left { &prem(0).antecedent } else { &prem(0).succedent };
                let x = component(list, i)?;
                let parts = replaced(on_side, i, std::slice::from_ref(x));
                if side == Side::Left {
                    same(prem(0), &parts, delta)?;
                } else {
                    same(prem(0), gamma, &parts)?;
                }
                self.equiv(x, &instance)
            }
            RuleTag::Axiom | RuleTag::Cut => unreachable!("handled above"),
        }
    }

    // Some antecedent formula is equivalent to some succedent formula.
    fn axiom(&self, gamma: &[Formula], delta: &[Formula]) -> Result<(), Failure> {
        let mut undecided = None;
        for a in gamma {
            for b in delta {
                match self.equiv(a, b) {
                    Ok(()) => return Ok(()),
                    Err(e @ (InvalidReason::EquivUndecidedWithinFuel, _)) => undecided = undecided.or(Some(e)),
                    Err(_) => {}
                }
            }
        }
        match undecided {
            Some(e) => Err(e),
            None => fail("no antecedent formula is equivalent to a succedent formula"),
        }
    }

    // Left premise `Γ ⊢ C, Δ`, right premise `D, Γ ⊢ Δ`, with C ≡ D.
    fn cut(&self, gamma: &[Formula], delta: &[Formula], left: &Sequent, right: &Sequent) -> Result<(), Failure> {
        let c = component(&left.succedent, 0)?;
        let d = component(&right.antecedent, 0)?;
        same(left, gamma, &prepended(c, delta))?;
        same(right, &prepended(d, gamma), delta)?;
        self.equiv(c, d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::{PropRule, DEFAULT_FUEL};
    use crate::sequent::uses_cut;
    use crate::syntax::{Atom, Var};

    fn p(name: &str) -> Formula {
        Formula::prop(name)
    }

    fn seq(l: &[Formula], r: &[Formula]) -> Sequent {
        Sequent::new(l.to_vec(), r.to_vec())
    }

    fn node(rule: RuleTag, l: &[Formula], r: &[Formula], premises: Vec<ProofNode>) -> ProofNode {
        ProofNode::new(rule, seq(l, r), premises)
    }

    fn empty() -> RewriteSystem {
        RewriteSystem::default()
    }

    #[test]
    fn plain_lk_excluded_middle() {
        // ⊢ A ∨ ¬A
        let a = p("A");
        let na = Formula::not(a.clone());
        let proof = node(
            RuleTag::OrRight,
            &[],
            &[Formula::or(a.clone(), na.clone())],
            vec![node(
                RuleTag::NotRight,
                &[],
                &[a.clone(), na.clone()],
                vec![node(RuleTag::Axiom, &[a.clone()], &[a.clone()], vec![])],
            )
            .with_principal(Side::Right, 1)],
        )
        .with_principal(Side::Right, 0);
        assert_eq!(check_proof(&proof, &empty(), DEFAULT_FUEL), CheckResult::Valid);
        assert!(!uses_cut(&proof));
    }

    #[test]
    fn plain_lk_rejects_mismatched_axiom() {
        let proof = node(RuleTag::Axiom, &[p("A")], &[p("B")], vec![]);
        let CheckResult::Invalid { path, reason, .. } = check_proof(&proof, &empty(), DEFAULT_FUEL) else { panic!() };
        assert!(path.is_empty());
        assert_eq!(reason, InvalidReason::SideConditionFailed);
    }

    #[test]
    fn arity_is_checked_first() {
        let proof = node(RuleTag::Cut, &[p("A")], &[p("A")], vec![]);
        let CheckResult::Invalid { reason, .. } = check_proof(&proof, &empty(), DEFAULT_FUEL) else { panic!() };
        assert_eq!(reason, InvalidReason::ArityMismatch);
    }

    #[test]
    fn eigenvariable_must_be_fresh() {
        // P(X) ⊢ ∀Y. P(Y) with eigenvariable X is not a proof.
        let px = Formula::atom("P", vec![Term::var("X")]);
        let all = Formula::forall(Var::new("Y"), Formula::atom("P", vec![Term::var("Y")]));
        let bad = node(
            RuleTag::ForallRight,
            &[px.clone()],
            &[all.clone()],
            vec![node(RuleTag::Axiom, &[px.clone()], &[px.clone()], vec![])],
        )
        .with_principal(Side::Right, 0)
        .with_eigen(Var::new("X"));
        let CheckResult::Invalid { reason, .. } = check_proof(&bad, &empty(), DEFAULT_FUEL) else { panic!() };
        assert_eq!(reason, InvalidReason::EigenvariableViolation);

        // ∀Y. P(Y) ⊢ ∀Y. P(Y) via a fresh Z is.
        let pz = Formula::atom("P", vec![Term::var("Z")]);
        let good = node(
            RuleTag::ForallRight,
            &[all.clone()],
            &[all.clone()],
            vec![node(
                RuleTag::ForallLeft,
                &[all.clone()],
                &[pz.clone()],
                vec![node(RuleTag::Axiom, &[pz.clone()], &[pz.clone()], vec![])],
            )
            .with_principal(Side::Left, 0)
            .with_witness(Term::var("Z"))],
        )
        .with_principal(Side::Right, 0)
        .with_eigen(Var::new("Z"));
        assert_eq!(check_proof(&good, &empty(), DEFAULT_FUEL), CheckResult::Valid);
    }

    #[test]
    fn implies_left_and_exists_left() {
        // A, A => B ⊢ B
        let (a, b) = (p("A"), p("B"));
        let imp = Formula::implies(a.clone(), b.clone());
        let proof = node(
            RuleTag::ImpliesLeft,
            &[a.clone(), imp.clone()],
            &[b.clone()],
            vec![
                node(RuleTag::Axiom, &[a.clone()], &[a.clone(), b.clone()], vec![]),
                node(RuleTag::Axiom, &[a.clone(), b.clone()], &[b.clone()], vec![]),
            ],
        )
        .with_principal(Side::Left, 1);
        assert_eq!(check_proof(&proof, &empty(), DEFAULT_FUEL), CheckResult::Valid);

        // ∃X. P(X) ⊢ ∃Y. P(Y)
        let ex = |v: &str| Formula::exists(Var::new(v), Formula::atom("P", vec![Term::var(v)]));
        let pz = Formula::atom("P", vec![Term::var("Z")]);
        let proof = node(
            RuleTag::ExistsLeft,
            &[ex("X")],
            &[ex("Y")],
            vec![node(
                RuleTag::ExistsRight,
                &[pz.clone()],
                &[ex("Y")],
                vec![node(RuleTag::Axiom, &[pz.clone()], &[pz.clone()], vec![])],
            )
            .with_principal(Side::Right, 0)
            .with_witness(Term::var("Z"))],
        )
        .with_principal(Side::Left, 0)
        .with_eigen(Var::new("Z"));
        assert_eq!(check_proof(&proof, &empty(), DEFAULT_FUEL), CheckResult::Valid);
    }

    #[test]
    fn modulo_side_condition() {
        // A ⊢ B is an axiom once A rewrites to B.
        let rs = RewriteSystem::from_prop_rules(vec![PropRule::new(Atom::prop("A"), p("B")).unwrap()]);
        let proof = node(RuleTag::Axiom, &[p("A")], &[p("B")], vec![]);
        assert!(check_proof(&proof, &rs, DEFAULT_FUEL).is_valid());
        assert!(!check_proof(&proof, &empty(), DEFAULT_FUEL).is_valid());
    }
}
