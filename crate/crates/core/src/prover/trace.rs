//! Derivation traces and their independent replay.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use super::inference::{equation, ext_narrowed, factor_clause, paramodulant, resolvent};
use super::{effective_inputs, finalize, unification_for, ProverMode, SaturationLimits};
use crate::rewrite::{prop_rule_name, RewriteSystem};
use crate::syntax::{rename_apart, Clause, Position, Substitution};

/// How a trace clause was obtained. Binary inferences act on the parents
/// after `rename_apart(first, second)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Inference {
    /// The `index`-th input clause, literals merged.
    Input {
        index: usize,
    },
    Resolution {
        left: usize,
        right: usize,
        left_lit: usize,
        right_lit: usize,
        subst: Substitution,
    },
    Factor {
        parent: usize,
        first: usize,
        second: usize,
        subst: Substitution,
    },
    Paramodulation {
        from: usize,
        into: usize,
        eq_lit: usize,
        left_to_right: bool,
        into_lit: usize,
        position: Position,
        subst: Substitution,
    },
    /// Clause `part` of the clausal form produced by narrowing literal `lit`
    /// of `parent` with proposition rule `rule`.
    ExtNarrow {
        parent: usize,
        lit: usize,
        rule: usize,
        subst: Substitution,
        part: usize,
    },
}

impl Inference {
    pub fn name(&self) -> &'static str {
        match self {
            Inference::Input { .. } => "input",
            Inference::Resolution { .. } => "resolve",
            Inference::Factor { .. } => "factor",
            Inference::Paramodulation { .. } => "paramod",
            Inference::ExtNarrow { .. } => "ext_narrow",
        }
    }

    pub fn parents(&self) -> Vec<usize> {
        match self {
            Inference::Input { .. } => Vec::new(),
            Inference::Resolution { left, right, .. } => vec![*left, *right],
            Inference::Factor { parent, .. } | Inference::ExtNarrow { parent, .. } => vec![*parent],
            Inference::Paramodulation { from, into, .. } => vec![*from, *into],
        }
    }

    pub fn subst(&self) -> Option<&Substitution> {
        match self {
            Inference::Input { .. } => None,
            Inference::Resolution { subst, .. }
            | Inference::Factor { subst, .. }
            | Inference::Paramodulation { subst, .. }
            | Inference::ExtNarrow { subst, .. } => Some(subst),
        }
    }

    /// Name of the rewrite rule used, for narrowing steps.
    pub fn rule_name(&self) -> Option<String> {
        match self {
            Inference::ExtNarrow { rule, .. } => Some(prop_rule_name(*rule)),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub id: usize,
    pub clause: Clause,
    pub inference: Inference,
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}. {} [{}", self.id, self.clause, self.inference.name())?;
        let parents = self.inference.parents();
        if !parents.is_empty() {
            let ids: Vec<String> = parents.iter().map(usize::to_string).collect();
            write!(f, " {}", ids.join(","))?;
        }
        if let Some(s) = self.inference.subst() {
            write!(f, " σ={s}")?;
        }
        if let Some(r) = self.inference.rule_name() {
            write!(f, " rw={r}")?;
        }
        f.write_str("]")
    }
}

/// Numbered clauses; every parent precedes its children.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DerivationTrace {
    pub steps: Vec<TraceStep>,
}

impl DerivationTrace {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn get(&self, id: usize) -> Option<&TraceStep> {
        self.steps.iter().find(|s| s.id == id)
    }

    /// The last clause is the empty clause.
    pub fn is_refutation(&self) -> bool {
        self.steps.last().is_some_and(|s| s.clause.is_empty())
    }

    /// Steps that are not inputs.
    pub fn inferences(&self) -> impl Iterator<Item = &TraceStep> {
        self.steps.iter().filter(|s| !matches!(s.inference, Inference::Input { .. }))
    }

    /// The sub-trace of `id` and its ancestors, ids unchanged.
    pub fn ancestry(&self, id: usize) -> DerivationTrace {
        let mut needed = vec![id];
        let mut keep = std::collections::BTreeSet::new();
        while let Some(n) = needed.pop() {
            if keep.insert(n) {
                if let Some(step) = self.get(n) {
                    needed.extend(step.inference.parents());
                }
            }
        }
        DerivationTrace { steps: self.steps.iter().filter(|s| keep.contains(&s.id)).cloned().collect() }
    }

    pub fn records(&self) -> Vec<TraceRecord> {
        self.steps.iter().map(TraceRecord::from).collect()
    }
}

impl fmt::Display for DerivationTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

/// Flat serializable view of a trace step.
#[derive(Clone, Debug, Serialize)]
pub struct TraceRecord {
    pub id: usize,
    pub clause: String,
    pub inference: &'static str,
    pub parents: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subst: Option<Vec<(String, String)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rule: Option<String>,
    /// Literal indices the inference acted on, in parent order.
    pub literals: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub position: Option<Position>,
}

impl From<&TraceStep> for TraceRecord {
    fn from(step: &TraceStep) -> Self {
        let literals = match &step.inference {
            Inference::Input { index } => vec![*index],
            Inference::Resolution { left_lit, right_lit, .. } => vec![*left_lit, *right_lit],
            Inference::Factor { first, second, .. } => vec![*first, *second],
            Inference::Paramodulation { eq_lit, into_lit, .. } => vec![*eq_lit, *into_lit],
            Inference::ExtNarrow { lit, part, .. } => vec![*lit, *part],
        };
        let position = match &step.inference {
            Inference::Paramodulation { position, .. } => Some(position.clone()),
            _ => None,
        };
        TraceRecord {
            id: step.id,
            clause: step.clause.to_string(),
            inference: step.inference.name(),
            parents: step.inference.parents(),
            subst: step.inference.subst().map(|s| s.iter().map(|(v, t)| (v.to_string(), t.to_string())).collect()),
            rule: step.inference.rule_name(),
            literals,
            position,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("step {step}: {reason}")]
pub struct TraceCheckError {
    pub step: usize,
    pub reason: String,
}

/// Re-derives every step of `trace` from its parents under the recorded
/// inference and substitution.
pub fn check_trace(
    trace: &DerivationTrace,
    initial: &[Clause],
    rs: &RewriteSystem,
    mode: ProverMode,
    limits: &SaturationLimits,
) -> Result<(), TraceCheckError> {
    let inputs = effective_inputs(initial, rs, mode);
    let unification = unification_for(rs, mode, limits);
    let mut seen: Vec<(usize, &Clause)> = Vec::new();
    for step in &trace.steps {
        let fail = |reason: String| TraceCheckError { step: step.id, reason };
        if seen.iter().any(|(id, _)| *id == step.id) {
            return Err(fail("duplicate id".into()));
        }
        let parent = |id: usize| {
            seen.iter()
                .find(|(i, _)| *i == id)
                .map(|(_, c)| *c)
                .ok_or_else(|| fail(format!("parent {id} does not precede this step")))
        };
        let derived: Clause = match &step.inference {
            Inference::Input { index } => {
                let c = inputs.get(*index).ok_or_else(|| fail(format!("no input clause {index}")))?;
                c.merged()
            }
            Inference::Resolution { left, right, left_lit, right_lit, subst } => {
                let (l, r) = rename_apart(parent(*left)?, parent(*right)?);
                let (a, b) = match (l.literals.get(*left_lit), r.literals.get(*right_lit)) {
                    (Some(a), Some(b)) => (a, b),
                    _ => return Err(fail("literal index out of range".into())),
                };
                if a.positive == b.positive {
                    return Err(fail("resolved literals have the same sign".into()));
                }
                if !unification.accepts(subst, &a.atom, &b.atom) {
                    return Err(fail("substitution does not unify the resolved literals".into()));
                }
                finalize(resolvent(&l, &r, *left_lit, *right_lit, subst), rs, mode, limits.fuel)
            }
            Inference::Factor { parent: p, first, second, subst } => {
                let c = parent(*p)?;
                let (a, b) = match (c.literals.get(*first), c.literals.get(*second)) {
                    (Some(a), Some(b)) if first != second => (a, b),
                    _ => return Err(fail("literal index out of range".into())),
                };
                if a.positive != b.positive || !unification.accepts(subst, &a.atom, &b.atom) {
                    return Err(fail("factored literals do not unify".into()));
                }
                finalize(factor_clause(c, *second, subst), rs, mode, limits.fuel)
            }
            Inference::Paramodulation { from, into, eq_lit, left_to_right, into_lit, position, subst } => {
                if mode != ProverMode::Paramodulation {
                    return Err(fail(format!("paramodulation is not a {} inference", mode.name())));
                }
                let (f, i) = rename_apart(parent(*from)?, parent(*into)?);
                let Some((lhs, rhs)) = f.literals.get(*eq_lit).and_then(equation) else {
                    return Err(fail("not a positive equation".into()));
                };
                let (source, target) = if *left_to_right { (lhs, rhs) } else { (rhs, lhs) };
                let sub = i
                    .literals
                    .get(*into_lit)
                    .and_then(|l| l.atom.subterm(position))
                    .ok_or_else(|| fail("position out of range".into()))?;
                if sub.is_var() || subst.apply(sub) != subst.apply(source) {
                    return Err(fail("substitution does not unify the rewritten subterm".into()));
                }
                paramodulant(&f, &i, *eq_lit, *into_lit, position, target, subst)
            }
            Inference::ExtNarrow { parent: p, lit, rule, subst, part } => {
                if mode != ProverMode::ResolutionModulo {
                    return Err(fail(format!("narrowing with proposition rules is not a {} inference", mode.name())));
                }
                let c = parent(*p)?;
                let (Some(l), Some(r)) = (c.literals.get(*lit), rs.prop_rules.get(*rule)) else {
                    return Err(fail("literal or rule index out of range".into()));
                };
                let r = r.renamed_avoiding(&c.vars());
                if !unification.accepts(subst, &l.atom, r.lhs()) {
                    return Err(fail("substitution does not unify the literal with the rule".into()));
                }
                let clauses = ext_narrowed(rs, c, *lit, *rule, subst);
                let c = clauses.get(*part).ok_or_else(|| fail("no such clause in the narrowing".into()))?;
                finalize(c.clone(), rs, mode, limits.fuel)
            }
        };
        if derived != step.clause {
            return Err(fail(format!("re-derived {} instead of {}", derived, step.clause)));
        }
        seen.push((step.id, &step.clause));
    }
    Ok(())
}
