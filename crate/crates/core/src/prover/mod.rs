//! Given-clause saturation in four modes: plain resolution,
//! paramodulation, equational resolution modulo term rules, and resolution
//! modulo term and proposition rules.

use std::fmt;
use std::str::FromStr;

use crate::rewrite::{normalize, RewriteSystem, DEFAULT_FUEL};
use crate::syntax::{rename_apart, Atom, Clause, Literal, Term, EQUALITY};
use crate::unify::DEFAULT_DEPTH;

mod axioms;
mod inference;
mod subsume;
mod trace;

pub use axioms::rules_to_axioms;
pub use inference::{
    ext_narrow, factor, narrow_clause_term, paramodulate, resolve, ExtNarrowing, Factor, Paramodulant, Resolvent,
    Unification,
};
pub use subsume::subsumes;
pub use trace::{check_trace, DerivationTrace, Inference, TraceCheckError, TraceRecord, TraceStep};

use inference::{ext_narrow_tracked, factor_tracked, resolve_tracked};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProverMode {
    /// Syntactic resolution and factoring; rewrite rules are ignored.
    Resolution,
    /// Resolution plus paramodulation, with the term rules as equations.
    Paramodulation,
    /// Resolution and factoring with unification modulo the term rules.
    EquationalResolution,
    /// Equational resolution plus narrowing with proposition rules.
    ResolutionModulo,
}

impl ProverMode {
    pub const ALL: [ProverMode; 4] = [
        ProverMode::Resolution,
        ProverMode::Paramodulation,
        ProverMode::EquationalResolution,
        ProverMode::ResolutionModulo,
    ];

    /// Short name used on the command line.
    pub fn name(self) -> &'static str {
        match self {
            ProverMode::Resolution => "resolution",
            ProverMode::Paramodulation => "paramod",
            ProverMode::EquationalResolution => "eqres",
            ProverMode::ResolutionModulo => "modulo",
        }
    }

    fn is_equational(self) -> bool {
        matches!(self, ProverMode::EquationalResolution | ProverMode::ResolutionModulo)
    }
}

impl fmt::Display for ProverMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProverMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ProverMode::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown mode `{s}` (expected resolution, paramod, eqres or modulo)"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SaturationLimits {
    /// Bound on the number of clauses recorded in the trace.
    pub max_clauses: usize,
    /// Bound on the number of given clauses processed.
    pub max_iterations: usize,
    /// Narrowing depth for equational unification.
    pub depth: usize,
    /// Rewrite steps per normalization.
    pub fuel: usize,
}

impl Default for SaturationLimits {
    fn default() -> Self {
        SaturationLimits { max_clauses: 5_000, max_iterations: 5_000, depth: DEFAULT_DEPTH, fuel: DEFAULT_FUEL }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SaturationOptions {
    pub subsumption: bool,
    pub tautology_deletion: bool,
}

impl Default for SaturationOptions {
    fn default() -> Self {
        SaturationOptions { subsumption: true, tautology_deletion: true }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitKind {
    Clauses,
    Iterations,
    /// Equational unification was cut off, so closure is not established.
    NarrowingDepth,
}

impl fmt::Display for LimitKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LimitKind::Clauses => "clause limit",
            LimitKind::Iterations => "iteration limit",
            LimitKind::NarrowingDepth => "narrowing depth",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// The empty clause, with the derivation of it and nothing else.
    Refuted(DerivationTrace),
    /// The clauses kept when no inference produced anything new.
    Saturated(Vec<Clause>),
    LimitExceeded(LimitKind),
}

/// Outcome together with the full trace of the run.
#[derive(Clone, Debug)]
pub struct Saturation {
    pub outcome: Outcome,
    pub trace: DerivationTrace,
    pub iterations: usize,
}

/// Input clauses the mode actually starts from. Paramodulation adds each
/// term rule as an equation and reflexivity.
pub fn effective_inputs(clauses: &[Clause], rs: &RewriteSystem, mode: ProverMode) -> Vec<Clause> {
    let mut out = clauses.to_vec();
    if mode == ProverMode::Paramodulation && !rs.term_rules.is_empty() {
        for r in &rs.term_rules {
            out.push(Clause::new(vec![Literal::pos(Atom::new(EQUALITY, vec![r.lhs().clone(), r.rhs().clone()]))]));
        }
        let x = Term::var("X");
        out.push(Clause::new(vec![Literal::pos(Atom::new(EQUALITY, vec![x.clone(), x]))]));
    }
    out
}

pub(crate) fn unification_for<'a>(
    rs: &'a RewriteSystem,
    mode: ProverMode,
    limits: &SaturationLimits,
) -> Unification<'a> {
    if mode.is_equational() {
        Unification::Modulo { rs, depth: limits.depth, fuel: limits.fuel }
    } else {
        Unification::Syntactic
    }
}

/// Term normal forms in the equational modes, then literal merging.
/// A term without a normal form within `fuel` is left as it is.
pub(crate) fn finalize(c: Clause, rs: &RewriteSystem, mode: ProverMode, fuel: usize) -> Clause {
    if mode.is_equational() && !rs.term_rules.is_empty() {
        c.map_terms(&mut |t| normalize(rs, t, fuel).unwrap_or_else(|_| t.clone())).merged()
    } else {
        c.merged()
    }
}

pub fn saturate(clauses: &[Clause], rs: &RewriteSystem, mode: ProverMode, limits: &SaturationLimits) -> Outcome {
    saturate_with(clauses, rs, mode, limits, &SaturationOptions::default()).outcome
}

struct State<'a> {
    rs: &'a RewriteSystem,
    mode: ProverMode,
    limits: &'a SaturationLimits,
    options: &'a SaturationOptions,
    trace: Vec<TraceStep>,
    /// Ids of clauses retained for subsumption and duplicate checks, with
    /// their feature masks.
    kept: Vec<(usize, u64)>,
    passive: Vec<usize>,
    active: Vec<usize>,
}

enum Admit {
    Added,
    Empty(usize),
    Dropped,
}

impl State<'_> {
    fn clause(&self, id: usize) -> &Clause {
        &self.trace[id].clause
    }

    fn redundant(&self, c: &Clause) -> bool {
        if self.options.tautology_deletion && c.is_tautology() {
            return true;
        }
        let mask = subsume::features(c);
        self.kept.iter().any(|&(k, km)| {
            let d = self.clause(k);
            if self.options.subsumption {
                km & !mask == 0 && subsumes(d, c)
            } else {
                km == mask && crate::clausify::is_variant(d, c)
            }
        })
    }

    fn admit(&mut self, clause: Clause, inference: Inference, finalized: bool) -> Admit {
        let clause = if finalized { clause } else { finalize(clause, self.rs, self.mode, self.limits.fuel) };
        if !clause.is_empty() && self.redundant(&clause) {
            return Admit::Dropped;
        }
        let id = self.trace.len();
        let empty = clause.is_empty();
        self.trace.push(TraceStep { id, clause, inference });
        if empty {
            return Admit::Empty(id);
        }
        self.kept.push((id, subsume::features(&self.trace[id].clause)));
        self.passive.push(id);
        Admit::Added
    }

    fn select(&mut self, iteration: usize) -> Option<usize> {
        let pick = if iteration % 2 == 0 {
            self.passive.iter().enumerate().min_by_key(|(_, &id)| id)
        } else {
            self.passive.iter().enumerate().min_by_key(|(_, &id)| (self.clause(id).weight(), id))
        };
        let (slot, _) = pick?;
        Some(self.passive.remove(slot))
    }

    fn candidates(&self, given: usize, truncated: &mut bool) -> Vec<(Clause, Inference)> {
        let unification = unification_for(self.rs, self.mode, self.limits);
        let g = self.clause(given);
        let mut out = Vec::new();
        for &a in &self.active {
            let (left, right) = rename_apart(g, self.clause(a));
            for r in resolve_tracked(&left, &right, &unification, truncated) {
                out.push((
                    r.clause,
                    Inference::Resolution {
                        left: given,
                        right: a,
                        left_lit: r.left_lit,
                        right_lit: r.right_lit,
                        subst: r.subst,
                    },
                ));
            }
            if self.mode == ProverMode::Paramodulation {
                let pairs = if a == given { vec![(given, a)] } else { vec![(given, a), (a, given)] };
                for (from, into) in pairs {
                    let (f, i) = rename_apart(self.clause(from), self.clause(into));
                    for p in paramodulate(&f, &i) {
                        out.push((
                            p.clause,
                            Inference::Paramodulation {
                                from,
                                into,
                                eq_lit: p.eq_lit,
                                left_to_right: p.left_to_right,
                                into_lit: p.into_lit,
                                position: p.position,
                                subst: p.subst,
                            },
                        ));
                    }
                }
            }
        }
        for f in factor_tracked(g, &unification, truncated) {
            out.push((f.clause, Inference::Factor { parent: given, first: f.first, second: f.second, subst: f.subst }));
        }
        if self.mode == ProverMode::ResolutionModulo {
            for n in ext_narrow_tracked(self.rs, g, &unification, truncated) {
                for (part, c) in n.clauses.into_iter().enumerate() {
                    out.push((
                        c,
                        Inference::ExtNarrow { parent: given, lit: n.lit, rule: n.rule, subst: n.subst.clone(), part },
                    ));
                }
            }
        }
        out
    }
}

/// Fair given-clause saturation: given clauses are picked alternately by
/// age and by weight (symbol count, older first on ties). Inferences are
/// drawn between the given clause and every active clause, itself included.
pub fn saturate_with(
    clauses: &[Clause],
    rs: &RewriteSystem,
    mode: ProverMode,
    limits: &SaturationLimits,
    options: &SaturationOptions,
) -> Saturation {
    let mut st = State {
        rs,
        mode,
        limits,
        options,
        trace: Vec::new(),
        kept: Vec::new(),
        passive: Vec::new(),
        active: Vec::new(),
    };
    let done = |st: State, outcome: Outcome, iterations: usize| Saturation {
        outcome,
        trace: DerivationTrace { steps: st.trace },
        iterations,
    };
    let refuted = |st: State, id: usize, iterations: usize| {
        let full = DerivationTrace { steps: st.trace };
        Saturation { outcome: Outcome::Refuted(full.ancestry(id)), trace: full, iterations }
    };

    for (index, c) in effective_inputs(clauses, rs, mode).into_iter().enumerate() {
        if let Admit::Empty(id) = st.admit(c.merged(), Inference::Input { index }, true) {
            return refuted(st, id, 0);
        }
    }

    let mut truncated = false;
    let mut iterations = 0;
    loop {
        if iterations >= limits.max_iterations && !st.passive.is_empty() {
            return done(st, Outcome::LimitExceeded(LimitKind::Iterations), iterations);
        }
        let Some(given) = st.select(iterations) else { break };
        iterations += 1;
        st.active.push(given);
        for (clause, inference) in st.candidates(given, &mut truncated) {
            if st.trace.len() >= limits.max_clauses {
                return done(st, Outcome::LimitExceeded(LimitKind::Clauses), iterations);
            }
            if let Admit::Empty(id) = st.admit(clause, inference, false) {
                return refuted(st, id, iterations);
            }
        }
    }
    if truncated {
        return done(st, Outcome::LimitExceeded(LimitKind::NarrowingDepth), iterations);
    }
    let final_set = st.active.iter().map(|&id| st.clause(id).clone()).collect();
    done(st, Outcome::Saturated(final_set), iterations)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::PropRule;
    use crate::syntax::Formula;

    fn lit(positive: bool, name: &str) -> Literal {
        Literal { positive, atom: Atom::prop(name) }
    }

    fn clause(lits: &[(bool, &str)]) -> Clause {
        lits.iter().map(|(s, n)| lit(*s, n)).collect()
    }

    fn crabbe() -> RewriteSystem {
        RewriteSystem::from_prop_rules(vec![PropRule::new(
            Atom::prop("A"),
            Formula::and(Formula::prop("B"), Formula::not(Formula::prop("A"))),
        )
        .unwrap()])
    }

    fn crabbe_clauses() -> Vec<Clause> {
        vec![
            clause(&[(true, "B")]),
            clause(&[(false, "A"), (true, "B")]),
            clause(&[(false, "A")]),
            clause(&[(true, "A"), (false, "B")]),
        ]
    }

    #[test]
    fn crabbe_contrast() {
        let limits = SaturationLimits::default();
        let Outcome::Refuted(trace) =
            saturate(&crabbe_clauses(), &RewriteSystem::default(), ProverMode::Resolution, &limits)
        else {
            panic!("resolution should refute")
        };
        let derived: Vec<String> = trace.inferences().map(|s| s.clause.to_string()).collect();
        assert_eq!(derived, vec!["A", "[]"]);
        check_trace(&trace, &crabbe_clauses(), &RewriteSystem::default(), ProverMode::Resolution, &limits).unwrap();

        let outcome = saturate(&[clause(&[(true, "B")])], &crabbe(), ProverMode::ResolutionModulo, &limits);
        assert_eq!(outcome, Outcome::Saturated(vec![clause(&[(true, "B")])]));
    }

    #[test]
    fn repaired_system_refutes() {
        let rs = RewriteSystem::from_prop_rules(vec![
            PropRule::new(Atom::prop("A"), Formula::Bottom).unwrap(),
            PropRule::new(Atom::prop("B"), Formula::prop("A")).unwrap(),
        ]);
        let limits = SaturationLimits::default();
        let input = [clause(&[(true, "B")])];
        let Outcome::Refuted(trace) = saturate(&input, &rs, ProverMode::ResolutionModulo, &limits) else {
            panic!("should refute")
        };
        check_trace(&trace, &input, &rs, ProverMode::ResolutionModulo, &limits).unwrap();
    }

    #[test]
    fn forged_parent_is_rejected() {
        let limits = SaturationLimits::default();
        let rs = RewriteSystem::default();
        let Outcome::Refuted(mut trace) = saturate(&crabbe_clauses(), &rs, ProverMode::Resolution, &limits) else {
            panic!()
        };
        let last = trace.steps.last_mut().unwrap();
        if let Inference::Resolution { left, .. } = &mut last.inference {
            *left = 0;
        }
        let err = check_trace(&trace, &crabbe_clauses(), &rs, ProverMode::Resolution, &limits).unwrap_err();
        assert_eq!(err.step, trace.steps.last().unwrap().id);
    }

    #[test]
    fn trace_lines() {
        let limits = SaturationLimits::default();
        let Outcome::Refuted(trace) =
            saturate(&crabbe_clauses(), &RewriteSystem::default(), ProverMode::Resolution, &limits)
        else {
            panic!()
        };
        let text = trace.to_string();
        assert!(text.contains("0. B [input]"), "{text}");
        assert!(text.lines().last().unwrap().contains("[] [resolve"), "{text}");
    }

    #[test]
    fn limits_are_reported() {
        // P(X) => P(s(X)) with P(0) never saturates.
        let p = |t: Term| Atom::new("P", vec![t]);
        let clauses = vec![
            Clause::new(vec![Literal::pos(p(Term::numeral(0)))]),
            Clause::new(vec![Literal::neg(p(Term::var("X"))), Literal::pos(p(Term::app("s", vec![Term::var("X")])))]),
            Clause::new(vec![Literal::neg(Atom::prop("Q"))]),
        ];
        let limits = SaturationLimits { max_clauses: 50, ..SaturationLimits::default() };
        assert_eq!(
            saturate(&clauses, &RewriteSystem::default(), ProverMode::Resolution, &limits),
            Outcome::LimitExceeded(LimitKind::Clauses)
        );
        let limits = SaturationLimits { max_iterations: 10, ..SaturationLimits::default() };
        assert_eq!(
            saturate(&clauses, &RewriteSystem::default(), ProverMode::Resolution, &limits),
            Outcome::LimitExceeded(LimitKind::Iterations)
        );
    }

    #[test]
    fn mode_names_round_trip() {
        for m in ProverMode::ALL {
            assert_eq!(m.name().parse::<ProverMode>(), Ok(m));
        }
        assert!("bogus".parse::<ProverMode>().is_err());
    }
}
