//! Critical pairs of term rules and local confluence.

use super::{normalize_traced, Reduction, RewriteSystem};
use crate::syntax::{Position, Term};
use crate::unify::mgu;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Joinability {
    Joinable {
        common: Term,
        left: Reduction,
        right: Reduction,
    },
    NotJoinable {
        left_nf: Term,
        right_nf: Term,
    },
    /// A side ran out of fuel.
    Unknown,
}

/// Overlap of `inner_rule` into `outer_rule` at `position` of the outer lhs.
/// `left` is the reduct by the outer rule, `right` by the inner one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriticalPair {
    pub outer_rule: usize,
    pub inner_rule: usize,
    pub position: Position,
    pub peak: Term,
    pub left: Term,
    pub right: Term,
    /// Root overlap of a rule with itself.
    pub trivial: bool,
    pub joinability: Joinability,
}

impl CriticalPair {
    pub fn is_joinable(&self) -> bool {
        matches!(self.joinability, Joinability::Joinable { .. })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LocalConfluence {
    Confluent,
    NotConfluent,
    Unknown,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CriticalPairReport {
    pub pairs: Vec<CriticalPair>,
}

impl CriticalPairReport {
    pub fn verdict(&self) -> LocalConfluence {
        if self.pairs.iter().any(|p| matches!(p.joinability, Joinability::NotJoinable { .. })) {
            LocalConfluence::NotConfluent
        } else if self.pairs.iter().any(|p| p.joinability == Joinability::Unknown) {
            LocalConfluence::Unknown
        } else {
            LocalConfluence::Confluent
        }
    }

    pub fn nontrivial(&self) -> impl Iterator<Item = &CriticalPair> {
        self.pairs.iter().filter(|p| !p.trivial)
    }
}

fn join(rs: &RewriteSystem, left: &Term, right: &Term, fuel: usize) -> Joinability {
    match (normalize_traced(rs, left, fuel), normalize_traced(rs, right, fuel)) {
        (Ok(l), Ok(r)) if l.result() == r.result() => {
            Joinability::Joinable { common: l.result().clone(), left: l, right: r }
        }
        (Ok(l), Ok(r)) => Joinability::NotJoinable { left_nf: l.result().clone(), right_nf: r.result().clone() },
        _ => Joinability::Unknown,
    }
}

/// All critical pairs between the term rules of `rs`, each with its
/// joinability decided within `fuel` steps per side. Proposition rules are
/// ignored.
pub fn critical_pairs(rs: &RewriteSystem, fuel: usize) -> CriticalPairReport {
    let rules = &rs.term_rules;
    let mut pairs = Vec::new();
    for (i, outer) in rules.iter().enumerate() {
        for (j, inner) in rules.iter().enumerate() {
            let inner = inner.renamed_avoiding(&outer.vars());
            for position in outer.lhs().nonvar_positions() {
                let root = position.is_empty();
                if root && j < i {
                    continue;
                }
                if root && i == j {
                    pairs.push(CriticalPair {
                        outer_rule: i,
                        inner_rule: j,
                        position,
                        peak: outer.lhs().clone(),
                        left: outer.rhs().clone(),
                        right: outer.rhs().clone(),
                        trivial: true,
                        joinability: join(rs, outer.rhs(), outer.rhs(), fuel),
                    });
                    continue;
                }
                let sub = outer.lhs().subterm(&position).expect("position of the lhs");
                let Some(s) = mgu(sub, inner.lhs()) else { continue };
                let peak = s.apply(outer.lhs());
                let left = s.apply(outer.rhs());
                let right = s.apply(&outer.lhs().replace_at(&position, inner.rhs().clone()));
                let joinability = join(rs, &left, &right, fuel);
                pairs.push(CriticalPair {
                    outer_rule: i,
                    inner_rule: j,
                    position,
                    peak,
                    left,
                    right,
                    trivial: false,
                    joinability,
                });
            }
        }
    }
    CriticalPairReport { pairs }
}

pub fn is_locally_confluent(rs: &RewriteSystem, fuel: usize) -> LocalConfluence {
    critical_pairs(rs, fuel).verdict()
}
