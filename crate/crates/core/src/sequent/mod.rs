//! Two-sided sequent calculus modulo a rewrite system: proof objects, a
//! rule-by-rule checker and cut detection.
//!
//! Sequents are formula lists. A principal formula is replaced in place by
//! its components; a component that moves to the other side of the sequent
//! is put at the front of that side.

use std::fmt;
use std::str::FromStr;

use crate::syntax::{Sequent, Term, Var};

mod check;

pub use check::{check_proof, CheckResult, InvalidReason};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RuleTag {
    Axiom,
    Cut,
    ContractionLeft,
    ContractionRight,
    WeakeningLeft,
    WeakeningRight,
    NotLeft,
    NotRight,
    AndLeft,
    AndRight,
    OrLeft,
    OrRight,
    ImpliesLeft,
    ImpliesRight,
    ForallLeft,
    ForallRight,
    ExistsLeft,
    ExistsRight,
}

impl RuleTag {
    pub const ALL: [RuleTag; 18] = [
        RuleTag::Axiom,
        RuleTag::Cut,
        RuleTag::ContractionLeft,
        RuleTag::ContractionRight,
        RuleTag::WeakeningLeft,
        RuleTag::WeakeningRight,
        RuleTag::NotLeft,
        RuleTag::NotRight,
        RuleTag::AndLeft,
        RuleTag::AndRight,
        RuleTag::OrLeft,
        RuleTag::OrRight,
        RuleTag::ImpliesLeft,
        RuleTag::ImpliesRight,
        RuleTag::ForallLeft,
        RuleTag::ForallRight,
        RuleTag::ExistsLeft,
        RuleTag::ExistsRight,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleTag::Axiom => "Axiom",
            RuleTag::Cut => "Cut",
            RuleTag::ContractionLeft => "ContractionLeft",
            RuleTag::ContractionRight => "ContractionRight",
            RuleTag::WeakeningLeft => "WeakeningLeft",
            RuleTag::WeakeningRight => "WeakeningRight",
            RuleTag::NotLeft => "NotLeft",
            RuleTag::NotRight => "NotRight",
            RuleTag::AndLeft => "AndLeft",
            RuleTag::AndRight => "AndRight",
            RuleTag::OrLeft => "OrLeft",
            RuleTag::OrRight => "OrRight",
            RuleTag::ImpliesLeft => "ImpliesLeft",
            RuleTag::ImpliesRight => "ImpliesRight",
            RuleTag::ForallLeft => "ForallLeft",
            RuleTag::ForallRight => "ForallRight",
            RuleTag::ExistsLeft => "ExistsLeft",
            RuleTag::ExistsRight => "ExistsRight",
        }
    }

    /// Number of premises.
    pub fn arity(self) -> usize {
        match self {
            RuleTag::Axiom => 0,
            RuleTag::Cut | RuleTag::AndRight | RuleTag::OrLeft | RuleTag::ImpliesLeft => 2,
            _ => 1,
        }
    }

    /// Side of the principal formula; `None` for Axiom and Cut.
    pub fn principal_side(self) -> Option<Side> {
        match self {
            RuleTag::Axiom | RuleTag::Cut => None,
            RuleTag::ContractionLeft
            | RuleTag::WeakeningLeft
            | RuleTag::NotLeft
            | RuleTag::AndLeft
            | RuleTag::OrLeft
            | RuleTag::ImpliesLeft
            | RuleTag::ForallLeft
            | RuleTag::ExistsLeft => Some(Side::Left),
            _ => Some(Side::Right),
        }
    }

    pub fn takes_witness(self) -> bool {
        matches!(self, RuleTag::ForallLeft | RuleTag::ExistsRight)
    }

    pub fn takes_eigenvariable(self) -> bool {
        matches!(self, RuleTag::ForallRight | RuleTag::ExistsLeft)
    }
}

impl fmt::Display for RuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RuleTag {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        RuleTag::ALL.into_iter().find(|t| t.name() == s).ok_or_else(|| format!("unknown rule `{s}`"))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// Index of the principal formula in the antecedent or succedent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Principal {
    pub side: Side,
    pub index: usize,
}

impl fmt::Display for Principal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.side == Side::Left { 'L' } else { 'R' };
        write!(f, "{s}{}", self.index)
    }
}

impl FromStr for Principal {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let side = match s.chars().next() {
            Some('L') => Side::Left,
            Some('R') => Side::Right,
            _ => return Err(format!("principal `{s}` must be L<i> or R<i>")),
        };
        let index = s[1..].parse().map_err(|_| format!("principal `{s}` must be L<i> or R<i>"))?;
        Ok(Principal { side, index })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofNode {
    pub rule: RuleTag,
    pub conclusion: Sequent,
    pub premises: Vec<ProofNode>,
    /// Instantiating term for ForallLeft and ExistsRight.
    pub witness: Option<Term>,
    /// Fresh variable for ForallRight and ExistsLeft.
    pub eigen: Option<Var>,
    pub principal: Option<Principal>,
}

/// Premise indices from the root to a node.
pub type NodePath = Vec<usize>;

impl ProofNode {
    pub fn new(rule: RuleTag, conclusion: Sequent, premises: Vec<ProofNode>) -> Self {
        ProofNode { rule, conclusion, premises, witness: None, eigen: None, principal: None }
    }

    pub fn with_principal(mut self, side: Side, index: usize) -> Self {
        self.principal = Some(Principal { side, index });
        self
    }

    pub fn with_witness(mut self, t: Term) -> Self {
        self.witness = Some(t);
        self
    }

    pub fn with_eigen(mut self, v: Var) -> Self {
        self.eigen = Some(v);
        self
    }

    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(ProofNode::size).sum::<usize>()
    }

    pub fn get(&self, path: &[usize]) -> Option<&ProofNode> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.premises.get(i)?.get(rest),
        }
    }

    pub fn get_mut(&mut self, path: &[usize]) -> Option<&mut ProofNode> {
        match path.split_first() {
            None => Some(self),
            Some((&i, rest)) => self.premises.get_mut(i)?.get_mut(rest),
        }
    }

    /// Paths of all nodes, preorder.
    pub fn paths(&self) -> Vec<NodePath> {
        let mut out = vec![Vec::new()];
        for (i, p) in self.premises.iter().enumerate() {
            out.extend(p.paths().into_iter().map(|mut q| {
                q.insert(0, i);
                q
            }));
        }
        out
    }
}

pub fn uses_cut(p: &ProofNode) -> bool {
    p.rule == RuleTag::Cut || p.premises.iter().any(uses_cut)
}
