//! Single inference steps. Binary rules expect their premises renamed apart.

use crate::clausify::cnf;
use crate::rewrite::{equivalent_atoms, RewriteSystem};
use crate::syntax::{Atom, Clause, Formula, Literal, Position, Substitution, EQUALITY};
use crate::unify::{e_unify_atoms, mgu, unify_atoms, EUnifyItem};

/// How two atoms are unified: syntactically, or modulo the term rules of a
/// rewrite system by bounded narrowing.
#[derive(Clone, Copy, Debug)]
pub enum Unification<'a> {
    Syntactic,
    Modulo { rs: &'a RewriteSystem, depth: usize, fuel: usize },
}

impl Unification<'_> {
    /// Unifiers of two atoms; sets `truncated` when narrowing hit its bound.
    pub fn unifiers(&self, a: &Atom, b: &Atom, truncated: &mut bool) -> Vec<Substitution> {
        match *self {
            Unification::Modulo { rs, depth, fuel } if !rs.term_rules.is_empty() => {
                let mut out = Vec::new();
                for item in e_unify_atoms(rs, a, b, depth, fuel) {
                    match item {
                        EUnifyItem::Unifier(s) => out.push(s),
                        EUnifyItem::DepthExhausted => *truncated = true,
                    }
                }
                out
            }
            _ => unify_atoms(a, b).into_iter().collect(),
        }
    }

    /// `sigma` makes the atoms equal, or equivalent in the modulo case.
    pub fn accepts(&self, sigma: &Substitution, a: &Atom, b: &Atom) -> bool {
        let (a, b) = (sigma.apply_atom(a), sigma.apply_atom(b));
        match *self {
            Unification::Syntactic => a == b,
            Unification::Modulo { rs, fuel, .. } => equivalent_atoms(rs, &a, &b, fuel),
        }
    }
}

/// Binary resolvent of `left` and `right` on the given literals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolvent {
    pub clause: Clause,
    pub left_lit: usize,
    pub right_lit: usize,
    pub subst: Substitution,
}

pub(crate) fn resolvent(left: &Clause, right: &Clause, i: usize, j: usize, s: &Substitution) -> Clause {
    left.without(i).iter().chain(right.without(j).iter()).map(|l| s.apply_literal(l)).collect::<Clause>().merged()
}

/// Every resolvent on a literal of `left` and a complementary literal of
/// `right`. Remaining literals of `left` come first.
pub fn resolve(left: &Clause, right: &Clause, unification: &Unification) -> Vec<Resolvent> {
    resolve_tracked(left, right, unification, &mut false)
}

pub(crate) fn resolve_tracked(
    left: &Clause,
    right: &Clause,
    unification: &Unification,
    truncated: &mut bool,
) -> Vec<Resolvent> {
    let mut out = Vec::new();
    for (i, l) in left.literals.iter().enumerate() {
        for (j, r) in right.literals.iter().enumerate() {
            if l.positive == r.positive || l.atom.pred != r.atom.pred || l.atom.args.len() != r.atom.args.len() {
                continue;
            }
            for subst in unification.unifiers(&l.atom, &r.atom, truncated) {
                let clause = resolvent(left, right, i, j, &subst);
                out.push(Resolvent { clause, left_lit: i, right_lit: j, subst });
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub clause: Clause,
    /// The literal kept.
    pub first: usize,
    /// The literal merged into `first` and dropped.
    pub second: usize,
    pub subst: Substitution,
}

pub(crate) fn factor_clause(c: &Clause, second: usize, s: &Substitution) -> Clause {
    c.without(second).iter().map(|l| s.apply_literal(l)).collect::<Clause>().merged()
}

/// Factors obtained by unifying two literals of the same polarity.
pub fn factor(c: &Clause, unification: &Unification) -> Vec<Factor> {
    factor_tracked(c, unification, &mut false)
}

pub(crate) fn factor_tracked(c: &Clause, unification: &Unification, truncated: &mut bool) -> Vec<Factor> {
    let mut out = Vec::new();
    for (i, l) in c.literals.iter().enumerate() {
        for (j, m) in c.literals.iter().enumerate().skip(i + 1) {
            if l.positive != m.positive || l.atom.pred != m.atom.pred {
                continue;
            }
            for subst in unification.unifiers(&l.atom, &m.atom, truncated) {
                out.push(Factor { clause: factor_clause(c, j, &subst), first: i, second: j, subst });
            }
        }
    }
    out
}

/// Replacement of an instance of one side of an equation in `into`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Paramodulant {
    pub clause: Clause,
    pub eq_lit: usize,
    /// The equation was used as `lhs -> rhs` rather than `rhs -> lhs`.
    pub left_to_right: bool,
    pub into_lit: usize,
    /// Position inside the atom of `into_lit`, first index picks the argument.
    pub position: Position,
    pub subst: Substitution,
}

/// Sides of a positive equality literal.
pub(crate) fn equation(l: &Literal) -> Option<(&crate::syntax::Term, &crate::syntax::Term)> {
    match l.atom.args.as_slice() {
        [s, t] if l.positive && l.atom.pred.as_ref() == EQUALITY => Some((s, t)),
        _ => None,
    }
}

pub(crate) fn paramodulant(
    from: &Clause,
    into: &Clause,
    eq_lit: usize,
    into_lit: usize,
    position: &[usize],
    replacement: &crate::syntax::Term,
    s: &Substitution,
) -> Clause {
    let mut lits: Vec<Literal> = into.literals.clone();
    lits[into_lit] = Literal {
        positive: lits[into_lit].positive,
        atom: lits[into_lit].atom.replace_at(position, replacement.clone()),
    };
    lits.extend(from.without(eq_lit));
    lits.iter().map(|l| s.apply_literal(l)).collect::<Clause>().merged()
}

/// Paramodulants from the positive equations of `from` into the
/// non-variable subterms of `into`, using each equation both ways.
pub fn paramodulate(from: &Clause, into: &Clause) -> Vec<Paramodulant> {
    let mut out = Vec::new();
    for (eq_lit, l) in from.literals.iter().enumerate() {
        let Some((lhs, rhs)) = equation(l) else { continue };
        for (left_to_right, source, target) in [(true, lhs, rhs), (false, rhs, lhs)] {
            for (into_lit, m) in into.literals.iter().enumerate() {
                for position in m.atom.nonvar_positions() {
                    let sub = m.atom.subterm(&position).expect("position of the atom");
                    let Some(subst) = mgu(sub, source) else { continue };
                    let clause = paramodulant(from, into, eq_lit, into_lit, &position, target, &subst);
                    out.push(Paramodulant { clause, eq_lit, left_to_right, into_lit, position, subst });
                }
            }
        }
    }
    out
}

/// One-step narrowings of a clause with the term rules: a non-variable
/// subterm is unified with a renamed rule lhs and replaced by its rhs.
pub fn narrow_clause_term(rs: &RewriteSystem, c: &Clause) -> Vec<Clause> {
    let mut out = Vec::new();
    let vars = c.vars();
    for rule in &rs.term_rules {
        let rule = rule.renamed_avoiding(&vars);
        for (k, l) in c.literals.iter().enumerate() {
            for position in l.atom.nonvar_positions() {
                let sub = l.atom.subterm(&position).expect("position of the atom");
                let Some(s) = mgu(sub, rule.lhs()) else { continue };
                let mut lits = c.literals.clone();
                lits[k] = Literal { positive: l.positive, atom: l.atom.replace_at(&position, rule.rhs().clone()) };
                let narrowed = s.apply_clause(&Clause::new(lits));
                if !out.contains(&narrowed) {
                    out.push(narrowed);
                }
            }
        }
    }
    out
}

/// Narrowing of one literal by a proposition rule, with the resulting
/// formula put back into clausal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtNarrowing {
    pub lit: usize,
    pub rule: usize,
    pub subst: Substitution,
    pub clauses: Vec<Clause>,
}

pub(crate) fn ext_narrowed(rs: &RewriteSystem, c: &Clause, lit: usize, rule: usize, s: &Substitution) -> Vec<Clause> {
    let r = rs.prop_rules[rule].renamed_avoiding(&c.vars());
    let parts = c.literals.iter().enumerate().map(|(k, l)| {
        if k == lit {
            let rhs = s.apply_formula(r.rhs());
            if l.positive {
                rhs
            } else {
                Formula::not(rhs)
            }
        } else {
            s.apply_literal(l).to_formula()
        }
    });
    cnf(&Formula::disjunction(parts))
}

/// Every narrowing of a literal of `c` by a proposition rule. A negative
/// literal is replaced by the negated right-hand side.
pub fn ext_narrow(rs: &RewriteSystem, c: &Clause, unification: &Unification) -> Vec<ExtNarrowing> {
    ext_narrow_tracked(rs, c, unification, &mut false)
}

pub(crate) fn ext_narrow_tracked(
    rs: &RewriteSystem,
    c: &Clause,
    unification: &Unification,
    truncated: &mut bool,
) -> Vec<ExtNarrowing> {
    let vars = c.vars();
    let mut out = Vec::new();
    for (lit, l) in c.literals.iter().enumerate() {
        for (rule, r) in rs.prop_rules.iter().enumerate() {
            let r = r.renamed_avoiding(&vars);
            if r.lhs().pred != l.atom.pred || r.lhs().args.len() != l.atom.args.len() {
                continue;
            }
            for subst in unification.unifiers(&l.atom, r.lhs(), truncated) {
                let clauses = ext_narrowed(rs, c, lit, rule, &subst);
                out.push(ExtNarrowing { lit, rule, subst, clauses });
            }
        }
    }
    out
}
