//! Concrete syntax rendering. Everything printed here parses back to the
//! same structure.

use std::fmt::{self, Display, Formatter};

use super::formula::{Atom, Clause, Formula, Literal, Sequent};
use super::subst::Substitution;
use super::term::Term;

impl Display for Term {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.as_numeral() {
            return write!(f, "{n}");
        }
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App(name, args) => {
                f.write_str(name)?;
                write_args(f, args)
            }
        }
    }
}

fn write_args(f: &mut Formatter<'_>, args: &[Term]) -> fmt::Result {
    if args.is_empty() {
        return Ok(());
    }
    f.write_str("(")?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{a}")?;
    }
    f.write_str(")")
}

impl Display for Atom {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_str(&self.pred)?;
        write_args(f, &self.args)
    }
}

impl Display for Literal {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("~")?;
        }
        write!(f, "{}", self.atom)
    }
}

impl Display for Clause {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        if self.literals.is_empty() {
            return f.write_str("[]");
        }
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

// Binding strength; higher binds tighter.
const IFF: u8 = 1;
const IMPLIES: u8 = 2;
const OR: u8 = 3;
const AND: u8 = 4;
const UNARY: u8 = 5;

fn precedence(phi: &Formula) -> u8 {
    match phi {
        Formula::Forall(..) | Formula::Exists(..) => 0,
        Formula::Iff(..) => IFF,
        Formula::Implies(..) => IMPLIES,
        Formula::Or(..) => OR,
        Formula::And(..) => AND,
        _ => UNARY,
    }
}

fn write_formula(f: &mut Formatter<'_>, phi: &Formula, min: u8) -> fmt::Result {
    let parens = precedence(phi) < min;
    if parens {
        f.write_str("(")?;
    }
    match phi {
        Formula::Atom(a) => write!(f, "{a}")?,
        Formula::Top => f.write_str("true")?,
        Formula::Bottom => f.write_str("false")?,
        Formula::Not(a) => {
            f.write_str("~")?;
            write_formula(f, a, UNARY)?;
        }
        Formula::And(a, b) => binary(f, a, " /\\ ", b, AND, AND + 1)?,
        Formula::Or(a, b) => binary(f, a, " \\/ ", b, OR, OR + 1)?,
        Formula::Implies(a, b) => binary(f, a, " => ", b, IMPLIES + 1, IMPLIES)?,
        Formula::Iff(a, b) => binary(f, a, " <=> ", b, IFF, IFF + 1)?,
        Formula::Forall(v, body) => {
            write!(f, "forall {v}. ")?;
            write_formula(f, body, 0)?;
        }
        Formula::Exists(v, body) => {
            write!(f, "exists {v}. ")?;
            write_formula(f, body, 0)?;
        }
    }
    if parens {
        f.write_str(")")?;
    }
    Ok(())
}

fn binary(f: &mut Formatter<'_>, a: &Formula, op: &str, b: &Formula, left_min: u8, right_min: u8) -> fmt::Result {
    write_formula(f, a, left_min)?;
    f.write_str(op)?;
    write_formula(f, b, right_min)
}

impl Display for Formula {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_formula(f, self, 0)
    }
}

/// Comma-separated list where each item binds at least as tightly as a
/// quantifier-free formula, so commas never get absorbed.
fn write_list(f: &mut Formatter<'_>, items: &[Formula]) -> fmt::Result {
    for (i, phi) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write_formula(f, phi, 0)?;
    }
    Ok(())
}

impl Display for Sequent {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        write_list(f, &self.antecedent)?;
        if !self.antecedent.is_empty() {
            f.write_str(" ")?;
        }
        f.write_str("|-")?;
        if !self.succedent.is_empty() {
            f.write_str(" ")?;
        }
        write_list(f, &self.succedent)
    }
}

impl Display for Substitution {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}->{t}")?;
        }
        f.write_str("}")
    }
}
