//! Concrete syntax: terms, formulas, sequents, proof trees and theory files.
//!
//! Identifiers starting with an uppercase letter or `_` are variables in
//! term position; any identifier may name a predicate. Decimal numerals
//! stand for `s(...s(0))`. `#` starts a comment running to the end of line.

use std::fmt;

use thiserror::Error;

use crate::syntax::{Atom, Formula, Sequent, Term, Var};

mod proof;
mod theory;

pub use proof::{parse_proof, print_proof, ProofRecord};
pub use theory::{parse_theory, TheoryFile};

/// One-based line and column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{pos}: {message}")]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

impl ParseError {
    pub fn new(pos: Pos, message: impl Into<String>) -> Self {
        ParseError { pos, message: message.into() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Tok {
    Ident(String),
    Num(u64),
    LParen,
    RParen,
    Comma,
    Dot,
    Colon,
    Slash,
    Arrow,
    Implies,
    Iff,
    And,
    Or,
    Not,
    Turnstile,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Num(n) => write!(f, "`{n}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Slash => f.write_str("`/`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::Implies => f.write_str("`=>`"),
            Tok::Iff => f.write_str("`<=>`"),
            Tok::And => f.write_str("`/\\`"),
            Tok::Or => f.write_str("`\\/`"),
            Tok::Not => f.write_str("`~`"),
            Tok::Turnstile => f.write_str("`|-`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

fn is_variable_name(s: &str) -> bool {
    s.starts_with(|c: char| c.is_ascii_uppercase() || c == '_')
}

/// Splits `src` into tokens; the last token is always `Eof`.
pub(crate) fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let tok = if is_ident_start(c) {
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            Tok::Ident(chars[start..i].iter().collect())
        } else if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            match text.parse::<u64>() {
                Ok(n) if n <= MAX_NUMERAL => Tok::Num(n),
                _ => return Err(ParseError::new(pos, format!("numeral `{text}` exceeds {MAX_NUMERAL}"))),
            }
        } else {
            let rest: String = chars[i..chars.len().min(i + 3)].iter().collect();
            let (tok, len) = if rest.starts_with("<=>") {
                (Tok::Iff, 3)
            } else if rest.starts_with("->") {
                (Tok::Arrow, 2)
            } else if rest.starts_with("=>") {
                (Tok::Implies, 2)
            } else if rest.starts_with("/\\") {
                (Tok::And, 2)
            } else if rest.starts_with("\\/") {
                (Tok::Or, 2)
            } else if rest.starts_with("|-") {
                (Tok::Turnstile, 2)
            } else {
                let t = match c {
                    '(' => Tok::LParen,
                    ')' => Tok::RParen,
                    ',' => Tok::Comma,
                    '.' => Tok::Dot,
                    ':' => Tok::Colon,
                    '/' => Tok::Slash,
                    '~' => Tok::Not,
                    _ => return Err(ParseError::new(pos, format!("unexpected character `{c}`"))),
                };
                (t, 1)
            };
            i += len;
            tok
        };
        col += i - start;
        out.push((tok, pos));
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

// Numerals unfold to nested terms, which are traversed recursively.
const MAX_NUMERAL: u64 = 1_000;

// Guard against stack exhaustion on adversarial nesting.
const MAX_NESTING: usize = 600;

pub(crate) struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    nesting: usize,
}

impl Parser {
    pub(crate) fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(src)?, at: 0, nesting: 0 })
    }

    pub(crate) fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    pub(crate) fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    pub(crate) fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    pub(crate) fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    pub(crate) fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::new(self.pos(), message))
    }

    pub(crate) fn expect(&mut self, t: &Tok) -> Result<(), ParseError> {
        if self.eat(t) {
            Ok(())
        } else {
            self.error(format!("expected {t}, found {}", self.peek()))
        }
    }

    pub(crate) fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => self.error(format!("expected an identifier, found {other}")),
        }
    }

    pub(crate) fn number(&mut self) -> Result<u64, ParseError> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(n)
            }
            other => self.error(format!("expected a number, found {other}")),
        }
    }

    pub(crate) fn end(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            other => self.error(format!("unexpected {other}")),
        }
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.nesting += 1;
        if self.nesting > MAX_NESTING {
            return self.error("nesting too deep");
        }
        Ok(())
    }

    fn args(&mut self) -> Result<Vec<Term>, ParseError> {
        let mut args = Vec::new();
        if self.eat(&Tok::LParen) {
            loop {
                args.push(self.term()?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(&Tok::RParen)?;
        }
        Ok(args)
    }

    pub(crate) fn term(&mut self) -> Result<Term, ParseError> {
        self.enter()?;
        let t = match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Term::numeral(n)
            }
            Tok::Ident(name) => {
                self.bump();
                if is_variable_name(&name) {
                    if *self.peek() == Tok::LParen {
                        return self.error(format!("variable `{name}` cannot take arguments"));
                    }
                    Term::var(name)
                } else {
                    Term::app(name, self.args()?)
                }
            }
            other => return self.error(format!("expected a term, found {other}")),
        };
        self.nesting -= 1;
        Ok(t)
    }

    pub(crate) fn atom(&mut self) -> Result<Atom, ParseError> {
        let name = self.ident()?;
        Ok(Atom::new(name, self.args()?))
    }

    pub(crate) fn formula(&mut self) -> Result<Formula, ParseError> {
        self.enter()?;
        let lhs = self.implication()?;
        let f = if self.eat(&Tok::Iff) {
            // Left-associative, matching the printer.
            let mut acc = Formula::iff(lhs, self.implication()?);
            while self.eat(&Tok::Iff) {
                acc = Formula::iff(acc, self.implication()?);
            }
            acc
        } else {
            lhs
        };
        self.nesting -= 1;
        Ok(f)
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.eat(&Tok::Implies) {
            self.enter()?;
            let rhs = self.implication()?;
            self.nesting -= 1;
            Ok(Formula::implies(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.conjunction()?;
        while self.eat(&Tok::Or) {
            acc = Formula::or(acc, self.conjunction()?);
        }
        Ok(acc)
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while self.eat(&Tok::And) {
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        self.enter()?;
        let f = match self.peek().clone() {
            Tok::Not => {
                self.bump();
                Formula::not(self.unary()?)
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(&Tok::RParen)?;
                f
            }
            Tok::Ident(kw) if kw == "forall" || kw == "exists" => {
                self.bump();
                let v = self.ident()?;
                if !is_variable_name(&v) {
                    return self.error(format!("bound variable `{v}` must start with an uppercase letter"));
                }
                self.expect(&Tok::Dot)?;
                let body = self.formula()?;
                if kw == "forall" {
                    Formula::forall(Var::new(v), body)
                } else {
                    Formula::exists(Var::new(v), body)
                }
            }
            Tok::Ident(kw) if kw == "true" => {
                self.bump();
                Formula::Top
            }
            Tok::Ident(kw) if kw == "false" => {
                self.bump();
                Formula::Bottom
            }
            Tok::Ident(_) => Formula::Atom(self.atom()?),
            other => return self.error(format!("expected a formula, found {other}")),
        };
        self.nesting -= 1;
        Ok(f)
    }

    fn formula_list(&mut self, stop: &Tok) -> Result<Vec<Formula>, ParseError> {
        let mut out = Vec::new();
        if self.peek() == stop {
            return Ok(out);
        }
        loop {
            out.push(self.formula()?);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        Ok(out)
    }

    pub(crate) fn sequent(&mut self) -> Result<Sequent, ParseError> {
        let antecedent = self.formula_list(&Tok::Turnstile)?;
        self.expect(&Tok::Turnstile)?;
        let succedent = self.formula_list(&Tok::Eof)?;
        Ok(Sequent::new(antecedent, succedent))
    }
}

fn whole<T>(src: &str, f: impl FnOnce(&mut Parser) -> Result<T, ParseError>) -> Result<T, ParseError> {
    let mut p = Parser::new(src)?;
    let out = f(&mut p)?;
    p.end()?;
    Ok(out)
}

pub fn parse_term(src: &str) -> Result<Term, ParseError> {
    whole(src, Parser::term)
}

pub fn parse_atom(src: &str) -> Result<Atom, ParseError> {
    whole(src, Parser::atom)
}

pub fn parse_formula(src: &str) -> Result<Formula, ParseError> {
    whole(src, Parser::formula)
}

/// `Γ |- Δ` with comma-separated formula lists, either possibly empty.
pub fn parse_sequent(src: &str) -> Result<Sequent, ParseError> {
    whole(src, Parser::sequent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::tests::term_strategy;
    use proptest::prelude::*;

    #[test]
    fn terms_and_numerals() {
        assert_eq!(parse_term("plus(X, 2)").unwrap(), Term::app("plus", vec![Term::var("X"), Term::numeral(2)]));
        assert_eq!(parse_term("s(s(0))").unwrap(), Term::numeral(2));
        assert!(parse_term("X(a)").is_err());
    }

    #[test]
    fn crabbe_rhs_and_precedence() {
        let f = parse_formula("B /\\ ~A").unwrap();
        assert_eq!(f, Formula::and(Formula::prop("B"), Formula::not(Formula::prop("A"))));
        let g = parse_formula("A => B => C").unwrap();
        assert_eq!(g, Formula::implies(Formula::prop("A"), Formula::implies(Formula::prop("B"), Formula::prop("C"))));
        let h = parse_formula("forall X. P(X) \\/ Q").unwrap();
        assert!(matches!(h, Formula::Forall(..)));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse_formula("P(a,\n  ))").unwrap_err();
        assert_eq!(e.pos, Pos { line: 2, col: 3 });
        let e = parse_formula("P $").unwrap_err();
        assert_eq!(e.pos, Pos { line: 1, col: 3 });
    }

    #[test]
    fn sequents() {
        let s = parse_sequent("B, A, B |- A").unwrap();
        assert_eq!((s.antecedent.len(), s.succedent.len()), (3, 1));
        let s = parse_sequent("|- ~B").unwrap();
        assert!(s.antecedent.is_empty());
        let s = parse_sequent("A, B |-").unwrap();
        assert!(s.succedent.is_empty());
    }

    #[test]
    fn deep_nesting_is_an_error_not_a_crash() {
        let src = format!("{}P{}", "~(".repeat(5000), ")".repeat(5000));
        assert!(parse_formula(&src).is_err());
    }

    fn atom_strategy() -> impl Strategy<Value = Atom> {
        (prop::sample::select(vec!["P", "Q", "eq"]), prop::collection::vec(term_strategy(), 0..3))
            .prop_map(|(p, args)| Atom::new(p, args))
    }

    fn formula_strategy() -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![atom_strategy().prop_map(Formula::Atom), Just(Formula::Top), Just(Formula::Bottom),];
        leaf.prop_recursive(4, 24, 2, |inner| {
            let var = prop::sample::select(vec!["X", "Y", "Z"]).prop_map(Var::new);
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::iff(a, b)),
                (var.clone(), inner.clone()).prop_map(|(v, a)| Formula::forall(v, a)),
                (var, inner).prop_map(|(v, a)| Formula::exists(v, a)),
            ]
        })
    }

    proptest! {
        #[test]
        fn printed_terms_parse_back(t in term_strategy()) {
            prop_assert_eq!(parse_term(&t.to_string()).unwrap(), t);
        }

        #[test]
        fn printed_formulas_parse_back(f in formula_strategy()) {
            prop_assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
        }

        #[test]
        fn printed_sequents_parse_back(l in prop::collection::vec(formula_strategy(), 0..3),
                                       r in prop::collection::vec(formula_strategy(), 0..3)) {
            let s = Sequent::new(l, r);
            prop_assert_eq!(parse_sequent(&s.to_string()).unwrap(), s);
        }
    }
}
