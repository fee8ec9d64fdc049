//! Theory files: declarations, rewrite rules, axioms, goals and proofs.
//!
//! ```text
//! sig plus/2, times/2.
//! pred eq/2.
//! rule plus(0,Y) -> Y.
//! prule eq(times(X,Y),0) -> eq(X,0) \/ eq(Y,0).
//! axiom forall X. eq(X,X).
//! goal even4: exists Y. eq(4,times(2,Y)).
//! proof even4:
//!   rule=... seq="..."
//! qed.
//! ```
//!
//! `0/0` and `s/1` are always declared, since numerals expand to them.

use std::fmt;

use super::proof::{parse_proof_at, print_proof};
use super::{ParseError, Parser, Pos, Tok};
use crate::rewrite::{PropRule, RewriteSystem, TermRule};
use crate::sequent::ProofNode;
use crate::syntax::{Formula, Signature, Term, SUCC, ZERO};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoryFile {
    pub signature: Signature,
    pub term_rules: Vec<TermRule>,
    pub prop_rules: Vec<PropRule>,
    pub axioms: Vec<Formula>,
    pub goals: Vec<(String, Formula)>,
    pub proofs: Vec<(String, ProofNode)>,
}

impl Default for TheoryFile {
    fn default() -> Self {
        let mut signature = Signature::new();
        signature.declare_function(ZERO, 0).expect("fresh signature");
        signature.declare_function(SUCC, 1).expect("fresh signature");
        TheoryFile {
            signature,
            term_rules: Vec::new(),
            prop_rules: Vec::new(),
            axioms: Vec::new(),
            goals: Vec::new(),
            proofs: Vec::new(),
        }
    }
}

impl TheoryFile {
    pub fn rewrite_system(&self) -> RewriteSystem {
        RewriteSystem::new(self.term_rules.clone(), self.prop_rules.clone())
    }

    pub fn goal(&self, name: &str) -> Option<&Formula> {
        self.goals.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }

    pub fn proof(&self, name: &str) -> Option<&ProofNode> {
        self.proofs.iter().find(|(n, _)| n == name).map(|(_, p)| p)
    }

    /// Parses a term and checks it against the signature.
    pub fn parse_term(&self, src: &str) -> Result<Term, ParseError> {
        let t = super::parse_term(src)?;
        self.signature.check_term(&t).map_err(|e| ParseError::new(Pos { line: 1, col: 1 }, e.to_string()))?;
        Ok(t)
    }

    pub fn parse_formula(&self, src: &str) -> Result<Formula, ParseError> {
        let f = super::parse_formula(src)?;
        self.signature.check_formula(&f).map_err(|e| ParseError::new(Pos { line: 1, col: 1 }, e.to_string()))?;
        Ok(f)
    }
}

fn is_implicit(name: &str, arity: usize) -> bool {
    (name == ZERO && arity == 0) || (name == SUCC && arity == 1)
}

impl fmt::Display for TheoryFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (name, arity) in self.signature.functions() {
            if !is_implicit(name, arity) {
                writeln!(f, "sig {name}/{arity}.")?;
            }
        }
        for (name, arity) in self.signature.predicates() {
            writeln!(f, "pred {name}/{arity}.")?;
        }
        for r in &self.term_rules {
            writeln!(f, "rule {} -> {}.", r.lhs(), r.rhs())?;
        }
        for r in &self.prop_rules {
            writeln!(f, "prule {} -> {}.", r.lhs(), r.rhs())?;
        }
        for a in &self.axioms {
            writeln!(f, "axiom {a}.")?;
        }
        for (name, g) in &self.goals {
            writeln!(f, "goal {name}: {g}.")?;
        }
        for (name, p) in &self.proofs {
            writeln!(f, "proof {name}:")?;
            for line in print_proof(p).lines() {
                writeln!(f, "  {line}")?;
            }
            writeln!(f, "qed.")?;
        }
        Ok(())
    }
}

struct RawProof {
    name: String,
    pos: Pos,
    node: ProofNode,
}

fn is_name(s: &str) -> bool {
    s.starts_with(super::is_ident_start) && s.chars().all(super::is_ident_char)
}

// Cuts `proof <name>:` ... `qed.` blocks out of the text, blanking their
// lines so the remaining positions are unchanged.
fn extract_proofs(src: &str) -> Result<(String, Vec<RawProof>), ParseError> {
    let lines: Vec<&str> = src.lines().collect();
    let mut rest = Vec::with_capacity(lines.len());
    let mut proofs = Vec::new();
    let mut k = 0;
    while k < lines.len() {
        let line = lines[k];
        let code = line.split('#').next().unwrap_or("").trim();
        let header = code.strip_prefix("proof").filter(|r| r.starts_with(char::is_whitespace));
        let Some(header) = header else {
            rest.push(line.to_string());
            k += 1;
            continue;
        };
        let pos = Pos { line: k + 1, col: line.len() - line.trim_start().len() + 1 };
        let Some(name) = header.trim().strip_suffix(':').map(str::trim).filter(|n| is_name(n)) else {
            return Err(ParseError::new(pos, "expected `proof <name>:` on a line of its own"));
        };
        let start = k + 1;
        let mut end = start;
        while end < lines.len() && lines[end].split('#').next().unwrap_or("").trim() != "qed." {
            end += 1;
        }
        if end == lines.len() {
            return Err(ParseError::new(pos, format!("proof `{name}` is not closed by `qed.`")));
        }
        let body = lines[start..end].join("\n");
        let node = parse_proof_at(&body, start + 1)?;
        proofs.push(RawProof { name: name.to_string(), pos, node });
        rest.extend(std::iter::repeat_n(String::new(), end + 1 - k));
        k = end + 1;
    }
    Ok((rest.join("\n"), proofs))
}

enum Item {
    Rule(Term, Term),
    PropRule(crate::syntax::Atom, Formula),
    Axiom(Formula),
    Goal(String, Formula),
}

fn declarations(p: &mut Parser, sig: &mut Signature, predicate: bool) -> Result<(), ParseError> {
    loop {
        let pos = p.pos();
        let name = match p.peek().clone() {
            Tok::Num(n) if !predicate => {
                p.bump();
                n.to_string()
            }
            _ => p.ident()?,
        };
        p.expect(&Tok::Slash)?;
        let arity = p.number()? as usize;
        let declared = if predicate { sig.declare_predicate(&name, arity) } else { sig.declare_function(&name, arity) };
        declared.map_err(|e| ParseError::new(pos, e.to_string()))?;
        if !p.eat(&Tok::Comma) {
            break;
        }
    }
    p.expect(&Tok::Dot)
}

/// Parses and checks a theory file: every symbol is declared with the
/// arity it is used at, rule invariants hold, and names are unique.
pub fn parse_theory(src: &str) -> Result<TheoryFile, ParseError> {
    let (rest, raw_proofs) = extract_proofs(src)?;
    let mut theory = TheoryFile::default();
    let mut items = Vec::new();
    let mut p = Parser::new(&rest)?;
    while *p.peek() != Tok::Eof {
        let pos = p.pos();
        let keyword = p.ident()?;
        let item = match keyword.as_str() {
            "sig" | "pred" => {
                declarations(&mut p, &mut theory.signature, keyword == "pred")?;
                continue;
            }
            "rule" => {
                let lhs = p.term()?;
                p.expect(&Tok::Arrow)?;
                Item::Rule(lhs, p.term()?)
            }
            "prule" => {
                let lhs = p.atom()?;
                p.expect(&Tok::Arrow)?;
                Item::PropRule(lhs, p.formula()?)
            }
            "axiom" => Item::Axiom(p.formula()?),
            "goal" => {
                let name = p.ident()?;
                p.expect(&Tok::Colon)?;
                Item::Goal(name, p.formula()?)
            }
            "proof" => return Err(ParseError::new(pos, "`proof <name>:` must be on a line of its own")),
            other => {
                return Err(ParseError::new(
                    pos,
                    format!("expected sig, pred, rule, prule, axiom, goal or proof, found `{other}`"),
                ))
            }
        };
        p.expect(&Tok::Dot)?;
        items.push((pos, item));
    }

    let sig = theory.signature.clone();
    let at = |pos: Pos| move |e: crate::syntax::SignatureError| ParseError::new(pos, e.to_string());
    for (pos, item) in items {
        match item {
            Item::Rule(lhs, rhs) => {
                sig.check_term(&lhs).map_err(at(pos))?;
                sig.check_term(&rhs).map_err(at(pos))?;
                let rule = TermRule::new(lhs, rhs).map_err(|e| ParseError::new(pos, e.to_string()))?;
                theory.term_rules.push(rule);
            }
            Item::PropRule(lhs, rhs) => {
                sig.check_atom(&lhs).map_err(at(pos))?;
                sig.check_formula(&rhs).map_err(at(pos))?;
                let rule = PropRule::new(lhs, rhs).map_err(|e| ParseError::new(pos, e.to_string()))?;
                theory.prop_rules.push(rule);
            }
            Item::Axiom(f) => {
                sig.check_formula(&f).map_err(at(pos))?;
                theory.axioms.push(f);
            }
            Item::Goal(name, f) => {
                sig.check_formula(&f).map_err(at(pos))?;
                if theory.goal(&name).is_some() {
                    return Err(ParseError::new(pos, format!("goal `{name}` is defined twice")));
                }
                theory.goals.push((name, f));
            }
        }
    }
    for raw in raw_proofs {
        check_proof_symbols(&sig, &raw.node).map_err(at(raw.pos))?;
        if theory.proof(&raw.name).is_some() {
            return Err(ParseError::new(raw.pos, format!("proof `{}` is defined twice", raw.name)));
        }
        theory.proofs.push((raw.name, raw.node));
    }
    Ok(theory)
}

fn check_proof_symbols(sig: &Signature, p: &ProofNode) -> Result<(), crate::syntax::SignatureError> {
    for f in p.conclusion.antecedent.iter().chain(&p.conclusion.succedent) {
        sig.check_formula(f)?;
    }
    if let Some(w) = &p.witness {
        sig.check_term(w)?;
    }
    p.premises.iter().try_for_each(|q| check_proof_symbols(sig, q))
}
