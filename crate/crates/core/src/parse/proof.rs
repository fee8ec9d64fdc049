//! Proof trees as indentation-nested text, one node per line:
//! `rule=<tag> seq="<Γ> |- <Δ>" [witness=<term>] [eigen=<var>] [principal=L<i>|R<i>]`.
//! Premises follow their conclusion, indented deeper.

use serde::{Deserialize, Serialize};

use super::{parse_sequent, parse_term, ParseError, Pos};
use crate::sequent::{Principal, ProofNode, RuleTag};
use crate::syntax::{Term, Var};

// Errors name the offending field and a one-based column within it.
fn build(
    rule: &str,
    seq: &str,
    witness: Option<&str>,
    eigen: Option<&str>,
    principal: Option<&str>,
) -> Result<ProofNode, (&'static str, usize, String)> {
    let rule: RuleTag = rule.parse().map_err(|e| ("rule", 1, e))?;
    let conclusion = parse_sequent(seq).map_err(|e| ("seq", e.pos.col, e.message))?;
    let mut node = ProofNode::new(rule, conclusion, Vec::new());
    if let Some(w) = witness {
        node.witness = Some(parse_term(w).map_err(|e| ("witness", e.pos.col, e.message))?);
    }
    if let Some(v) = eigen {
        match parse_term(v) {
            Ok(Term::Var(v)) => node.eigen = Some(v),
            _ => return Err(("eigen", 1, format!("eigenvariable `{v}` is not a variable"))),
        }
    }
    if let Some(p) = principal {
        node.principal = Some(p.parse::<Principal>().map_err(|e| ("principal", 1, e))?);
    }
    Ok(node)
}

struct Line {
    indent: usize,
    node: ProofNode,
}

fn parse_line(text: &str, pos: Pos) -> Result<ProofNode, ParseError> {
    let err = |col: usize, msg: String| ParseError::new(Pos { line: pos.line, col: pos.col + col }, msg);
    let chars: Vec<char> = text.chars().collect();
    let mut fields: Vec<(String, String, usize)> = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_whitespace() {
            i += 1;
            continue;
        }
        let key_start = i;
        while i < chars.len() && chars[i] != '=' && !chars[i].is_whitespace() {
            i += 1;
        }
        let key: String = chars[key_start..i].iter().collect();
        if i >= chars.len() || chars[i] != '=' {
            return Err(err(key_start, format!("expected `{key}=<value>`")));
        }
        i += 1;
        let value_start;
        let value: String;
        if i < chars.len() && chars[i] == '"' {
            i += 1;
            value_start = i;
            while i < chars.len() && chars[i] != '"' {
                i += 1;
            }
            if i >= chars.len() {
                return Err(err(value_start - 1, "unterminated string".into()));
            }
            value = chars[value_start..i].iter().collect();
            i += 1;
        } else {
            value_start = i;
            while i < chars.len() && !chars[i].is_whitespace() {
                i += 1;
            }
            value = chars[value_start..i].iter().collect();
        }
        if fields.iter().any(|(k, _, _)| *k == key) {
            return Err(err(key_start, format!("duplicate field `{key}`")));
        }
        fields.push((key, value, value_start));
    }
    for (k, _, at) in &fields {
        if !["rule", "seq", "witness", "eigen", "principal"].contains(&k.as_str()) {
            return Err(err(*at - k.len() - 1, format!("unknown field `{k}`")));
        }
    }
    let get = |k: &str| fields.iter().find(|(key, _, _)| key == k).map(|(_, v, at)| (v.as_str(), *at));
    let Some((rule, _)) = get("rule") else { return Err(err(0, "missing `rule=`".into())) };
    let Some((seq, _)) = get("seq") else { return Err(err(0, "missing `seq=`".into())) };
    build(rule, seq, get("witness").map(|f| f.0), get("eigen").map(|f| f.0), get("principal").map(|f| f.0)).map_err(
        |(field, col, msg)| {
            let at = get(field).map_or(0, |f| f.1);
            err(at + col - 1, msg)
        },
    )
}

/// Parses a proof tree whose first line is line `first_line` of some
/// enclosing text.
pub(crate) fn parse_proof_at(text: &str, first_line: usize) -> Result<ProofNode, ParseError> {
    let mut lines = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line_no = first_line + k;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            continue;
        }
        if raw.starts_with('\t') {
            return Err(ParseError::new(Pos { line: line_no, col: 1 }, "indent with spaces, not tabs"));
        }
        let indent = content.len() - content.trim_start().len();
        let node = parse_line(content.trim_start(), Pos { line: line_no, col: indent + 1 })?;
        lines.push((Line { indent, node }, line_no));
    }
    if lines.is_empty() {
        return Err(ParseError::new(Pos { line: first_line, col: 1 }, "empty proof"));
    }
    let mut at = 0;
    let root = assemble(&mut lines, &mut at);
    if let Some((_, line_no)) = lines.get(at) {
        return Err(ParseError::new(Pos { line: *line_no, col: 1 }, "proof has more than one root"));
    }
    Ok(root)
}

fn assemble(lines: &mut [(Line, usize)], at: &mut usize) -> ProofNode {
    let indent = lines[*at].0.indent;
    let mut node =
        std::mem::replace(&mut lines[*at].0.node, ProofNode::new(RuleTag::Axiom, Default::default(), Vec::new()));
    *at += 1;
    while *at < lines.len() && lines[*at].0.indent > indent {
        let child = assemble(lines, at);
        node.premises.push(child);
    }
    node
}

pub fn parse_proof(text: &str) -> Result<ProofNode, ParseError> {
    parse_proof_at(text, 1)
}

fn print_node(p: &ProofNode, depth: usize, out: &mut String) {
    out.push_str(&"  ".repeat(depth));
    out.push_str(&format!("rule={} seq=\"{}\"", p.rule, p.conclusion));
    if let Some(w) = &p.witness {
        out.push_str(&format!(" witness={w}"));
    }
    if let Some(v) = &p.eigen {
        out.push_str(&format!(" eigen={v}"));
    }
    if let Some(pr) = &p.principal {
        out.push_str(&format!(" principal={pr}"));
    }
    out.push('\n');
    for q in &p.premises {
        print_node(q, depth + 1, out);
    }
}

/// Renders `p` in the format read by [`parse_proof`], two spaces per level.
pub fn print_proof(p: &ProofNode) -> String {
    let mut out = String::new();
    print_node(p, 0, &mut out);
    out
}

/// Structured-data form of a proof tree, with the same fields as the text form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofRecord {
    pub rule: String,
    pub seq: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eigen: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub principal: Option<String>,
    #[serde(default)]
    pub premises: Vec<ProofRecord>,
}

impl From<&ProofNode> for ProofRecord {
    fn from(p: &ProofNode) -> Self {
        ProofRecord {
            rule: p.rule.to_string(),
            seq: p.conclusion.to_string(),
            witness: p.witness.as_ref().map(Term::to_string),
            eigen: p.eigen.as_ref().map(Var::to_string),
            principal: p.principal.as_ref().map(Principal::to_string),
            premises: p.premises.iter().map(ProofRecord::from).collect(),
        }
    }
}

impl TryFrom<&ProofRecord> for ProofNode {
    type Error = String;

    fn try_from(r: &ProofRecord) -> Result<Self, String> {
        let mut node = build(&r.rule, &r.seq, r.witness.as_deref(), r.eigen.as_deref(), r.principal.as_deref())
            .map_err(|(field, _, msg)| format!("node `{}`, {field}: {msg}", r.seq))?;
        for q in &r.premises {
            node.premises.push(ProofNode::try_from(q)?);
        }
        Ok(node)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EVEN: &str = r#"
rule=ExistsRight seq="forall X. eq(X,X) |- exists Y. eq(4,times(2,Y))" witness=2 principal=R0
  rule=ForallLeft seq="forall X. eq(X,X) |- eq(4,times(2,2))" witness=4 principal=L0
    rule=Axiom seq="eq(4,4) |- eq(4,times(2,2))"
"#;

    #[test]
    fn nested_text_round_trips() {
        let p = parse_proof(EVEN).unwrap();
        assert_eq!(p.size(), 3);
        assert_eq!(p.premises[0].witness, Some(Term::numeral(4)));
        assert_eq!(parse_proof(&print_proof(&p)).unwrap(), p);
        let record = ProofRecord::from(&p);
        assert_eq!(ProofNode::try_from(&record).unwrap(), p);
    }

    #[test]
    fn siblings_share_a_parent() {
        let text =
            "rule=OrLeft seq=\"A \\/ B |- C\" principal=L0\n  rule=Axiom seq=\"A |- C\"\n  rule=Axiom seq=\"B |- C\"\n";
        let p = parse_proof(text).unwrap();
        assert_eq!(p.premises.len(), 2);
        assert!(p.premises.iter().all(|q| q.premises.is_empty()));
    }

    #[test]
    fn errors_are_positioned() {
        let e = parse_proof("rule=Axiom seq=\"A |- \"\nrule=Bogus seq=\"|-\"").unwrap_err();
        assert_eq!(e.pos.line, 2);
        let e = parse_proof_at("  rule=Axiom seq=\"A |- )\"", 10).unwrap_err();
        assert_eq!(e.pos.line, 10);
        assert!(parse_proof("rule=Axiom").is_err());
        assert!(parse_proof("rule=Axiom seq=\"|-\" colour=red").is_err());
    }
}
