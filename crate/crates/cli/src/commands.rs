use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use orient_core::clausify::clausal_form;
use orient_core::parse::{parse_proof, parse_theory, ParseError, ProofRecord, TheoryFile};
use orient_core::prover::{
    rules_to_axioms, saturate_with, DerivationTrace, Outcome, ProverMode, SaturationLimits, SaturationOptions,
};
use orient_core::rewrite::{
    critical_pairs, explain_equivalence, normalize_traced, term_rule_name, Joinability, LocalConfluence, Reduction,
    RewriteSystem,
};
use orient_core::sequent::{check_proof, uses_cut, CheckResult, ProofNode};
use orient_core::unify::{mgu, EUnifyItem, UnifProblem};
use orient_core::{Clause, Substitution};

use crate::{Cli, Command, ProveArgs, Verdict};

#[derive(Debug)]
pub struct InputError(String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

pub struct Report {
    pub verdict: Verdict,
    pub text: String,
    pub json: Value,
}

fn load(path: &Path) -> Result<TheoryFile, InputError> {
    let text = fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    parse_theory(&text).map_err(|e| InputError(format!("{}:{e}", path.display())))
}

fn arg_error(what: &str) -> impl Fn(ParseError) -> InputError + '_ {
    move |e| InputError(format!("{what}: {}", e.message))
}

fn position(p: &[usize]) -> String {
    if p.is_empty() {
        "root".into()
    } else {
        p.iter().map(usize::to_string).collect::<Vec<_>>().join(".")
    }
}

fn subst_json(s: &Substitution) -> Value {
    s.iter().map(|(v, t)| (v.to_string(), Value::String(t.to_string()))).collect::<serde_json::Map<_, _>>().into()
}

fn reduction_text(red: &Reduction, out: &mut String) {
    for step in &red.steps {
        let _ = writeln!(out, "  -> {}  [{} at {}]", step.result, term_rule_name(step.rule), position(&step.position));
    }
}

fn reduction_json(red: &Reduction) -> Value {
    json!({
        "start": red.start.to_string(),
        "result": red.result().to_string(),
        "steps": red.steps.iter().map(|s| json!({
            "rule": term_rule_name(s.rule),
            "position": s.position,
            "result": s.result.to_string(),
        })).collect::<Vec<_>>(),
    })
}

pub fn run(cli: &Cli) -> Result<Report, InputError> {
    let fuel = cli.fuel;
    match &cli.command {
        Command::Normalize { file, term } => normalize(&load(file)?, term, fuel),
        Command::Equiv { file, t, u } => equiv(&load(file)?, t, u, fuel),
        Command::Confluence { file } => confluence(&load(file)?, fuel),
        Command::Unify { file, t, u, depth } => unify(&load(file)?, t, u, *depth, fuel),
        Command::Clausify { file, goal } => clausify(&load(file)?, goal.as_deref()),
        Command::Prove(args) => prove(&load(&args.file)?, args, fuel),
        Command::Check { file, proof, proof_file, require_cut_free } => {
            let th = load(file)?;
            let p = match (proof, proof_file) {
                (Some(name), _) => th
                    .proof(name)
                    .cloned()
                    .ok_or_else(|| InputError(format!("no proof named `{name}` in {}", file.display())))?,
                (None, Some(path)) => read_proof(path)?,
                (None, None) => return Err(InputError("one of --proof or --proof-file is required".into())),
            };
            Ok(check(&th, &p, *require_cut_free, fuel))
        }
    }
}

fn normalize(th: &TheoryFile, term: &str, fuel: usize) -> Result<Report, InputError> {
    let t = th.parse_term(term).map_err(arg_error("term"))?;
    Ok(match normalize_traced(&th.rewrite_system(), &t, fuel) {
        Ok(red) => {
            let mut text = format!("{}\n", red.result());
            let _ = writeln!(text, "{} step(s) from {}", red.steps.len(), red.start);
            reduction_text(&red, &mut text);
            Report {
                verdict: Verdict::Established,
                text,
                json: json!({ "verdict": "NormalForm", "reduction": reduction_json(&red) }),
            }
        }
        Err(e) => Report {
            verdict: Verdict::LimitExceeded,
            text: format!("{e}\n"),
            json: json!({ "verdict": "FuelExhausted", "fuel": fuel }),
        },
    })
}

fn equiv(th: &TheoryFile, t: &str, u: &str, fuel: usize) -> Result<Report, InputError> {
    let t = th.parse_term(t).map_err(arg_error("first term"))?;
    let u = th.parse_term(u).map_err(arg_error("second term"))?;
    let report = match explain_equivalence(&th.rewrite_system(), &t, &u, fuel) {
        Ok(r) => r,
        Err(e) => {
            return Ok(Report {
                verdict: Verdict::LimitExceeded,
                text: format!("{e}\n"),
                json: json!({ "verdict": "FuelExhausted", "fuel": fuel }),
            })
        }
    };
    let mut text = format!("{}\n", report.equivalent);
    if report.equivalent {
        let _ = writeln!(text, "joined at {}", report.left.result());
    } else {
        let _ = writeln!(text, "normal forms {} and {} differ", report.left.result(), report.right.result());
    }
    let _ = writeln!(text, "left: {}", report.left.start);
    reduction_text(&report.left, &mut text);
    let _ = writeln!(text, "right: {}", report.right.start);
    reduction_text(&report.right, &mut text);
    if !report.equivalent && report.confluence != LocalConfluence::Confluent {
        let _ = writeln!(
            text,
            "warning: the rules are not known to be confluent, so distinct normal forms do not rule out equivalence"
        );
    }
    Ok(Report {
        verdict: if report.equivalent { Verdict::Established } else { Verdict::NotEstablished },
        text,
        json: json!({
            "verdict": report.equivalent,
            "confluence": format!("{:?}", report.confluence),
            "left": reduction_json(&report.left),
            "right": reduction_json(&report.right),
        }),
    })
}

fn confluence(th: &TheoryFile, fuel: usize) -> Result<Report, InputError> {
    let report = critical_pairs(&th.rewrite_system(), fuel);
    let mut text = String::new();
    let mut pairs = Vec::new();
    for cp in &report.pairs {
        let status = match &cp.joinability {
            Joinability::Joinable { common, .. } => format!("joinable at {common}"),
            Joinability::NotJoinable { left_nf, right_nf } => {
                format!("NOT joinable: {left_nf} vs {right_nf}")
            }
            Joinability::Unknown => "unknown within fuel".into(),
        };
        let _ = writeln!(
            text,
            "{} into {} at {}{}: {} <- {} -> {}: {status}",
            term_rule_name(cp.inner_rule),
            term_rule_name(cp.outer_rule),
            position(&cp.position),
            if cp.trivial { " (trivial)" } else { "" },
            cp.left,
            cp.peak,
            cp.right,
        );
        let (joinable, left_nf, right_nf) = match &cp.joinability {
            Joinability::Joinable { common, .. } => (json!(true), json!(common.to_string()), json!(common.to_string())),
            Joinability::NotJoinable { left_nf, right_nf } => {
                (json!(false), json!(left_nf.to_string()), json!(right_nf.to_string()))
            }
            Joinability::Unknown => (Value::Null, Value::Null, Value::Null),
        };
        pairs.push(json!({
            "outer_rule": term_rule_name(cp.outer_rule),
            "inner_rule": term_rule_name(cp.inner_rule),
            "position": cp.position,
            "peak": cp.peak.to_string(),
            "left": cp.left.to_string(),
            "right": cp.right.to_string(),
            "trivial": cp.trivial,
            "joinable": joinable,
            "left_nf": left_nf,
            "right_nf": right_nf,
        }));
    }
    let verdict = report.verdict();
    let _ = writeln!(
        text,
        "{} critical pair(s): {}",
        report.pairs.len(),
        match verdict {
            LocalConfluence::Confluent => "locally confluent",
            LocalConfluence::NotConfluent => "not locally confluent",
            LocalConfluence::Unknown => "undecided within fuel",
        }
    );
    Ok(Report {
        verdict: match verdict {
            LocalConfluence::Confluent => Verdict::Established,
            LocalConfluence::NotConfluent => Verdict::NotEstablished,
            LocalConfluence::Unknown => Verdict::LimitExceeded,
        },
        text,
        json: json!({ "verdict": format!("{verdict:?}"), "pairs": pairs }),
    })
}

fn unify(th: &TheoryFile, t: &str, u: &str, depth: usize, fuel: usize) -> Result<Report, InputError> {
    let t = th.parse_term(t).map_err(arg_error("first term"))?;
    let u = th.parse_term(u).map_err(arg_error("second term"))?;
    let rs = th.rewrite_system();
    let enumerator = UnifProblem::new(vec![(t.clone(), u.clone())]).enumerate(&rs, depth, fuel);
    let mut unifiers = Vec::new();
    let mut truncated = false;
    for item in enumerator {
        match item {
            EUnifyItem::Unifier(s) => unifiers.push(s),
            EUnifyItem::DepthExhausted => truncated = true,
        }
    }
    let mut text = String::new();
    for s in &unifiers {
        let _ = writeln!(text, "{s}");
    }
    if truncated {
        let _ = writeln!(text, "DepthExhausted: search cut off at depth {depth}");
    }
    let _ = writeln!(
        text,
        "{} unifier(s); syntactic mgu {}",
        unifiers.len(),
        mgu(&t, &u).map_or("none".to_string(), |s| s.to_string())
    );
    let verdict = match (unifiers.is_empty(), truncated) {
        (false, _) => Verdict::Established,
        (true, false) => Verdict::NotEstablished,
        (true, true) => Verdict::LimitExceeded,
    };
    Ok(Report {
        verdict,
        text,
        json: json!({
            "verdict": match verdict { Verdict::Established => "Unifiable", Verdict::NotEstablished => "NotUnifiable", _ => "DepthExhausted" },
            "unifiers": unifiers.iter().map(subst_json).collect::<Vec<_>>(),
            "depth_exhausted": truncated,
        }),
    })
}

fn goal_formulas(th: &TheoryFile, goal: Option<&str>) -> Result<Vec<orient_core::Formula>, InputError> {
    match goal {
        None => Ok(Vec::new()),
        Some(name) => {
            th.goal(name).cloned().map(|g| vec![g]).ok_or_else(|| InputError(format!("no goal named `{name}`")))
        }
    }
}

fn clauses_json(clauses: &[Clause]) -> Vec<String> {
    clauses.iter().map(Clause::to_string).collect()
}

fn clausify(th: &TheoryFile, goal: Option<&str>) -> Result<Report, InputError> {
    let problem = clausal_form(&th.axioms, &goal_formulas(th, goal)?);
    let mut text = String::new();
    for (i, c) in problem.clauses.iter().enumerate() {
        let origin = if i < problem.goal_count { "goal" } else { "axiom" };
        let _ = writeln!(text, "{i}. {c}  ({origin})");
    }
    for (f, n) in &problem.skolems {
        let _ = writeln!(text, "skolem {f}/{n}");
    }
    Ok(Report {
        verdict: Verdict::Established,
        text,
        json: json!({
            "clauses": clauses_json(&problem.clauses),
            "goal_count": problem.goal_count,
            "skolems": problem.skolems.iter().map(|(f, n)| format!("{f}/{n}")).collect::<Vec<_>>(),
        }),
    })
}

fn trace_json(trace: &DerivationTrace) -> Value {
    serde_json::to_value(trace.records()).expect("trace records serialize")
}

fn prove(th: &TheoryFile, args: &ProveArgs, fuel: usize) -> Result<Report, InputError> {
    let goal = goal_formulas(th, Some(&args.goal))?;
    let mut axioms = th.axioms.clone();
    let (rs, mode) = if args.axiomatize {
        axioms.extend(rules_to_axioms(&th.rewrite_system(), &th.signature));
        (RewriteSystem::default(), ProverMode::Resolution)
    } else {
        (th.rewrite_system(), args.mode)
    };
    let problem = clausal_form(&axioms, &goal);
    let limits = SaturationLimits {
        max_clauses: args.max_clauses,
        max_iterations: args.max_iterations,
        depth: args.depth,
        fuel,
    };
    let options =
        SaturationOptions { subsumption: !args.no_subsumption, tautology_deletion: !args.no_tautology_deletion };
    let run = saturate_with(&problem.clauses, &rs, mode, &limits, &options);
    let mut text = String::new();
    if args.axiomatize && args.mode != ProverMode::Resolution {
        let _ = writeln!(text, "note: --axiomatize runs plain resolution, not {}", args.mode);
    }
    let (verdict, json) = match &run.outcome {
        Outcome::Refuted(trace) => {
            let _ = writeln!(text, "Refuted after {} iteration(s)", run.iterations);
            let _ = write!(text, "{trace}");
            (Verdict::Established, json!({ "verdict": "Refuted", "trace": trace_json(trace) }))
        }
        Outcome::Saturated(clauses) => {
            let _ = writeln!(text, "Saturated after {} iteration(s) with {} clause(s)", run.iterations, clauses.len());
            for c in clauses {
                let _ = writeln!(text, "  {c}");
            }
            (Verdict::NotEstablished, json!({ "verdict": "Saturated", "clauses": clauses_json(clauses) }))
        }
        Outcome::LimitExceeded(kind) => {
            let _ = writeln!(text, "LimitExceeded: {kind} after {} iteration(s)", run.iterations);
            (Verdict::LimitExceeded, json!({ "verdict": "LimitExceeded", "limit": kind.to_string() }))
        }
    };
    let mut json = json;
    json["mode"] = json!(mode.name());
    json["iterations"] = json!(run.iterations);
    Ok(Report { verdict, text, json })
}

fn read_proof(path: &Path) -> Result<ProofNode, InputError> {
    let text = fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    if text.trim_start().starts_with('{') {
        let record: ProofRecord =
            serde_json::from_str(&text).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
        ProofNode::try_from(&record).map_err(|e| InputError(format!("{}: {e}", path.display())))
    } else {
        parse_proof(&text).map_err(|e| InputError(format!("{}:{e}", path.display())))
    }
}

fn check(th: &TheoryFile, p: &ProofNode, require_cut_free: bool, fuel: usize) -> Report {
    let result = check_proof(p, &th.rewrite_system(), fuel);
    let cut = uses_cut(p);
    let (verdict, label) = match &result {
        CheckResult::Valid if cut && require_cut_free => (Verdict::NotEstablished, "Valid-but-cut-bearing"),
        CheckResult::Valid => (Verdict::Established, "Valid"),
        CheckResult::Invalid { .. } => (Verdict::NotEstablished, "Invalid"),
    };
    let mut text = match &result {
        CheckResult::Valid => format!("{label}\n"),
        invalid => format!("{invalid}\n"),
    };
    let _ = writeln!(text, "{} node(s), {}", p.size(), if cut { "uses cut" } else { "cut-free" });
    let mut json = json!({ "verdict": label, "uses_cut": cut, "nodes": p.size() });
    if let CheckResult::Invalid { path, reason, detail } = &result {
        json["path"] = json!(path);
        json["reason"] = json!(reason);
        json["detail"] = json!(detail);
    }
    Report { verdict, text, json }
}
