use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use super::formula::{Atom, Formula};
use super::term::{Name, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("symbol `{name}` declared with arity {declared}, redeclared with arity {found}")]
    ArityConflict { name: String, declared: usize, found: usize },
    #[error("undeclared {kind} symbol `{name}`")]
    Undeclared { kind: &'static str, name: String },
    #[error("`{name}` expects {expected} argument(s), got {found}")]
    WrongArity { name: String, expected: usize, found: usize },
}

/// Function and predicate symbols with fixed arities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    functions: BTreeMap<Name, usize>,
    predicates: BTreeMap<Name, usize>,
}

fn declare(table: &mut BTreeMap<Name, usize>, name: &str, arity: usize) -> Result<(), SignatureError> {
    match table.get(name) {
        Some(&declared) if declared != arity => {
            Err(SignatureError::ArityConflict { name: name.to_string(), declared, found: arity })
        }
        Some(_) => Ok(()),
        None => {
            table.insert(Arc::from(name), arity);
            Ok(())
        }
    }
}

impl Signature {
    pub fn new() -> Self {
        Signature::default()
    }

    pub fn declare_function(&mut self, name: &str, arity: usize) -> Result<(), SignatureError> {
        declare(&mut self.functions, name, arity)
    }

    pub fn declare_predicate(&mut self, name: &str, arity: usize) -> Result<(), SignatureError> {
        declare(&mut self.predicates, name, arity)
    }

    pub fn function_arity(&self, name: &str) -> Option<usize> {
        self.functions.get(name).copied()
    }

    pub fn predicate_arity(&self, name: &str) -> Option<usize> {
        self.predicates.get(name).copied()
    }

    pub fn functions(&self) -> impl Iterator<Item = (&Name, usize)> {
        self.functions.iter().map(|(n, a)| (n, *a))
    }

    pub fn predicates(&self) -> impl Iterator<Item = (&Name, usize)> {
        self.predicates.iter().map(|(n, a)| (n, *a))
    }

    pub fn check_term(&self, t: &Term) -> Result<(), SignatureError> {
        match t {
            Term::Var(_) => Ok(()),
            Term::App(f, args) => {
                let expected = self
                    .function_arity(f)
                    .ok_or_else(|| SignatureError::Undeclared { kind: "function", name: f.to_string() })?;
                if expected != args.len() {
                    return Err(SignatureError::WrongArity { name: f.to_string(), expected, found: args.len() });
                }
                args.iter().try_for_each(|a| self.check_term(a))
            }
        }
    }

    pub fn check_atom(&self, a: &Atom) -> Result<(), SignatureError> {
        let expected = self
            .predicate_arity(&a.pred)
            .ok_or_else(|| SignatureError::Undeclared { kind: "predicate", name: a.pred.to_string() })?;
        if expected != a.args.len() {
            return Err(SignatureError::WrongArity { name: a.pred.to_string(), expected, found: a.args.len() });
        }
        a.args.iter().try_for_each(|t| self.check_term(t))
    }

    pub fn check_formula(&self, f: &Formula) -> Result<(), SignatureError> {
        let mut result = Ok(());
        f.visit_atoms(&mut |a| {
            if result.is_ok() {
                result = self.check_atom(a);
            }
        });
        result
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arity_is_fixed_per_symbol() {
        let mut sig = Signature::new();
        sig.declare_function("plus", 2).unwrap();
        sig.declare_function("plus", 2).unwrap();
        assert!(matches!(sig.declare_function("plus", 1), Err(SignatureError::ArityConflict { .. })));
        // Separate namespaces.
        sig.declare_predicate("plus", 1).unwrap();
    }

    #[test]
    fn rejects_bad_applications() {
        let mut sig = Signature::new();
        sig.declare_function("f", 1).unwrap();
        sig.declare_predicate("P", 0).unwrap();
        assert!(sig.check_term(&Term::app("f", vec![Term::var("X")])).is_ok());
        assert!(sig.check_term(&Term::app("f", vec![])).is_err());
        assert!(sig.check_term(&Term::constant("g")).is_err());
        assert!(sig.check_formula(&Formula::prop("P")).is_ok());
        assert!(sig.check_formula(&Formula::atom("P", vec![Term::var("X")])).is_err());
    }
}
