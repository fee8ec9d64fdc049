use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

/// Interned-ish symbol name shared between terms.
pub type Name = Arc<str>;

/// Name of the zero constant used by numeral sugar.
pub const ZERO: &str = "0";
/// Name of the successor symbol used by numeral sugar.
pub const SUCC: &str = "s";

/// A term variable. Variables are written with an uppercase initial.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(Name);

impl Var {
    pub fn new(name: impl AsRef<str>) -> Self {
        Var(Arc::from(name.as_ref()))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Path from the root of a term: each entry selects an argument.
pub type Position = Vec<usize>;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Term {
    Var(Var),
    App(Name, Vec<Term>),
}

impl Term {
    pub fn var(name: impl AsRef<str>) -> Term {
        Term::Var(Var::new(name))
    }

    pub fn constant(name: impl AsRef<str>) -> Term {
        Term::App(Arc::from(name.as_ref()), Vec::new())
    }

    pub fn app(name: impl AsRef<str>, args: Vec<Term>) -> Term {
        Term::App(Arc::from(name.as_ref()), args)
    }

    /// Peano encoding `s(...s(0))` of `n`.
    pub fn numeral(n: u64) -> Term {
        let mut t = Term::constant(ZERO);
        for _ in 0..n {
            t = Term::app(SUCC, vec![t]);
        }
        t
    }

    /// Inverse of [`Term::numeral`].
    pub fn as_numeral(&self) -> Option<u64> {
        let mut n = 0u64;
        let mut cur = self;
        loop {
            match cur {
                Term::App(f, args) if &**f == ZERO && args.is_empty() => return Some(n),
                Term::App(f, args) if &**f == SUCC && args.len() == 1 => {
                    n += 1;
                    cur = &args[0];
                }
                _ => return None,
            }
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Term::Var(v) => Some(v),
            Term::App(..) => None,
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn occurs(&self, v: &Var) -> bool {
        match self {
            Term::Var(w) => w == v,
            Term::App(_, args) => args.iter().any(|a| a.occurs(v)),
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    /// Number of symbol occurrences (variables count as one).
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    pub fn subterm(&self, pos: &[usize]) -> Option<&Term> {
        let mut cur = self;
        for &i in pos {
            match cur {
                Term::App(_, args) => cur = args.get(i)?,
                Term::Var(_) => return None,
            }
        }
        Some(cur)
    }

    /// Copy of `self` with the subterm at `pos` replaced. Panics on an invalid position.
    pub fn replace_at(&self, pos: &[usize], new: Term) -> Term {
        match pos.split_first() {
            None => new,
            Some((&i, rest)) => match self {
                Term::App(f, args) => {
                    assert!(i < args.len(), "position {pos:?} leaves the term");
                    let mut new = Some(new);
                    let args = args
                        .iter()
                        .enumerate()
                        .map(|(k, a)| match new.take_if(|_| k == i) {
                            Some(n) => a.replace_at(rest, n),
                            None => a.clone(),
                        })
                        .collect();
                    Term::App(f.clone(), args)
                }
                Term::Var(_) => panic!("position {pos:?} runs through a variable"),
            },
        }
    }

    /// All positions in pre-order (parents before children, left to right).
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.walk_positions(&mut path, &mut out, false);
        out
    }

    /// Positions of non-variable subterms in pre-order.
    pub fn nonvar_positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        let mut path = Vec::new();
        self.walk_positions(&mut path, &mut out, true);
        out
    }

    fn walk_positions(&self, path: &mut Position, out: &mut Vec<Position>, skip_vars: bool) {
        match self {
            Term::Var(_) => {
                if !skip_vars {
                    out.push(path.clone());
                }
            }
            Term::App(_, args) => {
                out.push(path.clone());
                for (i, a) in args.iter().enumerate() {
                    path.push(i);
                    a.walk_positions(path, out, skip_vars);
                    path.pop();
                }
            }
        }
    }

    /// Function symbols with their arities, in first-occurrence order.
    pub fn collect_symbols(&self, out: &mut Vec<(Name, usize)>) {
        if let Term::App(f, args) = self {
            if !out.iter().any(|(g, n)| g == f && *n == args.len()) {
                out.push((f.clone(), args.len()));
            }
            args.iter().for_each(|a| a.collect_symbols(out));
        }
    }

    /// Renames variables through `map`; unmapped variables are kept.
    pub fn rename(&self, map: &dyn Fn(&Var) -> Option<Var>) -> Term {
        match self {
            Term::Var(v) => Term::Var(map(v).unwrap_or_else(|| v.clone())),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.rename(map)).collect()),
        }
    }
}

/// A variable named after `base` that is not in `avoid`.
pub fn fresh_var(base: &Var, avoid: &BTreeSet<Var>) -> Var {
    if !avoid.contains(base) {
        return base.clone();
    }
    let stem = base.name();
    (1..).map(|i| Var::new(format!("{stem}_{i}"))).find(|v| !avoid.contains(v)).expect("unbounded supply of names")
}
