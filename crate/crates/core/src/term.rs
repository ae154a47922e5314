//! Term language shared by every part of the solver.
//!
//! Sets are built from `{}` and the extensional constructor `{E/C}`, which
//! denotes `{E} ∪ C`. A set literal with several elements is stored as a chain
//! of constructors; `{a,b/X}` is `{a/{b/X}}` internally.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

/// A logic variable. Identity is the numeric id; the name is only used for
/// display.
#[derive(Clone)]
pub struct Var {
    id: u32,
    name: Arc<str>,
}

impl Var {
    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Same variable shown under another name.
    pub fn with_name(&self, name: &str) -> Var {
        Var {
            id: self.id,
            name: Arc::from(name),
        }
    }
}

impl PartialEq for Var {
    fn eq(&self, other: &Self) -> bool {
        self.id == other.id
    }
}

impl Eq for Var {}

impl std::hash::Hash for Var {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.id.hash(state);
    }
}

impl PartialOrd for Var {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Var {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.id.cmp(&other.id)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}#{}", self.name, self.id)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Neg,
}

impl ArithOp {
    pub fn symbol(self) -> &'static str {
        match self {
            ArithOp::Add => "+",
            ArithOp::Sub | ArithOp::Neg => "-",
            ArithOp::Mul => "*",
            ArithOp::Div => "div",
            ArithOp::Mod => "mod",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Var),
    Atom(Arc<str>),
    /// A constant of a basic type, written `type?payload`.
    Typed(Arc<str>, Arc<str>),
    Int(i64),
    /// Integer expression. Inert everywhere except in arithmetic constraints.
    Arith(ArithOp, Vec<Term>),
    Tuple(Vec<Term>),
    Empty,
    Cons(Box<Term>, Box<Term>),
    Interval(Box<Term>, Box<Term>),
    Cp(Box<Term>, Box<Term>),
}

impl Term {
    pub fn atom(name: &str) -> Term {
        Term::Atom(Arc::from(name))
    }

    pub fn typed(ty: &str, payload: &str) -> Term {
        Term::Typed(Arc::from(ty), Arc::from(payload))
    }

    pub fn pair(a: Term, b: Term) -> Term {
        Term::Tuple(vec![a, b])
    }

    pub fn cons(elem: Term, rest: Term) -> Term {
        Term::Cons(Box::new(elem), Box::new(rest))
    }

    pub fn interval(lo: Term, hi: Term) -> Term {
        Term::Interval(Box::new(lo), Box::new(hi))
    }

    pub fn cp(a: Term, b: Term) -> Term {
        Term::Cp(Box::new(a), Box::new(b))
    }

    pub fn arith(op: ArithOp, args: Vec<Term>) -> Term {
        Term::Arith(op, args)
    }

    /// Builds `{e1,...,en/tail}` as a chain of constructors.
    pub fn set_with_tail<I>(elems: I, tail: Term) -> Term
    where
        I: IntoIterator<Item = Term>,
        I::IntoIter: DoubleEndedIterator,
    {
        elems
            .into_iter()
            .rev()
            .fold(tail, |acc, e| Term::cons(e, acc))
    }

    pub fn set<I>(elems: I) -> Term
    where
        I: IntoIterator<Item = Term>,
        I::IntoIter: DoubleEndedIterator,
    {
        Term::set_with_tail(elems, Term::Empty)
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Term::Var(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    /// True for every constructor that denotes a set.
    pub fn is_set_term(&self) -> bool {
        matches!(
            self,
            Term::Empty | Term::Cons(..) | Term::Interval(..) | Term::Cp(..)
        )
    }

    /// Splits a constructor chain into its elements and its final tail.
    pub fn set_parts(&self) -> (Vec<&Term>, &Term) {
        let mut elems = Vec::new();
        let mut cur = self;
        while let Term::Cons(e, rest) = cur {
            elems.push(e.as_ref());
            cur = rest.as_ref();
        }
        (elems, cur)
    }

    /// Final tail of a constructor chain (the term itself when it is not a
    /// constructor).
    pub fn set_tail(&self) -> &Term {
        let mut cur = self;
        while let Term::Cons(_, rest) = cur {
            cur = rest;
        }
        cur
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Atom(_) | Term::Typed(..) | Term::Int(_) | Term::Empty => true,
            Term::Arith(_, args) | Term::Tuple(args) => args.iter().all(Term::is_ground),
            Term::Cons(a, b) | Term::Interval(a, b) | Term::Cp(a, b) => {
                a.is_ground() && b.is_ground()
            }
        }
    }

    pub fn visit_vars<'a>(&'a self, f: &mut dyn FnMut(&'a Var)) {
        match self {
            Term::Var(v) => f(v),
            Term::Atom(_) | Term::Typed(..) | Term::Int(_) | Term::Empty => {}
            Term::Arith(_, args) | Term::Tuple(args) => {
                for a in args {
                    a.visit_vars(f);
                }
            }
            Term::Cons(a, b) | Term::Interval(a, b) | Term::Cp(a, b) => {
                a.visit_vars(f);
                b.visit_vars(f);
            }
        }
    }

    /// Variables in order of first occurrence.
    pub fn vars(&self) -> Vec<Var> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        self.visit_vars(&mut |v| {
            if seen.insert(v.id) {
                out.push(v.clone());
            }
        });
        out
    }

    pub fn contains_var(&self, var: &Var) -> bool {
        let mut found = false;
        self.visit_vars(&mut |v| found |= v == var);
        found
    }

    /// True when `var` occurs somewhere other than as the final tail of the
    /// top-level constructor chain.
    pub fn occurs_in_element(&self, var: &Var) -> bool {
        match self {
            Term::Cons(_, _) => {
                let (elems, tail) = self.set_parts();
                elems.iter().any(|e| e.contains_var(var))
                    || (!tail.is_var() && tail.contains_var(var))
            }
            _ => self.contains_var(var),
        }
    }

    pub fn map_vars(&self, f: &mut dyn FnMut(&Var) -> Option<Term>) -> Term {
        match self {
            Term::Var(v) => f(v).unwrap_or_else(|| self.clone()),
            Term::Atom(_) | Term::Typed(..) | Term::Int(_) | Term::Empty => self.clone(),
            Term::Arith(op, args) => {
                Term::Arith(*op, args.iter().map(|a| a.map_vars(f)).collect())
            }
            Term::Tuple(args) => Term::Tuple(args.iter().map(|a| a.map_vars(f)).collect()),
            Term::Cons(a, b) => Term::cons(a.map_vars(f), b.map_vars(f)),
            Term::Interval(a, b) => Term::interval(a.map_vars(f), b.map_vars(f)),
            Term::Cp(a, b) => Term::cp(a.map_vars(f), b.map_vars(f)),
        }
    }
}

/// Variable bindings. Bindings may refer to other bound variables; `apply`
/// resolves chains fully, so applying the result again is a no-op.
#[derive(Clone, Debug, Default)]
pub struct Substitution {
    bindings: HashMap<u32, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn bind(&mut self, var: &Var, term: Term) {
        self.bindings.insert(var.id, term);
    }

    pub fn bound_terms(&self) -> impl Iterator<Item = &Term> {
        self.bindings.values()
    }

    pub fn get(&self, var: &Var) -> Option<&Term> {
        self.bindings.get(&var.id)
    }

    pub fn is_bound(&self, var: &Var) -> bool {
        self.bindings.contains_key(&var.id)
    }

    /// Follows variable-to-variable bindings at the top of the term only.
    pub fn walk<'a>(&'a self, term: &'a Term) -> &'a Term {
        let mut cur = term;
        while let Term::Var(v) = cur {
            match self.bindings.get(&v.id) {
                Some(t) => cur = t,
                None => break,
            }
        }
        cur
    }

    pub fn apply(&self, term: &Term) -> Term {
        if self.bindings.is_empty() {
            return term.clone();
        }
        term.map_vars(&mut |v| self.bindings.get(&v.id).map(|t| self.apply(t)))
    }
}

/// Session-wide variable registry. Hands out ids and guarantees that
/// generated names never clash with names seen by the parser.
#[derive(Debug, Default)]
pub struct VarGen {
    next_id: u32,
    next_fresh: u32,
    used_names: BTreeSet<String>,
}

impl VarGen {
    pub fn new() -> Self {
        Self::default()
    }

    /// Allocates a variable carrying a user-visible name.
    pub fn named(&mut self, name: &str) -> Var {
        self.used_names.insert(name.to_string());
        let id = self.next_id;
        self.next_id += 1;
        Var {
            id,
            name: Arc::from(name),
        }
    }

    /// Returns a variable named `_<hint><k>` distinct from every name
    /// produced or parsed so far.
    pub fn fresh(&mut self, hint: &str) -> Var {
        loop {
            self.next_fresh += 1;
            let name = format!("_{}{}", hint, self.next_fresh);
            if !self.used_names.contains(&name) {
                return self.named(&name);
            }
        }
    }

    pub fn fresh_term(&mut self) -> Term {
        Term::Var(self.fresh("N"))
    }

    /// Copy of `var` with a new identity and the same display name.
    pub fn rename(&mut self, var: &Var) -> Var {
        let id = self.next_id;
        self.next_id += 1;
        Var {
            id,
            name: var.name.clone(),
        }
    }
}
