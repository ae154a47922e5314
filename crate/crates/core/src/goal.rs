//! Constraints, goals and clause definitions.

use std::collections::HashSet;
use std::sync::Arc;

use crate::term::{Term, Var};
use crate::types::TypeExpr;

macro_rules! symbols {
    ($( $variant:ident => $name:literal / $arity:literal ),* $(,)?) => {
        /// Every predicate symbol the solver understands.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum Sym {
            $( $variant, )*
        }

        impl Sym {
            pub const ALL: &'static [Sym] = &[$( Sym::$variant, )*];

            pub fn name(self) -> &'static str {
                match self {
                    $( Sym::$variant => $name, )*
                }
            }

            pub fn arity(self) -> usize {
                match self {
                    $( Sym::$variant => $arity, )*
                }
            }
        }
    };
}

symbols! {
    Eq => "=" / 2,
    Neq => "neq" / 2,
    In => "in" / 2,
    Nin => "nin" / 2,
    Set => "set" / 1,
    Un => "un" / 3,
    Nun => "nun" / 3,
    Inters => "inters" / 3,
    Ninters => "ninters" / 3,
    Diff => "diff" / 3,
    Ndiff => "ndiff" / 3,
    Subset => "subset" / 2,
    Nsubset => "nsubset" / 2,
    Ssubset => "ssubset" / 2,
    Disj => "disj" / 2,
    Ndisj => "ndisj" / 2,
    Size => "size" / 2,
    Rel => "rel" / 1,
    Nrel => "nrel" / 1,
    Pfun => "pfun" / 1,
    Npfun => "npfun" / 1,
    Apply => "apply" / 3,
    Napply => "napply" / 3,
    ApplyTo => "applyTo" / 3,
    Dom => "dom" / 2,
    Ndom => "ndom" / 2,
    Ran => "ran" / 2,
    Nran => "nran" / 2,
    Comp => "comp" / 3,
    Ncomp => "ncomp" / 3,
    Inv => "inv" / 2,
    Ninv => "ninv" / 2,
    Dres => "dres" / 3,
    Ndres => "ndres" / 3,
    Dares => "dares" / 3,
    Ndares => "ndares" / 3,
    Rres => "rres" / 3,
    Nrres => "nrres" / 3,
    Rares => "rares" / 3,
    Nrares => "nrares" / 3,
    Oplus => "oplus" / 3,
    Noplus => "noplus" / 3,
    Ring => "ring" / 3,
    Nring => "nring" / 3,
    Is => "is" / 2,
    Le => "=<" / 2,
    Lt => "<" / 2,
    Ge => ">=" / 2,
    Gt => ">" / 2,
    Foreach => "foreach" / 2,
    Slist => "slist" / 1,
    Head => "head" / 2,
    Tail => "tail" / 2,
    Last => "last" / 2,
    Front => "front" / 2,
    Add => "add" / 3,
    Concat => "concat" / 3,
    Filter => "filter" / 3,
    Extract => "extract" / 3,
    // Internal symbols produced by rewriting; never parsed.
    Npair => "npair" / 1,
    CompImg => "compimg" / 4,
}

impl Sym {
    /// Symbols written infix in source and answers.
    pub fn is_infix(self) -> bool {
        matches!(
            self,
            Sym::Eq | Sym::Neq | Sym::In | Sym::Nin | Sym::Is | Sym::Le | Sym::Lt | Sym::Ge | Sym::Gt
        )
    }

    pub fn is_internal(self) -> bool {
        matches!(
            self,
            Sym::Npair | Sym::CompImg
        )
    }

    pub fn is_arith(self) -> bool {
        matches!(self, Sym::Is | Sym::Le | Sym::Lt | Sym::Ge | Sym::Gt)
    }

    pub fn is_seq(self) -> bool {
        matches!(
            self,
            Sym::Slist
                | Sym::Head
                | Sym::Tail
                | Sym::Last
                | Sym::Front
                | Sym::Add
                | Sym::Concat
                | Sym::Filter
                | Sym::Extract
        )
    }

    /// Looks up a prefix-form builtin by name and arity.
    pub fn from_prefix(name: &str, arity: usize) -> Option<Sym> {
        Sym::ALL
            .iter()
            .copied()
            .find(|s| !s.is_infix() && !s.is_internal() && s.name() == name && s.arity() == arity)
    }

    pub fn is_prefix_name(name: &str) -> bool {
        Sym::ALL
            .iter()
            .any(|s| !s.is_infix() && !s.is_internal() && s.name() == name)
    }

    /// Argument positions that must hold relations for the constraint to be
    /// true.
    pub fn relation_positions(self) -> &'static [usize] {
        use Sym::*;
        match self {
            Rel | Pfun | Dom | Ran | Inv | Rres | Rares | Ring => &[0],
            Comp | Oplus => &[0, 1],
            Dres | Dares => &[1],
            _ => &[],
        }
    }

    /// The paired complementary symbol, when the language defines one.
    pub fn complement(self) -> Option<Sym> {
        use Sym::*;
        let pairs: &[(Sym, Sym)] = &[
            (Eq, Neq),
            (In, Nin),
            (Un, Nun),
            (Inters, Ninters),
            (Diff, Ndiff),
            (Subset, Nsubset),
            (Disj, Ndisj),
            (Rel, Nrel),
            (Pfun, Npfun),
            (Apply, Napply),
            (Dom, Ndom),
            (Ran, Nran),
            (Comp, Ncomp),
            (Inv, Ninv),
            (Dres, Ndres),
            (Dares, Ndares),
            (Rres, Nrres),
            (Rares, Nrares),
            (Oplus, Noplus),
            (Ring, Nring),
            (Le, Gt),
            (Lt, Ge),
        ];
        pairs.iter().find_map(|&(a, b)| {
            if a == self {
                Some(b)
            } else if b == self {
                Some(a)
            } else {
                None
            }
        })
    }

    /// Number of leading arguments that functionally determine the rest,
    /// for symbols whose last argument is a function of the others.
    pub fn functional_inputs(self) -> Option<usize> {
        use Sym::*;
        match self {
            Un | Inters | Diff | Comp | Dres | Dares | Rres | Rares | Oplus | Ring => Some(2),
            Dom | Ran | Inv | Size => Some(1),
            CompImg => Some(3),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub sym: Sym,
    pub args: Vec<Term>,
    /// Body of a `foreach`; `args` then holds the bound pattern and the range.
    pub body: Option<Arc<Goal>>,
}

impl Constraint {
    pub fn new(sym: Sym, args: Vec<Term>) -> Self {
        Constraint {
            sym,
            args,
            body: None,
        }
    }

    pub fn foreach(pattern: Term, range: Term, body: Goal) -> Self {
        Constraint {
            sym: Sym::Foreach,
            args: vec![pattern, range],
            body: Some(Arc::new(body)),
        }
    }

    pub fn map_vars(&self, f: &mut dyn FnMut(&Var) -> Option<Term>) -> Constraint {
        Constraint {
            sym: self.sym,
            args: self.args.iter().map(|a| a.map_vars(f)).collect(),
            body: self.body.as_ref().map(|b| Arc::new(b.map_vars(f))),
        }
    }

    pub fn visit_vars<'a>(&'a self, f: &mut dyn FnMut(&'a Var)) {
        for a in &self.args {
            a.visit_vars(f);
        }
        if let Some(b) = &self.body {
            b.visit_vars(f);
        }
    }

    pub fn contains_var(&self, var: &Var) -> bool {
        let mut found = false;
        self.visit_vars(&mut |v| found |= v == var);
        found
    }

    pub fn is_ground(&self) -> bool {
        let mut ground = true;
        self.visit_vars(&mut |_| ground = false);
        ground
    }

    /// Complementary constraint, if the symbol has one.
    pub fn negated(&self) -> Option<Constraint> {
        self.sym.complement().map(|sym| Constraint {
            sym,
            args: self.args.clone(),
            body: None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Goal {
    True,
    Conj(Box<Goal>, Box<Goal>),
    Disj(Box<Goal>, Box<Goal>),
    Constraint(Constraint),
    Call { name: Arc<str>, args: Vec<Term> },
    /// `dec(V,t)` / `dec([V1,...],t)`: a type declaration, true at run time.
    Dec { vars: Vec<Term>, ty: TypeExpr },
}

impl Goal {
    pub fn constraint(sym: Sym, args: Vec<Term>) -> Goal {
        Goal::Constraint(Constraint::new(sym, args))
    }

    pub fn eq(a: Term, b: Term) -> Goal {
        Goal::constraint(Sym::Eq, vec![a, b])
    }

    pub fn call(name: &str, args: Vec<Term>) -> Goal {
        Goal::Call {
            name: Arc::from(name),
            args,
        }
    }

    pub fn and(self, other: Goal) -> Goal {
        match (self, other) {
            (Goal::True, g) | (g, Goal::True) => g,
            (a, b) => Goal::Conj(Box::new(a), Box::new(b)),
        }
    }

    pub fn or(self, other: Goal) -> Goal {
        Goal::Disj(Box::new(self), Box::new(other))
    }

    /// Right-nested conjunction of `goals`; `True` when empty.
    pub fn all<I: IntoIterator<Item = Goal>>(goals: I) -> Goal {
        let mut v: Vec<Goal> = goals.into_iter().collect();
        let mut acc = match v.pop() {
            Some(g) => g,
            None => return Goal::True,
        };
        while let Some(g) = v.pop() {
            acc = Goal::Conj(Box::new(g), Box::new(acc));
        }
        acc
    }

    pub fn any<I: IntoIterator<Item = Goal>>(goals: I) -> Option<Goal> {
        let mut v: Vec<Goal> = goals.into_iter().collect();
        let mut acc = v.pop()?;
        while let Some(g) = v.pop() {
            acc = Goal::Disj(Box::new(g), Box::new(acc));
        }
        Some(acc)
    }

    pub fn map_vars(&self, f: &mut dyn FnMut(&Var) -> Option<Term>) -> Goal {
        match self {
            Goal::True => Goal::True,
            Goal::Conj(a, b) => Goal::Conj(Box::new(a.map_vars(f)), Box::new(b.map_vars(f))),
            Goal::Disj(a, b) => Goal::Disj(Box::new(a.map_vars(f)), Box::new(b.map_vars(f))),
            Goal::Constraint(c) => Goal::Constraint(c.map_vars(f)),
            Goal::Call { name, args } => Goal::Call {
                name: name.clone(),
                args: args.iter().map(|a| a.map_vars(f)).collect(),
            },
            Goal::Dec { vars, ty } => Goal::Dec {
                vars: vars.iter().map(|a| a.map_vars(f)).collect(),
                ty: ty.clone(),
            },
        }
    }

    pub fn visit_vars<'a>(&'a self, f: &mut dyn FnMut(&'a Var)) {
        match self {
            Goal::True => {}
            Goal::Conj(a, b) | Goal::Disj(a, b) => {
                a.visit_vars(f);
                b.visit_vars(f);
            }
            Goal::Constraint(c) => c.visit_vars(f),
            Goal::Call { args, .. } | Goal::Dec { vars: args, .. } => {
                for a in args {
                    a.visit_vars(f);
                }
            }
        }
    }

    /// Variables in order of first occurrence.
    pub fn vars(&self) -> Vec<Var> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        self.visit_vars(&mut |v| {
            if seen.insert(v.id()) {
                out.push(v.clone());
            }
        });
        out
    }

    /// Leaves of a conjunction tree, left to right.
    pub fn conjuncts(&self) -> Vec<&Goal> {
        let mut out = Vec::new();
        fn walk<'a>(g: &'a Goal, out: &mut Vec<&'a Goal>) {
            match g {
                Goal::Conj(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                Goal::True => {}
                other => out.push(other),
            }
        }
        walk(self, &mut out);
        out
    }
}

/// One clause: `name(p1,...,pn) :- body.` Head arguments may be arbitrary
/// terms (as in `sum_ad({},0).`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub name: Arc<str>,
    pub params: Vec<Term>,
    pub body: Goal,
}

impl Clause {
    pub fn arity(&self) -> usize {
        self.params.len()
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        let mut push = |v: &Var| {
            if seen.insert(v.id()) {
                out.push(v.clone());
            }
        };
        for p in &self.params {
            p.visit_vars(&mut push);
        }
        self.body.visit_vars(&mut push);
        out
    }
}
