//! Optional static types: synonyms, clause signatures, `dec` declarations
//! and checking of clauses and goals.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use crate::goal::{Clause, Constraint, Goal, Sym};
use crate::term::{Term, Var};

/// A type as written in declarations. Lowercase names stay unresolved
/// (`Named`) until the checker decides whether they are synonyms or basic
/// types.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TypeExpr {
    Int,
    Named(Arc<str>),
    Product(Vec<TypeExpr>),
    SetOf(Box<TypeExpr>),
}

impl TypeExpr {
    pub fn named(name: &str) -> TypeExpr {
        TypeExpr::Named(Arc::from(name))
    }

    pub fn set_of(t: TypeExpr) -> TypeExpr {
        TypeExpr::SetOf(Box::new(t))
    }
}

impl fmt::Display for TypeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeExpr::Int => write!(f, "int"),
            TypeExpr::Named(n) => write!(f, "{}", n),
            TypeExpr::Product(ts) => {
                write!(f, "[")?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", t)?;
                }
                write!(f, "]")
            }
            TypeExpr::SetOf(t) => write!(f, "stype({})", t),
        }
    }
}

/// Declared parameter types of a clause.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub name: Arc<str>,
    pub params: Vec<TypeExpr>,
}

/// Resolved type with inference variables.
#[derive(Clone, Debug, PartialEq, Eq)]
enum Ty {
    Int,
    Basic(Arc<str>),
    Product(Vec<Ty>),
    Set(Box<Ty>),
    Var(u32),
}

impl Ty {
    fn set(t: Ty) -> Ty {
        Ty::Set(Box::new(t))
    }

    fn pair(a: Ty, b: Ty) -> Ty {
        Ty::Product(vec![a, b])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypeError {
    NoDeclaration(String),
    WrongArguments { call: String, problems: Vec<String> },
    Mismatch { context: String, detail: String },
    BareAtom(String),
    ConflictingDeclaration(String),
    MissingSignature(String),
    ArityMismatch { name: String, declared: usize, defined: usize },
    UsedBeforeDefinition(String),
    SignatureAfterDefinition(String),
    DuplicateSignature(String),
    SynonymRedefinition(String),
    CyclicSynonym(String),
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("type error:")?;
        match self {
            TypeError::NoDeclaration(v) => write!(f, " variable {} has no type declaration", v),
            TypeError::WrongArguments { call, problems } => {
                write!(f, "\n  in {} arguments have the wrong type:", call)?;
                for p in problems {
                    write!(f, "\n    {}", p)?;
                }
                Ok(())
            }
            TypeError::Mismatch { context, detail } => write!(f, " {} in {}", detail, context),
            TypeError::BareAtom(a) => write!(
                f,
                " constant {} has no type (constants of a basic type t are written t?{})",
                a, a
            ),
            TypeError::ConflictingDeclaration(v) => {
                write!(f, " variable {} is declared with two different types", v)
            }
            TypeError::MissingSignature(c) => write!(f, " clause {} has no dec_p_type declaration", c),
            TypeError::ArityMismatch {
                name,
                declared,
                defined,
            } => write!(
                f,
                " dec_p_type for {} has {} parameters but the clause has {}",
                name, declared, defined
            ),
            TypeError::UsedBeforeDefinition(c) => write!(f, " clause {} is used before it is defined", c),
            TypeError::SignatureAfterDefinition(c) => {
                write!(f, " dec_p_type for {} comes after its definition", c)
            }
            TypeError::DuplicateSignature(c) => write!(f, " clause {} already has a dec_p_type", c),
            TypeError::SynonymRedefinition(n) => write!(f, " type {} is already defined", n),
            TypeError::CyclicSynonym(n) => write!(f, " type {} is defined in terms of itself", n),
        }
    }
}

impl std::error::Error for TypeError {}

/// Synonyms, clause signatures and the set of clauses defined so far.
#[derive(Clone, Debug, Default)]
pub struct TypeEnv {
    synonyms: HashMap<Arc<str>, TypeExpr>,
    synonym_order: Vec<Arc<str>>,
    signatures: HashMap<Arc<str>, Signature>,
    defined: HashSet<Arc<str>>,
}

impl TypeEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register_synonym(&mut self, name: &str, t: TypeExpr) -> Result<(), TypeError> {
        if name == "int" || self.synonyms.contains_key(name) {
            return Err(TypeError::SynonymRedefinition(name.to_string()));
        }
        let key: Arc<str> = Arc::from(name);
        self.synonyms.insert(key.clone(), t.clone());
        if let Err(e) = self.resolve(&t, &mut Vec::new()) {
            self.synonyms.remove(name);
            return Err(e);
        }
        self.synonym_order.push(key);
        Ok(())
    }

    pub fn register_signature(&mut self, sig: Signature) -> Result<(), TypeError> {
        if self.defined.contains(&sig.name) {
            return Err(TypeError::SignatureAfterDefinition(sig.name.to_string()));
        }
        if self.signatures.contains_key(&sig.name) {
            return Err(TypeError::DuplicateSignature(sig.name.to_string()));
        }
        for p in &sig.params {
            self.resolve(p, &mut Vec::new())?;
        }
        self.signatures.insert(sig.name.clone(), sig);
        Ok(())
    }

    pub fn signature(&self, name: &str) -> Option<&Signature> {
        self.signatures.get(name)
    }

    /// Records a clause as defined without checking it.
    pub fn note_clause(&mut self, clause: &Clause) {
        self.defined.insert(clause.name.clone());
    }

    /// Fully expanded form of a declared type.
    pub fn expand(&self, t: &TypeExpr) -> Result<TypeExpr, TypeError> {
        Ok(self.display_ty(&self.resolve(t, &mut Vec::new())?, false))
    }

    fn resolve(&self, t: &TypeExpr, visiting: &mut Vec<Arc<str>>) -> Result<Ty, TypeError> {
        Ok(match t {
            TypeExpr::Int => Ty::Int,
            TypeExpr::Named(n) => match self.synonyms.get(n) {
                Some(body) => {
                    if visiting.contains(n) {
                        return Err(TypeError::CyclicSynonym(n.to_string()));
                    }
                    visiting.push(n.clone());
                    let r = self.resolve(body, visiting)?;
                    visiting.pop();
                    r
                }
                None if &**n == "int" => Ty::Int,
                None => Ty::Basic(n.clone()),
            },
            TypeExpr::Product(ts) => Ty::Product(
                ts.iter()
                    .map(|t| self.resolve(t, visiting))
                    .collect::<Result<_, _>>()?,
            ),
            TypeExpr::SetOf(t) => Ty::set(self.resolve(t, visiting)?),
        })
    }

    /// Converts back for messages, naming a synonym when one matches.
    fn display_ty(&self, t: &Ty, use_synonyms: bool) -> TypeExpr {
        if use_synonyms {
            for name in &self.synonym_order {
                if let Ok(r) = self.resolve(&self.synonyms[name], &mut Vec::new()) {
                    if r == *t {
                        return TypeExpr::Named(name.clone());
                    }
                }
            }
        }
        match t {
            Ty::Int => TypeExpr::Int,
            Ty::Basic(n) => TypeExpr::Named(n.clone()),
            Ty::Product(ts) => TypeExpr::Product(ts.iter().map(|t| self.display_ty(t, use_synonyms)).collect()),
            Ty::Set(t) => TypeExpr::set_of(self.display_ty(t, use_synonyms)),
            Ty::Var(_) => TypeExpr::named("_"),
        }
    }

    /// Checks a clause against its signature and records it as defined.
    pub fn check_clause(&mut self, clause: &Clause) -> Result<(), TypeError> {
        let sig = self
            .signatures
            .get(&clause.name)
            .cloned()
            .ok_or_else(|| TypeError::MissingSignature(format!("{}/{}", clause.name, clause.arity())))?;
        if sig.params.len() != clause.arity() {
            return Err(TypeError::ArityMismatch {
                name: clause.name.to_string(),
                declared: sig.params.len(),
                defined: clause.arity(),
            });
        }
        let mut cx = Checker::new(self, Some(clause.name.clone()));
        cx.collect_decs(&clause.body)?;
        for (param, ty) in clause.params.iter().zip(&sig.params) {
            let expected = self.resolve(ty, &mut Vec::new())?;
            match param {
                Term::Var(v) if !cx.env.contains_key(&v.id()) => {
                    cx.env.insert(v.id(), expected);
                }
                _ => {
                    cx.open_vars = true;
                    let actual = cx.term(param)?;
                    cx.open_vars = false;
                    if !cx.unify(&actual, &expected) {
                        return Err(TypeError::Mismatch {
                            context: format!("clause {}", clause.name),
                            detail: format!(
                                "parameter {} is {} but should be {}",
                                param,
                                cx.show(&actual),
                                cx.show(&expected)
                            ),
                        });
                    }
                }
            }
        }
        cx.goal(&clause.body)?;
        self.defined.insert(clause.name.clone());
        Ok(())
    }

    /// Checks a goal; every variable needs a `dec` unless its name starts
    /// with `_`.
    pub fn check_goal(&self, goal: &Goal) -> Result<(), TypeError> {
        let mut cx = Checker::new(self, None);
        cx.collect_decs(goal)?;
        cx.goal(goal)
    }
}

struct Checker<'a> {
    types: &'a TypeEnv,
    current: Option<Arc<str>>,
    env: HashMap<u32, Ty>,
    subst: HashMap<u32, Ty>,
    next: u32,
    /// Undeclared variables get fresh types (clause head patterns).
    open_vars: bool,
}

impl<'a> Checker<'a> {
    fn new(types: &'a TypeEnv, current: Option<Arc<str>>) -> Self {
        Checker {
            types,
            current,
            env: HashMap::new(),
            subst: HashMap::new(),
            next: 0,
            open_vars: false,
        }
    }

    fn fresh(&mut self) -> Ty {
        self.next += 1;
        Ty::Var(self.next)
    }

    fn collect_decs(&mut self, g: &Goal) -> Result<(), TypeError> {
        match g {
            Goal::Conj(a, b) | Goal::Disj(a, b) => {
                self.collect_decs(a)?;
                self.collect_decs(b)
            }
            Goal::Dec { vars, ty } => {
                let t = self.types.resolve(ty, &mut Vec::new())?;
                for v in vars {
                    if let Term::Var(v) = v {
                        match self.env.get(&v.id()) {
                            Some(prev) if *prev != t => {
                                return Err(TypeError::ConflictingDeclaration(v.name().to_string()))
                            }
                            _ => {
                                self.env.insert(v.id(), t.clone());
                            }
                        }
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    fn walk(&self, t: &Ty) -> Ty {
        match t {
            Ty::Var(v) => match self.subst.get(v) {
                Some(b) => self.walk(b),
                None => t.clone(),
            },
            Ty::Product(ts) => Ty::Product(ts.iter().map(|t| self.walk(t)).collect()),
            Ty::Set(e) => Ty::set(self.walk(e)),
            _ => t.clone(),
        }
    }

    fn occurs(&self, v: u32, t: &Ty) -> bool {
        match self.walk(t) {
            Ty::Var(w) => v == w,
            Ty::Product(ts) => ts.iter().any(|t| self.occurs(v, t)),
            Ty::Set(e) => self.occurs(v, &e),
            _ => false,
        }
    }

    fn unify(&mut self, a: &Ty, b: &Ty) -> bool {
        let (a, b) = (self.walk(a), self.walk(b));
        match (&a, &b) {
            _ if a == b => true,
            (Ty::Var(v), t) | (t, Ty::Var(v)) => {
                if self.occurs(*v, t) {
                    return false;
                }
                self.subst.insert(*v, t.clone());
                true
            }
            (Ty::Product(xs), Ty::Product(ys)) => {
                xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| self.unify(x, y))
            }
            (Ty::Set(x), Ty::Set(y)) => self.unify(x, y),
            _ => false,
        }
    }

    fn show(&self, t: &Ty) -> String {
        self.types.display_ty(&self.walk(t), true).to_string()
    }

    fn var(&mut self, v: &Var) -> Result<Ty, TypeError> {
        if let Some(t) = self.env.get(&v.id()) {
            return Ok(t.clone());
        }
        if self.open_vars || v.name().starts_with('_') {
            let t = self.fresh();
            self.env.insert(v.id(), t.clone());
            return Ok(t);
        }
        Err(TypeError::NoDeclaration(v.name().to_string()))
    }

    fn term(&mut self, t: &Term) -> Result<Ty, TypeError> {
        let mismatch = |cx: &Self, what: &Term, got: &Ty, want: &Ty| TypeError::Mismatch {
            context: what.to_string(),
            detail: format!("{} but should be {}", cx.show(got), cx.show(want)),
        };
        Ok(match t {
            Term::Var(v) => self.var(v)?,
            Term::Int(_) => Ty::Int,
            Term::Atom(a) => return Err(TypeError::BareAtom(a.to_string())),
            Term::Typed(ty, _) => Ty::Basic(ty.clone()),
            Term::Arith(_, args) => {
                for a in args {
                    let at = self.term(a)?;
                    if !self.unify(&at, &Ty::Int) {
                        return Err(mismatch(self, t, &at, &Ty::Int));
                    }
                }
                Ty::Int
            }
            Term::Tuple(ts) => Ty::Product(ts.iter().map(|x| self.term(x)).collect::<Result<_, _>>()?),
            Term::Empty => {
                let e = self.fresh();
                Ty::set(e)
            }
            Term::Cons(e, rest) => {
                let et = self.term(e)?;
                let rt = self.term(rest)?;
                let want = Ty::set(et);
                if !self.unify(&rt, &want) {
                    return Err(mismatch(self, t, &rt, &want));
                }
                want
            }
            Term::Interval(a, b) => {
                for x in [a, b] {
                    let xt = self.term(x)?;
                    if !self.unify(&xt, &Ty::Int) {
                        return Err(mismatch(self, t, &xt, &Ty::Int));
                    }
                }
                Ty::set(Ty::Int)
            }
            Term::Cp(a, b) => {
                let (x, y) = (self.fresh(), self.fresh());
                for (s, e) in [(a, &x), (b, &y)] {
                    let st = self.term(s)?;
                    let want = Ty::set(e.clone());
                    if !self.unify(&st, &want) {
                        return Err(mismatch(self, t, &st, &want));
                    }
                }
                Ty::set(Ty::pair(x, y))
            }
        })
    }

    fn goal(&mut self, g: &Goal) -> Result<(), TypeError> {
        match g {
            Goal::True | Goal::Dec { .. } => Ok(()),
            Goal::Conj(a, b) | Goal::Disj(a, b) => {
                self.goal(a)?;
                self.goal(b)
            }
            Goal::Constraint(c) => self.constraint(c),
            Goal::Call { name, args } => self.call(name, args, g),
        }
    }

    fn call(&mut self, name: &Arc<str>, args: &[Term], g: &Goal) -> Result<(), TypeError> {
        let is_self = self.current.as_ref() == Some(name);
        if self.current.is_some() && !is_self && !self.types.defined.contains(name) {
            return Err(TypeError::UsedBeforeDefinition(format!("{}/{}", name, args.len())));
        }
        let sig = match self.types.signatures.get(name) {
            Some(s) => s.clone(),
            None => {
                return Err(TypeError::MissingSignature(format!("{}/{}", name, args.len())));
            }
        };
        if sig.params.len() != args.len() {
            return Err(TypeError::ArityMismatch {
                name: name.to_string(),
                declared: sig.params.len(),
                defined: args.len(),
            });
        }
        let mut problems = Vec::new();
        for (a, p) in args.iter().zip(&sig.params) {
            let want = self.types.resolve(p, &mut Vec::new())?;
            let got = self.term(a)?;
            let snapshot = self.subst.clone();
            if !self.unify(&got, &want) {
                self.subst = snapshot;
                problems.push(format!(
                    "{} is {} but should be {}",
                    a,
                    self.show(&got),
                    self.show(&want)
                ));
            }
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(TypeError::WrongArguments {
                call: g.to_string(),
                problems,
            })
        }
    }

    fn constraint(&mut self, c: &Constraint) -> Result<(), TypeError> {
        if c.sym == Sym::Foreach {
            let saved = self.open_vars;
            self.open_vars = true;
            let pt = self.term(&c.args[0])?;
            self.open_vars = saved;
            let at = self.term(&c.args[1])?;
            let want = Ty::set(pt);
            if !self.unify(&at, &want) {
                return Err(self.constraint_error(c));
            }
            if let Some(b) = &c.body {
                self.goal(b)?;
            }
            return Ok(());
        }
        let arg_types = c
            .args
            .iter()
            .map(|a| self.term(a))
            .collect::<Result<Vec<_>, _>>()?;
        let expected = self.signature_of(c.sym);
        let ok = arg_types
            .iter()
            .zip(&expected)
            .all(|(got, want)| self.unify(got, want));
        if ok {
            Ok(())
        } else {
            Err(self.constraint_error(c))
        }
    }

    fn constraint_error(&self, c: &Constraint) -> TypeError {
        let mut shown = Vec::new();
        for a in &c.args {
            if let Term::Var(v) = a {
                if let Some(t) = self.env.get(&v.id()) {
                    shown.push(format!("{} is {}", v.name(), self.show(t)));
                }
            }
        }
        TypeError::Mismatch {
            context: c.to_string(),
            detail: if shown.is_empty() {
                "arguments have incompatible types".to_string()
            } else {
                format!("arguments have incompatible types ({})", shown.join(", "))
            },
        }
    }

    /// Polymorphic argument types of a builtin, with fresh variables.
    fn signature_of(&mut self, sym: Sym) -> Vec<Ty> {
        use Sym::*;
        let (x, y, z) = (self.fresh(), self.fresh(), self.fresh());
        let s = |t: &Ty| Ty::set(t.clone());
        let rel = |a: &Ty, b: &Ty| Ty::set(Ty::pair(a.clone(), b.clone()));
        let sq = Ty::set(Ty::pair(Ty::Int, x.clone()));
        match sym {
            Eq | Neq => vec![x.clone(), x],
            In | Nin => vec![x.clone(), s(&x)],
            Set => vec![s(&x)],
            Un | Nun | Inters | Ninters | Diff | Ndiff => vec![s(&x), s(&x), s(&x)],
            Subset | Nsubset | Ssubset | Disj | Ndisj => vec![s(&x), s(&x)],
            Size => vec![s(&x), Ty::Int],
            Rel | Nrel | Pfun | Npfun => vec![rel(&x, &y)],
            Apply | Napply | ApplyTo => vec![rel(&x, &y), x, y],
            Dom | Ndom => vec![rel(&x, &y), s(&x)],
            Ran | Nran => vec![rel(&x, &y), s(&y)],
            Comp | Ncomp => vec![rel(&x, &y), rel(&y, &z), rel(&x, &z)],
            Inv | Ninv => vec![rel(&x, &y), rel(&y, &x)],
            Dres | Ndres | Dares | Ndares => vec![s(&x), rel(&x, &y), rel(&x, &y)],
            Rres | Nrres | Rares | Nrares => vec![rel(&x, &y), s(&y), rel(&x, &y)],
            Oplus | Noplus => vec![rel(&x, &y), rel(&x, &y), rel(&x, &y)],
            Ring | Nring => vec![rel(&x, &y), s(&x), s(&y)],
            Is | Le | Lt | Ge | Gt => vec![Ty::Int, Ty::Int],
            Slist => vec![sq],
            Head | Last => vec![sq, x],
            Tail | Front => vec![sq.clone(), sq],
            Add => vec![sq.clone(), x, sq],
            Concat => vec![sq.clone(), sq.clone(), sq],
            Filter => vec![s(&Ty::Int), sq.clone(), sq],
            Extract => vec![sq.clone(), s(&x), sq],
            Npair => vec![x],
            CompImg => vec![x.clone(), y.clone(), rel(&y, &z), rel(&x, &z)],
            Foreach => vec![],
        }
    }
}
