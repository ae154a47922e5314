//! Constraint rewriting.
//!
//! Each rewrite step takes one constraint whose arguments have the current
//! substitution applied and returns an [`Outcome`]. Variable bindings are
//! made through [`Ctx::bind`], which wakes every stored residual constraint
//! that mentions the bound variable.

mod ground;
mod rels;
mod sets;
mod unify;

pub use ground::{canon, from_canon, may_unify, Canon};

use crate::arith::{self, Eval};
use crate::goal::{Constraint, Goal, Sym};
use crate::seq;
use crate::term::{Substitution, Term, Var, VarGen};

/// Bindings plus the constraints that could not be reduced further.
/// `posted` holds constraints added with [`Store::post`] that have not been
/// looked at yet.
#[derive(Clone, Debug, Default)]
pub struct Store {
    pub subst: Substitution,
    pub residual: Vec<Constraint>,
    pub posted: Vec<Constraint>,
}

impl Store {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a constraint without solving anything.
    pub fn post(&mut self, c: Constraint) {
        self.posted.push(c);
    }

    pub fn len(&self) -> usize {
        self.posted.len() + self.residual.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn apply(&self, t: &Term) -> Term {
        self.subst.apply(t)
    }

    pub fn apply_constraint(&self, c: &Constraint) -> Constraint {
        if self.subst.is_empty() {
            return c.clone();
        }
        c.map_vars(&mut |v| self.subst.get(v).map(|t| self.subst.apply(t)))
    }
}

#[derive(Debug)]
pub enum Outcome {
    Fail,
    Done,
    Goals(Vec<Goal>),
    Residual(Constraint),
    /// Keep the constraint and also solve the extra goals.
    ResidualWith(Constraint, Vec<Goal>),
    /// Alternatives, tried left to right.
    Branch(Vec<Vec<Goal>>),
}

impl Outcome {
    fn goals(gs: Vec<Goal>) -> Outcome {
        if gs.is_empty() {
            Outcome::Done
        } else {
            Outcome::Goals(gs)
        }
    }

    fn branch(mut alts: Vec<Vec<Goal>>) -> Outcome {
        match alts.len() {
            0 => Outcome::Fail,
            1 => Outcome::goals(alts.pop().unwrap()),
            _ => Outcome::Branch(alts),
        }
    }

    fn check(ok: bool) -> Outcome {
        if ok {
            Outcome::Done
        } else {
            Outcome::Fail
        }
    }
}

pub struct Ctx<'a> {
    pub store: &'a mut Store,
    pub gen: &'a mut VarGen,
    /// Residual constraints woken by bindings made during the step.
    pub woken: Vec<Constraint>,
}

impl<'a> Ctx<'a> {
    pub fn new(store: &'a mut Store, gen: &'a mut VarGen) -> Self {
        Ctx {
            store,
            gen,
            woken: Vec::new(),
        }
    }

    pub fn fresh(&mut self) -> Term {
        self.gen.fresh_term()
    }

    pub fn bind(&mut self, var: &Var, t: Term) {
        self.store.subst.bind(var, t);
        let (woken, kept): (Vec<_>, Vec<_>) = std::mem::take(&mut self.store.residual)
            .into_iter()
            .partition(|c| c.contains_var(var));
        self.store.residual = kept;
        self.woken.extend(woken);
    }
}

pub(crate) fn c(sym: Sym, args: Vec<Term>) -> Goal {
    Goal::constraint(sym, args)
}

pub(crate) fn eq(a: Term, b: Term) -> Goal {
    Goal::eq(a, b)
}

/// Rewrites one constraint. `con` must already have the substitution applied.
pub fn rewrite(ctx: &mut Ctx, con: Constraint) -> Outcome {
    let args = &con.args;
    match con.sym {
        Sym::Eq => unify::eq(ctx, &args[0], &args[1]),
        Sym::Neq => unify::neq(ctx, &args[0], &args[1], &con),
        Sym::In => sets::member(ctx, &args[0], &args[1]),
        Sym::Nin => sets::not_member(ctx, &args[0], &args[1]),
        Sym::Npair => match &args[0] {
            Term::Tuple(ts) if ts.len() == 2 => Outcome::Fail,
            Term::Var(_) => Outcome::Residual(con),
            _ => Outcome::Done,
        },
        Sym::Set => match &args[0] {
            Term::Var(_) => Outcome::Residual(con),
            t => Outcome::check(t.is_set_term()),
        },
        Sym::Is => arith_is(&con),
        Sym::Le | Sym::Lt | Sym::Ge | Sym::Gt => arith_compare(&con),
        Sym::Foreach => foreach(ctx, con),
        s if s.is_seq() => seq::rewrite(ctx, con),
        Sym::Un
        | Sym::Nun
        | Sym::Inters
        | Sym::Ninters
        | Sym::Diff
        | Sym::Ndiff
        | Sym::Subset
        | Sym::Nsubset
        | Sym::Ssubset
        | Sym::Disj
        | Sym::Ndisj
        | Sym::Size => sets::rewrite(ctx, con),
        _ => rels::rewrite(ctx, con),
    }
}

/// Set positions that hold a ground interval or a product of closed sets are
/// replaced by the explicit set they denote. Returns `None` when some set
/// argument is not a set at all.
pub(crate) fn expand_sets(args: &[Term], positions: &[usize]) -> Option<Vec<Term>> {
    let mut out = args.to_vec();
    for &i in positions {
        let t = ground::expand(&out[i]);
        if !(t.is_set_term() || t.is_var()) {
            return None;
        }
        out[i] = t;
    }
    Some(out)
}

fn arith_is(con: &Constraint) -> Outcome {
    let (target, expr) = (&con.args[0], &con.args[1]);
    match arith::eval(expr) {
        Eval::Invalid => Outcome::Fail,
        Eval::Value(v) => match arith::eval(target) {
            Eval::Value(t) => Outcome::check(t == v),
            Eval::Invalid => Outcome::Fail,
            Eval::NotGround => Outcome::goals(vec![eq(target.clone(), Term::Int(v))]),
        },
        Eval::NotGround => match arith::eval(target) {
            Eval::Invalid => Outcome::Fail,
            _ => Outcome::Residual(con.clone()),
        },
    }
}

fn arith_compare(con: &Constraint) -> Outcome {
    match (arith::eval(&con.args[0]), arith::eval(&con.args[1])) {
        (Eval::Invalid, _) | (_, Eval::Invalid) => Outcome::Fail,
        (Eval::Value(a), Eval::Value(b)) => Outcome::check(match con.sym {
            Sym::Le => a <= b,
            Sym::Lt => a < b,
            Sym::Ge => a >= b,
            _ => a > b,
        }),
        _ => Outcome::Residual(con.clone()),
    }
}

fn foreach(ctx: &mut Ctx, con: Constraint) -> Outcome {
    let range = ground::expand(&con.args[1]);
    match &range {
        Term::Var(_) => Outcome::Residual(con),
        Term::Empty => Outcome::Done,
        Term::Cons(e, rest) => {
            let pattern = &con.args[0];
            let body = con.body.as_deref().cloned().unwrap_or(Goal::True);
            let mut renaming = std::collections::HashMap::new();
            for v in pattern.vars() {
                let fresh = ctx.gen.rename(&v);
                renaming.insert(v.id(), Term::Var(fresh));
            }
            let mut sub = |v: &Var| renaming.get(&v.id()).cloned();
            let p = pattern.map_vars(&mut sub);
            let b = body.map_vars(&mut sub);
            let tail = Constraint {
                sym: Sym::Foreach,
                args: vec![pattern.clone(), (**rest).clone()],
                body: con.body.clone(),
            };
            Outcome::Goals(vec![eq(p, (**e).clone()), b, Goal::Constraint(tail)])
        }
        _ if range.is_set_term() => Outcome::Residual(con),
        _ => Outcome::Fail,
    }
}

/// Decides `t in s` without search when both are ground and `s` is closed.
pub(crate) fn ground_member(t: &Term, s: &Term) -> Option<bool> {
    if !t.is_ground() || !s.is_ground() {
        return None;
    }
    let ct = canon(t)?;
    match canon(s)? {
        Canon::Set(elems) => Some(elems.binary_search(&ct).is_ok()),
        _ => None,
    }
}

/// Splits a pair element into its components. A variable is equated with
/// a fresh pair; anything else is not a pair.
pub(crate) fn pair_parts(ctx: &mut Ctx, e: &Term, goals: &mut Vec<Goal>) -> Option<(Term, Term)> {
    match e {
        Term::Tuple(ts) if ts.len() == 2 => Some((ts[0].clone(), ts[1].clone())),
        Term::Var(_) => {
            let x = ctx.fresh();
            let y = ctx.fresh();
            goals.push(eq(e.clone(), Term::pair(x.clone(), y.clone())));
            Some((x, y))
        }
        _ => None,
    }
}
