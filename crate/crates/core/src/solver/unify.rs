use super::ground::{canon, expand, may_unify};
use super::{c, eq as goal_eq, Ctx, Outcome};
use crate::goal::{Constraint, Goal, Sym};
use crate::term::{Term, Var};

pub fn eq(ctx: &mut Ctx, a: &Term, b: &Term) -> Outcome {
    if a == b {
        return Outcome::Done;
    }
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => {
            if x.id() > y.id() {
                ctx.bind(x, b.clone());
            } else {
                ctx.bind(y, a.clone());
            }
            Outcome::Done
        }
        (Term::Var(x), t) | (t, Term::Var(x)) => bind_var(ctx, x, t),
        _ if a.is_ground() && b.is_ground() => match (canon(a), canon(b)) {
            (Some(x), Some(y)) => Outcome::check(x == y),
            _ => eq_structural(ctx, a, b),
        },
        _ => eq_structural(ctx, a, b),
    }
}

fn bind_var(ctx: &mut Ctx, x: &Var, t: &Term) -> Outcome {
    if let Term::Cons(..) = t {
        if t.set_tail().as_var() == Some(x) {
            if t.occurs_in_element(x) {
                return Outcome::Fail;
            }
            let (elems, _) = t.set_parts();
            let elems: Vec<Term> = elems.into_iter().cloned().collect();
            let n = ctx.fresh();
            ctx.bind(x, Term::set_with_tail(elems, n));
            return Outcome::Done;
        }
    }
    if t.contains_var(x) {
        return Outcome::Fail;
    }
    ctx.bind(x, t.clone());
    Outcome::Done
}

fn eq_structural(ctx: &mut Ctx, a: &Term, b: &Term) -> Outcome {
    match (a, b) {
        (Term::Tuple(xs), Term::Tuple(ys)) | (Term::Arith(_, xs), Term::Arith(_, ys)) => {
            if std::mem::discriminant(a) != std::mem::discriminant(b) || xs.len() != ys.len() {
                return Outcome::Fail;
            }
            if let (Term::Arith(o1, _), Term::Arith(o2, _)) = (a, b) {
                if o1 != o2 {
                    return Outcome::Fail;
                }
            }
            Outcome::goals(
                xs.iter()
                    .zip(ys)
                    .map(|(x, y)| goal_eq(x.clone(), y.clone()))
                    .collect(),
            )
        }
        _ if a.is_set_term() && b.is_set_term() => eq_sets(ctx, a, b),
        _ => Outcome::Fail,
    }
}

fn eq_sets(ctx: &mut Ctx, a: &Term, b: &Term) -> Outcome {
    let (a, b) = (expand(a), expand(b));
    match (&a, &b) {
        (Term::Interval(lo, hi), Term::Empty) | (Term::Empty, Term::Interval(lo, hi)) => {
            Outcome::Goals(vec![c(Sym::Gt, vec![(**lo).clone(), (**hi).clone()])])
        }
        (Term::Cp(x, y), Term::Empty) | (Term::Empty, Term::Cp(x, y)) => Outcome::Branch(vec![
            vec![goal_eq((**x).clone(), Term::Empty)],
            vec![goal_eq((**y).clone(), Term::Empty)],
        ]),
        (Term::Interval(..) | Term::Cp(..), _) | (_, Term::Interval(..) | Term::Cp(..)) => {
            if a == b {
                Outcome::Done
            } else {
                Outcome::Residual(Constraint::new(Sym::Eq, vec![a.clone(), b.clone()]))
            }
        }
        (Term::Empty, Term::Empty) => Outcome::Done,
        (Term::Empty, _) | (_, Term::Empty) => Outcome::Fail,
        _ => {
            let same_tail = match (a.set_tail(), b.set_tail()) {
                (Term::Var(x), Term::Var(y)) => x == y,
                _ => false,
            };
            if same_tail {
                Outcome::branch(same_tail_alternatives(ctx, &a, &b))
            } else {
                Outcome::branch(cons_alternatives(ctx, &a, &b))
            }
        }
    }
}

fn split(t: &Term) -> (Term, Term) {
    match t {
        Term::Cons(e, rest) => ((**e).clone(), (**rest).clone()),
        _ => unreachable!("split on a non-constructor"),
    }
}

/// `{t/s} = {t'/s'}` with distinct tails.
fn cons_alternatives(ctx: &mut Ctx, a: &Term, b: &Term) -> Vec<Vec<Goal>> {
    let (t, s) = split(a);
    let (t2, s2) = split(b);
    let mut alts = Vec::new();
    if may_unify(&t, &t2) {
        alts.push(vec![goal_eq(t.clone(), t2.clone()), goal_eq(s.clone(), s2.clone())]);
        if s2 != Term::Empty {
            alts.push(vec![goal_eq(t.clone(), t2.clone()), goal_eq(a.clone(), s2.clone())]);
        }
        if s != Term::Empty {
            alts.push(vec![goal_eq(t.clone(), t2.clone()), goal_eq(s.clone(), b.clone())]);
        }
    }
    if s != Term::Empty && s2 != Term::Empty {
        let n = ctx.fresh();
        alts.push(vec![
            goal_eq(s, Term::cons(t2, n.clone())),
            goal_eq(Term::cons(t, n), s2),
        ]);
    }
    alts
}

/// `{t0,...,tm/X} = {s0,...,sn/X}`.
fn same_tail_alternatives(ctx: &mut Ctx, a: &Term, b: &Term) -> Vec<Vec<Goal>> {
    let (ta, x) = a.set_parts();
    let (sb, _) = b.set_parts();
    let x = x.clone();
    let t0 = ta[0].clone();
    let rest_a = Term::set_with_tail(ta[1..].iter().map(|t| (*t).clone()).collect::<Vec<_>>(), x.clone());
    let mut alts = Vec::new();
    for (j, sj) in sb.iter().enumerate() {
        if !may_unify(&t0, sj) {
            continue;
        }
        let without_j: Vec<Term> = sb
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != j)
            .map(|(_, s)| (*s).clone())
            .collect();
        let b_without_j = Term::set_with_tail(without_j, x.clone());
        let head = goal_eq(t0.clone(), (*sj).clone());
        alts.push(vec![head.clone(), goal_eq(rest_a.clone(), b.clone())]);
        alts.push(vec![head.clone(), goal_eq(a.clone(), b_without_j.clone())]);
        alts.push(vec![head, goal_eq(rest_a.clone(), b_without_j)]);
    }
    let n = ctx.fresh();
    let rest_n = Term::set_with_tail(ta[1..].iter().map(|t| (*t).clone()).collect::<Vec<_>>(), n.clone());
    let b_n = Term::set_with_tail(sb.iter().map(|s| (*s).clone()).collect::<Vec<_>>(), n.clone());
    alts.push(vec![goal_eq(x, Term::cons(t0, n)), goal_eq(rest_n, b_n)]);
    alts
}

pub fn neq(ctx: &mut Ctx, a: &Term, b: &Term, con: &Constraint) -> Outcome {
    if a == b {
        return Outcome::Fail;
    }
    match (a, b) {
        (Term::Var(_), Term::Var(_)) => Outcome::Residual(con.clone()),
        (Term::Var(x), t) | (t, Term::Var(x)) => {
            if let Term::Cons(..) = t {
                if t.set_tail().as_var() == Some(x) {
                    if t.occurs_in_element(x) {
                        return Outcome::Done;
                    }
                    let (elems, _) = t.set_parts();
                    return Outcome::branch(
                        elems
                            .into_iter()
                            .map(|e| vec![c(Sym::Nin, vec![e.clone(), Term::Var(x.clone())])])
                            .collect(),
                    );
                }
            }
            if t.contains_var(x) {
                Outcome::Done
            } else {
                Outcome::Residual(con.clone())
            }
        }
        _ if a.is_ground() && b.is_ground() => match (canon(a), canon(b)) {
            (Some(x), Some(y)) => Outcome::check(x != y),
            _ => neq_structural(ctx, a, b, con),
        },
        _ => neq_structural(ctx, a, b, con),
    }
}

fn neq_structural(ctx: &mut Ctx, a: &Term, b: &Term, con: &Constraint) -> Outcome {
    match (a, b) {
        (Term::Tuple(xs), Term::Tuple(ys)) => neq_args(xs, ys),
        (Term::Arith(o1, xs), Term::Arith(o2, ys)) => {
            if o1 != o2 {
                Outcome::Done
            } else {
                neq_args(xs, ys)
            }
        }
        _ if a.is_set_term() && b.is_set_term() => {
            let (a, b) = (expand(a), expand(b));
            match (&a, &b) {
                (Term::Empty, Term::Cons(..)) | (Term::Cons(..), Term::Empty) => Outcome::Done,
                (Term::Empty, Term::Empty) => Outcome::Fail,
                (Term::Interval(..), _) | (_, Term::Interval(..)) if !(a.is_ground() && b.is_ground()) => {
                    Outcome::Residual(con.clone())
                }
                _ => {
                    let z = ctx.fresh();
                    Outcome::Branch(vec![
                        vec![
                            c(Sym::In, vec![z.clone(), a.clone()]),
                            c(Sym::Nin, vec![z.clone(), b.clone()]),
                        ],
                        vec![c(Sym::In, vec![z.clone(), b.clone()]), c(Sym::Nin, vec![z, a.clone()])],
                    ])
                }
            }
        }
        _ => Outcome::Done,
    }
}

fn neq_args(xs: &[Term], ys: &[Term]) -> Outcome {
    if xs.len() != ys.len() {
        return Outcome::Done;
    }
    if xs.iter().zip(ys).any(|(x, y)| !may_unify(x, y)) {
        return Outcome::Done;
    }
    let mut alts = Vec::new();
    for i in 0..xs.len() {
        if xs[i] == ys[i] {
            continue;
        }
        let mut alt: Vec<Goal> = (0..i)
            .filter(|&j| xs[j] != ys[j])
            .map(|j| goal_eq(xs[j].clone(), ys[j].clone()))
            .collect();
        alt.push(c(Sym::Neq, vec![xs[i].clone(), ys[i].clone()]));
        alts.push(alt);
    }
    Outcome::branch(alts)
}
