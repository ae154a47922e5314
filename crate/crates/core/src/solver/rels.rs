use super::{c, eq, expand_sets, ground_member, pair_parts, Ctx, Outcome};
use crate::goal::{Constraint, Goal, Sym};
use crate::term::Term;

fn cons_split(t: &Term) -> Option<(Term, Term)> {
    match t {
        Term::Cons(e, rest) => Some(((**e).clone(), (**rest).clone())),
        _ => None,
    }
}

fn set_positions(sym: Sym) -> &'static [usize] {
    use Sym::*;
    match sym {
        Rel | Nrel | Pfun | Npfun => &[0],
        Apply | Napply | ApplyTo => &[0],
        Dom | Ndom | Ran | Nran | Inv | Ninv => &[0, 1],
        CompImg => &[2, 3],
        Ring | Nring => &[0, 1, 2],
        _ => &[0, 1, 2],
    }
}

pub fn rewrite(ctx: &mut Ctx, con: Constraint) -> Outcome {
    let args = match expand_sets(&con.args, set_positions(con.sym)) {
        Some(a) => a,
        None => return Outcome::Fail,
    };
    if set_positions(con.sym)
        .iter()
        .any(|&i| matches!(args[i], Term::Interval(..) | Term::Cp(..)))
    {
        return Outcome::Residual(Constraint::new(con.sym, args));
    }
    let con = Constraint::new(con.sym, args);
    let a = &con.args;
    use Sym::*;
    match con.sym {
        Rel => rel(ctx, &a[0], &con),
        Nrel => {
            let z = ctx.fresh();
            Outcome::Goals(vec![
                c(In, vec![z.clone(), a[0].clone()]),
                c(Npair, vec![z]),
            ])
        }
        Pfun => pfun(ctx, &a[0], &con),
        Npfun => {
            let (x, y1, y2, z) = (ctx.fresh(), ctx.fresh(), ctx.fresh(), ctx.fresh());
            Outcome::Branch(vec![
                vec![
                    c(In, vec![Term::pair(x.clone(), y1.clone()), a[0].clone()]),
                    c(In, vec![Term::pair(x, y2.clone()), a[0].clone()]),
                    c(Neq, vec![y1, y2]),
                ],
                vec![c(In, vec![z.clone(), a[0].clone()]), c(Npair, vec![z])],
            ])
        }
        Apply => Outcome::Goals(vec![
            c(Pfun, vec![a[0].clone()]),
            c(In, vec![Term::pair(a[1].clone(), a[2].clone()), a[0].clone()]),
        ]),
        Napply => Outcome::Branch(vec![
            vec![c(Npfun, vec![a[0].clone()])],
            vec![c(Nin, vec![Term::pair(a[1].clone(), a[2].clone()), a[0].clone()])],
        ]),
        ApplyTo => {
            let g = ctx.fresh();
            let p = Term::pair(a[1].clone(), a[2].clone());
            Outcome::Goals(vec![
                eq(a[0].clone(), Term::cons(p.clone(), g.clone())),
                c(Nin, vec![p, g.clone()]),
                c(
                    Comp,
                    vec![
                        Term::set([Term::pair(a[1].clone(), a[1].clone())]),
                        g,
                        Term::Empty,
                    ],
                ),
            ])
        }
        Dom => dom_ran(ctx, &a[0], &a[1], true, &con),
        Ran => dom_ran(ctx, &a[0], &a[1], false, &con),
        Inv => inv(ctx, &a[0], &a[1], &con),
        Comp => comp(ctx, &a[0], &a[1], &a[2], &con),
        CompImg => compimg(ctx, &con),
        Dres | Dares => {
            let keep_in = con.sym == Dres;
            restrict(ctx, &a[1], &a[0], &a[2], true, keep_in, &con)
        }
        Rres | Rares => {
            let keep_in = con.sym == Rres;
            restrict(ctx, &a[0], &a[1], &a[2], false, keep_in, &con)
        }
        Oplus => oplus(ctx, &a[0], &a[1], &a[2], &con),
        Ring => ring(ctx, &a[0], &a[1], &a[2], &con),
        Ndom | Nran | Ninv | Ncomp | Ndres | Ndares | Nrres | Nrares | Noplus | Nring => {
            negated_functional(ctx, &con)
        }
        _ => unreachable!("not a relation operator: {:?}", con.sym),
    }
}

fn rel(ctx: &mut Ctx, r: &Term, con: &Constraint) -> Outcome {
    match r {
        Term::Empty => Outcome::Done,
        Term::Var(_) => Outcome::Residual(con.clone()),
        _ => {
            let (e, rest) = cons_split(r).unwrap();
            let mut goals = Vec::new();
            if pair_parts(ctx, &e, &mut goals).is_none() {
                return Outcome::Fail;
            }
            goals.push(c(Sym::Rel, vec![rest]));
            Outcome::Goals(goals)
        }
    }
}

fn pfun(ctx: &mut Ctx, r: &Term, con: &Constraint) -> Outcome {
    match r {
        Term::Empty => Outcome::Done,
        Term::Var(_) => Outcome::Residual(con.clone()),
        _ => {
            let (e, rest) = cons_split(r).unwrap();
            let mut goals = Vec::new();
            let (x, y) = match pair_parts(ctx, &e, &mut goals) {
                Some(p) => p,
                None => return Outcome::Fail,
            };
            let p = Term::pair(x.clone(), y);
            let m = if rest == Term::Empty {
                Term::Empty
            } else {
                let m = ctx.fresh();
                goals.push(c(Sym::Diff, vec![rest, Term::set([p]), m.clone()]));
                m
            };
            goals.push(c(
                Sym::Comp,
                vec![Term::set([Term::pair(x.clone(), x)]), m.clone(), Term::Empty],
            ));
            goals.push(c(Sym::Pfun, vec![m]));
            Outcome::Goals(goals)
        }
    }
}

fn dom_ran(ctx: &mut Ctx, r: &Term, a: &Term, dom: bool, con: &Constraint) -> Outcome {
    let sym = if dom { Sym::Dom } else { Sym::Ran };
    match r {
        Term::Empty => Outcome::Goals(vec![eq(a.clone(), Term::Empty)]),
        Term::Cons(..) => {
            let (e, rest) = cons_split(r).unwrap();
            let mut goals = Vec::new();
            let (x, y) = match pair_parts(ctx, &e, &mut goals) {
                Some(p) => p,
                None => return Outcome::Fail,
            };
            let n = ctx.fresh();
            let v = if dom { x } else { y };
            goals.push(eq(a.clone(), Term::cons(v, n.clone())));
            goals.push(c(sym, vec![rest, n]));
            Outcome::Goals(goals)
        }
        _ if *a == Term::Empty => Outcome::Goals(vec![eq(r.clone(), Term::Empty)]),
        _ => Outcome::Residual(con.clone()),
    }
}

/// Splits a non-empty output `{e/_}` into `e` and a fresh rest not
/// containing `e`.
fn take_first(ctx: &mut Ctx, s: &Term, goals: &mut Vec<Goal>) -> (Term, Term) {
    let (e, _) = cons_split(s).unwrap();
    let rest = ctx.fresh();
    goals.push(eq(s.clone(), Term::cons(e.clone(), rest.clone())));
    goals.push(c(Sym::Nin, vec![e.clone(), rest.clone()]));
    (e, rest)
}

fn inv(ctx: &mut Ctx, r: &Term, s: &Term, con: &Constraint) -> Outcome {
    let (from, to, forward) = match (r, s) {
        (Term::Empty, _) => return Outcome::Goals(vec![eq(s.clone(), Term::Empty)]),
        (Term::Cons(..), _) => (r, s, true),
        (_, Term::Empty) => return Outcome::Goals(vec![eq(r.clone(), Term::Empty)]),
        (_, Term::Cons(..)) => (s, r, false),
        _ => return Outcome::Residual(con.clone()),
    };
    let (e, rest) = cons_split(from).unwrap();
    let mut goals = Vec::new();
    let (x, y) = match pair_parts(ctx, &e, &mut goals) {
        Some(p) => p,
        None => return Outcome::Fail,
    };
    let n = ctx.fresh();
    goals.push(eq(to.clone(), Term::cons(Term::pair(y, x), n.clone())));
    goals.push(if forward {
        c(Sym::Inv, vec![rest, n])
    } else {
        c(Sym::Inv, vec![n, rest])
    });
    Outcome::Goals(goals)
}

fn comp(ctx: &mut Ctx, r: &Term, s: &Term, t: &Term, con: &Constraint) -> Outcome {
    if *r == Term::Empty || *s == Term::Empty {
        return Outcome::Goals(vec![
            c(Sym::Rel, vec![r.clone()]),
            c(Sym::Rel, vec![s.clone()]),
            eq(t.clone(), Term::Empty),
        ]);
    }
    if let Some((e, rest)) = cons_split(r) {
        let mut goals = Vec::new();
        let (x, y) = match pair_parts(ctx, &e, &mut goals) {
            Some(p) => p,
            None => return Outcome::Fail,
        };
        if *t == Term::Empty {
            if rest != Term::Empty {
                goals.push(c(
                    Sym::Comp,
                    vec![Term::set([Term::pair(x, y)]), s.clone(), Term::Empty],
                ));
                goals.push(c(Sym::Comp, vec![rest, s.clone(), Term::Empty]));
                return Outcome::Goals(goals);
            }
            return match cons_split(s) {
                Some((f, srest)) => {
                    let (a, _) = match pair_parts(ctx, &f, &mut goals) {
                        Some(p) => p,
                        None => return Outcome::Fail,
                    };
                    goals.push(c(Sym::Neq, vec![y.clone(), a]));
                    goals.push(c(
                        Sym::Comp,
                        vec![Term::set([Term::pair(x, y)]), srest, Term::Empty],
                    ));
                    Outcome::Goals(goals)
                }
                None if goals.is_empty() => Outcome::Residual(con.clone()),
                None => {
                    goals.push(Goal::Constraint(con.clone()));
                    Outcome::Goals(goals)
                }
            };
        }
        let (t1, t2) = (ctx.fresh(), ctx.fresh());
        goals.push(c(Sym::CompImg, vec![x, y, s.clone(), t1.clone()]));
        goals.push(c(Sym::Comp, vec![rest, s.clone(), t2.clone()]));
        goals.push(c(Sym::Un, vec![t1, t2, t.clone()]));
        return Outcome::Goals(goals);
    }
    if *t != Term::Empty && matches!(s, Term::Cons(..)) {
        let (si, ri, ti) = (ctx.fresh(), ctx.fresh(), ctx.fresh());
        return Outcome::Goals(vec![
            c(Sym::Inv, vec![s.clone(), si.clone()]),
            c(Sym::Inv, vec![r.clone(), ri.clone()]),
            c(Sym::Inv, vec![t.clone(), ti.clone()]),
            c(Sym::Comp, vec![si, ri, ti]),
        ]);
    }
    Outcome::Residual(con.clone())
}

/// `compimg(x,y,S,T)`: `T` is `{[x,b] : [y,b] in S}`.
fn compimg(ctx: &mut Ctx, con: &Constraint) -> Outcome {
    let (x, y, s, t) = (&con.args[0], &con.args[1], &con.args[2], &con.args[3]);
    match s {
        Term::Empty => Outcome::Goals(vec![eq(t.clone(), Term::Empty)]),
        Term::Cons(..) => {
            let (f, srest) = cons_split(s).unwrap();
            let mut pre = Vec::new();
            let (a, b) = match pair_parts(ctx, &f, &mut pre) {
                Some(p) => p,
                None => return Outcome::Fail,
            };
            let n = ctx.fresh();
            let mut hit = pre.clone();
            hit.push(eq(y.clone(), a.clone()));
            hit.push(eq(t.clone(), Term::cons(Term::pair(x.clone(), b), n.clone())));
            hit.push(c(Sym::CompImg, vec![x.clone(), y.clone(), srest.clone(), n]));
            let mut miss = pre;
            miss.push(c(Sym::Neq, vec![y.clone(), a.clone()]));
            miss.push(c(Sym::CompImg, vec![x.clone(), y.clone(), srest, t.clone()]));
            if y.is_ground() && a.is_ground() {
                return if super::may_unify(y, &a) {
                    Outcome::Goals(hit)
                } else {
                    Outcome::Goals(miss)
                };
            }
            Outcome::Branch(vec![hit, miss])
        }
        Term::Var(_) if matches!(t, Term::Cons(..)) => {
            let (e, _) = cons_split(t).unwrap();
            let (b, rest) = (ctx.fresh(), ctx.fresh());
            Outcome::Goals(vec![
                eq(e, Term::pair(x.clone(), b.clone())),
                eq(s.clone(), Term::cons(Term::pair(y.clone(), b), rest)),
                Goal::Constraint(con.clone()),
            ])
        }
        _ => Outcome::Residual(con.clone()),
    }
}

/// Domain or range restriction of `r` by `a` into `s`. `on_dom` selects the
/// component tested; `keep_in` selects restriction versus anti-restriction.
fn restrict(
    ctx: &mut Ctx,
    r: &Term,
    a: &Term,
    s: &Term,
    on_dom: bool,
    keep_in: bool,
    con: &Constraint,
) -> Outcome {
    if *r == Term::Empty {
        return Outcome::Goals(vec![eq(s.clone(), Term::Empty)]);
    }
    if *a == Term::Empty {
        let out = if keep_in { Term::Empty } else { r.clone() };
        return Outcome::Goals(vec![c(Sym::Rel, vec![r.clone()]), eq(s.clone(), out)]);
    }
    let (e, rest) = match cons_split(r) {
        Some(p) => p,
        None if r.is_var() && matches!(s, Term::Cons(..)) => {
            let mut goals = Vec::new();
            let (e, srest) = take_first(ctx, s, &mut goals);
            let (x, y) = match pair_parts(ctx, &e, &mut goals) {
                Some(p) => p,
                None => return Outcome::Fail,
            };
            let key = if on_dom { x.clone() } else { y.clone() };
            let rrest = ctx.fresh();
            let p = Term::pair(x, y);
            goals.push(eq(r.clone(), Term::cons(p.clone(), rrest.clone())));
            goals.push(c(Sym::Nin, vec![p, rrest.clone()]));
            goals.push(c(if keep_in { Sym::In } else { Sym::Nin }, vec![key, a.clone()]));
            goals.push(if on_dom {
                c(con.sym, vec![a.clone(), rrest, srest])
            } else {
                c(con.sym, vec![rrest, a.clone(), srest])
            });
            return Outcome::Goals(goals);
        }
        None => return Outcome::Residual(con.clone()),
    };
    let mut pre = Vec::new();
    let (x, y) = match pair_parts(ctx, &e, &mut pre) {
        Some(p) => p,
        None => return Outcome::Fail,
    };
    let key = if on_dom { x.clone() } else { y.clone() };
    let recur = |rest: Term, out: Term| {
        let args = if on_dom {
            vec![a.clone(), rest, out]
        } else {
            vec![rest, a.clone(), out]
        };
        Goal::constraint(con.sym, args)
    };
    let n = ctx.fresh();
    let mut keep = pre.clone();
    keep.push(c(if keep_in { Sym::In } else { Sym::Nin }, vec![key.clone(), a.clone()]));
    keep.push(eq(s.clone(), Term::cons(Term::pair(x, y), n.clone())));
    keep.push(recur(rest.clone(), n));
    let mut drop = pre;
    drop.push(c(if keep_in { Sym::Nin } else { Sym::In }, vec![key.clone(), a.clone()]));
    drop.push(recur(rest, s.clone()));
    match ground_member(&key, a) {
        Some(found) if found == keep_in => Outcome::Goals(keep),
        Some(_) => Outcome::Goals(drop),
        None => Outcome::Branch(vec![keep, drop]),
    }
}

fn oplus(ctx: &mut Ctx, r: &Term, s: &Term, t: &Term, con: &Constraint) -> Outcome {
    match (r, s) {
        (_, Term::Empty) => Outcome::Goals(vec![c(Sym::Rel, vec![r.clone()]), eq(t.clone(), r.clone())]),
        (Term::Empty, _) => Outcome::Goals(vec![c(Sym::Rel, vec![s.clone()]), eq(t.clone(), s.clone())]),
        (_, Term::Cons(..)) => {
            let (d, t1) = (ctx.fresh(), ctx.fresh());
            Outcome::Goals(vec![
                c(Sym::Dom, vec![s.clone(), d.clone()]),
                c(Sym::Dares, vec![d, r.clone(), t1.clone()]),
                c(Sym::Un, vec![t1, s.clone(), t.clone()]),
            ])
        }
        _ => Outcome::Residual(con.clone()),
    }
}

fn ring(ctx: &mut Ctx, r: &Term, a: &Term, b: &Term, con: &Constraint) -> Outcome {
    if *r == Term::Empty || *a == Term::Empty {
        return Outcome::Goals(vec![c(Sym::Rel, vec![r.clone()]), eq(b.clone(), Term::Empty)]);
    }
    let (e, rest) = match cons_split(r) {
        Some(p) => p,
        None => return Outcome::Residual(con.clone()),
    };
    let mut pre = Vec::new();
    let (x, y) = match pair_parts(ctx, &e, &mut pre) {
        Some(p) => p,
        None => return Outcome::Fail,
    };
    let n = ctx.fresh();
    let mut hit = pre.clone();
    hit.push(c(Sym::In, vec![x.clone(), a.clone()]));
    hit.push(eq(b.clone(), Term::cons(y, n.clone())));
    hit.push(c(Sym::Ring, vec![rest.clone(), a.clone(), n]));
    let mut miss = pre;
    miss.push(c(Sym::Nin, vec![x.clone(), a.clone()]));
    miss.push(c(Sym::Ring, vec![rest, a.clone(), b.clone()]));
    match ground_member(&x, a) {
        Some(true) => Outcome::Goals(hit),
        Some(false) => Outcome::Goals(miss),
        None => Outcome::Branch(vec![hit, miss]),
    }
}

/// `nop(..., C)` holds when some relation argument is not a relation, or
/// the operator's actual result differs from `C`.
fn negated_functional(ctx: &mut Ctx, con: &Constraint) -> Outcome {
    use Sym::*;
    let positive = con.sym.complement().unwrap();
    let a = &con.args;
    let rel_args = positive.relation_positions().iter().map(|&i| &a[i]);
    let d = ctx.fresh();
    let out = a.len() - 1;
    let mut args = a.clone();
    args[out] = d.clone();
    let mut alts: Vec<Vec<Goal>> = rel_args
        .map(|r| vec![c(Nrel, vec![r.clone()])])
        .collect();
    alts.push(vec![c(positive, args), c(Neq, vec![d, a[out].clone()])]);
    Outcome::Branch(alts)
}
