use super::ground::{expand, may_unify};
use super::{c, eq, expand_sets, ground_member, Ctx, Outcome};
use crate::goal::{Constraint, Goal, Sym};
use crate::term::{ArithOp, Term};

pub fn member(ctx: &mut Ctx, t: &Term, s: &Term) -> Outcome {
    let s = match (t, s) {
        (Term::Var(_) | Term::Arith(..), Term::Interval(..)) => s.clone(),
        _ => expand(s),
    };
    match &s {
        Term::Var(v) => {
            if t.contains_var(v) {
                return Outcome::Fail;
            }
            let n = ctx.fresh();
            Outcome::Goals(vec![eq(s.clone(), Term::cons(t.clone(), n))])
        }
        Term::Empty => Outcome::Fail,
        Term::Interval(lo, hi) => Outcome::Goals(vec![
            c(Sym::Ge, vec![t.clone(), (**lo).clone()]),
            c(Sym::Le, vec![t.clone(), (**hi).clone()]),
        ]),
        Term::Cp(a, b) => {
            let (x, y) = (ctx.fresh(), ctx.fresh());
            Outcome::Goals(vec![
                eq(t.clone(), Term::pair(x.clone(), y.clone())),
                c(Sym::In, vec![x, (**a).clone()]),
                c(Sym::In, vec![y, (**b).clone()]),
            ])
        }
        Term::Cons(..) => {
            if let Some(found) = ground_member(t, &s) {
                return Outcome::check(found);
            }
            let (elems, tail) = s.set_parts();
            if elems.iter().any(|e| *e == t) {
                return Outcome::Done;
            }
            let mut alts: Vec<Vec<Goal>> = elems
                .iter()
                .filter(|e| may_unify(t, e))
                .map(|e| vec![eq(t.clone(), (*e).clone())])
                .collect();
            if *tail != Term::Empty {
                alts.push(vec![c(Sym::In, vec![t.clone(), tail.clone()])]);
            }
            Outcome::branch(alts)
        }
        _ => Outcome::Fail,
    }
}

pub fn not_member(ctx: &mut Ctx, t: &Term, s: &Term) -> Outcome {
    let s = match (t, s) {
        (Term::Var(_) | Term::Arith(..), Term::Interval(..)) => s.clone(),
        _ => expand(s),
    };
    match &s {
        Term::Var(v) => {
            if t.contains_var(v) {
                Outcome::Done
            } else {
                Outcome::Residual(Constraint::new(Sym::Nin, vec![t.clone(), s.clone()]))
            }
        }
        Term::Empty => Outcome::Done,
        Term::Interval(lo, hi) => match t {
            Term::Var(_) | Term::Int(_) | Term::Arith(..) => Outcome::Branch(vec![
                vec![c(Sym::Lt, vec![t.clone(), (**lo).clone()])],
                vec![c(Sym::Gt, vec![t.clone(), (**hi).clone()])],
            ]),
            _ => Outcome::Done,
        },
        Term::Cp(a, b) => match t {
            Term::Tuple(xs) if xs.len() == 2 => Outcome::Branch(vec![
                vec![c(Sym::Nin, vec![xs[0].clone(), (**a).clone()])],
                vec![c(Sym::Nin, vec![xs[1].clone(), (**b).clone()])],
            ]),
            Term::Var(_) => {
                let (x, y) = (ctx.fresh(), ctx.fresh());
                let p = Term::pair(x.clone(), y.clone());
                Outcome::Branch(vec![
                    vec![eq(t.clone(), p.clone()), c(Sym::Nin, vec![x, (**a).clone()])],
                    vec![eq(t.clone(), p), c(Sym::Nin, vec![y, (**b).clone()])],
                    vec![c(Sym::Npair, vec![t.clone()])],
                ])
            }
            _ => Outcome::Done,
        },
        Term::Cons(..) => {
            if let Some(found) = ground_member(t, &s) {
                return Outcome::check(!found);
            }
            let (elems, tail) = s.set_parts();
            if elems.iter().any(|e| *e == t) {
                return Outcome::Fail;
            }
            let mut goals: Vec<Goal> = elems
                .iter()
                .filter(|e| may_unify(t, e))
                .map(|e| c(Sym::Neq, vec![t.clone(), (*e).clone()]))
                .collect();
            if *tail != Term::Empty {
                goals.push(c(Sym::Nin, vec![t.clone(), tail.clone()]));
            }
            Outcome::goals(goals)
        }
        _ => Outcome::Done,
    }
}

fn cons_split(t: &Term) -> Option<(Term, Term)> {
    match t {
        Term::Cons(e, rest) => Some(((**e).clone(), (**rest).clone())),
        _ => None,
    }
}

/// `{t/s}` with `t` split off and the rest normalised: returns `N` together
/// with the goal `diff(s,{t},N)`, so that the set equals `{t/N}` and `t nin N`.
fn without(ctx: &mut Ctx, t: &Term, s: &Term) -> (Term, Goal) {
    if *s == Term::Empty {
        return (Term::Empty, Goal::True);
    }
    let n = ctx.fresh();
    let g = c(Sym::Diff, vec![s.clone(), Term::set([t.clone()]), n.clone()]);
    (n, g)
}

/// Fresh `{t/N}` with `t nin N`.
fn with_new(ctx: &mut Ctx, t: &Term) -> (Term, Term, Goal) {
    let n = ctx.fresh();
    let set = Term::cons(t.clone(), n.clone());
    let g = c(Sym::Nin, vec![t.clone(), n.clone()]);
    (set, n, g)
}

fn same(a: &Term, b: &Term) -> bool {
    a == b
}

pub fn rewrite(ctx: &mut Ctx, con: Constraint) -> Outcome {
    let positions: &[usize] = match con.sym {
        Sym::Size => &[0],
        Sym::Subset | Sym::Nsubset | Sym::Ssubset | Sym::Disj | Sym::Ndisj => &[0, 1],
        _ => &[0, 1, 2],
    };
    let args = match expand_sets(&con.args, positions) {
        Some(a) => a,
        None => return Outcome::Fail,
    };
    if positions
        .iter()
        .any(|&i| matches!(args[i], Term::Interval(..) | Term::Cp(..)))
    {
        return Outcome::Residual(Constraint::new(con.sym, args));
    }
    let con = Constraint::new(con.sym, args);
    let a = &con.args;
    match con.sym {
        Sym::Un => un(ctx, &a[0], &a[1], &a[2], &con),
        Sym::Inters => inters(ctx, &a[0], &a[1], &a[2], &con),
        Sym::Diff => diff(ctx, &a[0], &a[1], &a[2], &con),
        Sym::Subset => subset(&a[0], &a[1], &con),
        Sym::Ssubset => Outcome::Goals(vec![
            c(Sym::Subset, vec![a[0].clone(), a[1].clone()]),
            c(Sym::Neq, vec![a[0].clone(), a[1].clone()]),
        ]),
        Sym::Disj => disj(&a[0], &a[1], &con),
        Sym::Size => size(ctx, &a[0], &a[1], &con),
        Sym::Nun | Sym::Ninters | Sym::Ndiff | Sym::Nsubset | Sym::Ndisj => witness(ctx, &con),
        _ => unreachable!("not a set operator: {:?}", con.sym),
    }
}

fn un(ctx: &mut Ctx, a: &Term, b: &Term, cc: &Term, con: &Constraint) -> Outcome {
    if same(a, b) {
        return Outcome::Goals(vec![eq(cc.clone(), a.clone())]);
    }
    if *a == Term::Empty {
        return Outcome::Goals(vec![eq(b.clone(), cc.clone())]);
    }
    if *b == Term::Empty {
        return Outcome::Goals(vec![eq(a.clone(), cc.clone())]);
    }
    if same(a, cc) {
        return Outcome::Goals(vec![c(Sym::Subset, vec![b.clone(), a.clone()])]);
    }
    if same(b, cc) {
        return Outcome::Goals(vec![c(Sym::Subset, vec![a.clone(), b.clone()])]);
    }
    if let Some((t, rest)) = cons_split(a) {
        if ground_member(&t, b) == Some(true) {
            return Outcome::Goals(vec![c(Sym::Un, vec![rest, b.clone(), cc.clone()])]);
        }
        let n = ctx.fresh();
        return Outcome::Goals(vec![
            eq(cc.clone(), Term::cons(t, n.clone())),
            c(Sym::Un, vec![rest, b.clone(), n]),
        ]);
    }
    if let Some((t, rest)) = cons_split(b) {
        let n = ctx.fresh();
        return Outcome::Goals(vec![
            eq(cc.clone(), Term::cons(t, n.clone())),
            c(Sym::Un, vec![a.clone(), rest, n]),
        ]);
    }
    if *cc == Term::Empty {
        return Outcome::Goals(vec![eq(a.clone(), Term::Empty), eq(b.clone(), Term::Empty)]);
    }
    if let Some((t, rest)) = cons_split(cc) {
        let (n, norm) = without(ctx, &t, &rest);
        let (sa, n1, ga) = with_new(ctx, &t);
        let (sb, n2, gb) = with_new(ctx, &t);
        return Outcome::Branch(vec![
            vec![
                norm.clone(),
                eq(a.clone(), sa.clone()),
                ga.clone(),
                c(Sym::Nin, vec![t.clone(), b.clone()]),
                c(Sym::Un, vec![n1.clone(), b.clone(), n.clone()]),
            ],
            vec![
                norm.clone(),
                eq(b.clone(), sb.clone()),
                gb.clone(),
                c(Sym::Nin, vec![t.clone(), a.clone()]),
                c(Sym::Un, vec![a.clone(), n2.clone(), n.clone()]),
            ],
            vec![
                norm,
                eq(a.clone(), sa),
                ga,
                eq(b.clone(), sb),
                gb,
                c(Sym::Un, vec![n1, n2, n]),
            ],
        ]);
    }
    Outcome::Residual(con.clone())
}

fn inters(ctx: &mut Ctx, a: &Term, b: &Term, cc: &Term, con: &Constraint) -> Outcome {
    if same(a, b) {
        return Outcome::Goals(vec![eq(cc.clone(), a.clone())]);
    }
    if *a == Term::Empty || *b == Term::Empty {
        return Outcome::Goals(vec![eq(cc.clone(), Term::Empty)]);
    }
    for (first, other, swap) in [(a, b, false), (b, a, true)] {
        if let Some((t, rest)) = cons_split(first) {
            let recur = |rest: Term, out: Term| {
                let args = if swap {
                    vec![other.clone(), rest, out]
                } else {
                    vec![rest, other.clone(), out]
                };
                c(Sym::Inters, args)
            };
            let (n, out, out_g) = with_new(ctx, &t);
            let (rest_t, norm) = without(ctx, &t, &rest);
            let take = vec![
                c(Sym::In, vec![t.clone(), other.clone()]),
                norm,
                eq(cc.clone(), n),
                out_g,
                recur(rest_t, out),
            ];
            let skip = vec![c(Sym::Nin, vec![t.clone(), other.clone()]), recur(rest, cc.clone())];
            return match ground_member(&t, other) {
                Some(true) => Outcome::Goals(take),
                Some(false) => Outcome::Goals(skip),
                None => Outcome::Branch(vec![take, skip]),
            };
        }
    }
    if *cc == Term::Empty {
        return Outcome::Goals(vec![c(Sym::Disj, vec![a.clone(), b.clone()])]);
    }
    if let Some((t, rest)) = cons_split(cc) {
        let (n, norm) = without(ctx, &t, &rest);
        let (sa, n1, ga) = with_new(ctx, &t);
        let (sb, n2, gb) = with_new(ctx, &t);
        return Outcome::Goals(vec![
            norm,
            eq(a.clone(), sa),
            ga,
            eq(b.clone(), sb),
            gb,
            c(Sym::Inters, vec![n1, n2, n]),
        ]);
    }
    Outcome::Residual(con.clone())
}

fn diff(ctx: &mut Ctx, a: &Term, b: &Term, cc: &Term, con: &Constraint) -> Outcome {
    if same(a, b) || *a == Term::Empty {
        return Outcome::Goals(vec![eq(cc.clone(), Term::Empty)]);
    }
    if *b == Term::Empty {
        return Outcome::Goals(vec![eq(cc.clone(), a.clone())]);
    }
    if let Some((t, rest)) = cons_split(a) {
        let n = ctx.fresh();
        let drop = vec![
            c(Sym::In, vec![t.clone(), b.clone()]),
            c(Sym::Diff, vec![rest.clone(), b.clone(), cc.clone()]),
        ];
        let keep = vec![
            c(Sym::Nin, vec![t.clone(), b.clone()]),
            eq(cc.clone(), Term::cons(t.clone(), n.clone())),
            c(Sym::Diff, vec![rest, b.clone(), n]),
        ];
        return match ground_member(&t, b) {
            Some(true) => Outcome::Goals(drop),
            Some(false) => Outcome::Goals(keep),
            None => Outcome::Branch(vec![drop, keep]),
        };
    }
    if let Some((u, rest)) = cons_split(b) {
        let (sa, n1, ga) = with_new(ctx, &u);
        return Outcome::Branch(vec![
            vec![eq(a.clone(), sa), ga, c(Sym::Diff, vec![n1, rest.clone(), cc.clone()])],
            vec![
                c(Sym::Nin, vec![u, a.clone()]),
                c(Sym::Diff, vec![a.clone(), rest, cc.clone()]),
            ],
        ]);
    }
    if *cc == Term::Empty {
        return Outcome::Goals(vec![c(Sym::Subset, vec![a.clone(), b.clone()])]);
    }
    if let Some((t, rest)) = cons_split(cc) {
        let (n, norm) = without(ctx, &t, &rest);
        let (sa, n1, ga) = with_new(ctx, &t);
        return Outcome::Goals(vec![
            norm,
            eq(a.clone(), sa),
            ga,
            c(Sym::Nin, vec![t, b.clone()]),
            c(Sym::Diff, vec![n1, b.clone(), n]),
        ]);
    }
    Outcome::Residual(con.clone())
}

fn subset(a: &Term, b: &Term, con: &Constraint) -> Outcome {
    if same(a, b) || *a == Term::Empty {
        return Outcome::Done;
    }
    if let Some((t, rest)) = cons_split(a) {
        return Outcome::Goals(vec![
            c(Sym::In, vec![t, b.clone()]),
            c(Sym::Subset, vec![rest, b.clone()]),
        ]);
    }
    if *b == Term::Empty {
        return Outcome::Goals(vec![eq(a.clone(), Term::Empty)]);
    }
    Outcome::Residual(con.clone())
}

fn disj(a: &Term, b: &Term, con: &Constraint) -> Outcome {
    if same(a, b) {
        return Outcome::Goals(vec![eq(a.clone(), Term::Empty)]);
    }
    if *a == Term::Empty || *b == Term::Empty {
        return Outcome::Done;
    }
    if let Some((t, rest)) = cons_split(a) {
        return Outcome::Goals(vec![
            c(Sym::Nin, vec![t, b.clone()]),
            c(Sym::Disj, vec![rest, b.clone()]),
        ]);
    }
    if let Some((t, rest)) = cons_split(b) {
        return Outcome::Goals(vec![
            c(Sym::Nin, vec![t, a.clone()]),
            c(Sym::Disj, vec![a.clone(), rest]),
        ]);
    }
    Outcome::Residual(con.clone())
}

fn size(ctx: &mut Ctx, a: &Term, n: &Term, con: &Constraint) -> Outcome {
    match n {
        Term::Int(k) if *k < 0 => return Outcome::Fail,
        Term::Int(_) | Term::Var(_) => {}
        _ => return Outcome::Fail,
    }
    if let Some(super::Canon::Set(elems)) = super::canon(a) {
        return Outcome::Goals(vec![eq(n.clone(), Term::Int(elems.len() as i64))]);
    }
    match a {
        Term::Empty => Outcome::Goals(vec![eq(n.clone(), Term::Int(0))]),
        Term::Cons(..) => {
            let (t, rest) = cons_split(a).unwrap();
            let (m, norm) = without(ctx, &t, &rest);
            let n1 = ctx.fresh();
            Outcome::Goals(vec![
                norm,
                c(Sym::Size, vec![m, n1.clone()]),
                c(
                    Sym::Is,
                    vec![n.clone(), Term::arith(ArithOp::Add, vec![n1, Term::Int(1)])],
                ),
            ])
        }
        Term::Var(_) => match n {
            Term::Int(0) => Outcome::Goals(vec![eq(a.clone(), Term::Empty)]),
            Term::Int(k) => {
                let (s, m, g) = {
                    let x = ctx.fresh();
                    with_new(ctx, &x)
                };
                Outcome::Goals(vec![
                    eq(a.clone(), s),
                    g,
                    c(Sym::Size, vec![m, Term::Int(k - 1)]),
                ])
            }
            _ => Outcome::ResidualWith(
                con.clone(),
                vec![c(Sym::Ge, vec![n.clone(), Term::Int(0)])],
            ),
        },
        _ => Outcome::Fail,
    }
}

/// Negated set operators: some fresh `Z` separates the two sides.
fn witness(ctx: &mut Ctx, con: &Constraint) -> Outcome {
    let z = ctx.fresh();
    let a = &con.args;
    let inn = |s: &Term| c(Sym::In, vec![z.clone(), s.clone()]);
    let nin = |s: &Term| c(Sym::Nin, vec![z.clone(), s.clone()]);
    let alts = match con.sym {
        Sym::Nun => vec![
            vec![inn(&a[2]), nin(&a[0]), nin(&a[1])],
            vec![inn(&a[0]), nin(&a[2])],
            vec![inn(&a[1]), nin(&a[2])],
        ],
        Sym::Ninters => vec![
            vec![inn(&a[2]), nin(&a[0])],
            vec![inn(&a[2]), nin(&a[1])],
            vec![inn(&a[0]), inn(&a[1]), nin(&a[2])],
        ],
        Sym::Ndiff => vec![
            vec![inn(&a[2]), nin(&a[0])],
            vec![inn(&a[2]), inn(&a[1])],
            vec![inn(&a[0]), nin(&a[1]), nin(&a[2])],
        ],
        Sym::Nsubset => vec![vec![inn(&a[0]), nin(&a[1])]],
        Sym::Ndisj => vec![vec![inn(&a[0]), inn(&a[1])]],
        _ => unreachable!(),
    };
    Outcome::branch(alts)
}
