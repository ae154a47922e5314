use std::sync::Arc;

use crate::term::{ArithOp, Term};

/// Largest interval or product expanded into an explicit set.
const EXPAND_LIMIT: i64 = 100_000;

/// Canonical form of a ground term. Sets are sorted and duplicate free, so
/// two ground terms are equal exactly when their canonical forms are.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Canon {
    Int(i64),
    Atom(Arc<str>),
    Typed(Arc<str>, Arc<str>),
    Arith(ArithOp, Vec<Canon>),
    Tuple(Vec<Canon>),
    Set(Vec<Canon>),
}

/// Returns `None` for non-ground terms and for sets too large to expand.
pub fn canon(t: &Term) -> Option<Canon> {
    Some(match t {
        Term::Var(_) => return None,
        Term::Int(n) => Canon::Int(*n),
        Term::Atom(a) => Canon::Atom(a.clone()),
        Term::Typed(ty, p) => Canon::Typed(ty.clone(), p.clone()),
        Term::Arith(op, args) => Canon::Arith(*op, canon_all(args)?),
        Term::Tuple(args) => Canon::Tuple(canon_all(args)?),
        Term::Empty => Canon::Set(Vec::new()),
        Term::Cons(..) => {
            let (elems, tail) = t.set_parts();
            let mut out = Vec::with_capacity(elems.len());
            for e in elems {
                out.push(canon(e)?);
            }
            match canon(tail)? {
                Canon::Set(rest) => out.extend(rest),
                _ => return None,
            }
            out.sort();
            out.dedup();
            Canon::Set(out)
        }
        Term::Interval(lo, hi) => match (&**lo, &**hi) {
            (Term::Int(a), Term::Int(b)) => {
                if b.saturating_sub(*a) >= EXPAND_LIMIT {
                    return None;
                }
                Canon::Set((*a..=*b).map(Canon::Int).collect())
            }
            _ => return None,
        },
        Term::Cp(a, b) => match (canon(a)?, canon(b)?) {
            (Canon::Set(xs), Canon::Set(ys)) => {
                if (xs.len() as i64).saturating_mul(ys.len() as i64) > EXPAND_LIMIT {
                    return None;
                }
                let mut out = Vec::with_capacity(xs.len() * ys.len());
                for x in &xs {
                    for y in &ys {
                        out.push(Canon::Tuple(vec![x.clone(), y.clone()]));
                    }
                }
                Canon::Set(out)
            }
            _ => return None,
        },
    })
}

fn canon_all(ts: &[Term]) -> Option<Vec<Canon>> {
    ts.iter().map(canon).collect()
}

pub fn from_canon(c: &Canon) -> Term {
    match c {
        Canon::Int(n) => Term::Int(*n),
        Canon::Atom(a) => Term::Atom(a.clone()),
        Canon::Typed(ty, p) => Term::Typed(ty.clone(), p.clone()),
        Canon::Arith(op, args) => Term::Arith(*op, args.iter().map(from_canon).collect()),
        Canon::Tuple(args) => Term::Tuple(args.iter().map(from_canon).collect()),
        Canon::Set(elems) => Term::set(elems.iter().map(from_canon).collect::<Vec<_>>()),
    }
}

/// Replaces a ground interval, or a product whose factors are closed, by the
/// explicit set it denotes. A product with an empty factor is empty.
pub fn expand(t: &Term) -> Term {
    match t {
        Term::Interval(lo, hi) => match (&**lo, &**hi) {
            (Term::Int(a), Term::Int(b)) if b.saturating_sub(*a) < EXPAND_LIMIT => {
                Term::set((*a..=*b).map(Term::Int).collect::<Vec<_>>())
            }
            _ => t.clone(),
        },
        Term::Cp(a, b) => {
            let a = expand(a);
            let b = expand(b);
            if a == Term::Empty || b == Term::Empty {
                return Term::Empty;
            }
            let (xs, xt) = a.set_parts();
            let (ys, yt) = b.set_parts();
            if *xt != Term::Empty || *yt != Term::Empty {
                return Term::cp(a.clone(), b.clone());
            }
            let mut out = Vec::with_capacity(xs.len() * ys.len());
            for x in &xs {
                for y in &ys {
                    out.push(Term::pair((*x).clone(), (*y).clone()));
                }
            }
            Term::set(out)
        }
        Term::Cons(..) => {
            let tail = t.set_tail();
            if matches!(tail, Term::Interval(..) | Term::Cp(..)) {
                let expanded = expand(tail);
                if expanded.set_tail() != tail {
                    let (elems, _) = t.set_parts();
                    let elems: Vec<Term> = elems.into_iter().cloned().collect();
                    return Term::set_with_tail(elems, expanded);
                }
            }
            t.clone()
        }
        _ => t.clone(),
    }
}

/// Cheap syntactic test: `false` means the two terms can never be equal.
pub fn may_unify(a: &Term, b: &Term) -> bool {
    match (a, b) {
        (Term::Var(_), _) | (_, Term::Var(_)) => true,
        _ if a.is_ground() && b.is_ground() => match (canon(a), canon(b)) {
            (Some(x), Some(y)) => x == y,
            _ => true,
        },
        (Term::Tuple(xs), Term::Tuple(ys)) => {
            xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| may_unify(x, y))
        }
        (Term::Arith(o1, xs), Term::Arith(o2, ys)) => {
            o1 == o2 && xs.iter().zip(ys).all(|(x, y)| may_unify(x, y))
        }
        (Term::Empty, Term::Cons(..)) | (Term::Cons(..), Term::Empty) => false,
        _ if a.is_set_term() && b.is_set_term() => true,
        _ => std::mem::discriminant(a) == std::mem::discriminant(b),
    }
}
