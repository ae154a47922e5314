//! Sequence operators over the pair-set encoding `{[1,a],[2,b],...}`.
//!
//! An operator computes its result once its sequence arguments can be
//! decoded; until then it stays in the store unchanged.

use crate::goal::{Constraint, Goal, Sym};
use crate::solver::{canon, Canon, Ctx, Outcome};
use crate::term::Term;

enum Decoded {
    Seq(Vec<Term>),
    NotASeq,
    Unknown,
}

fn decode(s: &Term) -> Decoded {
    let (elems, tail) = s.set_parts();
    match tail {
        Term::Empty => {}
        Term::Var(_) => return Decoded::Unknown,
        _ => return Decoded::NotASeq,
    }
    let mut slots: Vec<Option<&Term>> = vec![None; elems.len()];
    for e in elems {
        let (i, v) = match e {
            Term::Tuple(p) if p.len() == 2 => match &p[0] {
                Term::Int(i) => (*i, &p[1]),
                Term::Var(_) => return Decoded::Unknown,
                _ => return Decoded::NotASeq,
            },
            Term::Var(_) => return Decoded::Unknown,
            _ => return Decoded::NotASeq,
        };
        if i < 1 || i as usize > slots.len() {
            return Decoded::NotASeq;
        }
        let slot = &mut slots[i as usize - 1];
        match slot {
            None => *slot = Some(v),
            Some(prev) if *prev == v => {}
            Some(prev) => {
                return match (canon(prev), canon(v)) {
                    (Some(a), Some(b)) if a == b => continue,
                    (Some(_), Some(_)) => Decoded::NotASeq,
                    _ => Decoded::Unknown,
                };
            }
        }
    }
    let n = slots.iter().take_while(|s| s.is_some()).count();
    if slots[n..].iter().any(Option::is_some) {
        return Decoded::NotASeq;
    }
    Decoded::Seq(slots[..n].iter().map(|s| (*s.unwrap()).clone()).collect())
}

pub fn encode(items: &[Term]) -> Term {
    Term::set(
        items
            .iter()
            .enumerate()
            .map(|(i, v)| Term::pair(Term::Int(i as i64 + 1), v.clone()))
            .collect::<Vec<_>>(),
    )
}

fn bind(out: &Term, items: &[Term]) -> Outcome {
    Outcome::Goals(vec![Goal::eq(out.clone(), encode(items))])
}

pub fn rewrite(_ctx: &mut Ctx, con: Constraint) -> Outcome {
    let a = &con.args;
    let seq_arg = match con.sym {
        Sym::Filter => 1,
        _ => 0,
    };
    let s = match decode(&a[seq_arg]) {
        Decoded::Seq(items) => items,
        Decoded::NotASeq => return Outcome::Fail,
        Decoded::Unknown => {
            if con.sym == Sym::Concat && a[0] == Term::Empty {
                return Outcome::Goals(vec![
                    Goal::eq(a[2].clone(), a[1].clone()),
                    Goal::constraint(Sym::Slist, vec![a[1].clone()]),
                ]);
            }
            return Outcome::Residual(con);
        }
    };
    match con.sym {
        Sym::Slist => Outcome::Done,
        Sym::Head | Sym::Last | Sym::Tail | Sym::Front if s.is_empty() => Outcome::Fail,
        Sym::Head => Outcome::Goals(vec![Goal::eq(a[1].clone(), s[0].clone())]),
        Sym::Last => Outcome::Goals(vec![Goal::eq(a[1].clone(), s[s.len() - 1].clone())]),
        Sym::Tail => bind(&a[1], &s[1..]),
        Sym::Front => bind(&a[1], &s[..s.len() - 1]),
        Sym::Add => {
            let mut items = s;
            items.push(a[1].clone());
            bind(&a[2], &items)
        }
        Sym::Concat => {
            if s.is_empty() {
                return Outcome::Goals(vec![
                    Goal::eq(a[2].clone(), a[1].clone()),
                    Goal::constraint(Sym::Slist, vec![a[1].clone()]),
                ]);
            }
            match decode(&a[1]) {
                Decoded::Seq(t) => {
                    let mut items = s;
                    items.extend(t);
                    bind(&a[2], &items)
                }
                Decoded::NotASeq => Outcome::Fail,
                Decoded::Unknown => Outcome::Residual(con),
            }
        }
        Sym::Filter => {
            let indices = match canon(&a[0]) {
                Some(Canon::Set(xs)) => xs,
                Some(_) => return Outcome::Fail,
                None => return Outcome::Residual(con),
            };
            let kept: Vec<Term> = s
                .iter()
                .enumerate()
                .filter(|(i, _)| indices.binary_search(&Canon::Int(*i as i64 + 1)).is_ok())
                .map(|(_, v)| v.clone())
                .collect();
            bind(&a[2], &kept)
        }
        Sym::Extract => {
            let values = match canon(&a[1]) {
                Some(Canon::Set(xs)) => xs,
                Some(_) => return Outcome::Fail,
                None => return Outcome::Residual(con),
            };
            let mut kept = Vec::new();
            for v in &s {
                match canon(v) {
                    Some(cv) => {
                        if values.binary_search(&cv).is_ok() {
                            kept.push(v.clone());
                        }
                    }
                    None => return Outcome::Residual(con),
                }
            }
            bind(&a[2], &kept)
        }
        _ => unreachable!("not a sequence operator: {:?}", con.sym),
    }
}
