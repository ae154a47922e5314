//! Brute-force set semantics used as an independent oracle.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use setlog::engine::{Answer, Engine, EngineError};
use setlog::goal::{Constraint, Goal, Sym};
use setlog::syntax::ParsedGoal;
use setlog::term::{ArithOp, Term, Var};

pub mod seq_oracle;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum V {
    Atom(String),
    Int(i64),
    Tuple(Vec<V>),
    Set(BTreeSet<V>),
}

pub fn atom(s: &str) -> V {
    V::Atom(s.to_string())
}

pub fn pair(a: V, b: V) -> V {
    V::Tuple(vec![a, b])
}

pub fn set<I: IntoIterator<Item = V>>(xs: I) -> V {
    V::Set(xs.into_iter().collect())
}

pub fn to_term(v: &V) -> Term {
    match v {
        V::Atom(a) => Term::atom(a),
        V::Int(i) => Term::Int(*i),
        V::Tuple(xs) => Term::Tuple(xs.iter().map(to_term).collect()),
        V::Set(xs) => Term::set(xs.iter().map(to_term).collect::<Vec<_>>()),
    }
}

fn eval_int(t: &Term) -> Option<i64> {
    match t {
        Term::Int(i) => Some(*i),
        Term::Arith(op, xs) => {
            let a = eval_int(&xs[0])?;
            let b = if xs.len() > 1 { Some(eval_int(&xs[1])?) } else { None };
            match (op, b) {
                (ArithOp::Neg, _) => Some(-a),
                (ArithOp::Add, Some(b)) => a.checked_add(b),
                (ArithOp::Sub, Some(b)) => a.checked_sub(b),
                (ArithOp::Mul, Some(b)) => a.checked_mul(b),
                (ArithOp::Div, Some(b)) if b != 0 => Some(a.div_euclid(b)),
                (ArithOp::Mod, Some(b)) if b != 0 => Some(a.rem_euclid(b)),
                _ => None,
            }
        }
        _ => None,
    }
}

/// Denotation of a ground term. Arithmetic is not evaluated.
pub fn value(t: &Term) -> Option<V> {
    match t {
        Term::Var(_) => None,
        Term::Atom(a) => Some(V::Atom(a.to_string())),
        Term::Typed(ty, p) => Some(V::Atom(format!("{}?{}", ty, p))),
        Term::Int(i) => Some(V::Int(*i)),
        Term::Arith(..) => None,
        Term::Tuple(xs) => xs.iter().map(value).collect::<Option<Vec<_>>>().map(V::Tuple),
        Term::Empty => Some(V::Set(BTreeSet::new())),
        Term::Cons(e, rest) => {
            let e = value(e)?;
            match value(rest)? {
                V::Set(mut s) => {
                    s.insert(e);
                    Some(V::Set(s))
                }
                _ => None,
            }
        }
        Term::Interval(lo, hi) => {
            let (lo, hi) = (eval_int(lo)?, eval_int(hi)?);
            Some(V::Set((lo..=hi).map(V::Int).collect()))
        }
        Term::Cp(a, b) => match (value(a)?, value(b)?) {
            (V::Set(a), V::Set(b)) => Some(V::Set(
                a.iter()
                    .flat_map(|x| b.iter().map(move |y| pair(x.clone(), y.clone())))
                    .collect(),
            )),
            _ => None,
        },
    }
}

fn as_set(v: &V) -> Option<&BTreeSet<V>> {
    match v {
        V::Set(s) => Some(s),
        _ => None,
    }
}

/// Pairs of a relation; `None` when some element is not a pair.
fn as_rel(v: &V) -> Option<Vec<(V, V)>> {
    as_set(v)?
        .iter()
        .map(|e| match e {
            V::Tuple(xs) if xs.len() == 2 => Some((xs[0].clone(), xs[1].clone())),
            _ => None,
        })
        .collect()
}

fn rel_value(pairs: impl IntoIterator<Item = (V, V)>) -> V {
    V::Set(pairs.into_iter().map(|(a, b)| pair(a, b)).collect())
}

fn is_pfun(r: &[(V, V)]) -> bool {
    let mut seen: BTreeMap<&V, &V> = BTreeMap::new();
    for (x, y) in r {
        if let Some(prev) = seen.insert(x, y) {
            if prev != y {
                return false;
            }
        }
    }
    true
}

/// Output of a functional symbol on its inputs, `None` when an input has
/// the wrong shape.
pub fn result(sym: Sym, a: &[V]) -> Option<V> {
    use Sym::*;
    let s = |i: usize| as_set(&a[i]);
    let r = |i: usize| as_rel(&a[i]);
    Some(match sym {
        Un => V::Set(s(0)?.union(s(1)?).cloned().collect()),
        Inters => V::Set(s(0)?.intersection(s(1)?).cloned().collect()),
        Diff => V::Set(s(0)?.difference(s(1)?).cloned().collect()),
        Dom => V::Set(r(0)?.into_iter().map(|(x, _)| x).collect()),
        Ran => V::Set(r(0)?.into_iter().map(|(_, y)| y).collect()),
        Inv => rel_value(r(0)?.into_iter().map(|(x, y)| (y, x))),
        Comp => {
            let (p, q) = (r(0)?, r(1)?);
            let mut out = Vec::new();
            for (x, y) in &p {
                for (y2, z) in &q {
                    if y == y2 {
                        out.push((x.clone(), z.clone()));
                    }
                }
            }
            rel_value(out)
        }
        Dres | Dares => {
            let (d, p) = (s(0)?, r(1)?);
            let keep = sym == Dres;
            rel_value(p.into_iter().filter(|(x, _)| d.contains(x) == keep))
        }
        // range restrictions take the relation first
        Rres | Rares => {
            let (p, d) = (r(0)?, s(1)?);
            let keep = sym == Rres;
            rel_value(p.into_iter().filter(|(_, y)| d.contains(y) == keep))
        }
        Oplus => {
            let (p, q) = (r(0)?, r(1)?);
            let dq: BTreeSet<V> = q.iter().map(|(x, _)| x.clone()).collect();
            let mut out: Vec<(V, V)> = p.into_iter().filter(|(x, _)| !dq.contains(x)).collect();
            out.extend(q);
            rel_value(out)
        }
        Ring => {
            let (p, d) = (r(0)?, s(1)?);
            V::Set(p.into_iter().filter(|(x, _)| d.contains(x)).map(|(_, y)| y).collect())
        }
        _ => return None,
    })
}

pub fn is_functional(sym: Sym) -> bool {
    use Sym::*;
    matches!(
        sym,
        Un | Inters | Diff | Dom | Ran | Inv | Comp | Dres | Dares | Rres | Rares | Oplus | Ring
    )
}

/// Truth of a positive or negated set/relation/comparison symbol on ground
/// values. `None` for symbols outside the oracle.
pub fn holds(sym: Sym, a: &[V]) -> Option<bool> {
    use Sym::*;
    if is_negative(sym) {
        return holds(sym.complement()?, a).map(|b| !b);
    }
    if is_functional(sym) {
        let n = a.len() - 1;
        return Some(result(sym, &a[..n]).as_ref() == Some(&a[n]));
    }
    let s = |i: usize| as_set(&a[i]);
    let r = |i: usize| as_rel(&a[i]);
    Some(match sym {
        Eq => a[0] == a[1],
        In => s(1).is_some_and(|x| x.contains(&a[0])),
        Set => s(0).is_some(),
        Subset => match (s(0), s(1)) {
            (Some(x), Some(y)) => x.is_subset(y),
            _ => false,
        },
        Ssubset => match (s(0), s(1)) {
            (Some(x), Some(y)) => x.is_subset(y) && x != y,
            _ => false,
        },
        Disj => match (s(0), s(1)) {
            (Some(x), Some(y)) => x.is_disjoint(y),
            _ => false,
        },
        Size => match (s(0), &a[1]) {
            (Some(x), V::Int(n)) => x.len() as i64 == *n,
            _ => false,
        },
        Rel => r(0).is_some(),
        Pfun => r(0).is_some_and(|p| is_pfun(&p)),
        Apply => r(0).is_some_and(|p| is_pfun(&p) && p.contains(&(a[1].clone(), a[2].clone()))),
        ApplyTo => r(0).is_some_and(|p| {
            let hits: Vec<_> = p.iter().filter(|(x, _)| *x == a[1]).collect();
            hits.len() == 1 && hits[0].1 == a[2]
        }),
        Npair => !matches!(&a[0], V::Tuple(t) if t.len() == 2),
        CompImg => match (r(2), s(3)) {
            (Some(p), Some(t)) => {
                let img: BTreeSet<V> = p
                    .into_iter()
                    .filter(|(y, _)| *y == a[1])
                    .map(|(_, b)| pair(a[0].clone(), b))
                    .collect();
                img == *t
            }
            _ => false,
        },
        Le | Lt | Ge | Gt => match (&a[0], &a[1]) {
            (V::Int(x), V::Int(y)) => match sym {
                Le => x <= y,
                Lt => x < y,
                Ge => x >= y,
                _ => x > y,
            },
            _ => false,
        },
        _ => return None,
    })
}

pub fn is_negative(sym: Sym) -> bool {
    use Sym::*;
    matches!(
        sym,
        Neq | Nin
            | Nun
            | Ninters
            | Ndiff
            | Nsubset
            | Ndisj
            | Nrel
            | Npfun
            | Napply
            | Ndom
            | Nran
            | Ncomp
            | Ninv
            | Ndres
            | Ndares
            | Nrres
            | Nrares
            | Noplus
            | Nring
    )
}

/// Truth of a ground goal without calls.
pub fn eval_goal(g: &Goal) -> Option<bool> {
    match g {
        Goal::True | Goal::Dec { .. } => Some(true),
        Goal::Conj(a, b) => Some(eval_goal(a)? && eval_goal(b)?),
        Goal::Disj(a, b) => Some(eval_goal(a)? || eval_goal(b)?),
        Goal::Constraint(c) => eval_constraint(c),
        Goal::Call { .. } => None,
    }
}

pub fn eval_constraint(c: &Constraint) -> Option<bool> {
    match c.sym {
        Sym::Is => Some(eval_int(&c.args[0])? == eval_int(&c.args[1])?),
        Sym::Le | Sym::Lt | Sym::Ge | Sym::Gt => {
            let a = V::Int(eval_int(&c.args[0])?);
            let b = V::Int(eval_int(&c.args[1])?);
            holds(c.sym, &[a, b])
        }
        _ => {
            let args: Option<Vec<V>> = c.args.iter().map(value).collect();
            holds(c.sym, &args?)
        }
    }
}

/// Ground constraint solved directly by the engine.
pub fn solver_holds(engine: &mut Engine, sym: Sym, args: &[V]) -> Result<bool, EngineError> {
    let g = Goal::constraint(sym, args.iter().map(to_term).collect());
    solver_sat(engine, &g)
}

pub fn solver_sat(engine: &mut Engine, g: &Goal) -> Result<bool, EngineError> {
    let parsed = ParsedGoal {
        goal: g.clone(),
        vars: g.vars(),
    };
    match engine.solve(&parsed)?.next() {
        None => Ok(false),
        Some(Ok(_)) => Ok(true),
        Some(Err(e)) => Err(e),
    }
}

pub fn atoms(n: usize) -> Vec<V> {
    ["a", "b", "c", "d"][..n].iter().map(|s| atom(s)).collect()
}

pub fn subsets(xs: &[V]) -> Vec<V> {
    (0..1u32 << xs.len())
        .map(|m| set((0..xs.len()).filter(|i| m & (1 << i) != 0).map(|i| xs[i].clone())))
        .collect()
}

pub fn all_pairs(xs: &[V], ys: &[V]) -> Vec<V> {
    xs.iter()
        .flat_map(|x| ys.iter().map(move |y| pair(x.clone(), y.clone())))
        .collect()
}

/// Substitutes answer bindings into a goal.
pub fn instantiate(g: &Goal, a: &Answer, vars: &[Var]) -> Goal {
    let by_name: BTreeMap<&str, &Term> = a.bindings.iter().map(|(n, t)| (n.as_str(), t)).collect();
    g.map_vars(&mut |v: &Var| {
        if vars.contains(v) {
            by_name.get(v.name()).map(|t| (*t).clone())
        } else {
            None
        }
    })
}

/// Grounding recipe: variables in set positions or set tails become `{}`,
/// every other variable becomes a fresh distinct atom.
pub fn ground_by_recipe(g: &Goal) -> Goal {
    let mut set_vars: BTreeSet<u32> = BTreeSet::new();
    collect_set_vars(g, &mut set_vars);
    let mut names: BTreeMap<u32, Term> = BTreeMap::new();
    let mut k = 0;
    g.map_vars(&mut |v: &Var| {
        if set_vars.contains(&v.id()) {
            return Some(Term::Empty);
        }
        Some(
            names
                .entry(v.id())
                .or_insert_with(|| {
                    k += 1;
                    Term::atom(&format!("fresh{}", k))
                })
                .clone(),
        )
    })
}

fn set_arg_positions(sym: Sym) -> &'static [usize] {
    use Sym::*;
    match sym {
        In | Nin => &[1],
        Set | Rel | Nrel | Pfun | Npfun | Apply | Napply | ApplyTo | Size => &[0],
        Subset | Nsubset | Ssubset | Disj | Ndisj | Dom | Ndom | Ran | Nran | Inv | Ninv => &[0, 1],
        Un | Nun | Inters | Ninters | Diff | Ndiff | Comp | Ncomp | Dres | Ndres | Dares | Ndares | Rres
        | Nrres | Rares | Nrares | Oplus | Noplus | Ring | Nring => &[0, 1, 2],
        _ => &[],
    }
}

fn collect_set_vars(g: &Goal, out: &mut BTreeSet<u32>) {
    fn tails(t: &Term, out: &mut BTreeSet<u32>) {
        match t {
            Term::Cons(e, rest) => {
                tails(e, out);
                if let Term::Var(v) = &**rest {
                    out.insert(v.id());
                } else {
                    tails(rest, out);
                }
            }
            Term::Tuple(xs) | Term::Arith(_, xs) => xs.iter().for_each(|x| tails(x, out)),
            _ => {}
        }
    }
    match g {
        Goal::Conj(a, b) | Goal::Disj(a, b) => {
            collect_set_vars(a, out);
            collect_set_vars(b, out);
        }
        Goal::Constraint(c) => {
            for &i in set_arg_positions(c.sym) {
                if let Some(Term::Var(v)) = c.args.get(i) {
                    out.insert(v.id());
                }
            }
            if matches!(c.sym, Sym::Eq | Sym::Neq) {
                for (x, y) in [(0, 1), (1, 0)] {
                    if let Term::Var(v) = &c.args[x] {
                        if c.args[y].is_set_term() {
                            out.insert(v.id());
                        }
                    }
                }
            }
            c.args.iter().for_each(|t| tails(t, out));
        }
        _ => {}
    }
}

/// Does `x` denote the same set as `expected`?
pub fn denotes(t: &Term, expected: &V) -> bool {
    value(t).as_ref() == Some(expected)
}

/// Ground argument domains over a three-atom universe.
pub struct Universe {
    pub atoms: Vec<V>,
    pub sets: Vec<V>,
    pub rels: Vec<V>,
    /// Relations plus sets that are not relations.
    pub rel_like: Vec<V>,
}

impl Universe {
    pub fn new() -> Self {
        let atoms = atoms(3);
        let sets = subsets(&atoms);
        let rels = subsets(&all_pairs(&atoms, &atoms));
        let mut rel_like = rels.clone();
        rel_like.push(set([atom("a")]));
        rel_like.push(set([pair(atom("a"), atom("b")), atom("c")]));
        Universe {
            atoms,
            sets,
            rels,
            rel_like,
        }
    }

    /// Domains of each argument position of `sym` (positive form).
    pub fn domains(&self, sym: Sym) -> Vec<Vec<V>> {
        use Sym::*;
        let base = sym.complement().filter(|_| is_negative(sym)).unwrap_or(sym);
        let s = self.sets.clone();
        let r = self.rel_like.clone();
        let a = self.atoms.clone();
        let mut elems = a.clone();
        elems.push(pair(atom("a"), atom("b")));
        let mut mixed = s.clone();
        mixed.extend(self.rels.iter().step_by(37).cloned());
        match base {
            Eq => {
                let mut all = a.clone();
                all.extend(mixed.clone());
                vec![all.clone(), all]
            }
            In => vec![elems, mixed],
            Set => {
                let mut all = a.clone();
                all.extend(s);
                vec![all]
            }
            Un | Inters | Diff => vec![s.clone(), s.clone(), s],
            Subset | Ssubset | Disj => vec![s.clone(), s],
            Size => vec![s, (0..=4).map(V::Int).collect()],
            Rel | Pfun => vec![r],
            Apply | ApplyTo => vec![r, a.clone(), a],
            Dom | Ran => vec![r, s],
            Inv => vec![r.clone(), r],
            Comp | Oplus => vec![r.clone(), r.clone(), r],
            Dres | Dares => vec![s, r.clone(), r],
            Rres | Rares => vec![r.clone(), s, r],
            Ring => vec![r, s.clone(), s],
            _ => panic!("no ground domain for {:?}", sym),
        }
    }
}

/// Every argument tuple when the product is at most `cap`, otherwise `cap`
/// samples. Functional symbols get the true output in half the samples.
pub fn cases<R: rand::Rng>(u: &Universe, sym: Sym, cap: usize, rng: &mut R) -> (Vec<Vec<V>>, bool) {
    let doms = u.domains(sym);
    let total: usize = doms.iter().map(Vec::len).product();
    if total <= cap {
        let mut out = vec![vec![]];
        for d in &doms {
            out = out
                .into_iter()
                .flat_map(|prefix: Vec<V>| {
                    d.iter().map(move |x| {
                        let mut p = prefix.clone();
                        p.push(x.clone());
                        p
                    })
                })
                .collect();
        }
        return (out, true);
    }
    let base = sym.complement().filter(|_| is_negative(sym)).unwrap_or(sym);
    let out = (0..cap)
        .map(|i| {
            let mut args: Vec<V> = doms.iter().map(|d| d[rng.gen_range(0..d.len())].clone()).collect();
            if i % 2 == 0 && is_functional(base) {
                let n = args.len() - 1;
                if let Some(v) = result(base, &args[..n]) {
                    args[n] = v;
                }
            }
            args
        })
        .collect();
    (out, false)
}

pub const TABLE_SYMBOLS: &[Sym] = &[
    Sym::Eq,
    Sym::Neq,
    Sym::In,
    Sym::Nin,
    Sym::Set,
    Sym::Un,
    Sym::Nun,
    Sym::Inters,
    Sym::Ninters,
    Sym::Diff,
    Sym::Ndiff,
    Sym::Subset,
    Sym::Nsubset,
    Sym::Ssubset,
    Sym::Disj,
    Sym::Ndisj,
    Sym::Size,
    Sym::Rel,
    Sym::Nrel,
    Sym::Pfun,
    Sym::Npfun,
    Sym::Apply,
    Sym::Napply,
    Sym::ApplyTo,
    Sym::Dom,
    Sym::Ndom,
    Sym::Ran,
    Sym::Nran,
    Sym::Comp,
    Sym::Ncomp,
    Sym::Inv,
    Sym::Ninv,
    Sym::Dres,
    Sym::Ndres,
    Sym::Dares,
    Sym::Ndares,
    Sym::Rres,
    Sym::Nrres,
    Sym::Rares,
    Sym::Nrares,
    Sym::Oplus,
    Sym::Noplus,
    Sym::Ring,
    Sym::Nring,
];

#[derive(Debug, Default)]
pub struct OracleReport {
    pub cases: usize,
    pub exhaustive: bool,
    pub mismatches: Vec<String>,
    /// Cases where the symbol and its complement were both true or both false.
    pub complement_failures: Vec<String>,
}

/// Compares solver and oracle on the ground cases of `sym`, and checks the
/// complementary symbol on the same tuples.
pub fn check_symbol<R: rand::Rng>(engine: &mut Engine, u: &Universe, sym: Sym, cap: usize, rng: &mut R) -> OracleReport {
    let (cases, exhaustive) = cases(u, sym, cap, rng);
    let mut report = OracleReport {
        cases: cases.len(),
        exhaustive,
        ..Default::default()
    };
    for args in cases {
        let expected = holds(sym, &args).expect("oracle covers table symbols");
        let render = || {
            let c = Constraint::new(sym, args.iter().map(to_term).collect());
            c.to_string()
        };
        let got = match solver_holds(engine, sym, &args) {
            Ok(b) => b,
            Err(e) => {
                report.mismatches.push(format!("{}: error {}", render(), e));
                continue;
            }
        };
        if got != expected {
            report.mismatches.push(format!("{}: solver {} oracle {}", render(), got, expected));
        }
        if let Some(comp) = sym.complement() {
            match solver_holds(engine, comp, &args) {
                Ok(neg) if neg == got => report.complement_failures.push(render()),
                Ok(_) => {}
                Err(e) => report.complement_failures.push(format!("{}: error {}", render(), e)),
            }
        }
    }
    report
}

/// Random goals over set, relation and element variables.
pub struct GoalGen {
    pub set_vars: Vec<Var>,
    pub elem_vars: Vec<Var>,
}

impl GoalGen {
    pub fn new(gen: &mut setlog::term::VarGen) -> Self {
        GoalGen {
            set_vars: ["S", "T", "R"].iter().map(|n| gen.named(n)).collect(),
            elem_vars: ["X", "Y"].iter().map(|n| gen.named(n)).collect(),
        }
    }

    fn elem<R: rand::Rng>(&self, rng: &mut R) -> Term {
        match rng.gen_range(0..5) {
            0 | 1 => Term::Var(self.elem_vars[rng.gen_range(0..self.elem_vars.len())].clone()),
            _ => Term::atom(["a", "b", "c"][rng.gen_range(0..3)]),
        }
    }

    fn pair_term<R: rand::Rng>(&self, rng: &mut R) -> Term {
        Term::pair(self.elem(rng), self.elem(rng))
    }

    fn set_term<R: rand::Rng>(&self, rng: &mut R, rel: bool) -> Term {
        let var = Term::Var(self.set_vars[rng.gen_range(0..self.set_vars.len())].clone());
        match rng.gen_range(0..6) {
            0..=2 => var,
            3 => Term::Empty,
            k => {
                let n = rng.gen_range(1..=2);
                let elems: Vec<Term> = (0..n)
                    .map(|_| if rel { self.pair_term(rng) } else { self.elem(rng) })
                    .collect();
                let tail = if k == 4 { var } else { Term::Empty };
                Term::set_with_tail(elems, tail)
            }
        }
    }

    pub fn constraint<R: rand::Rng>(&self, rng: &mut R) -> Constraint {
        use Sym::*;
        const SET_SYMS: &[Sym] = &[
            Eq, Neq, In, Nin, Un, Nun, Inters, Ninters, Diff, Ndiff, Subset, Nsubset, Disj, Ndisj,
        ];
        const REL_SYMS: &[Sym] = &[
            Pfun, Npfun, Dom, Ndom, Ran, Nran, Inv, Ninv, Comp, Ncomp, Dres, Ndres, Rres, Nrres, Ring,
            Nring, Oplus, Noplus, Apply, Rel, Nrel,
        ];
        let rel = rng.gen_bool(0.5);
        let sym = if rel {
            REL_SYMS[rng.gen_range(0..REL_SYMS.len())]
        } else {
            SET_SYMS[rng.gen_range(0..SET_SYMS.len())]
        };
        let args: Vec<Term> = match sym {
            In | Nin => vec![self.elem(rng), self.set_term(rng, false)],
            Pfun | Npfun | Rel | Nrel => vec![self.set_term(rng, true)],
            Dom | Ndom | Ran | Nran => vec![self.set_term(rng, true), self.set_term(rng, false)],
            Inv | Ninv => vec![self.set_term(rng, true), self.set_term(rng, true)],
            Comp | Ncomp | Oplus | Noplus => (0..3).map(|_| self.set_term(rng, true)).collect(),
            Dres | Ndres => vec![
                self.set_term(rng, false),
                self.set_term(rng, true),
                self.set_term(rng, true),
            ],
            Rres | Nrres => vec![
                self.set_term(rng, true),
                self.set_term(rng, false),
                self.set_term(rng, true),
            ],
            Ring | Nring => vec![
                self.set_term(rng, true),
                self.set_term(rng, false),
                self.set_term(rng, false),
            ],
            Apply => vec![self.set_term(rng, true), self.elem(rng), self.elem(rng)],
            s => (0..s.arity()).map(|_| self.set_term(rng, false)).collect(),
        };
        Constraint::new(sym, args)
    }

    pub fn goal<R: rand::Rng>(&self, rng: &mut R) -> Goal {
        let n = rng.gen_range(1..=3);
        Goal::all((0..n).map(|_| Goal::Constraint(self.constraint(rng))))
    }

    pub fn vars(&self) -> Vec<Var> {
        self.set_vars.iter().chain(&self.elem_vars).cloned().collect()
    }
}

/// Outcome of checking one answer against the ground oracle.
#[derive(Debug, PartialEq, Eq)]
pub enum Soundness {
    Valid,
    Violation,
}

/// Grounds the answer with the standard recipe (set variables to `{}`, the
/// rest to fresh atoms) and evaluates the goal and the residual store.
pub fn check_answer(goal: &Goal, answer: &Answer, vars: &[Var]) -> Soundness {
    let mut with_residual = instantiate(goal, answer, vars);
    for c in &answer.constraints {
        with_residual = with_residual.and(Goal::Constraint(c.clone()));
    }
    if eval_goal(&ground_by_recipe(&with_residual)) == Some(true) {
        Soundness::Valid
    } else {
        Soundness::Violation
    }
}

#[derive(Debug, Default)]
pub struct SoundnessReport {
    pub tried: usize,
    pub satisfiable: usize,
    pub answers: usize,
    pub violations: Vec<String>,
    /// Goals abandoned on a time or resource limit.
    pub errors: Vec<String>,
}

/// Draws random goals until `target` of them have an answer, checking up to
/// four answers of each against the oracle.
pub fn soundness_run(target: usize, per_goal: std::time::Duration, seed: u64) -> SoundnessReport {
    use rand::SeedableRng;
    let mut engine = Engine::new();
    engine.config.timeout = Some(per_goal);
    let gen = GoalGen::new(engine.gen());
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut report = SoundnessReport::default();
    while report.satisfiable < target {
        report.tried += 1;
        let goal = gen.goal(&mut rng);
        let parsed = ParsedGoal {
            goal: goal.clone(),
            vars: gen.vars(),
        };
        let mut any = false;
        for a in engine.solve(&parsed).unwrap().take(4) {
            match a {
                Ok(a) => {
                    any = true;
                    report.answers += 1;
                    if check_answer(&goal, &a, &parsed.vars) == Soundness::Violation {
                        report.violations.push(format!(
                            "{}\n  answer: {}\n  witness: {:?}",
                            goal,
                            a.to_string().replace('\n', " "),
                            a.witness
                        ));
                    }
                }
                Err(e) => {
                    report.errors.push(format!("{}: {}", goal, e));
                    break;
                }
            }
        }
        if any {
            report.satisfiable += 1;
        }
    }
    report
}
