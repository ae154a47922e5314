//! Linear integer arithmetic.
//!
//! Ground expressions are evaluated directly. Non-ground linear constraints
//! are decided by Fourier-Motzkin elimination over the rationals, with
//! branch-and-bound for integrality and lazy splitting of disequalities.

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::goal::{Constraint, Sym};
use crate::term::{ArithOp, Term};

type Q = Ratio<i128>;

/// Integer solving mode, selected by `int_solver(clpq)` / `int_solver(clpfd)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ArithMode {
    #[default]
    Symbolic,
    FiniteDomain,
}

impl ArithMode {
    pub fn token(self) -> &'static str {
        match self {
            ArithMode::Symbolic => "clpq",
            ArithMode::FiniteDomain => "clpfd",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Eval {
    Value(i64),
    NotGround,
    /// Not an integer expression (atom, set, division by zero, overflow).
    Invalid,
}

pub fn eval(t: &Term) -> Eval {
    match t {
        Term::Int(n) => Eval::Value(*n),
        Term::Var(_) => Eval::NotGround,
        Term::Arith(op, args) => {
            let mut vals = Vec::with_capacity(args.len());
            let mut ground = true;
            for a in args {
                match eval(a) {
                    Eval::Value(v) => vals.push(v),
                    Eval::NotGround => ground = false,
                    Eval::Invalid => return Eval::Invalid,
                }
            }
            if !ground {
                return Eval::NotGround;
            }
            let r = match op {
                ArithOp::Add => vals[0].checked_add(vals[1]),
                ArithOp::Sub => vals[0].checked_sub(vals[1]),
                ArithOp::Mul => vals[0].checked_mul(vals[1]),
                ArithOp::Div if vals[1] != 0 => vals[0].checked_div_euclid(vals[1]),
                ArithOp::Mod if vals[1] != 0 => vals[0].checked_rem_euclid(vals[1]),
                ArithOp::Div | ArithOp::Mod => None,
                ArithOp::Neg => vals[0].checked_neg(),
            };
            r.map_or(Eval::Invalid, Eval::Value)
        }
        _ => Eval::Invalid,
    }
}

/// Unknown of a linear system: a program variable or a helper introduced
/// for `div`/`mod`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Key {
    Var(u32),
    Aux(u32),
}

/// `sum(coeffs[k] * k) + constant`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Lin {
    pub coeffs: BTreeMap<Key, i128>,
    pub constant: i128,
}

impl Lin {
    fn constant(c: i128) -> Lin {
        Lin {
            coeffs: BTreeMap::new(),
            constant: c,
        }
    }

    fn key(k: Key) -> Lin {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(k, 1);
        Lin {
            coeffs,
            constant: 0,
        }
    }

    fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_scaled(&mut self, other: &Lin, k: i128) {
        for (key, c) in &other.coeffs {
            let e = self.coeffs.entry(*key).or_insert(0);
            *e += c * k;
            if *e == 0 {
                self.coeffs.remove(key);
            }
        }
        self.constant += other.constant * k;
    }

    fn scaled(&self, k: i128) -> Lin {
        let mut out = Lin::default();
        out.add_scaled(self, k);
        out
    }

    fn coeff(&self, k: Key) -> i128 {
        self.coeffs.get(&k).copied().unwrap_or(0)
    }

    fn gcd_coeffs(&self) -> i128 {
        self.coeffs.values().fold(0i128, |g, c| g.gcd(c))
    }

    fn value(&self, model: &BTreeMap<Key, Q>) -> Q {
        let mut v = Q::from_integer(self.constant);
        for (k, c) in &self.coeffs {
            v += model.get(k).copied().unwrap_or_else(Q::zero) * Q::from_integer(*c);
        }
        v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    /// `lin = 0`
    Eq,
    /// `lin >= 0`
    Ge,
    /// `lin != 0`
    Ne,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinCon {
    pub lin: Lin,
    pub rel: Rel,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum LinearizeError {
    #[error("non-linear expression {0}")]
    NonLinear(String),
    #[error("not an integer expression: {0}")]
    Invalid(String),
}

/// Translates terms to linear forms. Helper unknowns for `div`/`mod` are
/// numbered from `next_aux` and their defining constraints collected in
/// `side`.
#[derive(Default)]
pub struct Linearizer {
    next_aux: u32,
    pub side: Vec<LinCon>,
}

impl Linearizer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn term(&mut self, t: &Term) -> Result<Lin, LinearizeError> {
        match t {
            Term::Int(n) => Ok(Lin::constant(*n as i128)),
            Term::Var(v) => Ok(Lin::key(Key::Var(v.id()))),
            Term::Arith(op, args) => match op {
                ArithOp::Add | ArithOp::Sub => {
                    let mut a = self.term(&args[0])?;
                    let b = self.term(&args[1])?;
                    a.add_scaled(&b, if *op == ArithOp::Add { 1 } else { -1 });
                    Ok(a)
                }
                ArithOp::Neg => Ok(self.term(&args[0])?.scaled(-1)),
                ArithOp::Mul => {
                    let a = self.term(&args[0])?;
                    let b = self.term(&args[1])?;
                    if a.is_constant() {
                        Ok(b.scaled(a.constant))
                    } else if b.is_constant() {
                        Ok(a.scaled(b.constant))
                    } else {
                        Err(LinearizeError::NonLinear(t.to_string()))
                    }
                }
                ArithOp::Div | ArithOp::Mod => {
                    let a = self.term(&args[0])?;
                    let b = self.term(&args[1])?;
                    if !b.is_constant() {
                        return Err(LinearizeError::NonLinear(t.to_string()));
                    }
                    let k = b.constant;
                    if k == 0 {
                        return Err(LinearizeError::Invalid(t.to_string()));
                    }
                    let q = Key::Aux(self.next_aux);
                    let r = Key::Aux(self.next_aux + 1);
                    self.next_aux += 2;
                    // a = k*q + r, 0 <= r <= |k| - 1
                    let mut def = a;
                    def.add_scaled(&Lin::key(q), -k);
                    def.add_scaled(&Lin::key(r), -1);
                    self.side.push(LinCon {
                        lin: def,
                        rel: Rel::Eq,
                    });
                    self.side.push(LinCon {
                        lin: Lin::key(r),
                        rel: Rel::Ge,
                    });
                    let mut upper = Lin::key(r).scaled(-1);
                    upper.constant = k.abs() - 1;
                    self.side.push(LinCon {
                        lin: upper,
                        rel: Rel::Ge,
                    });
                    Ok(Lin::key(if *op == ArithOp::Div { q } else { r }))
                }
            },
            other => Err(LinearizeError::Invalid(other.to_string())),
        }
    }

    /// Linear form of an arithmetic constraint (`is`, comparisons, `neq`).
    pub fn constraint(&mut self, c: &Constraint) -> Result<LinCon, LinearizeError> {
        let a = self.term(&c.args[0])?;
        let b = self.term(&c.args[1])?;
        let diff = |mut x: Lin, y: &Lin, offset: i128| {
            x.add_scaled(y, -1);
            x.constant += offset;
            x
        };
        Ok(match c.sym {
            Sym::Is | Sym::Eq => LinCon {
                lin: diff(a, &b, 0),
                rel: Rel::Eq,
            },
            Sym::Neq => LinCon {
                lin: diff(a, &b, 0),
                rel: Rel::Ne,
            },
            Sym::Le => LinCon {
                lin: diff(b, &a, 0),
                rel: Rel::Ge,
            },
            Sym::Lt => LinCon {
                lin: diff(b, &a, -1),
                rel: Rel::Ge,
            },
            Sym::Ge => LinCon {
                lin: diff(a, &b, 0),
                rel: Rel::Ge,
            },
            Sym::Gt => LinCon {
                lin: diff(a, &b, -1),
                rel: Rel::Ge,
            },
            other => {
                return Err(LinearizeError::Invalid(format!(
                    "{} is not an arithmetic constraint",
                    other.name()
                )))
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sat {
    /// Satisfiable, with an integer model for every unknown mentioned.
    Sat(BTreeMap<Key, i128>),
    Unsat,
    /// The node budget ran out.
    Unknown,
}

/// Decides integer satisfiability of a conjunction of linear constraints.
pub fn check(cons: &[LinCon], node_limit: usize) -> Sat {
    let keys: BTreeSet<Key> = cons
        .iter()
        .flat_map(|c| c.lin.coeffs.keys().copied())
        .collect();
    let mut stack: Vec<Vec<LinCon>> = vec![cons.to_vec()];
    let mut nodes = 0;
    while let Some(node) = stack.pop() {
        nodes += 1;
        if nodes > node_limit {
            return Sat::Unknown;
        }
        let (hard, neqs): (Vec<LinCon>, Vec<LinCon>) =
            node.iter().cloned().partition(|c| c.rel != Rel::Ne);
        let model = match relax(&hard) {
            Some(m) => m,
            None => continue,
        };
        if let Some((&k, v)) = model.iter().find(|(_, v)| !v.is_integer()) {
            let mut lo = node.clone();
            let mut le = Lin::key(k).scaled(-1);
            le.constant = v.floor().to_integer();
            lo.push(LinCon {
                lin: le,
                rel: Rel::Ge,
            });
            let mut hi = node;
            let mut ge = Lin::key(k);
            ge.constant = -v.ceil().to_integer();
            hi.push(LinCon {
                lin: ge,
                rel: Rel::Ge,
            });
            stack.push(hi);
            stack.push(lo);
            continue;
        }
        if let Some(bad) = neqs.iter().find(|c| c.lin.value(&model).is_zero()) {
            let mut below = node.clone();
            let mut l = bad.lin.scaled(-1);
            l.constant -= 1;
            below.retain(|c| c != bad);
            below.push(LinCon {
                lin: l,
                rel: Rel::Ge,
            });
            let mut above = node;
            let mut u = bad.lin.clone();
            u.constant -= 1;
            above.retain(|c| c != bad);
            above.push(LinCon {
                lin: u,
                rel: Rel::Ge,
            });
            stack.push(above);
            stack.push(below);
            continue;
        }
        let mut out = BTreeMap::new();
        for k in &keys {
            let v = model.get(k).copied().unwrap_or_else(Q::zero);
            out.insert(*k, v.to_integer());
        }
        return Sat::Sat(out);
    }
    Sat::Unsat
}

/// Divides an inequality by the gcd of its coefficients, rounding the
/// constant down (valid for integer unknowns).
fn tighten(mut c: LinCon) -> Option<LinCon> {
    let g = c.lin.gcd_coeffs();
    if g == 0 {
        let ok = match c.rel {
            Rel::Eq => c.lin.constant == 0,
            Rel::Ge => c.lin.constant >= 0,
            Rel::Ne => c.lin.constant != 0,
        };
        return if ok { Some(c) } else { None };
    }
    if g > 1 {
        match c.rel {
            Rel::Eq => {
                if c.lin.constant % g != 0 {
                    return None;
                }
                c.lin.constant /= g;
            }
            Rel::Ge => c.lin.constant = Integer::div_floor(&c.lin.constant, &g),
            Rel::Ne => {
                if c.lin.constant % g != 0 {
                    c.lin.coeffs.clear();
                    c.lin.constant = 1;
                    return Some(c);
                }
                c.lin.constant /= g;
            }
        }
        for v in c.lin.coeffs.values_mut() {
            *v /= g;
        }
    }
    Some(c)
}

/// Rational feasibility of equalities and inequalities, with a model that
/// prefers integer values.
fn relax(cons: &[LinCon]) -> Option<BTreeMap<Key, Q>> {
    let mut eqs = Vec::new();
    let mut ineqs = Vec::new();
    for c in cons {
        let c = tighten(c.clone())?;
        if c.lin.is_constant() {
            continue;
        }
        match c.rel {
            Rel::Eq => eqs.push(c.lin),
            _ => ineqs.push(c.lin),
        }
    }

    // Equalities: solve for one unknown each and substitute everywhere.
    let mut solved: Vec<(Key, Lin)> = Vec::new();
    while let Some(eq) = eqs.pop() {
        let (&k, &a) = eq
            .coeffs
            .iter()
            .min_by_key(|(_, c)| c.abs())
            .expect("non-constant");
        let eliminate = |target: &Lin| -> Lin {
            let b = target.coeff(k);
            if b == 0 {
                return target.clone();
            }
            let mut out = target.scaled(a.abs());
            out.add_scaled(&eq, -b * a.signum());
            out
        };
        let mut next_eqs = Vec::new();
        for e in eqs.drain(..) {
            let e = tighten(LinCon {
                lin: eliminate(&e),
                rel: Rel::Eq,
            })?;
            if !e.lin.is_constant() {
                next_eqs.push(e.lin);
            }
        }
        eqs = next_eqs;
        let mut next_ineqs = Vec::new();
        for i in ineqs.drain(..) {
            let i = tighten(LinCon {
                lin: eliminate(&i),
                rel: Rel::Ge,
            })?;
            if !i.lin.is_constant() {
                next_ineqs.push(i.lin);
            }
        }
        ineqs = next_ineqs;
        for (_, s) in solved.iter_mut() {
            *s = eliminate_rational(s, k, &eq);
        }
        solved.push((k, eq));
    }

    // Fourier-Motzkin on the inequalities.
    let mut stages: Vec<(Key, Vec<Lin>)> = Vec::new();
    let mut current = ineqs;
    loop {
        let keys: BTreeSet<Key> = current
            .iter()
            .flat_map(|l| l.coeffs.keys().copied())
            .collect();
        let Some(k) = keys.iter().copied().min_by_key(|k| {
            let pos = current.iter().filter(|l| l.coeff(*k) > 0).count();
            let neg = current.iter().filter(|l| l.coeff(*k) < 0).count();
            pos * neg
        }) else {
            break;
        };
        let (with, without): (Vec<Lin>, Vec<Lin>) =
            current.into_iter().partition(|l| l.coeff(k) != 0);
        let mut next = without;
        let pos: Vec<&Lin> = with.iter().filter(|l| l.coeff(k) > 0).collect();
        let neg: Vec<&Lin> = with.iter().filter(|l| l.coeff(k) < 0).collect();
        let mut seen = BTreeSet::new();
        for p in &pos {
            for n in &neg {
                let a = p.coeff(k);
                let b = -n.coeff(k);
                let mut comb = p.scaled(b);
                comb.add_scaled(n, a);
                let c = tighten(LinCon {
                    lin: comb,
                    rel: Rel::Ge,
                })?;
                if c.lin.is_constant() {
                    continue;
                }
                let sig: Vec<(Key, i128)> =
                    c.lin.coeffs.iter().map(|(k, v)| (*k, *v)).collect();
                if seen.insert((sig, c.lin.constant)) {
                    next.push(c.lin);
                }
            }
        }
        stages.push((k, with));
        current = next;
    }

    // Back-substitution.
    let mut model: BTreeMap<Key, Q> = BTreeMap::new();
    for (k, bounds) in stages.iter().rev() {
        let mut lo: Option<Q> = None;
        let mut hi: Option<Q> = None;
        for l in bounds {
            let a = Q::from_integer(l.coeff(*k));
            let mut rest = l.clone();
            rest.coeffs.remove(k);
            let r = rest.value(&model);
            // a*x + r >= 0
            let bound = -r / a;
            if a.is_positive() {
                lo = Some(lo.map_or(bound, |x: Q| x.max(bound)));
            } else {
                hi = Some(hi.map_or(bound, |x: Q| x.min(bound)));
            }
        }
        let v = pick(lo, hi)?;
        model.insert(*k, v);
    }
    for (k, eq) in solved.iter().rev() {
        let a = Q::from_integer(eq.coeff(*k));
        let mut rest = eq.clone();
        rest.coeffs.remove(k);
        let v = -rest.value(&model) / a;
        model.insert(*k, v);
    }
    Some(model)
}

/// Removes `k` from a previously solved equation `s` using `eq` without
/// changing the solution set of `s = 0` for its own pivot.
fn eliminate_rational(s: &Lin, k: Key, eq: &Lin) -> Lin {
    let b = s.coeff(k);
    if b == 0 {
        return s.clone();
    }
    let a = eq.coeff(k);
    let mut out = s.scaled(a.abs());
    out.add_scaled(eq, -b * a.signum());
    out
}

fn pick(lo: Option<Q>, hi: Option<Q>) -> Option<Q> {
    match (lo, hi) {
        (Some(l), Some(h)) if l > h => None,
        (Some(l), Some(h)) => {
            let zero = Q::zero();
            let target = if l > zero {
                l.ceil()
            } else if h < zero {
                h.floor()
            } else {
                zero
            };
            if target >= l && target <= h {
                Some(target)
            } else {
                Some(l)
            }
        }
        (Some(l), None) => Some(if l > Q::zero() { l.ceil() } else { Q::zero() }),
        (None, Some(h)) => Some(if h < Q::zero() { h.floor() } else { Q::zero() }),
        (None, None) => Some(Q::zero()),
    }
}
