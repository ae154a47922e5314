//! Invariance proofs by refutation.
//!
//! An obligation `I ∧ T ⇒ I'` is discharged by showing that
//! `I ∧ T ∧ ¬I'` has no solution. Negation is pushed down to atoms and each
//! atom is replaced by its complementary constraint.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use crate::arith::ArithMode;
use crate::engine::{Answer, Engine, EngineError};
use crate::goal::{Constraint, Goal};
use crate::syntax::{ParsedGoal, Printer};
use crate::term::{Term, Var};

pub const DEFAULT_PROOF_BUDGET: Duration = Duration::from_secs(60);

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error("{0} has no complementary constraint; negate it by hand")]
    NotNegatable(String),
    #[error("cannot negate the call {0}; inline it or supply the negated invariant")]
    NegatedCall(String),
    #[error("cannot negate a body with local variables ({0})")]
    LocalVariables(String),
    #[error("no clause {0}/{1}")]
    UnknownClause(String, usize),
    #[error("clause {0} must have exactly one definition to be used as an invariant")]
    AmbiguousInvariant(String),
    #[error("wiring mismatch: {0}")]
    Wiring(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

pub fn negate_constraint(c: &Constraint) -> Result<Constraint, VerifyError> {
    c.negated().ok_or_else(|| VerifyError::NotNegatable(c.to_string()))
}

/// Negation normal form of `g`, with atoms replaced by their complements.
pub fn negate_goal(g: &Goal) -> Result<Goal, VerifyError> {
    match g {
        Goal::Constraint(c) => Ok(Goal::Constraint(negate_constraint(c)?)),
        Goal::Conj(a, b) => Ok(negate_goal(a)?.or(negate_goal(b)?)),
        Goal::Disj(a, b) => Ok(negate_goal(a)?.and(negate_goal(b)?)),
        Goal::Call { .. } => Err(VerifyError::NegatedCall(g.to_string())),
        Goal::Dec { .. } => Ok(g.clone()),
        Goal::True => Err(VerifyError::NotNegatable("true".to_string())),
    }
}

/// Variable names used to wire an obligation. `after` defaults to the
/// `before` names with a trailing underscore.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Wiring {
    pub before: Vec<String>,
    pub io: Vec<String>,
    pub after: Vec<String>,
}

#[derive(Clone, Debug, Default)]
pub struct InvarianceObligation {
    pub invariant: String,
    pub operation: String,
    /// Goal text over the wiring variables, conjoined in front.
    pub hypotheses: Vec<String>,
    pub wiring: Option<Wiring>,
}

impl InvarianceObligation {
    pub fn new(invariant: &str, operation: &str) -> Self {
        InvarianceObligation {
            invariant: invariant.to_string(),
            operation: operation.to_string(),
            ..Default::default()
        }
    }

    pub fn hypothesis(mut self, goal: &str) -> Self {
        self.hypotheses.push(goal.trim().trim_end_matches('.').to_string());
        self
    }

    pub fn wiring(mut self, wiring: Wiring) -> Self {
        self.wiring = Some(wiring);
        self
    }
}

fn initial(name: &str, taken: &mut Vec<String>) -> String {
    let first: String = name
        .chars()
        .find(|c| c.is_alphabetic())
        .map(|c| c.to_uppercase().collect())
        .unwrap_or_else(|| "V".to_string());
    let mut candidate = first.clone();
    let mut k = 1;
    while taken.contains(&candidate) || taken.contains(&format!("{}_", candidate)) {
        candidate = format!("{}{}", first, k);
        k += 1;
    }
    taken.push(candidate.clone());
    candidate
}

/// Default wiring: state-before parameters first, inputs and outputs in
/// declaration order, state-after parameters last. Names are the capitalised
/// initials of the operation's parameter names.
pub fn default_wiring(engine: &Engine, o: &InvarianceObligation) -> Result<Wiring, VerifyError> {
    let inv = single_clause(engine, &o.invariant)?;
    let k = inv.arity();
    let op = engine
        .db
        .names()
        .into_iter()
        .find(|(n, _)| *n == o.operation)
        .ok_or_else(|| VerifyError::UnknownClause(o.operation.clone(), 0))?;
    let n = op.1;
    if n < 2 * k {
        return Err(VerifyError::Wiring(format!(
            "{} has {} parameters, fewer than twice the state size {}",
            o.operation, n, k
        )));
    }
    let clause = engine.db.lookup(&o.operation, n).unwrap()[0].clone();
    let names: Vec<String> = clause
        .params
        .iter()
        .map(|p| match p {
            Term::Var(v) => v.name().to_string(),
            _ => "V".to_string(),
        })
        .collect();
    let mut taken = Vec::new();
    let before: Vec<String> = names[..k].iter().map(|s| initial(s, &mut taken)).collect();
    let io: Vec<String> = names[k..n - k].iter().map(|s| initial(s, &mut taken)).collect();
    let after = before.iter().map(|b| format!("{}_", b)).collect();
    Ok(Wiring { before, io, after })
}

fn single_clause(engine: &Engine, name: &str) -> Result<crate::goal::Clause, VerifyError> {
    let found: Vec<_> = engine.db.names().into_iter().filter(|(n, _)| n == name).collect();
    match found.as_slice() {
        [(n, a)] => {
            let cs = engine.db.lookup(n, *a).unwrap();
            if cs.len() != 1 {
                return Err(VerifyError::AmbiguousInvariant(name.to_string()));
            }
            Ok(cs[0].clone())
        }
        [] => Err(VerifyError::UnknownClause(name.to_string(), 0)),
        _ => Err(VerifyError::AmbiguousInvariant(name.to_string())),
    }
}

/// Instantiates the invariant body on the given state variable names.
fn instantiate(clause: &crate::goal::Clause, state: &[String]) -> Result<Goal, VerifyError> {
    let mut renaming: HashMap<u32, Term> = HashMap::new();
    for (p, name) in clause.params.iter().zip(state) {
        match p {
            Term::Var(v) => {
                renaming.insert(v.id(), Term::Var(v.with_name(name)));
            }
            _ => {
                return Err(VerifyError::Wiring(format!(
                    "invariant {} has a non-variable parameter",
                    clause.name
                )))
            }
        }
    }
    let locals: Vec<String> = clause
        .body
        .vars()
        .iter()
        .filter(|v| !renaming.contains_key(&v.id()))
        .map(|v| v.name().to_string())
        .collect();
    if !locals.is_empty() {
        return Err(VerifyError::LocalVariables(locals.join(", ")));
    }
    Ok(clause.body.map_vars(&mut |v: &Var| renaming.get(&v.id()).cloned()))
}

/// Builds `hypotheses & I(before) & T(before, io, after) & ¬I(after)`.
pub fn build_invariance_goal(engine: &mut Engine, o: &InvarianceObligation) -> Result<ParsedGoal, VerifyError> {
    let text = invariance_goal_text(engine, o)?;
    Ok(engine.parse_goal(&text)?)
}

/// Source text of the obligation goal.
pub fn invariance_goal_text(engine: &Engine, o: &InvarianceObligation) -> Result<String, VerifyError> {
    let wiring = match &o.wiring {
        Some(w) => {
            let mut w = w.clone();
            if w.after.is_empty() {
                w.after = w.before.iter().map(|b| format!("{}_", b)).collect();
            }
            w
        }
        None => default_wiring(engine, o)?,
    };
    let inv = single_clause(engine, &o.invariant)?;
    if inv.arity() != wiring.before.len() || inv.arity() != wiring.after.len() {
        return Err(VerifyError::Wiring(format!(
            "invariant {} takes {} arguments but the state has {}",
            o.invariant,
            inv.arity(),
            wiring.before.len()
        )));
    }
    let mut all: Vec<&String> = wiring.before.iter().chain(&wiring.io).chain(&wiring.after).collect();
    all.sort();
    if all.windows(2).any(|w| w[0] == w[1]) {
        return Err(VerifyError::Wiring("wiring variables must be distinct".to_string()));
    }
    let arity = wiring.before.len() + wiring.io.len() + wiring.after.len();
    if engine.db.lookup(&o.operation, arity).is_none() {
        return Err(VerifyError::UnknownClause(o.operation.clone(), arity));
    }
    let printer = Printer::source();
    let before = instantiate(&inv, &wiring.before)?;
    let after = negate_goal(&instantiate(&inv, &wiring.after)?)?;
    let args: Vec<&str> = wiring
        .before
        .iter()
        .chain(&wiring.io)
        .chain(&wiring.after)
        .map(String::as_str)
        .collect();
    let call = format!("{}({})", o.operation, args.join(","));
    let mut parts: Vec<String> = o.hypotheses.clone();
    parts.push(printer.goal(&before));
    parts.push(call);
    let negated = printer.goal(&after);
    parts.push(if matches!(after, Goal::Disj(..)) {
        format!("({})", negated)
    } else {
        negated
    });
    Ok(parts.join(" & "))
}

#[derive(Clone, Debug)]
pub enum Verdict {
    Theorem,
    Counterexample(Box<Answer>),
    Inconclusive(String),
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Theorem => "THEOREM",
            Verdict::Counterexample(_) => "COUNTEREXAMPLE",
            Verdict::Inconclusive(_) => "INCONCLUSIVE",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ProofResult {
    pub verdict: Verdict,
    pub elapsed: Duration,
}

/// Decides whether `goal` is unsatisfiable. Symbolic arithmetic is forced
/// for the duration of the proof.
pub fn prove(engine: &mut Engine, goal: &ParsedGoal, budget: Duration) -> Result<ProofResult, VerifyError> {
    let saved = engine.config.clone();
    engine.config.mode = ArithMode::Symbolic;
    engine.config.timeout = Some(budget);
    let start = Instant::now();
    let outcome = match engine.solve(goal) {
        Ok(mut sols) => sols.next(),
        Err(e) => Some(Err(e)),
    };
    engine.config = saved;
    let verdict = match outcome {
        None => Verdict::Theorem,
        Some(Ok(answer)) if answer.int_unknown => {
            Verdict::Inconclusive("integer check exceeded its search budget".to_string())
        }
        Some(Ok(answer)) => Verdict::Counterexample(Box::new(answer)),
        Some(Err(EngineError::Timeout)) => Verdict::Inconclusive(format!("no result within {:?}", budget)),
        Some(Err(EngineError::ResourceLimit(msg))) => Verdict::Inconclusive(msg),
        Some(Err(e)) => return Err(e.into()),
    };
    Ok(ProofResult {
        verdict,
        elapsed: start.elapsed(),
    })
}

pub fn prove_text(engine: &mut Engine, goal: &str) -> Result<ProofResult, VerifyError> {
    let g = engine.parse_goal(goal)?;
    prove(engine, &g, DEFAULT_PROOF_BUDGET)
}

pub fn prove_obligation(engine: &mut Engine, o: &InvarianceObligation) -> Result<ProofResult, VerifyError> {
    let g = build_invariance_goal(engine, o)?;
    prove(engine, &g, DEFAULT_PROOF_BUDGET)
}
