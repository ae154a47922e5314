use std::fmt;
use std::io::Write;
use std::str::FromStr;

use setlog::engine::Engine;
use setlog::syntax::Printer;

use crate::CliError;

/// Expected outcome of one goal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Expectation {
    Sat,
    Unsat,
    Answers(usize),
}

impl FromStr for Expectation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "sat" => Ok(Expectation::Sat),
            "unsat" => Ok(Expectation::Unsat),
            other => other
                .strip_prefix("answers=")
                .and_then(|n| n.trim().parse().ok())
                .map(Expectation::Answers)
                .ok_or_else(|| format!("expected sat, unsat or answers=N, got {:?}", other)),
        }
    }
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expectation::Sat => f.write_str("sat"),
            Expectation::Unsat => f.write_str("unsat"),
            Expectation::Answers(n) => write!(f, "answers={}", n),
        }
    }
}

/// Parses an expectations file: one `sat|unsat|answers=N` per line, blank
/// lines and `%` comments ignored.
pub fn parse_expectations(text: &str) -> Result<Vec<Expectation>, CliError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('%').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        out.push(line.parse().map_err(|_| CliError::Expectation {
            line: i + 1,
            text: line.to_string(),
        })?);
    }
    Ok(out)
}

#[derive(Clone, Debug, Default)]
pub struct BatchOptions {
    pub all_solutions: bool,
    pub max_solutions: Option<usize>,
    pub golden: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoalReport {
    pub goal: String,
    pub answers: usize,
    /// `Some(false)` when an expectation was given and not met.
    pub met: Option<bool>,
}

/// Runs each goal and prints its answers. Returns one report per goal.
pub fn run<W: Write>(
    engine: &mut Engine,
    goals: &[String],
    expectations: &[Expectation],
    opts: &BatchOptions,
    out: &mut W,
) -> Result<Vec<GoalReport>, CliError> {
    if !expectations.is_empty() && expectations.len() != goals.len() {
        return Err(CliError::ExpectationCount(goals.len(), expectations.len()));
    }
    let printer = Printer::answer(opts.golden);
    let mut reports = Vec::new();
    for (i, goal) in goals.iter().enumerate() {
        let expect = expectations.get(i).copied();
        let limit = match (expect, opts.max_solutions) {
            (Some(Expectation::Answers(n)), _) => Some(n + 1),
            (_, Some(m)) => Some(m),
            _ if opts.all_solutions => None,
            _ => Some(1),
        };
        writeln!(out, "{{log}}=> {}", goal.trim())?;
        let mut count = 0;
        for answer in engine.query(goal)? {
            let answer = answer?;
            if count > 0 {
                writeln!(out)?;
            }
            writeln!(out, "{}", answer.render(&printer))?;
            count += 1;
            if limit.is_some_and(|l| count >= l) {
                break;
            }
        }
        if count == 0 {
            writeln!(out, "no")?;
        }
        writeln!(out)?;
        let met = expect.map(|e| match e {
            Expectation::Sat => count > 0,
            Expectation::Unsat => count == 0,
            Expectation::Answers(n) => count == n,
        });
        if let (Some(false), Some(e)) = (met, expect) {
            writeln!(out, "expectation {} not met ({} answers)", e, count)?;
        }
        reports.push(GoalReport {
            goal: goal.clone(),
            answers: count,
            met,
        });
    }
    Ok(reports)
}
