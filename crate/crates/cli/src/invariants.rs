//! Batch discharge of proof obligations listed in a TOML manifest.
//!
//! ```toml
//! [[obligation]]
//! invariant = "birthdayBookInv"
//! operation = "addBirthday"
//! io = ["N", "C"]
//!
//! [[obligation]]
//! name = "init satisfies dom"
//! goal = "birthdayBookInit(K,B) & ndom(B,K)"
//! ```

use std::io::Write;
use std::time::Duration;

use serde::Deserialize;
use setlog::engine::Engine;
use setlog::verifier::{self, InvarianceObligation, Verdict, Wiring};

use crate::CliError;

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    #[serde(default, rename = "obligation")]
    pub obligations: Vec<Obligation>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Obligation {
    pub name: Option<String>,
    pub invariant: Option<String>,
    pub operation: Option<String>,
    #[serde(default)]
    pub hypotheses: Vec<String>,
    pub before: Option<Vec<String>>,
    pub io: Option<Vec<String>>,
    pub after: Option<Vec<String>>,
    /// A goal proved directly instead of a generated obligation.
    pub goal: Option<String>,
    /// `theorem` (default) or `counterexample`.
    pub expect: Option<String>,
    pub timeout_secs: Option<u64>,
}

impl Obligation {
    fn label(&self) -> String {
        if let Some(n) = &self.name {
            return n.clone();
        }
        match (&self.invariant, &self.operation, &self.goal) {
            (Some(i), Some(o), _) => format!("{} preserves {}", o, i),
            (_, _, Some(g)) => g.clone(),
            _ => "?".to_string(),
        }
    }
}

pub fn parse_manifest(path: &str, text: &str) -> Result<Manifest, CliError> {
    toml::from_str(text).map_err(|e| CliError::Manifest {
        path: path.to_string(),
        message: e.to_string(),
    })
}

#[derive(Clone, Debug)]
pub struct Row {
    pub label: String,
    pub verdict: String,
    pub millis: u128,
    pub expected: bool,
}

/// Proves every obligation of the manifest and prints a table.
pub fn check<W: Write>(engine: &mut Engine, manifest: &Manifest, out: &mut W) -> Result<Vec<Row>, CliError> {
    let mut rows = Vec::new();
    for o in &manifest.obligations {
        let budget = o
            .timeout_secs
            .map(Duration::from_secs)
            .unwrap_or(verifier::DEFAULT_PROOF_BUDGET);
        let label = o.label();
        let goal = match (&o.goal, &o.invariant, &o.operation) {
            (Some(g), _, _) => engine.parse_goal(g)?,
            (None, Some(inv), Some(op)) => {
                let mut ob = InvarianceObligation::new(inv, op);
                for h in &o.hypotheses {
                    ob = ob.hypothesis(h);
                }
                if let Some(before) = &o.before {
                    ob = ob.wiring(Wiring {
                        before: before.clone(),
                        io: o.io.clone().unwrap_or_default(),
                        after: o.after.clone().unwrap_or_default(),
                    });
                } else if o.io.is_some() || o.after.is_some() {
                    let mut w = verifier::default_wiring(engine, &ob)?;
                    if let Some(io) = &o.io {
                        w.io = io.clone();
                    }
                    if let Some(after) = &o.after {
                        w.after = after.clone();
                    }
                    ob = ob.wiring(w);
                }
                verifier::build_invariance_goal(engine, &ob)?
            }
            _ => {
                return Err(CliError::Manifest {
                    path: label,
                    message: "an obligation needs either `goal` or both `invariant` and `operation`".to_string(),
                })
            }
        };
        let result = verifier::prove(engine, &goal, budget)?;
        let want = o.expect.as_deref().unwrap_or("theorem").to_ascii_uppercase();
        let verdict = result.verdict.label().to_string();
        rows.push(Row {
            label,
            expected: verdict == want,
            verdict,
            millis: result.elapsed.as_millis(),
        });
        if let Verdict::Counterexample(a) = &result.verdict {
            let last = rows.last().unwrap();
            writeln!(out, "counterexample for {}:\n{}", last.label, a)?;
        }
    }
    let width = rows.iter().map(|r| r.label.len()).max().unwrap_or(10).max(10);
    writeln!(out, "{:<width$}  {:<14}  {:>8}", "obligation", "verdict", "time", width = width)?;
    for r in &rows {
        let mark = if r.expected { "" } else { "  (unexpected)" };
        writeln!(
            out,
            "{:<width$}  {:<14}  {:>6}ms{}",
            r.label,
            r.verdict,
            r.millis,
            mark,
            width = width
        )?;
    }
    Ok(rows)
}
