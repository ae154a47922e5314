use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use setlog::arith::ArithMode;
use setlog::engine::{Config, Engine};
use setlog::verifier::{self, Verdict};
use setlog_cli::batch::{self, BatchOptions, Expectation};
use setlog_cli::repl::{self, Session};
use setlog_cli::{invariants, CliError, ERROR_PREFIX};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum IntSolver {
    Clpq,
    Clpfd,
}

#[derive(Parser, Debug)]
#[command(name = "setlog", version, about = "Finite-set constraint solver and specification animator")]
struct Cli {
    /// Program file to load; may be repeated.
    #[arg(long, value_name = "FILE")]
    consult: Vec<PathBuf>,
    /// Goal to solve non-interactively; may be repeated.
    #[arg(long, value_name = "GOAL")]
    goal: Vec<String>,
    #[arg(long)]
    type_check: bool,
    #[arg(long, value_enum, default_value = "clpq")]
    int_solver: IntSolver,
    #[arg(long)]
    all_solutions: bool,
    #[arg(long, value_name = "N")]
    max_solutions: Option<usize>,
    /// Expected outcome applied to every goal.
    #[arg(long, value_parser = ["sat", "unsat"])]
    expect: Option<String>,
    /// File with one `sat|unsat|answers=N` line per goal.
    #[arg(long, value_name = "FILE", conflicts_with = "expect")]
    expectations: Option<PathBuf>,
    /// Print set elements in sorted order.
    #[arg(long)]
    golden: bool,
    /// Maximum nesting of clause calls.
    #[arg(long, value_name = "N")]
    depth_limit: Option<usize>,
    /// Drop answers equivalent to an earlier one.
    #[arg(long)]
    dedup: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Shows that a goal is unsatisfiable.
    Prove {
        goal: String,
        #[arg(long, value_name = "SECS", default_value_t = 60)]
        timeout: u64,
    },
    /// Discharges the obligations listed in a TOML manifest.
    CheckInvariants { spec: PathBuf, manifest: PathBuf },
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.display().to_string(),
        source,
    })
}

fn engine(cli: &Cli) -> Result<Engine, CliError> {
    let config = Config {
        mode: match cli.int_solver {
            IntSolver::Clpq => ArithMode::Symbolic,
            IntSolver::Clpfd => ArithMode::FiniteDomain,
        },
        type_check: cli.type_check,
        depth_limit: cli.depth_limit,
        dedup: cli.dedup,
        ..Config::default()
    };
    let mut engine = Engine::with_config(config);
    for f in &cli.consult {
        engine.consult_file(f)?;
    }
    Ok(engine)
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match &cli.command {
        Some(Command::Prove { goal, timeout }) => {
            let mut engine = engine(&cli)?;
            let goal = engine.parse_goal(goal)?;
            let result = verifier::prove(&mut engine, &goal, std::time::Duration::from_secs(*timeout))?;
            writeln!(out, "{} ({} ms)", result.verdict.label(), result.elapsed.as_millis())?;
            return Ok(match result.verdict {
                Verdict::Theorem => ExitCode::SUCCESS,
                Verdict::Counterexample(a) => {
                    writeln!(out, "{}", a)?;
                    ExitCode::from(1)
                }
                Verdict::Inconclusive(reason) => {
                    writeln!(out, "{}", reason)?;
                    ExitCode::from(3)
                }
            });
        }
        Some(Command::CheckInvariants { spec, manifest }) => {
            let mut engine = engine(&cli)?;
            engine.consult_file(spec)?;
            let text = read(manifest)?;
            let m = invariants::parse_manifest(&manifest.display().to_string(), &text)?;
            let rows = invariants::check(&mut engine, &m, &mut out)?;
            let ok = rows.iter().all(|r| r.expected);
            return Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) });
        }
        None => {}
    }
    let mut engine = engine(&cli)?;
    if cli.goal.is_empty() {
        let mut session = Session::new(engine);
        session.golden = cli.golden;
        let stdin = io::stdin();
        repl::run(&mut session, stdin.lock(), &mut out)?;
        return Ok(ExitCode::SUCCESS);
    }
    let expectations: Vec<Expectation> = match (&cli.expect, &cli.expectations) {
        (Some(e), _) => vec![e.parse().expect("checked by clap"); cli.goal.len()],
        (None, Some(path)) => batch::parse_expectations(&read(path)?)?,
        (None, None) => Vec::new(),
    };
    let opts = BatchOptions {
        all_solutions: cli.all_solutions,
        max_solutions: cli.max_solutions,
        golden: cli.golden,
    };
    let reports = batch::run(&mut engine, &cli.goal, &expectations, &opts, &mut out)?;
    let ok = reports.iter().all(|r| r.met != Some(false));
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            let _ = io::stdout().lock().flush();
            eprintln!("{}{}", ERROR_PREFIX, e);
            ExitCode::from(2)
        }
    }
}
