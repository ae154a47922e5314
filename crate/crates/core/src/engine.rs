//! Clause database and depth-first goal solver.
//!
//! A search node is a store plus an agenda of pending goals. Disjunctions,
//! clause alternatives and branching rewrites clone the node; alternatives
//! are explored left to right with chronological backtracking.
//!
//! When a node's agenda is empty the final phase runs: non-linear arithmetic
//! is rejected, finite-domain labeling is performed in `clpfd` mode, and the
//! remaining residual store is grounded with the standard recipe (set
//! variables to `{}`, other variables to fresh atoms). A store that does not
//! ground that way is split on one of its set variables, `V = {}` or
//! `V = {E/V'} & E nin V'`, and both cases are searched again.

use std::collections::{HashMap, HashSet};
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::arith::{self, ArithMode, Key, LinCon, LinearizeError, Linearizer, Sat};
use crate::goal::{Clause, Constraint, Goal, Sym};
use crate::solver::{self, Ctx, Outcome, Store};
use crate::syntax::{self, Directive, ParsedGoal, Printer, Query, SyntaxError};
use crate::term::{Substitution, Term, Var, VarGen};
use crate::types::{TypeEnv, TypeError};

pub const FD_WARNING: &str = "***WARNING***: non-finite domain";

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error("call to undefined clause {name}/{arity}")]
    UnknownClause { name: String, arity: usize },
    #[error("clause {0} is already defined")]
    DuplicateClause(String),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("time limit exceeded")]
    Timeout,
    #[error("non-linear arithmetic is not supported: {0}")]
    NonLinear(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0} is not a goal")]
    NotAGoal(String),
}

#[derive(Clone, Debug)]
pub struct Config {
    pub mode: ArithMode,
    pub type_check: bool,
    /// Maximum nesting of clause calls.
    pub depth_limit: Option<usize>,
    /// Maximum number of set-variable splits along one branch when a solved
    /// store does not ground with the standard recipe.
    pub net_limit: usize,
    pub timeout: Option<Duration>,
    /// Branch-and-bound nodes per integer satisfiability check.
    pub lia_node_limit: usize,
    /// Skip answers equivalent to one already reported, up to constraint
    /// order.
    pub dedup: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            mode: ArithMode::Symbolic,
            type_check: false,
            depth_limit: None,
            net_limit: 24,
            timeout: None,
            lia_node_limit: 4000,
            dedup: false,
        }
    }
}

/// One solution: bindings of goal variables and the residual constraints.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Answer {
    pub bindings: Vec<(String, Term)>,
    pub constraints: Vec<Constraint>,
    pub warnings: Vec<String>,
    /// Ground values for every goal variable satisfying the answer.
    pub witness: Vec<(String, Term)>,
    /// Some integer check ran out of budget on the way to this answer.
    pub int_unknown: bool,
}

impl Answer {
    pub fn binding(&self, name: &str) -> Option<&Term> {
        self.bindings.iter().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn render(&self, printer: &Printer) -> String {
        let mut out = String::new();
        for w in &self.warnings {
            out.push_str(w);
            out.push('\n');
        }
        if self.bindings.is_empty() {
            out.push_str("true");
        } else {
            let lines: Vec<String> = self
                .bindings
                .iter()
                .map(|(n, t)| format!("{} = {}", n, printer.term(t)))
                .collect();
            out.push_str(&lines.join(",\n"));
        }
        if !self.constraints.is_empty() {
            let cs: Vec<String> = self.constraints.iter().map(|c| printer.constraint(c)).collect();
            out.push_str("\nConstraint: ");
            out.push_str(&cs.join(", "));
        }
        out
    }
}

impl std::fmt::Display for Answer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.render(&Printer::answer(false)))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub calls: usize,
    pub steps: usize,
}

#[derive(Clone, Debug, Default)]
pub struct Database {
    clauses: Vec<Clause>,
    index: HashMap<(Arc<str>, usize), Vec<usize>>,
    texts: HashSet<String>,
}

impl Database {
    pub fn add(&mut self, clause: Clause) -> Result<(), EngineError> {
        let text = clause.to_string();
        if !self.texts.insert(text.clone()) {
            return Err(EngineError::DuplicateClause(text));
        }
        self.index
            .entry((clause.name.clone(), clause.arity()))
            .or_default()
            .push(self.clauses.len());
        self.clauses.push(clause);
        Ok(())
    }

    pub fn lookup(&self, name: &str, arity: usize) -> Option<Vec<&Clause>> {
        self.index
            .get(&(Arc::from(name), arity))
            .map(|ix| ix.iter().map(|&i| &self.clauses[i]).collect())
    }

    /// Distinct `(name, arity)` pairs in definition order.
    pub fn names(&self) -> Vec<(String, usize)> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for c in &self.clauses {
            if seen.insert((c.name.clone(), c.arity())) {
                out.push((c.name.to_string(), c.arity()));
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }
}

pub struct Engine {
    pub db: Database,
    pub types: TypeEnv,
    pub config: Config,
    gen: VarGen,
}

impl Default for Engine {
    fn default() -> Self {
        Self::new()
    }
}

impl Engine {
    pub fn new() -> Self {
        Engine {
            db: Database::default(),
            types: TypeEnv::new(),
            config: Config::default(),
            gen: VarGen::new(),
        }
    }

    pub fn with_config(config: Config) -> Self {
        Engine {
            config,
            ..Engine::new()
        }
    }

    pub fn gen(&mut self) -> &mut VarGen {
        &mut self.gen
    }

    /// Loads program text. Returns the number of clauses added.
    pub fn consult_str(&mut self, text: &str) -> Result<usize, EngineError> {
        self.consult_text(text, None)
    }

    pub fn consult_file(&mut self, path: impl AsRef<Path>) -> Result<usize, EngineError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| EngineError::Io {
            path: path.display().to_string(),
            source,
        })?;
        self.consult_text(&text, path.parent().map(Path::to_path_buf))
    }

    fn consult_text(&mut self, text: &str, dir: Option<PathBuf>) -> Result<usize, EngineError> {
        let program = syntax::parse_program(text, &mut self.gen)?;
        let mut added = 0;
        for item in program.items {
            match item {
                syntax::Item::Directive { directive, .. } => {
                    added += self.directive(directive, dir.as_deref())?;
                }
                syntax::Item::Clause { clause, .. } => {
                    if self.config.type_check {
                        self.types.check_clause(&clause)?;
                    } else {
                        self.types.note_clause(&clause);
                    }
                    self.db.add(clause)?;
                    added += 1;
                }
            }
        }
        Ok(added)
    }

    /// Applies a directive or command. Returns the number of clauses loaded
    /// by a nested consult.
    pub fn directive(&mut self, d: Directive, dir: Option<&Path>) -> Result<usize, EngineError> {
        match d {
            Directive::DecType(name, t) => self.types.register_synonym(&name, t)?,
            Directive::DecPType(sig) => self.types.register_signature(sig)?,
            Directive::TypeCheck => self.config.type_check = true,
            Directive::NoTypeCheck => self.config.type_check = false,
            Directive::IntSolver(mode) => self.config.mode = mode,
            Directive::Consult(file) => {
                if file == "setlogliblist.slog" {
                    return Ok(0);
                }
                let path = match dir {
                    Some(d) if Path::new(&file).is_relative() => d.join(&file),
                    _ => PathBuf::from(&file),
                };
                return self.consult_file(path);
            }
        }
        Ok(0)
    }

    /// Parses a goal; the final dot may be omitted.
    pub fn parse_goal(&mut self, text: &str) -> Result<ParsedGoal, EngineError> {
        let trimmed = text.trim_end();
        if trimmed.ends_with('.') {
            Ok(syntax::parse_goal(text, &mut self.gen)?)
        } else {
            Ok(syntax::parse_goal(&format!("{}.", trimmed), &mut self.gen)?)
        }
    }

    pub fn parse_query(&mut self, text: &str) -> Result<Query, EngineError> {
        Ok(syntax::parse_query(text, &mut self.gen)?)
    }

    /// Starts solving a parsed goal, type checking it first when enabled.
    pub fn solve(&mut self, goal: &ParsedGoal) -> Result<Solutions<'_>, EngineError> {
        if self.config.type_check {
            self.types.check_goal(&goal.goal)?;
        }
        let node = Node::new(Store::new(), vec![Item::new(goal.goal.clone(), 0)]);
        Ok(self.search(node, goal.vars.clone()))
    }

    /// Parses and solves a goal.
    pub fn query(&mut self, text: &str) -> Result<Solutions<'_>, EngineError> {
        let goal = self.parse_goal(text)?;
        self.solve(&goal)
    }

    /// Solves the constraints posted to `store`.
    pub fn solve_store(&mut self, store: Store, vars: Vec<Var>) -> Solutions<'_> {
        let mut store = store;
        let items = std::mem::take(&mut store.posted)
            .into_iter()
            .rev()
            .map(|c| Item::new(Goal::Constraint(c), 0))
            .collect();
        let node = Node::new(store, items);
        self.search(node, vars)
    }

    fn search(&mut self, node: Node, vars: Vec<Var>) -> Solutions<'_> {
        let deadline = self.config.timeout.map(|d| Instant::now() + d);
        Solutions {
            search: Search {
                db: &self.db,
                gen: &mut self.gen,
                config: &self.config,
                stack: vec![node],
                stats: Stats::default(),
                deadline,
                net: true,
                truncated: false,
            },
            vars,
            done: false,
            seen: HashSet::new(),
        }
    }
}

/// Lazily produced answers of one goal.
pub struct Solutions<'a> {
    search: Search<'a>,
    vars: Vec<Var>,
    done: bool,
    /// Keys of answers already reported.
    seen: HashSet<String>,
}

impl Solutions<'_> {
    pub fn stats(&self) -> Stats {
        self.search.stats
    }
}

impl Iterator for Solutions<'_> {
    type Item = Result<Answer, EngineError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        loop {
            match self.search.next_solved(&self.vars) {
                None => {
                    self.done = true;
                    return None;
                }
                Some(Err(e)) => {
                    self.done = true;
                    return Some(Err(e));
                }
                Some(Ok(node)) => {
                    let answer = make_answer(&node, &self.vars);
                    if !self.search.config.dedup || self.seen.insert(answer_key(&answer)) {
                        return Some(Ok(answer));
                    }
                }
            }
        }
    }
}

/// Rendering of an answer that ignores constraint order and the orientation
/// of disequalities.
fn answer_key(a: &Answer) -> String {
    let p = Printer::answer(true);
    let mut cs: Vec<String> = a
        .constraints
        .iter()
        .map(|c| {
            let mut c = c.clone();
            if c.sym == Sym::Neq && p.term(&c.args[1]) < p.term(&c.args[0]) {
                c.args.swap(0, 1);
            }
            p.constraint(&c)
        })
        .collect();
    cs.sort();
    let bs: Vec<String> = a.bindings.iter().map(|(n, t)| format!("{}={}", n, p.term(t))).collect();
    format!("{}|{}", bs.join(","), cs.join(","))
}

#[derive(Clone, Debug)]
struct Item {
    goal: Goal,
    depth: usize,
}

impl Item {
    fn new(goal: Goal, depth: usize) -> Self {
        Item { goal, depth }
    }

    fn goal_sym(&self) -> Option<Sym> {
        match &self.goal {
            Goal::Constraint(c) => Some(c.sym),
            _ => None,
        }
    }
}

#[derive(Clone, Debug)]
struct Node {
    store: Store,
    /// Stack of pending goals; the last item is solved next.
    agenda: Vec<Item>,
    fd_warning: bool,
    int_unknown: bool,
    witness: Option<Store>,
    /// Set variables split so far to make the store groundable.
    expansions: usize,
}

impl Node {
    fn new(store: Store, agenda: Vec<Item>) -> Self {
        Node {
            store,
            agenda,
            fd_warning: false,
            int_unknown: false,
            witness: None,
            expansions: 0,
        }
    }

    fn push_goals(&mut self, goals: Vec<Goal>, depth: usize) {
        let mut goals = goals;
        goals.sort_by_key(rank);
        for g in goals.into_iter().rev() {
            self.agenda.push(Item::new(g, depth));
        }
    }

    /// Moves every residual constraint back onto the agenda.
    fn requeue(&mut self) {
        let residual = std::mem::take(&mut self.store.residual);
        for c in residual.into_iter().rev() {
            self.agenda.push(Item::new(Goal::Constraint(c), 0));
        }
    }
}

/// Woken constraints that cannot start a recursive expansion. They are
/// rechecked at once; other woken constraints wait behind the agenda.
fn is_test(sym: Option<Sym>) -> bool {
    matches!(
        sym,
        Some(Sym::Eq | Sym::Neq | Sym::In | Sym::Nin | Sym::Npair | Sym::Nrel | Sym::Npfun)
    )
}

fn rank(g: &Goal) -> u8 {
    match g {
        Goal::Constraint(c) => match c.sym {
            Sym::Eq => 0,
            Sym::In | Sym::Nin => 1,
            _ => 2,
        },
        _ => 2,
    }
}

enum Step {
    Solved,
    Failed,
}

struct Search<'a> {
    db: &'a Database,
    gen: &'a mut VarGen,
    config: &'a Config,
    stack: Vec<Node>,
    stats: Stats,
    deadline: Option<Instant>,
    /// Check solved stores for a ground witness before reporting them.
    net: bool,
    /// Some branch was pruned at the split limit.
    truncated: bool,
}

impl<'a> Search<'a> {
    fn sub(&mut self, node: Node) -> Search<'_> {
        Search {
            db: self.db,
            gen: &mut *self.gen,
            config: self.config,
            stack: vec![node],
            stats: Stats::default(),
            deadline: self.deadline,
            net: false,
            truncated: false,
        }
    }

    fn next_solved(&mut self, vars: &[Var]) -> Option<Result<Node, EngineError>> {
        while let Some(mut node) = self.stack.pop() {
            match self.advance(&mut node) {
                Ok(Step::Failed) => continue,
                Ok(Step::Solved) => match self.finish(node, vars) {
                    Ok(Some(n)) => return Some(Ok(n)),
                    Ok(None) => continue,
                    Err(e) => {
                        self.stack.clear();
                        return Some(Err(e));
                    }
                },
                Err(e) => {
                    self.stack.clear();
                    return Some(Err(e));
                }
            }
        }
        if std::mem::take(&mut self.truncated) {
            return Some(Err(EngineError::ResourceLimit(format!(
                "some branches needed more than {} set splits to reach a groundable answer",
                self.config.net_limit
            ))));
        }
        None
    }

    fn tick(&mut self) -> Result<(), EngineError> {
        self.stats.steps += 1;
        if self.stats.steps % 256 == 0 {
            self.check_deadline()?;
        }
        Ok(())
    }

    fn check_deadline(&self) -> Result<(), EngineError> {
        match self.deadline {
            Some(d) if Instant::now() > d => Err(EngineError::Timeout),
            _ => Ok(()),
        }
    }

    /// Runs the node's agenda to exhaustion. Alternatives are pushed on the
    /// search stack.
    fn advance(&mut self, node: &mut Node) -> Result<Step, EngineError> {
        while let Some(item) = node.agenda.pop() {
            self.tick()?;
            let depth = item.depth;
            match item.goal {
                Goal::True | Goal::Dec { .. } => {}
                Goal::Conj(a, b) => {
                    node.agenda.push(Item::new(*b, depth));
                    node.agenda.push(Item::new(*a, depth));
                }
                Goal::Disj(a, b) => {
                    let mut right = node.clone();
                    right.agenda.push(Item::new(*b, depth));
                    self.stack.push(right);
                    node.agenda.push(Item::new(*a, depth));
                }
                Goal::Call { name, args } => {
                    if !self.call(node, &name, &args, depth)? {
                        return Ok(Step::Failed);
                    }
                }
                Goal::Constraint(c) => {
                    if !self.constraint(node, c, depth)? {
                        return Ok(Step::Failed);
                    }
                }
            }
        }
        Ok(Step::Solved)
    }

    fn call(&mut self, node: &mut Node, name: &str, args: &[Term], depth: usize) -> Result<bool, EngineError> {
        let clauses = self
            .db
            .lookup(name, args.len())
            .ok_or_else(|| EngineError::UnknownClause {
                name: name.to_string(),
                arity: args.len(),
            })?;
        if let Some(limit) = self.config.depth_limit {
            if depth >= limit {
                return Err(EngineError::ResourceLimit(format!(
                    "call depth {} reached at {}/{}",
                    limit,
                    name,
                    args.len()
                )));
            }
        }
        self.stats.calls += 1;
        let mut alts = Vec::with_capacity(clauses.len());
        for clause in clauses {
            let mut renaming = HashMap::new();
            for v in clause.vars() {
                renaming.insert(v.id(), Term::Var(self.gen.rename(&v)));
            }
            let mut sub = |v: &Var| renaming.get(&v.id()).cloned();
            let mut goals: Vec<Goal> = clause
                .params
                .iter()
                .zip(args)
                .map(|(p, a)| Goal::eq(a.clone(), p.map_vars(&mut sub)))
                .collect();
            goals.push(clause.body.map_vars(&mut sub));
            alts.push(goals);
        }
        if alts.is_empty() {
            return Ok(false);
        }
        for alt in alts.drain(1..).rev() {
            let mut n = node.clone();
            push_in_order(&mut n, alt, depth + 1);
            self.stack.push(n);
        }
        let first = alts.pop().unwrap();
        push_in_order(node, first, depth + 1);
        Ok(true)
    }

    /// Rewrites one constraint. Returns `false` when the node fails.
    fn constraint(&mut self, node: &mut Node, c: Constraint, depth: usize) -> Result<bool, EngineError> {
        let c = node.store.apply_constraint(&c);
        let (outcome, woken) = {
            let mut ctx = Ctx::new(&mut node.store, self.gen);
            let out = solver::rewrite(&mut ctx, c);
            (out, ctx.woken)
        };
        for w in woken.into_iter().rev() {
            let item = Item::new(Goal::Constraint(w), depth);
            if is_test(item.goal_sym()) {
                node.agenda.push(item);
            } else {
                node.agenda.insert(0, item);
            }
        }
        match outcome {
            Outcome::Fail => Ok(false),
            Outcome::Done => Ok(true),
            Outcome::Goals(gs) => {
                node.push_goals(gs, depth);
                Ok(true)
            }
            Outcome::Residual(c) => self.add_residual(node, c, depth),
            Outcome::ResidualWith(c, gs) => {
                node.push_goals(gs, depth);
                self.add_residual(node, c, depth)
            }
            Outcome::Branch(mut alts) => {
                for alt in alts.drain(1..).rev() {
                    let mut n = node.clone();
                    n.push_goals(alt, depth);
                    self.stack.push(n);
                }
                node.push_goals(alts.pop().unwrap(), depth);
                Ok(true)
            }
        }
    }

    fn add_residual(&mut self, node: &mut Node, c: Constraint, depth: usize) -> Result<bool, EngineError> {
        let complement = c.sym.complement();
        for r in &node.store.residual {
            if *r == c {
                return Ok(true);
            }
            if c.sym == Sym::Neq && r.sym == Sym::Neq && r.args[0] == c.args[1] && r.args[1] == c.args[0] {
                return Ok(true);
            }
            if Some(r.sym) == complement && r.args == c.args && c.body.is_none() {
                return Ok(false);
            }
            if not_a_relation(r, &c) || not_a_relation(&c, r) {
                return Ok(false);
            }
        }
        if let Some(goals) = functional_merge(&node.store.residual, &c) {
            node.push_goals(goals, depth);
            return Ok(true);
        }
        let int_relevant = c.sym.is_arith() || c.sym == Sym::Neq;
        node.store.residual.push(c);
        if int_relevant {
            return self.int_check(node).map(|r| r.is_some());
        }
        Ok(true)
    }

    /// Checks the integer part of the store. `Ok(None)` means unsatisfiable.
    fn int_check(&mut self, node: &mut Node) -> Result<Option<HashMap<u32, i64>>, EngineError> {
        let (cons, _) = int_system(&node.store.residual);
        if cons.is_empty() {
            return Ok(Some(HashMap::new()));
        }
        match arith::check(&cons, self.config.lia_node_limit) {
            Sat::Sat(model) => Ok(Some(
                model
                    .into_iter()
                    .filter_map(|(k, v)| match k {
                        Key::Var(id) => i64::try_from(v).ok().map(|v| (id, v)),
                        Key::Aux(_) => None,
                    })
                    .collect(),
            )),
            Sat::Unsat => Ok(None),
            Sat::Unknown => {
                node.int_unknown = true;
                Ok(Some(HashMap::new()))
            }
        }
    }

    /// Final phase for a node whose agenda is empty. Returns the node to
    /// report, or `None` when it turned out to fail or was split.
    fn finish(&mut self, mut node: Node, vars: &[Var]) -> Result<Option<Node>, EngineError> {
        let (_, nonlinear) = int_system(&node.store.residual);
        if let Some(c) = nonlinear {
            return Err(EngineError::NonLinear(c.to_string()));
        }
        if self.config.mode == ArithMode::FiniteDomain {
            if let Some((v, lo)) = labeling_candidate(&node.store.residual) {
                let mut up = node.clone();
                up.agenda.push(Item::new(
                    Goal::constraint(Sym::Ge, vec![Term::Var(v.clone()), Term::Int(lo + 1)]),
                    0,
                ));
                self.stack.push(up);
                node.agenda.push(Item::new(Goal::eq(Term::Var(v), Term::Int(lo)), 0));
                self.stack.push(node);
                return Ok(None);
            }
            let (cons, _) = int_system(&node.store.residual);
            if !cons.is_empty() {
                node.fd_warning = true;
            }
        }
        if !self.net {
            return Ok(Some(node));
        }
        self.check_deadline()?;
        if node.store.residual.is_empty() {
            node.witness = Some(node.store.clone());
            return Ok(Some(node));
        }
        let sorts = infer_sorts(&node.store.residual, &node.store.subst);
        let mut grounded = node.clone();
        ground_store(&mut grounded, &sorts, self.gen);
        grounded.requeue();
        if let Some(w) = self.first_with_ints(grounded, vars)? {
            node.witness = Some(w.store);
            return Ok(Some(node));
        }
        let target = match expansion_target(self, &node, &sorts) {
            Some(v) => v,
            None => return Ok(None),
        };
        if node.expansions >= self.config.net_limit {
            self.truncated = true;
            return Ok(None);
        }
        node.requeue();
        node.expansions += 1;
        let mut full = node.clone();
        let (e, rest) = (self.gen.fresh_term(), self.gen.fresh_term());
        full.agenda.push(Item::new(Goal::constraint(Sym::Nin, vec![e.clone(), rest.clone()]), 0));
        full.agenda.push(Item::new(Goal::eq(Term::Var(target.clone()), Term::cons(e, rest)), 0));
        self.stack.push(full);
        node.agenda.push(Item::new(Goal::eq(Term::Var(target), Term::Empty), 0));
        self.stack.push(node);
        Ok(None)
    }

    /// Solves a grounded node, then fixes integer variables from a model of
    /// the integer store.
    fn first_with_ints(&mut self, node: Node, vars: &[Var]) -> Result<Option<Node>, EngineError> {
        let mut current = node;
        for _ in 0..4 {
            self.check_deadline()?;
            let solved = {
                let mut sub = self.sub(current);
                match sub.next_solved(vars) {
                    Some(r) => r?,
                    None => return Ok(None),
                }
            };
            if solved.store.residual.is_empty() {
                return Ok(Some(solved));
            }
            let mut solved = solved;
            let model = match self.int_check(&mut solved)? {
                Some(m) => m,
                None => return Ok(None),
            };
            let mut unbound = Vec::new();
            for c in &solved.store.residual {
                c.visit_vars(&mut |v| {
                    if !unbound.contains(v) {
                        unbound.push(v.clone());
                    }
                });
            }
            for v in unbound {
                let value = model.get(&v.id()).copied().unwrap_or(0);
                solved.store.subst.bind(&v, Term::Int(value));
            }
            solved.requeue();
            current = solved;
        }
        Ok(None)
    }
}

fn push_in_order(node: &mut Node, goals: Vec<Goal>, depth: usize) {
    for g in goals.into_iter().rev() {
        node.agenda.push(Item::new(g, depth));
    }
}

/// Two constraints with the same functional symbol and equal inputs have
/// equal outputs.
/// `a` is `nrel(X)` and `b` needs `X` to be a relation.
fn not_a_relation(a: &Constraint, b: &Constraint) -> bool {
    a.sym == Sym::Nrel
        && b.sym.relation_positions().iter().any(|&i| b.args[i] == a.args[0])
}

fn functional_merge(residual: &[Constraint], c: &Constraint) -> Option<Vec<Goal>> {
    let (inputs, outputs): (Vec<usize>, Vec<usize>) = match c.sym {
        Sym::Is => (vec![1], vec![0]),
        s => {
            let n = s.functional_inputs()?;
            ((0..n).collect(), (n..s.arity().max(c.args.len())).collect())
        }
    };
    for r in residual {
        if r.sym == c.sym && inputs.iter().all(|&i| r.args[i] == c.args[i]) {
            return Some(
                outputs
                    .iter()
                    .map(|&i| Goal::eq(r.args[i].clone(), c.args[i].clone()))
                    .collect(),
            );
        }
    }
    None
}

/// Linear integer constraints of a store, plus the first non-linear one.
fn int_system(residual: &[Constraint]) -> (Vec<LinCon>, Option<Constraint>) {
    let mut lz = Linearizer::new();
    let mut cons = Vec::new();
    let mut nonlinear = None;
    let mut int_vars: HashSet<u32> = HashSet::new();
    for c in residual.iter().filter(|c| c.sym.is_arith()) {
        match lz.constraint(c) {
            Ok(l) => {
                cons.push(l);
                c.visit_vars(&mut |v| {
                    int_vars.insert(v.id());
                });
            }
            Err(LinearizeError::NonLinear(_)) => {
                if nonlinear.is_none() {
                    nonlinear = Some(c.clone());
                }
            }
            Err(LinearizeError::Invalid(_)) => {}
        }
    }
    for c in residual.iter().filter(|c| c.sym == Sym::Neq) {
        let simple = |t: &Term| matches!(t, Term::Var(_) | Term::Int(_));
        if !(simple(&c.args[0]) && simple(&c.args[1])) {
            continue;
        }
        let touches = c
            .args
            .iter()
            .any(|t| matches!(t, Term::Var(v) if int_vars.contains(&v.id())));
        if touches {
            if let Ok(l) = lz.constraint(c) {
                cons.push(l);
            }
        }
    }
    cons.extend(lz.side);
    (cons, nonlinear)
}

/// First variable, in posting order, with literal lower and upper bounds.
fn labeling_candidate(residual: &[Constraint]) -> Option<(Var, i64)> {
    let mut order: Vec<Var> = Vec::new();
    let mut lower: HashMap<u32, i64> = HashMap::new();
    let mut upper: HashMap<u32, i64> = HashMap::new();
    for c in residual {
        let bound = match (c.sym, &c.args[0], &c.args[1]) {
            (Sym::Ge, Term::Var(v), Term::Int(k)) | (Sym::Le, Term::Int(k), Term::Var(v)) => Some((v, *k, true)),
            (Sym::Gt, Term::Var(v), Term::Int(k)) | (Sym::Lt, Term::Int(k), Term::Var(v)) => Some((v, k + 1, true)),
            (Sym::Le, Term::Var(v), Term::Int(k)) | (Sym::Ge, Term::Int(k), Term::Var(v)) => Some((v, *k, false)),
            (Sym::Lt, Term::Var(v), Term::Int(k)) | (Sym::Gt, Term::Int(k), Term::Var(v)) => Some((v, k - 1, false)),
            _ => None,
        };
        if let Some((v, k, is_lower)) = bound {
            if !order.contains(v) {
                order.push(v.clone());
            }
            if is_lower {
                let e = lower.entry(v.id()).or_insert(k);
                *e = (*e).max(k);
            } else {
                let e = upper.entry(v.id()).or_insert(k);
                *e = (*e).min(k);
            }
        }
    }
    order.into_iter().find_map(|v| match (lower.get(&v.id()), upper.get(&v.id())) {
        (Some(&lo), Some(_)) => Some((v, lo)),
        _ => None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Sort {
    Set,
    Int,
}

fn set_positions(sym: Sym) -> &'static [usize] {
    use Sym::*;
    match sym {
        In | Nin => &[1],
        Set | Rel | Nrel | Pfun | Npfun | Apply | Napply | ApplyTo | Slist | Head | Last => &[0],
        Size => &[0],
        Un | Nun | Inters | Ninters | Diff | Ndiff => &[0, 1, 2],
        Subset | Nsubset | Ssubset | Disj | Ndisj => &[0, 1],
        Dom | Ndom | Ran | Nran | Inv | Ninv | Tail | Front => &[0, 1],
        Comp | Ncomp | Dres | Ndres | Dares | Ndares | Rres | Nrres | Rares | Nrares | Oplus | Noplus
        | Ring | Nring | Concat | Filter | Extract => &[0, 1, 2],
        Add => &[0, 2],
        CompImg => &[2, 3],
        Foreach => &[1],
        _ => &[],
    }
}

fn infer_sorts(residual: &[Constraint], subst: &Substitution) -> HashMap<u32, Sort> {
    let mut sorts: HashMap<u32, Sort> = HashMap::new();
    fn mark(sorts: &mut HashMap<u32, Sort>, t: &Term, s: Sort) {
        if let Term::Var(v) = t {
            let e = sorts.entry(v.id()).or_insert(s);
            if s == Sort::Set {
                *e = Sort::Set;
            }
        }
    }
    fn walk(sorts: &mut HashMap<u32, Sort>, t: &Term) {
        match t {
            Term::Cons(e, rest) => {
                walk(sorts, e);
                if let Term::Var(_) = **rest {
                    mark(sorts, rest, Sort::Set);
                } else {
                    walk(sorts, rest);
                }
            }
            Term::Interval(a, b) => {
                mark(sorts, a, Sort::Int);
                mark(sorts, b, Sort::Int);
            }
            Term::Cp(a, b) => {
                mark(sorts, a, Sort::Set);
                mark(sorts, b, Sort::Set);
                walk(sorts, a);
                walk(sorts, b);
            }
            Term::Arith(_, args) => {
                for a in args {
                    mark(sorts, a, Sort::Int);
                    walk(sorts, a);
                }
            }
            Term::Tuple(args) => args.iter().for_each(|a| walk(sorts, a)),
            _ => {}
        }
    }
    for c in residual {
        for &i in set_positions(c.sym) {
            if let Some(a) = c.args.get(i) {
                mark(&mut sorts, a, Sort::Set);
            }
        }
        if c.sym.is_arith() {
            for a in &c.args {
                mark(&mut sorts, a, Sort::Int);
            }
        }
        if c.sym == Sym::Size {
            mark(&mut sorts, &c.args[1], Sort::Int);
        }
        if matches!(c.sym, Sym::Eq | Sym::Neq) {
            if c.args[0].is_set_term() {
                mark(&mut sorts, &c.args[1], Sort::Set);
            }
            if c.args[1].is_set_term() {
                mark(&mut sorts, &c.args[0], Sort::Set);
            }
        }
        for a in &c.args {
            walk(&mut sorts, a);
        }
    }
    for t in subst.bound_terms() {
        walk(&mut sorts, t);
    }
    let set_var = |sorts: &HashMap<u32, Sort>, t: &Term| matches!(t, Term::Var(v) if sorts.get(&v.id()) == Some(&Sort::Set));
    loop {
        let mut changed = false;
        for c in residual.iter().filter(|c| matches!(c.sym, Sym::Eq | Sym::Neq)) {
            for (a, b) in [(&c.args[0], &c.args[1]), (&c.args[1], &c.args[0])] {
                if set_var(&sorts, a) && !set_var(&sorts, b) && b.is_var() {
                    mark(&mut sorts, b, Sort::Set);
                    changed = true;
                }
            }
        }
        if !changed {
            return sorts;
        }
    }
}

/// Binds every unbound non-integer variable of the store: set variables to
/// `{}` and the rest to distinct fresh atoms.
fn ground_store(node: &mut Node, sorts: &HashMap<u32, Sort>, gen: &mut VarGen) {
    let mut vars: Vec<Var> = Vec::new();
    for c in &node.store.residual {
        c.visit_vars(&mut |v| {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        });
    }
    for c in &node.store.residual {
        if c.sym == Sym::Foreach {
            for v in c.args[0].vars() {
                vars.retain(|w| *w != v);
            }
        }
    }
    for v in vars {
        match sorts.get(&v.id()) {
            Some(Sort::Int) => {}
            Some(Sort::Set) => node.store.subst.bind(&v, Term::Empty),
            None => {
                let atom = format!("$g{}", gen.fresh("G").id());
                node.store.subst.bind(&v, Term::atom(&atom));
            }
        }
    }
}

/// Picks the set variable to split: one from the first residual that fails
/// on its own once grounded, otherwise the first set variable.
/// Set variable to split next: one of the variables of the first residual
/// constraint that fails under the recipe, rotating with the split count.
fn expansion_target(search: &mut Search<'_>, node: &Node, sorts: &HashMap<u32, Sort>) -> Option<Var> {
    let set_vars_of = |c: &Constraint| {
        let mut out = Vec::new();
        c.visit_vars(&mut |v| {
            if sorts.get(&v.id()) == Some(&Sort::Set) && !out.contains(v) {
                out.push(v.clone());
            }
        });
        out
    };
    for c in &node.store.residual {
        let vs = set_vars_of(c);
        if vs.is_empty() {
            continue;
        }
        let mut single = Node::new(Store::new(), vec![]);
        single.store.residual.push(c.clone());
        ground_store(&mut single, sorts, search.gen);
        single.requeue();
        let mut sub = search.sub(single);
        let fails = matches!(sub.next_solved(&[]), None);
        if fails {
            return Some(vs[node.expansions % vs.len()].clone());
        }
    }
    node.store
        .residual
        .iter()
        .flat_map(set_vars_of)
        .next()
}

fn make_answer(node: &Node, vars: &[Var]) -> Answer {
    let store = &node.store;
    let goal_names: HashMap<u32, usize> = vars.iter().enumerate().map(|(i, v)| (v.id(), i)).collect();
    let mut bindings: Vec<(Var, Term)> = Vec::new();
    for v in vars {
        let value = store.apply(&Term::Var(v.clone()));
        if value != Term::Var(v.clone()) {
            bindings.push((v.clone(), value));
        }
    }
    let mut constraints: Vec<Constraint> = store
        .residual
        .iter()
        .map(|c| store.apply_constraint(c))
        .collect();
    for c in constraints.iter_mut() {
        if c.sym == Sym::Neq {
            if let (Term::Var(a), Term::Var(b)) = (&c.args[0], &c.args[1]) {
                if let (Some(i), Some(j)) = (goal_names.get(&a.id()), goal_names.get(&b.id())) {
                    if j < i {
                        c.args.swap(0, 1);
                    }
                }
            }
        }
    }
    // rename non-goal variables in order of appearance
    let mut renaming: HashMap<u32, Term> = HashMap::new();
    let mut counter = 0;
    let mut rename = |v: &Var, renaming: &mut HashMap<u32, Term>| {
        if goal_names.contains_key(&v.id()) || renaming.contains_key(&v.id()) {
            return;
        }
        counter += 1;
        let name = format!("_N{}", counter);
        renaming.insert(v.id(), Term::Var(v.with_name(&name)));
    };
    for (_, t) in &bindings {
        t.visit_vars(&mut |v| rename(v, &mut renaming));
    }
    for c in &constraints {
        c.visit_vars(&mut |v| rename(v, &mut renaming));
    }
    let mut sub = |v: &Var| renaming.get(&v.id()).cloned();
    let bindings = bindings
        .into_iter()
        .map(|(v, t)| (v.name().to_string(), dedup_elements(&t.map_vars(&mut sub))))
        .collect();
    let constraints = constraints
        .iter()
        .map(|c| {
            let mut c = c.map_vars(&mut sub);
            c.args = c.args.iter().map(dedup_elements).collect();
            c
        })
        .collect();
    let witness = node
        .witness
        .as_ref()
        .map(|w| {
            vars.iter()
                .map(|v| (v.name().to_string(), w.apply(&Term::Var(v.clone()))))
                .collect()
        })
        .unwrap_or_default();
    let mut warnings = Vec::new();
    if node.fd_warning {
        warnings.push(FD_WARNING.to_string());
    }
    Answer {
        bindings,
        constraints,
        warnings,
        witness,
        int_unknown: node.int_unknown,
    }
}

/// Drops syntactically repeated elements of set terms.
fn dedup_elements(t: &Term) -> Term {
    match t {
        Term::Cons(..) => {
            let (elems, tail) = t.set_parts();
            let mut kept: Vec<Term> = Vec::new();
            for e in elems {
                let e = dedup_elements(e);
                if !kept.contains(&e) {
                    kept.push(e);
                }
            }
            Term::set_with_tail(kept, dedup_elements(tail))
        }
        Term::Tuple(xs) => Term::Tuple(xs.iter().map(dedup_elements).collect()),
        Term::Arith(op, xs) => Term::Arith(*op, xs.iter().map(dedup_elements).collect()),
        Term::Interval(a, b) => Term::interval(dedup_elements(a), dedup_elements(b)),
        Term::Cp(a, b) => Term::cp(dedup_elements(a), dedup_elements(b)),
        _ => t.clone(),
    }
}

/// Returns true when the first-found answer set of `goal` is non-empty.
pub fn is_satisfiable(engine: &mut Engine, goal: &str) -> Result<bool, EngineError> {
    let mut sols = engine.query(goal)?;
    match sols.next() {
        Some(Ok(_)) => Ok(true),
        Some(Err(e)) => Err(e),
        None => Ok(false),
    }
}
