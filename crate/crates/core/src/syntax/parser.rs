use std::collections::HashMap;
use std::sync::Arc;

use super::lexer::{tokenize, Tok, Token};
use super::SyntaxError;
use crate::arith::ArithMode;
use crate::goal::{Clause, Constraint, Goal, Sym};
use crate::term::{ArithOp, Term, Var, VarGen};
use crate::types::{Signature, TypeExpr};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Directive {
    DecType(Arc<str>, TypeExpr),
    DecPType(Signature),
    Consult(String),
    TypeCheck,
    NoTypeCheck,
    IntSolver(ArithMode),
}

#[derive(Clone, Debug)]
pub enum Item {
    Directive { directive: Directive, line: usize },
    Clause { clause: Clause, line: usize },
}

#[derive(Clone, Debug, Default)]
pub struct SourceProgram {
    pub items: Vec<Item>,
}

impl SourceProgram {
    pub fn clauses(&self) -> impl Iterator<Item = &Clause> {
        self.items.iter().filter_map(|i| match i {
            Item::Clause { clause, .. } => Some(clause),
            _ => None,
        })
    }

    pub fn directives(&self) -> impl Iterator<Item = &Directive> {
        self.items.iter().filter_map(|i| match i {
            Item::Directive { directive, .. } => Some(directive),
            _ => None,
        })
    }
}

/// A goal together with its named variables in first-occurrence order.
#[derive(Clone, Debug)]
pub struct ParsedGoal {
    pub goal: Goal,
    pub vars: Vec<Var>,
}

#[derive(Clone, Debug)]
pub enum Query {
    Goal(ParsedGoal),
    Command(Directive),
    Halt,
}

pub fn parse_program(text: &str, gen: &mut VarGen) -> Result<SourceProgram, SyntaxError> {
    let mut p = Parser::new(text, gen)?;
    let mut items = Vec::new();
    while !p.at(&Tok::Eof) {
        let line = p.peek().line;
        p.reset_scope();
        if p.eat(&Tok::Neck) {
            let directive = p.directive()?;
            p.expect(&Tok::End)?;
            items.push(Item::Directive { directive, line });
        } else {
            let clause = p.clause()?;
            items.push(Item::Clause { clause, line });
        }
    }
    Ok(SourceProgram { items })
}

pub fn parse_goal(text: &str, gen: &mut VarGen) -> Result<ParsedGoal, SyntaxError> {
    let mut p = Parser::new(text, gen)?;
    let goal = p.disjunction()?;
    p.expect(&Tok::End)?;
    p.expect(&Tok::Eof)?;
    Ok(ParsedGoal {
        goal,
        vars: p.order,
    })
}

/// Parses one REPL input: a command (`consult('f').`, `type_check.`, ...),
/// `halt.`, or a goal.
pub fn parse_query(text: &str, gen: &mut VarGen) -> Result<Query, SyntaxError> {
    let mut p = Parser::new(text, gen)?;
    if let Tok::Name(n) = &p.peek().tok {
        if n == "halt" && p.peek_at(1).tok == Tok::End {
            return Ok(Query::Halt);
        }
        if is_command_name(n) && matches!(p.peek_at(1).tok, Tok::End | Tok::LParen) {
            let d = p.directive()?;
            p.expect(&Tok::End)?;
            p.expect(&Tok::Eof)?;
            return Ok(Query::Command(d));
        }
    }
    if p.eat(&Tok::Neck) {
        let d = p.directive()?;
        p.expect(&Tok::End)?;
        p.expect(&Tok::Eof)?;
        return Ok(Query::Command(d));
    }
    let goal = p.disjunction()?;
    p.expect(&Tok::End)?;
    p.expect(&Tok::Eof)?;
    Ok(Query::Goal(ParsedGoal {
        goal,
        vars: p.order,
    }))
}

fn is_command_name(n: &str) -> bool {
    matches!(
        n,
        "consult" | "type_check" | "notype_check" | "int_solver" | "dec_type" | "dec_p_type"
    )
}

pub fn parse_type(text: &str) -> Result<TypeExpr, SyntaxError> {
    let mut gen = VarGen::new();
    let mut p = Parser::new(text, &mut gen)?;
    let t = p.type_expr()?;
    p.expect(&Tok::Eof)?;
    Ok(t)
}

struct Parser<'g> {
    toks: Vec<Token>,
    pos: usize,
    gen: &'g mut VarGen,
    scope: HashMap<String, Var>,
    order: Vec<Var>,
}

impl<'g> Parser<'g> {
    fn new(text: &str, gen: &'g mut VarGen) -> Result<Self, SyntaxError> {
        Ok(Parser {
            toks: tokenize(text)?,
            pos: 0,
            gen,
            scope: HashMap::new(),
            order: Vec::new(),
        })
    }

    fn reset_scope(&mut self) {
        self.scope.clear();
        self.order.clear();
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn peek_at(&self, k: usize) -> &Token {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)]
    }

    fn at(&self, t: &Tok) -> bool {
        &self.peek().tok == t
    }

    fn at_name(&self, name: &str) -> bool {
        matches!(&self.peek().tok, Tok::Name(n) if n == name)
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.at(t) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, SyntaxError> {
        let t = self.peek();
        Err(SyntaxError {
            line: t.line,
            col: t.col,
            message: message.into(),
        })
    }

    fn expect(&mut self, t: &Tok) -> Result<(), SyntaxError> {
        if self.eat(t) {
            Ok(())
        } else {
            let found = self.peek().tok.describe();
            self.error(format!("expected {}, found {}", t.describe(), found))
        }
    }

    fn name(&mut self) -> Result<String, SyntaxError> {
        match &self.peek().tok {
            Tok::Name(n) => {
                let n = n.clone();
                self.bump();
                Ok(n)
            }
            other => {
                let d = other.describe();
                self.error(format!("expected a name, found {}", d))
            }
        }
    }

    fn variable(&mut self, name: &str) -> Var {
        if name == "_" {
            return self.gen.fresh("A");
        }
        if let Some(v) = self.scope.get(name) {
            return v.clone();
        }
        let v = self.gen.named(name);
        self.scope.insert(name.to_string(), v.clone());
        self.order.push(v.clone());
        v
    }

    // ---- directives and clauses ----

    fn directive(&mut self) -> Result<Directive, SyntaxError> {
        let name = self.name()?;
        match name.as_str() {
            "dec_type" => {
                self.expect(&Tok::LParen)?;
                let n = self.name()?;
                self.expect(&Tok::Comma)?;
                let t = self.type_expr()?;
                self.expect(&Tok::RParen)?;
                Ok(Directive::DecType(Arc::from(n.as_str()), t))
            }
            "dec_p_type" => {
                self.expect(&Tok::LParen)?;
                let n = self.name()?;
                let mut params = Vec::new();
                if self.eat(&Tok::LParen) {
                    loop {
                        params.push(self.type_expr()?);
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                    self.expect(&Tok::RParen)?;
                }
                self.expect(&Tok::RParen)?;
                Ok(Directive::DecPType(Signature {
                    name: Arc::from(n.as_str()),
                    params,
                }))
            }
            "consult" => {
                self.expect(&Tok::LParen)?;
                let file = match self.bump().tok {
                    Tok::Quoted(s) | Tok::Name(s) => s,
                    other => return self.error(format!("expected a file name, found {}", other.describe())),
                };
                self.expect(&Tok::RParen)?;
                Ok(Directive::Consult(file))
            }
            "type_check" => Ok(Directive::TypeCheck),
            "notype_check" => Ok(Directive::NoTypeCheck),
            "int_solver" => {
                self.expect(&Tok::LParen)?;
                let m = self.name()?;
                let mode = match m.as_str() {
                    "clpq" => ArithMode::Symbolic,
                    "clpfd" => ArithMode::FiniteDomain,
                    _ => return self.error(format!("unknown integer solver `{}`", m)),
                };
                self.expect(&Tok::RParen)?;
                Ok(Directive::IntSolver(mode))
            }
            other => Err(SyntaxError {
                line: self.toks[self.pos.saturating_sub(1)].line,
                col: self.toks[self.pos.saturating_sub(1)].col,
                message: format!("unknown directive `{}`", other),
            }),
        }
    }

    fn clause(&mut self) -> Result<Clause, SyntaxError> {
        let name = self.name()?;
        let mut params = Vec::new();
        if self.eat(&Tok::LParen) {
            params = self.term_list(&Tok::RParen)?;
        }
        let body = if self.eat(&Tok::Neck) {
            self.disjunction()?
        } else {
            Goal::True
        };
        self.expect(&Tok::End)?;
        Ok(Clause {
            name: Arc::from(name.as_str()),
            params,
            body,
        })
    }

    // ---- goals ----

    fn disjunction(&mut self) -> Result<Goal, SyntaxError> {
        let mut g = self.conjunction()?;
        while self.at_name("or") {
            self.bump();
            let rhs = self.conjunction()?;
            g = Goal::Disj(Box::new(g), Box::new(rhs));
        }
        Ok(g)
    }

    fn conjunction(&mut self) -> Result<Goal, SyntaxError> {
        let mut g = self.goal_atom()?;
        while self.eat(&Tok::Amp) {
            let rhs = self.goal_atom()?;
            g = Goal::Conj(Box::new(g), Box::new(rhs));
        }
        Ok(g)
    }

    fn goal_atom(&mut self) -> Result<Goal, SyntaxError> {
        if self.at(&Tok::LParen) {
            let save = (self.pos, self.scope.clone(), self.order.clone());
            self.bump();
            if let Ok(g) = self.disjunction() {
                if self.eat(&Tok::RParen) && !self.at_infix() {
                    return Ok(g);
                }
            }
            self.pos = save.0;
            self.scope = save.1;
            self.order = save.2;
            return self.infix_constraint();
        }
        if let Tok::Name(n) = &self.peek().tok {
            let n = n.clone();
            let next = self.peek_at(1).tok.clone();
            if next == Tok::LParen && n != "int" && n != "cp" {
                self.bump();
                self.bump();
                return self.predicate(&n);
            }
            if !is_infix_token(&next) && next != Tok::Question {
                self.bump();
                return Ok(match n.as_str() {
                    "true" => Goal::True,
                    _ => Goal::Call {
                        name: Arc::from(n.as_str()),
                        args: Vec::new(),
                    },
                });
            }
        }
        self.infix_constraint()
    }

    fn at_infix(&self) -> bool {
        is_infix_token(&self.peek().tok)
    }

    fn infix_constraint(&mut self) -> Result<Goal, SyntaxError> {
        let lhs = self.expr()?;
        let sym = match &self.peek().tok {
            Tok::Eq => Sym::Eq,
            Tok::Le => Sym::Le,
            Tok::Lt => Sym::Lt,
            Tok::Ge => Sym::Ge,
            Tok::Gt => Sym::Gt,
            Tok::Name(n) => match n.as_str() {
                "neq" => Sym::Neq,
                "in" => Sym::In,
                "nin" => Sym::Nin,
                "is" => Sym::Is,
                _ => return self.error(format!("expected a constraint operator, found `{}`", n)),
            },
            other => {
                let d = other.describe();
                return self.error(format!("expected a constraint operator, found {}", d));
            }
        };
        self.bump();
        let rhs = self.expr()?;
        Ok(Goal::constraint(sym, vec![lhs, rhs]))
    }

    /// Called after `name(` has been consumed.
    fn predicate(&mut self, name: &str) -> Result<Goal, SyntaxError> {
        match name {
            "foreach" => {
                let pattern = self.expr()?;
                if !self.at_name("in") {
                    return self.error("expected `in` in foreach");
                }
                self.bump();
                let range = self.expr()?;
                self.expect(&Tok::Comma)?;
                let body = self.disjunction()?;
                self.expect(&Tok::RParen)?;
                Ok(Goal::Constraint(Constraint::foreach(pattern, range, body)))
            }
            "dec" => {
                let vars = if self.eat(&Tok::LBrack) {
                    self.term_list(&Tok::RBrack)?
                } else {
                    vec![self.expr()?]
                };
                self.expect(&Tok::Comma)?;
                let ty = self.type_expr()?;
                self.expect(&Tok::RParen)?;
                Ok(Goal::Dec { vars, ty })
            }
            _ => {
                let args = self.term_list(&Tok::RParen)?;
                match Sym::from_prefix(name, args.len()) {
                    Some(sym) => Ok(Goal::constraint(sym, args)),
                    None if Sym::is_prefix_name(name) => {
                        self.error(format!("wrong number of arguments for `{}`", name))
                    }
                    None => Ok(Goal::Call {
                        name: Arc::from(name),
                        args,
                    }),
                }
            }
        }
    }

    /// Comma-separated terms up to and including `close`.
    fn term_list(&mut self, close: &Tok) -> Result<Vec<Term>, SyntaxError> {
        let mut out = Vec::new();
        if self.eat(close) {
            return Ok(out);
        }
        loop {
            out.push(self.expr()?);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(close)?;
        Ok(out)
    }

    // ---- terms ----

    fn expr(&mut self) -> Result<Term, SyntaxError> {
        let mut t = self.product()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => ArithOp::Add,
                Tok::Minus => ArithOp::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.product()?;
            t = Term::Arith(op, vec![t, rhs]);
        }
        Ok(t)
    }

    fn product(&mut self) -> Result<Term, SyntaxError> {
        let mut t = self.unary()?;
        loop {
            let op = match &self.peek().tok {
                Tok::Star => ArithOp::Mul,
                Tok::Name(n) if n == "div" => ArithOp::Div,
                Tok::Name(n) if n == "mod" => ArithOp::Mod,
                _ => break,
            };
            self.bump();
            let rhs = self.unary()?;
            t = Term::Arith(op, vec![t, rhs]);
        }
        Ok(t)
    }

    fn unary(&mut self) -> Result<Term, SyntaxError> {
        if self.eat(&Tok::Minus) {
            if let Tok::Int(n) = self.peek().tok {
                self.bump();
                return Ok(Term::Int(-n));
            }
            let t = self.unary()?;
            return Ok(Term::Arith(ArithOp::Neg, vec![t]));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Term, SyntaxError> {
        let tok = self.peek().tok.clone();
        match tok {
            Tok::Int(n) => {
                self.bump();
                Ok(Term::Int(n))
            }
            Tok::Var(v) => {
                self.bump();
                Ok(Term::Var(self.variable(&v)))
            }
            Tok::Quoted(q) => {
                self.bump();
                Ok(Term::Atom(Arc::from(q.as_str())))
            }
            Tok::Name(n) => {
                self.bump();
                if (n == "int" || n == "cp") && self.at(&Tok::LParen) {
                    self.bump();
                    let a = self.expr()?;
                    self.expect(&Tok::Comma)?;
                    let b = self.expr()?;
                    self.expect(&Tok::RParen)?;
                    return Ok(if n == "int" {
                        Term::interval(a, b)
                    } else {
                        Term::cp(a, b)
                    });
                }
                if self.at(&Tok::LParen) {
                    return self.error(format!("compound term `{}(...)` is not a value", n));
                }
                if self.eat(&Tok::Question) {
                    let payload = match self.bump().tok {
                        Tok::Name(p) | Tok::Quoted(p) => p,
                        other => {
                            return self.error(format!(
                                "expected an atom after `{}?`, found {}",
                                n,
                                other.describe()
                            ))
                        }
                    };
                    return Ok(Term::typed(&n, &payload));
                }
                Ok(Term::Atom(Arc::from(n.as_str())))
            }
            Tok::LParen => {
                self.bump();
                let t = self.expr()?;
                self.expect(&Tok::RParen)?;
                Ok(t)
            }
            Tok::LBrack => {
                self.bump();
                let elems = self.term_list(&Tok::RBrack)?;
                if elems.len() < 2 {
                    return self.error("tuples need at least two components");
                }
                Ok(Term::Tuple(elems))
            }
            Tok::LBrace => {
                self.bump();
                if self.eat(&Tok::RBrace) {
                    return Ok(Term::Empty);
                }
                let mut elems = vec![self.expr()?];
                while self.eat(&Tok::Comma) {
                    elems.push(self.expr()?);
                }
                let tail = if self.eat(&Tok::Slash) {
                    self.expr()?
                } else {
                    Term::Empty
                };
                self.expect(&Tok::RBrace)?;
                Ok(Term::set_with_tail(elems, tail))
            }
            other => self.error(format!("expected a term, found {}", other.describe())),
        }
    }

    fn type_expr(&mut self) -> Result<TypeExpr, SyntaxError> {
        if self.eat(&Tok::LBrack) {
            let mut ts = vec![self.type_expr()?];
            while self.eat(&Tok::Comma) {
                ts.push(self.type_expr()?);
            }
            self.expect(&Tok::RBrack)?;
            if ts.len() < 2 {
                return self.error("product types need at least two components");
            }
            return Ok(TypeExpr::Product(ts));
        }
        let n = self.name()?;
        match n.as_str() {
            "int" => Ok(TypeExpr::Int),
            "stype" => {
                self.expect(&Tok::LParen)?;
                let t = self.type_expr()?;
                self.expect(&Tok::RParen)?;
                Ok(TypeExpr::set_of(t))
            }
            _ => Ok(TypeExpr::named(&n)),
        }
    }
}

fn is_infix_token(t: &Tok) -> bool {
    match t {
        Tok::Eq | Tok::Le | Tok::Lt | Tok::Ge | Tok::Gt => true,
        Tok::Plus | Tok::Minus | Tok::Star => true,
        Tok::Name(n) => matches!(n.as_str(), "neq" | "in" | "nin" | "is" | "div" | "mod"),
        _ => false,
    }
}
