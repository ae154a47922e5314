//! Printing of terms, constraints and goals.
//!
//! Two styles exist. `Source` output re-parses to the same tree. `Answer`
//! output follows the interpreter's transcripts: atoms lose their quotes and
//! comparisons are written without spaces.

use std::fmt;

use crate::goal::{Clause, Constraint, Goal, Sym};
use crate::term::{ArithOp, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Style {
    Source,
    Answer,
}

#[derive(Clone, Copy, Debug)]
pub struct Printer {
    pub style: Style,
    /// Sort set elements by their rendered text.
    pub canonical: bool,
}

impl Printer {
    pub fn source() -> Self {
        Printer {
            style: Style::Source,
            canonical: false,
        }
    }

    pub fn answer(canonical: bool) -> Self {
        Printer {
            style: Style::Answer,
            canonical,
        }
    }

    pub fn term(&self, t: &Term) -> String {
        let mut s = String::new();
        self.write_term(t, &mut s);
        s
    }

    pub fn constraint(&self, c: &Constraint) -> String {
        let mut s = String::new();
        self.write_constraint(c, &mut s);
        s
    }

    pub fn goal(&self, g: &Goal) -> String {
        let mut s = String::new();
        self.write_goal(g, &mut s);
        s
    }

    fn write_args(&self, args: &[Term], out: &mut String) {
        for (i, a) in args.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            self.write_term(a, out);
        }
    }

    fn write_atom(&self, name: &str, out: &mut String) {
        if self.style == Style::Source && needs_quotes(name) {
            out.push('\'');
            for ch in name.chars() {
                if ch == '\'' || ch == '\\' {
                    out.push('\\');
                }
                out.push(ch);
            }
            out.push('\'');
        } else {
            out.push_str(name);
        }
    }

    pub fn write_term(&self, t: &Term, out: &mut String) {
        match t {
            Term::Var(v) => out.push_str(v.name()),
            Term::Atom(a) => self.write_atom(a, out),
            Term::Typed(ty, payload) => {
                out.push_str(ty);
                out.push('?');
                self.write_atom(payload, out);
            }
            Term::Int(n) => out.push_str(&n.to_string()),
            Term::Arith(..) => self.write_arith(t, 0, out),
            Term::Tuple(args) => {
                out.push('[');
                self.write_args(args, out);
                out.push(']');
            }
            Term::Empty => out.push_str("{}"),
            Term::Cons(..) => {
                let (elems, tail) = t.set_parts();
                let mut rendered: Vec<String> = elems.iter().map(|e| self.term(e)).collect();
                if self.canonical {
                    rendered.sort();
                }
                out.push('{');
                out.push_str(&rendered.join(","));
                if *tail != Term::Empty {
                    out.push('/');
                    self.write_term(tail, out);
                }
                out.push('}');
            }
            Term::Interval(a, b) => {
                out.push_str("int(");
                self.write_term(a, out);
                out.push(',');
                self.write_term(b, out);
                out.push(')');
            }
            Term::Cp(a, b) => {
                out.push_str("cp(");
                self.write_term(a, out);
                out.push(',');
                self.write_term(b, out);
                out.push(')');
            }
        }
    }

    /// `ctx` is the binding strength required by the surrounding operator:
    /// 0 anywhere, 1 as the right operand of `+`/`-`, 2 under `*`/`div`/`mod`,
    /// 3 as the right operand of those or under unary minus.
    fn write_arith(&self, t: &Term, ctx: u8, out: &mut String) {
        let (op, args) = match t {
            Term::Arith(op, args) => (*op, args),
            Term::Int(n) if *n < 0 && ctx > 0 => {
                out.push_str(&format!("({})", n));
                return;
            }
            other => return self.write_term(other, out),
        };
        let level = match op {
            ArithOp::Add | ArithOp::Sub => 0,
            ArithOp::Mul | ArithOp::Div | ArithOp::Mod => 2,
            ArithOp::Neg => 3,
        };
        let paren = level < ctx;
        if paren {
            out.push('(');
        }
        match op {
            ArithOp::Neg => {
                out.push('-');
                self.write_arith(&args[0], 4, out);
            }
            ArithOp::Add | ArithOp::Sub => {
                self.write_arith(&args[0], 0, out);
                out.push_str(op.symbol());
                self.write_arith(&args[1], 1, out);
            }
            ArithOp::Mul => {
                self.write_arith(&args[0], 2, out);
                out.push('*');
                self.write_arith(&args[1], 3, out);
            }
            ArithOp::Div | ArithOp::Mod => {
                self.write_arith(&args[0], 2, out);
                out.push(' ');
                out.push_str(op.symbol());
                out.push(' ');
                self.write_arith(&args[1], 3, out);
            }
        }
        if paren {
            out.push(')');
        }
    }

    pub fn write_constraint(&self, c: &Constraint, out: &mut String) {
        match c.sym {
            Sym::Foreach => {
                out.push_str("foreach(");
                self.write_term(&c.args[0], out);
                out.push_str(" in ");
                self.write_term(&c.args[1], out);
                out.push_str(", ");
                if let Some(b) = &c.body {
                    self.write_goal(b, out);
                }
                out.push(')');
            }
            Sym::Le | Sym::Lt | Sym::Ge | Sym::Gt => {
                let op = match (c.sym, self.style) {
                    (Sym::Le, Style::Answer) => "<=",
                    (s, _) => s.name(),
                };
                if self.style == Style::Answer {
                    self.write_term(&c.args[0], out);
                    out.push_str(op);
                    self.write_term(&c.args[1], out);
                } else {
                    self.write_term(&c.args[0], out);
                    out.push(' ');
                    out.push_str(op);
                    out.push(' ');
                    self.write_term(&c.args[1], out);
                }
            }
            s if s.is_infix() => {
                self.write_term(&c.args[0], out);
                out.push(' ');
                out.push_str(s.name());
                out.push(' ');
                self.write_term(&c.args[1], out);
            }
            s => {
                out.push_str(s.name());
                out.push('(');
                self.write_args(&c.args, out);
                out.push(')');
            }
        }
    }

    pub fn write_goal(&self, g: &Goal, out: &mut String) {
        match g {
            Goal::True => out.push_str("true"),
            Goal::Constraint(c) => self.write_constraint(c, out),
            Goal::Call { name, args } => {
                out.push_str(name);
                if !args.is_empty() {
                    out.push('(');
                    self.write_args(args, out);
                    out.push(')');
                }
            }
            Goal::Dec { vars, ty } => {
                out.push_str("dec(");
                if vars.len() == 1 {
                    self.write_term(&vars[0], out);
                } else {
                    out.push('[');
                    self.write_args(vars, out);
                    out.push(']');
                }
                out.push(',');
                out.push_str(&ty.to_string());
                out.push(')');
            }
            Goal::Conj(a, b) => {
                self.write_grouped(a, matches!(**a, Goal::Disj(..)), out);
                out.push_str(" & ");
                self.write_grouped(b, matches!(**b, Goal::Disj(..) | Goal::Conj(..)), out);
            }
            Goal::Disj(a, b) => {
                self.write_goal(a, out);
                out.push_str(" or ");
                self.write_grouped(b, matches!(**b, Goal::Disj(..)), out);
            }
        }
    }

    fn write_grouped(&self, g: &Goal, paren: bool, out: &mut String) {
        if paren {
            out.push('(');
            self.write_goal(g, out);
            out.push(')');
        } else {
            self.write_goal(g, out);
        }
    }
}

fn needs_quotes(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_lowercase() => {}
        _ => return true,
    }
    if !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
        return true;
    }
    matches!(
        name,
        "or" | "in" | "nin" | "neq" | "is" | "div" | "mod" | "int" | "cp"
    )
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Printer::source().term(self))
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Printer::source().constraint(self))
    }
}

impl fmt::Display for Goal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&Printer::source().goal(self))
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        if !self.params.is_empty() {
            let p = Printer::source();
            let mut s = String::new();
            p.write_args(&self.params, &mut s);
            write!(f, "({})", s)?;
        }
        if self.body != Goal::True {
            write!(f, " :-\n    {}", self.body)?;
        }
        f.write_str(".")
    }
}
