//! Concrete syntax: tokenizer, parser and printers.

pub mod lexer;
mod parser;
pub mod render;

pub use parser::{
    parse_goal, parse_program, parse_query, parse_type, Directive, Item, ParsedGoal, Query,
    SourceProgram,
};
pub use render::{Printer, Style};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at line {line}, column {col}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}
