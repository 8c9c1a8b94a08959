//! Line-oriented `.bench` format describing the preparation stage of an
//! optical bench.
//!
//! ```text
//! # Mach-Zehnder preparation of Φ⁺
//! source a V 1.0
//! npbs a b
//! qwp b fast=V
//! flip b
//! ```
//!
//! Grammar:
//!
//! ```text
//! program := line*
//! line    := comment | stmt NEWLINE
//! comment := "#" any*
//! stmt    := "source" IDENT POL NUMBER
//!          | "npbs" IDENT IDENT
//!          | "qwp" IDENT "fast=" POL
//!          | "flip" IDENT
//!          | "ps" IDENT NUMBER
//!          | "pr" IDENT NUMBER
//! POL     := "V" | "H"
//! NUMBER  := decimal | [-][k]pi[/d]
//! ```
//!
//! Statements apply in the order listed. Path labels map to basis arms in
//! order of first appearance: the source arm is `a`, the second label
//! introduced by a splitter is `b`. At most two arms exist. A `#` starts a
//! comment that runs to the end of the line; [`format`] drops comments.

mod compile;
mod format;
mod lexer;
mod parser;

use std::fmt;

pub use compile::{compile, CompiledBench};
pub use format::format;
pub use lexer::Number;
pub use parser::parse;

use crate::states::Pol;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Lex,
    Syntax,
    Semantic,
}

impl fmt::Display for ErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorKind::Lex => "lex",
            ErrorKind::Syntax => "syntax",
            ErrorKind::Semantic => "semantic",
        })
    }
}

/// Diagnostic with a 1-based line and column (columns count characters).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub kind: ErrorKind,
}

impl ParseError {
    pub(crate) fn new(kind: ErrorKind, span: Span, message: impl Into<String>) -> Self {
        Self {
            line: span.line,
            column: span.column,
            message: message.into(),
            kind,
        }
    }

    /// `file:line:col: message`
    pub fn render(&self, file: &str) -> String {
        format!("{file}:{self}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SourceDecl {
    pub path: String,
    pub pol: Pol,
    pub intensity: Number,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Statement {
    Npbs { first: String, second: String },
    Qwp { path: String, fast: Pol },
    Flip { path: String },
    PhaseShift { path: String, angle: Number },
    Rotate { path: String, angle: Number },
}

impl Statement {
    pub fn keyword(&self) -> &'static str {
        match self {
            Statement::Npbs { .. } => "npbs",
            Statement::Qwp { .. } => "qwp",
            Statement::Flip { .. } => "flip",
            Statement::PhaseShift { .. } => "ps",
            Statement::Rotate { .. } => "pr",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchProgram {
    pub source: SourceDecl,
    pub source_span: Span,
    pub statements: Vec<Statement>,
    /// Location of each entry of `statements`.
    pub line_spans: Vec<Span>,
}

impl BenchProgram {
    /// Equality of source and statements, ignoring source locations.
    pub fn same_structure(&self, other: &BenchProgram) -> bool {
        self.source == other.source && self.statements == other.statements
    }

    /// Path labels in arm order.
    pub fn path_labels(&self) -> Vec<&str> {
        let mut labels = vec![self.source.path.as_str()];
        for st in &self.statements {
            if let Statement::Npbs { first, second } = st {
                for l in [first, second] {
                    if !labels.contains(&l.as_str()) {
                        labels.push(l);
                    }
                }
            }
        }
        labels
    }
}
