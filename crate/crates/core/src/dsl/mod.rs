//! The document language: lexer, recursive-descent parser, name resolution
//! and a canonical printer. The grammar is described in `docs/dsl.md`.

mod ast;
mod lexer;
mod parser;
mod printer;
mod resolve;

use std::fmt;

use thiserror::Error;

use crate::document::Document;

pub use printer::print;

/// Built-in operators written as calls.
pub(crate) const CALLABLE: [&str; 4] = ["d", "iota", "bracket", "lie"];

/// Names that cannot be coordinates or user definitions.
pub(crate) const RESERVED: [&str; 7] = ["d", "iota", "bracket", "lie", "solve", "order", "expect"];

/// 1-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("lex error at {span}: {message}")]
    Lex { span: Span, message: String },
    #[error("parse error at {span}: {message}")]
    Parse { span: Span, message: String },
    #[error("semantic error at {span}: {message}")]
    Semantic { span: Span, message: String },
}

impl DslError {
    fn lex(span: Span, message: impl Into<String>) -> Self {
        DslError::Lex {
            span,
            message: message.into(),
        }
    }

    fn parse(span: Span, message: impl Into<String>) -> Self {
        DslError::Parse {
            span,
            message: message.into(),
        }
    }

    fn semantic(span: Span, message: impl Into<String>) -> Self {
        DslError::Semantic {
            span,
            message: message.into(),
        }
    }

    pub fn span(&self) -> Span {
        match self {
            DslError::Lex { span, .. } | DslError::Parse { span, .. } | DslError::Semantic { span, .. } => *span,
        }
    }
}

/// Parses and resolves a document.
pub fn parse(src: &str) -> Result<Document, DslError> {
    let toks = lexer::lex(src)?;
    let prog = parser::Parser::new(toks).program()?;
    resolve::resolve(&prog)
}

/// Syntax check only: lexing and parsing, no name resolution.
pub fn parse_syntax(src: &str) -> Result<(), DslError> {
    let toks = lexer::lex(src)?;
    parser::Parser::new(toks).program().map(|_| ())
}

/// Parses a polynomial expression over `vars`; used for scenario
/// parameters such as `surface:p=x^2,q=y^3`.
pub fn parse_poly(src: &str, vars: &crate::algebra::Vars) -> Result<crate::algebra::LaurentPoly, DslError> {
    let toks = lexer::lex(src)?;
    let mut p = parser::Parser::new(toks);
    let e = p.expr()?;
    p.finish()?;
    resolve::eval_poly(&e, vars)
}
