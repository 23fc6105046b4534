//! Concrete syntax: lexer, parser, elaborator and pretty printer.

pub mod elab;
pub mod lexer;
pub mod parser;
pub mod pretty;

pub use elab::Elaborator;
pub use parser::{parse, parse_term, Decl, DeclKind, Expr, ExprKind, SourceFile};
pub use pretty::pretty;
