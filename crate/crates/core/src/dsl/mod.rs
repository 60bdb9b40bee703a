//! The `.mfw` input language: lexer, AST, parser and elaboration into
//! library objects.

mod ast;
mod elab;
mod lexer;
mod parser;

pub use ast::{Arg, Expr, MfDecl, Program, Stmt, StmtKind};
pub use elab::{
    Env, NamedSection, Object, Query, QueryArgs, TypedQuery, DEFAULT_CONVENTION, KEYWORDS,
    QUERY_KINDS,
};
pub use lexer::Pos;
pub use parser::{parse_expr, parse_program};
