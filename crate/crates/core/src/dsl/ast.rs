use std::fmt;

use num_bigint::BigInt;

use super::lexer::Pos;
use crate::error::{Error, Result};
use crate::poly::{Poly, Ring};
use crate::scalar::Field;

/// Polynomial expression as written; evaluated against a ring on demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

impl Expr {
    pub fn eval(&self, ring: &Ring) -> Result<Poly> {
        Ok(match self {
            Expr::Int(n) => Poly::constant(ring, ring.field().from_bigint(n)),
            Expr::Var(v) => Poly::var(ring, v)
                .map_err(|_| Error::Invalid(format!("unknown variable `{v}` in {ring}")))?,
            Expr::Neg(a) => -&a.eval(ring)?,
            Expr::Add(a, b) => &a.eval(ring)? + &b.eval(ring)?,
            Expr::Sub(a, b) => &a.eval(ring)? - &b.eval(ring)?,
            Expr::Mul(a, b) => &a.eval(ring)? * &b.eval(ring)?,
            Expr::Pow(a, k) => a.eval(ring)?.pow(*k),
        })
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Int(_) | Expr::Var(_) => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.precedence() < min;
        if paren {
            write!(f, "(")?;
        }
        match self {
            Expr::Int(n) => write!(f, "{n}")?,
            Expr::Var(v) => write!(f, "{v}")?,
            Expr::Neg(a) => {
                write!(f, "-")?;
                a.write_at(f, 3)?;
            }
            Expr::Add(a, b) => {
                a.write_at(f, 1)?;
                write!(f, " + ")?;
                b.write_at(f, 2)?;
            }
            Expr::Sub(a, b) => {
                a.write_at(f, 1)?;
                write!(f, " - ")?;
                b.write_at(f, 2)?;
            }
            Expr::Mul(a, b) => {
                a.write_at(f, 2)?;
                write!(f, "*")?;
                b.write_at(f, 3)?;
            }
            Expr::Pow(a, k) => {
                a.write_at(f, 5)?;
                write!(f, "^{k}")?;
            }
        }
        if paren {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

/// One positional item of a query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Arg {
    Name(String),
    Int(i64),
    Range(i64, i64),
    Poly { ring: String, expr: Expr },
}

impl fmt::Display for Arg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arg::Name(n) => write!(f, "{n}"),
            Arg::Int(k) => write!(f, "{k}"),
            Arg::Range(a, b) => write!(f, "{a}..{b}"),
            Arg::Poly { ring, expr } => write!(f, "({ring}, {expr})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MfDecl {
    pub name: String,
    pub ring: String,
    pub f: Expr,
    pub d: Vec<i64>,
    pub e: Vec<i64>,
    pub phi: Vec<Vec<Expr>>,
    pub psi: Vec<Vec<Expr>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StmtKind {
    Field(Field),
    Ring {
        name: String,
        vars: Vec<(String, i64)>,
    },
    Section {
        name: String,
        ring: String,
        wname: String,
        weight: i64,
        f: Expr,
        g: Expr,
    },
    Mf(MfDecl),
    Query {
        kind: String,
        args: Vec<Arg>,
    },
}

/// A statement with its source position; equality ignores the position.
#[derive(Debug, Clone)]
pub struct Stmt {
    pub pos: Pos,
    pub kind: StmtKind,
}

impl PartialEq for Stmt {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Stmt {}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Program {
    pub stmts: Vec<Stmt>,
}

impl Program {
    pub fn queries(&self) -> impl Iterator<Item = &Stmt> {
        self.stmts
            .iter()
            .filter(|s| matches!(s.kind, StmtKind::Query { .. }))
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, xs: &[i64]) -> fmt::Result {
    write!(f, "[")?;
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{x}")?;
    }
    write!(f, "]")
}

fn write_matrix(f: &mut fmt::Formatter<'_>, rows: &[Vec<Expr>]) -> fmt::Result {
    write!(f, "[")?;
    for (i, row) in rows.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "[")?;
        for (j, e) in row.iter().enumerate() {
            if j > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]")?;
    }
    write!(f, "]")
}

impl fmt::Display for StmtKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StmtKind::Field(k) => write!(f, "field {k};"),
            StmtKind::Ring { name, vars } => {
                write!(f, "ring {name} {{ ")?;
                for (i, (v, w)) in vars.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{v}:{w}")?;
                }
                write!(f, " }};")
            }
            StmtKind::Section {
                name,
                ring,
                wname,
                weight,
                f: fx,
                g,
            } => write!(
                f,
                "section {name} = {ring} + {wname}:{weight} with f = {fx}, g = {g};"
            ),
            StmtKind::Mf(m) => {
                write!(f, "mf {} over ({}, {}) {{ d=", m.name, m.ring, m.f)?;
                write_list(f, &m.d)?;
                write!(f, "; e=")?;
                write_list(f, &m.e)?;
                write!(f, "; phi=")?;
                write_matrix(f, &m.phi)?;
                write!(f, "; psi=")?;
                write_matrix(f, &m.psi)?;
                write!(f, "; }}")
            }
            StmtKind::Query { kind, args } => {
                write!(f, "query {kind}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                write!(f, ";")
            }
        }
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.stmts {
            writeln!(f, "{}", s.kind)?;
        }
        Ok(())
    }
}
