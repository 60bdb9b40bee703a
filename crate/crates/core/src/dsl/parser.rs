use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::ast::{Arg, Expr, MfDecl, Program, Stmt, StmtKind};
use super::lexer::{err_at, tokenize, Pos, Tok, Token};
use crate::error::Result;
use crate::scalar::Field;

struct Parser {
    tokens: Vec<Token>,
    at: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self> {
        Ok(Parser {
            tokens: tokenize(text)?,
            at: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.tokens[self.at].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.at + k).min(self.tokens.len() - 1);
        &self.tokens[i].tok
    }

    fn pos(&self) -> Pos {
        self.tokens[self.at].pos
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.at].clone();
        if self.at + 1 < self.tokens.len() {
            self.at += 1;
        }
        t
    }

    fn describe(tok: &Tok) -> String {
        match tok {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Sym(s) => format!("`{s}`"),
            Tok::Eof => "end of input".into(),
        }
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Tok::Sym(t) if *t == s)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.is_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> Result<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            Err(err_at(
                self.pos(),
                format!("expected `{s}`, found {}", Self::describe(self.peek())),
            ))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            t => Err(err_at(
                self.pos(),
                format!("expected identifier, found {}", Self::describe(&t)),
            )),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        let pos = self.pos();
        let id = self.ident()?;
        if id == kw {
            Ok(())
        } else {
            Err(err_at(pos, format!("expected `{kw}`, found `{id}`")))
        }
    }

    fn uint(&mut self) -> Result<BigInt> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(n)
            }
            t => Err(err_at(
                self.pos(),
                format!("expected integer, found {}", Self::describe(&t)),
            )),
        }
    }

    fn small_int(&mut self) -> Result<i64> {
        let pos = self.pos();
        let neg = self.eat_sym("-");
        let n = self.uint()?;
        let n = n
            .to_i64()
            .ok_or_else(|| err_at(pos, "integer out of range"))?;
        Ok(if neg { -n } else { n })
    }

    fn program(&mut self) -> Result<Program> {
        let mut stmts = Vec::new();
        while *self.peek() != Tok::Eof {
            stmts.push(self.stmt()?);
        }
        Ok(Program { stmts })
    }

    fn stmt(&mut self) -> Result<Stmt> {
        let pos = self.pos();
        let head = self.ident()?;
        let kind = match head.as_str() {
            "field" => self.field_decl()?,
            "ring" => self.ring_decl()?,
            "section" => self.section_decl()?,
            "mf" => self.mf_decl()?,
            "query" => self.query()?,
            other => {
                return Err(err_at(
                    pos,
                    format!("expected field, ring, section, mf or query, found `{other}`"),
                ))
            }
        };
        Ok(Stmt { pos, kind })
    }

    fn field_decl(&mut self) -> Result<StmtKind> {
        let pos = self.pos();
        let name = self.ident()?;
        let field = match name.as_str() {
            "Q" | "QQ" => Field::Rationals,
            "GF" => {
                self.expect_sym("(")?;
                let ppos = self.pos();
                let p = self.uint()?;
                self.expect_sym(")")?;
                let p = p
                    .to_u64()
                    .ok_or_else(|| err_at(ppos, "modulus out of range"))?;
                Field::prime(p).map_err(|e| err_at(ppos, e.to_string()))?
            }
            _ => return Err(err_at(pos, format!("unknown field `{name}`"))),
        };
        self.expect_sym(";")?;
        Ok(StmtKind::Field(field))
    }

    fn ring_decl(&mut self) -> Result<StmtKind> {
        let name = self.ident()?;
        self.expect_sym("{")?;
        let mut vars = Vec::new();
        if !self.is_sym("}") {
            loop {
                let v = self.ident()?;
                self.expect_sym(":")?;
                let w = self.small_int()?;
                vars.push((v, w));
                if !self.eat_sym(",") {
                    break;
                }
            }
        }
        self.expect_sym("}")?;
        self.eat_sym(";");
        Ok(StmtKind::Ring { name, vars })
    }

    fn section_decl(&mut self) -> Result<StmtKind> {
        let name = self.ident()?;
        self.expect_sym("=")?;
        let ring = self.ident()?;
        self.expect_sym("+")?;
        let wname = self.ident()?;
        self.expect_sym(":")?;
        let weight = self.small_int()?;
        self.keyword("with")?;
        self.keyword("f")?;
        self.expect_sym("=")?;
        let f = self.expr()?;
        self.expect_sym(",")?;
        self.keyword("g")?;
        self.expect_sym("=")?;
        let g = self.expr()?;
        self.expect_sym(";")?;
        Ok(StmtKind::Section {
            name,
            ring,
            wname,
            weight,
            f,
            g,
        })
    }

    fn int_list(&mut self) -> Result<Vec<i64>> {
        self.expect_sym("[")?;
        let mut out = Vec::new();
        if !self.is_sym("]") {
            loop {
                out.push(self.small_int()?);
                if !self.eat_sym(",") {
                    break;
                }
            }
        }
        self.expect_sym("]")?;
        Ok(out)
    }

    fn matrix(&mut self) -> Result<Vec<Vec<Expr>>> {
        self.expect_sym("[")?;
        let mut rows = Vec::new();
        if !self.is_sym("]") {
            loop {
                self.expect_sym("[")?;
                let mut row = Vec::new();
                if !self.is_sym("]") {
                    loop {
                        row.push(self.expr()?);
                        if !self.eat_sym(",") {
                            break;
                        }
                    }
                }
                self.expect_sym("]")?;
                rows.push(row);
                if !self.eat_sym(",") {
                    break;
                }
            }
        }
        self.expect_sym("]")?;
        Ok(rows)
    }

    fn mf_decl(&mut self) -> Result<StmtKind> {
        let name = self.ident()?;
        self.keyword("over")?;
        self.expect_sym("(")?;
        let ring = self.ident()?;
        self.expect_sym(",")?;
        let f = self.expr()?;
        self.expect_sym(")")?;
        let open = self.pos();
        self.expect_sym("{")?;
        let (mut d, mut e, mut phi, mut psi) = (None, None, None, None);
        while !self.is_sym("}") {
            let kpos = self.pos();
            let key = self.ident()?;
            self.expect_sym("=")?;
            let dup = match key.as_str() {
                "d" => d.replace(self.int_list()?).is_some(),
                "e" => e.replace(self.int_list()?).is_some(),
                "phi" => phi.replace(self.matrix()?).is_some(),
                "psi" => psi.replace(self.matrix()?).is_some(),
                _ => return Err(err_at(kpos, format!("unknown factorization field `{key}`"))),
            };
            if dup {
                return Err(err_at(kpos, format!("`{key}` given twice")));
            }
            self.expect_sym(";")?;
        }
        self.expect_sym("}")?;
        self.eat_sym(";");
        let missing = |what: &str| err_at(open, format!("factorization `{name}` lacks `{what}`"));
        Ok(StmtKind::Mf(MfDecl {
            d: d.ok_or_else(|| missing("d"))?,
            e: e.ok_or_else(|| missing("e"))?,
            phi: phi.ok_or_else(|| missing("phi"))?,
            psi: psi.ok_or_else(|| missing("psi"))?,
            name,
            ring,
            f,
        }))
    }

    fn query(&mut self) -> Result<StmtKind> {
        let mut kind = self.ident()?;
        while self.is_sym("-") && matches!(self.peek_at(1), Tok::Ident(_)) {
            self.bump();
            kind.push('-');
            kind.push_str(&self.ident()?);
        }
        let mut args = Vec::new();
        while !self.is_sym(";") {
            args.push(self.arg()?);
        }
        self.expect_sym(";")?;
        Ok(StmtKind::Query { kind, args })
    }

    fn arg(&mut self) -> Result<Arg> {
        match self.peek() {
            Tok::Ident(_) => Ok(Arg::Name(self.ident()?)),
            Tok::Sym("(") => {
                self.bump();
                let ring = self.ident()?;
                self.expect_sym(",")?;
                let expr = self.expr()?;
                self.expect_sym(")")?;
                Ok(Arg::Poly { ring, expr })
            }
            Tok::Int(_) | Tok::Sym("-") => {
                let a = self.small_int()?;
                if self.eat_sym("..") {
                    Ok(Arg::Range(a, self.small_int()?))
                } else {
                    Ok(Arg::Int(a))
                }
            }
            t => Err(err_at(
                self.pos(),
                format!("unexpected {} in query", Self::describe(t)),
            )),
        }
    }

    pub fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat_sym("+") {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat_sym("-") {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while self.eat_sym("*") {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat_sym("-") {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat_sym("^") {
            let pos = self.pos();
            let k = self.uint()?;
            let k = k
                .to_u32()
                .ok_or_else(|| err_at(pos, "exponent out of range"))?;
            return Ok(Expr::Pow(Box::new(base), k));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::Int(n))
            }
            Tok::Ident(s) => {
                self.bump();
                Ok(Expr::Var(s))
            }
            Tok::Sym("(") => {
                self.bump();
                let e = self.expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            t => Err(err_at(
                pos,
                format!("expected polynomial, found {}", Self::describe(&t)),
            )),
        }
    }
}

pub fn parse_program(text: &str) -> Result<Program> {
    Parser::new(text)?.program()
}

pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser::new(text)?;
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return Err(err_at(
            p.pos(),
            format!("unexpected {} after polynomial", Parser::describe(p.peek())),
        ));
    }
    Ok(e)
}
