use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::ast::*;
use super::lexer::{Tok, Token};
use super::{DslError, Span};
use crate::document::Outcome;

/// Words that end an expression instead of multiplying into it.
const STOP_WORDS: [&str; 3] = ["solve", "order", "expect"];

pub struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

type PResult<T> = Result<T, DslError>;

impl Parser {
    pub fn new(toks: Vec<Token>) -> Self {
        Parser { toks, pos: 0 }
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, expected: &str) -> PResult<T> {
        Err(DslError::parse(
            self.span(),
            format!("expected {expected}, found {}", self.peek().describe()),
        ))
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<Span> {
        if *self.peek() == tok {
            Ok(self.bump().span)
        } else {
            self.error(what)
        }
    }

    fn at_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == w)
    }

    fn expect_word(&mut self, w: &str) -> PResult<Span> {
        if self.at_word(w) {
            Ok(self.bump().span)
        } else {
            self.error(&format!("`{w}`"))
        }
    }

    fn ident(&mut self, what: &str) -> PResult<Ident> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let span = self.bump().span;
                Ok(Ident { name, span })
            }
            _ => self.error(what),
        }
    }

    fn integer(&mut self, what: &str) -> PResult<(BigInt, Span)> {
        match self.peek().clone() {
            Tok::Int(n) => Ok((n, self.bump().span)),
            _ => self.error(what),
        }
    }

    fn small(&mut self, what: &str) -> PResult<(u32, Span)> {
        let (n, span) = self.integer(what)?;
        match n.to_u32() {
            Some(v) => Ok((v, span)),
            None => Err(DslError::parse(span, format!("integer {n} out of range"))),
        }
    }

    pub fn finish(&mut self) -> PResult<()> {
        match self.peek() {
            Tok::Eof => Ok(()),
            _ => self.error("end of input"),
        }
    }

    pub fn program(&mut self) -> PResult<Program> {
        let chart = self.chart()?;
        let mut items = Vec::new();
        while *self.peek() != Tok::Eof {
            items.push(self.item()?);
        }
        Ok(Program { chart, items })
    }

    fn chart(&mut self) -> PResult<ChartBlock> {
        let span = self.expect_word("chart")?;
        self.expect(Tok::LBrace, "`{`")?;
        let mut vars = Vec::new();
        let mut invert = Vec::new();
        let mut rels = Vec::new();
        let mut seen_vars = false;
        while !self.eat(&Tok::RBrace) {
            if self.at_word("vars") {
                let s = self.bump().span;
                if seen_vars {
                    return Err(DslError::parse(s, "duplicate `vars` statement"));
                }
                seen_vars = true;
                loop {
                    let id = self.ident("a coordinate name")?;
                    let star = self.eat(&Tok::Star);
                    vars.push((id, star));
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                self.expect(Tok::Semi, "`;`")?;
            } else if self.at_word("invert") {
                self.bump();
                loop {
                    invert.push(self.ident("a coordinate name")?);
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                self.expect(Tok::Semi, "`;`")?;
            } else if self.at_word("rel") {
                let span = self.bump().span;
                let poly = self.expr()?;
                let solve = if self.at_word("solve") {
                    self.bump();
                    Some(self.ident("a coordinate name")?)
                } else {
                    None
                };
                self.expect(Tok::Semi, "`;`")?;
                rels.push(Rel { poly, solve, span });
            } else {
                return self.error("`vars`, `invert`, `rel` or `}`");
            }
        }
        if !seen_vars {
            return Err(DslError::parse(span, "chart block needs a `vars` statement"));
        }
        Ok(ChartBlock { vars, invert, rels, span })
    }

    fn item(&mut self) -> PResult<Item> {
        let word = match self.peek() {
            Tok::Ident(w) => w.clone(),
            _ => return self.error("a definition or `check`"),
        };
        let kind = match word.as_str() {
            "let" => Some(DefKind::Let),
            "volume" => Some(DefKind::Volume),
            "form" => Some(DefKind::Form),
            "field" => Some(DefKind::Field),
            _ => None,
        };
        if let Some(kind) = kind {
            self.bump();
            let name = self.ident("a name")?;
            self.expect(Tok::Eq, "`=`")?;
            let value = self.expr()?;
            self.expect(Tok::Semi, "`;`")?;
            return Ok(Item::Def { kind, name, value });
        }
        match word.as_str() {
            "action" => self.action(),
            "point" => self.point(),
            "group" => self.group(),
            "check" => self.check(),
            "chart" => Err(DslError::parse(self.span(), "only one chart block is allowed")),
            _ => self.error("a definition or `check`"),
        }
    }

    fn action(&mut self) -> PResult<Item> {
        self.bump();
        let name = self.ident("an action name")?;
        self.expect(Tok::Colon, "`:`")?;
        let mut images = Vec::new();
        if !self.at_word("order") {
            loop {
                let coord = self.ident("a coordinate name")?;
                self.expect(Tok::Arrow, "`->`")?;
                images.push((coord, self.expr()?));
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect_word("order")?;
        let order = self.small("the action order")?;
        self.expect(Tok::Semi, "`;`")?;
        Ok(Item::Action { name, images, order })
    }

    fn point(&mut self) -> PResult<Item> {
        self.bump();
        let name = self.ident("a point name")?;
        self.expect(Tok::Colon, "`:`")?;
        let mut values = Vec::new();
        loop {
            let coord = self.ident("a coordinate name")?;
            self.expect(Tok::Eq, "`=`")?;
            values.push((coord, self.expr()?));
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(Tok::Semi, "`;`")?;
        Ok(Item::Point { name, values })
    }

    fn matrix(&mut self) -> PResult<MatrixLit> {
        self.expect(Tok::LBracket, "`[`")?;
        let mut rows = Vec::new();
        loop {
            self.expect(Tok::LBracket, "`[`")?;
            let mut row = Vec::new();
            loop {
                row.push(self.expr()?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(Tok::RBracket, "`]`")?;
            rows.push(row);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(Tok::RBracket, "`]`")?;
        Ok(rows)
    }

    fn group(&mut self) -> PResult<Item> {
        self.bump();
        let name = self.ident("a group name")?;
        self.expect(Tok::LBrace, "`{`")?;
        let mut body = Vec::new();
        while !self.eat(&Tok::RBrace) {
            if self.at_word("size") {
                self.bump();
                let (n, span) = self.small("the matrix size")?;
                body.push(GroupStmt::Size(n as usize, span));
            } else if self.at_word("basis") {
                let span = self.bump().span;
                let mut mats = Vec::new();
                loop {
                    mats.push(self.matrix()?);
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                body.push(GroupStmt::Basis(mats, span));
            } else if self.at_word("element") {
                self.bump();
                let id = self.ident("an element name")?;
                self.expect(Tok::Eq, "`=`")?;
                body.push(GroupStmt::Element(id, self.matrix()?));
            } else {
                return self.error("`size`, `basis`, `element` or `}`");
            }
            self.expect(Tok::Semi, "`;`")?;
        }
        Ok(Item::Group { name, body })
    }

    fn check(&mut self) -> PResult<Item> {
        self.bump();
        let kind = self.ident("a check kind")?;
        self.expect(Tok::LParen, "`(`")?;
        let mut args = Vec::new();
        if !self.eat(&Tok::RParen) {
            loop {
                args.push(self.expr()?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(Tok::RParen, "`)` or `,`")?;
        }
        let expect = if self.at_word("expect") {
            self.bump();
            let w = self.ident("`pass`, `fail` or `unknown`")?;
            Some(match w.name.as_str() {
                "pass" => Outcome::Pass,
                "fail" => Outcome::Fail,
                "unknown" => Outcome::Unknown,
                _ => return Err(DslError::parse(w.span, "expected `pass`, `fail` or `unknown`")),
            })
        } else {
            None
        };
        self.expect(Tok::Semi, "`;`")?;
        Ok(Item::Check { kind, args, expect })
    }

    pub fn expr(&mut self) -> PResult<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            let span = self.bump().span;
            let rhs = self.term()?;
            lhs = Expr {
                kind: ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
    }

    fn starts_factor(&self) -> bool {
        match self.peek() {
            Tok::Ident(w) => !STOP_WORDS.contains(&w.as_str()),
            Tok::Int(_) | Tok::Deriv(_) | Tok::LParen | Tok::LBracket => true,
            _ => false,
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let (op, span) = match self.peek() {
                Tok::Star => (BinOp::Mul, self.bump().span),
                Tok::Slash => (BinOp::Div, self.bump().span),
                _ if self.starts_factor() => (BinOp::Mul, self.span()),
                _ => return Ok(lhs),
            };
            let rhs = self.unary()?;
            lhs = Expr {
                kind: ExprKind::Bin(op, Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
    }

    fn unary(&mut self) -> PResult<Expr> {
        if *self.peek() == Tok::Minus {
            let span = self.bump().span;
            let inner = self.unary()?;
            return Ok(Expr {
                kind: ExprKind::Neg(Box::new(inner)),
                span,
            });
        }
        self.power()
    }

    fn power(&mut self) -> PResult<Expr> {
        let mut lhs = self.primary()?;
        while *self.peek() == Tok::Caret {
            let span = self.bump().span;
            let exponent = match (self.peek().clone(), self.peek_at(1).clone()) {
                (Tok::Int(_), _) => {
                    let (n, s) = self.integer("an exponent")?;
                    Some((n, s))
                }
                (Tok::Minus, Tok::Int(_)) => {
                    self.bump();
                    let (n, s) = self.integer("an exponent")?;
                    Some((-n, s))
                }
                _ => None,
            };
            lhs = match exponent {
                Some((n, s)) => {
                    let e = n
                        .to_i32()
                        .ok_or_else(|| DslError::parse(s, format!("exponent {n} out of range")))?;
                    Expr {
                        kind: ExprKind::Pow(Box::new(lhs), e),
                        span,
                    }
                }
                None => {
                    let rhs = self.primary()?;
                    Expr {
                        kind: ExprKind::Bin(BinOp::Wedge, Box::new(lhs), Box::new(rhs)),
                        span,
                    }
                }
            };
        }
        Ok(lhs)
    }

    fn primary(&mut self) -> PResult<Expr> {
        let span = self.span();
        let kind = match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                ExprKind::Num(n)
            }
            Tok::Deriv(name) => {
                self.bump();
                ExprKind::Deriv(name)
            }
            Tok::Ident(name) => {
                if STOP_WORDS.contains(&name.as_str()) {
                    return self.error("an expression");
                }
                self.bump();
                if super::CALLABLE.contains(&name.as_str()) && *self.peek() == Tok::LParen {
                    self.bump();
                    let mut args = Vec::new();
                    loop {
                        args.push(self.expr()?);
                        if !self.eat(&Tok::Comma) {
                            break;
                        }
                    }
                    self.expect(Tok::RParen, "`)` or `,`")?;
                    ExprKind::Call(name, args)
                } else {
                    ExprKind::Name(name)
                }
            }
            Tok::LParen => {
                self.bump();
                let first = self.expr()?;
                if self.eat(&Tok::RParen) {
                    return Ok(first);
                }
                let mut items = vec![first];
                while self.eat(&Tok::Comma) {
                    items.push(self.expr()?);
                }
                self.expect(Tok::RParen, "`)` or `,`")?;
                ExprKind::Tuple(items)
            }
            Tok::LBracket => {
                self.bump();
                let a = self.expr()?;
                self.expect(Tok::Comma, "`,`")?;
                let b = self.expr()?;
                self.expect(Tok::RBracket, "`]`")?;
                ExprKind::Bracket(Box::new(a), Box::new(b))
            }
            _ => return self.error("an expression"),
        };
        Ok(Expr { kind, span })
    }
}
