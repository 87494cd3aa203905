use num_bigint::BigInt;

use super::Span;
use crate::document::Outcome;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Wedge,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Num(BigInt),
    Name(String),
    Deriv(String),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Call(String, Vec<Expr>),
    Bracket(Box<Expr>, Box<Expr>),
    Tuple(Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ident {
    pub name: String,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Rel {
    pub poly: Expr,
    pub solve: Option<Ident>,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChartBlock {
    pub vars: Vec<(Ident, bool)>,
    pub invert: Vec<Ident>,
    pub rels: Vec<Rel>,
    pub span: Span,
}

pub type MatrixLit = Vec<Vec<Expr>>;

#[derive(Clone, Debug, PartialEq)]
pub enum GroupStmt {
    Size(usize, Span),
    Basis(Vec<MatrixLit>, Span),
    Element(Ident, MatrixLit),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DefKind {
    Let,
    Volume,
    Form,
    Field,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Item {
    Def { kind: DefKind, name: Ident, value: Expr },
    Action { name: Ident, images: Vec<(Ident, Expr)>, order: (u32, Span) },
    Point { name: Ident, values: Vec<(Ident, Expr)> },
    Group { name: Ident, body: Vec<GroupStmt> },
    Check { kind: Ident, args: Vec<Expr>, expect: Option<Outcome> },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Program {
    pub chart: ChartBlock,
    pub items: Vec<Item>,
}
