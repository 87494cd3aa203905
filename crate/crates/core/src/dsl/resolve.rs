use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use indexmap::IndexMap;

use super::ast::*;
use super::{DslError, Span, RESERVED};
use crate::algebra::{LaurentPoly, Matrix, Rational, Vars};
use crate::calculus::{DiffForm, VectorField, VolumeForm};
use crate::document::{Check, CheckDirective, Document, PairRef, Subject};
use crate::groups::GroupPresentation;
use crate::variety::{Chart, SubstitutionAction};

type RResult<T> = Result<T, DslError>;

fn sem<T>(span: Span, msg: impl Into<String>) -> RResult<T> {
    Err(DslError::semantic(span, msg))
}

fn at<E: std::fmt::Display>(span: Span) -> impl Fn(E) -> DslError {
    move |e| DslError::semantic(span, e.to_string())
}

#[derive(Clone, Debug)]
enum Value {
    Poly(LaurentPoly),
    /// Ambient coefficients, not yet checked for tangency.
    Field(Vec<LaurentPoly>),
    Form(DiffForm),
}

impl Value {
    fn kind(&self) -> &'static str {
        match self {
            Value::Poly(_) => "a function",
            Value::Field(_) => "a vector field",
            Value::Form(_) => "a differential form",
        }
    }
}

struct Env<'a> {
    vars: &'a Vars,
    chart: Option<&'a Arc<Chart>>,
    doc: Option<&'a Document>,
    lets: &'a IndexMap<String, LaurentPoly>,
}

impl Env<'_> {
    fn chart(&self, span: Span, what: &str) -> RResult<&Arc<Chart>> {
        match self.chart {
            Some(c) => Ok(c),
            None => sem(span, format!("{what} cannot appear in a chart relation")),
        }
    }

    fn lookup(&self, name: &str, span: Span) -> RResult<Value> {
        if let Some(p) = self.lets.get(name) {
            return Ok(Value::Poly(p.clone()));
        }
        if let Some(doc) = self.doc {
            if let Some(f) = doc.form(name) {
                return Ok(Value::Form(f.clone()));
            }
            if let Some(v) = doc.fields.get(name) {
                return Ok(Value::Field(v.coefficients().to_vec()));
            }
            let kind = if doc.actions.contains_key(name) {
                Some("an action")
            } else if doc.points.contains_key(name) {
                Some("a point")
            } else if doc.groups.contains_key(name) {
                Some("a group")
            } else {
                None
            };
            if let Some(k) = kind {
                return sem(span, format!("`{name}` is {k} and cannot be used in an expression"));
            }
        }
        if let Some(i) = self.vars.index_of(name) {
            return Ok(Value::Poly(LaurentPoly::var_index(self.vars, i)));
        }
        if let Some(coord) = name.strip_prefix('d') {
            if let (Some(i), Some(chart)) = (self.vars.index_of(coord), self.chart) {
                return Ok(Value::Form(DiffForm::differential(chart, i)));
            }
        }
        sem(span, format!("unknown identifier `{name}`"))
    }

    fn field(&self, coeffs: Vec<LaurentPoly>, span: Span) -> RResult<VectorField> {
        let chart = self.chart(span, "a vector field")?;
        VectorField::new(chart, coeffs).map_err(at(span))
    }

    fn to_form(&self, v: Value, span: Span) -> RResult<DiffForm> {
        match v {
            Value::Form(f) => Ok(f),
            Value::Poly(p) => {
                let chart = self.chart(span, "a differential form")?;
                DiffForm::function(chart, &p).map_err(at(span))
            }
            other => sem(span, format!("expected a differential form, found {}", other.kind())),
        }
    }

    fn poly(&self, e: &Expr) -> RResult<LaurentPoly> {
        match self.eval(e)? {
            Value::Poly(p) => {
                if let Some(c) = self.chart {
                    c.check_laurent_support(&p).map_err(at(e.span))?;
                }
                Ok(p)
            }
            other => sem(e.span, format!("expected a function, found {}", other.kind())),
        }
    }

    fn constant(&self, e: &Expr) -> RResult<Rational> {
        match self.eval(e)? {
            Value::Poly(p) => match p.constant_value() {
                Some(c) => Ok(c),
                None => sem(e.span, format!("expected a rational constant, found `{p}`")),
            },
            other => sem(e.span, format!("expected a rational constant, found {}", other.kind())),
        }
    }

    fn eval(&self, e: &Expr) -> RResult<Value> {
        let span = e.span;
        match &e.kind {
            ExprKind::Num(n) => Ok(Value::Poly(LaurentPoly::constant(self.vars, Rational::from_integer(n.clone())))),
            ExprKind::Name(n) => self.lookup(n, span),
            ExprKind::Deriv(n) => {
                let chart = self.chart(span, "a derivation")?;
                let i = chart.coordinate(n).map_err(at(span))?;
                let mut coeffs = vec![chart.zero(); chart.dim_ambient()];
                coeffs[i] = chart.one();
                Ok(Value::Field(coeffs))
            }
            ExprKind::Neg(inner) => Ok(Self::neg(self.eval(inner)?)),
            ExprKind::Pow(base, k) => match self.eval(base)? {
                Value::Poly(p) => Ok(Value::Poly(p.pow_i(*k).map_err(at(span))?)),
                other => sem(span, format!("cannot raise {} to a power", other.kind())),
            },
            ExprKind::Bin(op, l, r) => {
                let a = self.eval(l)?;
                let b = self.eval(r)?;
                self.binary(*op, a, b, span)
            }
            ExprKind::Tuple(_) => sem(span, "tuples are only allowed as `condition_a` arguments"),
            ExprKind::Bracket(a, b) => self.bracket(a, b),
            ExprKind::Call(name, args) => self.call(name, args, span),
        }
    }

    fn neg(v: Value) -> Value {
        match v {
            Value::Poly(p) => Value::Poly(-&p),
            Value::Field(c) => Value::Field(c.iter().map(|p| -p).collect()),
            Value::Form(f) => Value::Form(f.neg()),
        }
    }

    fn scale(&self, p: &LaurentPoly, v: Value, span: Span) -> RResult<Value> {
        Ok(match v {
            Value::Poly(q) => Value::Poly(p * &q),
            Value::Field(c) => Value::Field(c.iter().map(|q| p * q).collect()),
            Value::Form(f) => {
                f.chart().check_laurent_support(p).map_err(at(span))?;
                Value::Form(f.scale(p))
            }
        })
    }

    fn binary(&self, op: BinOp, a: Value, b: Value, span: Span) -> RResult<Value> {
        match op {
            BinOp::Add | BinOp::Sub => {
                let b = if op == BinOp::Sub { Self::neg(b) } else { b };
                match (a, b) {
                    (Value::Poly(p), Value::Poly(q)) => Ok(Value::Poly(&p + &q)),
                    (Value::Poly(p), other) | (other, Value::Poly(p)) if p.is_zero() => Ok(other),
                    (Value::Field(x), Value::Field(y)) => {
                        Ok(Value::Field(x.iter().zip(&y).map(|(p, q)| p + q).collect()))
                    }
                    (Value::Form(f), Value::Form(g)) => Ok(Value::Form(f.add(&g).map_err(at(span))?)),
                    (Value::Form(f), Value::Poly(p)) | (Value::Poly(p), Value::Form(f)) if f.degree() == 0 => {
                        let g = self.to_form(Value::Poly(p), span)?;
                        Ok(Value::Form(f.add(&g).map_err(at(span))?))
                    }
                    (x, y) => sem(span, format!("cannot add {} and {}", x.kind(), y.kind())),
                }
            }
            BinOp::Mul => match (a, b) {
                (Value::Poly(p), other) | (other, Value::Poly(p)) => self.scale(&p, other, span),
                (Value::Form(_), Value::Form(_)) => sem(span, "use `^` for the wedge product of forms"),
                (x, y) => sem(span, format!("cannot multiply {} by {}", x.kind(), y.kind())),
            },
            BinOp::Div => match b {
                Value::Poly(q) => match q.inverse_unit() {
                    Some(inv) => self.scale(&inv, a, span),
                    None => sem(span, format!("division by non-unit `{q}`")),
                },
                other => sem(span, format!("cannot divide by {}", other.kind())),
            },
            BinOp::Wedge => match (a, b) {
                (Value::Form(f), Value::Form(g)) => Ok(Value::Form(f.wedge(&g).map_err(at(span))?)),
                (Value::Poly(p), Value::Form(f)) | (Value::Form(f), Value::Poly(p)) => {
                    self.scale(&p, Value::Form(f), span)
                }
                (Value::Poly(_), Value::Poly(_)) => sem(span, "exponent must be an integer literal"),
                (x, y) => sem(span, format!("cannot wedge {} with {}", x.kind(), y.kind())),
            },
        }
    }

    fn expect_field(&self, e: &Expr) -> RResult<VectorField> {
        match self.eval(e)? {
            Value::Field(c) => self.field(c, e.span),
            Value::Poly(p) if p.is_zero() => Ok(VectorField::zero(self.chart(e.span, "a vector field")?)),
            other => sem(e.span, format!("expected a vector field, found {}", other.kind())),
        }
    }

    fn bracket(&self, a: &Expr, b: &Expr) -> RResult<Value> {
        let x = self.expect_field(a)?;
        let y = self.expect_field(b)?;
        let br = x.bracket(&y).map_err(at(a.span))?;
        Ok(Value::Field(br.coefficients().to_vec()))
    }

    fn call(&self, name: &str, args: &[Expr], span: Span) -> RResult<Value> {
        let arity = match name {
            "d" => 1,
            _ => 2,
        };
        if args.len() != arity {
            return sem(span, format!("`{name}` takes {arity} argument(s), got {}", args.len()));
        }
        match name {
            "d" => {
                let f = self.to_form(self.eval(&args[0])?, args[0].span)?;
                Ok(Value::Form(f.d()))
            }
            "iota" => {
                let x = self.expect_field(&args[0])?;
                let f = self.to_form(self.eval(&args[1])?, args[1].span)?;
                Ok(Value::Form(f.interior(&x).map_err(at(span))?))
            }
            "bracket" => self.bracket(&args[0], &args[1]),
            "lie" => {
                let x = self.expect_field(&args[0])?;
                match self.eval(&args[1])? {
                    Value::Poly(p) => {
                        x.chart().check_laurent_support(&p).map_err(at(args[1].span))?;
                        Ok(Value::Poly(x.apply(&p)))
                    }
                    Value::Form(f) => Ok(Value::Form(f.lie_derivative(&x).map_err(at(span))?)),
                    Value::Field(c) => {
                        let y = self.field(c, args[1].span)?;
                        Ok(Value::Field(x.bracket(&y).map_err(at(span))?.coefficients().to_vec()))
                    }
                }
            }
            _ => unreachable!("parser only produces known calls"),
        }
    }
}

fn check_new_name(name: &Ident, vars: &Vars, doc: &Document, lets: &IndexMap<String, LaurentPoly>) -> RResult<()> {
    if RESERVED.contains(&name.name.as_str()) {
        return sem(name.span, format!("`{}` is a reserved word", name.name));
    }
    if vars.index_of(&name.name).is_some() {
        return sem(name.span, format!("`{}` is already a coordinate", name.name));
    }
    if doc.defines(&name.name) || lets.contains_key(&name.name) {
        return sem(name.span, format!("`{}` is already defined", name.name));
    }
    Ok(())
}

pub fn eval_poly(e: &Expr, vars: &Vars) -> RResult<LaurentPoly> {
    let lets = IndexMap::new();
    let env = Env {
        vars,
        chart: None,
        doc: None,
        lets: &lets,
    };
    env.poly(e)
}

fn build_chart(block: &ChartBlock) -> RResult<Arc<Chart>> {
    let names: Vec<&str> = block.vars.iter().map(|(id, _)| id.name.as_str()).collect();
    for (k, (id, _)) in block.vars.iter().enumerate() {
        if RESERVED.contains(&id.name.as_str()) {
            return sem(id.span, format!("`{}` is a reserved word", id.name));
        }
        if names[..k].contains(&id.name.as_str()) {
            return sem(id.span, format!("duplicate coordinate `{}`", id.name));
        }
    }
    let mut invertible: Vec<bool> = block.vars.iter().map(|(_, s)| *s).collect();
    for id in &block.invert {
        match names.iter().position(|n| *n == id.name) {
            Some(i) => invertible[i] = true,
            None => return sem(id.span, format!("unknown coordinate `{}`", id.name)),
        }
    }
    let vars = Vars::new(names.iter().copied());
    let lets = IndexMap::new();
    let env = Env {
        vars: &vars,
        chart: None,
        doc: None,
        lets: &lets,
    };
    let mut rels = Vec::new();
    for r in &block.rels {
        let Some(solve) = &r.solve else {
            return sem(r.span, "triangular presentation required: `rel` needs a `solve` clause");
        };
        if !names.contains(&solve.name.as_str()) {
            return sem(solve.span, format!("unknown coordinate `{}`", solve.name));
        }
        rels.push((env.poly(&r.poly)?, solve.name.as_str()));
    }
    let coords: Vec<(&str, bool)> = names.iter().copied().zip(invertible).collect();
    Chart::new(&coords, rels).map(Arc::new).map_err(at(block.span))
}

fn matrix(env: &Env<'_>, m: &MatrixLit, size: usize, span: Span) -> RResult<Matrix> {
    if m.len() != size || m.iter().any(|r| r.len() != size) {
        return sem(span, format!("expected a {size}x{size} matrix"));
    }
    let rows = m
        .iter()
        .map(|r| r.iter().map(|e| env.constant(e)).collect::<RResult<Vec<_>>>())
        .collect::<RResult<Vec<_>>>()?;
    Ok(Matrix::from_rows(rows))
}

fn build_group(env: &Env<'_>, name: &Ident, body: &[GroupStmt]) -> RResult<GroupPresentation> {
    let mut size = None;
    let mut basis = Vec::new();
    let mut elements = IndexMap::new();
    for stmt in body {
        match stmt {
            GroupStmt::Size(n, span) => {
                if size.is_some() {
                    return sem(*span, "duplicate `size`");
                }
                size = Some(*n);
            }
            GroupStmt::Basis(ms, span) => {
                let Some(n) = size else {
                    return sem(*span, "`size` must come first");
                };
                for m in ms {
                    basis.push(matrix(env, m, n, *span)?);
                }
            }
            GroupStmt::Element(id, m) => {
                let Some(n) = size else {
                    return sem(id.span, "`size` must come first");
                };
                if elements.contains_key(&id.name) {
                    return sem(id.span, format!("duplicate element `{}`", id.name));
                }
                elements.insert(id.name.clone(), matrix(env, m, n, id.span)?);
            }
        }
    }
    let Some(n) = size else {
        return sem(name.span, "group needs a `size`");
    };
    GroupPresentation::new(n, basis, elements).map_err(at(name.span))
}

/// Builds a [`Document`] from a parsed program.
pub fn resolve(prog: &Program) -> RResult<Document> {
    let chart = build_chart(&prog.chart)?;
    let vars = chart.vars().clone();
    let mut doc = Document::new(chart.clone());
    let mut lets: IndexMap<String, LaurentPoly> = IndexMap::new();
    for item in &prog.items {
        match item {
            Item::Def { kind, name, value } => {
                check_new_name(name, &vars, &doc, &lets)?;
                let env = Env {
                    vars: &vars,
                    chart: Some(&chart),
                    doc: Some(&doc),
                    lets: &lets,
                };
                let span = value.span;
                match kind {
                    DefKind::Let => {
                        let p = env.poly(value)?;
                        lets.insert(name.name.clone(), p);
                    }
                    DefKind::Field => {
                        let f = env.expect_field(value)?;
                        doc.fields.insert(name.name.clone(), f);
                    }
                    DefKind::Form => {
                        let f = env.to_form(env.eval(value)?, span)?;
                        doc.forms.insert(name.name.clone(), f);
                    }
                    DefKind::Volume => {
                        if let Some((prev, _)) = &doc.volume {
                            return sem(name.span, format!("volume form `{prev}` is already defined"));
                        }
                        let f = env.to_form(env.eval(value)?, span)?;
                        let v = VolumeForm::new(f).map_err(at(span))?;
                        doc.volume = Some((name.name.clone(), v));
                    }
                }
            }
            Item::Action { name, images, order } => {
                check_new_name(name, &vars, &doc, &lets)?;
                let env = Env {
                    vars: &vars,
                    chart: Some(&chart),
                    doc: Some(&doc),
                    lets: &lets,
                };
                let mut map = HashMap::new();
                for (coord, e) in images {
                    if vars.index_of(&coord.name).is_none() {
                        return sem(coord.span, format!("unknown coordinate `{}`", coord.name));
                    }
                    if map.insert(coord.name.clone(), env.poly(e)?).is_some() {
                        return sem(coord.span, format!("`{}` is assigned twice", coord.name));
                    }
                }
                let a = SubstitutionAction::new(&chart, &name.name, &map, order.0).map_err(at(name.span))?;
                doc.actions.insert(name.name.clone(), a);
            }
            Item::Point { name, values } => {
                check_new_name(name, &vars, &doc, &lets)?;
                let env = Env {
                    vars: &vars,
                    chart: Some(&chart),
                    doc: Some(&doc),
                    lets: &lets,
                };
                let mut map = HashMap::new();
                for (coord, e) in values {
                    if vars.index_of(&coord.name).is_none() {
                        return sem(coord.span, format!("unknown coordinate `{}`", coord.name));
                    }
                    if map.insert(coord.name.clone(), env.constant(e)?).is_some() {
                        return sem(coord.span, format!("`{}` is assigned twice", coord.name));
                    }
                }
                let given: HashSet<&str> = map.keys().map(String::as_str).collect();
                let free: HashSet<&str> = chart.free().iter().map(|&i| chart.coordinate_name(i)).collect();
                let p = if given.len() == vars.len() {
                    chart.point(&map)
                } else if given == free {
                    chart.point_from_free(&map)
                } else {
                    return sem(name.span, "give values for all coordinates or exactly the free ones");
                };
                doc.points.insert(name.name.clone(), p.map_err(at(name.span))?);
            }
            Item::Group { name, body } => {
                check_new_name(name, &vars, &doc, &lets)?;
                let env = Env {
                    vars: &vars,
                    chart: Some(&chart),
                    doc: Some(&doc),
                    lets: &lets,
                };
                let g = build_group(&env, name, body)?;
                doc.groups.insert(name.name.clone(), g);
            }
            Item::Check { kind, args, expect } => {
                let env = Env {
                    vars: &vars,
                    chart: Some(&chart),
                    doc: Some(&doc),
                    lets: &lets,
                };
                let check = build_check(&env, &doc, kind, args)?;
                doc.checks.push(CheckDirective { check, expect: *expect });
            }
        }
    }
    Ok(doc)
}

struct Args<'a> {
    env: &'a Env<'a>,
    doc: &'a Document,
    args: &'a [Expr],
}

impl Args<'_> {
    fn name(&self, i: usize, what: &str) -> RResult<String> {
        match &self.args[i].kind {
            ExprKind::Name(n) => Ok(n.clone()),
            _ => sem(self.args[i].span, format!("expected {what} name")),
        }
    }

    fn known(&self, i: usize, what: &str, ok: impl Fn(&Document, &str) -> bool) -> RResult<String> {
        let n = self.name(i, what)?;
        if ok(self.doc, &n) {
            Ok(n)
        } else {
            sem(self.args[i].span, format!("unknown {what} `{n}`"))
        }
    }

    fn field(&self, i: usize) -> RResult<String> {
        self.known(i, "field", |d, n| d.fields.contains_key(n))
    }

    fn volume(&self, i: usize) -> RResult<String> {
        self.known(i, "volume form", |d, n| d.volume_named(n).is_some())
    }

    fn form(&self, i: usize) -> RResult<String> {
        self.known(i, "form", |d, n| d.form(n).is_some())
    }

    fn poly(&self, i: usize) -> RResult<LaurentPoly> {
        self.env.poly(&self.args[i])
    }

    fn bound(&self, i: usize) -> RResult<Option<u32>> {
        match self.args.get(i) {
            None => Ok(None),
            Some(Expr {
                kind: ExprKind::Num(n), ..
            }) => u32::try_from(n).map(Some).or_else(|_| sem(self.args[i].span, "bound out of range")),
            Some(e) => sem(e.span, "expected an integer bound"),
        }
    }
}

fn build_check(env: &Env<'_>, doc: &Document, kind: &Ident, args: &[Expr]) -> RResult<Check> {
    let (min, max) = match kind.name.as_str() {
        "tangent" | "closed" | "formula4" | "character" => (1, 1),
        "divergence_free" | "exact" | "commute" | "invariant" => (2, 2),
        "lnd" => (1, 2),
        "semicompat" | "kernel_contains" | "kernel_powers" => (2, 3),
        "bracket_potential" => (3, 4),
        "divergence" | "identity1" | "potential" | "potential_sign" | "theta" | "formula3" | "quasi_invariant"
        | "submodular" => (3, 3),
        "condition_a" => (1, usize::MAX),
        other => return sem(kind.span, format!("unknown check `{other}`")),
    };
    if args.len() < min || args.len() > max {
        let want = if min == max {
            min.to_string()
        } else if max == usize::MAX {
            format!("at least {min}")
        } else {
            format!("{min} to {max}")
        };
        return sem(kind.span, format!("`{}` takes {want} argument(s), got {}", kind.name, args.len()));
    }
    let a = Args { env, doc, args };
    Ok(match kind.name.as_str() {
        "tangent" => Check::Tangent { field: a.field(0)? },
        "divergence_free" => Check::DivergenceFree {
            field: a.field(0)?,
            volume: a.volume(1)?,
        },
        "divergence" => Check::Divergence {
            field: a.field(0)?,
            volume: a.volume(1)?,
            expected: a.poly(2)?,
        },
        "identity1" => Check::Identity1 {
            xi: a.field(0)?,
            eta: a.field(1)?,
            volume: a.volume(2)?,
        },
        "bracket_potential" => Check::BracketPotential {
            xi: a.field(0)?,
            eta: a.field(1)?,
            volume: a.volume(2)?,
            expected: if args.len() == 4 { Some(a.poly(3)?) } else { None },
        },
        "potential" => Check::Potential {
            f: a.poly(0)?,
            field: a.field(1)?,
            volume: a.volume(2)?,
        },
        "potential_sign" => Check::PotentialSign {
            f: a.poly(0)?,
            field: a.field(1)?,
            volume: a.volume(2)?,
        },
        "theta" => Check::Theta {
            field: a.field(0)?,
            volume: a.volume(1)?,
            expected: a.form(2)?,
        },
        "exact" => Check::Exact {
            form: a.form(0)?,
            primitive: a.form(1)?,
        },
        "closed" => Check::Closed { form: a.form(0)? },
        "kernel_contains" => Check::KernelContains {
            field: a.field(0)?,
            f: a.poly(1)?,
            bound: a.bound(2)?,
        },
        "kernel_powers" => Check::KernelPowers {
            field: a.field(0)?,
            generator: a.poly(1)?,
            bound: a.bound(2)?,
        },
        "semicompat" => Check::Semicompat {
            xi: a.field(0)?,
            eta: a.field(1)?,
            bound: a.bound(2)?,
        },
        "condition_a" => {
            let mut pairs = Vec::new();
            for e in args {
                let ExprKind::Tuple(items) = &e.kind else {
                    return sem(e.span, "expected a triple `(xi, eta, witness)`");
                };
                if items.len() != 3 {
                    return sem(e.span, "expected a triple `(xi, eta, witness)`");
                }
                let t = Args { env, doc, args: items };
                pairs.push(PairRef {
                    xi: t.field(0)?,
                    eta: t.field(1)?,
                    witness: t.poly(2)?,
                });
            }
            Check::ConditionA { pairs }
        }
        "lnd" => Check::Lnd {
            field: a.field(0)?,
            bound: a.bound(1)?.map(|b| b as usize),
        },
        "commute" => Check::Commute {
            xi: a.field(0)?,
            eta: a.field(1)?,
        },
        "formula3" => Check::Formula3 {
            field: a.field(0)?,
            f: a.poly(1)?,
            point: a.known(2, "point", |d, n| d.points.contains_key(n))?,
        },
        "invariant" => {
            let subject = match &args[0].kind {
                ExprKind::Name(n) if doc.fields.contains_key(n) => Subject::Field(n.clone()),
                ExprKind::Name(n) if doc.form(n).is_some() => Subject::Form(n.clone()),
                _ => Subject::Function(a.poly(0)?),
            };
            Check::Invariant {
                subject,
                action: a.known(1, "action", |d, n| d.actions.contains_key(n))?,
            }
        }
        "quasi_invariant" => Check::QuasiInvariant {
            form: a.form(0)?,
            action: a.known(1, "action", |d, n| d.actions.contains_key(n))?,
            character: env.constant(&args[2])?,
        },
        "formula4" => Check::Formula4 { f: a.poly(0)? },
        "submodular" => {
            let group = a.known(0, "group", |d, n| d.groups.contains_key(n))?;
            let element = a.name(1, "element")?;
            if doc.groups[&group].element(&element).is_err() {
                return sem(args[1].span, format!("group `{group}` has no element `{element}`"));
            }
            Check::Submodular {
                group,
                element,
                expected: env.constant(&args[2])?,
            }
        }
        "character" => Check::Character {
            group: a.known(0, "group", |d, n| d.groups.contains_key(n))?,
        },
        _ => unreachable!(),
    })
}

