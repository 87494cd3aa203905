//! Built-in documents for the worked examples: tori, `SL₂`, the surfaces
//! `p(x) + q(y) + xyz = 1`, the varieties `xᵐv − yu = 1`, a quadric with an
//! involution, and products of any two of these.

use std::collections::HashMap;
use std::ops::Deref;
use std::sync::Arc;

use indexmap::IndexMap;
use num_integer::Integer;
use num_traits::One;
use thiserror::Error;

use crate::algebra::rational::{rat, ratio};
use crate::algebra::{LaurentPoly, Matrix, Rational, Vars};
use crate::avdp::{AvdpError, Surface};
use crate::calculus::{embed_field, embed_form, CalculusError, DiffForm, VectorField, VolumeForm};
use crate::document::{Check, Document, Outcome, Subject};
use crate::dsl::{self, DslError};
use crate::groups::{self, GroupError, GroupPresentation};
use crate::variety::{Chart, ChartError, Relation, SubstitutionAction};

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("unknown scenario `{0}`")]
    Unknown(String),
    #[error("scenario `{name}`: {reason}")]
    Parameter { name: String, reason: String },
    #[error(transparent)]
    Dsl(#[from] DslError),
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    #[error(transparent)]
    Avdp(#[from] AvdpError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

type Result<T> = std::result::Result<T, ScenarioError>;

/// A named document.
#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub document: Document,
}

impl Deref for Scenario {
    type Target = Document;
    fn deref(&self) -> &Document {
        &self.document
    }
}

/// Name syntax and a one-line description of each scenario family.
pub const CATALOG: [(&str, &str); 6] = [
    ("torus:N", "the torus (C*)^N with its invariant volume form"),
    ("sl2", "SL2 as a1*b2 - a2*b1 = 1, with the fields xi and eta"),
    ("surface:p=P,q=Q", "the surface P(x) + Q(y) + xyz = 1 (defaults p=x, q=y)"),
    ("xm1:M", "the variety x^M*v - y*u = 1 with its volume form"),
    ("quadric", "uv - x^2 + 1 = 0 with the involution (u,v,x) -> (-u,-v,-x)"),
    ("product:A,B", "the product of two scenarios; parenthesise names containing commas"),
];

fn param(name: &str, reason: impl Into<String>) -> ScenarioError {
    ScenarioError::Parameter {
        name: name.to_string(),
        reason: reason.into(),
    }
}

fn var(chart: &Chart, name: &str) -> LaurentPoly {
    chart.var(name).expect("scenario coordinate")
}

fn dvar(chart: &Arc<Chart>, name: &str) -> DiffForm {
    DiffForm::differential(chart, chart.coordinate(name).expect("scenario coordinate"))
}

fn field(chart: &Arc<Chart>, entries: &[(&str, LaurentPoly)]) -> Result<VectorField> {
    let mut coeffs = vec![chart.zero(); chart.dim_ambient()];
    for (name, c) in entries {
        coeffs[chart.coordinate(name)?] = c.clone();
    }
    Ok(VectorField::new(chart, coeffs)?)
}

fn wedge_all(chart: &Arc<Chart>, forms: impl IntoIterator<Item = DiffForm>) -> Result<DiffForm> {
    let mut acc = DiffForm::function(chart, &chart.one())?;
    for f in forms {
        acc = acc.wedge(&f)?;
    }
    Ok(acc)
}

fn action(chart: &Chart, name: &str, images: &[(&str, LaurentPoly)], order: u32) -> Result<SubstitutionAction> {
    let map: HashMap<String, LaurentPoly> = images.iter().map(|(n, p)| (n.to_string(), p.clone())).collect();
    Ok(SubstitutionAction::new(chart, name, &map, order)?)
}

fn fields(doc: &mut Document, list: Vec<(&str, VectorField)>) {
    for (n, f) in list {
        doc.fields.insert(n.to_string(), f);
    }
}

/// `(ℂ*)ⁿ` with `ω = ∧ dz_i/z_i`, `ν_i = z_i∂_{z_i}`, the fields
/// `ν_i′ = ν_j(z_j)ν_i = z_j ν_i` for `i ≠ j`, and `z ↦ −z`.
pub fn torus(n: usize) -> Result<Scenario> {
    if n < 1 {
        return Err(param("torus", "dimension must be at least 1"));
    }
    let names: Vec<String> = (1..=n).map(|i| format!("z{i}")).collect();
    let coords: Vec<(&str, bool)> = names.iter().map(|s| (s.as_str(), true)).collect();
    let chart = Arc::new(Chart::new(&coords, vec![])?);
    let z: Vec<LaurentPoly> = names.iter().map(|s| var(&chart, s)).collect();
    let dlog = |i: usize| -> Result<DiffForm> {
        let inv = z[i].inverse_unit().expect("coordinate is a unit");
        Ok(dvar(&chart, &names[i]).scale(&inv))
    };
    let mut doc = Document::new(chart.clone());
    let omega = VolumeForm::new(wedge_all(&chart, (0..n).map(&dlog).collect::<Result<Vec<_>>>()?)?)?;
    doc.volume = Some(("omega".into(), omega));
    for i in 0..n {
        let omit = wedge_all(&chart, (0..n).filter(|&k| k != i).map(&dlog).collect::<Result<Vec<_>>>()?)?;
        doc.forms.insert(format!("omit{}", i + 1), omit);
    }
    for i in 0..n {
        doc.fields.insert(format!("nu{}", i + 1), field(&chart, &[(&names[i], z[i].clone())])?);
    }
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let f = field(&chart, &[(&names[i], &z[i] * &z[j])])?;
                doc.fields.insert(format!("nu{}p{}", i + 1, j + 1), f);
            }
        }
    }
    let images: Vec<(&str, LaurentPoly)> = names.iter().zip(&z).map(|(s, p)| (s.as_str(), -p)).collect();
    doc.actions.insert("neg".into(), action(&chart, "neg", &images, 2)?);

    let fnames: Vec<String> = doc.fields.keys().cloned().collect();
    for f in &fnames {
        doc.check(Check::Tangent { field: f.clone() });
        doc.check(Check::DivergenceFree {
            field: f.clone(),
            volume: "omega".into(),
        });
    }
    for i in 1..=n {
        doc.check(Check::Theta {
            field: format!("nu{i}"),
            volume: "omega".into(),
            expected: format!("omit{i}"),
        });
        doc.check(Check::Invariant {
            subject: Subject::Field(format!("nu{i}")),
            action: "neg".into(),
        });
    }
    for i in 1..=n {
        for j in i + 1..=n {
            doc.check(Check::Commute {
                xi: format!("nu{i}"),
                eta: format!("nu{j}"),
            });
            doc.check(Check::Identity1 {
                xi: format!("nu{i}p{j}"),
                eta: format!("nu{j}p{i}"),
                volume: "omega".into(),
            });
        }
    }
    doc.check(Check::Invariant {
        subject: Subject::Form("omega".into()),
        action: "neg".into(),
    });
    if n >= 2 {
        let mut pairs = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                pairs.push(crate::document::PairRef {
                    xi: format!("nu{i}p{j}"),
                    eta: format!("nu{j}p{i}"),
                    witness: chart.one(),
                });
            }
        }
        doc.check(Check::ConditionA { pairs });
    }
    Ok(Scenario {
        name: format!("torus:{n}"),
        document: doc,
    })
}

fn matrix(rows: &[&[Rational]]) -> Matrix {
    Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect())
}

/// `SL₂ = {a₁b₂ − a₂b₁ = 1}` on the chart `a₁ ≠ 0`, with
/// `ξ = b₁∂_{a₁} + b₂∂_{a₂}`, `η = a₁∂_{b₁} + a₂∂_{b₂}` and
/// `ω₁ = a₁⁻¹ da₁∧da₂∧db₁`, plus sub-modular test groups.
pub fn sl2() -> Result<Scenario> {
    let vars = Vars::new(["a1", "a2", "b1", "b2"]);
    let v = |n: &str| LaurentPoly::var(&vars, n).expect("coordinate");
    let rel = &(&(&v("a1") * &v("b2")) - &(&v("a2") * &v("b1"))) - &LaurentPoly::one(&vars);
    let chart = Arc::new(Chart::new(
        &[("a1", true), ("a2", false), ("b1", false), ("b2", false)],
        vec![(rel, "b2")],
    )?);
    let mut doc = Document::new(chart.clone());
    let c = |n: &str| var(&chart, n);
    let xi = field(&chart, &[("a1", c("b1")), ("a2", c("b2"))])?;
    let eta = field(&chart, &[("b1", c("a1")), ("b2", c("a2"))])?;
    fields(&mut doc, vec![("xi", xi), ("eta", eta)]);
    let inv = c("a1").inverse_unit().expect("unit");
    let w = wedge_all(&chart, [dvar(&chart, "a1"), dvar(&chart, "a2"), dvar(&chart, "b1")])?.scale(&inv);
    doc.volume = Some(("omega1".into(), VolumeForm::new(w)?));
    let values: HashMap<String, Rational> = [("a1", rat(1)), ("a2", rat(1)), ("b1", rat(0))]
        .into_iter()
        .map(|(n, r)| (n.to_string(), r))
        .collect();
    doc.points.insert("p0".into(), chart.point_from_free(&values)?);

    let (r0, r1) = (rat(0), rat(1));
    let h = matrix(&[&[rat(1), r0.clone()], &[r0.clone(), rat(-1)]]);
    let a0 = matrix(&[&[r0.clone(), rat(-1)], &[r1.clone(), r0.clone()]]);
    let diag: IndexMap<String, Matrix> = [("A0".to_string(), a0)].into_iter().collect();
    doc.groups.insert("diagonal".into(), GroupPresentation::new(2, vec![h], diag)?);
    let samples: IndexMap<String, Matrix> = groups::sl2_samples(2024, 10)
        .into_iter()
        .enumerate()
        .map(|(k, m)| (format!("h{}", k + 1), m))
        .collect();
    let names: Vec<String> = samples.keys().cloned().collect();
    doc.groups.insert("sl2".into(), GroupPresentation::new(2, groups::sl2_basis(), samples)?);
    let e12 = matrix(&[&[r0.clone(), r1.clone()], &[r0.clone(), r0.clone()]]);
    let t = matrix(&[&[rat(2), r0.clone()], &[r0.clone(), ratio(1, 2)]]);
    let borel: IndexMap<String, Matrix> = [("t".to_string(), t)].into_iter().collect();
    doc.groups.insert("borel".into(), GroupPresentation::new(2, vec![e12], borel)?);

    for f in ["xi", "eta"] {
        doc.check(Check::Tangent { field: f.into() });
        doc.check(Check::DivergenceFree {
            field: f.into(),
            volume: "omega1".into(),
        });
        doc.check(Check::Lnd {
            field: f.into(),
            bound: Some(2),
        });
    }
    doc.check(Check::Identity1 {
        xi: "xi".into(),
        eta: "eta".into(),
        volume: "omega1".into(),
    });
    doc.check(Check::KernelContains {
        field: "xi".into(),
        f: v("b1"),
        bound: None,
    });
    doc.check(Check::KernelContains {
        field: "eta".into(),
        f: v("a1"),
        bound: None,
    });
    doc.check_expect(
        Check::Semicompat {
            xi: "xi".into(),
            eta: "eta".into(),
            bound: Some(2),
        },
        Outcome::Pass,
    );
    doc.check_expect(
        Check::Semicompat {
            xi: "xi".into(),
            eta: "xi".into(),
            bound: Some(2),
        },
        Outcome::Unknown,
    );
    doc.check(Check::Formula3 {
        field: "xi".into(),
        f: v("b1"),
        point: "p0".into(),
    });
    doc.check(Check::Submodular {
        group: "diagonal".into(),
        element: "A0".into(),
        expected: rat(-1),
    });
    for n in names {
        doc.check(Check::Submodular {
            group: "sl2".into(),
            element: n,
            expected: rat(1),
        });
    }
    doc.check(Check::Character { group: "sl2".into() });
    doc.check(Check::Submodular {
        group: "borel".into(),
        element: "t".into(),
        expected: rat(4),
    });
    doc.check(Check::Character { group: "borel".into() });
    Ok(Scenario {
        name: "sl2".into(),
        document: doc,
    })
}

/// `S = {p(x) + q(y) + xyz = 1}` with `δ_x`, `δ_y`, `δ_z` and
/// `ω = dx∧dy/(xy)`. `p` and `q` are over the variables `x, y, z`.
pub fn surface(p: &LaurentPoly, q: &LaurentPoly) -> Result<Scenario> {
    let s = Surface::new(p, q)?;
    let chart = s.chart().clone();
    let mut doc = Document::new(chart.clone());
    fields(
        &mut doc,
        vec![("delta_x", s.delta_x()), ("delta_y", s.delta_y()), ("delta_z", s.delta_z())],
    );
    doc.volume = Some(("omega".into(), s.omega()));
    let (x, y, z) = (var(&chart, "x"), var(&chart, "y"), var(&chart, "z"));
    for f in ["delta_x", "delta_y", "delta_z"] {
        doc.check(Check::Tangent { field: f.into() });
        doc.check(Check::DivergenceFree {
            field: f.into(),
            volume: "omega".into(),
        });
    }
    for (a, b) in [("delta_z", "delta_y"), ("delta_z", "delta_x"), ("delta_y", "delta_x")] {
        doc.check(Check::Identity1 {
            xi: a.into(),
            eta: b.into(),
            volume: "omega".into(),
        });
    }
    let standard = *p == x && *q == y;
    doc.check(Check::BracketPotential {
        xi: "delta_z".into(),
        eta: "delta_y".into(),
        volume: "omega".into(),
        expected: standard.then(|| &chart.one() + &(&y * &z)),
    });
    for (f, g) in [(&z, "delta_z"), (&y, "delta_y"), (&x, "delta_x")] {
        doc.check(Check::PotentialSign {
            f: f.clone(),
            field: g.into(),
            volume: "omega".into(),
        });
        doc.check(Check::KernelPowers {
            field: g.into(),
            generator: f.clone(),
            bound: None,
        });
    }
    let xyz = &(&x * &y) * &z;
    for f in [xyz.clone(), z.pow(2), &xyz * &(&x * &z)] {
        doc.check(Check::Formula4 { f });
    }
    Ok(Scenario {
        name: format!("surface:p={p},q={q}"),
        document: doc,
    })
}

/// `X_{m,1} = {xᵐv − yu = 1}` with `ω_m = x^{−m} dx∧dy∧du` and, for
/// `m ≥ 2`, the primitive `τ = dy∧du / ((1 − m)x^{m−1})`.
pub fn x_m1(m: u32) -> Result<Scenario> {
    if m < 1 {
        return Err(param("xm1", "m must be at least 1"));
    }
    let vars = Vars::new(["x", "y", "u", "v"]);
    let v = |n: &str| LaurentPoly::var(&vars, n).expect("coordinate");
    let rel = &(&(&v("x").pow(m) * &v("v")) - &(&v("y") * &v("u"))) - &LaurentPoly::one(&vars);
    let chart = Arc::new(Chart::new(
        &[("x", true), ("y", false), ("u", false), ("v", false)],
        vec![(rel, "v")],
    )?);
    let mut doc = Document::new(chart.clone());
    let x = var(&chart, "x");
    let xinv = x.inverse_unit().expect("unit");
    let w = wedge_all(&chart, [dvar(&chart, "x"), dvar(&chart, "y"), dvar(&chart, "u")])?.scale(&xinv.pow(m));
    doc.volume = Some(("omega".into(), VolumeForm::new(w)?));
    doc.check(Check::Closed { form: "omega".into() });
    if m >= 2 {
        let c = Rational::one() / Rational::from_integer((1 - m as i64).into());
        let coeff = xinv.pow(m - 1).scale(&c);
        let tau = dvar(&chart, "y").wedge(&dvar(&chart, "u"))?.scale(&coeff);
        doc.forms.insert("tau".into(), tau);
        doc.check(Check::Exact {
            form: "omega".into(),
            primitive: "tau".into(),
        });
    }
    Ok(Scenario {
        name: format!("xm1:{m}"),
        document: doc,
    })
}

/// `{uv − x² + 1 = 0}` on `u ≠ 0` with `ω = u⁻¹ du∧dx`, the locally
/// nilpotent fields `ξ = u∂_x + 2x∂_v`, `η = v∂_x + 2x∂_u`, and the
/// involution `(u, v, x) ↦ (−u, −v, −x)`, which reverses `ω`.
pub fn quadric() -> Result<Scenario> {
    let vars = Vars::new(["u", "x", "v"]);
    let v = |n: &str| LaurentPoly::var(&vars, n).expect("coordinate");
    let rel = &(&(&v("u") * &v("v")) - &v("x").pow(2)) + &LaurentPoly::one(&vars);
    let chart = Arc::new(Chart::new(&[("u", true), ("x", false), ("v", false)], vec![(rel, "v")])?);
    let mut doc = Document::new(chart.clone());
    let (u, x, vv) = (var(&chart, "u"), var(&chart, "x"), var(&chart, "v"));
    let two = chart.constant(rat(2));
    let xi = field(&chart, &[("x", u.clone()), ("v", &two * &x)])?;
    let eta = field(&chart, &[("x", vv.clone()), ("u", &two * &x)])?;
    let xxi = xi.scale(&x);
    fields(&mut doc, vec![("xi", xi), ("eta", eta), ("xxi", xxi)]);
    let w = dvar(&chart, "u").wedge(&dvar(&chart, "x"))?.scale(&u.inverse_unit().expect("unit"));
    doc.volume = Some(("omega".into(), VolumeForm::new(w)?));
    doc.actions.insert(
        "gamma1".into(),
        action(&chart, "gamma1", &[("u", -&u), ("v", -&vv), ("x", -&x)], 2)?,
    );
    for f in ["xi", "eta"] {
        doc.check(Check::Tangent { field: f.into() });
        doc.check(Check::DivergenceFree {
            field: f.into(),
            volume: "omega".into(),
        });
        doc.check(Check::Lnd {
            field: f.into(),
            bound: None,
        });
        doc.check(Check::Invariant {
            subject: Subject::Field(f.into()),
            action: "gamma1".into(),
        });
    }
    doc.check(Check::Identity1 {
        xi: "xi".into(),
        eta: "eta".into(),
        volume: "omega".into(),
    });
    doc.check(Check::QuasiInvariant {
        form: "omega".into(),
        action: "gamma1".into(),
        character: rat(-1),
    });
    doc.check_expect(
        Check::Invariant {
            subject: Subject::Field("xxi".into()),
            action: "gamma1".into(),
        },
        Outcome::Fail,
    );
    doc.check(Check::Invariant {
        subject: Subject::Function(&u * &vv),
        action: "gamma1".into(),
    });
    Ok(Scenario {
        name: "quadric".into(),
        document: doc,
    })
}

fn fresh(taken: &dyn Fn(&str) -> bool, base: &str) -> String {
    if !taken(base) {
        return base.to_string();
    }
    let mut k = 2;
    loop {
        let cand = format!("{base}_{k}");
        if !taken(&cand) {
            return cand;
        }
        k += 1;
    }
}

/// Character of the factor volume under `action`, read off the factor's
/// own (unconditional) invariance records.
fn volume_character(doc: &Document, action: &str) -> Option<Rational> {
    let (vol, _) = doc.volume.as_ref()?;
    doc.checks.iter().find_map(|c| match (&c.check, c.expect) {
        (Check::Invariant { subject: Subject::Form(f), action: a }, None) if f == vol && a == action => {
            Some(Rational::one())
        }
        (Check::QuasiInvariant { form, action: a, character }, None) if form == vol && a == action => {
            Some(character.clone())
        }
        _ => None,
    })
}

fn field_invariant(doc: &Document, field: &str, action: &str) -> bool {
    doc.checks.iter().any(|c| {
        matches!((&c.check, c.expect),
            (Check::Invariant { subject: Subject::Field(f), action: a }, None) if f == field && a == action)
    })
}

fn divergence_free(doc: &Document, field: &str) -> bool {
    doc.checks.iter().any(|c| {
        matches!((&c.check, c.expect), (Check::DivergenceFree { field: f, .. }, None) if f == field)
    })
}

/// Renames and coordinate map for one factor of a product.
struct Lift {
    coords: Vec<Option<usize>>,
    names: HashMap<String, String>,
}

impl Lift {
    fn name(&self, n: &str) -> String {
        self.names.get(n).cloned().unwrap_or_else(|| n.to_string())
    }

    fn poly(&self, target: &Vars, p: &LaurentPoly) -> LaurentPoly {
        p.embed(target, &self.coords)
    }

    /// The factor's checks that stay meaningful on the product.
    fn check(&self, target: &Vars, c: &Check, vol: &str) -> Option<Check> {
        let n = |s: &String| self.name(s);
        Some(match c {
            Check::Tangent { field } => Check::Tangent { field: n(field) },
            Check::DivergenceFree { field, .. } => Check::DivergenceFree {
                field: n(field),
                volume: vol.to_string(),
            },
            Check::Divergence { field, expected, .. } => Check::Divergence {
                field: n(field),
                volume: vol.to_string(),
                expected: self.poly(target, expected),
            },
            Check::Identity1 { xi, eta, .. } => Check::Identity1 {
                xi: n(xi),
                eta: n(eta),
                volume: vol.to_string(),
            },
            Check::Exact { form, primitive } => Check::Exact {
                form: n(form),
                primitive: n(primitive),
            },
            Check::Closed { form } => Check::Closed { form: n(form) },
            Check::KernelContains { field, f, bound } => Check::KernelContains {
                field: n(field),
                f: self.poly(target, f),
                bound: *bound,
            },
            Check::Lnd { field, bound } => Check::Lnd {
                field: n(field),
                bound: *bound,
            },
            Check::Commute { xi, eta } => Check::Commute { xi: n(xi), eta: n(eta) },
            Check::Invariant { subject, action } => Check::Invariant {
                subject: match subject {
                    Subject::Field(f) => Subject::Field(n(f)),
                    Subject::Form(f) => Subject::Form(n(f)),
                    Subject::Function(p) => Subject::Function(self.poly(target, p)),
                },
                action: n(action),
            },
            Check::QuasiInvariant { form, action, character } => Check::QuasiInvariant {
                form: n(form),
                action: n(action),
                character: character.clone(),
            },
            Check::Submodular { group, element, expected } => Check::Submodular {
                group: n(group),
                element: element.clone(),
                expected: expected.clone(),
            },
            Check::Character { group } => Check::Character { group: n(group) },
            _ => return None,
        })
    }
}

/// `X₁ × X₂` with `ω = ω₁ × ω₂` named `vol`, lifted fields, forms (the
/// factor volumes among them), groups and actions, and the diagonal
/// actions `a_b` for every pair of factor actions.
pub fn product(s1: &Scenario, s2: &Scenario) -> Result<Scenario> {
    let (c1, c2) = (&s1.chart, &s2.chart);
    let mut names: Vec<String> = c1.vars().names().to_vec();
    let mut map2 = Vec::new();
    for n in c2.vars().names() {
        let new = fresh(&|c| names.iter().any(|m| m == c), n);
        map2.push(Some(names.len()));
        names.push(new);
    }
    let vars = Vars::new(names.clone());
    let map1: Vec<Option<usize>> = (0..c1.dim_ambient()).map(Some).collect();
    let mut invertible = c1.invertible().to_vec();
    invertible.extend_from_slice(c2.invertible());
    let mut relations: Vec<Relation> = c1
        .relations()
        .iter()
        .map(|r| Relation {
            poly: r.poly.embed(&vars, &map1),
            solve_for: r.solve_for,
        })
        .collect();
    relations.extend(c2.relations().iter().map(|r| Relation {
        poly: r.poly.embed(&vars, &map2),
        solve_for: map2[r.solve_for].expect("total map"),
    }));
    let chart = Arc::new(Chart::from_parts(vars.clone(), invertible, relations)?);
    let mut doc = Document::new(chart.clone());

    let coordinate_taken = |n: &str| vars.index_of(n).is_some() || n.strip_prefix('d').is_some_and(|c| vars.index_of(c).is_some());
    let mut taken: Vec<String> = Vec::new();
    let mut lifts = Vec::new();
    for (s, coords) in [(s1, map1.clone()), (s2, map2.clone())] {
        let mut renames = HashMap::new();
        let objects: Vec<&String> = s
            .volume
            .iter()
            .map(|(n, _)| n)
            .chain(s.forms.keys())
            .chain(s.fields.keys())
            .chain(s.actions.keys())
            .chain(s.groups.keys())
            .collect();
        for n in objects {
            let new = fresh(&|c| taken.iter().any(|t| t == c) || coordinate_taken(c) || c == "vol", n);
            taken.push(new.clone());
            renames.insert(n.clone(), new);
        }
        lifts.push(Lift {
            coords,
            names: renames,
        });
    }
    let vol_name = "vol".to_string();

    for (s, lift) in [s1, s2].into_iter().zip(&lifts) {
        if let Some((n, v)) = &s.volume {
            doc.forms.insert(lift.name(n), embed_form(v.form(), &chart, &lift.coords)?);
        }
        for (n, f) in &s.forms {
            doc.forms.insert(lift.name(n), embed_form(f, &chart, &lift.coords)?);
        }
        for (n, f) in &s.fields {
            doc.fields.insert(lift.name(n), embed_field(f, &chart, &lift.coords)?);
        }
        for (n, a) in &s.actions {
            let images: HashMap<String, LaurentPoly> = a
                .images()
                .iter()
                .enumerate()
                .map(|(i, p)| (chart.coordinate_name(lift.coords[i].expect("total")).to_string(), lift.poly(&vars, p)))
                .collect();
            let name = lift.name(n);
            doc.actions.insert(name.clone(), SubstitutionAction::new(&chart, &name, &images, a.order())?);
        }
        for (n, g) in &s.groups {
            doc.groups.insert(lift.name(n), g.clone());
        }
    }
    if let (Some((_, v1)), Some((_, v2))) = (&s1.volume, &s2.volume) {
        let v = v1.product(v2, &chart, &lifts[0].coords, &lifts[1].coords)?;
        doc.volume = Some((vol_name.clone(), v));
    }
    let mut diagonal = Vec::new();
    for (a, act_a) in &s1.actions {
        for (b, act_b) in &s2.actions {
            let (la, lb) = (lifts[0].name(a), lifts[1].name(b));
            let name = fresh(&|c| doc.defines(c) || coordinate_taken(c), &format!("{la}_{lb}"));
            let mut images = HashMap::new();
            for (i, p) in act_a.images().iter().enumerate() {
                images.insert(chart.coordinate_name(i).to_string(), lifts[0].poly(&vars, p));
            }
            for (i, p) in act_b.images().iter().enumerate() {
                let j = lifts[1].coords[i].expect("total");
                images.insert(chart.coordinate_name(j).to_string(), lifts[1].poly(&vars, p));
            }
            let order = act_a.order().lcm(&act_b.order());
            doc.actions.insert(name.clone(), SubstitutionAction::new(&chart, &name, &images, order)?);
            diagonal.push((a.clone(), b.clone(), name));
        }
    }

    let has_vol = doc.volume.is_some();
    for (s, lift) in [s1, s2].into_iter().zip(&lifts) {
        for d in &s.checks {
            let needs_vol = matches!(
                d.check,
                Check::DivergenceFree { .. } | Check::Divergence { .. } | Check::Identity1 { .. }
            );
            if needs_vol && !has_vol {
                continue;
            }
            if let Some(c) = lift.check(&vars, &d.check, &vol_name) {
                doc.checks.push(crate::document::CheckDirective { check: c, expect: d.expect });
            }
        }
    }
    if has_vol {
        for (s, lift) in [s1, s2].into_iter().zip(&lifts) {
            for a in s.actions.keys() {
                if let Some(chi) = volume_character(s, a) {
                    doc.check(Check::QuasiInvariant {
                        form: vol_name.clone(),
                        action: lift.name(a),
                        character: chi,
                    });
                }
            }
        }
    }
    for (a, b, name) in &diagonal {
        for (n, (s, act)) in [(0, (s1, a)), (1, (s2, b))] {
            for f in s.fields.keys() {
                if field_invariant(s, f, act) {
                    doc.check(Check::Invariant {
                        subject: Subject::Field(lifts[n].name(f)),
                        action: name.clone(),
                    });
                }
            }
        }
        if let (true, Some(x), Some(y)) = (has_vol, volume_character(s1, a), volume_character(s2, b)) {
            let chi = &x * &y;
            if chi.is_one() {
                doc.check(Check::Invariant {
                    subject: Subject::Form(vol_name.clone()),
                    action: name.clone(),
                });
            } else {
                doc.check(Check::QuasiInvariant {
                    form: vol_name.clone(),
                    action: name.clone(),
                    character: chi,
                });
            }
        }
    }
    if let (Some(f), Some(g)) = (s1.fields.keys().next(), s2.fields.keys().next()) {
        let (lf, lg) = (lifts[0].name(f), lifts[1].name(g));
        doc.check(Check::Commute {
            xi: lf.clone(),
            eta: lg.clone(),
        });
        if has_vol && divergence_free(s1, f) && divergence_free(s2, g) {
            doc.check(Check::Identity1 {
                xi: lf,
                eta: lg,
                volume: vol_name.clone(),
            });
        }
    }
    Ok(Scenario {
        name: format!("product:({}),({})", s1.name, s2.name),
        document: doc,
    })
}

/// Splits at commas outside parentheses.
fn split_top(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts
}

fn unwrap_parens(s: &str) -> &str {
    let t = s.trim();
    if t.starts_with('(') && t.ends_with(')') && split_top(&t[1..t.len() - 1]).len() == 1 {
        let inner = &t[1..t.len() - 1];
        let mut depth = 0;
        for ch in inner.chars() {
            match ch {
                '(' => depth += 1,
                ')' if depth == 0 => return t,
                ')' => depth -= 1,
                _ => {}
            }
        }
        return unwrap_parens(inner);
    }
    t
}

fn integer<T: std::str::FromStr>(family: &str, arg: &str) -> Result<T> {
    arg.trim()
        .parse()
        .map_err(|_| param(family, format!("expected an integer, found `{arg}`")))
}

/// Builds a scenario from its name, e.g. `torus:2`,
/// `surface:p=x^2,q=y^3` or `product:quadric,torus:1`.
pub fn by_name(name: &str) -> Result<Scenario> {
    let name = unwrap_parens(name);
    let (family, arg) = match name.split_once(':') {
        Some((f, a)) => (f.trim(), Some(a)),
        None => (name, None),
    };
    match (family, arg) {
        ("torus", Some(a)) => torus(integer(family, a)?),
        ("sl2", None) => sl2(),
        ("quadric", None) => quadric(),
        ("xm1", Some(a)) => x_m1(integer(family, a)?),
        ("surface", a) => {
            let vars = Vars::new(["x", "y", "z"]);
            let mut p = LaurentPoly::var(&vars, "x").expect("x");
            let mut q = LaurentPoly::var(&vars, "y").expect("y");
            if let Some(a) = a.filter(|a| !a.trim().is_empty()) {
                for part in split_top(a) {
                    let Some((k, v)) = part.split_once('=') else {
                        return Err(param(family, format!("expected `p=...` or `q=...`, found `{part}`")));
                    };
                    let poly = dsl::parse_poly(v, &vars)?;
                    match k.trim() {
                        "p" => p = poly,
                        "q" => q = poly,
                        other => return Err(param(family, format!("unknown parameter `{other}`"))),
                    }
                }
            }
            surface(&p, &q)
        }
        ("product", Some(a)) => {
            let parts = split_top(a);
            if parts.len() != 2 {
                return Err(param(family, "expected two factors separated by a comma"));
            }
            product(&by_name(parts[0])?, &by_name(parts[1])?)
        }
        _ => Err(ScenarioError::Unknown(name.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn name_splitting() {
        assert_eq!(split_top("a,(b,c),d"), vec!["a", "(b,c)", "d"]);
        assert_eq!(unwrap_parens("((torus:1))"), "torus:1");
        assert_eq!(unwrap_parens("(a),(b)"), "(a),(b)");
    }

    #[test]
    fn catalog_builds() {
        for n in ["torus:1", "torus:3", "sl2", "surface", "surface:p=x^2,q=y^3", "xm1:1", "xm1:2", "quadric"] {
            let s = by_name(n).unwrap();
            assert!(!s.checks.is_empty(), "{n}");
        }
        assert!(matches!(by_name("torus:0"), Err(ScenarioError::Parameter { .. })));
        assert!(matches!(by_name("sphere"), Err(ScenarioError::Unknown(_))));
        assert!(by_name("surface:p=1+x,q=y").is_err());
    }

    #[test]
    fn product_renames_clashes() {
        let s = by_name("product:torus:1,torus:1").unwrap();
        assert_eq!(s.chart.vars().names(), &["z1".to_string(), "z1_2".to_string()]);
        assert!(s.fields.contains_key("nu1") && s.fields.contains_key("nu1_2"));
        assert!(s.volume_named("vol").is_some());
        assert!(s.actions.contains_key("neg_neg_2"));
        let t = torus(2).unwrap();
        assert_eq!(
            s.volume.as_ref().unwrap().1.coefficient().to_string().replace("z1_2", "z2"),
            t.volume.as_ref().unwrap().1.coefficient().to_string()
        );
    }

    #[test]
    fn x_m1_has_primitive_only_above_one() {
        assert!(x_m1(1).unwrap().forms.is_empty());
        assert!(x_m1(3).unwrap().forms.contains_key("tau"));
    }
}
