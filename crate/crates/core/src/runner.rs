//! Executes check directives and collects a report.

use std::fmt::Write as _;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::rational::format_rational;
use crate::algebra::{LaurentPoly, PolySpan};
use crate::avdp::{self, AvdpError, FiberPair, SemicompatStatus, Surface};
use crate::calculus::{lnd_flow, CalculusError, DiffForm, VectorField, VolumeForm};
use crate::document::{Check, CheckDirective, Document, Outcome, Subject};
use crate::groups::GroupError;
use crate::variety::{ChartError, Invariance};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub seed: u64,
    pub degree_bound: u32,
    pub lnd_bound: usize,
    pub points: usize,
    pub timings: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            degree_bound: 4,
            lnd_bound: 32,
            points: 20,
            timings: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Error,
    Unknown,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
            Status::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub index: usize,
    pub name: String,
    pub kind: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<Outcome>,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub error: usize,
    pub unknown: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub source: String,
    pub seed: u64,
    pub degree_bound: u32,
    pub lnd_bound: usize,
    pub points: usize,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

impl Report {
    /// Exit status: nonzero iff some check failed or errored.
    pub fn success(&self) -> bool {
        self.summary.fail == 0 && self.summary.error == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "source: {}  (seed {}, degree bound {}, lnd bound {}, points {})", self.source, self.seed, self.degree_bound, self.lnd_bound, self.points);
        for r in &self.checks {
            let _ = write!(out, "[{:>7}] {}", r.status.to_string(), r.name);
            if let Some(e) = r.expected {
                let _ = write!(out, " expect {e}");
            }
            if !r.detail.is_empty() {
                let _ = write!(out, "\n          {}", r.detail);
            }
            if let Some(ms) = r.wall_time_ms {
                let _ = write!(out, "  ({ms:.1} ms)");
            }
            out.push('\n');
        }
        let s = &self.summary;
        let _ = writeln!(out, "{} pass, {} fail, {} error, {} unknown", s.pass, s.fail, s.error, s.unknown);
        if s.unknown > 0 {
            let _ = writeln!(out, "warning: {} check(s) inconclusive at the configured bounds", s.unknown);
        }
        out
    }
}

#[derive(Debug, Error)]
enum RunError {
    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error(transparent)]
    Avdp(#[from] AvdpError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

type Outcome3 = Result<(Status, String), RunError>;

fn pass(detail: impl Into<String>) -> Outcome3 {
    Ok((Status::Pass, detail.into()))
}

fn fail(detail: impl Into<String>) -> Outcome3 {
    Ok((Status::Fail, detail.into()))
}

fn verdict(ok: bool, detail: impl Into<String>) -> Outcome3 {
    if ok {
        pass("")
    } else {
        fail(detail)
    }
}

struct Ctx<'a> {
    doc: &'a Document,
    cfg: &'a RunConfig,
}

impl Ctx<'_> {
    fn field(&self, name: &str) -> Result<&VectorField, RunError> {
        self.doc.fields.get(name).ok_or_else(|| RunError::Unknown {
            kind: "field",
            name: name.to_string(),
        })
    }

    fn volume(&self, name: &str) -> Result<&VolumeForm, RunError> {
        self.doc.volume_named(name).ok_or_else(|| RunError::Unknown {
            kind: "volume form",
            name: name.to_string(),
        })
    }

    fn form(&self, name: &str) -> Result<&DiffForm, RunError> {
        self.doc.form(name).ok_or_else(|| RunError::Unknown {
            kind: "form",
            name: name.to_string(),
        })
    }

    fn function(&self, f: &LaurentPoly) -> Result<DiffForm, RunError> {
        Ok(DiffForm::function(&self.doc.chart, f)?)
    }

    fn kernel_span(&self, field: &str, bound: Option<u32>) -> Result<(PolySpan, u32), RunError> {
        let d = bound.unwrap_or(self.cfg.degree_bound);
        let basis = avdp::kernel_basis(self.field(field)?, d);
        Ok((PolySpan::from_polys(self.doc.chart.vars(), &basis), d))
    }

    fn run(&self, check: &Check) -> Outcome3 {
        let chart = &self.doc.chart;
        match check {
            Check::Tangent { field } => {
                verdict(chart.is_tangent(self.field(field)?.coefficients()), "field is not tangent")
            }
            Check::DivergenceFree { field, volume } => {
                let div = self.volume(volume)?.divergence(self.field(field)?)?;
                verdict(div.is_zero(), format!("divergence = {div}"))
            }
            Check::Divergence { field, volume, expected } => {
                let div = self.volume(volume)?.divergence(self.field(field)?)?;
                let want = chart.normal_form(expected)?;
                verdict(div == want, format!("divergence = {div}"))
            }
            Check::Identity1 { xi, eta, volume } => {
                let r = avdp::identity_one_residual(self.field(xi)?, self.field(eta)?, self.volume(volume)?)?;
                verdict(r.is_zero(), format!("residual: {r}"))
            }
            Check::BracketPotential { xi, eta, volume, expected } => {
                let (a, b, w) = (self.field(xi)?, self.field(eta)?, self.volume(volume)?);
                let pot = avdp::bracket_potential(a, b, w)?;
                let residual = w.theta(&a.bracket(b)?)?.sub(&self.function(&pot)?.d())?;
                if !residual.is_zero() {
                    return fail(format!("d(potential) differs from theta of the bracket; residual: {residual}"));
                }
                match expected {
                    None => pass(format!("potential = {pot}")),
                    Some(e) => {
                        let nf = chart.normal_form(e)?;
                        if pot == nf {
                            pass(format!("potential = {e}, sign +1"))
                        } else if pot == -&nf {
                            pass(format!("potential = -({e}), sign -1"))
                        } else {
                            fail(format!("potential = {pot}, not a multiple of {e} by +1 or -1"))
                        }
                    }
                }
            }
            Check::Potential { f, field, volume } => {
                let w = self.volume(volume)?;
                let ok = avdp::verify_potential(f, self.field(field)?, w)?;
                let residual = self.function(f)?.d().sub(&w.theta(self.field(field)?)?)?;
                verdict(ok, format!("residual: {residual}"))
            }
            Check::PotentialSign { f, field, volume } => {
                let signs = avdp::potential_signs(f, self.field(field)?, self.volume(volume)?)?;
                match signs.as_slice() {
                    [c] => pass(format!("c = {c}")),
                    [] => fail("no sign c in {+1, -1} makes c*f a potential"),
                    _ => fail("both signs match"),
                }
            }
            Check::Theta { field, volume, expected } => {
                let t = self.volume(volume)?.theta(self.field(field)?)?;
                let e = self.form(expected)?;
                if &t == e {
                    pass("sign +1")
                } else if t == e.neg() {
                    pass("sign -1")
                } else {
                    fail(format!("theta = {t}"))
                }
            }
            Check::Exact { form, primitive } => {
                let r = self.form(form)?.sub(&self.form(primitive)?.d())?;
                verdict(r.is_zero(), format!("residual: {r}"))
            }
            Check::Closed { form } => {
                let d = self.form(form)?.d();
                verdict(d.is_zero(), format!("d = {d}"))
            }
            Check::KernelContains { field, f, bound } => {
                let (span, d) = self.kernel_span(field, *bound)?;
                let f = chart.normal_form(f)?;
                verdict(span.contains(&f), format!("not in the kernel at degree bound {d} (dim {})", span.dim()))
            }
            Check::KernelPowers { field, generator, bound } => {
                let (span, d) = self.kernel_span(field, *bound)?;
                let g = chart.normal_form(generator)?;
                let powers: Vec<LaurentPoly> = (0..=d).map(|k| chart.nf(&g.pow(k))).collect();
                let expected = PolySpan::from_polys(chart.vars(), &powers);
                if span.contains_span(&expected) && expected.contains_span(&span) {
                    pass(format!("dim {} at degree bound {d}", span.dim()))
                } else {
                    fail(format!("kernel dim {} vs {} powers at degree bound {d}", span.dim(), expected.dim()))
                }
            }
            Check::Semicompat { xi, eta, bound } => {
                let d = bound.unwrap_or(self.cfg.degree_bound);
                let v = avdp::semicompat_bounded(self.field(xi)?, self.field(eta)?, d)?;
                let mut detail = format!("{} at degree bound {}", v.status, v.degree_bound);
                if let Some(w) = &v.witness {
                    let _ = write!(detail, ", witness {w}");
                }
                match v.status {
                    SemicompatStatus::Unknown => Ok((Status::Unknown, detail)),
                    _ => pass(detail),
                }
            }
            Check::ConditionA { pairs } => {
                let pairs = pairs
                    .iter()
                    .map(|p| {
                        Ok(FiberPair {
                            xi: self.field(&p.xi)?.clone(),
                            eta: self.field(&p.eta)?.clone(),
                            witness: p.witness.clone(),
                        })
                    })
                    .collect::<Result<Vec<_>, RunError>>()?;
                for k in 0..self.cfg.points {
                    let point = chart.sample_point(self.cfg.seed.wrapping_add(k as u64))?;
                    if !avdp::condition_a_fiber(&pairs, &point)? {
                        let vals: Vec<String> = point.values().iter().map(format_rational).collect();
                        return fail(format!("wedges do not span at point ({})", vals.join(", ")));
                    }
                }
                pass(format!("spans at {} sampled points", self.cfg.points))
            }
            Check::Lnd { field, bound } => {
                let b = bound.unwrap_or(self.cfg.lnd_bound);
                let name = fresh(chart);
                match lnd_flow(self.field(field)?, &name, b) {
                    Ok(flow) => pass(format!("nilpotent, flow degree {}", flow.depth())),
                    Err(CalculusError::NotNilpotent { var, bound }) => {
                        fail(format!("`{var}` not annihilated within {bound} steps"))
                    }
                    Err(e) => Err(e.into()),
                }
            }
            Check::Commute { xi, eta } => {
                let br = self.field(xi)?.bracket(self.field(eta)?)?;
                verdict(br.is_zero(), format!("bracket = {br}"))
            }
            Check::Formula3 { field, f, point } => {
                let p = self.doc.points.get(point).ok_or_else(|| RunError::Unknown {
                    kind: "point",
                    name: point.clone(),
                })?;
                let (jac, predicted) = avdp::formula3_matrices(self.field(field)?, f, p, self.cfg.lnd_bound)?;
                verdict(jac == predicted, format!("jacobian {jac} vs predicted {predicted}"))
            }
            Check::Invariant { subject, action } => {
                let a = self.doc.actions.get(action).ok_or_else(|| RunError::Unknown {
                    kind: "action",
                    name: action.clone(),
                })?;
                let ok = match subject {
                    Subject::Field(n) => self.field(n)?.is_invariant(a, chart)?,
                    Subject::Form(n) => self.form(n)?.is_invariant(a, chart)?,
                    Subject::Function(f) => f.is_invariant(a, chart)?,
                };
                verdict(ok, "not invariant")
            }
            Check::QuasiInvariant { form, action, character } => {
                let a = self.doc.actions.get(action).ok_or_else(|| RunError::Unknown {
                    kind: "action",
                    name: action.clone(),
                })?;
                match self.form(form)?.character(a)? {
                    Some(c) if &c == character => pass(format!("character {}", format_rational(&c))),
                    Some(c) => fail(format!("character {}", format_rational(&c))),
                    None => fail("pullback is not a constant multiple"),
                }
            }
            Check::Formula4 { f } => {
                let s = Surface::from_chart(chart)?;
                let d = s.decompose(f)?;
                let back = s.reconstruct(&d);
                let ok = chart.congruent(&back, f)?;
                verdict(ok, format!("reconstruction {back}")).map(|(st, det)| {
                    if st == Status::Pass {
                        (st, format!("{} (N = {})", back, d.n))
                    } else {
                        (st, det)
                    }
                })
            }
            Check::Submodular { group, element, expected } => {
                let g = self.doc.groups.get(group).ok_or_else(|| RunError::Unknown {
                    kind: "group",
                    name: group.clone(),
                })?;
                let v = g.submodular(g.element(element)?)?;
                let detail = format!("value {}", format_rational(&v));
                if &v == expected {
                    pass(detail)
                } else {
                    fail(detail)
                }
            }
            Check::Character { group } => {
                let g = self.doc.groups.get(group).ok_or_else(|| RunError::Unknown {
                    kind: "group",
                    name: group.clone(),
                })?;
                match g.character_violation()? {
                    None => pass(format!("multiplicative on {} elements", g.elements().len())),
                    Some(v) => fail(v),
                }
            }
        }
    }
}

fn fresh(chart: &crate::variety::Chart) -> String {
    let mut name = "t".to_string();
    while chart.vars().index_of(&name).is_some() {
        name.push('_');
    }
    name
}

fn record(index: usize, d: &CheckDirective, ctx: &Ctx<'_>) -> CheckRecord {
    let start = Instant::now();
    let (raw, detail) = match ctx.run(&d.check) {
        Ok(r) => r,
        Err(e) => (Status::Error, e.to_string()),
    };
    let elapsed = start.elapsed().as_secs_f64() * 1000.0;
    let status = match d.expect {
        None => raw,
        Some(e) => {
            let matched = matches!(
                (e, raw),
                (Outcome::Pass, Status::Pass) | (Outcome::Fail, Status::Fail) | (Outcome::Unknown, Status::Unknown)
            );
            if matched {
                Status::Pass
            } else if raw == Status::Error {
                Status::Error
            } else {
                Status::Fail
            }
        }
    };
    let detail = match d.expect {
        Some(e) if e != Outcome::Pass => {
            let observed = raw.to_string().to_lowercase();
            if detail.is_empty() {
                format!("observed {observed}")
            } else {
                format!("observed {observed}: {detail}")
            }
        }
        _ => detail,
    };
    CheckRecord {
        index,
        name: d.check.to_string(),
        kind: d.check.kind().to_string(),
        status,
        expected: d.expect,
        detail,
        wall_time_ms: ctx.cfg.timings.then_some(elapsed),
    }
}

/// Runs every directive, in parallel, keeping directive order.
pub fn run(doc: &Document, source: &str, cfg: &RunConfig) -> Report {
    let ctx = Ctx { doc, cfg };
    let checks: Vec<CheckRecord> = doc
        .checks
        .par_iter()
        .enumerate()
        .map(|(i, d)| record(i, d, &ctx))
        .collect();
    let mut summary = Summary::default();
    for c in &checks {
        match c.status {
            Status::Pass => summary.pass += 1,
            Status::Fail => summary.fail += 1,
            Status::Error => summary.error += 1,
            Status::Unknown => summary.unknown += 1,
        }
    }
    Report {
        source: source.to_string(),
        seed: cfg.seed,
        degree_bound: cfg.degree_bound,
        lnd_bound: cfg.lnd_bound,
        points: cfg.points,
        checks,
        summary,
    }
}
