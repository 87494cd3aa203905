//! A checkable document: one chart, named objects on it, and a list of
//! check directives. Built either by the DSL front end or by the
//! scenario constructors.

use std::fmt;
use std::sync::Arc;

use indexmap::IndexMap;
use serde::Serialize;

use crate::algebra::rational::format_rational;
use crate::algebra::{LaurentPoly, Rational};
use crate::calculus::{DiffForm, VectorField, VolumeForm};
use crate::groups::GroupPresentation;
use crate::variety::{Chart, Point, SubstitutionAction};

#[derive(Clone, Debug, PartialEq)]
pub struct Document {
    pub chart: Arc<Chart>,
    pub volume: Option<(String, VolumeForm)>,
    pub forms: IndexMap<String, DiffForm>,
    pub fields: IndexMap<String, VectorField>,
    pub actions: IndexMap<String, SubstitutionAction>,
    pub points: IndexMap<String, Point>,
    pub groups: IndexMap<String, GroupPresentation>,
    pub checks: Vec<CheckDirective>,
}

impl Document {
    pub fn new(chart: Arc<Chart>) -> Self {
        Document {
            chart,
            volume: None,
            forms: IndexMap::new(),
            fields: IndexMap::new(),
            actions: IndexMap::new(),
            points: IndexMap::new(),
            groups: IndexMap::new(),
            checks: Vec::new(),
        }
    }

    /// Whether `name` is already taken by any named object.
    pub fn defines(&self, name: &str) -> bool {
        self.volume.as_ref().is_some_and(|(n, _)| n == name)
            || self.forms.contains_key(name)
            || self.fields.contains_key(name)
            || self.actions.contains_key(name)
            || self.points.contains_key(name)
            || self.groups.contains_key(name)
    }

    /// A named form; the volume form counts as one.
    pub fn form(&self, name: &str) -> Option<&DiffForm> {
        match &self.volume {
            Some((n, v)) if n == name => Some(v.form()),
            _ => self.forms.get(name),
        }
    }

    pub fn volume_named(&self, name: &str) -> Option<&VolumeForm> {
        match &self.volume {
            Some((n, v)) if n == name => Some(v),
            _ => None,
        }
    }

    pub fn check(&mut self, check: Check) {
        self.checks.push(CheckDirective { check, expect: None });
    }

    pub fn check_expect(&mut self, check: Check, expect: Outcome) {
        self.checks.push(CheckDirective {
            check,
            expect: Some(expect),
        });
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Unknown,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Unknown => "unknown",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckDirective {
    pub check: Check,
    pub expect: Option<Outcome>,
}

impl fmt::Display for CheckDirective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.check)?;
        if let Some(e) = self.expect {
            write!(f, " expect {e}")?;
        }
        Ok(())
    }
}

/// Subject of an invariance check.
#[derive(Clone, Debug, PartialEq)]
pub enum Subject {
    Field(String),
    Form(String),
    Function(LaurentPoly),
}

/// A field pair with an element of its associate ideal.
#[derive(Clone, Debug, PartialEq)]
pub struct PairRef {
    pub xi: String,
    pub eta: String,
    pub witness: LaurentPoly,
}

/// Check directives. Names refer to objects of the owning document;
/// optional bounds default to the run configuration.
#[derive(Clone, Debug, PartialEq)]
pub enum Check {
    Tangent { field: String },
    DivergenceFree { field: String, volume: String },
    Divergence { field: String, volume: String, expected: LaurentPoly },
    Identity1 { xi: String, eta: String, volume: String },
    BracketPotential { xi: String, eta: String, volume: String, expected: Option<LaurentPoly> },
    Potential { f: LaurentPoly, field: String, volume: String },
    PotentialSign { f: LaurentPoly, field: String, volume: String },
    Theta { field: String, volume: String, expected: String },
    Exact { form: String, primitive: String },
    Closed { form: String },
    KernelContains { field: String, f: LaurentPoly, bound: Option<u32> },
    KernelPowers { field: String, generator: LaurentPoly, bound: Option<u32> },
    Semicompat { xi: String, eta: String, bound: Option<u32> },
    ConditionA { pairs: Vec<PairRef> },
    Lnd { field: String, bound: Option<usize> },
    Commute { xi: String, eta: String },
    Formula3 { field: String, f: LaurentPoly, point: String },
    Invariant { subject: Subject, action: String },
    QuasiInvariant { form: String, action: String, character: Rational },
    Formula4 { f: LaurentPoly },
    Submodular { group: String, element: String, expected: Rational },
    Character { group: String },
}

impl Check {
    pub fn kind(&self) -> &'static str {
        match self {
            Check::Tangent { .. } => "tangent",
            Check::DivergenceFree { .. } => "divergence_free",
            Check::Divergence { .. } => "divergence",
            Check::Identity1 { .. } => "identity1",
            Check::BracketPotential { .. } => "bracket_potential",
            Check::Potential { .. } => "potential",
            Check::PotentialSign { .. } => "potential_sign",
            Check::Theta { .. } => "theta",
            Check::Exact { .. } => "exact",
            Check::Closed { .. } => "closed",
            Check::KernelContains { .. } => "kernel_contains",
            Check::KernelPowers { .. } => "kernel_powers",
            Check::Semicompat { .. } => "semicompat",
            Check::ConditionA { .. } => "condition_a",
            Check::Lnd { .. } => "lnd",
            Check::Commute { .. } => "commute",
            Check::Formula3 { .. } => "formula3",
            Check::Invariant { .. } => "invariant",
            Check::QuasiInvariant { .. } => "quasi_invariant",
            Check::Formula4 { .. } => "formula4",
            Check::Submodular { .. } => "submodular",
            Check::Character { .. } => "character",
        }
    }

    /// Every check keyword the DSL accepts.
    pub const KINDS: [&'static str; 22] = [
        "tangent",
        "divergence_free",
        "divergence",
        "identity1",
        "bracket_potential",
        "potential",
        "potential_sign",
        "theta",
        "exact",
        "closed",
        "kernel_contains",
        "kernel_powers",
        "semicompat",
        "condition_a",
        "lnd",
        "commute",
        "formula3",
        "invariant",
        "quasi_invariant",
        "formula4",
        "submodular",
        "character",
    ];

    fn args(&self) -> Vec<String> {
        let p = |x: &LaurentPoly| x.to_string();
        let s = |x: &String| x.clone();
        let mut out = match self {
            Check::Tangent { field } => vec![s(field)],
            Check::DivergenceFree { field, volume } => vec![s(field), s(volume)],
            Check::Divergence { field, volume, expected } => vec![s(field), s(volume), p(expected)],
            Check::Identity1 { xi, eta, volume } => vec![s(xi), s(eta), s(volume)],
            Check::BracketPotential { xi, eta, volume, expected } => {
                let mut v = vec![s(xi), s(eta), s(volume)];
                v.extend(expected.as_ref().map(p));
                v
            }
            Check::Potential { f, field, volume } | Check::PotentialSign { f, field, volume } => {
                vec![p(f), s(field), s(volume)]
            }
            Check::Theta { field, volume, expected } => vec![s(field), s(volume), s(expected)],
            Check::Exact { form, primitive } => vec![s(form), s(primitive)],
            Check::Closed { form } => vec![s(form)],
            Check::KernelContains { field, f, .. } => vec![s(field), p(f)],
            Check::KernelPowers { field, generator, .. } => vec![s(field), p(generator)],
            Check::Semicompat { xi, eta, .. } => vec![s(xi), s(eta)],
            Check::ConditionA { pairs } => pairs
                .iter()
                .map(|pr| format!("({}, {}, {})", pr.xi, pr.eta, pr.witness))
                .collect(),
            Check::Lnd { field, .. } => vec![s(field)],
            Check::Commute { xi, eta } => vec![s(xi), s(eta)],
            Check::Formula3 { field, f, point } => vec![s(field), p(f), s(point)],
            Check::Invariant { subject, action } => {
                let subj = match subject {
                    Subject::Field(n) | Subject::Form(n) => n.clone(),
                    Subject::Function(f) => p(f),
                };
                vec![subj, s(action)]
            }
            Check::QuasiInvariant { form, action, character } => {
                vec![s(form), s(action), format_rational(character)]
            }
            Check::Formula4 { f } => vec![p(f)],
            Check::Submodular { group, element, expected } => {
                vec![s(group), s(element), format_rational(expected)]
            }
            Check::Character { group } => vec![s(group)],
        };
        match self {
            Check::KernelContains { bound: Some(b), .. }
            | Check::KernelPowers { bound: Some(b), .. }
            | Check::Semicompat { bound: Some(b), .. } => out.push(b.to_string()),
            Check::Lnd { bound: Some(b), .. } => out.push(b.to_string()),
            _ => {}
        }
        out
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.kind(), self.args().join(", "))
    }
}
