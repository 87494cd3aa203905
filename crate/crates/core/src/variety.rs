//! Affine varieties presented by triangular relations.
//!
//! A [`Chart`] lists coordinates, marks some of them invertible, and
//! carries relations `a·s + b = 0` that are linear in a distinguished
//! *solvable* coordinate `s` with a unit leading coefficient `a`. Solving
//! each relation eliminates its coordinate, so every regular function has a
//! canonical normal form in the remaining free coordinates.

use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{AlgebraError, LaurentPoly, Rational, Vars};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ChartError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("duplicate coordinate `{0}`")]
    DuplicateCoordinate(String),
    #[error("unknown coordinate `{0}`")]
    UnknownCoordinate(String),
    #[error("`{var}` appears with a negative exponent in `{poly}` but is not invertible")]
    NegativeExponent { var: String, poly: String },
    #[error("`{0}` is the solvable coordinate of more than one relation")]
    DuplicateSolvable(String),
    #[error("solvable coordinate `{0}` cannot also be invertible")]
    InvertibleSolvable(String),
    #[error("relation `{poly}` is not of degree exactly one in `{var}`")]
    NotLinear { poly: String, var: String },
    #[error("coefficient `{coeff}` of `{var}` in relation `{poly}` is not a unit on this chart")]
    NonUnitLeading {
        poly: String,
        var: String,
        coeff: String,
    },
    #[error("relations are not triangular: elimination of `{0}` does not terminate")]
    NonTriangular(String),
    #[error("elimination requires inverting `{0}`")]
    NonInvertibleElimination(String),
    #[error("point does not satisfy relation `{0}`")]
    PointOffChart(String),
    #[error("point assigns zero to invertible coordinate `{0}`")]
    ZeroInvertible(String),
    #[error("point is missing a value for `{0}`")]
    MissingValue(String),
    #[error("no valid point found after {0} draws")]
    RetryBudgetExhausted(usize),
    #[error("action `{name}`: {reason}")]
    InvalidAction { name: String, reason: String },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    pub poly: LaurentPoly,
    pub solve_for: usize,
}

#[derive(Clone, Debug)]
pub struct Chart {
    vars: Vars,
    invertible: Vec<bool>,
    relations: Vec<Relation>,
    // solutions[i] is Some(expression in free coordinates) for solvable i
    solutions: Vec<Option<LaurentPoly>>,
    free: Vec<usize>,
}

impl PartialEq for Chart {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars
            && self.invertible == other.invertible
            && self.relations == other.relations
    }
}

impl Chart {
    /// `coordinates` are `(name, invertible)` pairs; `relations` pair a
    /// defining polynomial with the name of its solvable coordinate.
    pub fn new(
        coordinates: &[(&str, bool)],
        relations: Vec<(LaurentPoly, &str)>,
    ) -> Result<Chart, ChartError> {
        let names: Vec<&str> = coordinates.iter().map(|(n, _)| *n).collect();
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(ChartError::DuplicateCoordinate(n.to_string()));
            }
        }
        let vars = Vars::new(names.iter().copied());
        let invertible = coordinates.iter().map(|(_, inv)| *inv).collect();
        let rels = relations
            .into_iter()
            .map(|(poly, s)| {
                let solve_for = vars
                    .index_of(s)
                    .ok_or_else(|| ChartError::UnknownCoordinate(s.to_string()))?;
                Ok(Relation { poly, solve_for })
            })
            .collect::<Result<Vec<_>, ChartError>>()?;
        Self::from_parts(vars, invertible, rels)
    }

    pub fn from_parts(
        vars: Vars,
        invertible: Vec<bool>,
        relations: Vec<Relation>,
    ) -> Result<Chart, ChartError> {
        let n = vars.len();
        assert_eq!(invertible.len(), n);
        let mut solvable = vec![false; n];
        for r in &relations {
            if !r.poly.vars().same(&vars) {
                return Err(AlgebraError::VariableMismatch {
                    left: vars.names().join(", "),
                    right: r.poly.vars().names().join(", "),
                }
                .into());
            }
            let s = r.solve_for;
            if solvable[s] {
                return Err(ChartError::DuplicateSolvable(vars.name(s).to_string()));
            }
            if invertible[s] {
                return Err(ChartError::InvertibleSolvable(vars.name(s).to_string()));
            }
            solvable[s] = true;
        }
        let mut chart = Chart {
            vars: vars.clone(),
            invertible,
            relations: Vec::new(),
            solutions: vec![None; n],
            free: (0..n).filter(|&i| !solvable[i]).collect(),
        };
        for r in &relations {
            chart.check_laurent_support(&r.poly)?;
        }

        // Raw solutions s = -b / a, possibly still mentioning other solvable
        // coordinates; resolved below by repeated substitution.
        let mut raw: Vec<Option<LaurentPoly>> = vec![None; n];
        for r in &relations {
            let s = r.solve_for;
            let not_linear = || ChartError::NotLinear {
                poly: r.poly.to_string(),
                var: vars.name(s).to_string(),
            };
            let (a, b) = r.poly.split_linear(s).ok_or_else(not_linear)?;
            if a.is_zero() {
                return Err(not_linear());
            }
            let unit_ok = a.as_unit().is_some_and(|(_, m)| {
                m.exponents()
                    .iter()
                    .enumerate()
                    .all(|(i, &e)| e == 0 || (chart.invertible[i] && !solvable[i]))
            });
            if !unit_ok {
                return Err(ChartError::NonUnitLeading {
                    poly: r.poly.to_string(),
                    var: vars.name(s).to_string(),
                    coeff: a.to_string(),
                });
            }
            raw[s] = Some(-&b.div_unit(&a)?);
        }
        let images: Vec<LaurentPoly> = (0..n)
            .map(|i| raw[i].clone().unwrap_or_else(|| LaurentPoly::var_index(&vars, i)))
            .collect();
        let mut resolved = raw.clone();
        for _ in 0..=relations.len() {
            if resolved
                .iter()
                .flatten()
                .all(|p| (0..n).all(|i| !solvable[i] || !p.involves(i)))
            {
                break;
            }
            for slot in resolved.iter_mut().flatten() {
                *slot = slot.substitute_all(&images).map_err(|e| match e {
                    AlgebraError::NonUnitInverse { var, .. } => {
                        ChartError::NonInvertibleElimination(var)
                    }
                    other => other.into(),
                })?;
            }
        }
        for (s, sol) in resolved.iter().enumerate() {
            if let Some(p) = sol {
                if (0..n).any(|i| solvable[i] && p.involves(i)) {
                    return Err(ChartError::NonTriangular(vars.name(s).to_string()));
                }
            }
        }
        chart.solutions = resolved;
        chart.relations = relations;
        Ok(chart)
    }

    /// The same chart with extra free, non-invertible coordinates appended
    /// (used for formal flow parameters).
    pub fn with_parameters(&self, params: &[&str]) -> Result<Chart, ChartError> {
        let mut names: Vec<String> = self.vars.names().to_vec();
        for p in params {
            if names.iter().any(|n| n == p) {
                return Err(ChartError::DuplicateCoordinate(p.to_string()));
            }
            names.push(p.to_string());
        }
        let vars = Vars::new(names);
        let map: Vec<Option<usize>> = (0..self.vars.len()).map(Some).collect();
        let mut invertible = self.invertible.clone();
        invertible.extend(params.iter().map(|_| false));
        let relations = self
            .relations
            .iter()
            .map(|r| Relation {
                poly: r.poly.embed(&vars, &map),
                solve_for: r.solve_for,
            })
            .collect();
        Self::from_parts(vars, invertible, relations)
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn dim_ambient(&self) -> usize {
        self.vars.len()
    }

    /// Dimension of the variety: the number of free coordinates.
    pub fn dim(&self) -> usize {
        self.free.len()
    }

    pub fn coordinate(&self, name: &str) -> Result<usize, ChartError> {
        self.vars
            .index_of(name)
            .ok_or_else(|| ChartError::UnknownCoordinate(name.to_string()))
    }

    pub fn coordinate_name(&self, i: usize) -> &str {
        self.vars.name(i)
    }

    pub fn is_invertible(&self, i: usize) -> bool {
        self.invertible[i]
    }

    pub fn invertible(&self) -> &[bool] {
        &self.invertible
    }

    pub fn is_solvable(&self, i: usize) -> bool {
        self.solutions[i].is_some()
    }

    /// Ambient indices of the free coordinates, in declaration order.
    pub fn free(&self) -> &[usize] {
        &self.free
    }

    pub fn free_position(&self, i: usize) -> Option<usize> {
        self.free.iter().position(|&f| f == i)
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn solution(&self, i: usize) -> Option<&LaurentPoly> {
        self.solutions[i].as_ref()
    }

    pub fn var(&self, name: &str) -> Result<LaurentPoly, ChartError> {
        Ok(LaurentPoly::var_index(&self.vars, self.coordinate(name)?))
    }

    pub fn zero(&self) -> LaurentPoly {
        LaurentPoly::zero(&self.vars)
    }

    pub fn one(&self) -> LaurentPoly {
        LaurentPoly::one(&self.vars)
    }

    pub fn constant(&self, c: Rational) -> LaurentPoly {
        LaurentPoly::constant(&self.vars, c)
    }

    /// Negative exponents are only allowed on invertible coordinates.
    pub fn check_laurent_support(&self, p: &LaurentPoly) -> Result<(), ChartError> {
        if !p.vars().same(&self.vars) {
            return Err(AlgebraError::VariableMismatch {
                left: self.vars.names().join(", "),
                right: p.vars().names().join(", "),
            }
            .into());
        }
        for (m, _) in p.terms() {
            for (i, &e) in m.exponents().iter().enumerate() {
                if e < 0 && !self.invertible[i] {
                    return Err(ChartError::NegativeExponent {
                        var: self.vars.name(i).to_string(),
                        poly: p.to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Canonical representative modulo the defining ideal, written in the
    /// free coordinates only.
    pub fn normal_form(&self, p: &LaurentPoly) -> Result<LaurentPoly, ChartError> {
        if !p.vars().same(&self.vars) {
            return Err(AlgebraError::VariableMismatch {
                left: self.vars.names().join(", "),
                right: p.vars().names().join(", "),
            }
            .into());
        }
        if self.relations.is_empty() || !self.free_images_needed(p) {
            return Ok(p.clone());
        }
        let images: Vec<LaurentPoly> = (0..self.vars.len())
            .map(|i| {
                self.solutions[i]
                    .clone()
                    .unwrap_or_else(|| LaurentPoly::var_index(&self.vars, i))
            })
            .collect();
        p.substitute_all(&images).map_err(|e| match e {
            AlgebraError::NonUnitInverse { var, .. } => ChartError::NonInvertibleElimination(var),
            other => other.into(),
        })
    }

    /// Panicking variant for values already known to live on this chart.
    pub(crate) fn nf(&self, p: &LaurentPoly) -> LaurentPoly {
        self.normal_form(p).expect("normal form on own chart")
    }

    fn free_images_needed(&self, p: &LaurentPoly) -> bool {
        (0..self.vars.len()).any(|i| self.solutions[i].is_some() && p.involves(i))
    }

    pub fn congruent(&self, p: &LaurentPoly, q: &LaurentPoly) -> Result<bool, ChartError> {
        Ok(self.normal_form(&p.checked_sub(q)?)?.is_zero())
    }

    /// Tangency of the ambient derivation `Σ coeff_i ∂/∂x_i`: it must send
    /// every defining polynomial into the ideal.
    pub fn is_tangent(&self, coefficients: &[LaurentPoly]) -> bool {
        assert_eq!(coefficients.len(), self.vars.len());
        self.relations.iter().all(|r| self.is_tangent_to(coefficients, r))
    }

    pub(crate) fn is_tangent_to(&self, coefficients: &[LaurentPoly], r: &Relation) -> bool {
        let mut acc = self.zero();
        for (i, c) in coefficients.iter().enumerate() {
            if !c.is_zero() && r.poly.involves(i) {
                acc = &acc + &(c * &r.poly.partial_index(i));
            }
        }
        self.normal_form(&acc).map(|p| p.is_zero()).unwrap_or(false)
    }

    /// Completes values for the free coordinates into a point of the chart.
    pub fn point_from_free(&self, values: &HashMap<String, Rational>) -> Result<Point, ChartError> {
        let mut free_vals = vec![Rational::zero(); self.vars.len()];
        for &i in &self.free {
            let name = self.vars.name(i);
            free_vals[i] = values
                .get(name)
                .cloned()
                .ok_or_else(|| ChartError::MissingValue(name.to_string()))?;
        }
        self.complete_point(free_vals)
    }

    fn complete_point(&self, mut vals: Vec<Rational>) -> Result<Point, ChartError> {
        for &i in &self.free {
            if self.invertible[i] && vals[i].is_zero() {
                return Err(ChartError::ZeroInvertible(self.vars.name(i).to_string()));
            }
        }
        for i in 0..self.vars.len() {
            if let Some(sol) = &self.solutions[i] {
                vals[i] = sol.evaluate_at(&vals).map_err(|e| match e {
                    AlgebraError::ZeroAtInvertible(v) => ChartError::ZeroInvertible(v),
                    other => other.into(),
                })?;
            }
        }
        let point = Point { values: vals };
        self.validate_point(&point)?;
        Ok(point)
    }

    pub fn point(&self, values: &HashMap<String, Rational>) -> Result<Point, ChartError> {
        let mut vals = Vec::with_capacity(self.vars.len());
        for name in self.vars.names() {
            vals.push(
                values
                    .get(name)
                    .cloned()
                    .ok_or_else(|| ChartError::MissingValue(name.clone()))?,
            );
        }
        let p = Point { values: vals };
        self.validate_point(&p)?;
        Ok(p)
    }

    pub fn validate_point(&self, p: &Point) -> Result<(), ChartError> {
        if p.values.len() != self.vars.len() {
            return Err(ChartError::PointOffChart("wrong number of coordinates".into()));
        }
        for (i, v) in p.values.iter().enumerate() {
            if self.invertible[i] && v.is_zero() {
                return Err(ChartError::ZeroInvertible(self.vars.name(i).to_string()));
            }
        }
        for r in &self.relations {
            let v = r.poly.evaluate_at(&p.values)?;
            if !v.is_zero() {
                return Err(ChartError::PointOffChart(r.poly.to_string()));
            }
        }
        Ok(())
    }

    /// Deterministic rational point: free coordinates drawn from
    /// `[-9, 9] \ {0}`, solvable coordinates solved exactly.
    pub fn sample_point(&self, seed: u64) -> Result<Point, ChartError> {
        self.sample_point_with_budget(seed, 100)
    }

    pub fn sample_point_with_budget(&self, seed: u64, budget: usize) -> Result<Point, ChartError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..budget {
            let mut vals = vec![Rational::zero(); self.vars.len()];
            for &i in &self.free {
                let mut k: i64 = rng.gen_range(-9..=8);
                if k >= 0 {
                    k += 1;
                }
                vals[i] = Rational::from_integer(k.into());
            }
            if let Ok(p) = self.complete_point(vals) {
                return Ok(p);
            }
        }
        Err(ChartError::RetryBudgetExhausted(budget))
    }

    pub fn evaluate(&self, p: &LaurentPoly, point: &Point) -> Result<Rational, ChartError> {
        Ok(p.evaluate_at(&point.values)?)
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coords: Vec<String> = (0..self.vars.len())
            .map(|i| {
                let star = if self.invertible[i] { "*" } else { "" };
                format!("{}{}", self.vars.name(i), star)
            })
            .collect();
        write!(f, "chart {{ vars {};", coords.join(", "))?;
        for r in &self.relations {
            write!(f, " rel {} solve {};", r.poly, self.vars.name(r.solve_for))?;
        }
        f.write_str(" }")
    }
}

/// A rational point, one value per ambient coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point {
    values: Vec<Rational>,
}

impl Point {
    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &Rational {
        &self.values[i]
    }

    pub fn get(&self, chart: &Chart, name: &str) -> Option<&Rational> {
        chart.vars.index_of(name).map(|i| &self.values[i])
    }
}

/// A finite-order automorphism given by coordinate substitution.
#[derive(Clone, Debug, PartialEq)]
pub struct SubstitutionAction {
    name: String,
    images: Vec<LaurentPoly>,
    order: u32,
}

impl SubstitutionAction {
    /// Validates that the substitution preserves the defining ideal, sends
    /// invertible coordinates to units, and has the declared order.
    pub fn new(
        chart: &Chart,
        name: &str,
        bindings: &HashMap<String, LaurentPoly>,
        order: u32,
    ) -> Result<Self, ChartError> {
        let invalid = |reason: String| ChartError::InvalidAction {
            name: name.to_string(),
            reason,
        };
        if order == 0 {
            return Err(invalid("order must be positive".into()));
        }
        for k in bindings.keys() {
            chart.coordinate(k)?;
        }
        let mut images = Vec::with_capacity(chart.dim_ambient());
        for (i, coord) in chart.vars.names().iter().enumerate() {
            let img = match bindings.get(coord) {
                Some(p) => {
                    chart.check_laurent_support(p)?;
                    chart.normal_form(p)?
                }
                None => chart.nf(&LaurentPoly::var_index(&chart.vars, i)),
            };
            if chart.invertible[i] && img.as_unit().is_none() {
                return Err(invalid(format!(
                    "image of invertible coordinate `{coord}` is not a unit: {img}"
                )));
            }
            images.push(img);
        }
        let action = SubstitutionAction {
            name: name.to_string(),
            images,
            order,
        };
        for r in &chart.relations {
            if !action.apply(chart, &r.poly)?.is_zero() {
                return Err(invalid(format!("does not preserve relation `{}`", r.poly)));
            }
        }
        let mut power = action.images.clone();
        for _ in 1..order {
            power = power
                .iter()
                .map(|p| action.apply(chart, p))
                .collect::<Result<_, _>>()?;
        }
        for (i, p) in power.iter().enumerate() {
            let id = chart.nf(&LaurentPoly::var_index(&chart.vars, i));
            if *p != id {
                return Err(invalid(format!(
                    "{order}-fold composite is not the identity on `{}`",
                    chart.vars.name(i)
                )));
            }
        }
        Ok(action)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Images of all ambient coordinates, in normal form.
    pub fn images(&self) -> &[LaurentPoly] {
        &self.images
    }

    /// `p ∘ σ` in normal form.
    pub fn apply(&self, chart: &Chart, p: &LaurentPoly) -> Result<LaurentPoly, ChartError> {
        let q = p.substitute_all(&self.images)?;
        chart.normal_form(&q)
    }

    /// Composite action sending each coordinate `x` to `(x∘σ)∘τ`, where
    /// `σ = self` and `τ = other`.
    pub fn compose(&self, chart: &Chart, other: &SubstitutionAction, name: &str, order: u32) -> Result<Self, ChartError> {
        let images = self
            .images
            .iter()
            .map(|p| other.apply(chart, p))
            .collect::<Result<Vec<_>, _>>()?;
        let bindings = chart
            .vars
            .names()
            .iter()
            .cloned()
            .zip(images)
            .collect();
        Self::new(chart, name, &bindings, order)
    }
}

/// Objects that can be tested for invariance under a substitution action.
pub trait Invariance {
    fn is_invariant(&self, action: &SubstitutionAction, chart: &Chart) -> Result<bool, ChartError>;
}

impl Invariance for LaurentPoly {
    fn is_invariant(&self, action: &SubstitutionAction, chart: &Chart) -> Result<bool, ChartError> {
        Ok(action.apply(chart, self)? == chart.normal_form(self)?)
    }
}
