//! Checks behind the algebraic volume density property: the bracket
//! identity, degree-bounded kernels and semi-compatibility, fiber spanning,
//! flow tangent maps and surface potentials.

mod surface;

pub use surface::{Formula4Decomposition, Surface};

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::algebra::{LaurentPoly, Matrix, Monomial, PolySpan, Rational};
use crate::calculus::{lnd_flow, CalculusError, DiffForm, VectorField, VolumeForm};
use crate::variety::{Chart, ChartError, Point};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AvdpError {
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error("{which} field is not divergence-free (divergence {divergence})")]
    NotDivergenceFree { which: &'static str, divergence: String },
    #[error("chart has dimension {got}, expected {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("`{0}` is not in the kernel of the field")]
    NotInKernel(String),
    #[error("`{0}` does not vanish at the point")]
    NonzeroAtPoint(String),
    #[error("chart is not a surface p(x) + q(y) + xyz = 1: {0}")]
    NotSurface(String),
    #[error("`{0}` is not a polynomial in the surface coordinates")]
    NotPolynomial(String),
    #[error("degree bound must be at least 1")]
    ZeroBound,
}

pub type Result<T> = std::result::Result<T, AvdpError>;

fn require_divergence_free(xi: &VectorField, which: &'static str, omega: &VolumeForm) -> Result<()> {
    let div = omega.divergence(xi)?;
    if div.is_zero() {
        Ok(())
    } else {
        Err(AvdpError::NotDivergenceFree {
            which,
            divergence: div.to_string(),
        })
    }
}

/// `ι_{[ξ,η]}ω − d ι_ξ ι_η ω`, after checking both fields are
/// divergence-free.
pub fn identity_one_residual(xi: &VectorField, eta: &VectorField, omega: &VolumeForm) -> Result<DiffForm> {
    require_divergence_free(xi, "first", omega)?;
    require_divergence_free(eta, "second", omega)?;
    let lhs = omega.theta(&xi.bracket(eta)?)?;
    let rhs = omega.theta(eta)?.interior(xi)?.d();
    Ok(lhs.sub(&rhs)?)
}

/// `ι_{[ξ,η]}ω = d ι_ξ ι_η ω` for divergence-free `ξ`, `η`.
pub fn verify_identity_one(xi: &VectorField, eta: &VectorField, omega: &VolumeForm) -> Result<bool> {
    Ok(identity_one_residual(xi, eta, omega)?.is_zero())
}

/// Exponent vectors of total degree at most `d` in `n` variables, in
/// graded order.
pub fn exponents_up_to(n: usize, d: u32) -> Vec<Vec<i32>> {
    fn rec(n: usize, left: i32, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d as i32, &mut Vec::new(), &mut out);
    out.sort_by_key(|e| e.iter().sum::<i32>());
    out
}

/// Normal forms of the ambient monomials of degree at most `d`.
fn truncated_ring(chart: &Chart, d: u32) -> PolySpan {
    let mut span = PolySpan::new(chart.vars());
    for e in exponents_up_to(chart.dim_ambient(), d) {
        let m = LaurentPoly::term(chart.vars(), Monomial(e.into_iter().collect()), Rational::one());
        span.insert(&chart.nf(&m));
    }
    span
}

/// Coefficient matrix of `polys`: one column per polynomial, one row per
/// monomial occurring in any of them.
fn coordinate_matrix(polys: &[LaurentPoly]) -> Matrix {
    let mut index: BTreeMap<&Monomial, usize> = BTreeMap::new();
    for p in polys {
        for (m, _) in p.terms() {
            let k = index.len();
            index.entry(m).or_insert(k);
        }
    }
    let mut mat = Matrix::zeros(index.len(), polys.len());
    for (j, p) in polys.iter().enumerate() {
        for (m, c) in p.terms() {
            mat[(index[m], j)] = c.clone();
        }
    }
    mat
}

fn combination(basis: &[LaurentPoly], coeffs: &[Rational], zero: &LaurentPoly) -> LaurentPoly {
    let mut acc = zero.clone();
    for (b, c) in basis.iter().zip(coeffs) {
        if !c.is_zero() {
            acc = &acc + &b.scale(c);
        }
    }
    acc
}

/// Echelon basis of `{f : ξ(f) = 0}` inside the normal forms of ambient
/// polynomials of degree at most `d`.
pub fn kernel_basis(xi: &VectorField, d: u32) -> Vec<LaurentPoly> {
    let chart = xi.chart();
    let ring: Vec<LaurentPoly> = truncated_ring(chart, d).basis().cloned().collect();
    let images: Vec<LaurentPoly> = ring.iter().map(|b| xi.apply(b)).collect();
    let mut span = PolySpan::new(chart.vars());
    for v in coordinate_matrix(&images).nullspace() {
        span.insert(&combination(&ring, &v, &chart.zero()));
    }
    span.basis().cloned().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SemicompatStatus {
    FullRing,
    IdealWitness,
    Unknown,
}

impl fmt::Display for SemicompatStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SemicompatStatus::FullRing => "FULL_RING",
            SemicompatStatus::IdealWitness => "IDEAL_WITNESS",
            SemicompatStatus::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SemicompatVerdict {
    pub status: SemicompatStatus,
    pub witness: Option<LaurentPoly>,
    pub degree_bound: u32,
}

/// One-sided test that `span(Ker ξ · Ker η)` contains a nonzero ideal,
/// with everything truncated at degree `d`.
///
/// `FULL_RING` means every normal-form monomial of degree `≤ d` lies in
/// the product span; `IDEAL_WITNESS` gives a nonzero `f` in the span with
/// `f·m` in the span for all those monomials `m`. At `d = 0` the test is
/// vacuous and is rejected.
pub fn semicompat_bounded(xi: &VectorField, eta: &VectorField, d: u32) -> Result<SemicompatVerdict> {
    if d == 0 {
        return Err(AvdpError::ZeroBound);
    }
    if **xi.chart() != **eta.chart() {
        return Err(CalculusError::ChartMismatch.into());
    }
    let chart = xi.chart();
    let k1 = kernel_basis(xi, d);
    let k2 = kernel_basis(eta, d);
    let mut products = PolySpan::new(chart.vars());
    for a in &k1 {
        for b in &k2 {
            products.insert(&chart.nf(&(a * b)));
        }
    }
    let ring = truncated_ring(chart, d);
    if products.contains_span(&ring) {
        return Ok(SemicompatVerdict {
            status: SemicompatStatus::FullRing,
            witness: Some(chart.one()),
            degree_bound: d,
        });
    }
    let basis: Vec<LaurentPoly> = products.basis().cloned().collect();
    // f = Σ c_k p_k is a witness iff the residue of f·m_l modulo the span
    // vanishes for every l; reduction is linear, so this is one block of
    // equations per m_l.
    let mut blocks: Vec<Vec<LaurentPoly>> = vec![Vec::new(); basis.len()];
    for m in ring.basis() {
        for (k, p) in basis.iter().enumerate() {
            blocks[k].push(products.reduce(&chart.nf(&(p * m))));
        }
    }
    let rows = ring.dim();
    let mut columns: Vec<Vec<Rational>> = vec![Vec::new(); basis.len()];
    for l in 0..rows {
        let block: Vec<LaurentPoly> = blocks.iter().map(|b| b[l].clone()).collect();
        let mat = coordinate_matrix(&block);
        for (k, col) in columns.iter_mut().enumerate() {
            col.extend(mat.column(k));
        }
    }
    let height = columns.first().map_or(0, Vec::len);
    let system = Matrix::from_columns(&columns, height);
    let witness = system
        .nullspace()
        .into_iter()
        .next()
        .map(|v| combination(&basis, &v, &chart.zero()));
    Ok(match witness {
        Some(w) => SemicompatVerdict {
            status: SemicompatStatus::IdealWitness,
            witness: Some(w),
            degree_bound: d,
        },
        None => SemicompatVerdict {
            status: SemicompatStatus::Unknown,
            witness: None,
            degree_bound: d,
        },
    })
}

/// A pair of fields together with an element of their associate ideal.
#[derive(Clone, Debug)]
pub struct FiberPair {
    pub xi: VectorField,
    pub eta: VectorField,
    pub witness: LaurentPoly,
}

/// Coordinates of `u ∧ v` in the basis `e_a ∧ e_b`, `a < b`.
fn wedge2(u: &[Rational], v: &[Rational]) -> Vec<Rational> {
    let n = u.len();
    let mut out = Vec::with_capacity(n * (n.saturating_sub(1)) / 2);
    for a in 0..n {
        for b in a + 1..n {
            out.push(&u[a] * &v[b] - &u[b] * &v[a]);
        }
    }
    out
}

/// Strong Condition (A) at one point: the vectors `I_j(x)·ξ_j(x)∧η_j(x)`
/// span `Λ²T_xX`.
pub fn condition_a_fiber(pairs: &[FiberPair], point: &Point) -> Result<bool> {
    let Some(first) = pairs.first() else {
        return Ok(false);
    };
    let chart = first.xi.chart().clone();
    chart.validate_point(point)?;
    let n = chart.dim();
    let target = n * n.saturating_sub(1) / 2;
    let mut cols = Vec::with_capacity(pairs.len());
    for p in pairs {
        let w = chart.evaluate(&chart.nf(&p.witness), point)?;
        let v = wedge2(&p.xi.at(point)?, &p.eta.at(point)?);
        cols.push(v.into_iter().map(|c| &c * &w).collect::<Vec<_>>());
    }
    if target == 0 {
        return Ok(true);
    }
    Ok(Matrix::from_columns(&cols, target).rank() == target)
}

fn fresh_parameter(chart: &Chart) -> String {
    let mut name = "t".to_string();
    while chart.vars().index_of(&name).is_some() {
        name.push('_');
    }
    name
}

/// Jacobian of `exp(fν)` at `point` in the free-coordinate
/// trivialization, together with the predicted `I + ν(x)·df(x)`.
pub fn formula3_matrices(nu: &VectorField, f: &LaurentPoly, point: &Point, bound: usize) -> Result<(Matrix, Matrix)> {
    let chart = nu.chart().clone();
    chart.validate_point(point)?;
    let f = chart.normal_form(f)?;
    if !nu.apply(&f).is_zero() {
        return Err(AvdpError::NotInKernel(f.to_string()));
    }
    if !chart.evaluate(&f, point)?.is_zero() {
        return Err(AvdpError::NonzeroAtPoint(f.to_string()));
    }
    lnd_flow(nu, &fresh_parameter(&chart), bound)?;
    let flow = lnd_flow(&nu.scale(&f), &fresh_parameter(&chart), bound)?;
    let images = flow.at(&chart, &Rational::one())?;
    let free = chart.free();
    let n = free.len();
    let mut jac = Matrix::zeros(n, n);
    let mut predicted = Matrix::identity(n);
    let nu_at = nu.at(point)?;
    for (j, &xj) in free.iter().enumerate() {
        for (k, &xk) in free.iter().enumerate() {
            jac[(j, k)] = chart.evaluate(&images[xj].partial_index(xk), point)?;
            let grad = chart.evaluate(&f.partial_index(xk), point)?;
            predicted[(j, k)] += &nu_at[j] * &grad;
        }
    }
    Ok((jac, predicted))
}

/// The tangent map of the flow of `fν` at a zero of `f ∈ Ker ν` is
/// `w ↦ w + df(w)·ν`.
pub fn verify_formula3(nu: &VectorField, f: &LaurentPoly, point: &Point, bound: usize) -> Result<bool> {
    let (jac, predicted) = formula3_matrices(nu, f, point, bound)?;
    Ok(jac == predicted)
}

fn require_surface_dim(chart: &Arc<Chart>) -> Result<()> {
    if chart.dim() != 2 {
        return Err(AvdpError::Dimension {
            expected: 2,
            got: chart.dim(),
        });
    }
    Ok(())
}

/// The 0-form `ι_ξ ι_η ω` on a surface.
pub fn bracket_potential(xi: &VectorField, eta: &VectorField, omega: &VolumeForm) -> Result<LaurentPoly> {
    require_surface_dim(omega.chart())?;
    require_divergence_free(xi, "first", omega)?;
    require_divergence_free(eta, "second", omega)?;
    Ok(omega.theta(eta)?.interior(xi)?.top_coefficient())
}

/// `d f = ι_ξ ω` on a surface.
pub fn verify_potential(f: &LaurentPoly, xi: &VectorField, omega: &VolumeForm) -> Result<bool> {
    require_surface_dim(omega.chart())?;
    let df = DiffForm::function(omega.chart(), f)?.d();
    Ok(df == omega.theta(xi)?)
}

/// The constants `c ∈ {+1, −1}` for which `c·f` is a potential of `ξ`.
pub fn potential_signs(f: &LaurentPoly, xi: &VectorField, omega: &VolumeForm) -> Result<Vec<i32>> {
    let mut out = Vec::new();
    for c in [1, -1] {
        if verify_potential(&f.scale(&Rational::from_integer(c.into())), xi, omega)? {
            out.push(c);
        }
    }
    Ok(out)
}

/// For commuting `ξ`, `η` and `f ∈ Ker η`, the field `ν = ξ(f)·η` has
/// `ι_ν ω = d(ι_ξ ι_{fη} ω)`; returns `ν` and that primitive.
pub fn exact_field(xi: &VectorField, eta: &VectorField, f: &LaurentPoly, omega: &VolumeForm) -> Result<(VectorField, DiffForm)> {
    if !eta.apply(f).is_zero() {
        return Err(AvdpError::NotInKernel(f.to_string()));
    }
    let nu = eta.scale(&xi.apply(f));
    let primitive = omega.theta(&eta.scale(f))?.interior(xi)?;
    Ok((nu, primitive))
}
