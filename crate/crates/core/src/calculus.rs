//! Vector fields and differential forms on a chart.
//!
//! Forms are written in the free coordinates only: a basis blade is a
//! strictly increasing list of positions into [`Chart::free`]. Fields keep a
//! coefficient for every ambient coordinate, all in normal form; on
//! normal-form functions only the free components matter.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::algebra::rational::factorial;
use crate::algebra::{AlgebraError, LaurentPoly, Rational};
use crate::variety::{Chart, ChartError, Invariance, SubstitutionAction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalculusError {
    #[error(transparent)]
    Chart(#[from] ChartError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("objects live on different charts")]
    ChartMismatch,
    #[error("field is not tangent: it moves relation `{0}` off the ideal")]
    NotTangent(String),
    #[error("expected {expected} coefficients, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("form has degree {got}, expected {expected}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("volume form coefficient `{0}` is not a unit monomial in invertible free coordinates")]
    NonUnitVolume(String),
    #[error("`{var}` is not annihilated by the field within {bound} steps")]
    NotNilpotent { var: String, bound: usize },
}

pub type Result<T> = std::result::Result<T, CalculusError>;

fn same_chart(a: &Arc<Chart>, b: &Arc<Chart>) -> Result<()> {
    if Arc::ptr_eq(a, b) || **a == **b {
        Ok(())
    } else {
        Err(CalculusError::ChartMismatch)
    }
}

/// A tangent derivation of the chart's coordinate ring.
#[derive(Clone, Debug)]
pub struct VectorField {
    chart: Arc<Chart>,
    coeffs: Vec<LaurentPoly>,
}

impl PartialEq for VectorField {
    fn eq(&self, other: &Self) -> bool {
        *self.chart == *other.chart && self.coeffs == other.coeffs
    }
}

impl VectorField {
    /// Builds `Σ coeffs[i] ∂/∂x_i`, rejecting fields that are not tangent.
    pub fn new(chart: &Arc<Chart>, coeffs: Vec<LaurentPoly>) -> Result<Self> {
        if coeffs.len() != chart.dim_ambient() {
            return Err(CalculusError::Arity {
                expected: chart.dim_ambient(),
                got: coeffs.len(),
            });
        }
        for c in &coeffs {
            chart.check_laurent_support(c)?;
        }
        if let Some(r) = chart
            .relations()
            .iter()
            .find(|r| !chart.is_tangent_to(&coeffs, r))
        {
            return Err(CalculusError::NotTangent(r.poly.to_string()));
        }
        let coeffs = coeffs
            .iter()
            .map(|c| chart.normal_form(c))
            .collect::<std::result::Result<_, _>>()?;
        Ok(VectorField {
            chart: chart.clone(),
            coeffs,
        })
    }

    /// The unique tangent field with the given components along the free
    /// coordinates; the remaining components follow from the relations.
    pub fn from_free(chart: &Arc<Chart>, free: Vec<LaurentPoly>) -> Result<Self> {
        if free.len() != chart.dim() {
            return Err(CalculusError::Arity {
                expected: chart.dim(),
                got: free.len(),
            });
        }
        let mut coeffs = vec![chart.zero(); chart.dim_ambient()];
        for (k, c) in free.into_iter().enumerate() {
            chart.check_laurent_support(&c)?;
            coeffs[chart.free()[k]] = chart.normal_form(&c)?;
        }
        let mut field = VectorField {
            chart: chart.clone(),
            coeffs,
        };
        for i in 0..chart.dim_ambient() {
            if let Some(sol) = chart.solution(i) {
                field.coeffs[i] = field.apply(sol);
            }
        }
        Ok(field)
    }

    pub fn zero(chart: &Arc<Chart>) -> Self {
        VectorField {
            chart: chart.clone(),
            coeffs: vec![chart.zero(); chart.dim_ambient()],
        }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    /// Ambient coefficients, in normal form.
    pub fn coefficients(&self) -> &[LaurentPoly] {
        &self.coeffs
    }

    pub fn coefficient(&self, i: usize) -> &LaurentPoly {
        &self.coeffs[i]
    }

    pub fn free_components(&self) -> Vec<LaurentPoly> {
        self.chart.free().iter().map(|&i| self.coeffs[i].clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(LaurentPoly::is_zero)
    }

    /// `ξ(f)` in normal form.
    pub fn apply(&self, f: &LaurentPoly) -> LaurentPoly {
        let f = self.chart.nf(f);
        let mut acc = self.chart.zero();
        for &i in self.chart.free() {
            if self.coeffs[i].is_zero() || !f.involves(i) {
                continue;
            }
            acc = &acc + &(&self.coeffs[i] * &f.partial_index(i));
        }
        acc
    }

    pub fn scale(&self, f: &LaurentPoly) -> VectorField {
        let f = self.chart.nf(f);
        VectorField {
            chart: self.chart.clone(),
            coeffs: self.coeffs.iter().map(|c| self.chart.nf(&(c * &f))).collect(),
        }
    }

    pub fn add(&self, other: &VectorField) -> Result<VectorField> {
        same_chart(&self.chart, &other.chart)?;
        Ok(VectorField {
            chart: self.chart.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &VectorField) -> Result<VectorField> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> VectorField {
        VectorField {
            chart: self.chart.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// `[ξ, η]` with `[ξ, η](x_i) = ξ(η_i) − η(ξ_i)`.
    pub fn bracket(&self, other: &VectorField) -> Result<VectorField> {
        same_chart(&self.chart, &other.chart)?;
        let coeffs = (0..self.coeffs.len())
            .map(|i| &self.apply(&other.coeffs[i]) - &other.apply(&self.coeffs[i]))
            .collect();
        Ok(VectorField {
            chart: self.chart.clone(),
            coeffs,
        })
    }

    /// Free components evaluated at a point.
    pub fn at(&self, point: &crate::variety::Point) -> Result<Vec<Rational>> {
        self.chart
            .free()
            .iter()
            .map(|&i| Ok(self.chart.evaluate(&self.coeffs[i], point)?))
            .collect()
    }

    /// The same field on a chart with extra trailing coordinates.
    fn lift_to(&self, target: &Arc<Chart>) -> VectorField {
        let map: Vec<Option<usize>> = (0..self.coeffs.len()).map(Some).collect();
        let mut coeffs: Vec<LaurentPoly> =
            self.coeffs.iter().map(|c| c.embed(target.vars(), &map)).collect();
        coeffs.resize(target.dim_ambient(), target.zero());
        VectorField {
            chart: target.clone(),
            coeffs,
        }
    }
}

impl fmt::Display for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            write!(f, "({}) d/d{}", c, self.chart.coordinate_name(i))?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Sorted blade positions into `chart.free()`.
pub type Blade = Vec<usize>;

/// A homogeneous differential form in the free coordinates.
#[derive(Clone, Debug)]
pub struct DiffForm {
    chart: Arc<Chart>,
    degree: usize,
    coeffs: BTreeMap<Blade, LaurentPoly>,
}

impl PartialEq for DiffForm {
    fn eq(&self, other: &Self) -> bool {
        *self.chart == *other.chart && self.degree == other.degree && self.coeffs == other.coeffs
    }
}

/// Sign of the permutation sorting `v`, or `None` on a repeated entry.
fn sort_sign(v: &mut [usize]) -> Option<i32> {
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if v.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

impl DiffForm {
    pub fn zero(chart: &Arc<Chart>, degree: usize) -> Self {
        DiffForm {
            chart: chart.clone(),
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// The 0-form `f`.
    pub fn function(chart: &Arc<Chart>, f: &LaurentPoly) -> Result<Self> {
        chart.check_laurent_support(f)?;
        let mut out = Self::zero(chart, 0);
        out.push(vec![], chart.normal_form(f)?);
        Ok(out)
    }

    /// `f dx_{I}` for a blade of free positions in any order.
    pub fn monomial(chart: &Arc<Chart>, f: &LaurentPoly, blade: &[usize]) -> Result<Self> {
        chart.check_laurent_support(f)?;
        let mut b = blade.to_vec();
        let mut out = Self::zero(chart, b.len());
        if b.iter().any(|&k| k >= chart.dim()) {
            return Err(CalculusError::DegreeMismatch {
                expected: chart.dim(),
                got: b.len(),
            });
        }
        if let Some(s) = sort_sign(&mut b) {
            let f = chart.normal_form(f)?;
            out.push(b, if s < 0 { -&f } else { f });
        }
        Ok(out)
    }

    /// `d x_i` for an ambient coordinate; solvable coordinates expand
    /// through their solution.
    pub fn differential(chart: &Arc<Chart>, i: usize) -> Self {
        match chart.free_position(i) {
            Some(k) => {
                let mut out = Self::zero(chart, 1);
                out.push(vec![k], chart.one());
                out
            }
            None => Self::function(chart, &LaurentPoly::var_index(chart.vars(), i))
                .expect("coordinate lives on its chart")
                .d(),
        }
    }

    fn push(&mut self, blade: Blade, c: LaurentPoly) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(blade) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Blade, &LaurentPoly)> {
        self.coeffs.iter()
    }

    pub fn coefficient(&self, blade: &[usize]) -> LaurentPoly {
        self.coeffs
            .get(blade)
            .cloned()
            .unwrap_or_else(|| self.chart.zero())
    }

    /// The scalar of a 0-form, or the single coefficient of a top form.
    pub fn top_coefficient(&self) -> LaurentPoly {
        let blade: Blade = (0..self.degree).collect();
        self.coefficient(&blade)
    }

    pub fn add(&self, other: &DiffForm) -> Result<DiffForm> {
        same_chart(&self.chart, &other.chart)?;
        if self.degree != other.degree {
            return Err(CalculusError::DegreeMismatch {
                expected: self.degree,
                got: other.degree,
            });
        }
        let mut out = self.clone();
        for (b, c) in &other.coeffs {
            out.push(b.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &DiffForm) -> Result<DiffForm> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> DiffForm {
        self.scale_rational(&-Rational::one())
    }

    pub fn scale_rational(&self, c: &Rational) -> DiffForm {
        let mut out = Self::zero(&self.chart, self.degree);
        for (b, p) in &self.coeffs {
            out.push(b.clone(), p.scale(c));
        }
        out
    }

    pub fn scale(&self, f: &LaurentPoly) -> DiffForm {
        let f = self.chart.nf(f);
        let mut out = Self::zero(&self.chart, self.degree);
        for (b, p) in &self.coeffs {
            out.push(b.clone(), self.chart.nf(&(p * &f)));
        }
        out
    }

    /// Graded-antisymmetric product; degree overflow gives the zero form.
    pub fn wedge(&self, other: &DiffForm) -> Result<DiffForm> {
        same_chart(&self.chart, &other.chart)?;
        let mut out = Self::zero(&self.chart, self.degree + other.degree);
        for (b1, c1) in &self.coeffs {
            for (b2, c2) in &other.coeffs {
                let mut b: Blade = b1.iter().chain(b2).copied().collect();
                if let Some(s) = sort_sign(&mut b) {
                    let c = self.chart.nf(&(c1 * c2));
                    out.push(b, if s < 0 { -&c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// `d(f dx_I) = Σ_j ∂f/∂x_j dx_j ∧ dx_I`.
    pub fn d(&self) -> DiffForm {
        let free = self.chart.free();
        let mut out = Self::zero(&self.chart, self.degree + 1);
        for (b, c) in &self.coeffs {
            for (j, &amb) in free.iter().enumerate() {
                if b.contains(&j) || !c.involves(amb) {
                    continue;
                }
                let before = b.iter().filter(|&&k| k < j).count();
                let mut nb = b.clone();
                nb.insert(before, j);
                let p = c.partial_index(amb);
                out.push(nb, if before % 2 == 1 { -&p } else { p });
            }
        }
        out
    }

    pub fn is_closed(&self) -> bool {
        self.d().is_zero()
    }

    /// Contraction in the first slot:
    /// `ι_ξ(f dx_I) = Σ_r (−1)^r ξ(x_{I_r}) f dx_{I∖I_r}`.
    pub fn interior(&self, xi: &VectorField) -> Result<DiffForm> {
        same_chart(&self.chart, &xi.chart)?;
        if self.degree == 0 {
            return Ok(Self::zero(&self.chart, 0));
        }
        let free = self.chart.free();
        let mut out = Self::zero(&self.chart, self.degree - 1);
        for (b, c) in &self.coeffs {
            for (r, &k) in b.iter().enumerate() {
                let comp = &xi.coeffs[free[k]];
                if comp.is_zero() {
                    continue;
                }
                let mut nb = b.clone();
                nb.remove(r);
                let p = self.chart.nf(&(comp * c));
                out.push(nb, if r % 2 == 1 { -&p } else { p });
            }
        }
        Ok(out)
    }

    /// `L_ξ = d ι_ξ + ι_ξ d`.
    pub fn lie_derivative(&self, xi: &VectorField) -> Result<DiffForm> {
        let a = self.interior(xi)?.d();
        let b = self.d().interior(xi)?;
        if self.degree == 0 {
            return Ok(b);
        }
        a.add(&b)
    }

    /// `σ^*` for a substitution action.
    pub fn pullback(&self, action: &SubstitutionAction) -> Result<DiffForm> {
        let chart = &self.chart;
        let free = chart.free();
        let images: Vec<DiffForm> = free
            .iter()
            .map(|&i| DiffForm::function(chart, &action.images()[i]).map(|f| f.d()))
            .collect::<Result<_>>()?;
        let mut out = Self::zero(chart, self.degree);
        for (b, c) in &self.coeffs {
            let mut term = DiffForm::function(chart, &action.apply(chart, c)?)?;
            for &k in b {
                term = term.wedge(&images[k])?;
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// `c` with `σ^* α = c·α`, if the pullback is a constant multiple.
    pub fn character(&self, action: &SubstitutionAction) -> Result<Option<Rational>> {
        let pulled = self.pullback(action)?;
        let Some((b, c)) = self.coeffs.iter().next() else {
            return Ok(Some(Rational::one()));
        };
        let pc = pulled.coefficient(b);
        let Some((lm, lc)) = c.leading_term() else {
            return Ok(None);
        };
        let ratio = pc.coefficient(lm) / lc;
        if pulled == self.scale_rational(&ratio) {
            Ok(Some(ratio))
        } else {
            Ok(None)
        }
    }

    /// Values of the coefficients at a point, keyed by blade.
    pub fn at(&self, point: &crate::variety::Point) -> Result<BTreeMap<Blade, Rational>> {
        let mut out = BTreeMap::new();
        for (b, c) in &self.coeffs {
            let v = self.chart.evaluate(c, point)?;
            if !v.is_zero() {
                out.insert(b.clone(), v);
            }
        }
        Ok(out)
    }
}

impl fmt::Display for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        let free = self.chart.free();
        for (k, (b, c)) in self.coeffs.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if b.is_empty() {
                write!(f, "({})", c)?;
            } else {
                let diffs: Vec<String> = b
                    .iter()
                    .map(|&j| format!("d{}", self.chart.coordinate_name(free[j])))
                    .collect();
                write!(f, "({}) {}", c, diffs.join("^"))?;
            }
        }
        Ok(())
    }
}

/// A top-degree form whose coefficient is a constant times a unit
/// monomial in invertible free coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct VolumeForm {
    form: DiffForm,
    coeff_inverse: LaurentPoly,
}

impl VolumeForm {
    pub fn new(form: DiffForm) -> Result<Self> {
        let chart = form.chart.clone();
        if form.degree != chart.dim() {
            return Err(CalculusError::DegreeMismatch {
                expected: chart.dim(),
                got: form.degree,
            });
        }
        let c = form.top_coefficient();
        let ok = c.as_unit().is_some_and(|(_, m)| {
            m.exponents()
                .iter()
                .enumerate()
                .all(|(i, &e)| e == 0 || (chart.is_invertible(i) && !chart.is_solvable(i)))
        });
        if !ok {
            return Err(CalculusError::NonUnitVolume(c.to_string()));
        }
        let coeff_inverse = c.inverse_unit().expect("unit checked above");
        Ok(VolumeForm {
            form,
            coeff_inverse,
        })
    }

    pub fn form(&self) -> &DiffForm {
        &self.form
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.form.chart
    }

    pub fn coefficient(&self) -> LaurentPoly {
        self.form.top_coefficient()
    }

    /// `g` with `L_ξ ω = g·ω`.
    pub fn divergence(&self, xi: &VectorField) -> Result<LaurentPoly> {
        let l = self.form.interior(xi)?.d();
        Ok(&l.top_coefficient() * &self.coeff_inverse)
    }

    /// `Θ(ξ) = ι_ξ ω`.
    pub fn theta(&self, xi: &VectorField) -> Result<DiffForm> {
        self.form.interior(xi)
    }

    /// `ω₁ × ω₂` on a product chart, given embeddings of both factors.
    pub fn product(&self, other: &VolumeForm, target: &Arc<Chart>, left: &[Option<usize>], right: &[Option<usize>]) -> Result<VolumeForm> {
        let a = embed_form(&self.form, target, left)?;
        let b = embed_form(&other.form, target, right)?;
        VolumeForm::new(a.wedge(&b)?)
    }
}

/// Transports a form to a chart whose coordinates contain the source's,
/// `map[i]` giving the target index of source coordinate `i`.
pub fn embed_form(form: &DiffForm, target: &Arc<Chart>, map: &[Option<usize>]) -> Result<DiffForm> {
    let src = &form.chart;
    let mut out = DiffForm::zero(target, form.degree);
    for (b, c) in &form.coeffs {
        let mut term = DiffForm::function(target, &c.embed(target.vars(), map))?;
        for &k in b {
            let i = map[src.free()[k]].expect("embedding covers every coordinate");
            term = term.wedge(&DiffForm::differential(target, i))?;
        }
        out = out.add(&term)?;
    }
    Ok(out)
}

/// Transports a field; the target chart must keep the source's solvable
/// structure on the embedded coordinates.
pub fn embed_field(field: &VectorField, target: &Arc<Chart>, map: &[Option<usize>]) -> Result<VectorField> {
    let mut coeffs = vec![target.zero(); target.dim_ambient()];
    for (i, c) in field.coeffs.iter().enumerate() {
        let j = map[i].expect("embedding covers every coordinate");
        coeffs[j] = c.embed(target.vars(), map);
    }
    VectorField::new(target, coeffs)
}

/// The flow `exp(tξ)` of a locally nilpotent field, as coordinate images
/// over the chart extended by the parameter.
#[derive(Clone, Debug)]
pub struct Flow {
    chart: Arc<Chart>,
    images: Vec<LaurentPoly>,
    depth: usize,
}

impl Flow {
    /// Extended chart: the original coordinates followed by the parameter.
    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn images(&self) -> &[LaurentPoly] {
        &self.images
    }

    /// Largest `k` with `ξ^k(x_i) ≠ 0` over all coordinates.
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Images with the parameter specialised to `t`, over the original
    /// variable list.
    pub fn at(&self, base: &Arc<Chart>, t: &Rational) -> Result<Vec<LaurentPoly>> {
        let n = base.dim_ambient();
        let mut subs: Vec<LaurentPoly> = (0..n)
            .map(|i| LaurentPoly::var_index(base.vars(), i))
            .collect();
        subs.push(base.constant(t.clone()));
        self.images
            .iter()
            .map(|p| Ok(base.normal_form(&p.substitute_all(&subs)?)?))
            .collect()
    }
}

/// `exp(tξ)(x_i) = Σ_{k ≤ bound} t^k ξ^k(x_i) / k!`, failing unless
/// `ξ^{bound+1}(x_i) = 0` for every coordinate.
pub fn lnd_flow(xi: &VectorField, t: &str, bound: usize) -> Result<Flow> {
    let base = &xi.chart;
    let ext = Arc::new(base.with_parameters(&[t])?);
    let field = xi.lift_to(&ext);
    let tpoly = LaurentPoly::var_index(ext.vars(), ext.dim_ambient() - 1);
    let mut images = Vec::with_capacity(base.dim_ambient());
    let mut depth = 0;
    for i in 0..base.dim_ambient() {
        let mut g = ext.nf(&LaurentPoly::var_index(ext.vars(), i));
        let mut image = ext.zero();
        let mut k = 0;
        while !g.is_zero() {
            if k > bound {
                return Err(CalculusError::NotNilpotent {
                    var: base.coordinate_name(i).to_string(),
                    bound,
                });
            }
            let term = (&tpoly.pow(k as u32) * &g).scale(&factorial(k).recip());
            image = &image + &term;
            depth = depth.max(k);
            g = field.apply(&g);
            k += 1;
        }
        images.push(image);
    }
    Ok(Flow {
        chart: ext,
        images,
        depth,
    })
}

impl Invariance for VectorField {
    /// `σ` preserves `ξ` iff `ξ(x_i ∘ σ) = ξ(x_i) ∘ σ` for every coordinate.
    fn is_invariant(&self, action: &SubstitutionAction, chart: &Chart) -> std::result::Result<bool, ChartError> {
        for (i, img) in action.images().iter().enumerate() {
            let lhs = self.apply(img);
            let rhs = action.apply(chart, &self.coeffs[i])?;
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl Invariance for DiffForm {
    fn is_invariant(&self, action: &SubstitutionAction, _chart: &Chart) -> std::result::Result<bool, ChartError> {
        match self.pullback(action) {
            Ok(p) => Ok(p == *self),
            Err(CalculusError::Chart(e)) => Err(e),
            Err(CalculusError::Algebra(e)) => Err(e.into()),
            Err(_) => Ok(false),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Vars;

    fn var(vars: &Vars, name: &str) -> LaurentPoly {
        LaurentPoly::var(vars, name).expect("known variable")
    }
    use crate::algebra::rational::rat;

    fn surface() -> Arc<Chart> {
        let vars = Vars::new(["x", "y", "z"]);
        let (x, y, z) = (var(&vars, "x"), var(&vars, "y"), var(&vars, "z"));
        let f = &(&(&x + &y) + &(&(&x * &y) * &z)) - &LaurentPoly::one(&vars);
        Arc::new(Chart::new(&[("x", true), ("y", true), ("z", false)], vec![(f, "z")]).unwrap())
    }

    fn omega(s: &Arc<Chart>) -> VolumeForm {
        let c = (&s.var("x").unwrap() * &s.var("y").unwrap()).inverse_unit().unwrap();
        VolumeForm::new(DiffForm::monomial(s, &c, &[0, 1]).unwrap()).unwrap()
    }

    fn deltas(s: &Arc<Chart>) -> [VectorField; 3] {
        let v = |n| s.var(n).unwrap();
        let one = s.one();
        let xz = &v("x") * &v("z");
        let yz = &v("y") * &v("z");
        let xy = &v("x") * &v("y");
        let dz = VectorField::new(s, vec![&one + &xz, -&(&one + &yz), s.zero()]).unwrap();
        let dy = VectorField::new(s, vec![-&xy, s.zero(), &one + &yz]).unwrap();
        let dx = VectorField::new(s, vec![s.zero(), -&xy, &one + &xz]).unwrap();
        [dx, dy, dz]
    }

    #[test]
    fn contraction_of_surface_form() {
        let s = surface();
        let w = omega(&s);
        let [_, dy, _] = deltas(&s);
        let iota = w.theta(&dy).unwrap();
        let expected = DiffForm::differential(&s, 1).neg();
        assert_eq!(iota, expected);
    }

    #[test]
    fn surface_fields_divergence_free() {
        let s = surface();
        let w = omega(&s);
        for f in deltas(&s) {
            assert!(w.divergence(&f).unwrap().is_zero());
        }
    }

    #[test]
    fn lie_derivative_of_y_along_delta_z() {
        let s = surface();
        let [_, _, dz] = deltas(&s);
        let y = DiffForm::function(&s, &s.var("y").unwrap()).unwrap();
        let l = y.lie_derivative(&dz).unwrap();
        let expected = -&(&s.one() + &(&s.var("y").unwrap() * &s.var("z").unwrap()));
        assert_eq!(l.top_coefficient(), s.normal_form(&expected).unwrap());
    }

    #[test]
    fn d_of_yz_is_bracket_theta() {
        let s = surface();
        let w = omega(&s);
        let [_, dy, dz] = deltas(&s);
        let br = dz.bracket(&dy).unwrap();
        let yz = DiffForm::function(&s, &(&s.var("y").unwrap() * &s.var("z").unwrap())).unwrap();
        assert_eq!(yz.d(), w.theta(&br).unwrap());
    }

    #[test]
    fn dd_and_wedge_basics() {
        let s = surface();
        let dx = DiffForm::differential(&s, 0);
        assert!(dx.wedge(&dx).unwrap().is_zero());
        let dz = DiffForm::differential(&s, 2);
        assert!(dz.d().is_zero());
        assert_eq!(dz.degree(), 1);
        let f = DiffForm::function(&s, &s.var("z").unwrap().pow(3)).unwrap();
        assert!(f.d().d().is_zero());
    }

    #[test]
    fn flows() {
        let vars = Vars::new(["a1", "a2", "b1", "b2"]);
        let v = |n| var(&vars, n);
        let f = &(&(&v("a1") * &v("b2")) - &(&v("a2") * &v("b1"))) - &LaurentPoly::one(&vars);
        let g = Arc::new(
            Chart::new(&[("a1", true), ("a2", false), ("b1", false), ("b2", false)], vec![(f, "b2")]).unwrap(),
        );
        let xi = VectorField::new(&g, vec![v("b1"), v("b2"), g.zero(), g.zero()]).unwrap();
        let flow = lnd_flow(&xi, "t", 32).unwrap();
        let t = flow.chart().var("t").unwrap();
        let e = |n| flow.chart().var(n).unwrap();
        assert_eq!(flow.images()[0], &e("a1") + &(&t * &e("b1")));
        assert_eq!(flow.images()[2], e("b1"));
        let at1 = flow.at(&g, &rat(1)).unwrap();
        assert_eq!(at1[0], &v("a1") + &v("b1"));

        let torus = Arc::new(Chart::new(&[("z1", true)], vec![]).unwrap());
        let nu = VectorField::new(&torus, vec![torus.var("z1").unwrap()]).unwrap();
        assert!(matches!(lnd_flow(&nu, "t", 32), Err(CalculusError::NotNilpotent { .. })));
        let zero = VectorField::zero(&torus);
        assert_eq!(lnd_flow(&zero, "t", 32).unwrap().depth(), 0);
    }

    #[test]
    fn non_tangent_rejected() {
        let s = surface();
        assert!(matches!(
            VectorField::new(&s, vec![s.one(), s.zero(), s.zero()]),
            Err(CalculusError::NotTangent(_))
        ));
    }

    #[test]
    fn from_free_matches_ambient() {
        let s = surface();
        let [dx, dy, dz] = deltas(&s);
        for f in [dx, dy, dz] {
            assert_eq!(VectorField::from_free(&s, f.free_components()).unwrap(), f);
        }
    }
}
