//! Surfaces `p(x) + q(y) + xyz = 1` and their monomial decomposition.

use std::sync::Arc;

use num_traits::{One, Zero};

use super::{AvdpError, Result};
use crate::algebra::{LaurentPoly, Monomial, Rational, Vars};
use crate::calculus::{DiffForm, VectorField, VolumeForm};
use crate::variety::Chart;

#[derive(Clone, Debug)]
pub struct Surface {
    chart: Arc<Chart>,
    x: usize,
    y: usize,
    z: usize,
    p: LaurentPoly,
    q: LaurentPoly,
}

fn only_in(p: &LaurentPoly, i: usize) -> bool {
    p.terms().all(|(m, _)| {
        m.exponents()
            .iter()
            .enumerate()
            .all(|(k, &e)| if k == i { e >= 0 } else { e == 0 })
    })
}

impl Surface {
    /// The chart `{x*, y*, z : p + q + xyz − 1, solve z}` over the variable
    /// list of `p` and `q`, which must be `[x, y, z]` in that order.
    pub fn new(p: &LaurentPoly, q: &LaurentPoly) -> Result<Surface> {
        let vars = p.vars().clone();
        if vars.len() != 3 || !q.vars().same(&vars) {
            return Err(AvdpError::NotSurface("expected coordinates x, y, z".into()));
        }
        if !only_in(p, 0) || !p.coefficient(&Monomial::one(3)).is_zero() {
            return Err(AvdpError::NotSurface(format!("p = {p} must be a polynomial in x with p(0) = 0")));
        }
        if !only_in(q, 1) || !q.coefficient(&Monomial::one(3)).is_zero() {
            return Err(AvdpError::NotSurface(format!("q = {q} must be a polynomial in y with q(0) = 0")));
        }
        let x = LaurentPoly::var_index(&vars, 0);
        let y = LaurentPoly::var_index(&vars, 1);
        let z = LaurentPoly::var_index(&vars, 2);
        let rel = &(&(p + q) + &(&(&x * &y) * &z)) - &LaurentPoly::one(&vars);
        let names: Vec<&str> = vars.names().iter().map(String::as_str).collect();
        let chart = Chart::new(&[(names[0], true), (names[1], true), (names[2], false)], vec![(rel, names[2])])?;
        Ok(Surface {
            chart: Arc::new(chart),
            x: 0,
            y: 1,
            z: 2,
            p: p.clone(),
            q: q.clone(),
        })
    }

    /// Recognises a chart of the form `c·(p(x) + q(y) + xyz − 1)`.
    pub fn from_chart(chart: &Arc<Chart>) -> Result<Surface> {
        let fail = |why: &str| AvdpError::NotSurface(why.to_string());
        if chart.dim_ambient() != 3 || chart.relations().len() != 1 {
            return Err(fail("expected three coordinates and one relation"));
        }
        let rel = &chart.relations()[0];
        let z = rel.solve_for;
        let others: Vec<usize> = (0..3).filter(|&i| i != z).collect();
        let (x, y) = (others[0], others[1]);
        let (a, b) = rel.poly.split_linear(z).ok_or_else(|| fail("relation not linear"))?;
        let vars = chart.vars();
        let xy = &LaurentPoly::var_index(vars, x) * &LaurentPoly::var_index(vars, y);
        let Some((c, m)) = a.as_unit() else {
            return Err(fail("coefficient of the solvable coordinate is not a monomial"));
        };
        if xy.as_unit().map(|(_, n)| n) != Some(m) {
            return Err(fail("coefficient of the solvable coordinate is not a multiple of xy"));
        }
        let rest = b.scale(&c.recip());
        if rest.coefficient(&Monomial::one(3)) != -Rational::one() {
            return Err(fail("constant term must be −1"));
        }
        let mut p = LaurentPoly::zero(vars);
        let mut q = LaurentPoly::zero(vars);
        for (mono, coeff) in rest.terms() {
            if mono.is_one() {
                continue;
            }
            let t = LaurentPoly::term(vars, mono.clone(), coeff.clone());
            if only_in(&t, x) {
                p = &p + &t;
            } else if only_in(&t, y) {
                q = &q + &t;
            } else {
                return Err(fail("mixed term outside xyz"));
            }
        }
        Ok(Surface {
            chart: chart.clone(),
            x,
            y,
            z,
            p,
            q,
        })
    }

    pub fn chart(&self) -> &Arc<Chart> {
        &self.chart
    }

    pub fn p(&self) -> &LaurentPoly {
        &self.p
    }

    pub fn q(&self) -> &LaurentPoly {
        &self.q
    }

    fn v(&self, i: usize) -> LaurentPoly {
        LaurentPoly::var_index(self.chart.vars(), i)
    }

    fn field(&self, entries: [(usize, LaurentPoly); 2]) -> VectorField {
        let mut coeffs = vec![self.chart.zero(); 3];
        for (i, c) in entries {
            coeffs[i] = c;
        }
        VectorField::new(&self.chart, coeffs).expect("surface fields are tangent")
    }

    /// `δ_z = (q′ + xz)∂_x − (p′ + yz)∂_y`.
    pub fn delta_z(&self) -> VectorField {
        let (x, y, z) = (self.v(self.x), self.v(self.y), self.v(self.z));
        let qp = self.q.partial_index(self.y);
        let pp = self.p.partial_index(self.x);
        self.field([(self.x, &qp + &(&x * &z)), (self.y, -&(&pp + &(&y * &z)))])
    }

    /// `δ_y = −xy∂_x + (p′ + yz)∂_z`.
    pub fn delta_y(&self) -> VectorField {
        let (x, y, z) = (self.v(self.x), self.v(self.y), self.v(self.z));
        let pp = self.p.partial_index(self.x);
        self.field([(self.x, -&(&x * &y)), (self.z, &pp + &(&y * &z))])
    }

    /// `δ_x = −xy∂_y + (q′ + xz)∂_z`.
    pub fn delta_x(&self) -> VectorField {
        let (x, y, z) = (self.v(self.x), self.v(self.y), self.v(self.z));
        let qp = self.q.partial_index(self.y);
        self.field([(self.y, -&(&x * &y)), (self.z, &qp + &(&x * &z))])
    }

    /// `dx ∧ dy / (xy)`.
    pub fn omega(&self) -> VolumeForm {
        let c = (&self.v(self.x) * &self.v(self.y))
            .inverse_unit()
            .expect("monomial");
        let (fx, fy) = (
            self.chart.free_position(self.x).expect("x is free"),
            self.chart.free_position(self.y).expect("y is free"),
        );
        let form = DiffForm::monomial(&self.chart, &c, &[fx, fy]).expect("valid blade");
        VolumeForm::new(form).expect("unit coefficient")
    }

    /// Rewrites a polynomial in `x, y, z` as a combination of `1`, `x^i`,
    /// `y^i`, `z^i`, `x^i y^j`, `x^i z^j`, `y^i z^j`.
    pub fn decompose(&self, f: &LaurentPoly) -> Result<Formula4Decomposition> {
        if !f.vars().same(self.chart.vars()) || f.has_negative_exponents() {
            return Err(AvdpError::NotPolynomial(f.to_string()));
        }
        let vars = self.chart.vars();
        let tail = &(&LaurentPoly::one(vars) - &self.p) - &self.q;
        let mut reduced = LaurentPoly::zero(vars);
        let mut work = f.clone();
        // Each pass lowers the z-degree of every rewritten term.
        while !work.is_zero() {
            let mut next = LaurentPoly::zero(vars);
            for (m, c) in work.terms() {
                let e = m.exponents();
                if e[self.x] >= 1 && e[self.y] >= 1 && e[self.z] >= 1 {
                    let mut lowered = m.clone();
                    lowered.0[self.x] -= 1;
                    lowered.0[self.y] -= 1;
                    lowered.0[self.z] -= 1;
                    next = &next + &tail.mul_monomial(&lowered).scale(c);
                } else {
                    reduced = &reduced + &LaurentPoly::term(vars, m.clone(), c.clone());
                }
            }
            work = next;
        }
        Ok(Formula4Decomposition::from_reduced(&reduced, [self.x, self.y, self.z]))
    }

    /// The ambient polynomial given by a decomposition.
    pub fn reconstruct(&self, d: &Formula4Decomposition) -> LaurentPoly {
        d.to_poly(self.chart.vars(), [self.x, self.y, self.z])
    }
}

/// Coefficients of the unique expansion
/// `a₀ + Σ a_i x^i + Σ b_i y^i + Σ c_i z^i + Σ a_ij x^i y^j + Σ b_ij x^i z^j + Σ c_ij y^i z^j`.
/// Vectors and matrices are indexed from 1, stored from 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula4Decomposition {
    pub n: usize,
    pub a0: Rational,
    pub a: Vec<Rational>,
    pub b: Vec<Rational>,
    pub c: Vec<Rational>,
    pub a_ij: Vec<Vec<Rational>>,
    pub b_ij: Vec<Vec<Rational>>,
    pub c_ij: Vec<Vec<Rational>>,
}

impl Formula4Decomposition {
    pub fn zero(n: usize) -> Self {
        let v = vec![Rational::zero(); n];
        let m = vec![v.clone(); n];
        Formula4Decomposition {
            n,
            a0: Rational::zero(),
            a: v.clone(),
            b: v.clone(),
            c: v,
            a_ij: m.clone(),
            b_ij: m.clone(),
            c_ij: m,
        }
    }

    pub fn is_zero(&self) -> bool {
        let v0 = |v: &Vec<Rational>| v.iter().all(Zero::is_zero);
        self.a0.is_zero()
            && v0(&self.a)
            && v0(&self.b)
            && v0(&self.c)
            && self.a_ij.iter().all(v0)
            && self.b_ij.iter().all(v0)
            && self.c_ij.iter().all(v0)
    }

    /// Shrinks `n` to the largest exponent actually used.
    pub fn normalized(&self) -> Self {
        let nz = |v: &[Rational]| v.iter().rposition(|c| !c.is_zero()).map_or(0, |k| k + 1);
        let mut n = 0;
        for v in [&self.a, &self.b, &self.c] {
            n = n.max(nz(v));
        }
        for m in [&self.a_ij, &self.b_ij, &self.c_ij] {
            for (i, row) in m.iter().enumerate() {
                if row.iter().any(|c| !c.is_zero()) {
                    n = n.max(i + 1).max(nz(row));
                }
            }
        }
        let mut out = Self::zero(n);
        out.a0 = self.a0.clone();
        for i in 0..n.min(self.n) {
            out.a[i] = self.a[i].clone();
            out.b[i] = self.b[i].clone();
            out.c[i] = self.c[i].clone();
            for j in 0..n.min(self.n) {
                out.a_ij[i][j] = self.a_ij[i][j].clone();
                out.b_ij[i][j] = self.b_ij[i][j].clone();
                out.c_ij[i][j] = self.c_ij[i][j].clone();
            }
        }
        out
    }

    fn from_reduced(p: &LaurentPoly, [x, y, z]: [usize; 3]) -> Self {
        let n = p
            .terms()
            .flat_map(|(m, _)| m.exponents().iter().copied())
            .max()
            .unwrap_or(0)
            .max(0) as usize;
        let mut d = Self::zero(n);
        for (m, c) in p.terms() {
            let e = m.exponents();
            let (i, j, k) = (e[x] as usize, e[y] as usize, e[z] as usize);
            let c = c.clone();
            match (i > 0, j > 0, k > 0) {
                (false, false, false) => d.a0 = c,
                (true, false, false) => d.a[i - 1] = c,
                (false, true, false) => d.b[j - 1] = c,
                (false, false, true) => d.c[k - 1] = c,
                (true, true, false) => d.a_ij[i - 1][j - 1] = c,
                (true, false, true) => d.b_ij[i - 1][k - 1] = c,
                (false, true, true) => d.c_ij[j - 1][k - 1] = c,
                (true, true, true) => unreachable!("xyz-divisible terms are rewritten"),
            }
        }
        d
    }

    fn to_poly(&self, vars: &Vars, [x, y, z]: [usize; 3]) -> LaurentPoly {
        let mut out = LaurentPoly::constant(vars, self.a0.clone());
        let mut add = |exps: [(usize, usize); 2], c: &Rational| {
            if c.is_zero() {
                return;
            }
            let mut m = Monomial::one(vars.len());
            for (v, e) in exps {
                m.0[v] += e as i32;
            }
            out = &out + &LaurentPoly::term(vars, m, c.clone());
        };
        for i in 0..self.n {
            add([(x, i + 1), (y, 0)], &self.a[i]);
            add([(y, i + 1), (x, 0)], &self.b[i]);
            add([(z, i + 1), (x, 0)], &self.c[i]);
            for j in 0..self.n {
                add([(x, i + 1), (y, j + 1)], &self.a_ij[i][j]);
                add([(x, i + 1), (z, j + 1)], &self.b_ij[i][j]);
                add([(y, i + 1), (z, j + 1)], &self.c_ij[i][j]);
            }
        }
        out
    }
}
