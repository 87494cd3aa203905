//! Sub-modular functions of matrix groups: the determinant of the adjoint
//! action of `h` on the Lie algebra of a subgroup.

use indexmap::IndexMap;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::{Matrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("matrix is not invertible")]
    NotInvertible,
    #[error("expected a {expected}x{expected} matrix, got {rows}x{cols}")]
    Shape {
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("Lie algebra basis is linearly dependent")]
    DependentBasis,
    #[error("span of the basis is not stable under conjugation by the element")]
    NotStable,
    #[error("unknown element `{0}`")]
    UnknownElement(String),
}

pub type Result<T> = std::result::Result<T, GroupError>;

fn check_shape(m: &Matrix, n: usize) -> Result<()> {
    if m.rows() == n && m.cols() == n {
        Ok(())
    } else {
        Err(GroupError::Shape {
            expected: n,
            rows: m.rows(),
            cols: m.cols(),
        })
    }
}

/// Columns are the flattened basis matrices.
fn basis_matrix(basis: &[Matrix]) -> Matrix {
    let len = basis.first().map_or(0, |b| b.rows() * b.cols());
    let cols: Vec<Vec<Rational>> = basis.iter().map(|b| b.entries().to_vec()).collect();
    Matrix::from_columns(&cols, len)
}

/// Matrix of `B ↦ h·B·h⁻¹` on `span(basis)`, in that basis.
pub fn adjoint_matrix(h: &Matrix, basis: &[Matrix]) -> Result<Matrix> {
    let n = h.rows();
    check_shape(h, n)?;
    for b in basis {
        check_shape(b, n)?;
    }
    let inv = h.inverse().ok_or(GroupError::NotInvertible)?;
    let coords = basis_matrix(basis);
    if coords.rank() != basis.len() {
        return Err(GroupError::DependentBasis);
    }
    let mut cols = Vec::with_capacity(basis.len());
    for b in basis {
        let conj = h.mul(b).mul(&inv);
        let c = coords.solve(conj.entries()).ok_or(GroupError::NotStable)?;
        cols.push(c);
    }
    Ok(Matrix::from_columns(&cols, basis.len()))
}

/// `Δ̃(h) = det Ad_h` on `span(basis)`.
pub fn submodular(h: &Matrix, basis: &[Matrix]) -> Result<Rational> {
    Ok(adjoint_matrix(h, basis)?.determinant())
}

/// Matrix group data: a Lie-algebra basis and named test elements.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupPresentation {
    size: usize,
    basis: Vec<Matrix>,
    elements: IndexMap<String, Matrix>,
}

impl GroupPresentation {
    pub fn new(size: usize, basis: Vec<Matrix>, elements: IndexMap<String, Matrix>) -> Result<Self> {
        for b in &basis {
            check_shape(b, size)?;
        }
        if basis_matrix(&basis).rank() != basis.len() {
            return Err(GroupError::DependentBasis);
        }
        for h in elements.values() {
            adjoint_matrix(h, &basis)?;
        }
        Ok(GroupPresentation {
            size,
            basis,
            elements,
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn basis(&self) -> &[Matrix] {
        &self.basis
    }

    pub fn elements(&self) -> &IndexMap<String, Matrix> {
        &self.elements
    }

    pub fn element(&self, name: &str) -> Result<&Matrix> {
        self.elements
            .get(name)
            .ok_or_else(|| GroupError::UnknownElement(name.to_string()))
    }

    pub fn submodular(&self, h: &Matrix) -> Result<Rational> {
        submodular(h, &self.basis)
    }

    /// Checks `Δ̃(gh) = Δ̃(g)Δ̃(h)` over all ordered pairs of test elements,
    /// `Δ̃(h⁻¹) = Δ̃(h)⁻¹`, and `Δ̃(1) = 1`. Returns the first violation.
    pub fn character_violation(&self) -> Result<Option<String>> {
        let one = submodular(&Matrix::identity(self.size), &self.basis)?;
        if one != Rational::from_integer(1.into()) {
            return Ok(Some(format!("value at identity is {one}")));
        }
        let values: Vec<(&String, &Matrix, Rational)> = self
            .elements
            .iter()
            .map(|(n, h)| Ok((n, h, self.submodular(h)?)))
            .collect::<Result<_>>()?;
        for (n, h, v) in &values {
            let inv = h.inverse().ok_or(GroupError::NotInvertible)?;
            if self.submodular(&inv)? * v != Rational::from_integer(1.into()) {
                return Ok(Some(format!("inverse of `{n}`")));
            }
            for (m, g, w) in &values {
                let prod = self.submodular(&h.mul(g))?;
                if prod != v * w {
                    return Ok(Some(format!("product `{n}`·`{m}`")));
                }
            }
        }
        Ok(None)
    }
}

/// Standard `sl₂` basis `E₁₂, E₂₁, diag(1, −1)`.
pub fn sl2_basis() -> Vec<Matrix> {
    let r = |v: i64| Rational::from_integer(v.into());
    vec![
        Matrix::from_rows(vec![vec![r(0), r(1)], vec![r(0), r(0)]]),
        Matrix::from_rows(vec![vec![r(0), r(0)], vec![r(1), r(0)]]),
        Matrix::from_rows(vec![vec![r(1), r(0)], vec![r(0), r(-1)]]),
    ]
}

/// Random element of `SL₂(ℚ)`: `a`, `b`, `c` drawn nonzero from
/// `[-9, 9]` and `d = (1 + bc)/a`.
pub fn random_sl2(rng: &mut impl Rng) -> Matrix {
    let mut draw = || {
        let k: i64 = rng.gen_range(1..=9);
        let s = if rng.gen_bool(0.5) { -1 } else { 1 };
        Rational::from_integer((s * k).into())
    };
    let (a, b, c) = (draw(), draw(), draw());
    let d = (Rational::from_integer(1.into()) + &b * &c) / &a;
    Matrix::from_rows(vec![vec![a, b], vec![c, d]])
}

/// `count` seeded random elements of `SL₂(ℚ)`.
pub fn sl2_samples(seed: u64, count: usize) -> Vec<Matrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_sl2(&mut rng)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{rat, ratio};

    fn m(rows: Vec<Vec<Rational>>) -> Matrix {
        Matrix::from_rows(rows)
    }

    #[test]
    fn borel_pair() {
        let h = m(vec![vec![rat(2), rat(0)], vec![rat(0), ratio(1, 2)]]);
        let e12 = m(vec![vec![rat(0), rat(1)], vec![rat(0), rat(0)]]);
        let ad = adjoint_matrix(&h, std::slice::from_ref(&e12)).unwrap();
        assert_eq!(ad, m(vec![vec![rat(4)]]));
        assert_eq!(submodular(&h, std::slice::from_ref(&e12)).unwrap(), rat(4));
        assert_eq!(adjoint_matrix(&Matrix::identity(2), &[e12]).unwrap(), Matrix::identity(1));
    }

    #[test]
    fn weyl_element_on_torus() {
        let a0 = m(vec![vec![rat(0), rat(-1)], vec![rat(1), rat(0)]]);
        let h = m(vec![vec![rat(1), rat(0)], vec![rat(0), rat(-1)]]);
        assert_eq!(submodular(&a0, &[h]).unwrap(), rat(-1));
    }

    #[test]
    fn reductive_is_unimodular() {
        for h in sl2_samples(7, 10) {
            assert_eq!(h.determinant(), rat(1));
            assert_eq!(submodular(&h, &sl2_basis()).unwrap(), rat(1));
        }
    }

    #[test]
    fn instability_detected() {
        let a0 = m(vec![vec![rat(0), rat(-1)], vec![rat(1), rat(0)]]);
        let e12 = m(vec![vec![rat(0), rat(1)], vec![rat(0), rat(0)]]);
        assert_eq!(adjoint_matrix(&a0, &[e12]), Err(GroupError::NotStable));
        let sing = m(vec![vec![rat(1), rat(1)], vec![rat(1), rat(1)]]);
        assert_eq!(submodular(&sing, &sl2_basis()), Err(GroupError::NotInvertible));
    }
}
