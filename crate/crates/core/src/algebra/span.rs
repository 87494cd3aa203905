//! Finite-dimensional subspaces of a Laurent polynomial ring, kept in
//! reduced row echelon form with respect to the graded-lex leading term.

use num_traits::Zero;

use super::poly::{LaurentPoly, Monomial, Vars};

#[derive(Clone, Debug)]
pub struct PolySpan {
    vars: Vars,
    // Each row is monic in its pivot, and no pivot occurs in any other row.
    rows: Vec<(Monomial, LaurentPoly)>,
}

impl PolySpan {
    pub fn new(vars: &Vars) -> Self {
        PolySpan {
            vars: vars.clone(),
            rows: Vec::new(),
        }
    }

    pub fn from_polys<'a>(vars: &Vars, polys: impl IntoIterator<Item = &'a LaurentPoly>) -> Self {
        let mut s = Self::new(vars);
        for p in polys {
            s.insert(p);
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Echelon basis, pivots descending.
    pub fn basis(&self) -> impl Iterator<Item = &LaurentPoly> {
        self.rows.iter().map(|(_, p)| p)
    }

    pub fn pivots(&self) -> impl Iterator<Item = &Monomial> {
        self.rows.iter().map(|(m, _)| m)
    }

    pub fn reduce(&self, p: &LaurentPoly) -> LaurentPoly {
        let mut r = p.clone();
        for (m, row) in &self.rows {
            let c = r.coefficient(m);
            if !c.is_zero() {
                r = &r - &row.scale(&c);
            }
        }
        r
    }

    pub fn contains(&self, p: &LaurentPoly) -> bool {
        self.reduce(p).is_zero()
    }

    pub fn contains_span(&self, other: &PolySpan) -> bool {
        other.basis().all(|p| self.contains(p))
    }

    /// Adds `p` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, p: &LaurentPoly) -> bool {
        debug_assert!(p.vars().same(&self.vars));
        let r = self.reduce(p);
        let Some((lead, c)) = r.leading_term() else {
            return false;
        };
        let lead = lead.clone();
        let r = r.scale(&c.recip());
        for (_, row) in self.rows.iter_mut() {
            let k = row.coefficient(&lead);
            if !k.is_zero() {
                *row = &*row - &r.scale(&k);
            }
        }
        let pos = self.rows.partition_point(|(m, _)| *m > lead);
        self.rows.insert(pos, (lead, r));
        true
    }
}

impl PartialEq for PolySpan {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
    }
}
