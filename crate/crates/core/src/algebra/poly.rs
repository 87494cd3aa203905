//! Sparse multivariate Laurent polynomials over the rationals.
//!
//! A polynomial owns its (shared) variable list and a map from exponent
//! vectors to nonzero coefficients. Terms are kept in graded lexicographic
//! order, so two polynomials are equal iff their term maps are equal.

use std::cmp::Ordering;
use std::collections::{hash_map, BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use smallvec::SmallVec;

use super::rational::{format_rational, rat, Rational};
use super::AlgebraError;

/// Ordered list of variable names shared by every polynomial of a ring.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Self {
        Vars(names.into_iter().map(Into::into).collect::<Vec<_>>().into())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }

    pub fn same(&self, other: &Vars) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl fmt::Debug for Vars {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0.join(", "))
    }
}

/// Exponent vector, one entry per variable of the owning ring.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub SmallVec<[i32; 6]>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(SmallVec::from_elem(0, n))
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut m = Self::one(n);
        m.0[i] = 1;
        m
    }

    pub fn exponents(&self) -> &[i32] {
        &self.0
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn inverse(&self) -> Monomial {
        Monomial(self.0.iter().map(|e| -e).collect())
    }

    pub fn has_negative(&self) -> bool {
        self.0.iter().any(|&e| e < 0)
    }
}

impl Ord for Monomial {
    /// Graded lex: total degree first, then the first differing exponent.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    vars: Vars,
    terms: BTreeMap<Monomial, Rational>,
}

impl LaurentPoly {
    pub fn zero(vars: &Vars) -> Self {
        LaurentPoly {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, rat(1))
    }

    pub fn constant(vars: &Vars, c: Rational) -> Self {
        Self::term(vars, Monomial::one(vars.len()), c)
    }

    pub fn term(vars: &Vars, m: Monomial, c: Rational) -> Self {
        debug_assert_eq!(m.0.len(), vars.len());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        LaurentPoly {
            vars: vars.clone(),
            terms,
        }
    }

    pub fn var(vars: &Vars, name: &str) -> Result<Self, AlgebraError> {
        let i = vars
            .index_of(name)
            .ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))?;
        Ok(Self::var_index(vars, i))
    }

    pub fn var_index(vars: &Vars, i: usize) -> Self {
        Self::term(vars, Monomial::var(vars.len(), i), rat(1))
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs; repeated
    /// exponents are summed.
    pub fn from_terms(
        vars: &Vars,
        terms: impl IntoIterator<Item = (Vec<i32>, Rational)>,
    ) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent vector length");
            p.add_term(Monomial(e.into()), c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    /// `Some((c, m))` when the polynomial is a single nonzero term `c·m`.
    pub fn as_unit(&self) -> Option<(&Rational, &Monomial)> {
        if self.terms.len() == 1 {
            let (m, c) = self.terms.iter().next().unwrap();
            Some((c, m))
        } else {
            None
        }
    }

    pub fn inverse_unit(&self) -> Option<LaurentPoly> {
        let (c, m) = self.as_unit()?;
        Some(Self::term(&self.vars, m.inverse(), c.recip()))
    }

    pub fn has_negative_exponents(&self) -> bool {
        self.terms.keys().any(Monomial::has_negative)
    }

    /// Largest total degree of a term (`None` for the zero polynomial).
    pub fn total_degree(&self) -> Option<i64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// `(min, max)` exponent of variable `i` over all terms.
    pub fn degree_range(&self, i: usize) -> Option<(i32, i32)> {
        let mut it = self.terms.keys().map(|m| m.0[i]);
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), e| (lo.min(e), hi.max(e))))
    }

    pub fn involves(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.0[i] != 0)
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_vars(&self, other: &LaurentPoly) -> Result<(), AlgebraError> {
        if self.vars.same(&other.vars) {
            Ok(())
        } else {
            Err(AlgebraError::VariableMismatch {
                left: self.vars.names().join(", "),
                right: other.vars.names().join(", "),
            })
        }
    }

    pub fn checked_add(&self, other: &LaurentPoly) -> Result<LaurentPoly, AlgebraError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &LaurentPoly) -> Result<LaurentPoly, AlgebraError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &LaurentPoly) -> Result<LaurentPoly, AlgebraError> {
        self.check_vars(other)?;
        let mut out = Self::zero(&self.vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> LaurentPoly {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> LaurentPoly {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.mul(m), v.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> LaurentPoly {
        let mut acc = Self::one(&self.vars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Integer power; negative exponents need a unit base.
    pub fn pow_i(&self, n: i32) -> Result<LaurentPoly, AlgebraError> {
        if n >= 0 {
            return Ok(self.pow(n as u32));
        }
        let inv = self
            .inverse_unit()
            .ok_or_else(|| AlgebraError::NonUnitDivision(self.to_string()))?;
        Ok(inv.pow(n.unsigned_abs()))
    }

    /// Exact division by a unit `c·m`.
    pub fn div_unit(&self, divisor: &LaurentPoly) -> Result<LaurentPoly, AlgebraError> {
        self.check_vars(divisor)?;
        let inv = divisor
            .inverse_unit()
            .ok_or_else(|| AlgebraError::NonUnitDivision(divisor.to_string()))?;
        Ok(self * &inv)
    }

    pub fn partial_derivative(&self, name: &str) -> Result<LaurentPoly, AlgebraError> {
        let i = self
            .vars
            .index_of(name)
            .ok_or_else(|| AlgebraError::UnknownVariable(name.to_string()))?;
        Ok(self.partial_index(i))
    }

    /// `∂/∂x_i`, with `d(x^n)/dx = n x^(n-1)` for every integer `n`.
    pub fn partial_index(&self, i: usize) -> LaurentPoly {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            out.terms.insert(m2, c * rat(e as i64));
        }
        out
    }

    /// Simultaneous substitution by variable name. Unbound variables are
    /// kept, which requires them to exist in the images' variable list.
    pub fn substitute(
        &self,
        bindings: &HashMap<String, LaurentPoly>,
    ) -> Result<LaurentPoly, AlgebraError> {
        let target = match bindings.values().next() {
            Some(p) => p.vars.clone(),
            None => return Ok(self.clone()),
        };
        let mut images = Vec::with_capacity(self.vars.len());
        for name in self.vars.names() {
            match bindings.get(name) {
                Some(p) => {
                    if !p.vars.same(&target) {
                        return Err(AlgebraError::VariableMismatch {
                            left: target.names().join(", "),
                            right: p.vars.names().join(", "),
                        });
                    }
                    images.push(p.clone());
                }
                None => images.push(LaurentPoly::var(&target, name)?),
            }
        }
        self.substitute_all(&images)
    }

    /// Substitutes `x_i -> images[i]` for every variable. All images must
    /// share one variable list, which becomes the result's.
    pub fn substitute_all(&self, images: &[LaurentPoly]) -> Result<LaurentPoly, AlgebraError> {
        assert_eq!(images.len(), self.vars.len(), "one image per variable");
        let target = match images.first() {
            Some(p) => p.vars.clone(),
            None => {
                return Ok(LaurentPoly {
                    vars: self.vars.clone(),
                    terms: self.terms.clone(),
                })
            }
        };
        let mut powers: HashMap<(usize, i32), LaurentPoly> = HashMap::new();
        let mut out = LaurentPoly::zero(&target);
        for (m, c) in &self.terms {
            let mut acc = LaurentPoly::constant(&target, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let pw = match powers.entry((i, e)) {
                    hash_map::Entry::Occupied(o) => o.into_mut(),
                    hash_map::Entry::Vacant(v) => {
                        v.insert(images[i].pow_i(e).map_err(|_| AlgebraError::NonUnitInverse {
                            var: self.vars.name(i).to_string(),
                            image: images[i].to_string(),
                        })?)
                    }
                };
                acc = acc.checked_mul(pw)?;
            }
            for (m2, c2) in acc.terms {
                out.add_term(m2, c2);
            }
        }
        Ok(out)
    }

    pub fn evaluate(&self, point: &HashMap<String, Rational>) -> Result<Rational, AlgebraError> {
        let mut values = Vec::with_capacity(self.vars.len());
        for (i, name) in self.vars.names().iter().enumerate() {
            match point.get(name) {
                Some(v) => values.push(v.clone()),
                None if self.involves(i) => {
                    return Err(AlgebraError::MissingValue(name.clone()))
                }
                None => values.push(Rational::zero()),
            }
        }
        self.evaluate_at(&values)
    }

    pub fn evaluate_at(&self, values: &[Rational]) -> Result<Rational, AlgebraError> {
        assert_eq!(values.len(), self.vars.len());
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let v = &values[i];
                if e < 0 {
                    if v.is_zero() {
                        return Err(AlgebraError::ZeroAtInvertible(self.vars.name(i).to_string()));
                    }
                    t *= num_traits::pow(v.recip(), e.unsigned_abs() as usize);
                } else {
                    t *= num_traits::pow(v.clone(), e as usize);
                }
            }
            total += t;
        }
        Ok(total)
    }

    /// Re-homes the polynomial in `target`, sending variable `i` to
    /// `target` variable `map[i]`. Variables absent from `map` must not
    /// occur.
    pub fn embed(&self, target: &Vars, map: &[Option<usize>]) -> LaurentPoly {
        let mut out = LaurentPoly::zero(target);
        for (m, c) in &self.terms {
            let mut e = Monomial::one(target.len());
            for (i, &k) in m.0.iter().enumerate() {
                if k != 0 {
                    let j = map[i].expect("embedding drops an occurring variable");
                    e.0[j] += k;
                }
            }
            out.add_term(e, c.clone());
        }
        out
    }

    /// Splits `self = a·x_i + b` with `a`, `b` free of `x_i`, or `None` if
    /// `x_i` occurs with an exponent other than 0 or 1.
    pub fn split_linear(&self, i: usize) -> Option<(LaurentPoly, LaurentPoly)> {
        let mut a = Self::zero(&self.vars);
        let mut b = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            match m.0[i] {
                0 => {
                    b.terms.insert(m.clone(), c.clone());
                }
                1 => {
                    let mut m2 = m.clone();
                    m2.0[i] = 0;
                    a.terms.insert(m2, c.clone());
                }
                _ => return None,
            }
        }
        Some((a, b))
    }

    /// The canonical text form, also accepted by the DSL parser.
    fn write_to(&self, f: &mut impl fmt::Write) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let mut factors: Vec<String> = Vec::new();
            if m.is_one() || !mag.is_one() {
                factors.push(format_rational(&mag));
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars.name(i).to_string()),
                    _ => factors.push(format!("{}^{}", self.vars.name(i), e)),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_to(f)
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({})", self)
    }
}

// Operator forms panic on mismatched variable lists; the checked_* methods
// are the fallible versions.
macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<'a> $tr<&'a LaurentPoly> for &'a LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &'a LaurentPoly) -> LaurentPoly {
                self.$checked(rhs).expect("polynomials over different rings")
            }
        }
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$checked(&rhs).expect("polynomials over different rings")
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}
