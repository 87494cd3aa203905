#![allow(dead_code)]

use std::sync::{Arc, LazyLock};

use proptest::prelude::*;

use volform::algebra::rational::rat;
use volform::scenarios::{self, Scenario};
use volform::{Chart, DiffForm, LaurentPoly, Monomial, Vars, VectorField};

pub static TORUS2: LazyLock<Scenario> = LazyLock::new(|| scenarios::by_name("torus:2").unwrap());
pub static SURFACE: LazyLock<Scenario> = LazyLock::new(|| scenarios::by_name("surface").unwrap());
pub static SL2: LazyLock<Scenario> = LazyLock::new(|| scenarios::by_name("sl2").unwrap());
pub static QUADRIC: LazyLock<Scenario> = LazyLock::new(|| scenarios::by_name("quadric").unwrap());

/// Exponent vectors of total degree at most `deg` supported on `support`,
/// with negative entries allowed where `negative[i]`.
fn exponents(n: usize, support: Vec<usize>, negative: Vec<bool>, deg: i32) -> impl Strategy<Value = Vec<i32>> {
    let per: Vec<_> = support
        .iter()
        .map(|&i| if negative[i] { -1..=deg } else { 0..=deg })
        .collect();
    per.prop_map(move |raw| {
        let mut e = vec![0i32; n];
        let mut left = deg;
        for (k, &i) in support.iter().enumerate() {
            let v = raw[k].min(left.max(0));
            e[i] = v;
            left -= v.abs();
        }
        e
    })
}

fn assemble(vars: &Vars, terms: Vec<(Vec<i32>, i64)>) -> LaurentPoly {
    let mut p = LaurentPoly::zero(vars);
    for (e, c) in terms {
        p = &p + &LaurentPoly::term(vars, Monomial(e.into_iter().collect()), rat(c));
    }
    p
}

/// Laurent polynomials over `vars` with up to four terms.
pub fn laurent(vars: Vars, invertible: Vec<bool>, deg: i32) -> BoxedStrategy<LaurentPoly> {
    let n = vars.len();
    let term = (exponents(n, (0..n).collect(), invertible, deg), -5i64..=5);
    prop::collection::vec(term, 0..=4)
        .prop_map(move |t| assemble(&vars, t))
        .boxed()
}

/// Normal-form polynomials of degree at most `deg` in the free
/// coordinates of `chart`.
pub fn poly(chart: &Arc<Chart>, deg: i32) -> BoxedStrategy<LaurentPoly> {
    let n = chart.dim_ambient();
    let no_neg = vec![false; n];
    let term = (exponents(n, chart.free().to_vec(), no_neg, deg), -5i64..=5);
    let chart = chart.clone();
    prop::collection::vec(term, 1..=4)
        .prop_map(move |t| chart.normal_form(&assemble(chart.vars(), t)).unwrap())
        .boxed()
}

/// Polynomial combinations of the scenario's fields.
pub fn field(s: &'static Scenario) -> BoxedStrategy<VectorField> {
    let gens: Vec<VectorField> = s.fields.values().cloned().collect();
    let chart = s.chart.clone();
    prop::collection::vec(poly(&chart, 2), gens.len())
        .prop_map(move |coeffs| {
            let mut acc = VectorField::zero(&chart);
            for (g, c) in gens.iter().zip(&coeffs) {
                acc = acc.add(&g.scale(c)).unwrap();
            }
            acc
        })
        .boxed()
}

/// Combinations of the divergence-free fields of the scenario with
/// coefficients in their common kernel (constants).
pub fn divergence_free_field(s: &'static Scenario) -> BoxedStrategy<VectorField> {
    let w = s.volume.as_ref().unwrap().1.clone();
    let gens: Vec<VectorField> = s
        .fields
        .values()
        .filter(|f| w.divergence(f).unwrap().is_zero())
        .cloned()
        .collect();
    let chart = s.chart.clone();
    prop::collection::vec(-4i64..=4, gens.len())
        .prop_map(move |cs| {
            let mut acc = VectorField::zero(&chart);
            for (g, c) in gens.iter().zip(cs) {
                acc = acc.add(&g.scale(&chart.constant(rat(c)))).unwrap();
            }
            acc
        })
        .boxed()
}

fn blades(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for b in blades(n, k - 1) {
        let start = b.last().map_or(0, |&l| l + 1);
        for i in start..n {
            let mut c = b.clone();
            c.push(i);
            out.push(c);
        }
    }
    out
}

/// `k`-forms with random coefficients of degree at most 3.
pub fn form(chart: &Arc<Chart>, k: usize) -> BoxedStrategy<DiffForm> {
    let bl = blades(chart.dim(), k);
    let chart = chart.clone();
    prop::collection::vec(poly(&chart, 3), bl.len())
        .prop_map(move |coeffs| {
            let mut acc = DiffForm::zero(&chart, k);
            for (b, c) in bl.iter().zip(&coeffs) {
                acc = acc.add(&DiffForm::monomial(&chart, c, b).unwrap()).unwrap();
            }
            acc
        })
        .boxed()
}

/// A form of random degree in `0..=dim`.
pub fn any_form(chart: &Arc<Chart>) -> BoxedStrategy<DiffForm> {
    let chart = chart.clone();
    (0..=chart.dim()).prop_flat_map(move |k| form(&chart, k)).boxed()
}
