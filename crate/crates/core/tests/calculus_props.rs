mod common;

use std::sync::Arc;

use proptest::prelude::*;

use common::{QUADRIC, SL2, SURFACE, TORUS2};
use volform::{lnd_flow, Chart, DiffForm, LaurentPoly, VectorField};

fn pm(k: usize) -> volform::Rational {
    volform::algebra::rational::rat(if k.is_multiple_of(2) { 1 } else { -1 })
}

macro_rules! calculus_suite {
    ($name:ident, $s:expr) => {
        mod $name {
            use super::*;

            fn chart() -> Arc<Chart> {
                $s.chart.clone()
            }

            proptest! {
                #![proptest_config(ProptestConfig::with_cases(100))]

                #[test]
                fn d_squared_vanishes(a in common::any_form(&chart())) {
                    prop_assert!(a.d().d().is_zero());
                }

                #[test]
                fn interior_squared_vanishes(xi in common::field(&$s), a in common::any_form(&chart())) {
                    prop_assert!(a.interior(&xi).unwrap().interior(&xi).unwrap().is_zero());
                }

                #[test]
                fn cartan_formula(xi in common::field(&$s), a in common::any_form(&chart())) {
                    let lie = a.lie_derivative(&xi).unwrap();
                    let cartan = if a.degree() == 0 {
                        a.d().interior(&xi).unwrap()
                    } else {
                        a.interior(&xi).unwrap().d().add(&a.d().interior(&xi).unwrap()).unwrap()
                    };
                    prop_assert_eq!(lie, cartan);
                }

                #[test]
                fn interior_of_bracket(
                    xi in common::field(&$s),
                    eta in common::field(&$s),
                    a in (1..=chart().dim()).prop_flat_map(|k| common::form(&chart(), k)),
                ) {
                    let lhs = a.interior(&xi.bracket(&eta).unwrap()).unwrap();
                    let rhs = a
                        .interior(&eta).unwrap()
                        .lie_derivative(&xi).unwrap()
                        .sub(&a.lie_derivative(&xi).unwrap().interior(&eta).unwrap())
                        .unwrap();
                    prop_assert_eq!(lhs, rhs);
                }

                #[test]
                fn lie_derivative_is_a_derivation(
                    xi in common::field(&$s),
                    (a, b) in (0..=chart().dim()).prop_flat_map(|k| {
                        (common::form(&chart(), k), (0..=chart().dim() - k).prop_flat_map(|j| common::form(&chart(), j)))
                    }),
                ) {
                    let lhs = a.wedge(&b).unwrap().lie_derivative(&xi).unwrap();
                    let rhs = a
                        .lie_derivative(&xi).unwrap()
                        .wedge(&b).unwrap()
                        .add(&a.wedge(&b.lie_derivative(&xi).unwrap()).unwrap())
                        .unwrap();
                    prop_assert_eq!(lhs, rhs);
                }

                #[test]
                fn d_is_a_graded_derivation(
                    (a, b) in (0..=chart().dim()).prop_flat_map(|k| {
                        (common::form(&chart(), k), (0..=chart().dim() - k).prop_flat_map(|j| common::form(&chart(), j)))
                    }),
                ) {
                    let lhs = a.wedge(&b).unwrap().d();
                    let rhs = a
                        .d().wedge(&b).unwrap()
                        .add(&a.wedge(&b.d()).unwrap().scale_rational(&pm(a.degree())))
                        .unwrap();
                    prop_assert_eq!(lhs, rhs);
                }

                #[test]
                fn fields_act_as_derivations(xi in common::field(&$s), f in common::poly(&chart(), 3), g in common::poly(&chart(), 3)) {
                    let c = chart();
                    let lhs = xi.apply(&c.normal_form(&(&f * &g)).unwrap());
                    let rhs = c.normal_form(&(&(&xi.apply(&f) * &g) + &(&f * &xi.apply(&g)))).unwrap();
                    prop_assert_eq!(lhs, rhs);
                }

                #[test]
                fn jacobi_identity(xi in common::field(&$s), eta in common::field(&$s), zeta in common::field(&$s)) {
                    let b = |u: &VectorField, v: &VectorField| u.bracket(v).unwrap();
                    let sum = b(&xi, &b(&eta, &zeta))
                        .add(&b(&eta, &b(&zeta, &xi))).unwrap()
                        .add(&b(&zeta, &b(&xi, &eta))).unwrap();
                    prop_assert!(sum.is_zero());
                }

                #[test]
                fn divergence_of_scaled_field(xi in common::field(&$s), f in common::poly(&chart(), 3)) {
                    let w = &$s.volume.as_ref().unwrap().1;
                    let c = chart();
                    let lhs = w.divergence(&xi.scale(&f)).unwrap();
                    let rhs = c.normal_form(&(&(&f * &w.divergence(&xi).unwrap()) + &xi.apply(&f))).unwrap();
                    prop_assert_eq!(lhs, rhs);
                }

                #[test]
                fn theta_is_injective(xi in common::field(&$s)) {
                    let w = &$s.volume.as_ref().unwrap().1;
                    prop_assert_eq!(w.theta(&xi).unwrap().is_zero(), xi.is_zero());
                }
            }
        }
    };
}

calculus_suite!(torus, TORUS2);
calculus_suite!(surface, SURFACE);
calculus_suite!(sl2, SL2);

/// `exp(sξ) ∘ exp(tξ) = exp((s + t)ξ)` with `s`, `t` formal. The flow
/// must fix the invertible coordinates so that images stay in the chart.
fn flows_compose(xi: &VectorField) {
    let base = xi.chart();
    let n = base.dim_ambient();
    let ext = Arc::new(base.with_parameters(&["t", "s"]).unwrap());
    let ft = lnd_flow(xi, "t", 32).unwrap();
    let fs = lnd_flow(xi, "s", 32).unwrap();
    let into = |skip: usize| -> Vec<Option<usize>> { (0..n).map(Some).chain([Some(n + skip)]).collect() };
    let ft_images: Vec<LaurentPoly> = ft.images().iter().map(|p| p.embed(ext.vars(), &into(0))).collect();
    let var = |i: usize| LaurentPoly::var_index(ext.vars(), i);
    for i in 0..n {
        let mut subs = ft_images.clone();
        subs.push(var(n + 1));
        let composed = ext.normal_form(&fs.images()[i].substitute_all(&subs).unwrap()).unwrap();
        let mut shift: Vec<LaurentPoly> = (0..n).map(var).collect();
        shift.push(&var(n) + &var(n + 1));
        let direct = ext.normal_form(&ft.images()[i].substitute_all(&shift).unwrap()).unwrap();
        assert_eq!(composed, direct, "coordinate {i}");
    }
}

#[test]
fn lnd_flows_form_one_parameter_groups() {
    for (s, f) in [(&*SL2, "eta"), (&*QUADRIC, "xi")] {
        flows_compose(&s.fields[f]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn flows_of_kernel_multiples_compose(k in -2i64..=2, i in -1i32..=2, j in 0u32..=2) {
        let s = &*SL2;
        let c = &s.chart;
        let f = (&c.var("a1").unwrap().pow_i(i).unwrap() * &c.var("a2").unwrap().pow(j))
            .scale(&volform::algebra::rational::rat(k));
        flows_compose(&s.fields["eta"].scale(&f));
    }
}

#[test]
fn wedge_with_self_of_odd_form_vanishes() {
    let c = SURFACE.chart.clone();
    let a = DiffForm::differential(&c, 0).add(&DiffForm::differential(&c, 1)).unwrap();
    assert!(a.wedge(&a).unwrap().is_zero());
}
