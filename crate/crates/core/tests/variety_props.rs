mod common;

use proptest::prelude::*;

use common::{QUADRIC, SL2, SURFACE, TORUS2};
use volform::scenarios::Scenario;
use volform::{Invariance, LaurentPoly};

fn ambient(s: &Scenario) -> BoxedStrategy<LaurentPoly> {
    common::laurent(s.chart.vars().clone(), s.chart.invertible().to_vec(), 3)
}

fn with_scenario() -> impl Strategy<Value = &'static Scenario> {
    prop_oneof![Just(&*SURFACE), Just(&*SL2), Just(&*QUADRIC), Just(&*TORUS2)]
}

proptest! {
    #[test]
    fn normal_form_is_idempotent_and_ring_compatible(
        (s, a, b) in with_scenario().prop_flat_map(|s| (Just(s), ambient(s), ambient(s)))
    ) {
        let c = &s.chart;
        let (na, nb) = (c.normal_form(&a).unwrap(), c.normal_form(&b).unwrap());
        prop_assert_eq!(c.normal_form(&na).unwrap(), na.clone());
        prop_assert_eq!(c.normal_form(&(&a + &b)).unwrap(), c.normal_form(&(&na + &nb)).unwrap());
        prop_assert_eq!(c.normal_form(&(&a * &b)).unwrap(), c.normal_form(&(&na * &nb)).unwrap());
        for k in 0..c.dim_ambient() {
            if c.is_solvable(k) {
                prop_assert!(!na.involves(k));
            }
        }
    }

    #[test]
    fn relations_reduce_to_zero(s in with_scenario(), m in 0usize..3) {
        let c = &s.chart;
        for r in c.relations() {
            let scaled = &r.poly * &c.var(c.coordinate_name(m % c.dim_ambient())).unwrap();
            prop_assert!(c.normal_form(&scaled).unwrap().is_zero());
        }
    }

    #[test]
    fn sample_points_satisfy_relations(s in with_scenario(), seed in any::<u64>()) {
        let c = &s.chart;
        let pt = c.sample_point(seed).unwrap();
        for r in c.relations() {
            prop_assert!(r.poly.evaluate_at(pt.values()).unwrap() == num_traits::Zero::zero());
        }
        for (i, v) in pt.values().iter().enumerate() {
            prop_assert!(!c.is_invertible(i) || *v != num_traits::Zero::zero());
        }
        prop_assert!(c.validate_point(&pt).is_ok());
    }

    #[test]
    fn full_composite_of_an_action_is_the_identity(
        (s, f) in prop_oneof![Just(&*TORUS2), Just(&*QUADRIC)].prop_flat_map(|s| (Just(s), ambient(s)))
    ) {
        let c = &s.chart;
        for g in s.actions.values() {
            let mut h = g.clone();
            for k in 1..g.order() {
                let order = if k + 1 == g.order() { 1 } else { g.order() };
                h = h.compose(c, g, "power", order).unwrap();
            }
            prop_assert!(f.is_invariant(&h, c).unwrap());
            let mut image = c.normal_form(&f).unwrap();
            for _ in 0..g.order() {
                image = g.apply(c, &image).unwrap();
            }
            prop_assert_eq!(image, c.normal_form(&f).unwrap());
        }
    }
}
