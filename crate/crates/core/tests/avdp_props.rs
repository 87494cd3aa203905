mod common;

use std::collections::BTreeSet;
use std::sync::LazyLock;

use proptest::prelude::*;

use common::{SL2, SURFACE, TORUS2};
use volform::algebra::rational::rat;
use volform::avdp::{self, FiberPair, Formula4Decomposition, SemicompatStatus, Surface};
use volform::scenarios::{self, Scenario};
use volform::{DiffForm, LaurentPoly, Rational, Vars};

static SURFACE23: LazyLock<Scenario> = LazyLock::new(|| scenarios::by_name("surface:p=x^2,q=y^3").unwrap());
static TORUS3: LazyLock<Scenario> = LazyLock::new(|| scenarios::by_name("torus:3").unwrap());

fn surface() -> Surface {
    Surface::from_chart(&SURFACE.chart).unwrap()
}

fn surface_scenario() -> impl Strategy<Value = &'static Scenario> {
    prop_oneof![Just(&*SURFACE), Just(&*SURFACE23)]
}

fn decomposition() -> impl Strategy<Value = Formula4Decomposition> {
    (1usize..=4).prop_flat_map(|n| {
        let v = move || prop::collection::vec(-6i64..=6, n);
        let m = move || prop::collection::vec(prop::collection::vec(-6i64..=6, n), n);
        (-6i64..=6, v(), v(), v(), m(), m(), m()).prop_map(move |(a0, a, b, c, aij, bij, cij)| {
            let r = |v: Vec<i64>| v.into_iter().map(rat).collect::<Vec<Rational>>();
            let rm = |m: Vec<Vec<i64>>| m.into_iter().map(r).collect();
            Formula4Decomposition {
                n,
                a0: rat(a0),
                a: r(a),
                b: r(b),
                c: r(c),
                a_ij: rm(aij),
                b_ij: rm(bij),
                c_ij: rm(cij),
            }
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn potential_of_bracket_is_exact(
        (s, xi, eta) in surface_scenario()
            .prop_flat_map(|s| (Just(s), common::divergence_free_field(s), common::divergence_free_field(s)))
    ) {
        let w = &s.volume.as_ref().unwrap().1;
        let pot = avdp::bracket_potential(&xi, &eta, w).unwrap();
        let lhs = DiffForm::function(&s.chart, &pot).unwrap().d();
        prop_assert_eq!(lhs, w.theta(&xi.bracket(&eta).unwrap()).unwrap());
    }

    #[test]
    fn formula4_roundtrip(d in decomposition()) {
        let s = surface();
        let back = s.decompose(&s.reconstruct(&d)).unwrap();
        prop_assert_eq!(back.normalized(), d.normalized());
    }

    #[test]
    fn formula4_reconstruct_is_congruent(f in common::laurent(Vars::new(["x", "y", "z"]), vec![false; 3], 4)) {
        let s = surface();
        let d = s.decompose(&f).unwrap();
        prop_assert!(s.chart().congruent(&s.reconstruct(&d), &f).unwrap());
    }

    #[test]
    fn accepted_potentials_are_first_integrals(
        (s, xi, f) in surface_scenario().prop_flat_map(|s| {
            let g = prop_oneof![
                (0usize..3, -2i64..=2, -2i64..=2).prop_map(move |(i, c, k)| {
                    let v = s.chart.var(["x", "y", "z"][i]).unwrap();
                    &v.scale(&rat(c)) + &s.chart.constant(rat(k))
                }),
                common::poly(&s.chart, 2),
            ];
            (Just(s), common::divergence_free_field(s), g)
        })
    ) {
        let w = &s.volume.as_ref().unwrap().1;
        if avdp::verify_potential(&f, &xi, w).unwrap() {
            prop_assert!(xi.apply(&f).is_zero());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn kernel_basis_is_normal_and_annihilated(
        (s, xi, d) in prop_oneof![Just(&*SURFACE), Just(&*TORUS2)]
            .prop_flat_map(|s| (Just(s), common::divergence_free_field(s), 0u32..=3))
    ) {
        for f in avdp::kernel_basis(&xi, d) {
            prop_assert_eq!(s.chart.normal_form(&f).unwrap(), f.clone());
            prop_assert!(xi.apply(&f).is_zero());
        }
    }

    #[test]
    fn condition_a_holds_on_torus_samples(start in 0u64..1_000_000) {
        let s = &*TORUS3;
        let pairs: Vec<FiberPair> = s
            .checks
            .iter()
            .find_map(|d| match &d.check {
                volform::Check::ConditionA { pairs } => Some(pairs.clone()),
                _ => None,
            })
            .unwrap()
            .into_iter()
            .map(|p| FiberPair { xi: s.fields[&p.xi].clone(), eta: s.fields[&p.eta].clone(), witness: p.witness })
            .collect();
        let mut seen = BTreeSet::new();
        let mut seed = start;
        while seen.len() < 20 {
            let pt = s.chart.sample_point(seed).unwrap();
            seed += 1;
            if seen.insert(format!("{:?}", pt.values())) {
                prop_assert!(avdp::condition_a_fiber(&pairs, &pt).unwrap());
            }
        }
    }
}

#[test]
fn semicompat_full_ring_is_monotone() {
    let (xi, eta) = (&SL2.fields["xi"], &SL2.fields["eta"]);
    let verdicts: Vec<SemicompatStatus> = (1..=3)
        .map(|d| avdp::semicompat_bounded(xi, eta, d).unwrap().status)
        .collect();
    let first = verdicts.iter().position(|v| *v == SemicompatStatus::FullRing).expect("full ring reached");
    assert!(verdicts[first..].iter().all(|v| *v == SemicompatStatus::FullRing), "{verdicts:?}");
}

#[test]
fn semicompat_verdicts_on_torus_pairs_are_monotone() {
    let s = &*TORUS2;
    for (a, b) in [("nu1", "nu2"), ("nu1p2", "nu2p1"), ("nu1", "nu1")] {
        let mut full = false;
        assert_eq!(avdp::semicompat_bounded(&s.fields[a], &s.fields[b], 0), Err(avdp::AvdpError::ZeroBound));
        for d in 1..=4 {
            let v = avdp::semicompat_bounded(&s.fields[a], &s.fields[b], d).unwrap();
            if full {
                assert_eq!(v.status, SemicompatStatus::FullRing, "({a}, {b}) at {d}");
            }
            full |= v.status == SemicompatStatus::FullRing;
        }
    }
}

#[test]
fn surface_potentials_are_single_signed() {
    let s = surface();
    let w = s.omega();
    let c = s.chart();
    for (f, xi) in [("z", s.delta_z()), ("y", s.delta_y()), ("x", s.delta_x())] {
        let g: LaurentPoly = c.var(f).unwrap();
        assert_eq!(avdp::potential_signs(&g, &xi, &w).unwrap().len(), 1, "{f}");
    }
}
