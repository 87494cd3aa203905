mod common;

use std::collections::HashMap;

use proptest::prelude::*;

use volform::algebra::rational::rat;
use volform::{LaurentPoly, Monomial, Rational, Vars};

fn vars() -> Vars {
    Vars::new(["x", "y", "z"])
}

const INVERTIBLE: [bool; 3] = [true, false, true];

fn p() -> BoxedStrategy<LaurentPoly> {
    common::laurent(vars(), INVERTIBLE.to_vec(), 3)
}

/// `±c·m` with `m` a Laurent monomial: a legal image of an invertible variable.
fn unit() -> impl Strategy<Value = LaurentPoly> {
    (prop::collection::vec(-2i32..=2, 3), 1i64..=4, any::<bool>()).prop_map(|(mut e, c, neg)| {
        e[1] = 0;
        let c = if neg { -c } else { c };
        LaurentPoly::term(&vars(), Monomial(e.into_iter().collect()), rat(c))
    })
}

fn bindings() -> impl Strategy<Value = HashMap<String, LaurentPoly>> {
    (unit(), common::laurent(vars(), INVERTIBLE.to_vec(), 2), unit()).prop_map(|(x, y, z)| {
        [("x", x), ("y", y), ("z", z)]
            .into_iter()
            .map(|(n, p)| (n.to_string(), p))
            .collect()
    })
}

fn point() -> impl Strategy<Value = HashMap<String, Rational>> {
    let nz = (1i64..=7, any::<bool>()).prop_map(|(v, s)| rat(if s { -v } else { v }));
    (nz.clone(), -7i64..=7, nz).prop_map(|(x, y, z)| {
        [("x", x), ("y", rat(y)), ("z", z)]
            .into_iter()
            .map(|(n, v)| (n.to_string(), v))
            .collect()
    })
}

proptest! {
    #[test]
    fn addition_is_a_commutative_group(a in p(), b in p(), c in p()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a + &LaurentPoly::zero(&vars()), a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn multiplication_axioms(a in p(), b in p(), c in p()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &LaurentPoly::one(&vars()), a.clone());
    }

    #[test]
    fn partial_derivative_is_leibniz(a in p(), b in p(), v in 0usize..3) {
        let lhs = (&a * &b).partial_index(v);
        let rhs = &(&a * &b.partial_index(v)) + &(&b * &a.partial_index(v));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitute_is_a_ring_homomorphism(a in p(), b in p(), s in bindings()) {
        let sub = |q: &LaurentPoly| q.substitute(&s).unwrap();
        prop_assert_eq!(sub(&(&a + &b)), &sub(&a) + &sub(&b));
        prop_assert_eq!(sub(&(&a * &b)), &sub(&a) * &sub(&b));
    }

    #[test]
    fn evaluate_after_substitute_composes(a in p(), s in bindings(), pt in point()) {
        let composed: HashMap<String, Rational> = s
            .iter()
            .map(|(n, img)| (n.clone(), img.evaluate(&pt).unwrap()))
            .collect();
        prop_assert_eq!(a.substitute(&s).unwrap().evaluate(&pt).unwrap(), a.evaluate(&composed).unwrap());
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in p(), b in p(), pt in point()) {
        let ev = |q: &LaurentPoly| q.evaluate(&pt).unwrap();
        prop_assert_eq!(ev(&(&a * &b)), ev(&a) * ev(&b));
        prop_assert_eq!(ev(&(&a - &b)), ev(&a) - ev(&b));
    }
}
