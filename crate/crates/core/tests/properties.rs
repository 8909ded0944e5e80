use num_bigint::BigInt;
use proptest::prelude::*;

use regpoly::pgroup::{Group, GroupElement, GroupParams};
use regpoly::{AutoLabel, ExtElement, Extension};

const PARAMS: [(u64, u32, u64); 5] = [(3, 1, 2), (3, 3, 2), (5, 1, 3), (5, 2, 2), (7, 1, 4)];

fn group(i: usize) -> Group {
    let (p, e, r) = PARAMS[i];
    Group::new(GroupParams::new(p, e, r).unwrap())
}

fn raw_element() -> impl Strategy<Value = (Vec<i64>, i64)> {
    (prop::collection::vec(-10_000i64..10_000, 6), -50i64..50)
}

fn make(g: &Group, (a, b): &(Vec<i64>, i64)) -> GroupElement {
    g.element_i64(&a[..g.params().rank()], *b)
}

fn label() -> impl Strategy<Value = AutoLabel> {
    prop::sample::select(AutoLabel::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn multiplication_is_associative(x in raw_element(), y in raw_element(), z in raw_element()) {
        // every parameter set sees every triple
        for i in 0..PARAMS.len() {
            let g = group(i);
            let (x, y, z) = (make(&g, &x), make(&g, &y), make(&g, &z));
            prop_assert_eq!(
                g.multiply(&g.multiply(&x, &y), &z),
                g.multiply(&x, &g.multiply(&y, &z))
            );
        }
    }

    #[test]
    fn inverse_and_identity(i in 0..PARAMS.len(), x in raw_element()) {
        let g = group(i);
        let x = make(&g, &x);
        prop_assert_eq!(g.multiply(&x, &g.inverse(&x)), g.identity());
        prop_assert_eq!(g.multiply(&g.identity(), &x), x.clone());
        prop_assert_eq!(g.multiply(&x, &g.identity()), x);
    }

    #[test]
    fn abelian_subgroup_commutes_and_is_normal(i in 0..PARAMS.len(), x in raw_element(), y in raw_element(), z in raw_element()) {
        let g = group(i);
        let (x0, y0) = ((x.0.clone(), 0), (y.0.clone(), 0));
        let (a, b) = (make(&g, &x0), make(&g, &y0));
        prop_assert_eq!(g.multiply(&a, &b), g.multiply(&b, &a));
        let w = make(&g, &z);
        prop_assert!(g.conjugate(&a, &w).in_abelian());
    }

    #[test]
    fn commutator_identities(x in raw_element(), y in raw_element(), z in raw_element()) {
        for i in 0..PARAMS.len() {
            let g = group(i);
            let (x, y, z) = (make(&g, &x), make(&g, &y), make(&g, &z));
            let c = |a: &GroupElement, b: &GroupElement| g.commutator(a, b);
            let cj = |a: &GroupElement, b: &GroupElement| g.conjugate(a, b);
            let m = |a: &GroupElement, b: &GroupElement| g.multiply(a, b);
            let inv = |a: &GroupElement| g.inverse(a);
            // [x, y]^{-1} = [y, x]
            prop_assert_eq!(inv(&c(&x, &y)), c(&y, &x));
            // [xy, z] = [x, z]^y [y, z]
            prop_assert_eq!(c(&m(&x, &y), &z), m(&cj(&c(&x, &z), &y), &c(&y, &z)));
            // [x, yz] = [x, z] [x, y]^z
            prop_assert_eq!(c(&x, &m(&y, &z)), m(&c(&x, &z), &cj(&c(&x, &y), &z)));
            // x^y = x [x, y]
            prop_assert_eq!(cj(&x, &y), m(&x, &c(&x, &y)));
            // Hall-Witt
            let hw = m(
                &m(&cj(&c(&c(&x, &inv(&y)), &z), &y), &cj(&c(&c(&y, &inv(&z)), &x), &z)),
                &cj(&c(&c(&z, &inv(&x)), &y), &x),
            );
            prop_assert_eq!(hw, g.identity());
        }
    }

    #[test]
    fn automorphisms_are_homomorphisms(i in 0..PARAMS.len(), l in label(), x in raw_element(), y in raw_element()) {
        let r = Extension::new(group(i));
        let g = r.group();
        let (x, y) = (make(g, &x), make(g, &y));
        prop_assert_eq!(
            r.apply_auto(l, &g.multiply(&x, &y)),
            g.multiply(&r.apply_auto(l, &x), &r.apply_auto(l, &y))
        );
        prop_assert_eq!(r.apply_auto(l, &r.apply_auto(l, &x)), x);
    }

    #[test]
    fn extension_is_associative(
        x in raw_element(), y in raw_element(), z in raw_element(),
        lx in label(), ly in label(), lz in label(),
    ) {
        for i in 0..PARAMS.len() {
            let r = Extension::new(group(i));
            let g = r.group();
            let x = ExtElement::new(make(g, &x), lx);
            let y = ExtElement::new(make(g, &y), ly);
            let z = ExtElement::new(make(g, &z), lz);
            prop_assert_eq!(
                r.multiply(&r.multiply(&x, &y), &z),
                r.multiply(&x, &r.multiply(&y, &z))
            );
            prop_assert_eq!(r.multiply(&x, &r.inverse(&x)), r.identity());
        }
    }

    #[test]
    fn embedding_is_a_homomorphism(i in 0..PARAMS.len(), x in raw_element(), y in raw_element()) {
        let r = Extension::new(group(i));
        let g = r.group();
        let (x, y) = (make(g, &x), make(g, &y));
        prop_assert_eq!(
            r.embed(g.multiply(&x, &y)),
            r.multiply(&r.embed(x), &r.embed(y))
        );
    }

    #[test]
    fn normal_form_is_canonical(i in 0..PARAMS.len(), x in raw_element(), shift in prop::collection::vec(-3i64..3, 6), k in -3i64..3) {
        let g = group(i);
        let n = g.params().rank();
        let p = g.p() as i64;
        let shifted: Vec<BigInt> = (0..n)
            .map(|j| {
                let m = BigInt::from(g.params().modulus(j + 1).clone());
                BigInt::from(x.0[j]) + m * shift[j]
            })
            .collect();
        prop_assert_eq!(
            g.element(&shifted, &BigInt::from(x.1 + k * p)),
            make(&g, &x)
        );
    }

    #[test]
    fn elements_outside_abelian_part_have_order_p(i in 0..PARAMS.len(), x in raw_element()) {
        let g = group(i);
        let x = make(&g, &x);
        let order = g.element_order(&x);
        if !x.in_abelian() {
            prop_assert_eq!(order, g.p().into());
        }
    }
}
