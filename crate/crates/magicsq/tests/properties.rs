//! Property tests: algebraic laws that must hold for *arbitrary* elements,
//! checked on proptest-generated rational inputs (exact arithmetic, so a
//! failure is a counterexample).

use proptest::prelude::*;

use magicsq::cayley::{all_names, build_algebra, d_derivation, AlgRef, Element};
use magicsq::exactla::{rat, Rational};

fn element(alg: &AlgRef, coeffs: &[i64]) -> Element {
    let d = alg.dim();
    let v: Vec<Rational> = (0..d).map(|i| rat(coeffs[i % coeffs.len()])).collect();
    Element::from_coeffs(alg, v)
}

fn algebra_index() -> impl Strategy<Value = usize> {
    0..all_names().len()
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-9i64..=9, 8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// The defining law of a composition algebra: N(xy) = N(x) N(y).
    #[test]
    fn norm_is_multiplicative(a in algebra_index(), x in coeffs(), y in coeffs()) {
        let alg: AlgRef = build_algebra(all_names()[a]).unwrap();
        let (x, y) = (element(&alg, &x), element(&alg, &y));
        prop_assert_eq!(x.mul(&y).norm(), x.norm() * y.norm());
    }

    /// Conjugation is an anti-automorphism: conj(xy) = conj(y) conj(x).
    #[test]
    fn conjugation_reverses_products(a in algebra_index(), x in coeffs(), y in coeffs()) {
        let alg: AlgRef = build_algebra(all_names()[a]).unwrap();
        let (x, y) = (element(&alg, &x), element(&alg, &y));
        prop_assert!(x.mul(&y).conj().sub(&y.conj().mul(&x.conj())).is_zero());
    }

    /// Alternativity: the associator vanishes when two arguments coincide.
    #[test]
    fn associator_is_alternating(a in algebra_index(), x in coeffs(), y in coeffs()) {
        let alg: AlgRef = build_algebra(all_names()[a]).unwrap();
        let (x, y) = (element(&alg, &x), element(&alg, &y));
        prop_assert!(Element::associator(&x, &x, &y).is_zero());
        prop_assert!(Element::associator(&x, &y, &y).is_zero());
        prop_assert!(Element::associator(&x, &y, &x).is_zero());
    }

    /// The associator is antisymmetric in all arguments (alternative law).
    #[test]
    fn associator_is_antisymmetric(
        a in algebra_index(), x in coeffs(), y in coeffs(), z in coeffs()
    ) {
        let alg: AlgRef = build_algebra(all_names()[a]).unwrap();
        let (x, y, z) = (element(&alg, &x), element(&alg, &y), element(&alg, &z));
        let base = Element::associator(&x, &y, &z);
        let swapped = Element::associator(&y, &x, &z);
        prop_assert!(base.add(&swapped).is_zero());
        let rotated = Element::associator(&z, &x, &y);
        prop_assert!(base.sub(&rotated).is_zero());
    }

    /// D_{x,y} = [L_x,L_y] + [L_x,R_y] + [R_x,R_y] really is a derivation,
    /// for any elements (not just imaginary ones).
    #[test]
    fn d_map_is_a_derivation(a in algebra_index(), x in coeffs(), y in coeffs()) {
        let alg: AlgRef = build_algebra(all_names()[a]).unwrap();
        let (x, y) = (element(&alg, &x), element(&alg, &y));
        prop_assert!(d_derivation(&x, &y).is_derivation());
    }

    /// The polarized norm form is associative: <xy, z> = <y, conj(x) z>.
    #[test]
    fn form_moves_factors_across(
        a in algebra_index(), x in coeffs(), y in coeffs(), z in coeffs()
    ) {
        let alg: AlgRef = build_algebra(all_names()[a]).unwrap();
        let (x, y, z) = (element(&alg, &x), element(&alg, &y), element(&alg, &z));
        prop_assert_eq!(x.mul(&y).inner(&z), y.inner(&x.conj().mul(&z)));
    }
}
