mod common;

use f4_core::octonion::Octonion;
use f4_core::{AlbertElement, Coord27, FieldSpec, Scalar};
use proptest::prelude::*;

fn gf101() -> FieldSpec {
    FieldSpec::gf(101)
}

fn ints(f: &FieldSpec, xs: &[i64]) -> Vec<Scalar> {
    xs.iter().map(|&x| Scalar::from_i64(f, x)).collect()
}

fn oct(f: &FieldSpec, xs: &[i64]) -> Octonion {
    let v = ints(f, xs);
    Octonion::from_coords(std::array::from_fn(|i| v[i].clone()))
}

fn alb(f: &FieldSpec, xs: &[i64]) -> AlbertElement {
    let v = ints(f, xs);
    AlbertElement::from_coords(&Coord27(std::array::from_fn(|i| v[i].clone())))
}

fn small(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, n)
}

fn residues(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(0i64..101, n)
}

/// Inputs over both fields: (field, coordinates).
fn both(n: usize) -> impl Strategy<Value = (FieldSpec, Vec<i64>)> {
    prop_oneof![
        small(n).prop_map(|v| (FieldSpec::Rationals, v)),
        residues(n).prop_map(|v| (gf101(), v)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn octonion_composition((f, v) in both(16)) {
        let (x, y) = (oct(&f, &v[..8]), oct(&f, &v[8..]));
        prop_assert_eq!(x.mul(&y).norm(), x.norm() * y.norm());
    }

    #[test]
    fn octonion_alternative((f, v) in both(16)) {
        let (x, y) = (oct(&f, &v[..8]), oct(&f, &v[8..]));
        prop_assert_eq!(x.mul(&x.mul(&y)), x.mul(&x).mul(&y));
        prop_assert_eq!(y.mul(&x).mul(&x), y.mul(&x.mul(&x)));
    }

    #[test]
    fn octonion_conjugation((f, v) in both(16)) {
        let (x, y) = (oct(&f, &v[..8]), oct(&f, &v[8..]));
        prop_assert_eq!(x.mul(&y).conj(), y.conj().mul(&x.conj()));
        prop_assert_eq!(x.conj().conj(), x.clone());
        prop_assert_eq!(&x + &x.conj(), Octonion::scalar(x.trace()));
        prop_assert_eq!(x.mul(&x.conj()), Octonion::scalar(x.norm()));
    }

    #[test]
    fn octonion_moufang((f, v) in both(24)) {
        let (x, y, z) = (oct(&f, &v[..8]), oct(&f, &v[8..16]), oct(&f, &v[16..]));
        prop_assert_eq!(x.mul(&y).mul(&z.mul(&x)), x.mul(&y.mul(&z).mul(&x)));
    }

    #[test]
    fn unit_acts_trivially((f, v) in both(27)) {
        let y = alb(&f, &v);
        prop_assert_eq!(AlbertElement::one(&f).u_op(&y), y);
    }

    #[test]
    fn fundamental_formula((f, v) in both(81)) {
        let (x, y, z) = (alb(&f, &v[..27]), alb(&f, &v[27..54]), alb(&f, &v[54..]));
        let lhs = x.u_op(&y).u_op(&z);
        let rhs = x.u_op(&y.u_op(&x.u_op(&z)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn adjoint_identity((f, v) in both(27)) {
        let x = alb(&f, &v);
        prop_assert_eq!(x.sharp().sharp(), x.scale(&x.norm3()));
    }

    #[test]
    fn norm_composition((f, v) in both(54)) {
        let (x, y) = (alb(&f, &v[..27]), alb(&f, &v[27..]));
        let n = x.norm3();
        prop_assert_eq!(x.u_op(&y).norm3(), n.clone() * n * y.norm3());
    }

    #[test]
    fn triple_symmetry((f, v) in both(81)) {
        let (x, y, z) = (alb(&f, &v[..27]), alb(&f, &v[27..54]), alb(&f, &v[54..]));
        prop_assert_eq!(x.triple(&y, &z), z.triple(&y, &x));
        prop_assert_eq!(x.triple(&y, &x), x.u_op(&y).scale(&Scalar::from_i64(&f, 2)));
    }

    #[test]
    fn trace_form_compatibility((f, v) in both(81)) {
        let (x, y, z) = (alb(&f, &v[..27]), alb(&f, &v[27..54]), alb(&f, &v[54..]));
        prop_assert_eq!(x.trace_form(&y), y.trace_form(&x));
        prop_assert_eq!(x.u_op(&y).trace_form(&z), y.trace_form(&x.u_op(&z)));
    }

    #[test]
    fn coordinates_linear((f, v) in both(55)) {
        let (x, y) = (alb(&f, &v[..27]), alb(&f, &v[27..54]));
        let c = Scalar::from_i64(&f, v[54]);
        let lhs = (&x + &y.scale(&c)).coords();
        let (cx, cy) = (x.coords(), y.coords());
        let rhs = Coord27(std::array::from_fn(|i| cx.0[i].clone() + c.clone() * cy.0[i].clone()));
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(AlbertElement::from_coords(&lhs), &x + &y.scale(&c));
    }

    #[test]
    fn matches_linear_jordan_oracle((f, v) in both(54)) {
        let (x, y) = (alb(&f, &v[..27]), alb(&f, &v[27..]));
        prop_assert_eq!(x.u_op(&y), common::linear::u(&x, &y));
    }
}
