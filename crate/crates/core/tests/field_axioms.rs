use f4_core::{FieldSpec, Scalar};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use proptest::prelude::*;

fn fields() -> impl Strategy<Value = FieldSpec> {
    prop_oneof![
        Just(FieldSpec::Rationals),
        Just(FieldSpec::gf(2)),
        Just(FieldSpec::gf(3)),
        Just(FieldSpec::gf(101)),
        Just(FieldSpec::prime(BigUint::from(2u32).pow(89) - 1u32).unwrap()),
    ]
}

fn element(f: FieldSpec) -> impl Strategy<Value = Scalar> {
    (-1000i64..1000, 1i64..50).prop_map(move |(n, d)| match &f {
        FieldSpec::Rationals => Scalar::from_rational(
            &f,
            &BigRational::new(BigInt::from(n), BigInt::from(d)),
        )
        .unwrap(),
        _ => Scalar::from_i64(&f, n * 7919 + d),
    })
}

fn triple() -> impl Strategy<Value = (Scalar, Scalar, Scalar)> {
    fields().prop_flat_map(|f| (element(f.clone()), element(f.clone()), element(f)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(5000))]

    #[test]
    fn ring_axioms((a, b, c) in triple()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a + &(-&a)).is_zero());
        prop_assert_eq!(&a - &b, &a + &(-&b));
    }

    #[test]
    fn inverses((a, _b, _c) in triple()) {
        match a.inv() {
            Ok(i) => prop_assert!((&a * &i).is_one()),
            Err(_) => prop_assert!(a.is_zero()),
        }
    }

    #[test]
    fn canonical_form_idempotent((a, b, _c) in triple()) {
        let x = &a * &b;
        prop_assert_eq!(x.canonicalize(), x.clone());
        prop_assert_eq!(x.canonicalize().canonicalize(), x.canonicalize());
        prop_assert_eq!(a.field().parse(&x.to_string()).unwrap(), x);
    }
}
