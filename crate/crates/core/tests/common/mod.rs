#![allow(dead_code)]

use f4_core::octonion::Octonion;
use f4_core::{AlbertElement, Coord27, FieldSpec, Scalar};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Small integers over Q, arbitrary residues otherwise.
pub fn scalar(f: &FieldSpec, r: &mut impl Rng) -> Scalar {
    match f {
        FieldSpec::Rationals => Scalar::from_i64(f, r.gen_range(-3..=3)),
        _ => {
            let p = f.characteristic().to_u64_digits().first().copied().unwrap_or(0);
            Scalar::from_i64(f, r.gen_range(0..p as i64))
        }
    }
}

pub fn octonion(f: &FieldSpec, r: &mut impl Rng) -> Octonion {
    Octonion::from_coords(std::array::from_fn(|_| scalar(f, r)))
}

pub fn element(f: &FieldSpec, r: &mut impl Rng) -> AlbertElement {
    AlbertElement::from_coords(&Coord27(std::array::from_fn(|_| scalar(f, r))))
}

pub fn vector(f: &FieldSpec, n: usize, r: &mut impl Rng) -> Vec<Scalar> {
    (0..n).map(|_| scalar(f, r)).collect()
}

/// Linear Jordan algebra of 3×3 hermitian octonion matrices with
/// `x∘y = (xy + yx)/2`, independent of the cubic-norm construction.
/// Needs 2 invertible.
pub mod linear {
    use super::*;

    type M = [[Octonion; 3]; 3];

    fn to_matrix(x: &AlbertElement) -> M {
        let d = |s: &Scalar| Octonion::scalar(s.clone());
        [
            [d(&x.d1), x.a12.clone(), x.a13.clone()],
            [x.a12.conj(), d(&x.d2), x.a23.clone()],
            [x.a13.conj(), x.a23.conj(), d(&x.d3)],
        ]
    }

    fn from_matrix(m: &M) -> AlbertElement {
        for (i, row) in m.iter().enumerate() {
            assert_eq!(row[i].a, row[i].b, "diagonal must be scalar");
            assert!(row[i].u.iter().chain(&row[i].v).all(Scalar::is_zero));
        }
        assert_eq!(m[1][0], m[0][1].conj(), "hermitian");
        AlbertElement {
            d1: m[0][0].a.clone(),
            d2: m[1][1].a.clone(),
            d3: m[2][2].a.clone(),
            a12: m[0][1].clone(),
            a23: m[1][2].clone(),
            a13: m[0][2].clone(),
        }
    }

    fn mul(x: &M, y: &M) -> M {
        std::array::from_fn(|i| {
            std::array::from_fn(|k| {
                let p = |j: usize| x[i][j].mul(&y[j][k]);
                &(&p(0) + &p(1)) + &p(2)
            })
        })
    }

    pub fn jordan(x: &AlbertElement, y: &AlbertElement) -> AlbertElement {
        let f = x.field().unwrap();
        let half = Scalar::from_i64(&f, 2).inv().unwrap();
        let (a, b) = (to_matrix(x), to_matrix(y));
        let (p, q) = (mul(&a, &b), mul(&b, &a));
        let s: M = std::array::from_fn(|i| std::array::from_fn(|k| (&p[i][k] + &q[i][k]).scale(&half)));
        from_matrix(&s)
    }

    /// `U_x y = 2x∘(x∘y) − x²∘y`.
    pub fn u(x: &AlbertElement, y: &AlbertElement) -> AlbertElement {
        let f = x.field().unwrap();
        let two = Scalar::from_i64(&f, 2);
        &jordan(x, &jordan(x, y)).scale(&two) - &jordan(&jordan(x, x), y)
    }
}
