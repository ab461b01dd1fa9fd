//! The split Albert algebra of 3×3 hermitian matrices over split octonions.
//!
//! An element
//!
//! ```text
//!   ( d1      a12     a13 )
//!   ( σ(a12)  d2      a23 )
//!   ( σ(a13)  σ(a23)  d3  )
//! ```
//!
//! is stored by its diagonal and upper octonion entries. The quadratic Jordan
//! structure comes from the cubic norm: `U_x y = T(x,y)·x − x# × y`, which
//! needs no division and is therefore valid in every characteristic.

pub mod corpus;

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::octonion::Octonion;
use crate::scalars::{FieldSpec, Ring, Scalar, ScalarError};

/// Dimension of the algebra.
pub const DIM: usize = 27;

/// One of the 27 basis elements `E1[1]..E3[1], X1[e1]..X3[e8]`.
///
/// `X1` is the (1,2) slot, `X2` the (2,3) slot and `X3` the (1,3) slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisElement {
    E(u8),
    X(u8, u8),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown basis element {0:?}")]
pub struct BasisParseError(pub String);

impl BasisElement {
    /// 0-based position, equal to the Coord27 slot of its unit tuple.
    pub fn index(self) -> usize {
        match self {
            BasisElement::E(i) => i as usize - 1,
            BasisElement::X(k, j) => 3 + 8 * (k as usize - 1) + (j as usize - 1),
        }
    }

    pub fn from_index(i: usize) -> Self {
        assert!(i < DIM, "basis index {i} out of range");
        if i < 3 {
            BasisElement::E(i as u8 + 1)
        } else {
            let r = i - 3;
            BasisElement::X((r / 8) as u8 + 1, (r % 8) as u8 + 1)
        }
    }

    pub fn all() -> impl Iterator<Item = BasisElement> + Clone {
        (0..DIM).map(BasisElement::from_index)
    }
}

impl fmt::Display for BasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisElement::E(i) => write!(f, "E{i}[1]"),
            BasisElement::X(k, j) => write!(f, "X{k}[e{j}]"),
        }
    }
}

impl FromStr for BasisElement {
    type Err = BasisParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let err = || BasisParseError(s.to_string());
        let digit = |c: u8, lo: u8, hi: u8| -> Result<u8, BasisParseError> {
            let d = c.wrapping_sub(b'0');
            if (lo..=hi).contains(&d) {
                Ok(d)
            } else {
                Err(err())
            }
        };
        let b = t.as_bytes();
        match b {
            [b'E', i, b'[', b'1', b']'] => Ok(BasisElement::E(digit(*i, 1, 3)?)),
            [b'X', k, b'[', b'e', j, b']'] => Ok(BasisElement::X(digit(*k, 1, 3)?, digit(*j, 1, 8)?)),
            _ => Err(err()),
        }
    }
}

impl Serialize for BasisElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Length-27 coordinate tuple: `α, β, χ`, then the (1,2), (2,3) and (1,3)
/// octonions, each as `a, b, u1..u3, v1..v3`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coord27<S = Scalar>(pub [S; DIM]);

impl<S: Ring> Coord27<S> {
    pub fn zero(ctx: &S::Ctx) -> Self {
        Coord27(std::array::from_fn(|_| S::zero(ctx)))
    }

    /// Unit tuple at 0-based `slot`.
    pub fn unit(ctx: &S::Ctx, slot: usize) -> Self {
        let mut c = Self::zero(ctx);
        c.0[slot] = S::one(ctx);
        c
    }

    pub fn iter(&self) -> impl Iterator<Item = &S> {
        self.0.iter()
    }
}

impl Coord27<Scalar> {
    pub fn from_vec(v: Vec<Scalar>) -> Option<Self> {
        <[Scalar; DIM]>::try_from(v).ok().map(Coord27)
    }
}

impl Serialize for Coord27<Scalar> {
    fn serialize<Se: Serializer>(&self, s: Se) -> Result<Se::Ok, Se::Error> {
        self.0.as_slice().serialize(s)
    }
}

/// Hermitian 3×3 matrix over the split octonions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AlbertElement<S = Scalar> {
    pub d1: S,
    pub d2: S,
    pub d3: S,
    pub a12: Octonion<S>,
    pub a23: Octonion<S>,
    pub a13: Octonion<S>,
}

impl<S: Ring> AlbertElement<S> {
    pub fn zero(ctx: &S::Ctx) -> Self {
        AlbertElement {
            d1: S::zero(ctx),
            d2: S::zero(ctx),
            d3: S::zero(ctx),
            a12: Octonion::zero(ctx),
            a23: Octonion::zero(ctx),
            a13: Octonion::zero(ctx),
        }
    }

    pub fn one(ctx: &S::Ctx) -> Self {
        AlbertElement {
            d1: S::one(ctx),
            d2: S::one(ctx),
            d3: S::one(ctx),
            ..Self::zero(ctx)
        }
    }

    pub fn basis(ctx: &S::Ctx, b: BasisElement) -> Self {
        Self::from_coords(&Coord27::unit(ctx, b.index()))
    }

    fn ctx(&self) -> S::Ctx {
        self.d1.ctx()
    }

    pub fn coords(&self) -> Coord27<S> {
        let mut out = Vec::with_capacity(DIM);
        out.extend([self.d1.clone(), self.d2.clone(), self.d3.clone()]);
        out.extend(self.a12.to_coords());
        out.extend(self.a23.to_coords());
        out.extend(self.a13.to_coords());
        Coord27(out.try_into().expect("27 coordinates"))
    }

    pub fn from_coords(c: &Coord27<S>) -> Self {
        let o = |start: usize| -> Octonion<S> {
            Octonion::from_coords(std::array::from_fn(|i| c.0[start + i].clone()))
        };
        AlbertElement {
            d1: c.0[0].clone(),
            d2: c.0[1].clone(),
            d3: c.0[2].clone(),
            a12: o(3),
            a23: o(11),
            a13: o(19),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        AlbertElement {
            d1: c.clone() * self.d1.clone(),
            d2: c.clone() * self.d2.clone(),
            d3: c.clone() * self.d3.clone(),
            a12: self.a12.scale(c),
            a23: self.a23.scale(c),
            a13: self.a13.scale(c),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords().iter().all(Ring::is_zero_elem)
    }

    /// Freudenthal adjoint `x#`, with `x## = N(x)·x`.
    pub fn sharp(&self) -> Self {
        let (d1, d2, d3) = (&self.d1, &self.d2, &self.d3);
        let (a, b, c) = (&self.a12, &self.a23, &self.a13);
        AlbertElement {
            d1: d2.clone() * d3.clone() - b.norm(),
            d2: d1.clone() * d3.clone() - c.norm(),
            d3: d1.clone() * d2.clone() - a.norm(),
            a12: &c.mul(&b.conj()) - &a.scale(d3),
            a23: &a.conj().mul(c) - &b.scale(d1),
            a13: &a.mul(b) - &c.scale(d2),
        }
    }

    /// Linearized adjoint `x × y = (x+y)# − x# − y#`.
    pub fn cross(&self, y: &Self) -> Self {
        &(&(self + y).sharp() - &self.sharp()) - &y.sharp()
    }

    /// Cubic norm, with `N(1) = 1`.
    pub fn norm3(&self) -> S {
        let (d1, d2, d3) = (&self.d1, &self.d2, &self.d3);
        let (a, b, c) = (&self.a12, &self.a23, &self.a13);
        d1.clone() * d2.clone() * d3.clone()
            - d1.clone() * b.norm()
            - d2.clone() * c.norm()
            - d3.clone() * a.norm()
            + a.mul(b).mul(&c.conj()).trace()
    }

    /// Bilinear trace form `T(x, y)`.
    pub fn trace_form(&self, y: &Self) -> S {
        self.d1.clone() * y.d1.clone()
            + self.d2.clone() * y.d2.clone()
            + self.d3.clone() * y.d3.clone()
            + self.a12.bilinear_trace(&y.a12)
            + self.a23.bilinear_trace(&y.a23)
            + self.a13.bilinear_trace(&y.a13)
    }

    /// Quadratic operator `U_x(y) = T(x,y)·x − x# × y`.
    pub fn u_op(&self, y: &Self) -> Self {
        &self.scale(&self.trace_form(y)) - &self.sharp().cross(y)
    }

    /// Jordan triple product `{x, y, z} = U_{x+z} y − U_x y − U_z y`.
    pub fn triple(&self, y: &Self, z: &Self) -> Self {
        &(&(self + z).u_op(y) - &self.u_op(y)) - &z.u_op(y)
    }

    /// Same octonion data in the lower triangle: `σ` applied to each upper entry.
    pub fn lower(&self) -> [Octonion<S>; 3] {
        [self.a12.conj(), self.a23.conj(), self.a13.conj()]
    }
}

impl AlbertElement<Scalar> {
    /// Common field of all coordinates.
    pub fn field(&self) -> Result<FieldSpec, ScalarError> {
        let c = self.coords();
        let f = c.0[0].field();
        for s in c.iter() {
            if s.field() != f {
                return Err(ScalarError::FieldMismatch(f, s.field()));
            }
        }
        Ok(f)
    }

    pub fn from_ints(field: &FieldSpec, x: &AlbertElement<i64>) -> Self {
        Self::from_coords(&Coord27(x.coords().0.map(|c| Scalar::from_i64(field, c))))
    }

    fn check_same(xs: &[&Self]) -> Result<FieldSpec, ScalarError> {
        let f = xs[0].field()?;
        for x in &xs[1..] {
            let g = x.field()?;
            if g != f {
                return Err(ScalarError::FieldMismatch(f, g));
            }
        }
        Ok(f)
    }

    pub fn checked_u_op(&self, y: &Self) -> Result<Self, ScalarError> {
        Self::check_same(&[self, y])?;
        Ok(self.u_op(y))
    }

    pub fn checked_triple(&self, y: &Self, z: &Self) -> Result<Self, ScalarError> {
        Self::check_same(&[self, y, z])?;
        Ok(self.triple(y, z))
    }

    pub fn checked_cross(&self, y: &Self) -> Result<Self, ScalarError> {
        Self::check_same(&[self, y])?;
        Ok(self.cross(y))
    }

    pub fn checked_trace_form(&self, y: &Self) -> Result<Scalar, ScalarError> {
        Self::check_same(&[self, y])?;
        Ok(self.trace_form(y))
    }
}

impl<S: Ring> Add for &AlbertElement<S> {
    type Output = AlbertElement<S>;
    fn add(self, y: &AlbertElement<S>) -> AlbertElement<S> {
        AlbertElement {
            d1: self.d1.clone() + y.d1.clone(),
            d2: self.d2.clone() + y.d2.clone(),
            d3: self.d3.clone() + y.d3.clone(),
            a12: &self.a12 + &y.a12,
            a23: &self.a23 + &y.a23,
            a13: &self.a13 + &y.a13,
        }
    }
}

impl<S: Ring> Sub for &AlbertElement<S> {
    type Output = AlbertElement<S>;
    fn sub(self, y: &AlbertElement<S>) -> AlbertElement<S> {
        AlbertElement {
            d1: self.d1.clone() - y.d1.clone(),
            d2: self.d2.clone() - y.d2.clone(),
            d3: self.d3.clone() - y.d3.clone(),
            a12: &self.a12 - &y.a12,
            a23: &self.a23 - &y.a23,
            a13: &self.a13 - &y.a13,
        }
    }
}

impl<S: Ring> Neg for &AlbertElement<S> {
    type Output = AlbertElement<S>;
    fn neg(self) -> AlbertElement<S> {
        let z = AlbertElement::zero(&self.ctx());
        &z - self
    }
}

impl<S: Ring + fmt::Display> fmt::Display for AlbertElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [l12, l23, l13] = self.lower();
        writeln!(f, "({} {} {})", self.d1, self.a12, self.a13)?;
        writeln!(f, "({} {} {})", l12, self.d2, self.a23)?;
        write!(f, "({} {} {})", l13, l23, self.d3)
    }
}
