//! Exact field arithmetic over the rationals and prime fields.
//!
//! Every coefficient in the crate is a [`Scalar`] tagged with the field it
//! lives in. Arithmetic between scalars of different fields panics through
//! the operator traits; the `checked_*` methods report it as an error
//! instead.
//!
//! The algebra layers are generic over [`Ring`], which [`Scalar`] and `i64`
//! both implement. The integer instance is used to tabulate structure
//! tensors once and embed them into any field, which is sound because every
//! formula in the Jordan layer has integer coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Prime moduli below this bound use single-word residues.
const WORD_MODULUS_BOUND: u64 = 1 << 63;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not prime")]
    NotPrime(BigUint),
    #[error("cannot parse {input:?} as an element of {field}")]
    Parse { input: String, field: FieldSpec },
    #[error("cannot parse field {0:?} (expected `q` or `gf:<p>`)")]
    BadFieldSyntax(String),
}

/// Modulus of a prime field.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Modulus {
    Word(u64),
    Big(Arc<BigUint>),
}

impl Modulus {
    pub fn to_biguint(&self) -> BigUint {
        match self {
            Modulus::Word(p) => BigUint::from(*p),
            Modulus::Big(p) => (**p).clone(),
        }
    }
}

/// The coefficient field: the rationals or GF(p).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    PrimeField(Modulus),
}

impl FieldSpec {
    /// GF(p), rejecting composite `p`.
    pub fn prime(p: impl Into<BigUint>) -> Result<Self, ScalarError> {
        let p: BigUint = p.into();
        if !num_prime::nt_funcs::is_prime(&p, None).probably() {
            return Err(ScalarError::NotPrime(p));
        }
        Ok(match p.to_u64() {
            Some(w) if w < WORD_MODULUS_BOUND => FieldSpec::PrimeField(Modulus::Word(w)),
            _ => FieldSpec::PrimeField(Modulus::Big(Arc::new(p))),
        })
    }

    /// Shorthand for small primes known at compile time; panics on composites.
    pub fn gf(p: u64) -> Self {
        Self::prime(p).expect("modulus must be prime")
    }

    /// 0 for the rationals, p for GF(p).
    pub fn characteristic(&self) -> BigUint {
        match self {
            FieldSpec::Rationals => BigUint::zero(),
            FieldSpec::PrimeField(m) => m.to_biguint(),
        }
    }

    pub fn is_rationals(&self) -> bool {
        matches!(self, FieldSpec::Rationals)
    }

    pub fn zero(&self) -> Scalar {
        Scalar::from_i64(self, 0)
    }

    pub fn one(&self) -> Scalar {
        Scalar::from_i64(self, 1)
    }

    /// Parses an element written as `"-3/4"`, `"5"`, or a residue.
    pub fn parse(&self, s: &str) -> Result<Scalar, ScalarError> {
        let err = || ScalarError::Parse {
            input: s.to_string(),
            field: self.clone(),
        };
        let t = s.trim();
        let (num, den) = match t.split_once('/') {
            Some((n, d)) => (
                BigInt::from_str(n.trim()).map_err(|_| err())?,
                BigInt::from_str(d.trim()).map_err(|_| err())?,
            ),
            None => (BigInt::from_str(t).map_err(|_| err())?, BigInt::one()),
        };
        if den.is_zero() {
            return Err(err());
        }
        let n = Scalar::from_bigint(self, &num);
        let d = Scalar::from_bigint(self, &den);
        n.checked_div(&d).map_err(|_| err())
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::PrimeField(m) => write!(f, "GF({})", m.to_biguint()),
        }
    }
}

impl FromStr for FieldSpec {
    type Err = ScalarError;

    /// Command-line syntax: `q` or `gf:<p>`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("q") {
            return Ok(FieldSpec::Rationals);
        }
        let rest = t
            .strip_prefix("gf:")
            .or_else(|| t.strip_prefix("GF:"))
            .ok_or_else(|| ScalarError::BadFieldSyntax(s.to_string()))?;
        let p = BigUint::from_str(rest.trim()).map_err(|_| ScalarError::BadFieldSyntax(s.to_string()))?;
        FieldSpec::prime(p)
    }
}

#[derive(Serialize, Deserialize)]
struct FieldSpecRepr {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<serde_json::Value>,
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let repr = match self {
            FieldSpec::Rationals => FieldSpecRepr {
                kind: "Q".into(),
                p: None,
            },
            FieldSpec::PrimeField(Modulus::Word(p)) => FieldSpecRepr {
                kind: "GF".into(),
                p: Some((*p).into()),
            },
            FieldSpec::PrimeField(Modulus::Big(p)) => FieldSpecRepr {
                kind: "GF".into(),
                p: Some(p.to_string().into()),
            },
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = FieldSpecRepr::deserialize(d)?;
        match (repr.kind.as_str(), repr.p) {
            ("Q", None) => Ok(FieldSpec::Rationals),
            ("GF", Some(v)) => {
                let p = match v {
                    serde_json::Value::Number(n) => n
                        .as_u64()
                        .map(BigUint::from)
                        .ok_or_else(|| D::Error::custom("bad modulus"))?,
                    serde_json::Value::String(s) => {
                        BigUint::from_str(&s).map_err(D::Error::custom)?
                    }
                    _ => return Err(D::Error::custom("bad modulus")),
                };
                FieldSpec::prime(p).map_err(D::Error::custom)
            }
            _ => Err(D::Error::custom("expected {\"kind\":\"Q\"} or {\"kind\":\"GF\",\"p\":..}")),
        }
    }
}

/// An exact element of a [`FieldSpec`].
///
/// Rationals are kept reduced with positive denominator; residues are kept
/// in `0..p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Residue { value: u64, p: u64 },
    BigResidue { value: BigUint, p: Arc<BigUint> },
}

fn reduce_word(n: &BigInt, p: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits a word")
}

fn reduce_big(n: &BigInt, p: &BigUint) -> BigUint {
    let pb = BigInt::from_biguint(Sign::Plus, p.clone());
    n.mod_floor(&pb).to_biguint().expect("residue is non-negative")
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

impl Scalar {
    pub fn from_i64(field: &FieldSpec, n: i64) -> Self {
        match field {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(n.into())),
            FieldSpec::PrimeField(Modulus::Word(p)) => Scalar::Residue {
                value: (n as i128).rem_euclid(*p as i128) as u64,
                p: *p,
            },
            FieldSpec::PrimeField(Modulus::Big(p)) => Scalar::BigResidue {
                value: reduce_big(&BigInt::from(n), p),
                p: p.clone(),
            },
        }
    }

    pub fn from_bigint(field: &FieldSpec, n: &BigInt) -> Self {
        match field {
            FieldSpec::Rationals => Scalar::Rational(BigRational::from_integer(n.clone())),
            FieldSpec::PrimeField(Modulus::Word(p)) => Scalar::Residue {
                value: reduce_word(n, *p),
                p: *p,
            },
            FieldSpec::PrimeField(Modulus::Big(p)) => Scalar::BigResidue {
                value: reduce_big(n, p),
                p: p.clone(),
            },
        }
    }

    /// Maps a rational into `field`; fails when the denominator vanishes mod p.
    pub fn from_rational(field: &FieldSpec, q: &BigRational) -> Result<Self, ScalarError> {
        let n = Scalar::from_bigint(field, q.numer());
        let d = Scalar::from_bigint(field, q.denom());
        n.checked_div(&d)
    }

    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rational(_) => FieldSpec::Rationals,
            Scalar::Residue { p, .. } => FieldSpec::PrimeField(Modulus::Word(*p)),
            Scalar::BigResidue { p, .. } => FieldSpec::PrimeField(Modulus::Big(p.clone())),
        }
    }

    pub fn same_field(&self, other: &Scalar) -> bool {
        match (self, other) {
            (Scalar::Rational(_), Scalar::Rational(_)) => true,
            (Scalar::Residue { p, .. }, Scalar::Residue { p: q, .. }) => p == q,
            (Scalar::BigResidue { p, .. }, Scalar::BigResidue { p: q, .. }) => p == q,
            _ => false,
        }
    }

    fn check(&self, other: &Scalar) -> Result<(), ScalarError> {
        if self.same_field(other) {
            Ok(())
        } else {
            Err(ScalarError::FieldMismatch(self.field(), other.field()))
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Residue { value, .. } => *value == 0,
            Scalar::BigResidue { value, .. } => value.is_zero(),
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Residue { value, .. } => *value == 1,
            Scalar::BigResidue { value, .. } => value.is_one(),
        }
    }

    pub fn checked_add(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn checked_sub(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.check(other)?;
        Ok(self.add_unchecked(&other.negate()))
    }

    pub fn checked_mul(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        self.check(other)?;
        Ok(self.mul_unchecked(&other.inv()?))
    }

    fn add_unchecked(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Residue { value: a, p }, Scalar::Residue { value: b, .. }) => {
                let s = a + b;
                Scalar::Residue {
                    value: if s >= *p { s - p } else { s },
                    p: *p,
                }
            }
            (Scalar::BigResidue { value: a, p }, Scalar::BigResidue { value: b, .. }) => {
                Scalar::BigResidue {
                    value: (a + b) % &**p,
                    p: p.clone(),
                }
            }
            _ => panic!("{}", ScalarError::FieldMismatch(self.field(), other.field())),
        }
    }

    fn mul_unchecked(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Residue { value: a, p }, Scalar::Residue { value: b, .. }) => {
                Scalar::Residue {
                    value: mul_mod(*a, *b, *p),
                    p: *p,
                }
            }
            (Scalar::BigResidue { value: a, p }, Scalar::BigResidue { value: b, .. }) => {
                Scalar::BigResidue {
                    value: (a * b) % &**p,
                    p: p.clone(),
                }
            }
            _ => panic!("{}", ScalarError::FieldMismatch(self.field(), other.field())),
        }
    }

    pub fn negate(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Residue { value, p } => Scalar::Residue {
                value: if *value == 0 { 0 } else { p - value },
                p: *p,
            },
            Scalar::BigResidue { value, p } => Scalar::BigResidue {
                value: if value.is_zero() {
                    BigUint::zero()
                } else {
                    &**p - value
                },
                p: p.clone(),
            },
        }
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        Ok(match self {
            Scalar::Rational(a) => Scalar::Rational(a.recip()),
            Scalar::Residue { value, p } => Scalar::Residue {
                value: pow_mod(*value, p - 2, *p),
                p: *p,
            },
            Scalar::BigResidue { value, p } => {
                let e = &**p - BigUint::from(2u32);
                Scalar::BigResidue {
                    value: value.modpow(&e, p),
                    p: p.clone(),
                }
            }
        })
    }

    /// Re-derives the canonical representative; the identity on valid values.
    pub fn canonicalize(&self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(BigRational::new(q.numer().clone(), q.denom().clone())),
            Scalar::Residue { value, p } => Scalar::Residue {
                value: value % p,
                p: *p,
            },
            Scalar::BigResidue { value, p } => Scalar::BigResidue {
                value: value % &**p,
                p: p.clone(),
            },
        }
    }

    /// The rational value, if this is a rational scalar.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            _ => None,
        }
    }

    /// Small integer view: rationals with denominator 1 fitting i64, or residues
    /// lifted to the symmetric range around zero.
    pub fn to_small_int(&self) -> Option<i64> {
        match self {
            Scalar::Rational(q) if q.is_integer() => q.numer().to_i64(),
            Scalar::Rational(_) => None,
            Scalar::Residue { value, p } => {
                let v = *value as i128;
                let p = *p as i128;
                let lifted = if v > p / 2 { v - p } else { v };
                i64::try_from(lifted).ok()
            }
            Scalar::BigResidue { value, p } => {
                let half = &**p >> 1;
                if value > &half {
                    (BigInt::from(value.clone()) - BigInt::from((**p).clone())).to_i64()
                } else {
                    value.to_i64()
                }
            }
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Residue { value, .. } => write!(f, "{value}"),
            Scalar::BigResidue { value, .. } => write!(f, "{value}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                let f: fn(&Scalar, &Scalar) -> Scalar = $body;
                f(self, rhs)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| a.add_unchecked(b));
forward_binop!(Sub, sub, |a, b| a.add_unchecked(&b.negate()));
forward_binop!(Mul, mul, |a, b| a.mul_unchecked(b));

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.negate()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.negate()
    }
}

/// Commutative ring with exact equality, as needed by the algebra layers.
///
/// `Ctx` carries whatever is needed to build constants (the field for
/// [`Scalar`], nothing for machine integers).
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    type Ctx: Clone + fmt::Debug + PartialEq + Send + Sync;

    fn from_int(ctx: &Self::Ctx, n: i64) -> Self;
    fn ctx(&self) -> Self::Ctx;
    fn is_zero_elem(&self) -> bool;

    fn zero(ctx: &Self::Ctx) -> Self {
        Self::from_int(ctx, 0)
    }

    fn one(ctx: &Self::Ctx) -> Self {
        Self::from_int(ctx, 1)
    }
}

/// A [`Ring`] in which nonzero elements are invertible.
pub trait Field: Ring {
    fn try_inv(&self) -> Option<Self>;
}

impl Ring for Scalar {
    type Ctx = FieldSpec;

    fn from_int(ctx: &FieldSpec, n: i64) -> Self {
        Scalar::from_i64(ctx, n)
    }

    fn ctx(&self) -> FieldSpec {
        self.field()
    }

    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

impl Field for Scalar {
    fn try_inv(&self) -> Option<Self> {
        self.inv().ok()
    }
}

impl Ring for i64 {
    type Ctx = ();

    fn from_int(_: &(), n: i64) -> Self {
        n
    }

    fn ctx(&self) {}

    fn is_zero_elem(&self) -> bool {
        *self == 0
    }
}
