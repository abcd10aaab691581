//! Elements `x + y*sqrt(d)` of a real quadratic field, with `Q` as the `d = 1` case.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::arith::is_squarefree;
use super::Rational;
use crate::error::{Error, Result};

/// Choice of real embedding of `Q(sqrt d)`. The principal embedding sends
/// `sqrt d` to the positive root, the conjugate one to the negative root.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Embedding {
    Principal,
    Conjugate,
}

/// `x + y*sqrt(d)`. `d == 1` marks the rational field, in which case `y == 0`.
///
/// Arithmetic between a rational element and an element of `Q(sqrt d)` is
/// allowed; mixing two different nontrivial fields panics.
#[derive(Clone, Debug)]
pub struct QuadFieldElement {
    d: u64,
    x: Rational,
    y: Rational,
}

pub type Qf = QuadFieldElement;

impl QuadFieldElement {
    pub fn new(d: u64, x: Rational, y: Rational) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidParameter("d must be positive".into()));
        }
        if d == 1 {
            if !y.is_zero() {
                return Err(Error::InvalidParameter(
                    "rational marker d = 1 requires y = 0".into(),
                ));
            }
        } else if !is_squarefree(d) {
            return Err(Error::NotSquarefree(d));
        }
        Ok(Self { d, x, y })
    }

    pub fn rational(x: Rational) -> Self {
        Self {
            d: 1,
            x,
            y: Rational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::rational(Rational::from_integer(n))
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        Self::rational(Rational::new(num.into(), den.into()))
    }

    /// `sqrt d` in `Q(sqrt d)`.
    pub fn sqrt_of(d: u64) -> Result<Self> {
        Self::new(d, Rational::zero(), Rational::one())
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn x(&self) -> &Rational {
        &self.x
    }

    pub fn y(&self) -> &Rational {
        &self.y
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.x.is_one() && self.y.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.x)
    }

    /// Image under `sqrt d -> -sqrt d`.
    pub fn conjugate(&self) -> Self {
        Self {
            d: self.d,
            x: self.x.clone(),
            y: -self.y.clone(),
        }
    }

    /// Field trace `2x`.
    pub fn trace(&self) -> Rational {
        &self.x + &self.x
    }

    /// Field norm `x^2 - d y^2`.
    pub fn norm(&self) -> Rational {
        &self.x * &self.x - &self.y * &self.y * Rational::from_integer(self.d.into())
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(Self {
            d: self.d,
            x: &self.x / &n,
            y: -(&self.y / &n),
        })
    }

    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self * &r)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self {
            d: self.d,
            x: &self.x * q,
            y: &self.y * q,
        }
    }

    /// Float value under the chosen real embedding.
    pub fn embed(&self, e: Embedding) -> f64 {
        let x = self.x.to_f64().unwrap_or(f64::NAN);
        if self.y.is_zero() {
            return x;
        }
        let y = self.y.to_f64().unwrap_or(f64::NAN);
        let s = (self.d as f64).sqrt();
        match e {
            Embedding::Principal => x + y * s,
            Embedding::Conjugate => x - y * s,
        }
    }

    /// Exact sign under the chosen embedding.
    pub fn sign(&self, e: Embedding) -> Ordering {
        let y = match e {
            Embedding::Principal => self.y.clone(),
            Embedding::Conjugate => -self.y.clone(),
        };
        let sx = self.x.cmp(&Rational::zero());
        let sy = y.cmp(&Rational::zero());
        if sy == Ordering::Equal {
            return sx;
        }
        if sx == Ordering::Equal || sx == sy {
            return sy;
        }
        // Opposite signs: compare |x| with |y| sqrt d via squares.
        let lhs = &self.x * &self.x;
        let rhs = &y * &y * Rational::from_integer(self.d.into());
        match lhs.cmp(&rhs) {
            Ordering::Greater => sx,
            Ordering::Less => sy,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn is_positive(&self, e: Embedding) -> bool {
        self.sign(e) == Ordering::Greater
    }

    /// Exact comparison under an embedding.
    pub fn cmp_in(&self, other: &Self, e: Embedding) -> Ordering {
        (self - other).sign(e)
    }

    pub fn abs_in(&self, e: Embedding) -> Self {
        if self.sign(e) == Ordering::Less {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn field_with(&self, other: &Self) -> u64 {
        match (self.d, other.d) {
            (1, d) | (d, 1) => d,
            (a, b) if a == b => a,
            (a, b) => panic!("{}", Error::FieldMismatch(a, b)),
        }
    }

    /// Checked variant of the field compatibility test.
    pub fn same_field(&self, other: &Self) -> Result<u64> {
        match (self.d, other.d) {
            (1, d) | (d, 1) => Ok(d),
            (a, b) if a == b => Ok(a),
            (a, b) => Err(Error::FieldMismatch(a, b)),
        }
    }
}

impl PartialEq for QuadFieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.x == other.x && self.y == other.y && (self.y.is_zero() || self.d == other.d)
    }
}

impl Eq for QuadFieldElement {}

impl From<Rational> for QuadFieldElement {
    fn from(q: Rational) -> Self {
        Self::rational(q)
    }
}

impl From<i64> for QuadFieldElement {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl<'a> Add<&'a Qf> for &'a Qf {
    type Output = Qf;
    fn add(self, rhs: &Qf) -> Qf {
        let d = self.field_with(rhs);
        let y = if rhs.y.is_zero() {
            self.y.clone()
        } else {
            &self.y + &rhs.y
        };
        Qf {
            d,
            x: &self.x + &rhs.x,
            y,
        }
    }
}

impl<'a> Sub<&'a Qf> for &'a Qf {
    type Output = Qf;
    fn sub(self, rhs: &Qf) -> Qf {
        let d = self.field_with(rhs);
        let y = if rhs.y.is_zero() {
            self.y.clone()
        } else {
            &self.y - &rhs.y
        };
        Qf {
            d,
            x: &self.x - &rhs.x,
            y,
        }
    }
}

impl<'a> Mul<&'a Qf> for &'a Qf {
    type Output = Qf;
    fn mul(self, rhs: &Qf) -> Qf {
        let d = self.field_with(rhs);
        if self.y.is_zero() && rhs.y.is_zero() {
            return Qf {
                d,
                x: &self.x * &rhs.x,
                y: Rational::zero(),
            };
        }
        let dd = Rational::from_integer(d.into());
        Qf {
            d,
            x: &self.x * &rhs.x + &self.y * &rhs.y * dd,
            y: &self.x * &rhs.y + &self.y * &rhs.x,
        }
    }
}

impl Neg for Qf {
    type Output = Qf;
    fn neg(self) -> Qf {
        Qf {
            d: self.d,
            x: -self.x,
            y: -self.y,
        }
    }
}

impl Neg for &Qf {
    type Output = Qf;
    fn neg(self) -> Qf {
        -self.clone()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Qf> for Qf {
            type Output = Qf;
            fn $m(self, rhs: Qf) -> Qf {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Qf> for Qf {
            type Output = Qf;
            fn $m(self, rhs: &Qf) -> Qf {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<Qf> for &'a Qf {
            type Output = Qf;
            fn $m(self, rhs: Qf) -> Qf {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::iter::Sum for Qf {
    fn sum<I: Iterator<Item = Qf>>(iter: I) -> Qf {
        iter.fold(Qf::zero(), |a, b| a + b)
    }
}

fn fmt_rational(q: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for QuadFieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_zero() {
            return fmt_rational(&self.x, f);
        }
        if !self.x.is_zero() {
            fmt_rational(&self.x, f)?;
            write!(f, "{}", if self.y.is_negative() { " - " } else { " + " })?;
        } else if self.y.is_negative() {
            write!(f, "-")?;
        }
        let ay = self.y.abs();
        if !ay.is_one() {
            fmt_rational(&ay, f)?;
            write!(f, "*")?;
        }
        write!(f, "sqrt({})", self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat;

    fn qf(d: u64, x: (i64, i64), y: (i64, i64)) -> Qf {
        Qf::new(d, rat(x.0, x.1), rat(y.0, y.1)).unwrap()
    }

    #[test]
    fn trace_norm_examples() {
        let a = qf(5, (2, 1), (0, 1));
        assert_eq!((a.trace(), a.norm()), (rat(4, 1), rat(4, 1)));
        let b = qf(5, (0, 1), (1, 1));
        assert_eq!((b.trace(), b.norm()), (rat(0, 1), rat(-5, 1)));
        let c = qf(5, (256, 11), (64, 11));
        assert_eq!((c.trace(), c.norm()), (rat(512, 11), rat(45056, 121)));
    }

    #[test]
    fn construction_rejects_bad_d() {
        assert_eq!(
            Qf::new(12, rat(1, 1), rat(1, 1)),
            Err(Error::NotSquarefree(12))
        );
        assert!(Qf::new(1, rat(1, 1), rat(1, 1)).is_err());
        assert!(Qf::new(0, rat(1, 1), rat(0, 1)).is_err());
    }

    #[test]
    fn exact_sign_matches_float() {
        let e = qf(2, (-3, 2), (1, 1)); // -1.5 + 1.414..
        assert_eq!(e.sign(Embedding::Principal), Ordering::Less);
        assert_eq!(e.sign(Embedding::Conjugate), Ordering::Less);
        let g = qf(2, (-1, 1), (1, 1)); // -1 + 1.414..
        assert_eq!(g.sign(Embedding::Principal), Ordering::Greater);
        assert_eq!(g.sign(Embedding::Conjugate), Ordering::Less);
    }

    #[test]
    fn inverse_and_mixing() {
        let s = Qf::sqrt_of(5).unwrap();
        let w = Qf::from_int(4) - &s;
        let inv = w.inv().unwrap();
        assert!((&w * &inv).is_one());
        assert_eq!(inv, qf(5, (4, 11), (1, 11)));
        assert!(Qf::zero().inv().is_none());
        // rational and irrational mix freely
        assert_eq!((&Qf::from_int(2) * &s).d(), 5);
    }

    #[test]
    #[should_panic]
    fn different_fields_panic() {
        let _ = Qf::sqrt_of(2).unwrap() + Qf::sqrt_of(3).unwrap();
    }

    #[test]
    fn display() {
        assert_eq!(Qf::from_frac(61, 3).to_string(), "61/3");
        assert_eq!(qf(5, (4, 1), (-1, 1)).to_string(), "4 - sqrt(5)");
        assert_eq!(qf(2, (0, 1), (3, 2)).to_string(), "3/2*sqrt(2)");
    }
}
