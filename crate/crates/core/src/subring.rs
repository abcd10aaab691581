//! Finitely generated subrings of `Q`, always of the form `Z[1/d]` with `d`
//! square-free, and the two-sided trace-ring bounds for a cut vector `w`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::{norm, QuadraticForm, Vector};
use crate::kernel::{is_squarefree, radical, Embedding, Rational};

/// `Z[1/d]` for square-free `d`; `d = 1` is `Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubringOfQ {
    d: u64,
}

impl SubringOfQ {
    pub fn integers() -> Self {
        Self { d: 1 }
    }

    /// `Z[1/n] = Z[1/rad(n)]`. Panics if `n == 0`.
    pub fn inverting(n: u64) -> Self {
        Self { d: radical(n) }
    }

    pub fn from_squarefree(d: u64) -> Result<Self> {
        if d == 0 || !is_squarefree(d) {
            return Err(Error::NotSquarefree(d));
        }
        Ok(Self { d })
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn is_integers(&self) -> bool {
        self.d == 1
    }

    /// `Z[q]` in canonical form: for `q = a/b` in lowest terms, Bezout on
    /// `gcd(a, b) = 1` gives `Z[a/b] = Z[1/b] = Z[1/rad(b)]`.
    pub fn canonicalize(q: &Rational) -> Result<Self> {
        let den = q
            .denom()
            .to_u64()
            .ok_or_else(|| Error::TooLarge(q.denom().to_string()))?;
        Ok(Self::inverting(den))
    }

    /// Smallest subring containing both.
    pub fn join(self, other: Self) -> Self {
        Self {
            d: self.d.lcm(&other.d),
        }
    }

    /// True iff every prime of the reduced denominator of `q` divides `d`.
    pub fn contains(&self, q: &Rational) -> bool {
        let mut den = q.denom().abs();
        let d = BigInt::from(self.d);
        loop {
            let g = den.gcd(&d);
            if g.is_one() {
                break;
            }
            den /= g;
        }
        den.is_one()
    }

    pub fn is_subring_of(&self, other: &Self) -> bool {
        other.d % self.d == 0
    }
}

impl fmt::Display for SubringOfQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.d == 1 {
            f.write_str("Z")
        } else {
            write!(f, "Z[1/{}]", self.d)
        }
    }
}

/// `Z[4(n-1) w1^2/<w,w>]` and `Z[2/<w,w>]`, which bracket the adjoint trace ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRingBounds {
    pub lower: SubringOfQ,
    pub upper: SubringOfQ,
    pub pinched: bool,
}

/// The two generators `(4(n-1) w1^2/<w,w>, 2/<w,w>)` for the standard form.
pub fn bound_generators(n: usize, w: &Vector) -> Result<(Rational, Rational)> {
    let form = QuadraticForm::standard(n + 1);
    let ww = norm(&form, w)?;
    let ww = ww.as_rational().ok_or(Error::NotRational)?.clone();
    let w1 = w.coords()[1].as_rational().ok_or(Error::NotRational)?.clone();
    let four_n1 = Rational::from_integer(BigInt::from(4 * (n as i64 - 1)));
    let lower = four_n1 * &w1 * &w1 / &ww;
    let upper = Rational::from_integer(BigInt::from(2)) / ww;
    Ok((lower, upper))
}

pub fn trace_ring_bounds(n: usize, w: &Vector) -> Result<TraceRingBounds> {
    if w.len() != n + 1 {
        return Err(Error::DimensionMismatch {
            expected: n + 1,
            got: w.len(),
        });
    }
    if w.to_ints().is_none() {
        return Err(Error::Precondition("w must be integral".into()));
    }
    let form = QuadraticForm::standard(n + 1);
    let ww = norm(&form, w)?;
    let w1 = &w.coords()[1];
    if !ww.is_positive(Embedding::Principal) || (w1 * w1).cmp_in(&ww, Embedding::Principal).is_lt()
    {
        return Err(Error::Precondition("need w1^2 >= <w,w> > 0".into()));
    }
    let (lo, up) = bound_generators(n, w)?;
    let lower = SubringOfQ::canonicalize(&lo)?;
    let upper = SubringOfQ::canonicalize(&up)?;
    debug_assert!(lower.is_subring_of(&upper));
    Ok(TraceRingBounds {
        lower,
        upper,
        pinched: lower == upper,
    })
}
