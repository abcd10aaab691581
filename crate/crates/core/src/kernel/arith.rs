//! Elementary number theory on machine integers.
//!
//! Every integer that reaches these routines in practice is small: `4(n-1)`,
//! a square-free `d`, a level `b`, or a norm `<w, w>`. Factorization is plain
//! trial division.

use crate::error::{Error, Result};

/// Prime factorization as `(prime, exponent)` pairs with strictly increasing primes.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PrimeFactorization(Vec<(u64, u32)>);

impl PrimeFactorization {
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.0
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().map(|&(p, _)| p)
    }

    /// Exponent of `p`, zero when `p` does not divide the factored number.
    pub fn exponent(&self, p: u64) -> u32 {
        self.0
            .iter()
            .find(|&&(q, _)| q == p)
            .map(|&(_, e)| e)
            .unwrap_or(0)
    }

    /// Multiplies the factorization back out. Panics on u64 overflow.
    pub fn product(&self) -> u64 {
        self.0.iter().fold(1u64, |acc, &(p, e)| {
            acc.checked_mul(p.checked_pow(e).expect("overflow"))
                .expect("overflow")
        })
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Trial-division factorization. `factor(1)` is the empty product.
///
/// Panics if `n == 0`.
pub fn factor(mut n: u64) -> PrimeFactorization {
    assert!(n >= 1, "factor requires n >= 1");
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    PrimeFactorization(out)
}

/// Extended Euclid: returns `(g, u, v)` with `g = gcd(a, b) > 0` and `u*a + v*b = g`.
pub fn gcd_ext(a: i64, b: i64) -> Result<(i64, i64, i64)> {
    if a == 0 && b == 0 {
        return Err(Error::BothZero);
    }
    let (mut r0, mut r1) = (a as i128, b as i128);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        r0 = -r0;
        s0 = -s0;
        t0 = -t0;
    }
    let cast = |x: i128| i64::try_from(x).map_err(|_| Error::TooLarge(x.to_string()));
    Ok((cast(r0)?, cast(s0)?, cast(t0)?))
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

/// Product of the distinct primes dividing `n`.
pub fn radical(n: u64) -> u64 {
    factor(n).primes().product()
}

/// True iff no prime square divides `d`. Panics if `d == 0`.
pub fn is_squarefree(d: u64) -> bool {
    factor(d).factors().iter().all(|&(_, e)| e == 1)
}

/// Integer square root (floor).
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut x = (n as f64).sqrt() as u64;
    let fits = |y: u64| y.checked_mul(y).is_some_and(|sq| sq <= n);
    while !fits(x) {
        x -= 1;
    }
    while fits(x + 1) {
        x += 1;
    }
    x
}

fn isqrt_ceil(n: u64) -> u64 {
    let s = isqrt(n);
    if s * s == n {
        s
    } else {
        s + 1
    }
}

/// Lexicographically smallest non-increasing `(b1, b2, b3, b4)` with
/// `b1^2 + b2^2 + b3^2 + b4^2 = b`, by bounded exhaustive search.
pub fn four_squares(b: u64) -> [u64; 4] {
    // b1 is the largest part, so b1^2 >= b/4.
    let lo1 = isqrt_ceil(b.div_ceil(4));
    for b1 in lo1..=isqrt(b) {
        let r1 = b - b1 * b1;
        let lo2 = isqrt_ceil(r1.div_ceil(3));
        for b2 in lo2..=b1.min(isqrt(r1)) {
            let r2 = r1 - b2 * b2;
            let lo3 = isqrt_ceil(r2.div_ceil(2));
            for b3 in lo3..=b2.min(isqrt(r2)) {
                let r3 = r2 - b3 * b3;
                let b4 = isqrt(r3);
                if b4 * b4 == r3 && b4 <= b3 {
                    return [b1, b2, b3, b4];
                }
            }
        }
    }
    unreachable!("every nonnegative integer is a sum of four squares")
}
