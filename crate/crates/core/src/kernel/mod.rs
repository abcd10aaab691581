//! Exact scalars and the elementary number theory behind the constructions.

mod arith;
mod quadfield;

pub use arith::{
    factor, four_squares, gcd, gcd_ext, is_squarefree, isqrt, radical, PrimeFactorization,
};
pub use quadfield::{Embedding, QuadFieldElement, Qf};

use num_bigint::BigInt;

pub type Rational = num_rational::BigRational;

/// Shorthand for the rational `num/den`. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `(trace, norm)` of `x + y sqrt d`, i.e. `(2x, x^2 - d y^2)`.
pub fn field_trace_norm(xi: &Qf) -> (Rational, Rational) {
    (xi.trace(), xi.norm())
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn factor_radical_bezout_roundtrip(n in 1u64..1_000_000_000, a in -1_000_000_000i64..1_000_000_000, b in -1_000_000_000i64..1_000_000_000) {
            let f = factor(n);
            prop_assert_eq!(f.product(), n);
            prop_assert!(f.factors().windows(2).all(|w| w[0].0 < w[1].0));
            let r = radical(n);
            prop_assert_eq!(r, f.primes().product::<u64>());
            prop_assert!(is_squarefree(r));
            prop_assume!(a != 0 || b != 0);
            let (g, u, v) = gcd_ext(a, b).unwrap();
            prop_assert!(g > 0);
            prop_assert_eq!(u as i128 * a as i128 + v as i128 * b as i128, g as i128);
            prop_assert_eq!(g as u64, gcd(a.unsigned_abs(), b.unsigned_abs()));
        }
    }

    fn small_qf(d: u64) -> impl Strategy<Value = Qf> {
        (-1_000_000i64..=1_000_000, 1i64..=1_000, -1_000_000i64..=1_000_000, 1i64..=1_000)
            .prop_map(move |(a, b, c, e)| Qf::new(d, rat(a, b), rat(c, e)).unwrap())
    }

    fn embedding_scale(q: &Qf) -> f64 {
        use num_traits::ToPrimitive;
        q.x().to_f64().unwrap().abs() + q.y().to_f64().unwrap().abs() * (q.d() as f64).sqrt()
    }

    proptest! {
        #[test]
        fn embeddings_are_ring_homomorphisms((a, b) in prop::sample::select(vec![2u64, 3, 5, 6, 7, 10, 30])
                .prop_flat_map(|d| (small_qf(d), small_qf(d)))) {
            for e in [Embedding::Principal, Embedding::Conjugate] {
                // relative error measured against the size of the operands, so that
                // cancellation in the exact value does not dominate
                let scale_sum = embedding_scale(&a) + embedding_scale(&b);
                let scale_prod = embedding_scale(&a) * embedding_scale(&b);
                let sum = (&a + &b).embed(e);
                prop_assert!((sum - (a.embed(e) + b.embed(e))).abs() <= 1e-12 * scale_sum.max(1.0));
                let prod = (&a * &b).embed(e);
                prop_assert!((prod - a.embed(e) * b.embed(e)).abs() <= 1e-12 * scale_prod.max(1.0));
            }
        }

        #[test]
        fn norm_is_multiplicative(d in prop::sample::select(vec![2u64, 3, 5, 13]),
                                  a in -1000i64..1000, b in 1i64..50, c in -1000i64..1000, e in 1i64..50,
                                  f in -1000i64..1000, g in -1000i64..1000) {
            let xi = Qf::new(d, rat(a, b), rat(c, e)).unwrap();
            let eta = Qf::new(d, rat(f, 1), rat(g, 7)).unwrap();
            let (_, n1) = field_trace_norm(&xi);
            let (_, n2) = field_trace_norm(&eta);
            let (_, n12) = field_trace_norm(&(&xi * &eta));
            prop_assert_eq!(n12, n1 * n2);
        }
    }
}
