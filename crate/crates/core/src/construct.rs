//! Witness-vector constructions for cut configurations.
//!
//! Over `Q` this follows the classical recipe realizing `Z[1/d]` as a trace
//! ring: pick a level `b`, a coprime `w1` with `w1^2 > b`, and represent
//! `b - w1^2` by `-x0^2 + x2^2 + ... + xn^2`. Over `Q(sqrt d)` the cut vector is
//! `(1, a, b1, b2, b3, b4, 0, ..., 0)` with `b1^2 + ... + b4^2 = b`.

use std::cmp::Ordering;

use num_bigint::BigInt;

use crate::certificate::{Certificate, Statement, Verdict};
use crate::error::{Error, Result};
use crate::forms::{
    hyperplanes_disjoint, inner, is_admissible, is_f_orthogonal, norm, reflection,
    HyperplaneRelation, QuadraticForm, SquareMatrix, Vector,
};
use crate::kernel::{factor, four_squares, gcd, is_squarefree, Embedding, Qf};
use crate::subring::{bound_generators, trace_ring_bounds, SubringOfQ};
use crate::trace::{is_algebraic_integer, nonarithmeticity_certificate, residue_certificate};

/// One candidate glueing datum: `R1 = v^perp` with `v = e1`, `R2 = w^perp`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutConfiguration {
    pub n: usize,
    pub form: QuadraticForm,
    pub v: Vector,
    pub w: Vector,
    /// `<w, w>`
    pub w_norm: Qf,
    /// `<v, w>`, the coordinate `w1`
    pub w1: Qf,
    pub rho1: SquareMatrix,
    pub rho2: SquareMatrix,
    /// `rho1 rho2`
    pub g: SquareMatrix,
}

impl CutConfiguration {
    /// Validates `w` (integral, `w1^2 >= <w,w> > 0`, hyperplanes disjoint) and
    /// derives the reflections.
    pub fn new(n: usize, form: QuadraticForm, w: Vector) -> Result<Self> {
        if n < 4 {
            return Err(Error::InvalidParameter(format!("n must be >= 4, got {n}")));
        }
        if form.rank() != n + 1 || w.len() != n + 1 {
            return Err(Error::DimensionMismatch {
                expected: n + 1,
                got: if form.rank() != n + 1 { form.rank() } else { w.len() },
            });
        }
        if !w.is_integral() {
            return Err(Error::Precondition("w must have integral coordinates".into()));
        }
        let v = Vector::basis(n + 1, 1);
        let w_norm = norm(&form, &w)?;
        if !w_norm.is_positive(Embedding::Principal) {
            return Err(Error::NotSpaceLike);
        }
        let w1 = inner(&form, &v, &w)?;
        if (&w1 * &w1).cmp_in(&w_norm, Embedding::Principal) == Ordering::Less {
            return Err(Error::Precondition(format!(
                "need w1^2 >= <w,w>, got w1 = {w1}, <w,w> = {w_norm}"
            )));
        }
        match hyperplanes_disjoint(&form, &v, &w)? {
            HyperplaneRelation::Disjoint { .. } => {}
            HyperplaneRelation::Equal => {
                return Err(Error::Precondition("w is proportional to v".into()))
            }
            HyperplaneRelation::Intersecting => return Err(Error::Intersecting),
        }
        let rho1 = reflection(&form, &v)?;
        let rho2 = reflection(&form, &w)?;
        let g = rho1.mul(&rho2);
        Ok(Self {
            n,
            form,
            v,
            w,
            w_norm,
            w1,
            rho1,
            rho2,
            g,
        })
    }

    /// Configuration for an integral `w` and the standard form of rank `n + 1`.
    pub fn standard(n: usize, w: &[i64]) -> Result<Self> {
        Self::new(n, QuadraticForm::standard(n + 1), Vector::from_ints(w))
    }

    pub fn is_rational(&self) -> bool {
        self.form.field_d() == 1
    }
}

/// Exact witnesses of `<v,w>^2 >= <v,v><w,w>`.
pub fn disjointness_certificate(config: &CutConfiguration) -> Result<Certificate> {
    let vv = norm(&config.form, &config.v)?;
    let vw = inner(&config.form, &config.v, &config.w)?;
    let gap = &vw * &vw - &vv * &config.w_norm;
    let rel = hyperplanes_disjoint(&config.form, &config.v, &config.w)?;
    let mut cert = Certificate::new(Statement::Disjointness, Verdict::Failed)
        .with_witness("inner_vw", vw)
        .with_witness("norm_v", vv)
        .with_witness("norm_w", config.w_norm.clone())
        .with_witness("gap", gap)
        .with_tag("exact-inequality");
    match rel {
        HyperplaneRelation::Disjoint { tangent } => {
            cert.verdict = Verdict::Verified;
            if tangent {
                cert = cert.with_tag("tangent-at-infinity");
            }
            cert.note = "R1 and R2 do not intersect".into();
        }
        HyperplaneRelation::Equal => cert.note = "normals are proportional".into(),
        HyperplaneRelation::Intersecting => cert.note = "hyperplanes intersect".into(),
    }
    Ok(cert)
}

/// Trace-ring bounds certificate over `Q`. Verified iff the bounds pinch (and
/// match `expected_d` when given); otherwise inconclusive, or failed when a
/// specific ring was expected.
pub fn trace_ring_certificate(
    config: &CutConfiguration,
    expected_d: Option<u64>,
) -> Result<Certificate> {
    if !config.is_rational() {
        return Err(Error::Precondition("trace-ring bounds are computed over Q".into()));
    }
    let bounds = trace_ring_bounds(config.n, &config.w)?;
    let (lo, up) = bound_generators(config.n, &config.w)?;
    let mut cert = Certificate::new(Statement::TraceRing, Verdict::Inconclusive)
        .with_witness("generator_lower", lo)
        .with_witness("generator_upper", up)
        .with_witness("lower_ring_d", bounds.lower.d())
        .with_witness("upper_ring_d", bounds.upper.d())
        .with_tag("canonical-subring");
    if let Some(d) = expected_d {
        cert = cert.with_witness("expected_ring_d", d);
    }
    let matches = expected_d.is_none_or(|d| bounds.lower.d() == d);
    cert.verdict = match (bounds.pinched && matches, expected_d) {
        (true, _) => Verdict::Verified,
        (false, Some(_)) => Verdict::Failed,
        (false, None) => Verdict::Inconclusive,
    };
    cert.note = if bounds.pinched {
        format!("adjoint trace ring is {}", bounds.lower)
    } else {
        format!("{} <= A <= {}", bounds.lower, bounds.upper)
    };
    Ok(cert)
}

/// `b = prod p^(e_p + 1)` over primes `p | d`, where `e_p` is the exponent of
/// `p` in `4(n-1)` (zero when `p` does not divide it). Then
/// `Z[4(n-1)/b] = Z[1/d] = Z[2/b]`.
pub fn build_level_b(n: usize, d: u64) -> Result<u64> {
    if n < 4 {
        return Err(Error::InvalidParameter(format!("n must be >= 4, got {n}")));
    }
    if d <= 1 || !is_squarefree(d) {
        return Err(Error::NotSquarefree(d));
    }
    let four_n1 = factor(4 * (n as u64 - 1));
    factor(d).primes().try_fold(1u64, |b, p| {
        let e = four_n1.exponent(p);
        p.checked_pow(e + 1)
            .and_then(|pe| b.checked_mul(pe))
            .ok_or_else(|| Error::TooLarge(format!("level for n = {n}, d = {d}")))
    })
}

/// Smallest positive `w1` with `w1^2 > b` and `gcd(w1, b) = 1`.
pub fn choose_w1(b: u64) -> u64 {
    let mut w1 = crate::kernel::isqrt(b) + 1;
    while gcd(w1, b) != 1 {
        w1 += 1;
    }
    w1
}

/// Solves `-x0^2 + x2^2 + ... = target` in `vars` coordinates ordered
/// `(x0, x2, x3, ...)`. Odd targets use `x2 = (k+1)/2`, `x0 = (k-1)/2`; even
/// nonzero targets put `x3 = 1` and solve the odd remainder. Signs are
/// normalized nonnegative.
pub fn represent_by_hyperbolic(target: i64, vars: usize) -> Result<Vec<i64>> {
    if vars < 3 {
        return Err(Error::InvalidParameter(format!(
            "need at least 3 coordinates, got {vars}"
        )));
    }
    let mut out = vec![0i64; vars];
    if target == 0 {
        return Ok(out);
    }
    let odd = if target % 2 == 0 {
        out[2] = 1;
        target - 1
    } else {
        target
    };
    out[1] = ((odd + 1) / 2).abs();
    out[0] = ((odd - 1) / 2).abs();
    Ok(out)
}

/// Assembles `w` realizing the trace ring `Z[1/d]` in dimension `n` and
/// certifies it. Every certificate must verify.
pub fn construct_gamma_d(n: usize, d: u64) -> Result<(CutConfiguration, Vec<Certificate>)> {
    let b = build_level_b(n, d)?;
    let w1 = choose_w1(b);
    let target = b as i64 - (w1 as i64) * (w1 as i64);
    let rep = represent_by_hyperbolic(target, n)?;
    let mut w = Vec::with_capacity(n + 1);
    w.push(rep[0]);
    w.push(w1 as i64);
    w.extend_from_slice(&rep[1..]);
    let config = CutConfiguration::standard(n, &w)?;
    if config.w_norm != Qf::from_bigint(BigInt::from(b)) {
        return Err(Error::CertificateFailed(format!(
            "<w,w> = {} differs from b = {b}",
            config.w_norm
        )));
    }
    let certs = vec![
        is_admissible(&config.form)?,
        disjointness_certificate(&config)?,
        residue_certificate(&config)?,
        trace_ring_certificate(&config, Some(d))?,
        nonarithmeticity_certificate(&config)?,
    ];
    if let Some(bad) = certs.iter().find(|c| !c.is_verified()) {
        return Err(Error::CertificateFailed(format!(
            "{} certificate for n = {n}, d = {d}: {}",
            bad.statement, bad.note
        )));
    }
    Ok((config, certs))
}

/// The adjoint trace ring `Z[1/d]` realized by `construct_gamma_d`.
pub fn realized_ring(config: &CutConfiguration) -> Result<SubringOfQ> {
    let b = trace_ring_bounds(config.n, &config.w)?;
    if !b.pinched {
        return Err(Error::Precondition("trace-ring bounds do not pinch".into()));
    }
    Ok(b.lower)
}

/// Configuration over `f = -sqrt(d) x0^2 + x1^2 + ... + xn^2` with
/// `w = (1, a, b1, b2, b3, b4, 0, ..., 0)`, plus the per-instance check that
/// `xi = 4(n-1) a^2/<w,w>` is not an algebraic integer.
pub fn construct_quadfield(
    n: usize,
    d: u64,
    a: i64,
    b: u64,
) -> Result<(CutConfiguration, Certificate)> {
    if n < 5 {
        return Err(Error::InvalidParameter(format!("n must be >= 5, got {n}")));
    }
    if d <= 1 || !is_squarefree(d) {
        return Err(Error::NotSquarefree(d));
    }
    // 0 <= b < sqrt d and a^2 + b >= sqrt d, compared exactly by squaring
    if b.checked_mul(b).is_none_or(|bb| bb >= d) {
        return Err(Error::Precondition(format!("need b < sqrt({d}), got b = {b}")));
    }
    let s = (a as i128) * (a as i128) + b as i128;
    if s * s < d as i128 {
        return Err(Error::Precondition(format!(
            "need a^2 + b >= sqrt({d}), got a^2 + b = {s}"
        )));
    }
    let form = QuadraticForm::sqrt_twisted(d, n + 1)?;
    if !is_admissible(&form)?.is_verified() {
        return Err(Error::Precondition("form is not admissible".into()));
    }
    let parts = four_squares(b);
    let mut w = vec![0i64; n + 1];
    w[0] = 1;
    w[1] = a;
    for (i, p) in parts.iter().enumerate() {
        w[2 + i] = *p as i64;
    }
    let config = CutConfiguration::new(n, form, Vector::from_ints(&w))?;
    let xi = (Qf::from_int(4 * (n as i64 - 1)) * &config.w1 * &config.w1)
        .checked_div(&config.w_norm)
        .ok_or(Error::Isotropic)?;
    let integral = is_algebraic_integer(&xi);
    let cert = Certificate::new(
        Statement::QuadfieldIntegrality,
        if integral { Verdict::Failed } else { Verdict::Verified },
    )
    .with_witness("xi_trace", xi.trace())
    .with_witness("xi_norm", xi.norm())
    .with_witness("xi", xi)
    .with_witness("w_norm", config.w_norm.clone())
    .with_witness("a", a)
    .with_witness("b", b)
    .with_tag("trace-norm-integrality")
    .with_note(if integral {
        "4(n-1) a^2/<w,w> is an algebraic integer: no enlargement of O_k witnessed"
    } else {
        "4(n-1) a^2/<w,w> is not an algebraic integer"
    });
    Ok((config, cert))
}

/// All `(a, b)` with `1 <= a <= bound` meeting the constraints whose
/// integrality certificate verifies.
pub fn search_quadfield(n: usize, d: u64, bound: u64) -> Result<Vec<(i64, u64)>> {
    if d <= 1 || !is_squarefree(d) {
        return Err(Error::NotSquarefree(d));
    }
    let mut found = Vec::new();
    for a in 1..=bound as i64 {
        let mut b = 0u64;
        while b * b < d {
            let s = (a as i128) * (a as i128) + b as i128;
            if s * s >= d as i128 {
                let (_, cert) = construct_quadfield(n, d, a, b)?;
                if cert.is_verified() {
                    found.push((a, b));
                }
            }
            b += 1;
        }
    }
    Ok(found)
}

/// Checks that `rho1` and `rho2` are `f`-orthogonal.
pub fn reflections_orthogonal(config: &CutConfiguration) -> Result<bool> {
    Ok(is_f_orthogonal(&config.form, &config.rho1)?.orthogonal
        && is_f_orthogonal(&config.form, &config.rho2)?.orthogonal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::rat;

    #[test]
    fn level_b_examples() {
        assert_eq!(build_level_b(5, 3).unwrap(), 3);
        assert_eq!(build_level_b(4, 6).unwrap(), 72);
        assert_eq!(build_level_b(4, 2).unwrap(), 8);
        assert_eq!(build_level_b(4, 12), Err(Error::NotSquarefree(12)));
        assert!(build_level_b(3, 2).is_err());
    }

    #[test]
    fn w1_examples() {
        assert_eq!(choose_w1(3), 2);
        assert_eq!(choose_w1(72), 11);
        assert_eq!(choose_w1(8), 3);
        assert_eq!(choose_w1(1), 2);
    }

    #[test]
    fn hyperbolic_examples() {
        assert_eq!(represent_by_hyperbolic(0, 4).unwrap(), vec![0, 0, 0, 0]);
        assert_eq!(represent_by_hyperbolic(-49, 4).unwrap(), vec![25, 24, 0, 0]);
        assert_eq!(represent_by_hyperbolic(-4, 4).unwrap(), vec![3, 2, 1, 0]);
        assert_eq!(represent_by_hyperbolic(-1, 3).unwrap(), vec![1, 0, 0]);
        assert!(represent_by_hyperbolic(5, 2).is_err());
    }

    #[test]
    fn gamma_d_examples() {
        let (c, certs) = construct_gamma_d(5, 3).unwrap();
        assert_eq!(c.w, Vector::from_ints(&[1, 2, 0, 0, 0, 0]));
        assert_eq!(realized_ring(&c).unwrap().d(), 3);
        assert_eq!(certs.len(), 5);
        let (c, _) = construct_gamma_d(4, 6).unwrap();
        assert_eq!(c.w, Vector::from_ints(&[25, 11, 24, 0, 0]));
        assert_eq!(c.w_norm, Qf::from_int(72));
        assert_eq!(realized_ring(&c).unwrap().d(), 6);
        let (c, _) = construct_gamma_d(4, 2).unwrap();
        assert_eq!(c.w, Vector::from_ints(&[1, 3, 0, 0, 0]));
        assert_eq!(c.w_norm, Qf::from_int(8));
        assert_eq!(realized_ring(&c).unwrap().d(), 2);
        assert!(reflections_orthogonal(&c).unwrap());
        assert_eq!(construct_gamma_d(4, 12).unwrap_err(), Error::NotSquarefree(12));
    }

    #[test]
    fn configuration_rejects_bad_w() {
        assert!(CutConfiguration::standard(5, &[0, 1, 0, 0, 0, 0]).is_err());
        assert!(CutConfiguration::standard(5, &[0, 1, 1, 0, 0, 0]).is_err());
        assert!(CutConfiguration::standard(5, &[2, 1, 0, 0, 0, 0]).is_err());
        let bad = Vector::new(vec![Qf::from_frac(1, 2); 6]);
        assert!(CutConfiguration::new(5, QuadraticForm::standard(6), bad).is_err());
    }

    #[test]
    fn quadfield_examples() {
        let (c, cert) = construct_quadfield(5, 5, 2, 0).unwrap();
        assert_eq!(c.w, Vector::from_ints(&[1, 2, 0, 0, 0, 0]));
        assert_eq!(c.w_norm, Qf::new(5, rat(4, 1), rat(-1, 1)).unwrap());
        let xi = cert.witness("xi").unwrap();
        assert_eq!(xi, &Qf::new(5, rat(256, 11), rat(64, 11)).unwrap());
        assert_eq!(cert.witness("xi_trace").unwrap(), &Qf::from_frac(512, 11));
        assert!(cert.is_verified());

        let (_, cert) = construct_quadfield(5, 2, 1, 1).unwrap();
        assert_eq!(cert.verdict, Verdict::Failed);
        // 2(n-1)(2 + sqrt 2) with n = 5
        assert_eq!(cert.witness("xi").unwrap(), &Qf::new(2, rat(16, 1), rat(8, 1)).unwrap());

        let (c, cert) = construct_quadfield(6, 2, 2, 1).unwrap();
        assert_eq!(c.w_norm, Qf::new(2, rat(5, 1), rat(-1, 1)).unwrap());
        assert_eq!(c.w_norm.norm(), rat(23, 1));
        // 80 (5 + sqrt 2)/23
        assert_eq!(cert.witness("xi").unwrap(), &Qf::new(2, rat(400, 23), rat(80, 23)).unwrap());
        assert!(cert.is_verified());

        assert!(construct_quadfield(5, 2, 1, 2).is_err()); // b >= sqrt 2
        assert!(construct_quadfield(5, 5, 1, 0).is_err()); // 1 < sqrt 5
        assert!(construct_quadfield(4, 5, 2, 0).is_err());
    }

    #[test]
    fn quadfield_search_examples() {
        assert!(search_quadfield(5, 5, 3).unwrap().contains(&(2, 0)));
        assert!(!search_quadfield(5, 2, 1).unwrap().contains(&(1, 1)));
        assert!(search_quadfield(5, 2, 0).unwrap().is_empty());
    }

    #[test]
    fn gamma_d_sweep_invariants() {
        for n in 4..=8usize {
            let mut rings = Vec::new();
            for d in 2..=30u64 {
                if !is_squarefree(d) {
                    continue;
                }
                let (c, _) = construct_gamma_d(n, d).unwrap();
                let b = build_level_b(n, d).unwrap();
                let w = c.w.to_ints().unwrap();
                assert_eq!(c.w_norm, Qf::from_int(b as i64));
                assert_eq!(gcd(w[1].unsigned_abs(), b), 1);
                assert!((w[1] * w[1]) as u64 > b);
                let ring = realized_ring(&c).unwrap();
                assert_eq!(ring.d(), d);
                let four = SubringOfQ::canonicalize(&rat(4 * (n as i64 - 1), b as i64)).unwrap();
                let two = SubringOfQ::canonicalize(&rat(2, b as i64)).unwrap();
                assert_eq!((four.d(), two.d()), (d, d));
                rings.push(ring);
            }
            let mut dedup = rings.clone();
            dedup.sort();
            dedup.dedup();
            assert_eq!(dedup.len(), rings.len());
        }
    }
}
