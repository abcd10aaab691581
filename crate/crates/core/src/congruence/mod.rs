//! Level-`m` congruence subgroups of the reflection lattice, the separation
//! premises they must satisfy, and the resulting volume bound
//! `V_w <= 2 |O_f(Z/m)| covol O_f(Z)`.

mod count;

use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use count::{
    count_by_backtracking, count_by_orbits, count_norm_vectors_mod, count_orthogonal_mod,
    orthogonal_order_ff, two_adic_ratios, CountMethod, CountOptions, CountResult,
    PrimePowerCount,
};

use crate::certificate::{Certificate, Statement, Verdict};
use crate::construct::CutConfiguration;
use crate::error::{Error, Result};
use crate::kernel::Qf;

/// Level `m = max(3, 2 w1^2)` with the quantities it was derived from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruenceLevel {
    pub m: u64,
    pub provenance: LevelProvenance,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelProvenance {
    pub w1_sq: u64,
    pub w_norm: u64,
    /// `m > 2`: torsion-free
    pub torsion_free: bool,
    /// `m >= 2 w1^2`
    pub covers_w1: bool,
    /// `w1^2 >= <w,w> > 0`
    pub cut_condition: bool,
}

impl LevelProvenance {
    fn for_level(m: u64, w1_sq: u64, w_norm: u64) -> Self {
        Self {
            w1_sq,
            w_norm,
            torsion_free: m > 2,
            covers_w1: m >= 2 * w1_sq,
            cut_condition: w1_sq >= w_norm && w_norm > 0,
        }
    }
}

impl CongruenceLevel {
    /// An explicit level for the given configuration, not necessarily the canonical one.
    pub fn with_modulus(config: &CutConfiguration, m: u64) -> Result<Self> {
        let (w1_sq, w_norm) = integer_data(config)?;
        Ok(Self {
            m,
            provenance: LevelProvenance::for_level(m, w1_sq, w_norm),
        })
    }
}

fn integer_data(config: &CutConfiguration) -> Result<(u64, u64)> {
    if !config.is_rational() {
        return Err(Error::NotRational);
    }
    let as_u64 = |q: &Qf| -> Result<u64> {
        q.as_rational()
            .filter(|r| r.is_integer())
            .and_then(|r| r.numer().to_u64())
            .ok_or_else(|| Error::TooLarge(q.to_string()))
    };
    let w1_sq = as_u64(&(&config.w1 * &config.w1))?;
    let w_norm = as_u64(&config.w_norm)?;
    Ok((w1_sq, w_norm))
}

pub fn congruence_level(config: &CutConfiguration) -> Result<CongruenceLevel> {
    let (w1_sq, _) = integer_data(config)?;
    let m = w1_sq
        .checked_mul(2)
        .ok_or_else(|| Error::TooLarge(format!("2*{w1_sq}")))?
        .max(3);
    CongruenceLevel::with_modulus(config, m)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpotCheckOptions {
    pub seed: u64,
    pub attempts: usize,
    pub max_word_len: usize,
    /// Largest order mod `m` searched for a word before giving up on it.
    pub max_order: u64,
    pub time_box: Duration,
}

impl Default for SpotCheckOptions {
    fn default() -> Self {
        Self {
            seed: 0x5eed,
            attempts: 400,
            max_word_len: 12,
            max_order: 4096,
            time_box: Duration::from_secs(5),
        }
    }
}

type IntMatrix = Vec<Vec<BigInt>>;

fn int_identity(r: usize) -> IntMatrix {
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

fn int_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let r = a.len();
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| (0..r).map(|k| &a[i][k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn int_pow(a: &IntMatrix, mut e: u64) -> IntMatrix {
    let mut base = a.clone();
    let mut acc = int_identity(a.len());
    while e > 0 {
        if e & 1 == 1 {
            acc = int_mul(&acc, &base);
        }
        e >>= 1;
        if e > 0 {
            base = int_mul(&base, &base);
        }
    }
    acc
}

fn mod_mul(a: &[Vec<i64>], b: &[Vec<i64>], m: i64) -> Vec<Vec<i64>> {
    let r = a.len();
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| (0..r).map(|k| a[i][k] * b[k][j]).sum::<i64>().rem_euclid(m))
                .collect()
        })
        .collect()
}

fn is_mod_identity(a: &[Vec<i64>]) -> bool {
    a.iter()
        .enumerate()
        .all(|(i, row)| row.iter().enumerate().all(|(j, &x)| x == i64::from(i == j)))
}

/// Integral reflection `x -> x - (2<x,u>/<u,u>) u` as a matrix, for `<u,u>` in {1, 2}.
fn integral_reflection(diag: &[i64], u: &[i64], uu: i64) -> Vec<Vec<i64>> {
    let r = diag.len();
    (0..r)
        .map(|i| {
            (0..r)
                .map(|j| i64::from(i == j) - 2 * u[i] * u[j] * diag[j] / uu)
                .collect()
        })
        .collect()
}

/// Reflection normals with entries in {-1, 0, 1} and norm 1 or 2.
fn small_normals(diag: &[i64]) -> Vec<(Vec<i64>, i64)> {
    let r = diag.len();
    let mut out = Vec::new();
    let mut u = vec![-1i64; r];
    loop {
        let uu: i64 = u.iter().zip(diag).map(|(x, a)| a * x * x).sum();
        if (uu == 1 || uu == 2) && u.iter().find(|&&x| x != 0) == Some(&1) {
            out.push((u.clone(), uu));
        }
        let mut i = 0;
        loop {
            if i == r {
                return out;
            }
            u[i] += 1;
            if u[i] <= 1 {
                break;
            }
            u[i] = -1;
            i += 1;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SpotCheckReport {
    pub words_tried: usize,
    pub elements_found: usize,
    pub violations: usize,
    pub timed_out: bool,
}

/// Searches random words in integral reflections for nontrivial `lambda = id mod m`
/// and tests `|<lambda w, w>| >= <w,w>` and `<lambda v, w>^2 >= <w,w>` exactly.
pub fn separation_spot_check(
    config: &CutConfiguration,
    m: u64,
    opts: &SpotCheckOptions,
) -> Result<SpotCheckReport> {
    let diag = config
        .form
        .integer_diagonal()
        .ok_or(Error::NotRational)?;
    let w = config
        .w
        .to_ints()
        .ok_or_else(|| Error::Precondition("w must be integral".into()))?;
    let r = diag.len();
    let normals = small_normals(&diag);
    let gens: Vec<Vec<Vec<i64>>> = normals
        .iter()
        .map(|(u, uu)| integral_reflection(&diag, u, *uu))
        .collect();
    let mi = m as i64;
    let w_big: Vec<BigInt> = w.iter().map(|&x| BigInt::from(x)).collect();
    let dg: Vec<BigInt> = diag.iter().map(|&x| BigInt::from(x)).collect();
    let pair = |x: &[BigInt], y: &[BigInt]| -> BigInt {
        x.iter().zip(y).zip(&dg).map(|((a, b), c)| a * b * c).sum()
    };
    let ww = pair(&w_big, &w_big);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let start = Instant::now();
    let mut report = SpotCheckReport::default();
    for _ in 0..opts.attempts {
        if start.elapsed() > opts.time_box {
            report.timed_out = true;
            break;
        }
        report.words_tried += 1;
        let len = rng.gen_range(1..=opts.max_word_len.max(1));
        let mut word = int_identity_i64(r);
        for _ in 0..len {
            let g = &gens[rng.gen_range(0..gens.len())];
            word = mul_i64(&word, g);
        }
        let reduced: Vec<Vec<i64>> = word
            .iter()
            .map(|row| row.iter().map(|x| x.rem_euclid(mi)).collect())
            .collect();
        let mut power = reduced.clone();
        let mut order = 1u64;
        while !is_mod_identity(&power) && order < opts.max_order {
            power = mod_mul(&power, &reduced, mi);
            order += 1;
        }
        if !is_mod_identity(&power) {
            continue;
        }
        let base: IntMatrix = word
            .iter()
            .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let lambda = int_pow(&base, order);
        if lambda == int_identity(r) {
            continue;
        }
        debug_assert!(lambda.iter().enumerate().all(|(i, row)| row
            .iter()
            .enumerate()
            .all(|(j, x)| (x - BigInt::from(i64::from(i == j))).is_multiple_of(&BigInt::from(m)))));
        report.elements_found += 1;
        let apply = |x: &[BigInt]| -> Vec<BigInt> {
            lambda
                .iter()
                .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
                .collect()
        };
        let lw = apply(&w_big);
        let lv: Vec<BigInt> = lambda.iter().map(|row| row[1].clone()).collect();
        let lww = pair(&lw, &w_big).abs();
        let lvw = pair(&lv, &w_big);
        if lww < ww || &lvw * &lvw < ww {
            report.violations += 1;
        }
    }
    Ok(report)
}

fn int_identity_i64(r: usize) -> Vec<Vec<i64>> {
    (0..r)
        .map(|i| (0..r).map(|j| i64::from(i == j)).collect())
        .collect()
}

fn mul_i64(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let r = a.len();
    (0..r)
        .map(|i| (0..r).map(|j| (0..r).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

/// Checks the numeric premises for level `m` and runs the spot-check.
pub fn check_separation(
    config: &CutConfiguration,
    level: &CongruenceLevel,
    opts: &SpotCheckOptions,
) -> Result<Certificate> {
    let (w1_sq, w_norm) = integer_data(config)?;
    let m = level.m;
    let torsion_free = m > 2;
    let condition_2 = m >= 2 * w_norm;
    let condition_3 = m >= 2 * w1_sq;
    let cut = w1_sq >= w_norm && w_norm > 0;
    let premises = torsion_free && condition_2 && condition_3 && cut;
    let mut cert = Certificate::new(Statement::Separation, Verdict::Failed)
        .with_witness("m", m)
        .with_witness("w1_sq", w1_sq)
        .with_witness("w_norm", w_norm)
        .with_tag("condition-1:congruence-subgroup(cited)");
    for (ok, tag) in [
        (torsion_free, "torsion-free:m>2(cited)"),
        (condition_2, "condition-2:m>=2<w,w>"),
        (condition_3, "condition-3:m>=2w1^2"),
        (cut, "cut:w1^2>=<w,w>>0"),
    ] {
        let mark = if ok { "" } else { "violated:" };
        cert = cert.with_tag(&format!("{mark}{tag}"));
    }
    if !premises {
        let mut failed = Vec::new();
        if !torsion_free {
            failed.push(format!("m = {m} <= 2"));
        }
        if !condition_2 {
            failed.push(format!("m = {m} < 2<w,w> = {}", 2 * w_norm));
        }
        if !condition_3 {
            failed.push(format!("m = {m} < 2w1^2 = {}", 2 * w1_sq));
        }
        if !cut {
            failed.push(format!("w1^2 = {w1_sq}, <w,w> = {w_norm}"));
        }
        return Ok(cert.with_note(failed.join("; ")));
    }
    let report = separation_spot_check(config, m, opts)?;
    cert = cert
        .with_witness("spot_check_elements", report.elements_found as u64)
        .with_witness("spot_check_violations", report.violations as u64);
    if report.violations > 0 {
        return Ok(cert
            .with_tag("spot-check:violation")
            .with_note(format!(
                "{} of {} elements violate the separation inequalities",
                report.violations, report.elements_found
            )));
    }
    cert.verdict = Verdict::Verified;
    if report.elements_found == 0 {
        cert = cert.with_tag("spot-check:premises-only");
    } else {
        cert = cert.with_tag("spot-check:passed");
    }
    if report.timed_out {
        cert = cert.with_tag("spot-check:time-boxed");
    }
    Ok(cert.with_note(format!(
        "premises hold at m = {m}; spot-check found {} nontrivial elements in {} words",
        report.elements_found, report.words_tried
    )))
}

/// Symbolic `covol O_f(Z)` for the standard form of rank `n + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CovolumeSymbol {
    pub symbol: String,
    pub n: usize,
    pub form: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VolumeBound {
    #[serde(with = "biguint_string")]
    pub multiplier: BigUint,
    pub covolume_factor: CovolumeSymbol,
    pub count: CountResult,
    pub level: CongruenceLevel,
}

mod biguint_string {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl std::fmt::Display for VolumeBound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "V_w <= {} * {} (m = {}, count {} via {}{})",
            self.multiplier,
            self.covolume_factor.symbol,
            self.level.m,
            self.count.value,
            self.count.method.as_str(),
            if self.count.verified { "" } else { ", unverified" }
        )
    }
}

/// Bound at the canonical level; fails unless the separation certificate verifies.
pub fn volume_bound(
    config: &CutConfiguration,
    count_opts: &CountOptions,
    spot_opts: &SpotCheckOptions,
) -> Result<(VolumeBound, Certificate)> {
    let level = congruence_level(config)?;
    volume_bound_at(config, &level, count_opts, spot_opts)
}

pub fn volume_bound_at(
    config: &CutConfiguration,
    level: &CongruenceLevel,
    count_opts: &CountOptions,
    spot_opts: &SpotCheckOptions,
) -> Result<(VolumeBound, Certificate)> {
    let separation = check_separation(config, level, spot_opts)?;
    if !separation.is_verified() {
        return Err(Error::Precondition(format!(
            "separation not verified at m = {}: {}",
            level.m, separation.note
        )));
    }
    let form = config.form.integer_diagonal().ok_or(Error::NotRational)?;
    let count = count_orthogonal_mod(&config.form, level.m, count_opts)?;
    let multiplier = &count.value * 2u32;
    let bound = VolumeBound {
        multiplier,
        covolume_factor: CovolumeSymbol {
            symbol: "covol O_f(Z)".into(),
            n: config.n,
            form,
        },
        count,
        level: *level,
    };
    Ok((bound, separation))
}

pub fn volume_bound_certificate(bound: &VolumeBound) -> Certificate {
    let verdict = if bound.count.verified {
        Verdict::Verified
    } else {
        Verdict::Inconclusive
    };
    let mut cert = Certificate::new(Statement::VolumeBound, verdict)
        .with_witness("m", bound.level.m)
        .with_witness("count", BigInt::from(bound.count.value.clone()))
        .with_witness("multiplier", BigInt::from(bound.multiplier.clone()))
        .with_tag(&format!("count-method:{}", bound.count.method.as_str()))
        .with_tag("covolume:symbolic");
    for part in &bound.count.parts {
        cert = cert.with_tag(&format!(
            "part:{}^{}:{}",
            part.prime,
            part.exponent,
            part.method.as_str()
        ));
    }
    cert.with_note(bound.to_string())
}
