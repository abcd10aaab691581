//! Counting `{g mod m : g^T J g = J mod m}` for an integral diagonal form.
//!
//! Odd prime powers use the finite-field group orders and smooth lifting.
//! Powers of two are counted exactly by search, either plain column-by-column
//! backtracking or an orbit-stabilizer recursion `|G_r| = |G e0| * |G_{r-1}|`,
//! under a node budget. Past the budget the count is extrapolated from the
//! largest exactly counted level and flagged unverified.

use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::QuadraticForm;
use crate::kernel::factor;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountMethod {
    FieldFormula,
    OddLifting,
    Crt,
    BacktrackingExact,
    StabilizationExtrapolated,
}

impl CountMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            CountMethod::FieldFormula => "field-formula",
            CountMethod::OddLifting => "odd-lifting",
            CountMethod::Crt => "crt",
            CountMethod::BacktrackingExact => "backtracking-exact",
            CountMethod::StabilizationExtrapolated => "stabilization-extrapolated",
        }
    }
}

mod biguint_string {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Count for one prime-power factor `p^k` of the modulus.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimePowerCount {
    pub prime: u64,
    pub exponent: u32,
    #[serde(with = "biguint_string")]
    pub value: BigUint,
    pub method: CountMethod,
    pub verified: bool,
    /// Exponent of the exactly counted level an extrapolation started from.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub extrapolated_from: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountResult {
    #[serde(with = "biguint_string")]
    pub value: BigUint,
    pub method: CountMethod,
    pub verified: bool,
    pub parts: Vec<PrimePowerCount>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountOptions {
    /// Maximum number of candidate tests per exact 2-adic search.
    pub node_budget: u64,
    /// Worker threads for the search; `0` uses the global pool.
    pub workers: usize,
    /// Permit extrapolation when the budget is exhausted.
    pub allow_extrapolation: bool,
}

impl Default for CountOptions {
    fn default() -> Self {
        Self {
            node_budget: 20_000_000,
            workers: 0,
            allow_extrapolation: true,
        }
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    r
}

fn reduce_diag(diag: &[i64], m: u64) -> Vec<u64> {
    diag.iter().map(|&a| a.rem_euclid(m as i64) as u64).collect()
}

fn diag_of(form: &QuadraticForm) -> Result<Vec<i64>> {
    form.integer_diagonal()
        .ok_or_else(|| Error::Precondition("form must have integer coefficients".into()))
}

/// `|O(r, q)|` for a nondegenerate diagonal form over `F_q`, `q` an odd prime.
pub fn orthogonal_order_ff(rank: usize, q: u64, form: &QuadraticForm) -> Result<BigUint> {
    if q < 3 || factor(q).factors() != [(q, 1)] {
        return Err(Error::InvalidParameter(format!("{q} is not an odd prime")));
    }
    let diag = diag_of(form)?;
    if diag.len() != rank {
        return Err(Error::DimensionMismatch {
            expected: rank,
            got: diag.len(),
        });
    }
    let red = reduce_diag(&diag, q);
    if red.contains(&0) {
        return Err(Error::Precondition(format!("form is degenerate mod {q}")));
    }
    Ok(orthogonal_order_from_diag(&red, q))
}

fn orthogonal_order_from_diag(red: &[u64], q: u64) -> BigUint {
    let r = red.len() as u32;
    let qb = BigUint::from(q);
    let two = BigUint::from(2u32);
    let prod = |upto: u32| -> BigUint {
        (1..=upto).fold(BigUint::one(), |acc, i| acc * (qb.pow(2 * i) - 1u32))
    };
    if r % 2 == 1 {
        let m = (r - 1) / 2;
        two * qb.pow(m * m) * prod(m)
    } else {
        let m = r / 2;
        let disc = red
            .iter()
            .fold(1u64, |acc, &a| ((acc as u128 * a as u128) % q as u128) as u64);
        let sign = if m % 2 == 1 { q - disc } else { disc } % q;
        let eps_plus = pow_mod(sign, (q - 1) / 2, q) == 1;
        let qm = qb.pow(m);
        let factor_m = if eps_plus { qm - 1u32 } else { qm + 1u32 };
        two * qb.pow(m * (m - 1)) * factor_m * prod(m - 1)
    }
}

/// Number of `x in (Z/m)^r` with `f(x) = c mod m`, by convolution over residues.
pub fn count_norm_vectors_mod(form: &QuadraticForm, c: i64, m: u64) -> Result<BigUint> {
    if m < 2 {
        return Err(Error::InvalidParameter("modulus must be >= 2".into()));
    }
    let diag = reduce_diag(&diag_of(form)?, m);
    let mu = m as usize;
    let mut hist = vec![BigUint::zero(); mu];
    hist[0] = BigUint::one();
    for a in diag {
        // how many x give each value a x^2
        let mut single = vec![0u64; mu];
        for x in 0..m {
            let v = ((a as u128 * x as u128 * x as u128) % m as u128) as usize;
            single[v] += 1;
        }
        let mut next = vec![BigUint::zero(); mu];
        for (s, h) in hist.iter().enumerate() {
            if h.is_zero() {
                continue;
            }
            for (t, &k) in single.iter().enumerate() {
                if k > 0 {
                    next[(s + t) % mu] += h * k;
                }
            }
        }
        hist = next;
    }
    Ok(hist[c.rem_euclid(m as i64) as usize].clone())
}

/// Shared search state: residues, budget accounting and abort flag.
struct Search<'a> {
    diag: &'a [u64],
    m: u64,
    budget: u64,
    used: &'a AtomicU64,
    aborted: &'a AtomicBool,
}

impl Search<'_> {
    fn r(&self) -> usize {
        self.diag.len()
    }

    fn charge(&self, n: u64) -> bool {
        let total = self.used.fetch_add(n, Ordering::Relaxed) + n;
        if total > self.budget {
            self.aborted.store(true, Ordering::Relaxed);
            return false;
        }
        !self.aborted.load(Ordering::Relaxed)
    }

    /// All vectors with `f(x) = c`, flattened with stride `r`.
    fn norm_vectors(&self, c: u64) -> Option<Vec<u32>> {
        let r = self.r();
        let total = (self.m as u128).checked_pow(r as u32)?;
        if total > self.budget as u128 || !self.charge(total as u64) {
            self.aborted.store(true, Ordering::Relaxed);
            return None;
        }
        let m = self.m;
        let mut out = Vec::new();
        let mut x = vec![0u64; r];
        loop {
            let s = x
                .iter()
                .zip(self.diag)
                .fold(0u64, |acc, (&xi, &a)| (acc + a * xi % m * xi) % m);
            if s == c {
                out.extend(x.iter().map(|&v| v as u32));
            }
            let mut i = 0;
            loop {
                if i == r {
                    return Some(out);
                }
                x[i] += 1;
                if x[i] < m {
                    break;
                }
                x[i] = 0;
                i += 1;
            }
        }
    }

    /// `J c` reduced mod m, used for orthogonality tests against later columns.
    fn weighted(&self, c: &[u32]) -> Vec<u64> {
        c.iter()
            .zip(self.diag)
            .map(|(&x, &a)| a * x as u64 % self.m)
            .collect()
    }

    fn orthogonal_to_all(&self, x: &[u32], weighted: &[Vec<u64>]) -> bool {
        weighted.iter().all(|wc| {
            wc.iter()
                .zip(x)
                .fold(0u64, |acc, (&a, &b)| (acc + a * b as u64) % self.m)
                == 0
        })
    }

    /// Number of completions of the frame `weighted` using columns `j..r`,
    /// or `None` on budget exhaustion. With `first_only`, stops at one.
    fn completions(
        &self,
        j: usize,
        lists: &[&[u32]],
        weighted: &mut Vec<Vec<u64>>,
        first_only: bool,
    ) -> Option<u128> {
        let r = self.r();
        if j == lists.len() {
            return Some(1);
        }
        const BATCH: u64 = 1024;
        let mut total = 0u128;
        let mut pending = 0u64;
        for x in lists[j].chunks_exact(r) {
            pending += 1;
            if pending == BATCH {
                if !self.charge(pending) {
                    return None;
                }
                pending = 0;
            }
            if !self.orthogonal_to_all(x, weighted) {
                continue;
            }
            if j + 1 == lists.len() {
                total += 1;
            } else {
                weighted.push(self.weighted(x));
                let sub = self.completions(j + 1, lists, weighted, first_only);
                weighted.pop();
                total += sub?;
            }
            if first_only && total > 0 {
                break;
            }
        }
        if !self.charge(pending) {
            return None;
        }
        if first_only {
            total = total.min(1);
        }
        Some(total)
    }
}

fn with_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    if workers == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Exact count by plain column backtracking; works for any modulus.
/// Returns `None` when the budget is exhausted.
pub fn count_by_backtracking(form: &QuadraticForm, m: u64, budget: u64, workers: usize) -> Result<Option<BigUint>> {
    if m < 2 {
        return Err(Error::InvalidParameter("modulus must be >= 2".into()));
    }
    let diag = reduce_diag(&diag_of(form)?, m);
    let used = AtomicU64::new(0);
    let aborted = AtomicBool::new(false);
    let s = Search {
        diag: &diag,
        m,
        budget,
        used: &used,
        aborted: &aborted,
    };
    let r = diag.len();
    let mut cache: HashMap<u64, Vec<u32>> = HashMap::new();
    for &c in &diag {
        if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(c) {
            match s.norm_vectors(c) {
                Some(v) => {
                    e.insert(v);
                }
                None => return Ok(None),
            }
        }
    }
    let lists: Vec<&[u32]> = diag.iter().map(|c| cache[c].as_slice()).collect();
    let first = lists[0];
    if !s.charge((first.len() / r) as u64) {
        return Ok(None);
    }
    let parts: Vec<Option<u128>> = with_pool(workers, || {
        first
            .par_chunks_exact(r)
            .map(|x| {
                let mut weighted = vec![s.weighted(x)];
                s.completions(1, &lists, &mut weighted, false)
            })
            .collect()
    });
    if aborted.load(Ordering::Relaxed) {
        return Ok(None);
    }
    Ok(Some(parts.into_iter().map(|p| p.expect("not aborted")).fold(
        BigUint::zero(),
        |acc, v| acc + BigUint::from(v),
    )))
}

/// Number of classes [`symmetry_classes`] would produce, if it fits in `u128`.
fn symmetry_class_count(diag: &[u64], m: u64) -> Option<u128> {
    let values = (m / 2 + 1) as u128;
    let mut sizes: Vec<(u64, u128)> = Vec::new();
    for &a in diag {
        match sizes.iter_mut().find(|(b, _)| *b == a) {
            Some((_, k)) => *k += 1,
            None => sizes.push((a, 1)),
        }
    }
    // multisets of size k from `values` symbols: C(values + k - 1, k)
    sizes.iter().try_fold(1u128, |acc, &(_, k)| {
        let mut c = 1u128;
        for i in 0..k {
            c = c.checked_mul(values + i)? / (i + 1);
        }
        acc.checked_mul(c)
    })
}

/// Canonical representatives of `(Z/m)^r` modulo coordinate sign changes and
/// permutations inside blocks of equal diagonal entries, with class sizes.
fn symmetry_classes(diag: &[u64], m: u64) -> Vec<(Vec<u32>, u128)> {
    let half = m / 2;
    let sign_images = |v: u64| -> u128 {
        if v == 0 || 2 * v == m {
            1
        } else {
            2
        }
    };
    // blocks of coordinate positions sharing a diagonal value
    let mut blocks: Vec<(u64, Vec<usize>)> = Vec::new();
    for (i, &a) in diag.iter().enumerate() {
        match blocks.iter_mut().find(|(b, _)| *b == a) {
            Some((_, idx)) => idx.push(i),
            None => blocks.push((a, vec![i])),
        }
    }
    // per block: nondecreasing sequences over 0..=half with multiplicities
    let mut per_block: Vec<Vec<(Vec<u64>, u128)>> = Vec::new();
    for (_, idx) in &blocks {
        let k = idx.len();
        let mut seqs = Vec::new();
        let mut cur = Vec::with_capacity(k);
        fn rec(
            k: usize,
            lo: u64,
            half: u64,
            cur: &mut Vec<u64>,
            out: &mut Vec<Vec<u64>>,
        ) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for v in lo..=half {
                cur.push(v);
                rec(k, v, half, cur, out);
                cur.pop();
            }
        }
        rec(k, 0, half, &mut cur, &mut seqs);
        let fact = |n: usize| (1..=n as u128).product::<u128>();
        let with_mult = seqs
            .into_iter()
            .map(|s| {
                let mut mult = fact(k);
                let mut i = 0;
                while i < s.len() {
                    let mut j = i;
                    while j < s.len() && s[j] == s[i] {
                        j += 1;
                    }
                    mult /= fact(j - i);
                    i = j;
                }
                let signs: u128 = s.iter().map(|&v| sign_images(v)).product();
                (s, mult * signs)
            })
            .collect();
        per_block.push(with_mult);
    }
    let mut out = Vec::new();
    let mut choice = vec![0usize; per_block.len()];
    loop {
        let mut rep = vec![0u32; diag.len()];
        let mut mult = 1u128;
        for (b, &c) in choice.iter().enumerate() {
            let (seq, mu) = &per_block[b][c];
            for (pos, &v) in blocks[b].1.iter().zip(seq) {
                rep[*pos] = v as u32;
            }
            mult *= mu;
        }
        out.push((rep, mult));
        let mut b = 0;
        loop {
            if b == choice.len() {
                return out;
            }
            choice[b] += 1;
            if choice[b] < per_block[b].len() {
                break;
            }
            choice[b] = 0;
            b += 1;
        }
    }
}

/// Exact count through `|G(diag)| = |orbit of e0| * |G(diag[1..])|`, valid when
/// every diagonal entry is a unit mod `m`. Orbit membership of each symmetry
/// class is decided by searching for one completion.
pub fn count_by_orbits(form: &QuadraticForm, m: u64, budget: u64, workers: usize) -> Result<Option<BigUint>> {
    if m < 2 {
        return Err(Error::InvalidParameter("modulus must be >= 2".into()));
    }
    let diag = reduce_diag(&diag_of(form)?, m);
    if diag.iter().any(|&a| num_integer::gcd(a, m) != 1) {
        return Err(Error::Precondition(format!(
            "orbit counting needs unit diagonal entries mod {m}"
        )));
    }
    let used = AtomicU64::new(0);
    let aborted = AtomicBool::new(false);
    let mut total = BigUint::one();
    for start in 0..diag.len() {
        let sub = &diag[start..];
        let s = Search {
            diag: sub,
            m,
            budget,
            used: &used,
            aborted: &aborted,
        };
        let Some(orbit) = orbit_size(&s, workers) else {
            return Ok(None);
        };
        total *= BigUint::from(orbit);
    }
    Ok(Some(total))
}

fn orbit_size(s: &Search<'_>, workers: usize) -> Option<u128> {
    let r = s.r();
    let m = s.m;
    let target = s.diag[0];
    let class_count = symmetry_class_count(s.diag, m).filter(|&c| c <= s.budget as u128);
    if !class_count.is_some_and(|c| s.charge(c as u64)) {
        s.aborted.store(true, Ordering::Relaxed);
        return None;
    }
    let classes: Vec<(Vec<u32>, u128)> = symmetry_classes(s.diag, m)
        .into_iter()
        .filter(|(x, _)| {
            x.iter()
                .zip(s.diag)
                .fold(0u64, |acc, (&xi, &a)| (acc + a * (xi as u64) % m * xi as u64) % m)
                == target
        })
        .collect();
    if r == 1 {
        return Some(classes.iter().map(|(_, k)| k).sum());
    }
    let mut cache: HashMap<u64, Vec<u32>> = HashMap::new();
    for &c in &s.diag[1..] {
        if let std::collections::hash_map::Entry::Vacant(e) = cache.entry(c) {
            e.insert(s.norm_vectors(c)?);
        }
    }
    let lists: Vec<&[u32]> = std::iter::once(&[][..])
        .chain(s.diag[1..].iter().map(|c| cache[c].as_slice()))
        .collect();
    let found: Vec<Option<u128>> = with_pool(workers, || {
        classes
            .par_iter()
            .map(|(rep, mult)| {
                let mut weighted = vec![s.weighted(rep)];
                let ext = s.completions(1, &lists, &mut weighted, true)?;
                Some(if ext > 0 { *mult } else { 0 })
            })
            .collect()
    });
    if s.aborted.load(Ordering::Relaxed) {
        return None;
    }
    found.into_iter().sum()
}

fn count_two_power(
    form: &QuadraticForm,
    k: u32,
    opts: &CountOptions,
) -> Result<Option<BigUint>> {
    let m = 1u64 << k;
    let diag = diag_of(form)?;
    if diag.iter().all(|a| a % 2 != 0) {
        count_by_orbits(form, m, opts.node_budget, opts.workers)
    } else {
        count_by_backtracking(form, m, opts.node_budget, opts.workers)
    }
}

/// `|{g mod m : g^T J g = J mod m}|`, assembled by CRT over the prime powers of `m`.
pub fn count_orthogonal_mod(form: &QuadraticForm, m: u64, opts: &CountOptions) -> Result<CountResult> {
    if m < 2 {
        return Err(Error::InvalidParameter("modulus must be >= 2".into()));
    }
    let diag = diag_of(form)?;
    let r = diag.len() as u32;
    let dim = r * (r - 1) / 2;
    let mut parts = Vec::new();
    for &(p, k) in factor(m).factors() {
        if p == 2 {
            let mut exact = None;
            let mut level = k;
            while level >= 1 {
                if let Some(v) = count_two_power(form, level, opts)? {
                    exact = Some(v);
                    break;
                }
                if !opts.allow_extrapolation {
                    return Err(Error::BudgetExceeded {
                        budget: opts.node_budget,
                        modulus: 1 << k,
                    });
                }
                level -= 1;
            }
            let Some(base) = exact else {
                return Err(Error::BudgetExceeded {
                    budget: opts.node_budget,
                    modulus: 2,
                });
            };
            if level == k {
                parts.push(PrimePowerCount {
                    prime: 2,
                    exponent: k,
                    value: base,
                    method: CountMethod::BacktrackingExact,
                    verified: true,
                    extrapolated_from: None,
                });
            } else {
                let value = base * BigUint::from(2u32).pow(dim * (k - level));
                parts.push(PrimePowerCount {
                    prime: 2,
                    exponent: k,
                    value,
                    method: CountMethod::StabilizationExtrapolated,
                    verified: false,
                    extrapolated_from: Some(level),
                });
            }
        } else {
            let red = reduce_diag(&diag, p);
            if red.contains(&0) {
                return Err(Error::Precondition(format!(
                    "diagonal entries must be units mod {p}"
                )));
            }
            let base = orthogonal_order_from_diag(&red, p);
            let value = base * BigUint::from(p).pow(dim * (k - 1));
            parts.push(PrimePowerCount {
                prime: p,
                exponent: k,
                value,
                method: if k == 1 {
                    CountMethod::FieldFormula
                } else {
                    CountMethod::OddLifting
                },
                verified: true,
                extrapolated_from: None,
            });
        }
    }
    let value = parts.iter().fold(BigUint::one(), |acc, p| acc * &p.value);
    let verified = parts.iter().all(|p| p.verified);
    let method = match parts.as_slice() {
        [single] => single.method,
        _ => CountMethod::Crt,
    };
    Ok(CountResult {
        value,
        method,
        verified,
        parts,
    })
}

/// Ratio `N_{k+1} / N_k` at `p = 2` over the exactly countable levels, as
/// `(k, ratio)` pairs. Used to inspect where the 2-adic count stabilizes.
pub fn two_adic_ratios(form: &QuadraticForm, max_k: u32, opts: &CountOptions) -> Result<Vec<(u32, f64)>> {
    let mut prev: Option<BigUint> = None;
    let mut out = Vec::new();
    for k in 1..=max_k {
        let Some(v) = count_two_power(form, k, opts)? else {
            break;
        };
        if let Some(p) = prev {
            let ratio = v.to_f64().unwrap_or(f64::NAN) / p.to_f64().unwrap_or(f64::NAN);
            out.push((k - 1, ratio));
        }
        prev = Some(v);
    }
    Ok(out)
}
