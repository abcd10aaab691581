//! Acceptance suite. Runs every criterion, prints one line each, and exits
//! nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use cutglue::congruence::{
    count_by_backtracking, count_by_orbits, count_orthogonal_mod, orthogonal_order_ff,
    volume_bound, volume_bound_certificate, CountMethod, CountOptions, SpotCheckOptions,
};
use cutglue::construct::{
    construct_gamma_d, construct_quadfield, realized_ring, trace_ring_certificate,
};
use cutglue::forms::{hyperplane_distance, hyperplanes_disjoint, inner, is_f_orthogonal, norm, reflection, HyperplaneRelation};
use cutglue::kernel::{is_squarefree, rat, Embedding};
use cutglue::trace::{nonarithmeticity_certificate, residue_check, second_elem_symmetric, tr_ad};
use cutglue::{CutConfiguration, QuadraticForm, Qf, SquareMatrix, Vector, Verdict};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Debug>(e: E) -> String {
    format!("{e:?}")
}

fn criterion_1() -> Result<String, String> {
    let form = QuadraticForm::standard(6);
    let v = Vector::from_ints(&[0, 1, 0, 0, 0, 0]);
    let w = Vector::from_ints(&[1, 2, 0, 0, 0, 0]);
    let rep = residue_check(5, &form, &v, &w).map_err(err)?;
    ensure(rep.tr_g == rat(22, 3).into(), || format!("tr g = {}", rep.tr_g))?;
    ensure(rep.tr_g2 == rat(118, 9).into(), || format!("tr g^2 = {}", rep.tr_g2))?;
    ensure(rep.tr_ad == rat(61, 3).into(), || format!("tr Ad = {}", rep.tr_ad))?;
    ensure(rep.residue_generator == rat(64, 3).into(), || {
        format!("generator = {}", rep.residue_generator)
    })?;
    ensure(rep.residue_defect == Qf::from_int(-1), || {
        format!("defect = {}", rep.residue_defect)
    })?;
    Ok(format!(
        "tr g = {}, tr g^2 = {}, tr Ad = {}, defect = {}",
        rep.tr_g, rep.tr_g2, rep.tr_ad, rep.residue_defect
    ))
}

fn criterion_2() -> Result<String, String> {
    let mut rows = 0;
    for n in 4..=8usize {
        let mut rings = Vec::new();
        for d in (2..=30u64).filter(|&d| is_squarefree(d)) {
            let (config, certs) = construct_gamma_d(n, d).map_err(|e| format!("n={n} d={d}: {e}"))?;
            ensure(certs.iter().all(|c| c.is_verified()), || {
                format!("n={n} d={d}: unverified certificate")
            })?;
            let ring = trace_ring_certificate(&config, Some(d)).map_err(err)?;
            ensure(ring.is_verified(), || format!("n={n} d={d}: bounds do not pinch to Z[1/{d}]"))?;
            let nonarith = nonarithmeticity_certificate(&config).map_err(err)?;
            ensure(nonarith.is_verified(), || format!("n={n} d={d}: nonarithmeticity not verified"))?;
            let realized = realized_ring(&config).map_err(err)?;
            ensure(realized.d() == d, || format!("n={n} d={d}: realized {realized}"))?;
            rings.push(realized);
            rows += 1;
        }
        let mut sorted = rings.clone();
        sorted.sort();
        sorted.dedup();
        ensure(sorted.len() == rings.len(), || format!("n={n}: repeated rings"))?;
    }
    Ok(format!("{rows} configurations, rings pairwise distinct per n"))
}

/// Random space-like integral vector for the given diagonal form.
fn random_space_like(rng: &mut ChaCha8Rng, form: &QuadraticForm, bound: i64) -> Vector {
    loop {
        let coords: Vec<i64> = (0..form.rank()).map(|_| rng.gen_range(-bound..=bound)).collect();
        let v = Vector::from_ints(&coords);
        if norm(form, &v).unwrap().is_positive(Embedding::Principal) {
            return v;
        }
    }
}

fn random_lorentzian_form(rng: &mut ChaCha8Rng, rank: usize) -> QuadraticForm {
    let mut coeffs: Vec<i64> = (0..rank).map(|_| rng.gen_range(1..=3)).collect();
    coeffs[0] = -coeffs[0];
    QuadraticForm::from_ints(&coeffs).unwrap()
}

fn criterion_3() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    for i in 0..1000 {
        let rank = 3 + i % 6;
        let form = random_lorentzian_form(&mut rng, rank);
        let k = rng.gen_range(2..=4);
        let mut g = SquareMatrix::identity(rank);
        for _ in 0..k {
            let w = random_space_like(&mut rng, &form, 4);
            g = g.mul(&reflection(&form, &w).map_err(err)?);
        }
        let lhs = tr_ad(&form, &g).map_err(err)?;
        let rhs = second_elem_symmetric(&g);
        ensure(lhs == rhs, || format!("rank {rank}: tr Ad = {lhs}, e2 = {rhs}"))?;
        checked += 1;
    }
    Ok(format!("{checked} products agree exactly"))
}

/// Scan of all `q^(r^2)` matrices.
fn naive_orthogonal_count(diag: &[i64], m: u64) -> u64 {
    let r = diag.len();
    let mi = m as i64;
    let d: Vec<i64> = diag.iter().map(|a| a.rem_euclid(mi)).collect();
    let cells = r * r;
    let mut g = vec![0i64; cells];
    let mut count = 0;
    loop {
        let ok = (0..r).all(|i| {
            (i..r).all(|j| {
                let s: i64 = (0..r).map(|k| g[k * r + i] * d[k] * g[k * r + j]).sum();
                s.rem_euclid(mi) == if i == j { d[i] } else { 0 }
            })
        });
        count += u64::from(ok);
        let mut i = 0;
        loop {
            if i == cells {
                return count;
            }
            g[i] += 1;
            if g[i] < mi {
                break;
            }
            g[i] = 0;
            i += 1;
        }
    }
}

fn criterion_4() -> Result<String, String> {
    let mut report = Vec::new();
    for (diag, q) in [
        (vec![-1i64, 1], 3u64),
        (vec![1, 1], 3),
        (vec![-1, 1], 5),
        (vec![1, 2], 5),
        (vec![-1, 1, 1], 3),
        (vec![-1, 1, 1], 5),
    ] {
        let f = QuadraticForm::from_ints(&diag).unwrap();
        let formula = orthogonal_order_ff(diag.len(), q, &f).map_err(err)?;
        let naive = naive_orthogonal_count(&diag, q);
        ensure(formula == BigUint::from(naive), || {
            format!("{diag:?} mod {q}: formula {formula}, naive {naive}")
        })?;
        report.push(format!("{diag:?}/{q}={naive}"));
    }
    let f = QuadraticForm::standard(3);
    let n3 = orthogonal_order_ff(3, 3, &f).map_err(err)?;
    ensure(n3 == BigUint::from(48u32), || format!("rank 3 mod 3 = {n3}"))?;
    let lifted = count_orthogonal_mod(&f, 9, &CountOptions::default()).map_err(err)?;
    let bt = count_by_backtracking(&f, 9, u64::MAX, 0)
        .map_err(err)?
        .ok_or("unbounded backtracking aborted")?;
    ensure(lifted.method == CountMethod::OddLifting && lifted.verified, || {
        format!("m=9 method {:?}", lifted.method)
    })?;
    ensure(lifted.value == BigUint::from(1296u32) && bt == lifted.value, || {
        format!("m=9: lifted {}, backtracking {bt}", lifted.value)
    })?;
    Ok(format!("{}; rank 3 mod 9 = 27*48 = {bt}", report.join(", ")))
}

fn criterion_5() -> Result<String, String> {
    let mut report = Vec::new();
    for (diag, m) in [
        (vec![-1i64, 1], 2u64),
        (vec![-1, 1], 4),
        (vec![-1, 1], 8),
        (vec![-1, 1, 1], 2),
        (vec![-1, 1, 1], 4),
    ] {
        let f = QuadraticForm::from_ints(&diag).unwrap();
        let naive = BigUint::from(naive_orthogonal_count(&diag, m));
        let bt = count_by_backtracking(&f, m, u64::MAX, 0).map_err(err)?.ok_or("aborted")?;
        let orbits = count_by_orbits(&f, m, u64::MAX, 0).map_err(err)?.ok_or("aborted")?;
        let api = count_orthogonal_mod(&f, m, &CountOptions::default()).map_err(err)?;
        ensure(bt == naive && orbits == naive && api.value == naive, || {
            format!("{diag:?} mod {m}: naive {naive}, backtracking {bt}, orbits {orbits}, api {}", api.value)
        })?;
        ensure(api.method == CountMethod::BacktrackingExact && api.verified, || {
            format!("{diag:?} mod {m}: method {:?}", api.method)
        })?;
        report.push(format!("{diag:?}/{m}={naive}"));
    }
    let f = QuadraticForm::standard(2);
    let crt = count_orthogonal_mod(&f, 12, &CountOptions::default()).map_err(err)?;
    let naive = BigUint::from(naive_orthogonal_count(&[-1, 1], 12));
    ensure(crt.method == CountMethod::Crt && crt.verified && crt.value == naive, || {
        format!("rank 2 mod 12: crt {} ({:?}), naive {naive}", crt.value, crt.method)
    })?;
    Ok(format!("{}; CRT rank 2 mod 12 = {naive}", report.join(", ")))
}

fn criterion_6() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for i in 0..1000 {
        let rank = 3 + i % 7;
        let form = QuadraticForm::standard(rank);
        let w = random_space_like(&mut rng, &form, 6);
        let rho = reflection(&form, &w).map_err(err)?;
        ensure(rho.mul(&rho).is_identity(), || format!("rho^2 != I for {w:?}"))?;
        ensure(is_f_orthogonal(&form, &rho).map_err(err)?.orthogonal, || {
            format!("rho not orthogonal for {w:?}")
        })?;
        ensure(rho.det() == Qf::from_int(-1), || format!("det rho = {}", rho.det()))?;
    }
    Ok("1000 reflections: rho^2 = I, rho^T J rho = J, det = -1".into())
}

fn criterion_7() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut strict, mut other) = (0, 0);
    for i in 0..1000 {
        let rank = 3 + i % 5;
        let form = QuadraticForm::standard(rank);
        let v = random_space_like(&mut rng, &form, 5);
        let w = random_space_like(&mut rng, &form, 5);
        let rel = hyperplanes_disjoint(&form, &v, &w).map_err(err)?;
        let is_strict = rel == HyperplaneRelation::Disjoint { tangent: false };
        // float oracle: arccosh(|<v,w>| / sqrt(<v,v><w,w>)), undefined (no distance) below 1
        let vw = inner(&form, &v, &w).map_err(err)?.embed(Embedding::Principal);
        let vv = norm(&form, &v).map_err(err)?.embed(Embedding::Principal);
        let ww = norm(&form, &w).map_err(err)?.embed(Embedding::Principal);
        let ratio = vw.abs() / (vv * ww).sqrt();
        let oracle = if ratio >= 1.0 { ratio.acosh() } else { 0.0 };
        let lib = match hyperplane_distance(&form, &v, &w) {
            Ok(d) => d,
            Err(cutglue::Error::Intersecting) => 0.0,
            Err(e) => return Err(err(e)),
        };
        ensure((oracle > 1e-9) == is_strict && (lib > 1e-9) == is_strict, || {
            format!("{v:?}, {w:?}: relation {rel:?}, oracle {oracle}, library {lib}")
        })?;
        ensure((oracle - lib).abs() <= 1e-9 * oracle.max(1.0), || {
            format!("distance mismatch: oracle {oracle}, library {lib}")
        })?;
        if is_strict {
            strict += 1;
        } else {
            other += 1;
        }
    }
    Ok(format!("{strict} strictly disjoint, {other} intersecting/tangent/equal, all consistent"))
}

fn criterion_8() -> Result<String, String> {
    let (_, ok) = construct_quadfield(5, 5, 2, 0).map_err(err)?;
    let xi = Qf::new(5, rat(256, 11), rat(64, 11)).map_err(err)?;
    ensure(ok.verdict == Verdict::Verified, || format!("(5,5,2,0): {ok}"))?;
    ensure(ok.witness("xi") == Some(&xi), || format!("(5,5,2,0): xi = {:?}", ok.witness("xi")))?;
    ensure(ok.witness("xi_trace") == Some(&rat(512, 11).into()), || "trace".into())?;
    let (_, bad) = construct_quadfield(5, 2, 1, 1).map_err(err)?;
    let integral = Qf::new(2, rat(16, 1), rat(8, 1)).map_err(err)?;
    ensure(bad.verdict == Verdict::Failed, || format!("(5,2,1,1): {bad}"))?;
    ensure(bad.witness("xi") == Some(&integral), || format!("(5,2,1,1): xi = {:?}", bad.witness("xi")))?;
    Ok(format!("xi = {xi} verified (trace 512/11); xi = {integral} failed"))
}

fn criterion_9() -> Result<String, String> {
    let config = CutConfiguration::standard(5, &[1, 2, 0, 0, 0, 0]).map_err(err)?;
    let (vb, sep) = volume_bound(&config, &CountOptions::default(), &SpotCheckOptions::default())
        .map_err(err)?;
    ensure(vb.level.m == 8, || format!("level {}", vb.level.m))?;
    ensure(sep.is_verified(), || format!("separation: {sep}"))?;
    for (name, value) in [("m", 8u64), ("w1_sq", 4), ("w_norm", 3)] {
        ensure(sep.witness(name) == Some(&Qf::from(value)), || format!("witness {name}"))?;
    }
    ensure(vb.multiplier == &vb.count.value * 2u32, || "multiplier != 2 count".into())?;
    ensure(vb.covolume_factor.symbol == "covol O_f(Z)" && vb.covolume_factor.n == 5, || {
        "covolume symbol".into()
    })?;
    let cert = volume_bound_certificate(&vb);
    ensure(cert.method_tags.iter().any(|t| t.starts_with("count-method:")), || {
        "missing method flag".into()
    })?;
    Ok(format!(
        "m = 8, multiplier = 2 * {} = {} ({}, verified = {}), factor {}",
        vb.count.value,
        vb.multiplier,
        vb.count.method.as_str(),
        vb.count.verified,
        vb.covolume_factor.symbol
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, Check, Duration); 9] = [
        ("worked trace identity", criterion_1, Duration::from_secs(1)),
        ("constructor sweep d<=30, 4<=n<=8", criterion_2, Duration::from_secs(10)),
        ("tr Ad vs characteristic polynomial e2", criterion_3, Duration::from_secs(30)),
        ("finite-field and odd-lifting counts", criterion_4, Duration::from_secs(120)),
        ("2-adic exact counting and CRT", criterion_5, Duration::from_secs(300)),
        ("reflection invariants", criterion_6, Duration::from_secs(10)),
        ("disjointness vs distance", criterion_7, Duration::from_secs(5)),
        ("quadratic-field integrality", criterion_8, Duration::from_secs(1)),
        ("volume-bound structure", criterion_9, Duration::from_secs(60)),
    ];
    let mut failures = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(detail) if elapsed > *limit => Err(format!("{detail}; exceeded time limit")),
            other => other,
        };
        let (status, detail) = match &outcome {
            Ok(d) => ("PASS", d.as_str()),
            Err(e) => {
                failures += 1;
                ("FAIL", e.as_str())
            }
        };
        println!(
            "criterion {}: {status} [{name}] {:.2}s/{}s: {detail}",
            i + 1,
            elapsed.as_secs_f64(),
            limit.as_secs()
        );
    }
    println!("acceptance: {} of 9 passed", 9 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
