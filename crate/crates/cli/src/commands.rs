use std::time::Duration;

use cutglue::bundle::Bundle;
use cutglue::certificate::{Certificate, Verdict, Witness};
use cutglue::congruence::{
    check_separation, congruence_level, count_orthogonal_mod, volume_bound_at,
    volume_bound_certificate, CongruenceLevel, CountOptions, CountResult, SpotCheckOptions,
};
use cutglue::construct::{
    build_level_b, construct_gamma_d, construct_quadfield, disjointness_certificate,
    search_quadfield, trace_ring_certificate,
};
use cutglue::forms::{hyperplane_distance, is_admissible};
use cutglue::kernel::is_squarefree;
use cutglue::trace::{nonarithmeticity_certificate, residue_certificate};
use cutglue::{CutConfiguration, QuadraticForm};
use serde::Serialize;
use serde_json::json;

use crate::args::{parse_range, Cli, Command, Common, Format};
use crate::output::{bundle_csv, bundle_text, emit, into_string, join_qf};
use crate::{EXIT_BUDGET, EXIT_CERTIFICATE, EXIT_INVALID, EXIT_OK};

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
}

impl From<cutglue::Error> for CliError {
    fn from(e: cutglue::Error) -> Self {
        let code = match e {
            cutglue::Error::BudgetExceeded { .. } => EXIT_BUDGET,
            cutglue::Error::CertificateFailed(_) => EXIT_CERTIFICATE,
            _ => EXIT_INVALID,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::invalid(format!("cannot write output: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::invalid(format!("csv: {e}"))
    }
}

type Outcome = Result<u8, CliError>;

fn count_options(c: &Common) -> CountOptions {
    CountOptions {
        node_budget: c.node_budget,
        workers: c.workers,
        allow_extrapolation: !c.strict,
    }
}

fn spot_options(c: &Common) -> Result<SpotCheckOptions, CliError> {
    if !c.time_box.is_finite() || c.time_box < 0.0 {
        return Err(CliError::invalid("--time-box must be a nonnegative number of seconds"));
    }
    Ok(SpotCheckOptions {
        time_box: Duration::from_secs_f64(c.time_box),
        ..SpotCheckOptions::default()
    })
}

pub fn run(cli: &Cli) -> Outcome {
    let common = &cli.common;
    match &cli.command {
        Command::Construct { n, d } => construct(common, *n, *d),
        Command::Certify { n, w } => certify(common, *n, w),
        Command::Table { n, d } => table(common, n, d),
        Command::GroupOrder { rank, m } => group_order(common, *rank, *m),
        Command::VolumeBound { n, w, m } => volume(common, *n, w, *m),
        Command::Quadfield { n, d, a, b, bound } => quadfield(common, *n, *d, *a, *b, *bound),
    }
}

fn write_bundle(common: &Common, bundle: &Bundle) -> Result<(), CliError> {
    let text = match common.format {
        Format::Json => bundle.to_json() + "\n",
        Format::Text => bundle_text(bundle),
        Format::Csv => bundle_csv(bundle)?,
    };
    emit(&text, common.out.as_deref())?;
    Ok(())
}

fn any_failed(certs: &[Certificate]) -> bool {
    certs.iter().any(|c| c.verdict == Verdict::Failed)
}

fn with_distance(bundle: Bundle, config: &CutConfiguration) -> Bundle {
    match hyperplane_distance(&config.form, &config.v, &config.w) {
        Ok(d) => bundle.with_distance(d),
        Err(_) => bundle,
    }
}

fn construct(common: &Common, n: usize, d: u64) -> Outcome {
    let (config, certs) = construct_gamma_d(n, d)?;
    let ok = certs.iter().all(Certificate::is_verified);
    let bundle = Bundle::new(json!({"command": "construct", "n": n, "d": d}), Some(&config), certs);
    write_bundle(common, &with_distance(bundle, &config))?;
    Ok(if ok { EXIT_OK } else { EXIT_CERTIFICATE })
}

fn certify(common: &Common, n: usize, w: &[i64]) -> Outcome {
    let config = CutConfiguration::standard(n, w)?;
    let certs = vec![
        is_admissible(&config.form)?,
        disjointness_certificate(&config)?,
        residue_certificate(&config)?,
        trace_ring_certificate(&config, None)?,
        nonarithmeticity_certificate(&config)?,
    ];
    let failed = any_failed(&certs);
    let bundle = Bundle::new(json!({"command": "certify", "n": n, "w": w}), Some(&config), certs);
    write_bundle(common, &with_distance(bundle, &config))?;
    Ok(if failed { EXIT_CERTIFICATE } else { EXIT_OK })
}

#[derive(Debug, Serialize)]
struct TableRow {
    n: usize,
    d: u64,
    b: String,
    w: String,
    norm: String,
    ring: String,
    level: String,
    count_method: String,
    verdicts: String,
}

fn table_row(common: &Common, n: usize, d: u64) -> (TableRow, bool) {
    let mut row = TableRow {
        n,
        d,
        b: String::new(),
        w: String::new(),
        norm: String::new(),
        ring: String::new(),
        level: String::new(),
        count_method: String::new(),
        verdicts: String::new(),
    };
    if let Ok(b) = build_level_b(n, d) {
        row.b = b.to_string();
    }
    let (config, certs) = match construct_gamma_d(n, d) {
        Ok(x) => x,
        Err(e) => {
            row.verdicts = format!("error: {e}");
            return (row, false);
        }
    };
    row.w = join_qf(config.w.coords(), ";");
    row.norm = config.w_norm.to_string();
    let mut ok = certs.iter().all(Certificate::is_verified);
    let mut verdicts: Vec<String> = certs
        .iter()
        .map(|c| format!("{}:{}", c.statement, c.verdict))
        .collect();
    if let Some(ring) = certs
        .iter()
        .find(|c| c.statement == cutglue::Statement::TraceRing)
        .and_then(|c| c.witness("lower_ring_d"))
    {
        row.ring = if ring.is_one() {
            "Z".into()
        } else {
            format!("Z[1/{ring}]")
        };
    }
    match congruence_level(&config) {
        Ok(level) => {
            row.level = level.m.to_string();
            match spot_options(common)
                .map_err(|e| e.message)
                .and_then(|o| check_separation(&config, &level, &o).map_err(|e| e.to_string()))
            {
                Ok(sep) => {
                    ok &= sep.is_verified();
                    verdicts.push(format!("{}:{}", sep.statement, sep.verdict));
                }
                Err(e) => {
                    ok = false;
                    verdicts.push(format!("separation:error({e})"));
                }
            }
            row.count_method = match count_orthogonal_mod(&config.form, level.m, &count_options(common)) {
                Ok(c) => c.method.as_str().to_string(),
                Err(cutglue::Error::BudgetExceeded { .. }) => "budget-exceeded".into(),
                Err(e) => format!("error: {e}"),
            };
        }
        Err(e) => {
            ok = false;
            row.level = format!("error: {e}");
        }
    }
    row.verdicts = verdicts.join(" ");
    (row, ok)
}

fn table(common: &Common, n_spec: &str, d_spec: &str) -> Outcome {
    let ns = parse_range(n_spec).map_err(CliError::invalid)?;
    let ds: Vec<u64> = parse_range(d_spec)
        .map_err(CliError::invalid)?
        .into_iter()
        .filter(|&d| d >= 2 && is_squarefree(d))
        .collect();
    if ns.is_empty() {
        return Err(CliError::invalid(format!("empty n range {n_spec:?}")));
    }
    if ds.is_empty() {
        return Err(CliError::invalid(format!("no square-free d >= 2 in {d_spec:?}")));
    }
    let mut rows = Vec::new();
    let mut all_ok = true;
    for &n in &ns {
        for &d in &ds {
            let (row, ok) = table_row(common, n as usize, d);
            all_ok &= ok;
            rows.push(row);
        }
    }
    let text = match common.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in &rows {
                w.serialize(row)?;
            }
            into_string(w)?
        }
        Format::Json => rows
            .iter()
            .map(|r| serde_json::to_string(r).expect("row serializes") + "\n")
            .collect(),
        Format::Text => rows
            .iter()
            .map(|r| {
                format!(
                    "n={} d={} b={} w=({}) <w,w>={} ring={} m={} count={} {}\n",
                    r.n,
                    r.d,
                    r.b,
                    r.w.replace(';', ","),
                    r.norm,
                    r.ring,
                    r.level,
                    r.count_method,
                    r.verdicts
                )
            })
            .collect(),
    };
    emit(&text, common.out.as_deref())?;
    Ok(if all_ok { EXIT_OK } else { EXIT_CERTIFICATE })
}

fn count_text(count: &CountResult) -> String {
    let mut s = format!(
        "{} ({}, {})\n",
        count.value,
        count.method.as_str(),
        if count.verified { "verified" } else { "unverified" }
    );
    for p in &count.parts {
        s += &format!(
            "  {}^{}: {} ({}{})\n",
            p.prime,
            p.exponent,
            p.value,
            p.method.as_str(),
            p.extrapolated_from
                .map(|k| format!(" from 2^{k}"))
                .unwrap_or_default()
        );
    }
    s
}

fn group_order(common: &Common, rank: usize, m: u64) -> Outcome {
    if rank == 0 {
        return Err(CliError::invalid("--rank must be positive"));
    }
    let form = QuadraticForm::standard(rank);
    let count = count_orthogonal_mod(&form, m, &count_options(common))?;
    let diag = form.integer_diagonal().expect("standard form is integral");
    let text = match common.format {
        Format::Json => {
            serde_json::to_string_pretty(&json!({"rank": rank, "m": m, "form": diag, "count": count}))
                .expect("count serializes")
                + "\n"
        }
        Format::Text => format!("|O_f(Z/{m})| for rank {rank}: {}", count_text(&count)),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["rank", "m", "value", "method", "verified"])?;
            w.write_record([
                rank.to_string(),
                m.to_string(),
                count.value.to_string(),
                count.method.as_str().to_string(),
                count.verified.to_string(),
            ])?;
            into_string(w)?
        }
    };
    emit(&text, common.out.as_deref())?;
    Ok(EXIT_OK)
}

fn volume(common: &Common, n: usize, w: &[i64], m: Option<u64>) -> Outcome {
    let config = CutConfiguration::standard(n, w)?;
    let level = match m {
        Some(m) => CongruenceLevel::with_modulus(&config, m)?,
        None => congruence_level(&config)?,
    };
    let spot = spot_options(common)?;
    let input = json!({"command": "volume-bound", "n": n, "w": w, "m": level.m});
    let separation = check_separation(&config, &level, &spot)?;
    if !separation.is_verified() {
        let bundle = Bundle::new(input, Some(&config), vec![separation]);
        write_bundle(common, &bundle)?;
        return Ok(EXIT_CERTIFICATE);
    }
    let (vb, separation) = volume_bound_at(&config, &level, &count_options(common), &spot)?;
    let cert = volume_bound_certificate(&vb);
    let bundle = Bundle::new(input, Some(&config), vec![separation, cert]).with_volume_bound(vb);
    write_bundle(common, &bundle)?;
    Ok(EXIT_OK)
}

fn quadfield(
    common: &Common,
    n: usize,
    d: u64,
    a: Option<i64>,
    b: Option<u64>,
    bound: Option<u64>,
) -> Outcome {
    match (a, b, bound) {
        (Some(a), Some(b), None) => {
            let (config, cert) = construct_quadfield(n, d, a, b)?;
            let failed = cert.verdict == Verdict::Failed;
            let bundle = Bundle::new(
                json!({"command": "quadfield", "n": n, "d": d, "a": a, "b": b}),
                Some(&config),
                vec![cert],
            );
            write_bundle(common, &bundle)?;
            Ok(if failed { EXIT_CERTIFICATE } else { EXIT_OK })
        }
        (None, None, Some(bound)) => {
            let hits = search_quadfield(n, d, bound)?;
            let mut records = Vec::new();
            for &(a, b) in &hits {
                let (_, cert) = construct_quadfield(n, d, a, b)?;
                let xi = cert.witness("xi").cloned().expect("xi witness");
                records.push((a, b, xi));
            }
            let text = match common.format {
                Format::Json => {
                    let hits: Vec<_> = records
                        .iter()
                        .map(|(a, b, xi)| json!({"a": a, "b": b, "xi": Witness(xi.clone())}))
                        .collect();
                    serde_json::to_string_pretty(&json!({"n": n, "d": d, "bound": bound, "hits": hits}))
                        .expect("hits serialize")
                        + "\n"
                }
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(["n", "d", "a", "b", "xi"])?;
                    for (a, b, xi) in &records {
                        w.write_record([n.to_string(), d.to_string(), a.to_string(), b.to_string(), xi.to_string()])?;
                    }
                    into_string(w)?
                }
                Format::Text => records
                    .iter()
                    .map(|(a, b, xi)| format!("a={a} b={b} xi={xi}\n"))
                    .collect(),
            };
            emit(&text, common.out.as_deref())?;
            Ok(EXIT_OK)
        }
        _ => Err(CliError::invalid("quadfield needs either --a and --b, or --bound")),
    }
}
