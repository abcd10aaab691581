//! Self-contained JSON record of a run: the input, the exact configuration and
//! every certificate. [`reverify`] re-derives each verdict from the recorded
//! numbers alone.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::certificate::{Certificate, Statement, Verdict, Witness};
use crate::congruence::VolumeBound;
use crate::construct::CutConfiguration;
use crate::error::{Error, Result};
use crate::forms::{QuadraticForm, SquareMatrix, Vector};
use crate::kernel::{Embedding, Qf};
use crate::subring::SubringOfQ;
use crate::trace::is_algebraic_integer;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigurationRecord {
    pub n: usize,
    pub form: Vec<Witness>,
    pub v: Vec<Witness>,
    pub w: Vec<Witness>,
    pub w_norm: Witness,
    pub w1: Witness,
    pub g: Vec<Vec<Witness>>,
}

impl From<&CutConfiguration> for ConfigurationRecord {
    fn from(c: &CutConfiguration) -> Self {
        let wrap = |xs: &[Qf]| xs.iter().cloned().map(Witness).collect::<Vec<_>>();
        let r = c.g.dim();
        Self {
            n: c.n,
            form: wrap(c.form.coeffs()),
            v: wrap(c.v.coords()),
            w: wrap(c.w.coords()),
            w_norm: Witness(c.w_norm.clone()),
            w1: Witness(c.w1.clone()),
            g: (0..r)
                .map(|i| (0..r).map(|j| Witness(c.g.get(i, j).clone())).collect())
                .collect(),
        }
    }
}

impl ConfigurationRecord {
    /// Rebuilds the configuration from `form` and `w`, checking the stored
    /// derived values against the recomputed ones.
    pub fn rebuild(&self) -> Result<CutConfiguration> {
        let unwrap = |xs: &[Witness]| xs.iter().map(|x| x.0.clone()).collect::<Vec<_>>();
        let form = QuadraticForm::diagonal(unwrap(&self.form))?;
        let w = Vector::new(unwrap(&self.w));
        let config = CutConfiguration::new(self.n, form, w)?;
        let g = SquareMatrix::from_rows(self.g.iter().map(|row| unwrap(row)).collect())?;
        let consistent = config.g == g
            && config.w_norm == self.w_norm.0
            && config.w1 == self.w1.0
            && config.v == Vector::new(unwrap(&self.v));
        if !consistent {
            return Err(Error::CertificateFailed(
                "recorded configuration does not match its recomputation".into(),
            ));
        }
        Ok(config)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Bundle {
    pub input: serde_json::Value,
    pub configuration: Option<ConfigurationRecord>,
    pub certificates: Vec<Certificate>,
    pub versions: BTreeMap<String, String>,
    /// Floating-point hyperbolic distance between the cut hyperplanes.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub distance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub volume_bound: Option<VolumeBound>,
}

pub fn versions() -> BTreeMap<String, String> {
    BTreeMap::from([
        ("cutglue".to_string(), env!("CARGO_PKG_VERSION").to_string()),
        ("schema".to_string(), "1".to_string()),
    ])
}

impl Bundle {
    pub fn new(
        input: serde_json::Value,
        config: Option<&CutConfiguration>,
        certificates: Vec<Certificate>,
    ) -> Self {
        Self {
            input,
            configuration: config.map(ConfigurationRecord::from),
            certificates,
            versions: versions(),
            distance: None,
            volume_bound: None,
        }
    }

    pub fn with_distance(mut self, d: f64) -> Self {
        self.distance = Some(d);
        self
    }

    pub fn with_volume_bound(mut self, vb: VolumeBound) -> Self {
        self.volume_bound = Some(vb);
        self
    }

    pub fn all_verified(&self) -> bool {
        self.certificates.iter().all(Certificate::is_verified)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("bundle serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::InvalidParameter(format!("bundle: {e}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reverification {
    pub statement: Statement,
    pub recorded: Verdict,
    pub recomputed: Verdict,
    /// Witnesses are mutually consistent (and match the configuration, if any).
    pub consistent: bool,
}

impl Reverification {
    pub fn agrees(&self) -> bool {
        self.consistent && self.recorded == self.recomputed
    }
}

fn get<'a>(c: &'a Certificate, name: &str) -> Result<&'a Qf> {
    c.witness(name)
        .ok_or_else(|| Error::CertificateFailed(format!("{}: missing witness {name}", c.statement)))
}

fn get_u64(c: &Certificate, name: &str) -> Result<u64> {
    use num_traits::ToPrimitive;
    get(c, name)?
        .as_rational()
        .filter(|r| r.is_integer())
        .and_then(|r| r.numer().to_u64())
        .ok_or_else(|| Error::CertificateFailed(format!("{}: {name} is not a small integer", c.statement)))
}

fn half_trace_square(tr_g: &Qf, tr_g2: &Qf) -> Qf {
    (tr_g * tr_g - tr_g2).scale(&crate::kernel::rat(1, 2))
}

fn ring_of(q: &Qf) -> Result<Option<u64>> {
    match q.as_rational() {
        Some(r) => Ok(Some(SubringOfQ::canonicalize(r)?.d())),
        None => Ok(None),
    }
}

fn bool_verdict(ok: bool, otherwise: Verdict) -> Verdict {
    if ok {
        Verdict::Verified
    } else {
        otherwise
    }
}

fn recheck(c: &Certificate, config: Option<&CutConfiguration>) -> Result<(Verdict, bool)> {
    let principal = Embedding::Principal;
    Ok(match c.statement {
        Statement::Admissibility => {
            let rank = get_u64(c, "rank")?;
            let d = get_u64(c, "field_d")?;
            let pp = get_u64(c, "principal_positive")?;
            let pn = get_u64(c, "principal_negative")?;
            let mut ok = rank >= 5 && pn == 1 && pp == rank - 1;
            let mut consistent = pp + pn == rank;
            if d > 1 {
                let cp = get_u64(c, "conjugate_positive")?;
                let cn = get_u64(c, "conjugate_negative")?;
                ok &= cp == rank && cn == 0;
                consistent &= cp + cn == rank;
            }
            if let Some(cfg) = config {
                consistent &= cfg.form.rank() as u64 == rank && cfg.form.field_d() == d;
            }
            (bool_verdict(ok, Verdict::Failed), consistent)
        }
        Statement::Disjointness => {
            let vw = get(c, "inner_vw")?;
            let vv = get(c, "norm_v")?;
            let ww = get(c, "norm_w")?;
            let gap = get(c, "gap")?;
            let mut consistent = &(vw * vw - vv * ww) == gap;
            if let Some(cfg) = config {
                consistent &= ww == &cfg.w_norm && vw == &cfg.w1;
            }
            let ok = match gap.sign(principal) {
                std::cmp::Ordering::Greater => true,
                std::cmp::Ordering::Equal => c.has_tag("tangent-at-infinity"),
                std::cmp::Ordering::Less => false,
            };
            (bool_verdict(ok, Verdict::Failed), consistent)
        }
        Statement::Residue => {
            let tr_g = get(c, "tr_g")?;
            let tr_g2 = get(c, "tr_g2")?;
            let tr_ad = get(c, "tr_ad")?;
            let gen = get(c, "generator")?;
            let defect = get(c, "defect")?;
            let mut consistent =
                &half_trace_square(tr_g, tr_g2) == tr_ad && &(tr_ad - gen) == defect;
            if let Some(cfg) = config {
                let n = get_u64(c, "n")?;
                consistent &= n == cfg.n as u64
                    && tr_g == &cfg.g.trace()
                    && tr_g2 == &cfg.g.mul(&cfg.g).trace()
                    && Some(gen.clone())
                        == (Qf::from_int(4 * (cfg.n as i64 - 1)) * &cfg.w1 * &cfg.w1)
                            .checked_div(&cfg.w_norm);
            }
            (bool_verdict(is_algebraic_integer(defect), Verdict::Failed), consistent)
        }
        Statement::Nonarithmeticity => {
            let tr_g = get(c, "tr_g")?;
            let tr_g2 = get(c, "tr_g2")?;
            let tr_ad = get(c, "tr_ad")?;
            let gen = get(c, "generator")?;
            let mut consistent = &half_trace_square(tr_g, tr_g2) == tr_ad;
            if let Some(lower) = c.witness("lower_ring_d") {
                consistent &= ring_of(gen)?.map(Qf::from) == Some(lower.clone());
            }
            if let Some(cfg) = config {
                consistent &= tr_g == &cfg.g.trace() && tr_g2 == &cfg.g.mul(&cfg.g).trace();
            }
            let ok = !is_algebraic_integer(tr_g)
                || !is_algebraic_integer(tr_ad)
                || !is_algebraic_integer(gen);
            (bool_verdict(ok, Verdict::Inconclusive), consistent)
        }
        Statement::TraceRing => {
            let lo = get(c, "generator_lower")?;
            let up = get(c, "generator_upper")?;
            let lower_d = get_u64(c, "lower_ring_d")?;
            let upper_d = get_u64(c, "upper_ring_d")?;
            let mut consistent =
                ring_of(lo)? == Some(lower_d) && ring_of(up)? == Some(upper_d);
            if let Some(cfg) = config {
                let two = Qf::from_int(2);
                consistent &= Some(up.clone()) == two.checked_div(&cfg.w_norm);
            }
            let expected = match c.witness("expected_ring_d") {
                Some(_) => Some(get_u64(c, "expected_ring_d")?),
                None => None,
            };
            let pinched = lower_d == upper_d && expected.is_none_or(|d| d == lower_d);
            let otherwise = if expected.is_some() {
                Verdict::Failed
            } else {
                Verdict::Inconclusive
            };
            (bool_verdict(pinched, otherwise), consistent)
        }
        Statement::Separation => {
            let m = get_u64(c, "m")?;
            let w1_sq = get_u64(c, "w1_sq")?;
            let w_norm = get_u64(c, "w_norm")?;
            let mut ok = m > 2 && m >= 2 * w_norm && m >= 2 * w1_sq && w1_sq >= w_norm && w_norm > 0;
            if let Some(v) = c.witness("spot_check_violations") {
                ok &= v.is_zero();
            }
            let mut consistent = true;
            if let Some(cfg) = config {
                consistent &=
                    Qf::from(w1_sq) == &cfg.w1 * &cfg.w1 && Qf::from(w_norm) == cfg.w_norm;
            }
            (bool_verdict(ok, Verdict::Failed), consistent)
        }
        Statement::VolumeBound => {
            let count = get(c, "count")?;
            let multiplier = get(c, "multiplier")?;
            let consistent = &(count * &Qf::from_int(2)) == multiplier;
            let extrapolated = c
                .method_tags
                .iter()
                .any(|t| t.ends_with("stabilization-extrapolated"));
            (bool_verdict(!extrapolated, Verdict::Inconclusive), consistent)
        }
        Statement::QuadfieldIntegrality => {
            let xi = get(c, "xi")?;
            let tr = get(c, "xi_trace")?;
            let nm = get(c, "xi_norm")?;
            let w_norm = get(c, "w_norm")?;
            let a = get(c, "a")?;
            let mut consistent =
                Qf::rational(xi.trace()) == *tr && Qf::rational(xi.norm()) == *nm;
            if let Some(cfg) = config {
                let expected = (Qf::from_int(4 * (cfg.n as i64 - 1)) * a * a).checked_div(w_norm);
                consistent &= w_norm == &cfg.w_norm && a == &cfg.w1 && expected.as_ref() == Some(xi);
            }
            (bool_verdict(!is_algebraic_integer(xi), Verdict::Failed), consistent)
        }
    })
}

/// Re-derives every verdict in the bundle from its witnesses and, when present,
/// the rebuilt configuration.
pub fn reverify(bundle: &Bundle) -> Result<Vec<Reverification>> {
    let config = bundle
        .configuration
        .as_ref()
        .map(ConfigurationRecord::rebuild)
        .transpose()?;
    bundle
        .certificates
        .iter()
        .map(|c| {
            let (recomputed, consistent) = recheck(c, config.as_ref())?;
            Ok(Reverification {
                statement: c.statement,
                recorded: c.verdict,
                recomputed,
                consistent,
            })
        })
        .collect()
}
