//! Machine-checkable verdict records.
//!
//! Every certifier returns a [`Certificate`] carrying the exact values it used,
//! so that a verdict can be re-checked without rerunning the pipeline (see
//! [`crate::bundle::reverify`]).

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::kernel::{Qf, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Statement {
    Admissibility,
    Disjointness,
    Residue,
    Nonarithmeticity,
    TraceRing,
    Separation,
    VolumeBound,
    QuadfieldIntegrality,
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        write!(f, "{}", s.as_str().unwrap_or("?"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Verified,
    Inconclusive,
    Failed,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Verified => "verified",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Failed => "failed",
        })
    }
}

/// An exact witness value. Serialized as `{num, den}` for rationals and
/// `{x, y, d}` for quadratic irrationals, all as decimal strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness(pub Qf);

pub(crate) fn rational_string(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub(crate) fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d == BigInt::from(0) {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => Some(Rational::from_integer(s.parse().ok()?)),
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum WitnessRepr {
    Rational { num: String, den: String },
    Quadratic { x: String, y: String, d: String },
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let q = &self.0;
        let repr = match q.as_rational() {
            Some(r) => WitnessRepr::Rational {
                num: r.numer().to_string(),
                den: r.denom().to_string(),
            },
            None => WitnessRepr::Quadratic {
                x: rational_string(q.x()),
                y: rational_string(q.y()),
                d: q.d().to_string(),
            },
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Witness {
    fn deserialize<D: Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let bad = |what: &str| D::Error::custom(format!("malformed witness: {what}"));
        match WitnessRepr::deserialize(de)? {
            WitnessRepr::Rational { num, den } => {
                let r = parse_rational(&format!("{num}/{den}")).ok_or_else(|| bad(&num))?;
                Ok(Witness(Qf::rational(r)))
            }
            WitnessRepr::Quadratic { x, y, d } => {
                let x = parse_rational(&x).ok_or_else(|| bad(&x))?;
                let y = parse_rational(&y).ok_or_else(|| bad(&y))?;
                let d: u64 = d.parse().map_err(|_| bad(&d))?;
                Qf::new(d, x, y)
                    .map(Witness)
                    .map_err(|e| D::Error::custom(e.to_string()))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub statement: Statement,
    pub verdict: Verdict,
    pub witnesses: BTreeMap<String, Witness>,
    pub method_tags: Vec<String>,
    pub note: String,
}

impl Certificate {
    pub fn new(statement: Statement, verdict: Verdict) -> Self {
        Self {
            statement,
            verdict,
            witnesses: BTreeMap::new(),
            method_tags: Vec::new(),
            note: String::new(),
        }
    }

    pub fn with_witness(mut self, name: &str, value: impl Into<Qf>) -> Self {
        self.witnesses.insert(name.to_string(), Witness(value.into()));
        self
    }

    pub fn with_tag(mut self, tag: &str) -> Self {
        self.method_tags.push(tag.to_string());
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }

    pub fn witness(&self, name: &str) -> Option<&Qf> {
        self.witnesses.get(name).map(|w| &w.0)
    }

    pub fn is_verified(&self) -> bool {
        self.verdict == Verdict::Verified
    }

    pub fn has_tag(&self, tag: &str) -> bool {
        self.method_tags.iter().any(|t| t == tag)
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.verdict, self.statement)?;
        if !self.note.is_empty() {
            write!(f, ": {}", self.note)?;
        }
        for (k, v) in &self.witnesses {
            write!(f, "\n    {k} = {}", v.0)?;
        }
        if !self.method_tags.is_empty() {
            write!(f, "\n    methods: {}", self.method_tags.join(", "))?;
        }
        Ok(())
    }
}

impl From<BigInt> for Qf {
    fn from(n: BigInt) -> Self {
        Qf::from_bigint(n)
    }
}

impl From<u64> for Qf {
    fn from(n: u64) -> Self {
        Qf::from_bigint(BigInt::from(n))
    }
}
