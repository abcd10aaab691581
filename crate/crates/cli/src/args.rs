use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "cutglue", version, about = "Cut-hyperplane constructions, certificates and volume bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Counting worker threads (0 = all cores).
    #[arg(long, default_value_t = 0, global = true)]
    pub workers: usize,
    /// Candidate tests allowed per exact 2-adic count.
    #[arg(long, default_value_t = 20_000_000, global = true)]
    pub node_budget: u64,
    /// Seconds allowed for the separation spot-check.
    #[arg(long, default_value_t = 5.0, global = true)]
    pub time_box: f64,
    /// Refuse extrapolated counts; exit 3 when the node budget runs out.
    #[arg(long, global = true)]
    pub strict: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the witness vector realizing Z[1/d] and certify it.
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u64,
    },
    /// Certify a user-supplied cut vector w for the standard form.
    Certify {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        w: Vec<i64>,
    },
    /// One row per (n, d); ranges like 4-8, 2..=30 or 2,3,5.
    Table {
        #[arg(long)]
        n: String,
        #[arg(long)]
        d: String,
    },
    /// |O_f(Z/m)| for f = -x0^2 + x1^2 + ... of the given rank.
    GroupOrder {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        m: u64,
    },
    /// Congruence level, separation certificate and volume-bound multiplier.
    VolumeBound {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        w: Vec<i64>,
        /// Use this level instead of max(3, 2 w1^2).
        #[arg(long)]
        m: Option<u64>,
    },
    /// Configuration over Q(sqrt d) for given (a, b), or a search over a <= bound.
    Quadfield {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: u64,
        #[arg(long, allow_hyphen_values = true)]
        a: Option<i64>,
        #[arg(long)]
        b: Option<u64>,
        #[arg(long)]
        bound: Option<u64>,
    },
}

/// Parses `4-8`, `4..8`, `4..=8` and comma-separated lists of those, in order,
/// without duplicates. A reversed range is empty.
pub fn parse_range(spec: &str) -> Result<Vec<u64>, String> {
    let mut out: Vec<u64> = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let num = |s: &str| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| format!("bad number {s:?} in range {spec:?}"))
        };
        let (lo, hi) = if let Some((a, b)) = part.split_once("..=") {
            (num(a)?, num(b)?)
        } else if let Some((a, b)) = part.split_once("..") {
            let b = num(b)?;
            if b == 0 {
                continue;
            }
            (num(a)?, b - 1)
        } else if let Some((a, b)) = part.split_once('-') {
            (num(a)?, num(b)?)
        } else {
            let v = num(part)?;
            (v, v)
        };
        for v in lo..=hi {
            if !out.contains(&v) {
                out.push(v);
            }
        }
    }
    Ok(out)
}
