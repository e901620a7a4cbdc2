//! Run configuration and resource caps.

use serde::{Deserialize, Serialize};
use std::path::PathBuf;

/// Resource limits. `field_size_cap` bounds `p^d` for table-backed fields;
/// `work_cap` bounds the modeled number of character evaluations (or an
/// equivalent convolution work unit) of a single invocation.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Caps {
    pub field_size_cap: u64,
    pub work_cap: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { field_size_cap: 1 << 26, work_cap: 1 << 30 }
    }
}

impl Caps {
    pub fn from_env() -> Self {
        let mut caps = Caps::default();
        if let Some(v) = std::env::var("KLF_FIELD_CAP").ok().and_then(|s| s.parse().ok()) {
            caps.field_size_cap = v;
        }
        if let Some(v) = std::env::var("KLF_WORK_CAP").ok().and_then(|s| s.parse().ok()) {
            caps.work_cap = v;
        }
        caps
    }
}

/// Method selection for all-fiber sums.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum SumMethod {
    Auto,
    Naive,
    Convolution,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum OutFormat {
    Json,
    Csv,
}

/// Full configuration of a run; embedded verbatim in every report for
/// reproducibility.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunConfig {
    pub p: u64,
    pub a: u32,
    pub n: u32,
    /// linear algebra operation descriptor, e.g. "sym:3"
    pub op: String,
    pub caps: Caps,
    pub cache_dir: Option<PathBuf>,
    pub out: OutFormat,
    pub seed: u64,
    pub precision_bits: u32,
    pub method: SumMethod,
    /// additive character twist: use Theta(c .) with c in F_q^*
    pub twist: Option<Vec<u64>>,
}

impl RunConfig {
    pub fn new(p: u64, a: u32, n: u32, op: &str) -> Self {
        RunConfig {
            p,
            a,
            n,
            op: op.to_string(),
            caps: Caps::from_env(),
            cache_dir: std::env::var("KLF_CACHE_DIR").ok().map(PathBuf::from),
            out: OutFormat::Json,
            seed: 0,
            precision_bits: 128,
            method: SumMethod::Auto,
            twist: None,
        }
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.a)
    }
}
