//! Machine-readable run reports.
//!
//! One JSON document per invocation: suite name, tool version, config echo,
//! one record per check, and an overall verdict that is "pass" exactly when
//! every record passes. Rationals are rendered as "num/den" strings so they
//! survive a parse round trip exactly; interval endpoints are directed
//! decimal strings tagged with the working precision.

use anyhow::{Context, Result};
use hj_core::interval::IntervalValue;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Instant;

pub const PASS: &str = "pass";
pub const FAIL: &str = "fail";
pub const PARTIAL: &str = "partial";

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub command: String,
    pub workers: usize,
    pub seed: u64,
    pub precision: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: String,
    pub values: BTreeMap<String, Value>,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub version: String,
    pub config: ConfigEcho,
    pub records: Vec<CheckRecord>,
    pub overall: String,
}

impl SuiteReport {
    pub fn assemble(suite: &str, config: ConfigEcho, records: Vec<CheckRecord>) -> Self {
        let overall = if records.iter().all(|r| r.status == PASS) {
            PASS
        } else {
            FAIL
        };
        SuiteReport {
            suite: suite.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config,
            records,
            overall: overall.to_string(),
        }
    }

    pub fn passed(&self) -> bool {
        self.overall == PASS
    }
}

/// Wall-clock scope for one check record.
pub struct Timer(Instant);

impl Timer {
    pub fn start() -> Self {
        Timer(Instant::now())
    }

    pub fn record(self, name: &str, pass: bool, values: BTreeMap<String, Value>) -> CheckRecord {
        self.record_status(name, if pass { PASS } else { FAIL }, values)
    }

    pub fn record_status(
        self,
        name: &str,
        status: &str,
        values: BTreeMap<String, Value>,
    ) -> CheckRecord {
        CheckRecord {
            name: name.to_string(),
            status: status.to_string(),
            values,
            elapsed_ms: self.0.elapsed().as_millis() as u64,
        }
    }
}

pub fn rational_str(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn interval_json(iv: &IntervalValue, precision: u32) -> Value {
    let digits = (precision / 3).max(24);
    json!({
        "lo": iv.lo.to_decimal(digits, false),
        "hi": iv.hi.to_decimal(digits, true),
        "precision": precision,
    })
}

pub fn emit(report: &SuiteReport, out: Option<&Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(report).context("serializing report")?;
    println!("{text}");
    if let Some(path) = out {
        fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

/// Shorthand for building the values map of a record.
#[macro_export]
macro_rules! values {
    ($($key:expr => $val:expr),* $(,)?) => {{
        let mut m = ::std::collections::BTreeMap::<String, ::serde_json::Value>::new();
        $(m.insert($key.to_string(), ::serde_json::json!($val));)*
        m
    }};
}
