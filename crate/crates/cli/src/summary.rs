//! Machine-readable run summary, printed to stdout as one JSON object, and
//! the built-in reference checks with overridable tolerances.

use serde::Serialize;
use std::collections::BTreeMap;

/// One built-in reference check: a measured value against an expected value
/// with a tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub expected: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, expected: f64, tol: f64) -> Self {
        let pass = (value - expected).abs() <= tol;
        Self {
            name: name.into(),
            value,
            expected,
            tol,
            pass,
        }
    }
}

/// Summary of one subcommand run.
#[derive(Debug, Serialize)]
pub struct RunSummary {
    pub subcommand: &'static str,
    pub input_digest: String,
    pub headline: BTreeMap<String, serde_json::Value>,
    pub checks: Vec<Check>,
    pub checks_enabled: bool,
    pub all_checks_pass: bool,
    pub wall_time_s: f64,
}

impl RunSummary {
    pub fn new(subcommand: &'static str, input_digest: String) -> Self {
        Self {
            subcommand,
            input_digest,
            headline: BTreeMap::new(),
            checks: Vec::new(),
            checks_enabled: true,
            all_checks_pass: true,
            wall_time_s: 0.0,
        }
    }

    pub fn headline_num(&mut self, key: &str, value: f64) {
        self.headline
            .insert(key.to_string(), serde_json::Value::from(round6(value)));
    }

    pub fn headline_raw(&mut self, key: &str, value: serde_json::Value) {
        self.headline.insert(key.to_string(), value);
    }

    pub fn push_check(&mut self, check: Check) {
        self.all_checks_pass &= check.pass;
        self.checks.push(check);
    }

    pub fn finalize(&mut self, started: std::time::Instant) {
        self.wall_time_s = started.elapsed().as_secs_f64();
    }
}

fn round6(value: f64) -> f64 {
    (value * 1e6).round() / 1e6
}

/// Default tolerances for the built-in checks, keyed for `--tol-override`.
pub fn default_tolerances() -> BTreeMap<&'static str, f64> {
    BTreeMap::from([
        ("control.r", 0.03),
        ("control.g", 0.03),
        ("control.eff", 0.02),
        ("control.r1", 0.04),
        ("control.g1", 0.04),
        ("control.eff1", 0.03),
        ("control.pm_semantic", 0.02),
        ("control.pm_shannon", 0.02),
        ("control.pm_eff", 0.01),
        ("control.conservation", 1e-9),
        ("gps.lifespan", 3.0),
        ("rg.s1_gap", 1e-6),
    ])
}

/// Stable 64-bit FNV-1a digest of the resolved configuration document.
pub fn config_digest(value: &serde_json::Value) -> String {
    let canonical = value.to_string(); // serde_json maps are ordered
    let mut hash: u64 = 0xcbf29ce484222325;
    for byte in canonical.as_bytes() {
        hash ^= u64::from(*byte);
        hash = hash.wrapping_mul(0x100000001b3);
    }
    format!("fnv1a64:{hash:016x}")
}
