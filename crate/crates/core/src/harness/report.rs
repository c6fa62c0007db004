//! Verification reports: fixed per-task columns, deterministic CSV and JSON.

use serde::ser::{SerializeMap, SerializeSeq};
use serde::{Serialize, Serializer};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// Bumped whenever a task's column list changes.
pub const SCHEMA_VERSION: u32 = 1;

/// Column layout of one task's records.
#[derive(Debug, Clone, PartialEq)]
pub struct Schema {
    pub task: &'static str,
    pub inputs: Vec<&'static str>,
    pub metrics: Vec<&'static str>,
}

impl Schema {
    pub fn new(task: &'static str, inputs: &[&'static str], metrics: &[&'static str]) -> Self {
        Self {
            task,
            inputs: inputs.to_vec(),
            metrics: metrics.to_vec(),
        }
    }
}

/// One evaluated grid point. A failed evaluation keeps its inputs, carries
/// NaN metrics and the error text.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub label: String,
    pub inputs: Vec<f64>,
    pub metrics: Vec<f64>,
    pub pass: bool,
    pub error: Option<String>,
}

impl Record {
    pub fn new(label: impl Into<String>, inputs: Vec<f64>, metrics: Vec<f64>, pass: bool) -> Self {
        Self {
            label: label.into(),
            inputs,
            metrics,
            pass,
            error: None,
        }
    }

    pub fn failed(label: impl Into<String>, inputs: Vec<f64>, n_metrics: usize, error: impl std::fmt::Display) -> Self {
        Self {
            label: label.into(),
            inputs,
            metrics: vec![f64::NAN; n_metrics],
            pass: false,
            error: Some(error.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub count: usize,
    pub min: f64,
    pub max: f64,
    pub p50: f64,
    pub p99: f64,
}

/// Nearest-rank quantile of finite values; `None` when there are none.
pub fn summarize(values: impl IntoIterator<Item = f64>) -> Option<Summary> {
    let mut v: Vec<f64> = values.into_iter().filter(|x| x.is_finite()).collect();
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let rank = |q: f64| v[((q * v.len() as f64).ceil() as usize).clamp(1, v.len()) - 1];
    Some(Summary {
        count: v.len(),
        min: v[0],
        max: v[v.len() - 1],
        p50: rank(0.5),
        p99: rank(0.99),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub schema_version: u32,
    pub config_sha256: String,
    pub seed: Option<u64>,
}

impl Provenance {
    /// Hashes the canonical (compact, key-sorted) JSON of the task config.
    pub fn for_config<C: Serialize>(config: &C, seed: Option<u64>) -> Self {
        let canonical = serde_json::to_value(config)
            .and_then(|v| serde_json::to_string(&v))
            .expect("configs serialize");
        let digest = Sha256::digest(canonical.as_bytes());
        Self {
            tool: "fbstokes",
            version: env!("CARGO_PKG_VERSION"),
            schema_version: SCHEMA_VERSION,
            config_sha256: digest.iter().fold(String::new(), |mut s, b| {
                let _ = write!(s, "{b:02x}");
                s
            }),
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub schema: Schema,
    pub records: Vec<Record>,
    /// Task-level results that are not per-point (a fitted order, λ1, ...).
    pub scalars: Vec<(&'static str, f64)>,
    /// Extra JSON-only payloads, such as a serialized profile.
    pub attachments: BTreeMap<String, serde_json::Value>,
    /// Task-level checks beyond the per-record flags, each with its verdict.
    pub checks: Vec<(String, bool)>,
    pub tolerance: f64,
    pub provenance: Provenance,
}

impl VerificationReport {
    pub fn new(schema: Schema, records: Vec<Record>, tolerance: f64, provenance: Provenance) -> Self {
        Self {
            schema,
            records,
            scalars: Vec::new(),
            attachments: BTreeMap::new(),
            checks: Vec::new(),
            tolerance,
            provenance,
        }
    }

    pub fn with_scalar(mut self, name: &'static str, value: f64) -> Self {
        self.scalars.push((name, value));
        self
    }

    pub fn with_check(mut self, name: impl Into<String>, ok: bool) -> Self {
        self.checks.push((name.into(), ok));
        self
    }

    pub fn passed(&self) -> bool {
        self.records.iter().all(|r| r.pass) && self.checks.iter().all(|c| c.1)
    }

    pub fn summary(&self) -> Vec<(&'static str, Option<Summary>)> {
        self.schema
            .metrics
            .iter()
            .enumerate()
            .map(|(k, name)| (*name, summarize(self.records.iter().map(|r| r.metrics[k]))))
            .collect()
    }

    /// Provenance as `#` comment lines, then a header and one row per record.
    /// Floats use Rust's shortest round-trip form.
    pub fn to_csv(&self) -> String {
        let p = &self.provenance;
        let mut out = String::new();
        let _ = writeln!(out, "# tool={} version={} task={} schema_version={}", p.tool, p.version, self.schema.task, p.schema_version);
        let _ = writeln!(out, "# config_sha256={}", p.config_sha256);
        if let Some(seed) = p.seed {
            let _ = writeln!(out, "# seed={seed}");
        }
        let _ = writeln!(out, "# tolerance={:e} pass={}", self.tolerance, self.passed());
        for (name, v) in &self.scalars {
            let _ = writeln!(out, "# {name}={v:e}");
        }
        for (name, ok) in &self.checks {
            let _ = writeln!(out, "# check {name}={}", if *ok { "pass" } else { "fail" });
        }
        let mut header = vec!["label"];
        header.extend(&self.schema.inputs);
        header.extend(&self.schema.metrics);
        header.extend(["pass", "error"]);
        out.push_str(&header.join(","));
        out.push('\n');
        for r in &self.records {
            let mut cells = vec![csv_text(&r.label)];
            cells.extend(r.inputs.iter().chain(&r.metrics).map(|v| format!("{v:e}")));
            cells.push(r.pass.to_string());
            cells.push(r.error.as_deref().map(csv_text).unwrap_or_default());
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

fn csv_text(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Non-finite floats become strings so that JSON stays lossless.
struct Num(f64);

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.0.is_finite() {
            s.serialize_f64(self.0)
        } else {
            s.serialize_str(&self.0.to_string())
        }
    }
}

struct Fields<'a>(&'a [&'static str], &'a [f64]);

impl Serialize for Fields<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0.iter().zip(self.1) {
            m.serialize_entry(k, &Num(*v))?;
        }
        m.end()
    }
}

struct Records<'a>(&'a Schema, &'a [Record]);

impl Serialize for Records<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.1.len()))?;
        for r in self.1 {
            seq.serialize_element(&RecordJson(self.0, r))?;
        }
        seq.end()
    }
}

struct RecordJson<'a>(&'a Schema, &'a Record);

impl Serialize for RecordJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let (schema, r) = (self.0, self.1);
        let mut m = s.serialize_map(Some(5))?;
        m.serialize_entry("label", &r.label)?;
        m.serialize_entry("inputs", &Fields(&schema.inputs, &r.inputs))?;
        m.serialize_entry("metrics", &Fields(&schema.metrics, &r.metrics))?;
        m.serialize_entry("pass", &r.pass)?;
        m.serialize_entry("error", &r.error)?;
        m.end()
    }
}

struct Scalars<'a>(&'a [(&'static str, f64)]);

impl Serialize for Scalars<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            m.serialize_entry(k, &Num(*v))?;
        }
        m.end()
    }
}

impl Serialize for VerificationReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let summary: Vec<(&str, Option<Summary>)> = self.summary();
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("task", self.schema.task)?;
        m.serialize_entry("pass", &self.passed())?;
        m.serialize_entry("tolerance", &Num(self.tolerance))?;
        m.serialize_entry("provenance", &self.provenance)?;
        m.serialize_entry("scalars", &Scalars(&self.scalars))?;
        m.serialize_entry("checks", &self.checks)?;
        m.serialize_entry("summary", &SummaryJson(&summary))?;
        m.serialize_entry("columns", &(&self.schema.inputs, &self.schema.metrics))?;
        m.serialize_entry("records", &Records(&self.schema, &self.records))?;
        m.serialize_entry("attachments", &self.attachments)?;
        m.end()
    }
}

struct SummaryJson<'a>(&'a [(&'static str, Option<Summary>)]);

impl Serialize for SummaryJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in self.0 {
            m.serialize_entry(k, v)?;
        }
        m.end()
    }
}
