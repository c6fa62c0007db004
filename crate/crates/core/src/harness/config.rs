//! Run configuration: one tagged task plus output settings. Every struct
//! rejects unknown keys, and every diagnostic names the key at fault.

use crate::geometry::SurfaceSpec;
use crate::symbols::{ResolventPoint, SectorGrid};
use num_complex::Complex64 as C64;
use serde::{de::DeserializeOwned, Deserialize, Serialize};
use serde_json::Value;
use std::f64::consts::PI;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid `{key}`: {message}")]
pub struct ConfigError {
    pub key: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(key: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            key: key.into(),
            message: message.into(),
        }
    }
}

fn ensure(ok: bool, key: &str, message: impl FnOnce() -> String) -> Result<(), ConfigError> {
    if ok {
        Ok(())
    } else {
        Err(ConfigError::new(key, message()))
    }
}

fn positive(v: f64, key: &str) -> Result<(), ConfigError> {
    ensure(v > 0.0 && v.is_finite(), key, || format!("must be a finite number > 0, got {v}"))
}

fn nonnegative(v: f64, key: &str) -> Result<(), ConfigError> {
    ensure(v >= 0.0 && v.is_finite(), key, || format!("must be a finite number >= 0, got {v}"))
}

fn join(context: &str, path: &str) -> String {
    match (context.is_empty(), path) {
        (true, ".") => "<root>".to_string(),
        (true, _) => path.to_string(),
        (false, ".") => context.to_string(),
        (false, _) if path.starts_with('[') => format!("{context}{path}"),
        (false, _) => format!("{context}.{path}"),
    }
}

fn located<E: std::fmt::Display>(e: serde_path_to_error::Error<E>, context: &str) -> ConfigError {
    let key = join(context, &e.path().to_string());
    ConfigError::new(key, e.into_inner().to_string())
}

/// Deserializes `value` into `T`; on failure the key path of the offending
/// value (e.g. `task.mu[1]`) becomes the diagnostic key.
pub fn parse_value<T: DeserializeOwned>(value: Value, context: &str) -> Result<T, ConfigError> {
    serde_path_to_error::deserialize(value).map_err(|e| located(e, context))
}

fn parse_text(text: &str, context: &str) -> Result<Value, ConfigError> {
    serde_json::from_str(text).map_err(|e| ConfigError::new(join(context, "."), format!("malformed JSON: {e}")))
}

pub fn read_text(path: &Path, context: &str) -> Result<String, ConfigError> {
    std::fs::read_to_string(path).map_err(|e| ConfigError::new(context, format!("cannot read {}: {e}", path.display())))
}

// Internally tagged enums buffer their content, which hides the key path of
// a bad field. Tagged values are therefore checked variant by variant first.

fn split_tag(value: &Value, context: &str) -> Result<(String, Value), ConfigError> {
    let obj = value
        .as_object()
        .ok_or_else(|| ConfigError::new(join(context, "."), "expected an object with a `kind` key"))?;
    let kind = match obj.get("kind") {
        Some(Value::String(k)) => k.clone(),
        Some(_) => return Err(ConfigError::new(join(context, "kind"), "must be a string")),
        None => return Err(ConfigError::new(join(context, "kind"), "missing")),
    };
    let mut rest = obj.clone();
    rest.remove("kind");
    Ok((kind, Value::Object(rest)))
}

fn unknown_kind(context: &str, kind: &str, known: &[&str]) -> ConfigError {
    ConfigError::new(join(context, "kind"), format!("unknown kind `{kind}`, expected one of {}", known.join(", ")))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(dead_code)]
struct SphereFields {
    #[serde(rename = "R")]
    radius: f64,
    #[serde(rename = "N", default)]
    dim: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(dead_code)]
struct SphericalGraphFields {
    #[serde(rename = "R", default)]
    radius: Option<f64>,
    r_series: Vec<(usize, i64, f64)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(dead_code)]
struct GraphFields {
    h_series: Vec<Vec<f64>>,
    #[serde(default)]
    half_width: Option<f64>,
}

pub fn surface_from_value(value: Value, context: &str) -> Result<SurfaceSpec, ConfigError> {
    let (kind, rest) = split_tag(&value, context)?;
    match kind.as_str() {
        "sphere" => parse_value::<SphereFields>(rest, context).map(drop),
        "spherical_graph" => parse_value::<SphericalGraphFields>(rest, context).map(drop),
        "graph" => parse_value::<GraphFields>(rest, context).map(drop),
        k => Err(unknown_kind(context, k, &["sphere", "spherical_graph", "graph"])),
    }?;
    parse_value(value, context)
}

pub fn flow_from_value(value: Value, context: &str) -> Result<FlowSpec, ConfigError> {
    let (kind, rest) = split_tag(&value, context)?;
    match kind.as_str() {
        "affine" => parse_value::<AffineFields>(rest, context).map(drop),
        "trig" => parse_value::<TrigFields>(rest, context).map(drop),
        "dilation" => parse_value::<DilationFields>(rest, context).map(drop),
        k => Err(unknown_kind(context, k, &["affine", "trig", "dilation"])),
    }?;
    parse_value(value, context)
}

pub fn surface_from_json(text: &str, context: &str) -> Result<SurfaceSpec, ConfigError> {
    surface_from_value(parse_text(text, context)?, context)
}

pub fn flow_from_json(text: &str, context: &str) -> Result<FlowSpec, ConfigError> {
    flow_from_value(parse_text(text, context)?, context)
}

pub fn boundary_data_from_json(text: &str, context: &str) -> Result<BoundaryData, ConfigError> {
    parse_value(parse_text(text, context)?, context)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    /// `.csv` means CSV; anything else JSON.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("csv") => Format::Csv,
            _ => Format::Json,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub task: TaskConfig,
    /// Report path; stdout when absent.
    #[serde(default)]
    pub out: Option<PathBuf>,
    /// Defaults to the extension of `out`, or JSON on stdout.
    #[serde(default)]
    pub format: Option<Format>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let value = parse_text(text, "")?;
        let obj = value.as_object().ok_or_else(|| ConfigError::new("<root>", "expected a JSON object"))?;
        if let Some(k) = obj.keys().find(|k| !["task", "out", "format"].contains(&k.as_str())) {
            return Err(ConfigError::new(k.clone(), "unknown key, expected `task`, `out` or `format`"));
        }
        let field = |k: &str| obj.get(k).cloned().unwrap_or(Value::Null);
        let task_value = obj.get("task").cloned().ok_or_else(|| ConfigError::new("task", "missing"))?;
        let c = Self {
            task: TaskConfig::from_value(task_value, "task")?,
            out: parse_value(field("out"), "out")?,
            format: parse_value(field("format"), "format")?,
        };
        c.task.validate().map_err(|e| ConfigError::new(join("task", &e.key), e.message))?;
        Ok(c)
    }

    pub fn format(&self) -> Format {
        self.format
            .unwrap_or_else(|| self.out.as_deref().map(Format::from_path).unwrap_or(Format::Json))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TaskConfig {
    VerifySymbols(SymbolsTask),
    SolveHalfspace(HalfspaceTask),
    WholespaceCheck(WholespaceTask),
    Curvature(CurvatureTask),
    TransportCheck(TransportTask),
    BallSpectra(SpectraTask),
    NonlinearAudit(AuditTask),
}

impl TaskConfig {
    pub fn from_value(value: Value, context: &str) -> Result<Self, ConfigError> {
        let (kind, rest) = split_tag(&value, context)?;
        let sub = |key: &str| rest.get(key).cloned();
        Ok(match kind.as_str() {
            "verify-symbols" => TaskConfig::VerifySymbols(parse_value(rest, context)?),
            "solve-halfspace" => TaskConfig::SolveHalfspace(parse_value(rest, context)?),
            "wholespace-check" => TaskConfig::WholespaceCheck(parse_value(rest, context)?),
            "curvature" => {
                if let Some(v) = sub("surface") {
                    surface_from_value(v, &join(context, "surface"))?;
                }
                TaskConfig::Curvature(parse_value(rest, context)?)
            }
            "transport-check" => {
                if let Some(v) = sub("flow") {
                    flow_from_value(v, &join(context, "flow"))?;
                }
                TaskConfig::TransportCheck(parse_value(rest, context)?)
            }
            "ball-spectra" => TaskConfig::BallSpectra(parse_value(rest, context)?),
            "nonlinear-audit" => TaskConfig::NonlinearAudit(parse_value(rest, context)?),
            k => return Err(unknown_kind(context, k, &Self::KINDS)),
        })
    }

    pub const KINDS: [&'static str; 7] = [
        "verify-symbols",
        "solve-halfspace",
        "wholespace-check",
        "curvature",
        "transport-check",
        "ball-spectra",
        "nonlinear-audit",
    ];

    pub fn name(&self) -> &'static str {
        match self {
            TaskConfig::VerifySymbols(_) => "verify-symbols",
            TaskConfig::SolveHalfspace(_) => "solve-halfspace",
            TaskConfig::WholespaceCheck(_) => "wholespace-check",
            TaskConfig::Curvature(_) => "curvature",
            TaskConfig::TransportCheck(_) => "transport-check",
            TaskConfig::BallSpectra(_) => "ball-spectra",
            TaskConfig::NonlinearAudit(_) => "nonlinear-audit",
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        match self {
            TaskConfig::VerifySymbols(t) => t.validate(),
            TaskConfig::SolveHalfspace(t) => t.validate(),
            TaskConfig::WholespaceCheck(t) => t.validate(),
            TaskConfig::Curvature(t) => t.validate(),
            TaskConfig::TransportCheck(t) => t.validate(),
            TaskConfig::BallSpectra(t) => t.validate(),
            TaskConfig::NonlinearAudit(t) => t.validate(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SymbolsTask {
    pub sector_angle: f64,
    pub lambda0: f64,
    pub lambda_max: f64,
    pub n_lambda: usize,
    pub n_arg: usize,
    pub a_min: f64,
    pub a_max: f64,
    pub n_a: usize,
    pub mu: Vec<f64>,
    pub sigma: f64,
    /// Drift A_κ for the extra |E_κ| scan; empty or zero skips it.
    pub a_kappa: Vec<f64>,
    /// Largest tolerated relative change of a grid minimum under refinement.
    pub drift_tol: f64,
    /// Floor that the |E_0| ratio must clear on |λ| ≥ λ1.
    pub e0_floor: f64,
    pub lambda1_lo: f64,
    pub lambda1_hi: f64,
    pub bisection_steps: usize,
}

impl Default for SymbolsTask {
    fn default() -> Self {
        let g = SectorGrid::default();
        Self {
            sector_angle: g.sector_angle,
            lambda0: g.lambda0,
            lambda_max: g.lambda_max,
            n_lambda: g.n_lambda,
            n_arg: g.n_arg,
            a_min: g.a_min,
            a_max: g.a_max,
            n_a: g.n_a,
            mu: g.mus,
            sigma: g.sigma,
            a_kappa: Vec::new(),
            drift_tol: 0.05,
            e0_floor: 0.05,
            lambda1_lo: 1e-2,
            lambda1_hi: 1e2,
            bisection_steps: 30,
        }
    }
}

impl SymbolsTask {
    pub fn grid(&self) -> SectorGrid {
        SectorGrid {
            sector_angle: self.sector_angle,
            lambda0: self.lambda0,
            lambda_max: self.lambda_max,
            n_lambda: self.n_lambda,
            n_arg: self.n_arg,
            a_min: self.a_min,
            a_max: self.a_max,
            n_a: self.n_a,
            mus: self.mu.clone(),
            sigma: self.sigma,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        ensure(self.sector_angle > 0.0 && self.sector_angle < PI / 2.0, "sector_angle", || {
            format!("must lie in (0, pi/2), got {}", self.sector_angle)
        })?;
        positive(self.lambda0, "lambda0")?;
        ensure(self.lambda_max >= self.lambda0, "lambda_max", || format!("must be >= lambda0 = {}", self.lambda0))?;
        positive(self.a_min, "a_min")?;
        ensure(self.a_max >= self.a_min, "a_max", || format!("must be >= a_min = {}", self.a_min))?;
        for (k, n) in [("n_lambda", self.n_lambda), ("n_arg", self.n_arg), ("n_a", self.n_a)] {
            ensure(n >= 1, k, || "must be at least 1".into())?;
        }
        ensure(!self.mu.is_empty(), "mu", || "needs at least one viscosity".into())?;
        for (i, m) in self.mu.iter().enumerate() {
            positive(*m, &format!("mu[{i}]"))?;
        }
        nonnegative(self.sigma, "sigma")?;
        positive(self.drift_tol, "drift_tol")?;
        positive(self.e0_floor, "e0_floor")?;
        positive(self.lambda1_lo, "lambda1_lo")?;
        ensure(self.lambda1_hi > self.lambda1_lo, "lambda1_hi", || format!("must exceed lambda1_lo = {}", self.lambda1_lo))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HalfspaceModel {
    Neumann,
    Tension,
}

/// Boundary data for solve-halfspace; complex numbers as [re, im].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundaryData {
    /// ĥ(ξ', 0), length N (Neumann model).
    #[serde(default)]
    pub h_hat: Option<Vec<[f64; 2]>>,
    /// d̂ (surface-tension model).
    #[serde(default)]
    pub d_hat: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HalfspaceTask {
    pub model: HalfspaceModel,
    pub lambda: [f64; 2],
    pub xi: Vec<f64>,
    pub mu: f64,
    pub sigma: f64,
    pub a_kappa: Vec<f64>,
    /// `None` draws random data from `seed`.
    pub data: Option<BoundaryData>,
    pub seed: u64,
    pub tol: f64,
    /// Chebyshev points on [0, 10/Re B].
    pub n_x: usize,
    pub sector_angle: f64,
    pub lambda0: f64,
}

impl Default for HalfspaceTask {
    fn default() -> Self {
        Self {
            model: HalfspaceModel::Neumann,
            lambda: [1.0, 1.0],
            xi: vec![1.0, 0.0],
            mu: 1.0,
            sigma: 1.0,
            a_kappa: Vec::new(),
            data: None,
            seed: 0,
            tol: 1e-9,
            n_x: 32,
            sector_angle: PI / 4.0,
            lambda0: 1.0,
        }
    }
}

fn check_lambda(lambda: [f64; 2], sector_angle: f64, lambda0: f64, mu: f64) -> Result<(), ConfigError> {
    let p = ResolventPoint::new(C64::new(lambda[0], lambda[1]), mu).with_sector(sector_angle, lambda0);
    ensure(p.is_admissible(), "lambda", || {
        format!(
            "{}{:+}i lies outside the sector |arg| <= pi - {sector_angle}, |lambda| >= {lambda0}",
            lambda[0], lambda[1]
        )
    })
}

impl HalfspaceTask {
    pub fn point(&self) -> ResolventPoint {
        let a_kappa = if self.a_kappa.is_empty() { vec![0.0; self.xi.len()] } else { self.a_kappa.clone() };
        ResolventPoint::new(C64::new(self.lambda[0], self.lambda[1]), self.mu)
            .with_sigma(self.sigma)
            .with_a_kappa(a_kappa)
            .with_sector(self.sector_angle, self.lambda0)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        positive(self.mu, "mu")?;
        nonnegative(self.sigma, "sigma")?;
        positive(self.tol, "tol")?;
        ensure(!self.xi.is_empty(), "xi", || "needs N - 1 >= 1 components".into())?;
        ensure(self.a_kappa.is_empty() || self.a_kappa.len() == self.xi.len(), "a_kappa", || {
            format!("must have {} components like xi", self.xi.len())
        })?;
        ensure(self.n_x >= 2, "n_x", || "must be at least 2".into())?;
        check_lambda(self.lambda, self.sector_angle, self.lambda0, self.mu)?;
        if let Some(d) = &self.data {
            match self.model {
                HalfspaceModel::Neumann => {
                    let h = d.h_hat.as_ref().ok_or_else(|| ConfigError::new("data.h_hat", "required for the neumann model"))?;
                    ensure(h.len() == self.xi.len() + 1, "data.h_hat", || format!("must have N = {} entries", self.xi.len() + 1))?;
                }
                HalfspaceModel::Tension => {
                    d.d_hat.ok_or_else(|| ConfigError::new("data.d_hat", "required for the tension model"))?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WholespaceTask {
    pub lambda: [f64; 2],
    pub mu: f64,
    pub n_samples: usize,
    pub n_fields: usize,
    pub dim: usize,
    /// ξ is drawn uniformly from [−xi_max, xi_max]^N.
    pub xi_max: f64,
    pub seed: u64,
    pub tol: f64,
    pub sector_angle: f64,
    pub lambda0: f64,
}

impl Default for WholespaceTask {
    fn default() -> Self {
        Self {
            lambda: [2.0, 3.0],
            mu: 1.7,
            n_samples: 1000,
            n_fields: 10,
            dim: 3,
            xi_max: 20.0,
            seed: 0,
            tol: 1e-10,
            sector_angle: PI / 4.0,
            lambda0: 1.0,
        }
    }
}

impl WholespaceTask {
    pub fn validate(&self) -> Result<(), ConfigError> {
        positive(self.mu, "mu")?;
        positive(self.tol, "tol")?;
        positive(self.xi_max, "xi_max")?;
        ensure(self.n_samples >= 1, "n_samples", || "must be at least 1".into())?;
        ensure(self.n_fields >= 1, "n_fields", || "must be at least 1".into())?;
        ensure(self.dim >= 2, "dim", || format!("must be at least 2, got {}", self.dim))?;
        check_lambda(self.lambda, self.sector_angle, self.lambda0, self.mu)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurvatureTask {
    pub surface: SurfaceSpec,
    #[serde(default = "default_curvature_samples")]
    pub n_samples: usize,
    #[serde(default = "default_curvature_tol")]
    pub tol: f64,
    /// Bound for the finite-difference divergence-identity residual.
    #[serde(default = "default_divergence_tol")]
    pub divergence_tol: f64,
    #[serde(default)]
    pub seed: u64,
    /// Fraction of each parameter interval kept clear of its ends (poles).
    #[serde(default = "default_margin")]
    pub margin: f64,
}

fn default_curvature_samples() -> usize {
    1000
}
fn default_curvature_tol() -> f64 {
    1e-8
}
fn default_divergence_tol() -> f64 {
    1e-6
}
fn default_margin() -> f64 {
    0.05
}

impl CurvatureTask {
    pub fn new(surface: SurfaceSpec) -> Self {
        Self {
            surface,
            n_samples: default_curvature_samples(),
            tol: default_curvature_tol(),
            divergence_tol: default_divergence_tol(),
            seed: 0,
            margin: default_margin(),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        ensure(self.n_samples >= 1, "n_samples", || "must be at least 1".into())?;
        positive(self.tol, "tol")?;
        positive(self.divergence_tol, "divergence_tol")?;
        ensure((0.0..0.5).contains(&self.margin), "margin", || format!("must lie in [0, 0.5), got {}", self.margin))?;
        match &self.surface {
            SurfaceSpec::Sphere { radius, dim } => {
                positive(*radius, "surface.R")?;
                ensure(matches!(dim, 2 | 3), "surface.N", || format!("must be 2 or 3, got {dim}"))
            }
            SurfaceSpec::SphericalGraph { radius, r_series } => {
                positive(*radius, "surface.R")?;
                for (i, (l, m, _)) in r_series.iter().enumerate() {
                    ensure(m.unsigned_abs() as usize <= *l, &format!("surface.r_series[{i}]"), || format!("needs |m| <= l, got l={l} m={m}"))?;
                }
                Ok(())
            }
            SurfaceSpec::Graph { h_series, half_width } => {
                positive(*half_width, "surface.half_width")?;
                ensure(!h_series.is_empty(), "surface.h_series", || "needs at least one term".into())?;
                let len = h_series[0].len();
                for (i, t) in h_series.iter().enumerate() {
                    ensure(t.len() >= 2 && t.len() == len, &format!("surface.h_series[{i}]"), || {
                        "entries are [amp, k_1, ..., k_(N-1)] of equal length".into()
                    })?;
                }
                Ok(())
            }
        }
    }
}

/// Velocity field w for the Reynolds check, flowed as y ↦ y + t w(y).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FlowSpec {
    /// w(y) = Kᵀ y + b with K[i][j] = ∂_i w_j.
    Affine {
        #[serde(rename = "K")]
        k: Vec<Vec<f64>>,
        b: Vec<f64>,
    },
    /// Seeded sum of sines with analytic derivatives.
    Trig {
        #[serde(default)]
        seed: u64,
        #[serde(default = "three")]
        dim: usize,
        #[serde(default = "half")]
        amp: f64,
    },
    /// w(y) = y.
    Dilation {
        #[serde(default = "three")]
        dim: usize,
    },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(dead_code)]
struct AffineFields {
    #[serde(rename = "K")]
    k: Vec<Vec<f64>>,
    b: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(dead_code)]
struct TrigFields {
    #[serde(default)]
    seed: u64,
    #[serde(default)]
    dim: Option<usize>,
    #[serde(default)]
    amp: Option<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(dead_code)]
struct DilationFields {
    #[serde(default)]
    dim: Option<usize>,
}

fn three() -> usize {
    3
}
fn half() -> f64 {
    0.5
}

impl FlowSpec {
    pub fn dim(&self) -> usize {
        match self {
            FlowSpec::Affine { b, .. } => b.len(),
            FlowSpec::Trig { dim, .. } | FlowSpec::Dilation { dim } => *dim,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransportTask {
    pub flow: FlowSpec,
    #[serde(default = "default_dt_list")]
    pub dt_list: Vec<f64>,
    /// Time at which ∂_tJ is checked.
    #[serde(default = "default_time")]
    pub t: f64,
    #[serde(default = "default_points")]
    pub n_points: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_min_order")]
    pub min_order: f64,
    /// Bound for the Jacobi-formula and (I+K)(I+V0) = I residuals.
    #[serde(default = "default_identity_tol")]
    pub identity_tol: f64,
}

fn default_dt_list() -> Vec<f64> {
    vec![4e-2, 2e-2, 1e-2, 5e-3]
}
fn default_time() -> f64 {
    0.4
}
fn default_points() -> usize {
    8
}
fn default_min_order() -> f64 {
    1.9
}
fn default_identity_tol() -> f64 {
    1e-12
}

impl TransportTask {
    pub fn new(flow: FlowSpec) -> Self {
        Self {
            flow,
            dt_list: default_dt_list(),
            t: default_time(),
            n_points: default_points(),
            seed: 0,
            min_order: default_min_order(),
            identity_tol: default_identity_tol(),
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        ensure(self.dt_list.len() >= 2, "dt_list", || "needs at least two steps to fit an order".into())?;
        for (i, dt) in self.dt_list.iter().enumerate() {
            positive(*dt, &format!("dt_list[{i}]"))?;
        }
        nonnegative(self.t, "t")?;
        ensure(self.n_points >= 1, "n_points", || "must be at least 1".into())?;
        positive(self.identity_tol, "identity_tol")?;
        match &self.flow {
            FlowSpec::Affine { k, b } => {
                ensure(!b.is_empty(), "flow.b", || "must be nonempty".into())?;
                ensure(k.len() == b.len() && k.iter().all(|r| r.len() == b.len()), "flow.K", || {
                    format!("must be {n}x{n} to match b", n = b.len())
                })
            }
            FlowSpec::Trig { dim, amp, .. } => {
                ensure(*dim >= 1, "flow.dim", || "must be at least 1".into())?;
                nonnegative(*amp, "flow.amp")
            }
            FlowSpec::Dilation { dim } => ensure(*dim >= 1, "flow.dim", || "must be at least 1".into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpectraTask {
    #[serde(rename = "R")]
    pub radius: f64,
    pub lmax: usize,
    /// Ambient dimension of the rigid-motion basis (2 or 3).
    pub dim: usize,
    pub eigen_tol: f64,
    pub kernel_tol: f64,
    pub gap_tol: f64,
    pub gram_tol: f64,
}

impl Default for SpectraTask {
    fn default() -> Self {
        Self {
            radius: 1.0,
            lmax: 8,
            dim: 3,
            eigen_tol: 1e-8,
            kernel_tol: 1e-10,
            gap_tol: 1e-10,
            gram_tol: 1e-8,
        }
    }
}

impl SpectraTask {
    pub fn validate(&self) -> Result<(), ConfigError> {
        positive(self.radius, "R")?;
        ensure(self.lmax >= 2, "lmax", || format!("must be at least 2 for the gap, got {}", self.lmax))?;
        ensure(self.lmax <= 40, "lmax", || format!("at most 40 is supported, got {}", self.lmax))?;
        ensure(matches!(self.dim, 2 | 3), "dim", || format!("must be 2 or 3, got {}", self.dim))?;
        for (k, v) in [
            ("eigen_tol", self.eigen_tol),
            ("kernel_tol", self.kernel_tol),
            ("gap_tol", self.gap_tol),
            ("gram_tol", self.gram_tol),
        ] {
            positive(v, k)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AuditCase {
    /// Ψ = ρ = 0: g, gvec, h′, hN, d vanish and f is pure convection.
    Vanishing,
    /// |h′ − h′_lin| against ε.
    HprimeLinearization,
    /// |hN| with u = 0 against ε (the curvature remainder).
    HnCurvature,
    /// |d − ⟨ξ′ | ∇′ρ⟩| with u, ξ′, ∂_tρ of size ε.
    DQuadratic,
    /// |n_t − (n − ∇_Γρ)| against ε.
    NormalLinearization,
    /// |H(S_R + εY) + (N−1)/R − ε𝓑Y| against ε.
    CurvatureLinearization,
    /// |div_h gvec − g| against the difference step.
    DivergenceGvec,
}

impl AuditCase {
    pub const ALL: [AuditCase; 7] = [
        AuditCase::Vanishing,
        AuditCase::HprimeLinearization,
        AuditCase::HnCurvature,
        AuditCase::DQuadratic,
        AuditCase::NormalLinearization,
        AuditCase::CurvatureLinearization,
        AuditCase::DivergenceGvec,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            AuditCase::Vanishing => "vanishing",
            AuditCase::HprimeLinearization => "hprime-linearization",
            AuditCase::HnCurvature => "hn-curvature",
            AuditCase::DQuadratic => "d-quadratic",
            AuditCase::NormalLinearization => "normal-linearization",
            AuditCase::CurvatureLinearization => "curvature-linearization",
            AuditCase::DivergenceGvec => "divergence-gvec",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }

    /// ε values (or difference steps) used when none are given.
    pub fn default_eps(&self) -> Vec<f64> {
        match self {
            AuditCase::Vanishing => vec![0.0],
            AuditCase::DQuadratic => vec![1e-1, 1e-2, 1e-3],
            AuditCase::DivergenceGvec => vec![4e-2, 2e-2, 1e-2, 5e-3],
            _ => vec![1e-1, 1e-2, 1e-3, 1e-4],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AuditTask {
    pub case: AuditCase,
    /// Empty means the case's default list.
    #[serde(default)]
    pub eps_list: Vec<f64>,
    /// Seed of the trigonometric velocity field.
    #[serde(default = "default_audit_seed")]
    pub seed: u64,
    #[serde(default = "default_min_order")]
    pub min_slope: f64,
}

fn default_audit_seed() -> u64 {
    7
}

impl AuditTask {
    pub fn new(case: AuditCase) -> Self {
        Self {
            case,
            eps_list: Vec::new(),
            seed: default_audit_seed(),
            min_slope: default_min_order(),
        }
    }

    pub fn eps(&self) -> Vec<f64> {
        if self.eps_list.is_empty() {
            self.case.default_eps()
        } else {
            self.eps_list.clone()
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        for (i, e) in self.eps_list.iter().enumerate() {
            nonnegative(*e, &format!("eps_list[{i}]"))?;
        }
        if self.case != AuditCase::Vanishing {
            let positive_eps = self.eps().iter().filter(|e| **e > 0.0).count();
            ensure(positive_eps >= 2, "eps_list", || "needs at least two positive values to fit a slope".into())?;
        }
        Ok(())
    }
}
