use std::path::{Path, PathBuf};

use semigroup_calculus::calculus::grid_aligned;
use semigroup_calculus::complexfn::CurveOptions;
use semigroup_calculus::linalg::random_points;
use semigroup_calculus::measures::standard::{four_point, step_density, two_point};
use semigroup_calculus::measures::{CompactDistribution, CompactMeasure};
use semigroup_calculus::semigroups::{BackendSpec, ComplexJson};
use semigroup_calculus::C64;
use serde::{Deserialize, Serialize};

/// Configs shipped with the binary, keyed by name.
pub const SHIPPED: &[(&str, &str)] = &[
    ("sweep", include_str!("../configs/sweep.json")),
    ("sweep-four-point", include_str!("../configs/sweep-four-point.json")),
    ("sweep-step-density", include_str!("../configs/sweep-step-density.json")),
    ("symmetrized-sweep", include_str!("../configs/symmetrized-sweep.json")),
    ("curve", include_str!("../configs/curve.json")),
    ("lemma24", include_str!("../configs/lemma24.json")),
    ("lemma27", include_str!("../configs/lemma27.json")),
    ("resolvent-check", include_str!("../configs/resolvent-check.json")),
    ("idempotents", include_str!("../configs/idempotents.json")),
    ("sharpness", include_str!("../configs/sharpness.json")),
    ("verify-all", include_str!("../configs/verify-all.json")),
];

pub fn shipped(name: &str) -> Option<&'static str> {
    SHIPPED.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("invalid config {name}: {source}")]
    Parse { name: String, source: serde_json::Error },
    #[error("{0}")]
    Invalid(String),
}

fn invalid(msg: impl Into<String>) -> ConfigError {
    ConfigError::Invalid(msg.into())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    #[serde(flatten)]
    pub task: Task,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Task {
    Sweep(SweepTask),
    SymmetrizedSweep(SymmetrizedTask),
    Curve(CurveTask),
    Lemma24(Lemma24Task),
    Lemma27(Lemma27Task),
    ResolventCheck(ResolventTask),
    Idempotents(IdempotentsTask),
    Sharpness(SharpnessTask),
    VerifyAll(VerifyAllTask),
}

impl Task {
    pub fn command(&self) -> &'static str {
        match self {
            Task::Sweep(_) => "sweep",
            Task::SymmetrizedSweep(_) => "symmetrized-sweep",
            Task::Curve(_) => "curve",
            Task::Lemma24(_) => "lemma24",
            Task::Lemma27(_) => "lemma27",
            Task::ResolventCheck(_) => "resolvent-check",
            Task::Idempotents(_) => "idempotents",
            Task::Sharpness(_) => "sharpness",
            Task::VerifyAll(_) => "verify-all",
        }
    }
}

/// A measure given by a shipped name, a JSON file, or inline.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MeasureSource {
    Standard {
        standard: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scale: Option<ComplexJson>,
    },
    File {
        file: PathBuf,
    },
    Inline(CompactMeasure),
}

impl MeasureSource {
    pub fn load(&self, base: &Path) -> Result<CompactMeasure, ConfigError> {
        match self {
            MeasureSource::Standard { standard, scale } => {
                let mu = match standard.as_str() {
                    "two_point" => two_point(),
                    "four_point" => four_point(),
                    "step_density" => step_density(),
                    other => return Err(invalid(format!("unknown standard measure {other:?}"))),
                };
                Ok(match scale {
                    Some(s) => mu.scale(C64::from(*s)),
                    None => mu,
                })
            }
            MeasureSource::File { file } => read_json(&base.join(file)),
            MeasureSource::Inline(mu) => Ok(mu.clone()),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DistributionSource {
    File { file: PathBuf },
    Inline(CompactDistribution),
}

impl DistributionSource {
    pub fn load(&self, base: &Path) -> Result<CompactDistribution, ConfigError> {
        match self {
            DistributionSource::File { file } => read_json(&base.join(file)),
            DistributionSource::Inline(d) => Ok(d.clone()),
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.to_owned(), source })?;
    serde_json::from_str(&text).map_err(|source| ConfigError::Parse { name: path.display().to_string(), source })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UGrid {
    Linear { start: f64, stop: f64, count: usize },
    Log { start: f64, stop: f64, count: usize },
    GridAligned { n: usize, k_lo: usize, k_hi: usize },
    List { values: Vec<f64> },
}

impl UGrid {
    pub fn values(&self) -> Result<Vec<f64>, ConfigError> {
        let v = match *self {
            UGrid::Linear { start, stop, count } | UGrid::Log { start, stop, count } if count == 0 => {
                return Err(invalid(format!("u_grid needs count >= 1, got start={start} stop={stop} count=0")));
            }
            UGrid::Linear { start, stop, count } => spaced(start, stop, count, |x| x),
            UGrid::Log { start, stop, count } => {
                if start <= 0.0 || stop <= 0.0 {
                    return Err(invalid("log u_grid needs positive endpoints"));
                }
                spaced(start.ln(), stop.ln(), count, f64::exp)
            }
            UGrid::GridAligned { n, k_lo, k_hi } => {
                if n == 0 || k_lo == 0 || k_hi < k_lo {
                    return Err(invalid("grid_aligned u_grid needs n >= 1 and 1 <= k_lo <= k_hi"));
                }
                grid_aligned(n, k_lo, k_hi)
            }
            UGrid::List { ref values } => values.clone(),
        };
        validate_grid(&v, "u_grid")?;
        Ok(v)
    }
}

fn spaced(a: f64, b: f64, count: usize, map: impl Fn(f64) -> f64) -> Vec<f64> {
    if count == 1 {
        return vec![map(a)];
    }
    (0..count).map(|i| map(a + (b - a) * i as f64 / (count - 1) as f64)).collect()
}

pub fn validate_grid(v: &[f64], what: &str) -> Result<(), ConfigError> {
    if v.is_empty() {
        return Err(invalid(format!("{what} is empty")));
    }
    if v.iter().any(|&u| !(u > 0.0 && u.is_finite())) {
        return Err(invalid(format!("{what} must be strictly positive")));
    }
    if v.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid(format!("{what} must be strictly increasing")));
    }
    Ok(())
}

pub fn positive(x: f64, what: &str) -> Result<f64, ConfigError> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(invalid(format!("tolerance {what} must be positive, got {x}")))
    }
}

/// Uniform draws from a box in the complex plane.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RandomBox {
    pub count: usize,
    pub re: [f64; 2],
    pub im: [f64; 2],
}

impl RandomBox {
    pub fn draw(&self, seed: u64) -> Result<Vec<C64>, ConfigError> {
        if self.re[1] < self.re[0] || self.im[1] < self.im[0] {
            return Err(invalid("random box bounds must be ordered [lo, hi]"));
        }
        Ok(random_points(seed, self.count, (self.re[0], self.re[1]), (self.im[0], self.im[1])))
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct LambdaSpec {
    #[serde(default)]
    pub points: Vec<ComplexJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random: Option<RandomBox>,
}

impl LambdaSpec {
    pub fn values(&self, seed: u64) -> Result<Vec<C64>, ConfigError> {
        let mut v: Vec<C64> = self.points.iter().map(|&p| p.into()).collect();
        if let Some(b) = &self.random {
            v.extend(b.draw(seed)?);
        }
        if v.is_empty() {
            return Err(invalid("no lambda points given"));
        }
        Ok(v)
    }
}

fn zero() -> f64 {
    0.0
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepTask {
    pub backend: BackendSpec,
    pub measure: MeasureSource,
    pub u_grid: UGrid,
    /// Rows with `u` below this must have margin above `min_margin`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positive_below: Option<f64>,
    #[serde(default = "zero")]
    pub min_margin: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_budget: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymmetrizedTask {
    pub backend: BackendSpec,
    pub measure: MeasureSource,
    pub u_grid: UGrid,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positive_below: Option<f64>,
    #[serde(default = "zero")]
    pub min_margin: f64,
    #[serde(default = "default_path_tol")]
    pub path_tol: f64,
}

fn default_path_tol() -> f64 {
    1e-9
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveTask {
    pub measure: MeasureSource,
    #[serde(default)]
    pub options: CurveOptions,
    #[serde(default = "default_baby_margin")]
    pub babylem_margin: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect_m: Option<usize>,
}

fn default_baby_margin() -> f64 {
    1e-3
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Lemma24Task {
    pub backend: BackendSpec,
    pub measure: MeasureSource,
    pub lambdas: LambdaSpec,
    #[serde(default = "one")]
    pub u: f64,
    #[serde(default = "default_lemma_tol")]
    pub tol: f64,
    #[serde(default = "default_identity_tol")]
    pub identity_tol: f64,
}

fn default_lemma_tol() -> f64 {
    1e-6
}

fn default_identity_tol() -> f64 {
    1e-7
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Lemma27Task {
    pub backend: BackendSpec,
    pub distribution: DistributionSource,
    pub lambdas: LambdaSpec,
    #[serde(default = "one")]
    pub u: f64,
    #[serde(default = "default_lemma_tol")]
    pub tol: f64,
    #[serde(default = "default_lemma27_identity_tol")]
    pub identity_tol: f64,
}

fn default_lemma27_identity_tol() -> f64 {
    1e-9
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResolventTask {
    pub backend: BackendSpec,
    #[serde(default)]
    pub pairs: Vec<[ComplexJson; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub random_pairs: Option<RandomBox>,
    #[serde(default = "default_resolvent_tol")]
    pub tol: f64,
}

fn default_resolvent_tol() -> f64 {
    1e-8
}

impl ResolventTask {
    pub fn pair_values(&self, seed: u64) -> Result<Vec<(C64, C64)>, ConfigError> {
        let mut v: Vec<(C64, C64)> = self.pairs.iter().map(|[a, b]| ((*a).into(), (*b).into())).collect();
        if let Some(b) = &self.random_pairs {
            let pts = RandomBox { count: 2 * b.count, ..b.clone() }.draw(seed)?;
            v.extend(pts.chunks(2).map(|p| (p[0], p[1])));
        }
        if v.is_empty() {
            return Err(invalid("no resolvent pairs given"));
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdempotentsTask {
    pub backend: BackendSpec,
    pub measure: MeasureSource,
    pub u: f64,
    pub m_list: Vec<u32>,
    pub t_grid: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate_m: Option<u32>,
    #[serde(default = "default_generator_tol")]
    pub tol: f64,
}

fn default_generator_tol() -> f64 {
    1e-10
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SharpnessTask {
    pub measure: MeasureSource,
    pub n_list: Vec<usize>,
    pub u_list: Vec<f64>,
    #[serde(default = "default_sharpness_tol")]
    pub tol: f64,
}

fn default_sharpness_tol() -> f64 {
    1e-4
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct VerifyAllTask {
    /// Shipped config names or paths; all shipped checks when empty.
    #[serde(default)]
    pub configs: Vec<String>,
}

/// Where relative paths in a config resolve from.
pub struct Loaded {
    pub config: RunConfig,
    pub base: PathBuf,
    pub name: String,
}

pub fn parse(name: &str, text: &str, base: PathBuf) -> Result<Loaded, ConfigError> {
    let config: RunConfig =
        serde_json::from_str(text).map_err(|source| ConfigError::Parse { name: name.to_owned(), source })?;
    Ok(Loaded { config, base, name: name.to_owned() })
}

/// A shipped name or a path to a JSON file.
pub fn load(reference: &str) -> Result<Loaded, ConfigError> {
    if let Some(text) = shipped(reference) {
        return parse(reference, text, PathBuf::from("."));
    }
    let path = Path::new(reference);
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read { path: path.to_owned(), source })?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."));
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| reference.to_owned());
    parse(&name, &text, base)
}
