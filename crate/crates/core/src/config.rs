//! Run configuration shared by the sweep and sensitivity reports.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{QuftiError, Result};
use crate::interferometer::WeightVector;
use crate::permanent::RYSER_MAX_N;
use crate::probability::{PhotonModel, ProbabilityMethod};

/// Where the weight factors come from.
#[derive(Debug, Clone, PartialEq)]
pub enum WeightSpec {
    /// `f_j = 1`.
    Constant,
    /// `f_j = j`.
    Linear,
    /// `f_j = j - 1`.
    Index0,
    /// A JSON array of reals.
    File(PathBuf),
}

impl FromStr for WeightSpec {
    type Err = QuftiError;

    fn from_str(s: &str) -> Result<Self> {
        if let Some(path) = s.strip_prefix("file:") {
            if path.is_empty() {
                return Err(QuftiError::InvalidConfig("--weights file: needs a path".into()));
            }
            return Ok(WeightSpec::File(PathBuf::from(path)));
        }
        match s {
            "constant" => Ok(WeightSpec::Constant),
            "linear" => Ok(WeightSpec::Linear),
            "index0" => Ok(WeightSpec::Index0),
            other => Err(QuftiError::InvalidConfig(format!(
                "unknown weight preset '{other}' (expected constant, linear, index0 or file:PATH)"
            ))),
        }
    }
}

impl fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightSpec::Constant => f.write_str("constant"),
            WeightSpec::Linear => f.write_str("linear"),
            WeightSpec::Index0 => f.write_str("index0"),
            WeightSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

/// Parse a weight file: one flat JSON array of finite reals.
pub fn parse_weight_document(text: &str) -> std::result::Result<Vec<f64>, serde_json::Error> {
    serde_json::from_str(text)
}

impl WeightSpec {
    /// Presets need `n`; files infer it and must agree with `n` when given.
    pub fn resolve(&self, n: Option<usize>) -> Result<WeightVector> {
        let need_n = || n.ok_or_else(|| QuftiError::InvalidConfig(format!("--n is required for the '{self}' preset")));
        match self {
            WeightSpec::Constant => WeightVector::constant(need_n()?, 1.0),
            WeightSpec::Linear => WeightVector::linear(need_n()?),
            WeightSpec::Index0 => WeightVector::index0(need_n()?),
            WeightSpec::File(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|source| QuftiError::WeightFile { path: path.clone(), source })?;
                let factors = parse_weight_document(&text)
                    .map_err(|source| QuftiError::WeightFileFormat { path: path.clone(), source })?;
                if let Some(expected) = n {
                    if expected != factors.len() {
                        return Err(QuftiError::WeightCountMismatch { expected, found: factors.len() });
                    }
                }
                WeightVector::new(factors)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiGrid {
    pub start: f64,
    pub end: f64,
    pub steps: usize,
    pub log: bool,
}

impl PhiGrid {
    pub fn single(phi: f64) -> Self {
        Self { start: phi, end: phi, steps: 1, log: false }
    }

    pub fn linear(start: f64, end: f64, steps: usize) -> Self {
        Self { start, end, steps, log: false }
    }

    pub fn logarithmic(start: f64, end: f64, steps: usize) -> Self {
        Self { start, end, steps, log: true }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.start.is_finite() || !self.end.is_finite() {
            return Err(QuftiError::InvalidConfig("--phi-start and --phi-end must be finite".into()));
        }
        if self.steps == 0 {
            return Err(QuftiError::InvalidConfig("--steps must be at least 1".into()));
        }
        if self.start > self.end {
            return Err(QuftiError::InvalidConfig(format!(
                "--phi-start ({}) exceeds --phi-end ({})",
                self.start, self.end
            )));
        }
        if self.log && self.start <= 0.0 {
            return Err(QuftiError::InvalidConfig("--log-grid requires --phi-start > 0".into()));
        }
        Ok(())
    }

    /// Grid points in ascending order; both endpoints are hit exactly.
    pub fn points(&self) -> Result<Vec<f64>> {
        self.validate()?;
        if self.steps == 1 {
            return Ok(vec![self.start]);
        }
        let last = self.steps - 1;
        let (lo, hi) = if self.log { (self.start.ln(), self.end.ln()) } else { (self.start, self.end) };
        Ok((0..self.steps)
            .map(|i| {
                if i == 0 {
                    self.start
                } else if i == last {
                    self.end
                } else {
                    let x = lo + (hi - lo) * i as f64 / last as f64;
                    if self.log { x.exp() } else { x }
                }
            })
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelSelection {
    Indistinguishable,
    Distinguishable,
    Both,
}

impl ModelSelection {
    pub fn models(self) -> Vec<PhotonModel> {
        match self {
            ModelSelection::Indistinguishable => vec![PhotonModel::Indistinguishable],
            ModelSelection::Distinguishable => vec![PhotonModel::Distinguishable],
            ModelSelection::Both => PhotonModel::ALL.to_vec(),
        }
    }
}

impl FromStr for ModelSelection {
    type Err = QuftiError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" | "i" => Ok(ModelSelection::Indistinguishable),
            "D" | "d" => Ok(ModelSelection::Distinguishable),
            "both" => Ok(ModelSelection::Both),
            other => Err(QuftiError::InvalidConfig(format!("unknown model '{other}' (expected I, D or both)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = QuftiError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(QuftiError::InvalidConfig(format!("unknown format '{other}' (expected csv or json)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub n: Option<usize>,
    pub weights: WeightSpec,
    pub grid: PhiGrid,
    pub model: ModelSelection,
    pub methods: Vec<ProbabilityMethod>,
    pub format: OutputFormat,
    /// `None` writes to stdout.
    pub output: Option<PathBuf>,
    pub seed: u64,
    pub parallel: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            n: None,
            weights: WeightSpec::Linear,
            grid: PhiGrid::linear(1e-4, 1e-2, 10),
            model: ModelSelection::Both,
            methods: vec![ProbabilityMethod::Exact, ProbabilityMethod::ClosedForm],
            format: OutputFormat::Csv,
            output: None,
            seed: 42,
            parallel: true,
        }
    }
}

impl RunConfig {
    /// Methods deduplicated in canonical order (exact, closed_form, truncated).
    pub fn method_order(&self) -> Vec<ProbabilityMethod> {
        let mut m = self.methods.clone();
        m.sort();
        m.dedup();
        m
    }

    /// Validate the whole configuration and resolve the weight vector.
    pub fn resolve(&self) -> Result<WeightVector> {
        if self.n == Some(0) {
            return Err(QuftiError::InvalidConfig("--n must be at least 1".into()));
        }
        if self.methods.is_empty() {
            return Err(QuftiError::InvalidConfig("--methods must name at least one method".into()));
        }
        self.grid.validate()?;
        let weights = self.weights.resolve(self.n)?;
        let needs_permanent = self
            .methods
            .iter()
            .any(|m| matches!(m, ProbabilityMethod::Exact | ProbabilityMethod::Truncated));
        if needs_permanent && weights.len() > RYSER_MAX_N {
            return Err(QuftiError::InvalidConfig(format!(
                "--n = {} exceeds the exact permanent limit of {RYSER_MAX_N}",
                weights.len()
            )));
        }
        Ok(weights)
    }
}
