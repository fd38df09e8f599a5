//! Experiment configuration from CLI flags or a JSON file.

use std::fmt;
use std::str::FromStr;

use msp_core::control::{GeometryKind, ProblemConfig, ProblemKind};
use serde::{Deserialize, Serialize};

use crate::error::{MspError, Result};

/// The alpha values of the reference tables.
pub const DEFAULT_ALPHAS: [f64; 6] = [1.0, 0.1, 0.01, 1e-3, 1e-5, 1e-7];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrecondKind {
    #[serde(alias = "exact")]
    ExactSchur,
    Practical,
}

impl FromStr for PrecondKind {
    type Err = MspError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" | "exact_schur" => Ok(Self::ExactSchur),
            "practical" => Ok(Self::Practical),
            _ => Err(MspError::Config(format!("unknown preconditioner {s:?}; expected exact or practical"))),
        }
    }
}

impl fmt::Display for PrecondKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::ExactSchur => "exact_schur",
            Self::Practical => "practical",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    #[serde(alias = "md")]
    Markdown,
}

impl FromStr for OutputFormat {
    type Err = MspError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "md" | "markdown" => Ok(Self::Markdown),
            _ => Err(MspError::Config(format!("unknown format {s:?}; expected csv or md"))),
        }
    }
}

/// Contents of a `--config` file. Every field is optional; CLI flags take
/// precedence.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub problem: Option<String>,
    pub dim: Option<usize>,
    pub degree: Option<usize>,
    pub geometry: Option<String>,
    pub levels: Option<Vec<u32>>,
    pub alphas: Option<Vec<f64>>,
    pub precond: Option<PrecondKind>,
    pub tol: Option<f64>,
    pub maxit: Option<usize>,
    pub seed: Option<u64>,
    pub format: Option<OutputFormat>,
    pub out: Option<String>,
    pub large: Option<bool>,
}

impl ConfigFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Fields of `self` override those of `base`.
    pub fn or(self, base: ConfigFile) -> ConfigFile {
        ConfigFile {
            problem: self.problem.or(base.problem),
            dim: self.dim.or(base.dim),
            degree: self.degree.or(base.degree),
            geometry: self.geometry.or(base.geometry),
            levels: self.levels.or(base.levels),
            alphas: self.alphas.or(base.alphas),
            precond: self.precond.or(base.precond),
            tol: self.tol.or(base.tol),
            maxit: self.maxit.or(base.maxit),
            seed: self.seed.or(base.seed),
            format: self.format.or(base.format),
            out: self.out.or(base.out),
            large: self.large.or(base.large),
        }
    }
}

/// Validated configuration of a table or spectrum run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub problem: ProblemKind,
    pub dim: usize,
    pub degree: usize,
    pub geometry: GeometryKind,
    pub levels: Vec<u32>,
    pub alphas: Vec<f64>,
    pub precond: PrecondKind,
    pub tol: f64,
    pub maxit: usize,
    pub seed: u64,
    pub format: OutputFormat,
    pub out: Option<String>,
    pub large: bool,
}

/// Largest desk-scale level; anything above needs `large`.
pub fn desk_level_limit(dim: usize) -> u32 {
    match dim {
        1 => 8,
        2 => 5,
        _ => 3,
    }
}

impl ExperimentConfig {
    pub fn resolve(file: ConfigFile) -> Result<Self> {
        let problem: ProblemKind = parse_core(file.problem.as_deref().unwrap_or("boundary_observation"))?;
        let dim = file.dim.unwrap_or(2);
        let degree = file.degree.unwrap_or(if dim == 3 { 3 } else { 2 });
        let geometry = match file.geometry.as_deref() {
            Some(g) => parse_core(g)?,
            None => GeometryKind::default_for(dim),
        };
        let levels = file.levels.unwrap_or_else(|| if dim == 3 { vec![2, 3] } else { vec![3, 4, 5] });
        let cfg = Self {
            problem,
            dim,
            degree,
            geometry,
            levels,
            alphas: file.alphas.unwrap_or_else(|| DEFAULT_ALPHAS.to_vec()),
            precond: file.precond.unwrap_or(PrecondKind::Practical),
            tol: file.tol.unwrap_or(1e-8),
            maxit: file.maxit.unwrap_or(500),
            seed: file.seed.unwrap_or(0),
            format: file.format.unwrap_or_default(),
            out: file.out,
            large: file.large.unwrap_or(false),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.levels.is_empty() {
            return Err(MspError::Config("levels must not be empty".into()));
        }
        if self.alphas.is_empty() {
            return Err(MspError::Config("alphas must not be empty".into()));
        }
        if !(self.tol > 0.0 && self.tol < 1.0) {
            return Err(MspError::Config(format!("tol must lie in (0, 1), got {}", self.tol)));
        }
        if self.maxit == 0 {
            return Err(MspError::Config("maxit must be positive".into()));
        }
        let limit = desk_level_limit(self.dim);
        if let Some(&l) = self.levels.iter().find(|&&l| l > limit) {
            if !self.large {
                return Err(MspError::Config(format!("level {l} exceeds the desk-scale limit {limit} in {}D; pass --large", self.dim)));
            }
            if self.precond == PrecondKind::ExactSchur {
                return Err(MspError::Config("large runs use the practical preconditioner only".into()));
            }
        }
        for &l in &self.levels {
            for &a in &self.alphas {
                self.problem_config(l, a).validate()?;
            }
        }
        Ok(())
    }

    pub fn problem_config(&self, level: u32, alpha: f64) -> ProblemConfig {
        ProblemConfig::new(self.problem, self.dim, self.degree, level, alpha).with_geometry(self.geometry)
    }
}

fn parse_core<T: FromStr<Err = msp_core::Error>>(s: &str) -> Result<T> {
    s.parse().map_err(|e: msp_core::Error| MspError::Config(e.to_string()))
}

/// Formats alpha as in the reference tables: `1`, `0.1`, `0.01`, `1e-3`, ...
pub fn format_alpha(a: f64) -> String {
    if a >= 0.01 {
        format!("{a}")
    } else {
        format!("{a:e}")
    }
}
