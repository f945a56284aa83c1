//! TOML experiment configuration. Every field has a default; see
//! `docs/config.md` for the reference page.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dynamics::{DataSpec, IntegratorConfig, PicardConfig, Scheme};
use crate::error::{Error, Result};
use crate::grid::{Grid, GridSpec};
use crate::reg::{Mode, RegLevel};

/// A scalar applied to every axis, or one value per axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PerAxis<T> {
    All(T),
    Each(Vec<T>),
}

impl<T: Clone> PerAxis<T> {
    fn expand(&self, dim: usize) -> Vec<T> {
        match self {
            PerAxis::All(x) => vec![x.clone(); dim],
            PerAxis::Each(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub dim: usize,
    pub modes: PerAxis<usize>,
    #[serde(default = "default_lengths")]
    pub lengths: PerAxis<f64>,
}

fn default_lengths() -> PerAxis<f64> {
    PerAxis::All(PI)
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            dim: 1,
            modes: PerAxis::All(128),
            lengths: default_lengths(),
        }
    }
}

impl GridConfig {
    pub fn spec(&self) -> Result<GridSpec> {
        let spec = GridSpec {
            dim: self.dim,
            modes: self.modes.expand(self.dim),
            lengths: self.lengths.expand(self.dim),
        };
        spec.validate().map_err(|e| Error::config("grid", strip(e)))?;
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConvergeConfig {
    /// Levels of the family, strictly increasing, at least 3.
    pub n_list: Vec<u64>,
    /// Also run `n = inf` as the limit reference.
    pub reference: bool,
    /// Pass threshold for the fitted `L2 + L2 + H^-1` rate.
    pub min_rate: f64,
}

impl Default for ConvergeConfig {
    fn default() -> Self {
        ConvergeConfig {
            n_list: vec![8, 16, 32, 64, 128],
            reference: true,
            min_rate: 0.35,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Yosida,
    Conservation,
    SecondEnergy,
    Envelope,
    Coercivity,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct VerifyConfig {
    pub suites: Vec<Suite>,
    /// Random fields for the Yosida suite.
    pub fields: usize,
    /// Yosida levels `1..=max_level`.
    pub max_level: u64,
    /// Multiplier perturbation injected into the Yosida suite.
    pub fault: f64,
    pub q_drift: f64,
    pub en_drift: f64,
    /// Envelope slack over the theorem exponent.
    pub envelope_slack: f64,
    /// Target slope of the `F_n'` mismatch under step halving.
    pub rate_order: f64,
    pub rate_order_tol: f64,
    /// Step sizes of the `F_n'` ladder, each sampled at every step.
    pub ladder_dts: Vec<f64>,
    pub ladder_horizon: f64,
    pub gn_ensemble: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            suites: vec![
                Suite::Yosida,
                Suite::Conservation,
                Suite::SecondEnergy,
                Suite::Envelope,
                Suite::Coercivity,
            ],
            fields: 200,
            max_level: 1024,
            fault: 0.0,
            q_drift: 1e-8,
            en_drift: 1e-6,
            envelope_slack: 0.2,
            rate_order: 2.0,
            rate_order_tol: 0.3,
            ladder_dts: vec![1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0],
            ladder_horizon: 0.5,
            gn_ensemble: 256,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OracleConfig {
    /// Picard time intervals over the horizon.
    pub intervals: usize,
    pub tol: f64,
    pub max_sweeps: usize,
    /// Required sup-in-time L2 agreement.
    pub agreement: f64,
    /// Test hook: switch the nonlinear terms off.
    pub coupling: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            intervals: 200,
            tol: 1e-13,
            max_sweeps: 200,
            agreement: 1e-6,
            coupling: true,
        }
    }
}

fn default_integrator() -> IntegratorConfig {
    IntegratorConfig {
        scheme: Scheme::LawsonRk4,
        dt: 1e-3,
        dealias: true,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub grid: GridConfig,
    pub data: DataSpec,
    /// Level of single runs; `"inf"` for the unregularized system.
    pub n: RegLevel,
    pub mode: Mode,
    pub integrator: IntegratorConfig,
    pub horizon: f64,
    pub sample_every: usize,
    /// Samples between checkpoints; 0 disables checkpointing.
    pub checkpoint_every: usize,
    pub out: PathBuf,
    pub converge: ConvergeConfig,
    pub verify: VerifyConfig,
    pub oracle: OracleConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            seed: 0,
            grid: GridConfig::default(),
            data: DataSpec::default(),
            n: RegLevel::Finite(16),
            mode: Mode::Strong,
            integrator: default_integrator(),
            horizon: 1.0,
            sample_every: 10,
            checkpoint_every: 0,
            out: PathBuf::from("out"),
            converge: ConvergeConfig::default(),
            verify: VerifyConfig::default(),
            oracle: OracleConfig::default(),
        }
    }
}

/// Drops the variant prefix of a validation error.
fn strip(e: Error) -> String {
    match e {
        Error::InvalidParameter(m) | Error::ShapeMismatch(m) => m,
        other => other.to_string(),
    }
}

impl ExperimentConfig {
    /// Parses TOML; errors carry the dotted path of the offending field.
    pub fn from_toml(text: &str) -> Result<ExperimentConfig> {
        let de = toml::Deserializer::parse(text).map_err(|e| Error::config("<document>", e.to_string()))?;
        let cfg: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::config(if path == "." { "<document>".into() } else { path }, e.into_inner().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<ExperimentConfig> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let spec = self.grid.spec()?;
        if !(self.horizon >= 0.0 && self.horizon.is_finite()) {
            return Err(Error::config("horizon", format!("must be finite and >= 0, got {}", self.horizon)));
        }
        if self.sample_every == 0 {
            return Err(Error::config("sample_every", "must be >= 1"));
        }
        let grid = Grid::new(spec)?;
        self.integrator
            .validate(&grid)
            .map_err(|e| Error::config("integrator.dt", strip(e)))?;
        crate::dynamics::RunConfig::new(self.horizon, self.sample_every)
            .steps_from(0.0, self.integrator.dt)
            .map_err(|e| Error::config("horizon", strip(e)))?;
        self.data
            .build(&grid, self.seed)
            .map_err(|e| Error::config("data", strip(e)))?;
        let c = &self.converge;
        if c.n_list.len() < 3 {
            return Err(Error::config(
                "converge.n_list",
                format!("needs at least 3 levels, got {}", c.n_list.len()),
            ));
        }
        if c.n_list[0] == 0 || c.n_list.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config("converge.n_list", "levels must be positive and strictly increasing"));
        }
        if self.verify.suites.is_empty() {
            return Err(Error::config("verify.suites", "suite selection is empty"));
        }
        if self.verify.max_level == 0 || self.verify.fields == 0 {
            return Err(Error::config("verify", "max_level and fields must be >= 1"));
        }
        if self.verify.ladder_dts.len() < 2 {
            return Err(Error::config("verify.ladder_dts", "needs at least 2 step sizes"));
        }
        Ok(())
    }

    /// Checks the `F_n'` step ladder against the integrator and horizon.
    pub fn validate_ladder(&self) -> Result<()> {
        let grid = self.grid()?;
        let v = &self.verify;
        for &dt in &v.ladder_dts {
            let cfg = IntegratorConfig { dt, ..self.integrator };
            cfg.validate(&grid)
                .map_err(|e| Error::config("verify.ladder_dts", strip(e)))?;
            crate::dynamics::RunConfig::new(v.ladder_horizon, 1)
                .steps_from(0.0, dt)
                .map_err(|e| Error::config("verify.ladder_horizon", strip(e)))?;
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Arc<Grid>> {
        Grid::new(self.grid.spec()?)
    }

    /// Picard settings over the run horizon, validated for the oracle.
    pub fn picard(&self) -> Result<PicardConfig> {
        let p = PicardConfig {
            horizon: self.horizon,
            intervals: self.oracle.intervals,
            tol: self.oracle.tol,
            max_sweeps: self.oracle.max_sweeps,
        };
        p.validate().map_err(|e| Error::config("oracle", strip(e)))?;
        Ok(p)
    }

    /// SHA-256 of the canonical JSON form, ignoring the output directory.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.out = PathBuf::new();
        let json = serde_json::to_vec(&c).expect("config serializes");
        hex::encode(Sha256::digest(&json))
    }
}
