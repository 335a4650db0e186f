//! Run configuration: a TOML file with one section per concern.
//!
//! ```toml
//! experiment = "sweep"
//! rel_tol = 1e-12
//! seeds = [0, 1]
//!
//! [basis]
//! family = "random_fourier_features"
//! column_budget = 400
//! input_dim = 32
//!
//! [design]
//! strategy = "sphere_uniform"
//! n = 100
//! dim = 32
//!
//! [theta]
//! scheme = "unstructured_iid"
//! variance = 1.0
//!
//! [sweep]
//! m_max = 400
//! lambda = 0.0
//! ```
//!
//! Unknown keys are rejected, as are keys that do not apply to the chosen
//! `family`, `strategy` or `scheme`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use gadkit_core::bases::{BasisFamily, BasisSpec, ColumnOrdering};
use gadkit_core::datasets::ScalePolicy;
use gadkit_core::designs::{ParameterSpec, RowOrder, ThetaScheme};
use gadkit_core::linalg::DEFAULT_REL_TOL;

/// Training size and column budget used by `--full-scale` unless the
/// `[full_scale]` section says otherwise.
pub const FULL_SCALE_N: usize = 1000;
pub const FULL_SCALE_BUDGET: usize = 6000;

pub const DEFAULT_GRID_1D: usize = 512;
pub const DEFAULT_GRID_CLOUD: usize = 2000;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(String),
    #[error("`{key}`: {message}")]
    Invalid { key: String, message: String },
}

fn bad(key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key: key.to_string(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Sweep,
    FourierCheck,
    GaussCompare,
    RidgeSweep,
    IsingSweep,
    UnstructuredEb,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderingConfig {
    #[default]
    Natural,
    /// Permuted with a seed derived from the run seed.
    Seeded,
    Physical,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum BasisConfig {
    Monomial {
        column_budget: usize,
        #[serde(default = "unit_interval")]
        interval: [f64; 2],
        #[serde(default)]
        ordering: OrderingConfig,
    },
    Chebyshev {
        column_budget: usize,
        #[serde(default)]
        ordering: OrderingConfig,
    },
    Legendre {
        column_budget: usize,
        #[serde(default)]
        ordering: OrderingConfig,
    },
    FourierDiscrete {
        column_budget: usize,
        #[serde(default = "one")]
        period: f64,
        base: usize,
        #[serde(default)]
        ordering: OrderingConfig,
    },
    RandomFourierFeatures {
        column_budget: usize,
        input_dim: usize,
        #[serde(default)]
        ordering: OrderingConfig,
    },
    RandomReluFeatures {
        column_budget: usize,
        input_dim: usize,
        #[serde(default)]
        ordering: OrderingConfig,
    },
    ClusterIsing {
        column_budget: usize,
        chain_length: usize,
        max_order: usize,
        #[serde(default)]
        ordering: OrderingConfig,
    },
}

fn unit_interval() -> [f64; 2] {
    [-1.0, 1.0]
}

fn one() -> f64 {
    1.0
}

impl BasisConfig {
    pub fn column_budget(&self) -> usize {
        match self {
            BasisConfig::Monomial { column_budget, .. }
            | BasisConfig::Chebyshev { column_budget, .. }
            | BasisConfig::Legendre { column_budget, .. }
            | BasisConfig::FourierDiscrete { column_budget, .. }
            | BasisConfig::RandomFourierFeatures { column_budget, .. }
            | BasisConfig::RandomReluFeatures { column_budget, .. }
            | BasisConfig::ClusterIsing { column_budget, .. } => *column_budget,
        }
    }

    pub fn set_column_budget(&mut self, budget: usize) {
        match self {
            BasisConfig::Monomial { column_budget, .. }
            | BasisConfig::Chebyshev { column_budget, .. }
            | BasisConfig::Legendre { column_budget, .. }
            | BasisConfig::FourierDiscrete { column_budget, .. }
            | BasisConfig::RandomFourierFeatures { column_budget, .. }
            | BasisConfig::RandomReluFeatures { column_budget, .. }
            | BasisConfig::ClusterIsing { column_budget, .. } => *column_budget = budget,
        }
    }

    pub fn ordering(&self) -> OrderingConfig {
        match self {
            BasisConfig::Monomial { ordering, .. }
            | BasisConfig::Chebyshev { ordering, .. }
            | BasisConfig::Legendre { ordering, .. }
            | BasisConfig::FourierDiscrete { ordering, .. }
            | BasisConfig::RandomFourierFeatures { ordering, .. }
            | BasisConfig::RandomReluFeatures { ordering, .. }
            | BasisConfig::ClusterIsing { ordering, .. } => *ordering,
        }
    }

    /// The library spec, with feature weights and any column permutation
    /// drawn from the given seeds.
    pub fn to_spec(&self, feature_seed: u64, ordering_seed: u64) -> BasisSpec {
        let (family, input_dim) = match *self {
            BasisConfig::Monomial { interval, .. } => (
                BasisFamily::Monomial {
                    interval: (interval[0], interval[1]),
                },
                1,
            ),
            BasisConfig::Chebyshev { .. } => (BasisFamily::Chebyshev, 1),
            BasisConfig::Legendre { .. } => (BasisFamily::Legendre, 1),
            BasisConfig::FourierDiscrete { period, base, .. } => {
                (BasisFamily::FourierDiscrete { period, base }, 1)
            }
            BasisConfig::RandomFourierFeatures { input_dim, .. } => (
                BasisFamily::RandomFourierFeatures { feature_seed },
                input_dim,
            ),
            BasisConfig::RandomReluFeatures { input_dim, .. } => {
                (BasisFamily::RandomReluFeatures { feature_seed }, input_dim)
            }
            BasisConfig::ClusterIsing {
                chain_length,
                max_order,
                ..
            } => (
                BasisFamily::ClusterIsing {
                    chain_length,
                    max_order,
                },
                chain_length,
            ),
        };
        let ordering = match self.ordering() {
            OrderingConfig::Natural => ColumnOrdering::Natural,
            OrderingConfig::Seeded => ColumnOrdering::SeededPermutation(ordering_seed),
            OrderingConfig::Physical => ColumnOrdering::PhysicalClusterOrder,
        };
        BasisSpec::new(family, input_dim, self.column_budget()).with_ordering(ordering)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowOrderConfig {
    #[default]
    Physical,
    Seeded,
}

impl From<RowOrderConfig> for RowOrder {
    fn from(value: RowOrderConfig) -> Self {
        match value {
            RowOrderConfig::Physical => RowOrder::Physical,
            RowOrderConfig::Seeded => RowOrder::Seeded,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScaleConfig {
    RawBytes,
    #[default]
    UnitInterval,
}

impl From<ScaleConfig> for ScalePolicy {
    fn from(value: ScaleConfig) -> Self {
        match value {
            ScaleConfig::RawBytes => ScalePolicy::RawBytes,
            ScaleConfig::UnitInterval => ScalePolicy::UnitInterval,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "snake_case", deny_unknown_fields)]
pub enum DesignConfig {
    UniformInterval {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid_size: Option<usize>,
        #[serde(default = "unit_interval")]
        interval: [f64; 2],
    },
    Equispaced {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid_size: Option<usize>,
        #[serde(default = "one")]
        period: f64,
    },
    LegendreGauss {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid_size: Option<usize>,
    },
    SphereUniform {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid_size: Option<usize>,
        dim: usize,
    },
    ChainConfigurations {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid_size: Option<usize>,
        chain_length: usize,
        #[serde(default)]
        row_order: RowOrderConfig,
    },
    Idx {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid_size: Option<usize>,
        path: PathBuf,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max_items: Option<usize>,
        #[serde(default)]
        scale: ScaleConfig,
    },
    CifarBin {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        grid_size: Option<usize>,
        path: PathBuf,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        max_items: Option<usize>,
        #[serde(default)]
        scale: ScaleConfig,
    },
}

impl DesignConfig {
    pub fn n(&self) -> usize {
        match self {
            DesignConfig::UniformInterval { n, .. }
            | DesignConfig::Equispaced { n, .. }
            | DesignConfig::LegendreGauss { n, .. }
            | DesignConfig::SphereUniform { n, .. }
            | DesignConfig::ChainConfigurations { n, .. }
            | DesignConfig::Idx { n, .. }
            | DesignConfig::CifarBin { n, .. } => *n,
        }
    }

    pub fn set_n(&mut self, value: usize) {
        match self {
            DesignConfig::UniformInterval { n, .. }
            | DesignConfig::Equispaced { n, .. }
            | DesignConfig::LegendreGauss { n, .. }
            | DesignConfig::SphereUniform { n, .. }
            | DesignConfig::ChainConfigurations { n, .. }
            | DesignConfig::Idx { n, .. }
            | DesignConfig::CifarBin { n, .. } => *n = value,
        }
    }

    fn grid_field(&mut self) -> &mut Option<usize> {
        match self {
            DesignConfig::UniformInterval { grid_size, .. }
            | DesignConfig::Equispaced { grid_size, .. }
            | DesignConfig::LegendreGauss { grid_size, .. }
            | DesignConfig::SphereUniform { grid_size, .. }
            | DesignConfig::ChainConfigurations { grid_size, .. }
            | DesignConfig::Idx { grid_size, .. }
            | DesignConfig::CifarBin { grid_size, .. } => grid_size,
        }
    }

    /// Configured prediction-grid size, or the default for the strategy:
    /// 512 on an interval, 2000 for sphere and dataset clouds, every
    /// remaining configuration for a chain.
    pub fn grid_size(&self) -> usize {
        let configured = match self {
            DesignConfig::UniformInterval { grid_size, .. }
            | DesignConfig::Equispaced { grid_size, .. }
            | DesignConfig::LegendreGauss { grid_size, .. }
            | DesignConfig::SphereUniform { grid_size, .. }
            | DesignConfig::ChainConfigurations { grid_size, .. }
            | DesignConfig::Idx { grid_size, .. }
            | DesignConfig::CifarBin { grid_size, .. } => *grid_size,
        };
        configured.unwrap_or(match self {
            DesignConfig::UniformInterval { .. }
            | DesignConfig::Equispaced { .. }
            | DesignConfig::LegendreGauss { .. } => DEFAULT_GRID_1D,
            DesignConfig::SphereUniform { .. }
            | DesignConfig::Idx { .. }
            | DesignConfig::CifarBin { .. } => DEFAULT_GRID_CLOUD,
            DesignConfig::ChainConfigurations { .. } => usize::MAX,
        })
    }

    pub fn set_grid_size(&mut self, value: usize) {
        *self.grid_field() = Some(value);
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "snake_case", deny_unknown_fields)]
pub enum ThetaConfig {
    UnstructuredIid {
        #[serde(default = "one")]
        variance: f64,
    },
    PowerDecay {
        #[serde(default = "one")]
        scale: f64,
        exponent: f64,
        #[serde(default = "yes")]
        random_signs: bool,
    },
    Explicit {
        values: Vec<f64>,
    },
}

fn yes() -> bool {
    true
}

impl Default for ThetaConfig {
    fn default() -> Self {
        ThetaConfig::UnstructuredIid { variance: 1.0 }
    }
}

impl ThetaConfig {
    pub fn to_spec(&self, length: usize, seed: u64) -> ParameterSpec {
        let scheme = match self {
            ThetaConfig::UnstructuredIid { variance } => ThetaScheme::UnstructuredIid {
                variance: *variance,
            },
            ThetaConfig::PowerDecay {
                scale,
                exponent,
                random_signs,
            } => ThetaScheme::PowerDecay {
                scale: *scale,
                exponent: *exponent,
                random_signs: *random_signs,
            },
            ThetaConfig::Explicit { values } => ThetaScheme::Explicit(values.clone()),
        };
        ParameterSpec {
            scheme,
            length,
            seed,
        }
    }
}

/// `lambda = 0.1` or `lambda = [0.0, 1e-2, 1.0]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LambdaList {
    One(f64),
    Many(Vec<f64>),
}

impl Default for LambdaList {
    fn default() -> Self {
        LambdaList::One(0.0)
    }
}

impl LambdaList {
    pub fn values(&self) -> Vec<f64> {
        match self {
            LambdaList::One(v) => vec![*v],
            LambdaList::Many(vs) => vs.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default = "first_m")]
    pub m_min: usize,
    /// Defaults to the column budget.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m_max: Option<usize>,
    #[serde(default = "first_m")]
    pub m_step: usize,
    #[serde(default)]
    pub lambda: LambdaList,
}

fn first_m() -> usize {
    1
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            m_min: 1,
            m_max: None,
            m_step: 1,
            lambda: LambdaList::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaussCompareConfig {
    /// Number of modeled Legendre polynomials.
    pub m: usize,
    pub n_values: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnstructuredConfig {
    pub m_values: Vec<usize>,
    #[serde(default = "default_draws")]
    pub draws: usize,
}

fn default_draws() -> usize {
    2000
}

/// Overrides applied by `--full-scale`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FullScaleConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub column_budget: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_size: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub experiment: ExperimentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default = "default_rel_tol")]
    pub rel_tol: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub seeds: Vec<u64>,
    pub basis: BasisConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub design: Option<DesignConfig>,
    #[serde(default)]
    pub theta: ThetaConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gauss_compare: Option<GaussCompareConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unstructured_eb: Option<UnstructuredConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub full_scale: Option<FullScaleConfig>,
}

fn default_rel_tol() -> f64 {
    DEFAULT_REL_TOL
}

impl RunConfig {
    pub fn design(&self) -> Result<&DesignConfig, ConfigError> {
        self.design
            .as_ref()
            .ok_or_else(|| bad("design", "missing required section"))
    }

    /// Model sizes of the sweep, clamped to the column budget.
    pub fn m_values(&self) -> Vec<usize> {
        let budget = self.basis.column_budget();
        let hi = self.sweep.m_max.unwrap_or(budget).min(budget);
        (self.sweep.m_min..=hi)
            .step_by(self.sweep.m_step.max(1))
            .collect()
    }

    /// Applies `--full-scale`: full-size training set and column budget.
    pub fn scale_up(&mut self) {
        let overrides = self.full_scale.clone().unwrap_or_default();
        let budget = overrides.column_budget.unwrap_or(FULL_SCALE_BUDGET);
        self.basis.set_column_budget(budget);
        self.sweep.m_max = Some(budget);
        if let Some(design) = self.design.as_mut() {
            design.set_n(overrides.n.unwrap_or(FULL_SCALE_N));
            if let Some(g) = overrides.grid_size {
                design.set_grid_size(g);
            }
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(bad("rel_tol", "must lie in (0, 1)"));
        }
        let budget = self.basis.column_budget();
        if budget == 0 {
            return Err(bad("basis.column_budget", "must be >= 1"));
        }
        if let BasisConfig::Monomial { interval, .. } = &self.basis {
            if !(interval.iter().all(|v| v.is_finite()) && interval[0] < interval[1]) {
                return Err(bad("basis.interval", "must be an increasing pair"));
            }
        }
        if let BasisConfig::FourierDiscrete { period, base, .. } = &self.basis {
            if !(period.is_finite() && *period > 0.0) {
                return Err(bad("basis.period", "must be positive"));
            }
            if *base == 0 {
                return Err(bad("basis.base", "must be >= 1"));
            }
        }
        if self.basis.ordering() == OrderingConfig::Physical
            && !matches!(self.basis, BasisConfig::ClusterIsing { .. })
        {
            return Err(bad(
                "basis.ordering",
                "`physical` applies only to cluster_ising",
            ));
        }
        if let Some(design) = &self.design {
            if design.n() == 0 {
                return Err(bad("design.n", "must be >= 1"));
            }
            if design.grid_size() == 0 {
                return Err(bad("design.grid_size", "must be >= 1"));
            }
            match design {
                DesignConfig::UniformInterval { interval, .. }
                    if !(interval.iter().all(|v| v.is_finite()) && interval[0] < interval[1]) =>
                {
                    return Err(bad("design.interval", "must be an increasing pair"));
                }
                DesignConfig::Equispaced { period, .. }
                    if !(period.is_finite() && *period > 0.0) =>
                {
                    return Err(bad("design.period", "must be positive"));
                }
                DesignConfig::SphereUniform { dim, .. } if *dim == 0 => {
                    return Err(bad("design.dim", "must be >= 1"));
                }
                _ => {}
            }
        }
        match &self.theta {
            ThetaConfig::UnstructuredIid { variance }
                if !(*variance >= 0.0 && variance.is_finite()) =>
            {
                return Err(bad("theta.variance", "must be >= 0"));
            }
            ThetaConfig::Explicit { values } if values.len() != budget => {
                return Err(bad(
                    "theta.values",
                    format!("has {} entries, column budget is {budget}", values.len()),
                ));
            }
            _ => {}
        }
        if self.sweep.m_min == 0 {
            return Err(bad("sweep.m_min", "must be >= 1"));
        }
        if self.sweep.m_step == 0 {
            return Err(bad("sweep.m_step", "must be >= 1"));
        }
        if let Some(hi) = self.sweep.m_max {
            if hi < self.sweep.m_min {
                return Err(bad("sweep.m_max", "is below sweep.m_min"));
            }
            if hi > budget {
                return Err(bad(
                    "sweep.m_max",
                    format!("exceeds the column budget {budget}"),
                ));
            }
        }
        if self.sweep.m_min > budget {
            return Err(bad(
                "sweep.m_min",
                format!("exceeds the column budget {budget}"),
            ));
        }
        let lambdas = self.sweep.lambda.values();
        if lambdas.is_empty() {
            return Err(bad("lambda", "needs at least one value"));
        }
        if let Some(l) = lambdas.iter().find(|l| !(l.is_finite() && **l >= 0.0)) {
            return Err(bad("lambda", format!("must be >= 0, got {l}")));
        }
        self.validate_experiment(budget)
    }

    fn validate_experiment(&self, budget: usize) -> Result<(), ConfigError> {
        match self.experiment {
            ExperimentKind::Sweep | ExperimentKind::RidgeSweep => {
                self.design()?;
                if self.experiment == ExperimentKind::RidgeSweep
                    && self.sweep.lambda.values().iter().all(|l| *l == 0.0)
                {
                    return Err(bad("lambda", "ridge_sweep needs a positive value"));
                }
            }
            ExperimentKind::FourierCheck => {
                let BasisConfig::FourierDiscrete { base, .. } = self.basis else {
                    return Err(bad("basis.family", "fourier_check needs fourier_discrete"));
                };
                let DesignConfig::Equispaced { n, .. } = self.design()? else {
                    return Err(bad("design.strategy", "fourier_check needs equispaced"));
                };
                if *n != base {
                    return Err(bad("basis.base", format!("must equal design.n = {n}")));
                }
                if budget < *n {
                    return Err(bad("basis.column_budget", "must be at least design.n"));
                }
            }
            ExperimentKind::GaussCompare => {
                if !matches!(self.basis, BasisConfig::Legendre { .. }) {
                    return Err(bad("basis.family", "gauss_compare needs legendre"));
                }
                let Some(gc) = &self.gauss_compare else {
                    return Err(bad("gauss_compare", "missing required section"));
                };
                if gc.m == 0 || gc.m > budget {
                    return Err(bad("gauss_compare.m", format!("must lie in 1..={budget}")));
                }
                if gc.n_values.is_empty() || gc.n_values.contains(&0) {
                    return Err(bad(
                        "gauss_compare.n_values",
                        "must be a nonempty list of positive counts",
                    ));
                }
            }
            ExperimentKind::IsingSweep => {
                let BasisConfig::ClusterIsing { chain_length, .. } = self.basis else {
                    return Err(bad("basis.family", "ising_sweep needs cluster_ising"));
                };
                let DesignConfig::ChainConfigurations {
                    chain_length: rows_l,
                    ..
                } = self.design()?
                else {
                    return Err(bad(
                        "design.strategy",
                        "ising_sweep needs chain_configurations",
                    ));
                };
                if *rows_l != chain_length {
                    return Err(bad("design.chain_length", "must match basis.chain_length"));
                }
            }
            ExperimentKind::UnstructuredEb => {
                self.design()?;
                if !matches!(self.theta, ThetaConfig::UnstructuredIid { .. }) {
                    return Err(bad(
                        "theta.scheme",
                        "unstructured_eb needs unstructured_iid",
                    ));
                }
                let Some(ue) = &self.unstructured_eb else {
                    return Err(bad("unstructured_eb", "missing required section"));
                };
                if ue.m_values.is_empty() || ue.m_values.iter().any(|&m| m == 0 || m > budget) {
                    return Err(bad(
                        "unstructured_eb.m_values",
                        format!("entries must lie in 1..={budget}"),
                    ));
                }
                if ue.draws == 0 {
                    return Err(bad("unstructured_eb.draws", "must be >= 1"));
                }
            }
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes to TOML")
    }
}

/// Parses and validates a config from TOML text.
pub fn parse_config_str(text: &str) -> Result<RunConfig, ConfigError> {
    let config: RunConfig = toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    config.validate()?;
    Ok(config)
}

pub fn parse_config(path: impl AsRef<Path>) -> Result<RunConfig, ConfigError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config_str(&text)
}
