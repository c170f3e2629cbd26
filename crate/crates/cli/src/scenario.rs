//! Scenario files: a versioned TOML document naming a domain, a model of
//! that domain, sampling choices, tolerances and output options.
//!
//! ```toml
//! version = 1
//! name = "cpt-three-prize"
//! domain = "risk"
//!
//! [model]
//! kind = "cpt"
//! prizes = [4000.0, 3000.0, 0.0]
//! value_exponent = 0.54
//! weight_exponent = 0.74
//!
//! [sampler]
//! resolution = 101
//! ```

use std::path::Path;

use nearrep_core::prefcore::{
    ActModel, ContinuousTimeModel, DiscountModel, RiskModel, BOUND_SLACK, DEFAULT_TOL,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const SCENARIO_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Domain {
    Risk,
    Uncertainty,
    TimeDiscrete,
    TimeContinuous,
}

/// The model, typed by the scenario's domain. Serialized without a wrapper
/// so the `kind` tag of the inner model is the only discriminator.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ModelSpec {
    Risk(RiskModel),
    Uncertainty(ActModel),
    TimeDiscrete(DiscountModel),
    TimeContinuous(ContinuousTimeModel),
}

impl ModelSpec {
    pub fn domain(&self) -> Domain {
        match self {
            ModelSpec::Risk(_) => Domain::Risk,
            ModelSpec::Uncertainty(_) => Domain::Uncertainty,
            ModelSpec::TimeDiscrete(_) => Domain::TimeDiscrete,
            ModelSpec::TimeContinuous(_) => Domain::TimeContinuous,
        }
    }

    fn validate(&self) -> nearrep_core::Result<()> {
        match self {
            ModelSpec::Risk(m) => m.validate(),
            ModelSpec::Uncertainty(m) => m.validate(),
            ModelSpec::TimeDiscrete(m) => m.validate(),
            ModelSpec::TimeContinuous(m) => m.validate(),
        }
    }
}

/// Sampling choices. `resolution` means, per domain: simplex subdivisions
/// per edge (risk), grid points per axis (uncertainty), horizon in periods
/// (time-discrete), delay grid points (time-continuous).
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplerSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pair_resolution: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_resolution: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub random_pairs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Half-width of the act box `[0, bound]^d`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    /// Scale factor of the power-limit check; omitted means skipped.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    /// Grid points per axis of the quasi-concave hull; omitted means
    /// skipped.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hull_resolution: Option<usize>,
    /// Number of sampled amounts below the top amount.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amounts: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Root-finding tolerance for indifference.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub root: Option<f64>,
    /// Slack added to every bound check.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slack: Option<f64>,
    /// Stopping tolerance of limit extrapolations.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit: Option<f64>,
    /// Terms of every series and limit.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series_terms: Option<usize>,
    /// Bound on the W-axiom defect used to pick the recovery date;
    /// defaults to the measured one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w_bound: Option<f64>,
}

impl Tolerances {
    pub fn root(&self) -> f64 {
        self.root.unwrap_or(DEFAULT_TOL)
    }
    pub fn slack(&self) -> f64 {
        self.slack.unwrap_or(BOUND_SLACK)
    }
    pub fn limit(&self) -> f64 {
        self.limit.unwrap_or(1e-11)
    }
    pub fn series_terms(&self) -> usize {
        self.series_terms.unwrap_or(60)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<String>,
    /// Write CSV side-files; defaults to true.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tables: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    pub version: u32,
    pub name: String,
    pub domain: Domain,
    pub model: ModelSpec,
    #[serde(skip_serializing_if = "is_default")]
    pub sampler: SamplerSpec,
    #[serde(skip_serializing_if = "is_default")]
    pub tolerances: Tolerances,
    #[serde(skip_serializing_if = "is_default")]
    pub output: OutputSpec,
}

fn is_default<T: Default + PartialEq>(t: &T) -> bool {
    *t == T::default()
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    version: u32,
    name: String,
    domain: Domain,
    model: toml::Spanned<toml::Table>,
    #[serde(default)]
    sampler: SamplerSpec,
    #[serde(default)]
    tolerances: Tolerances,
    #[serde(default)]
    output: OutputSpec,
}

/// Command-line overrides applied on top of a scenario.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub grid: Option<usize>,
}

impl Scenario {
    pub fn new(name: &str, model: ModelSpec) -> Self {
        Self {
            version: SCENARIO_VERSION,
            name: name.to_string(),
            domain: model.domain(),
            model,
            sampler: SamplerSpec::default(),
            tolerances: Tolerances::default(),
            output: OutputSpec::default(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml_str(&text)
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawScenario = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        if raw.version != SCENARIO_VERSION {
            return Err(CliError::Config(format!(
                "unsupported version {} (expected {SCENARIO_VERSION})",
                raw.version
            )));
        }
        check_name(&raw.name)?;
        let line = 1 + text[..raw.model.span().start].matches('\n').count();
        let value = toml::Value::Table(raw.model.into_inner());
        let typed = match raw.domain {
            Domain::Risk => value.try_into().map(ModelSpec::Risk),
            Domain::Uncertainty => value.try_into().map(ModelSpec::Uncertainty),
            Domain::TimeDiscrete => value.try_into().map(ModelSpec::TimeDiscrete),
            Domain::TimeContinuous => value.try_into().map(ModelSpec::TimeContinuous),
        };
        let model = typed.map_err(|e| {
            CliError::Config(format!("model (line {line}): {}", e.to_string().trim()))
        })?;
        model
            .validate()
            .map_err(|e| CliError::Config(format!("model (line {line}): {e}")))?;
        Ok(Self {
            version: raw.version,
            name: raw.name,
            domain: raw.domain,
            model,
            sampler: raw.sampler,
            tolerances: raw.tolerances,
            output: raw.output,
        })
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("scenarios always serialize")
    }

    pub fn apply(&mut self, o: Overrides) {
        if let Some(t) = o.tol {
            self.tolerances.root = Some(t);
        }
        if let Some(s) = o.seed {
            self.sampler.seed = Some(s);
        }
        if let Some(g) = o.grid {
            self.sampler.resolution = Some(g);
        }
    }
}

/// Names become file-name prefixes.
fn check_name(name: &str) -> Result<()> {
    let ok = !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
        && !name.starts_with('.');
    if ok {
        Ok(())
    } else {
        Err(CliError::Config(format!(
            "name `{name}` must be non-empty and use only letters, digits, '-', '_' or '.'"
        )))
    }
}
