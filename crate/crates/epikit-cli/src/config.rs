//! Scenario configuration: JSON-loadable overrides over per-scenario
//! defaults.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("unknown scenario '{0}'")]
    UnknownScenario(String),
    #[error("nu list must be strictly increasing positive integers")]
    BadNuList,
    #[error("rho must be nonnegative and finite")]
    BadRho,
    #[error("grid step must be positive and finite")]
    BadGridStep,
    #[error("unknown check '{0}'")]
    UnknownCheck(String),
    #[error("function slot '{slot}' is not used by this scenario")]
    UnknownFunctionSlot { slot: String },
    #[error(transparent)]
    Catalog(#[from] crate::catalog::CatalogError),
    #[error("config parse error: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("probe grid setup: {0}")]
    Grid(#[from] epikit::grid::GridError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// One scenario run, fully determined by this record plus the registry
/// defaults for its id.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu_list: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_step: Option<f64>,
    /// Catalog tokens keyed by the scenario's function slots.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub functions: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub checks: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl ScenarioConfig {
    pub fn bare(id: &str) -> ScenarioConfig {
        ScenarioConfig {
            id: id.to_string(),
            nu_list: None,
            rho: None,
            grid_step: None,
            functions: BTreeMap::new(),
            checks: None,
            format: None,
            seed: None,
        }
    }

    pub fn from_json(text: &str) -> Result<ScenarioConfig, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Defaults merged with config overrides; what a scenario runner receives.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub id: String,
    pub nu_list: Vec<u32>,
    pub rho: f64,
    pub grid_step: f64,
    pub functions: BTreeMap<String, String>,
    pub checks: Vec<String>,
    pub format: OutputFormat,
    pub seed: u64,
}

impl Resolved {
    pub fn check_enabled(&self, name: &str) -> bool {
        self.checks.iter().any(|c| c == name)
    }

    pub fn function(&self, slot: &str) -> Result<crate::catalog::CatalogFn, ConfigError> {
        let token = self
            .functions
            .get(slot)
            .ok_or_else(|| ConfigError::UnknownFunctionSlot {
                slot: slot.to_string(),
            })?;
        Ok(crate::catalog::parse(token)?)
    }
}

/// Default sweep over the doubling family of approximation indices.
pub fn default_nu_list() -> Vec<u32> {
    vec![1, 2, 4, 8, 16, 32, 64]
}

pub fn validate_nu_list(nu: &[u32]) -> Result<(), ConfigError> {
    if nu.is_empty() || nu[0] == 0 || nu.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ConfigError::BadNuList);
    }
    Ok(())
}
