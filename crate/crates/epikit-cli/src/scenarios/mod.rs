//! Scenario registry and dispatch.
//!
//! Each scenario binds a concrete problem family to default function
//! tokens, radii, grid steps, and a set of named checks; a config can
//! override any of those. Scenario runs are deterministic for a given
//! resolved config: randomized sweeps derive from the config seed and all
//! parallel reductions are order-independent.

pub mod ambiguity;
pub mod augmentation;
pub mod common;
pub mod composite;
pub mod constraint_composite;
pub mod cubic;
pub mod dual_affine;
pub mod dual_penalty;
pub mod minval;
pub mod splitting;

use std::collections::BTreeMap;

use crate::config::{
    default_nu_list, validate_nu_list, ConfigError, OutputFormat, Resolved, ScenarioConfig,
};
use crate::emit::SweepResult;

pub struct ScenarioDef {
    pub id: &'static str,
    pub description: &'static str,
    pub default_rho: f64,
    pub default_grid_step: f64,
    pub functions: &'static [(&'static str, &'static str)],
    pub checks: &'static [&'static str],
    run: fn(&Resolved) -> Result<SweepResult, ConfigError>,
}

pub fn registry() -> Vec<ScenarioDef> {
    vec![
        ScenarioDef {
            id: cubic::ID,
            description: cubic::DESCRIPTION,
            default_rho: 2.0,
            default_grid_step: 0.01,
            functions: cubic::FUNCTIONS,
            checks: cubic::CHECKS,
            run: cubic::run,
        },
        ScenarioDef {
            id: composite::ID,
            description: composite::DESCRIPTION,
            default_rho: 2.0,
            default_grid_step: 0.01,
            functions: composite::FUNCTIONS,
            checks: composite::CHECKS,
            run: composite::run,
        },
        ScenarioDef {
            id: constraint_composite::ID,
            description: constraint_composite::DESCRIPTION,
            default_rho: 1.5,
            default_grid_step: 0.01,
            functions: constraint_composite::FUNCTIONS,
            checks: constraint_composite::CHECKS,
            run: constraint_composite::run,
        },
        ScenarioDef {
            id: ambiguity::ID,
            description: ambiguity::DESCRIPTION,
            default_rho: 2.0,
            default_grid_step: 0.01,
            functions: ambiguity::FUNCTIONS,
            checks: ambiguity::CHECKS,
            run: ambiguity::run,
        },
        ScenarioDef {
            id: splitting::ID,
            description: splitting::DESCRIPTION,
            default_rho: 1.0,
            default_grid_step: 0.01,
            functions: splitting::FUNCTIONS,
            checks: splitting::CHECKS,
            run: splitting::run,
        },
        ScenarioDef {
            id: augmentation::ID,
            description: augmentation::DESCRIPTION,
            default_rho: 2.0,
            default_grid_step: 0.01,
            functions: augmentation::FUNCTIONS,
            checks: augmentation::CHECKS,
            run: augmentation::run,
        },
        ScenarioDef {
            id: dual_affine::ID,
            description: dual_affine::DESCRIPTION,
            default_rho: 1.5,
            default_grid_step: 0.01,
            functions: dual_affine::FUNCTIONS,
            checks: dual_affine::CHECKS,
            run: dual_affine::run,
        },
        ScenarioDef {
            id: dual_penalty::ID,
            description: dual_penalty::DESCRIPTION,
            default_rho: 1.5,
            default_grid_step: 0.01,
            functions: dual_penalty::FUNCTIONS,
            checks: dual_penalty::CHECKS,
            run: dual_penalty::run,
        },
        ScenarioDef {
            id: minval::ID,
            description: minval::DESCRIPTION,
            default_rho: 1.0,
            default_grid_step: 0.01,
            functions: minval::FUNCTIONS,
            checks: minval::CHECKS,
            run: minval::run,
        },
    ]
}

pub fn find(id: &str) -> Option<ScenarioDef> {
    registry().into_iter().find(|def| def.id == id)
}

/// Merges a config over its scenario's defaults and validates everything
/// a run depends on.
pub fn resolve(cfg: &ScenarioConfig) -> Result<Resolved, ConfigError> {
    let def = find(&cfg.id).ok_or_else(|| ConfigError::UnknownScenario(cfg.id.clone()))?;

    let nu_list = cfg.nu_list.clone().unwrap_or_else(default_nu_list);
    validate_nu_list(&nu_list)?;

    let rho = cfg.rho.unwrap_or(def.default_rho);
    if !(rho >= 0.0) || !rho.is_finite() {
        return Err(ConfigError::BadRho);
    }
    let grid_step = cfg.grid_step.unwrap_or(def.default_grid_step);
    if !(grid_step > 0.0) || !grid_step.is_finite() {
        return Err(ConfigError::BadGridStep);
    }

    let mut functions: BTreeMap<String, String> = def
        .functions
        .iter()
        .map(|&(slot, token)| (slot.to_string(), token.to_string()))
        .collect();
    for (slot, token) in &cfg.functions {
        if !functions.contains_key(slot) {
            return Err(ConfigError::UnknownFunctionSlot { slot: slot.clone() });
        }
        functions.insert(slot.clone(), token.clone());
    }
    for token in functions.values() {
        crate::catalog::parse(token)?;
    }

    let checks = match &cfg.checks {
        None => def.checks.iter().map(|c| c.to_string()).collect(),
        Some(requested) => {
            for c in requested {
                if !def.checks.contains(&c.as_str()) {
                    return Err(ConfigError::UnknownCheck(c.clone()));
                }
            }
            requested.clone()
        }
    };

    Ok(Resolved {
        id: cfg.id.clone(),
        nu_list,
        rho,
        grid_step,
        functions,
        checks,
        format: cfg.format.unwrap_or(OutputFormat::Csv),
        seed: cfg.seed.unwrap_or(0x5eed),
    })
}

/// Resolves and runs one scenario.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<SweepResult, ConfigError> {
    let resolved = resolve(cfg)?;
    let def = find(&resolved.id).expect("resolved ids exist");
    (def.run)(&resolved)
}
