//! Translation of a [`ModelInstance`](crate::domain::ModelInstance) and a
//! [`ScenarioConfig`] into a [`LinearProgram`](crate::lp::LinearProgram), and
//! of solutions back into a [`DeploymentPlan`].

mod builder;
mod index;
mod plan;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::domain::{DistanceError, GlobalParams, ModelInstance, TimeSeries, ValidationErrors};
use crate::lp::Status;

pub use builder::{
    assemble, build_constraints, build_objective, offset_terms, reduction_objective,
    total_offset_row,
};
pub use index::{VarKey, VariableIndex};
pub use plan::{extract_plan, DeploymentPlan, CCS_CLAMP_T, RE_CLAMP_GW};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CcsLimitMode {
    /// Storage capacity split evenly across the horizon years.
    EqualYearly,
    /// Only the horizon total is limited.
    TotalOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectiveMode {
    /// Minimize net cost only.
    CostOnly,
    /// Maximize total reduction, then minimize cost among maximizers.
    MaxReductionLex,
}

impl fmt::Display for ObjectiveMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ObjectiveMode::CostOnly => "cost",
            ObjectiveMode::MaxReductionLex => "max-reduction",
        })
    }
}

/// Constant replacements for the uncertain price schedules.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PriceOverrides {
    pub carbon_price: Option<f64>,
    pub ccs_unit_cost: Option<f64>,
    pub transport_cost: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    /// Scenario number 1–4 when the config is one of the standard scenarios.
    pub scenario: Option<u8>,
    pub ccs_limit_mode: CcsLimitMode,
    pub resilience_enabled: bool,
    pub overrides: PriceOverrides,
    pub objective_mode: ObjectiveMode,
    /// Adds `C_i(t) ≥ 0` rows for every region and year.
    pub nonneg_emissions: bool,
}

impl ScenarioConfig {
    pub fn new(ccs_limit_mode: CcsLimitMode, resilience_enabled: bool) -> Self {
        Self {
            scenario: None,
            ccs_limit_mode,
            resilience_enabled,
            overrides: PriceOverrides::default(),
            objective_mode: ObjectiveMode::CostOnly,
            nonneg_emissions: false,
        }
    }

    /// Standard scenarios: 1 = equal-yearly CCS, 2 = 1 + resilience,
    /// 3 = total-only CCS, 4 = 3 + resilience. All cost-only.
    pub fn scenario(id: u8) -> Result<Self, ModelError> {
        let (mode, resilience) = match id {
            1 => (CcsLimitMode::EqualYearly, false),
            2 => (CcsLimitMode::EqualYearly, true),
            3 => (CcsLimitMode::TotalOnly, false),
            4 => (CcsLimitMode::TotalOnly, true),
            other => return Err(ModelError::UnknownScenario(other)),
        };
        Ok(Self {
            scenario: Some(id),
            ..Self::new(mode, resilience)
        })
    }

    pub fn with_objective(mut self, mode: ObjectiveMode) -> Self {
        self.objective_mode = mode;
        self
    }

    pub fn with_overrides(mut self, overrides: PriceOverrides) -> Self {
        self.overrides = overrides;
        self
    }

    pub fn with_nonneg_emissions(mut self, on: bool) -> Self {
        self.nonneg_emissions = on;
        self
    }

    /// Global parameters with the price overrides applied.
    pub fn effective_globals(&self, instance: &ModelInstance) -> GlobalParams {
        let mut g = instance.globals().clone();
        let t = instance.num_years();
        if let Some(v) = self.overrides.carbon_price {
            g.carbon_price = TimeSeries::constant(v, t);
        }
        if let Some(v) = self.overrides.ccs_unit_cost {
            g.ccs_unit_cost = TimeSeries::constant(v, t);
        }
        if let Some(v) = self.overrides.transport_cost {
            g.transport_cost = TimeSeries::constant(v, t);
        }
        g
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("unknown scenario {0} (expected 1-4)")]
    UnknownScenario(u8),
    #[error("invalid price override: {0}")]
    InvalidOverride(String),
    #[error(transparent)]
    Validation(#[from] ValidationErrors),
    #[error(transparent)]
    Distance(#[from] DistanceError),
    #[error("solution is not optimal: {0}")]
    NotOptimal(Status),
}
