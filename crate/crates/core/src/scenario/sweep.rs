use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::domain::{ModelInstance, TechKind};
use crate::model::{PriceOverrides, ScenarioConfig};

use super::{run_scenario, ScenarioError, ScenarioResult};

/// Default jump in reduction, in percentage points, that marks a threshold.
pub const DEFAULT_JUMP_PP: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    CarbonPrice,
    CcsUnitCost,
    TransportCost,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::CarbonPrice => "carbon_price",
            SweepParameter::CcsUnitCost => "ccs_unit_cost",
            SweepParameter::TransportCost => "transport_cost",
        }
    }

    fn apply(self, mut overrides: PriceOverrides, value: f64) -> PriceOverrides {
        match self {
            SweepParameter::CarbonPrice => overrides.carbon_price = Some(value),
            SweepParameter::CcsUnitCost => overrides.ccs_unit_cost = Some(value),
            SweepParameter::TransportCost => overrides.transport_cost = Some(value),
        }
        overrides
    }
}

impl fmt::Display for SweepParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepParameter {
    type Err = SweepError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "carbon_price" | "cp" => Ok(SweepParameter::CarbonPrice),
            "ccs_unit_cost" | "ccsp" => Ok(SweepParameter::CcsUnitCost),
            "transport_cost" | "gt" => Ok(SweepParameter::TransportCost),
            other => Err(SweepError::UnknownParameter(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error(
        "unknown sweep parameter \"{0}\" (expected carbon_price, ccs_unit_cost or transport_cost)"
    )]
    UnknownParameter(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub jump_pp: f64,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self {
            jump_pp: DEFAULT_JUMP_PP,
            jobs: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub reduction_pct: f64,
    pub objective: f64,
    pub solar_gw: f64,
    pub wind_gw: f64,
    pub ccs_local_t: f64,
    pub ccs_traded_t: f64,
    pub any_trading: bool,
}

impl SweepSummary {
    pub fn of(result: &ScenarioResult) -> Self {
        let traded = result.plan.total_traded();
        Self {
            reduction_pct: result.reduction_pct,
            objective: result.objective_value,
            solar_gw: result.plan.total_re_gw(TechKind::Solar),
            wind_gw: result.plan.total_re_gw(TechKind::Wind),
            ccs_local_t: result.plan.total_ccs_local(),
            ccs_traded_t: traded,
            any_trading: traded > 0.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub value: f64,
    pub result: Result<ScenarioResult, ScenarioError>,
}

impl SweepPoint {
    pub fn summary(&self) -> Option<SweepSummary> {
        self.result.as_ref().ok().map(SweepSummary::of)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub parameter: SweepParameter,
    pub config: ScenarioConfig,
    pub points: Vec<SweepPoint>,
    /// First grid value whose reduction exceeds the previous solved point's
    /// by more than the jump size.
    pub threshold: Option<f64>,
    /// Grid values where reduction fell as the carbon price rose.
    pub monotonicity_violations: Vec<f64>,
}

impl SweepResult {
    pub fn grid(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.value).collect()
    }
}

/// `steps` evenly spaced values from `from` to `to` inclusive.
pub fn linear_grid(from: f64, to: f64, steps: usize) -> Result<Vec<f64>, SweepError> {
    match steps {
        0 => Err(SweepError::InvalidGrid("at least one step required".into())),
        1 => Ok(vec![from]),
        _ => {
            if to <= from {
                return Err(SweepError::InvalidGrid(format!(
                    "to ({to}) must exceed from ({from})"
                )));
            }
            let step = (to - from) / (steps - 1) as f64;
            Ok((0..steps)
                .map(|s| {
                    if s + 1 == steps {
                        to
                    } else {
                        from + step * s as f64
                    }
                })
                .collect())
        }
    }
}

fn check_grid(grid: &[f64]) -> Result<(), SweepError> {
    if grid.is_empty() {
        return Err(SweepError::InvalidGrid("empty grid".into()));
    }
    if let Some(v) = grid.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(SweepError::InvalidGrid(format!(
            "value {v} is negative or not finite"
        )));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(SweepError::InvalidGrid(
            "values must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// Re-runs `config` once per grid value with `parameter` replaced by that
/// constant. Failed points are kept and do not stop the sweep.
pub fn sweep(
    instance: &ModelInstance,
    config: &ScenarioConfig,
    parameter: SweepParameter,
    grid: &[f64],
    options: &SweepOptions,
) -> Result<SweepResult, SweepError> {
    check_grid(grid)?;
    let run = |&value: &f64| {
        let cfg = config.with_overrides(parameter.apply(config.overrides, value));
        SweepPoint {
            value,
            result: run_scenario(instance, &cfg),
        }
    };
    let points: Vec<SweepPoint> = match options.jobs {
        Some(jobs) => rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| SweepError::Pool(e.to_string()))?
            .install(|| grid.par_iter().map(run).collect()),
        None => grid.par_iter().map(run).collect(),
    };

    let solved: Vec<(f64, f64)> = points
        .iter()
        .filter_map(|p| p.result.as_ref().ok().map(|r| (p.value, r.reduction_pct)))
        .collect();
    let threshold = solved
        .windows(2)
        .find(|w| w[1].1 - w[0].1 > options.jump_pp)
        .map(|w| w[1].0);
    let monotonicity_violations = if parameter == SweepParameter::CarbonPrice {
        solved
            .windows(2)
            .filter(|w| w[1].1 < w[0].1 - 1e-6)
            .map(|w| w[1].0)
            .collect()
    } else {
        Vec::new()
    };
    for v in &monotonicity_violations {
        log::warn!("reduction decreased at {parameter} = {v}");
    }
    Ok(SweepResult {
        parameter,
        config: *config,
        points,
        threshold,
        monotonicity_violations,
    })
}
