//! Scenario runs, the two-stage maximum-reduction mode and parameter sweeps.

mod sweep;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::domain::ModelInstance;
use crate::lp::{self, LinearProgram, LpError, LpSolution, SolverSettings, Status};
use crate::model::{
    assemble, extract_plan, reduction_objective, total_offset_row, DeploymentPlan, ModelError,
    ObjectiveMode, ScenarioConfig, VariableIndex,
};

pub use sweep::{
    linear_grid, sweep, SweepError, SweepOptions, SweepParameter, SweepPoint, SweepResult,
    SweepSummary, DEFAULT_JUMP_PP,
};

/// Relative slack on the stage-one optimum in the maximum-reduction mode.
pub const LEX_EPSILON: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveStats {
    pub num_vars: usize,
    pub num_rows: usize,
    /// Simplex iterations over all stages.
    pub iterations: usize,
    pub max_primal_infeasibility: f64,
    pub clamp_events: usize,
    /// Largest achievable total offset, when the two-stage mode ran.
    pub stage_one_offset: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioResult {
    pub config: ScenarioConfig,
    pub plan: DeploymentPlan,
    /// `C_i(t)` after year `t`, `[region][year]`.
    pub emissions: Vec<Vec<f64>>,
    pub objective_value: f64,
    pub reduction_pct: f64,
    pub stats: SolveStats,
}

impl ScenarioResult {
    pub fn baseline_total(&self, instance: &ModelInstance) -> f64 {
        instance.baseline_total()
    }

    /// `Σ_i C_i(t)`.
    pub fn national_emissions(&self, year: usize) -> f64 {
        self.emissions.iter().map(|r| r[year]).sum()
    }

    /// Tonnes offset over the whole horizon.
    pub fn total_offset(&self, instance: &ModelInstance) -> f64 {
        (0..instance.num_years())
            .map(|t| {
                (0..instance.regions().len())
                    .map(|i| self.plan.offset(instance, i, t))
                    .sum::<f64>()
            })
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("infeasible; binding rows: {}", .rows.join(", "))]
    Infeasible { rows: Vec<String> },
    #[error("unbounded along: {}", .vars.join(", "))]
    Unbounded { vars: Vec<String> },
    #[error("iteration limit reached after {iterations} iterations")]
    IterationLimit { iterations: usize },
    #[error("second stage lost reduction: {achieved} < {required}")]
    LexViolation { achieved: f64, required: f64 },
}

fn check_status(lp: &LinearProgram, sol: &LpSolution) -> Result<(), ScenarioError> {
    match sol.status {
        Status::Optimal => Ok(()),
        Status::Infeasible => Err(ScenarioError::Infeasible {
            rows: sol
                .infeasible_rows
                .iter()
                .map(|&i| lp.row_name(i))
                .collect(),
        }),
        Status::Unbounded => Err(ScenarioError::Unbounded {
            vars: sol.unbounded_ray.iter().map(|&j| lp.var_name(j)).collect(),
        }),
        Status::IterationLimit => Err(ScenarioError::IterationLimit {
            iterations: sol.iterations,
        }),
    }
}

pub fn run_scenario(
    instance: &ModelInstance,
    config: &ScenarioConfig,
) -> Result<ScenarioResult, ScenarioError> {
    run_scenario_with(instance, config, &SolverSettings::default())
}

pub fn run_scenario_with(
    instance: &ModelInstance,
    config: &ScenarioConfig,
    settings: &SolverSettings,
) -> Result<ScenarioResult, ScenarioError> {
    let (mut lp, index) = assemble(instance, config)?;
    let mut iterations = 0;
    let mut stage_one_offset = None;

    if config.objective_mode == ObjectiveMode::MaxReductionLex {
        let stage_one = LinearProgram {
            objective: reduction_objective(instance, &index),
            ..lp.clone()
        };
        let sol = lp::solve(&stage_one, settings)?;
        iterations += sol.iterations;
        check_status(&stage_one, &sol)?;
        let best = -sol.objective_value;
        log::debug!("stage one: largest total offset {best}");
        stage_one_offset = Some(best);
        lp.add_row(total_offset_row(
            instance,
            &index,
            best - LEX_EPSILON * best.abs(),
        ));
    }

    let sol = lp::solve(&lp, settings)?;
    iterations += sol.iterations;
    check_status(&lp, &sol)?;
    let plan = extract_plan(&sol, &index)?;
    let result = finish(
        instance,
        config,
        &lp,
        &index,
        plan,
        &sol,
        iterations,
        stage_one_offset,
    );

    if let Some(best) = stage_one_offset {
        let achieved = result.total_offset(instance);
        let required = best - LEX_EPSILON * best.abs();
        // extraction may drop clamped values; allow for them
        let slack = 1e-6 * (1.0 + best.abs());
        if achieved < required - slack {
            return Err(ScenarioError::LexViolation { achieved, required });
        }
    }
    Ok(result)
}

#[allow(clippy::too_many_arguments)]
fn finish(
    instance: &ModelInstance,
    config: &ScenarioConfig,
    lp: &LinearProgram,
    index: &VariableIndex,
    plan: DeploymentPlan,
    sol: &LpSolution,
    iterations: usize,
    stage_one_offset: Option<f64>,
) -> ScenarioResult {
    let emissions = emission_paths(instance, &plan);
    let objective_value = sol.objective_value;
    let reduction_pct = reduction_pct(instance, &emissions);
    ScenarioResult {
        config: *config,
        stats: SolveStats {
            num_vars: index.len(),
            num_rows: lp.rows.len(),
            iterations,
            max_primal_infeasibility: sol.max_primal_infeasibility,
            clamp_events: plan.clamp_events,
            stage_one_offset,
        },
        plan,
        emissions,
        objective_value,
        reduction_pct,
    }
}

/// `C_i(t) = C_i(t−1) − Σ_k g·RE − CCS_i(t)` for every region.
pub fn emission_paths(instance: &ModelInstance, plan: &DeploymentPlan) -> Vec<Vec<f64>> {
    instance
        .regions()
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut level = r.baseline_emissions;
            (0..instance.num_years())
                .map(|t| {
                    level -= plan.offset(instance, i, t);
                    level
                })
                .collect()
        })
        .collect()
}

/// `100·(ΣC(0) − ΣC(T)) / ΣC(0)`; zero when the baseline is zero.
pub fn reduction_pct(instance: &ModelInstance, emissions: &[Vec<f64>]) -> f64 {
    let baseline = instance.baseline_total();
    if baseline <= 0.0 {
        return 0.0;
    }
    let last = instance.num_years() - 1;
    let final_total: f64 = emissions.iter().map(|r| r[last]).sum();
    100.0 * (baseline - final_total) / baseline
}

/// Runs scenarios 1–4 in parallel with `objective`. Failures stay per scenario.
pub fn run_all(
    instance: &ModelInstance,
    objective: ObjectiveMode,
) -> Vec<(u8, Result<ScenarioResult, ScenarioError>)> {
    (1..=4u8)
        .into_par_iter()
        .map(|id| {
            let result = ScenarioConfig::scenario(id)
                .map_err(ScenarioError::from)
                .and_then(|c| run_scenario(instance, &c.with_objective(objective)));
            (id, result)
        })
        .collect()
}

/// Largest violation of a finite yearly cap, relative to the cap; zero or
/// negative when every cap holds.
pub fn cap_excess(instance: &ModelInstance, result: &ScenarioResult) -> f64 {
    let caps = &instance.globals().cap;
    (0..instance.num_years())
        .filter_map(|t| {
            caps.at(t)
                .map(|cap| (result.national_emissions(t) - cap) / cap.abs().max(1.0))
        })
        .fold(f64::NEG_INFINITY, f64::max)
}
