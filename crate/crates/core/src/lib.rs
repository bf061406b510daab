//! Joint solar, wind and CCS deployment planning across regions as a linear
//! program, with scenario runs, price sweeps and cash-flow analytics.
//!
//! ```
//! use ccsplan_core::{fixtures, run_scenario, ScenarioConfig};
//!
//! let instance = fixtures::unit_one();
//! let result = run_scenario(&instance, &ScenarioConfig::scenario(1).unwrap()).unwrap();
//! assert!((result.objective_value + 6.0).abs() < 1e-9);
//! assert!((result.reduction_pct - 50.0).abs() < 1e-9);
//! ```

pub mod analytics;
pub mod domain;
pub mod fixtures;
pub mod io;
pub mod lp;
pub mod model;
pub mod scenario;

pub use analytics::{analyze, Analysis, CashflowOptions};
pub use domain::{validate_instance, ModelInstance, RawInstance, TechKind, ValidateOptions};
pub use lp::{LinearProgram, LpSolution, SolverSettings, Status};
pub use model::{CcsLimitMode, DeploymentPlan, ObjectiveMode, PriceOverrides, ScenarioConfig};
pub use scenario::{
    run_all, run_scenario, sweep, ScenarioError, ScenarioResult, SweepParameter, SweepResult,
};
