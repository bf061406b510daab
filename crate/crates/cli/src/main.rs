use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use ccsplan_core::io::{self, write_results, write_run_all, write_sweep};
use ccsplan_core::scenario::{linear_grid, SweepOptions};
use ccsplan_core::{
    analyze, run_all, run_scenario, sweep, validate_instance, CashflowOptions, ModelInstance,
    ObjectiveMode, PriceOverrides, ScenarioConfig, SweepParameter, ValidateOptions,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

const UNITS_HELP: &str = "\
Units (canonical, unless overridden by the `units` block of globals.json):
  emissions, CCS capacity, CCS amounts   t CO2
  RE capacity and potential               GW
  generation per capacity (h)             GWh/GW per year
  offset per capacity (g)                 t CO2/GW per year
  unit cost (rp)                          yen/GW
  feed-in tariff (sp)                     yen/GWh
  carbon price (cp), CCS unit cost (ccsp) yen/t
  transport cost (gt)                     yen/(t km)
  distance                                km
Report figures: objective and cash flows in yen, reductions in % of the
national baseline, plan amounts in GW (RE) and t (CCS).";

#[derive(Debug, Parser)]
#[command(name = "ccsplan", version, about = "Solar, wind and CCS deployment planner", after_help = UNITS_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Load and validate a dataset, printing its dimensions or every error.
    #[command(after_help = UNITS_HELP)]
    Validate(DataArg),
    /// Solve one scenario and write a result bundle.
    #[command(after_help = UNITS_HELP)]
    Solve(SolveArgs),
    /// Solve scenarios 1-4 and write S1..S4 bundles plus run-all.csv.
    #[command(name = "run-all", after_help = UNITS_HELP)]
    RunAll(RunAllArgs),
    /// Re-solve one scenario over a linear grid of a price parameter.
    #[command(after_help = UNITS_HELP)]
    Sweep(SweepArgs),
    /// Check a result bundle's summary.json against its CSV files.
    #[command(after_help = UNITS_HELP)]
    Report(ReportArgs),
}

#[derive(Debug, Args)]
struct DataArg {
    /// Dataset directory (globals.json, regions.csv, tech.csv, series/).
    #[arg(long, env = "CCSPLAN_DATA", value_name = "PATH")]
    data: PathBuf,
}

#[derive(Debug, Args)]
struct ModelFlags {
    /// Objective: `cost` minimizes net cost; `max-reduction` maximizes the
    /// total offset first and then minimizes cost.
    #[arg(long, value_enum)]
    objective: Option<Objective>,
    /// Forbid negative regional emissions, which makes CCS trading possible.
    #[arg(long)]
    ccs_nonneg_emissions: bool,
    /// Charge RE replacement after this many years in the cash-flow report.
    #[arg(long, value_name = "YEARS")]
    replacement_years: Option<usize>,
}

#[derive(Debug, Args)]
struct PriceFlags {
    /// Constant carbon price override, yen/t.
    #[arg(long, value_name = "YEN_PER_T")]
    carbon_price: Option<f64>,
    /// Constant CCS unit cost override, yen/t.
    #[arg(long, value_name = "YEN_PER_T")]
    ccs_cost: Option<f64>,
    /// Constant CCS transport cost override, yen/(t km).
    #[arg(long, value_name = "YEN_PER_T_KM")]
    transport_cost: Option<f64>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    data: DataArg,
    /// Scenario 1-4: 1 equal-yearly CCS, 2 equal-yearly + resilience,
    /// 3 total-only CCS, 4 total-only + resilience.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    scenario: u8,
    #[command(flatten)]
    model: ModelFlags,
    #[command(flatten)]
    prices: PriceFlags,
    /// Output directory for the result bundle.
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct RunAllArgs {
    #[command(flatten)]
    data: DataArg,
    #[command(flatten)]
    model: ModelFlags,
    /// Output directory; scenario bundles go to S1..S4 below it.
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    data: DataArg,
    /// Scenario 1-4.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=4))]
    scenario: u8,
    /// Swept parameter: carbon-price and ccs-cost in yen/t, transport-cost
    /// in yen/(t km).
    #[arg(long, value_enum)]
    param: Param,
    /// First grid value.
    #[arg(long)]
    from: f64,
    /// Last grid value.
    #[arg(long)]
    to: f64,
    /// Number of grid points.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    steps: u64,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
    /// Reduction jump in percentage points that marks a threshold.
    #[arg(long, default_value_t = ccsplan_core::scenario::DEFAULT_JUMP_PP)]
    jump_pp: f64,
    #[command(flatten)]
    model: ModelFlags,
    /// Output directory for sweep.csv, sweep.json and points/.
    #[arg(long, value_name = "PATH")]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// Bundle directory written by `solve` (or one S<n> / points/NN directory).
    #[arg(value_name = "BUNDLE")]
    bundle: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Objective {
    Cost,
    MaxReduction,
}

impl From<Objective> for ObjectiveMode {
    fn from(o: Objective) -> Self {
        match o {
            Objective::Cost => ObjectiveMode::CostOnly,
            Objective::MaxReduction => ObjectiveMode::MaxReductionLex,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Param {
    CarbonPrice,
    CcsCost,
    TransportCost,
}

impl From<Param> for SweepParameter {
    fn from(p: Param) -> Self {
        match p {
            Param::CarbonPrice => SweepParameter::CarbonPrice,
            Param::CcsCost => SweepParameter::CcsUnitCost,
            Param::TransportCost => SweepParameter::TransportCost,
        }
    }
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure {
            code: 1,
            error: e.into(),
        }
    }
}

fn usage(message: String) -> Failure {
    Failure {
        code: 2,
        error: anyhow!(message),
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let outcome = match cli.command {
        Command::Validate(a) => cmd_validate(&a),
        Command::Solve(a) => cmd_solve(&a),
        Command::RunAll(a) => cmd_run_all(&a),
        Command::Sweep(a) => cmd_sweep(&a),
        Command::Report(a) => cmd_report(&a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn load_instance(dir: &Path) -> Result<ModelInstance> {
    let raw = io::load(dir)?;
    validate_instance(&raw, &ValidateOptions::default())
        .with_context(|| format!("{} is not a valid dataset", dir.display()))
}

fn config(scenario: u8, model: &ModelFlags, default: Objective) -> ScenarioConfig {
    let mut c = ScenarioConfig::scenario(scenario).expect("scenario range checked by clap");
    c.objective_mode = model.objective.unwrap_or(default).into();
    c.nonneg_emissions = model.ccs_nonneg_emissions;
    c
}

fn cash_options(model: &ModelFlags) -> CashflowOptions {
    let mut o = CashflowOptions::default();
    if let Some(years) = model.replacement_years {
        o.replacement = true;
        o.replacement_years = years;
    }
    o
}

fn yen(v: f64) -> String {
    io::format_number(v.round())
}

fn pct(v: f64) -> String {
    io::format_number((v * 1000.0).round() / 1000.0)
}

fn payback(y: Option<i32>) -> String {
    y.map_or("none".to_string(), |y| y.to_string())
}

fn cmd_validate(a: &DataArg) -> Outcome {
    let raw = io::load(&a.data)?;
    let series = 2 * raw.techs.len()
        + [
            &raw.globals.carbon_price,
            &raw.globals.ccs_unit_cost,
            &raw.globals.transport_cost,
        ]
        .iter()
        .filter(|s| s.is_some())
        .count()
        + raw.globals.tariff.len()
        + usize::from(raw.globals.cap.is_some());
    let inst = match validate_instance(&raw, &ValidateOptions::default()) {
        Ok(inst) => inst,
        Err(errors) => {
            for e in &errors.0 {
                println!("{e}");
            }
            return Err(anyhow!("{} validation error(s)", errors.0.len()).into());
        }
    };
    let h = inst.horizon();
    println!(
        "{} regions ({} storage-capable), horizon {}–{}, {} series",
        inst.regions().len(),
        inst.storage_regions().len(),
        h.start_year,
        h.start_year + h.num_years as i32 - 1,
        series
    );
    Ok(())
}

fn cmd_solve(a: &SolveArgs) -> Outcome {
    let inst = load_instance(&a.data.data)?;
    let mut cfg = config(a.scenario, &a.model, Objective::MaxReduction);
    cfg.overrides = PriceOverrides {
        carbon_price: a.prices.carbon_price,
        ccs_unit_cost: a.prices.ccs_cost,
        transport_cost: a.prices.transport_cost,
    };
    let result = run_scenario(&inst, &cfg).with_context(|| format!("scenario {}", a.scenario))?;
    let analysis = analyze(&result, &inst, &cash_options(&a.model));
    write_results(&a.out, &inst, &result, &analysis)?;
    println!(
        "scenario {} optimal objective {} yen reduction {}% payback {}",
        a.scenario,
        yen(result.objective_value),
        pct(result.reduction_pct),
        payback(analysis.payback_year)
    );
    Ok(())
}

fn cmd_run_all(a: &RunAllArgs) -> Outcome {
    let inst = load_instance(&a.data.data)?;
    let mode: ObjectiveMode = a.model.objective.unwrap_or(Objective::MaxReduction).into();
    let opts = cash_options(&a.model);
    let runs: Vec<_> = if a.model.ccs_nonneg_emissions {
        (1..=4)
            .map(|id| {
                (
                    id,
                    run_scenario(&inst, &config(id, &a.model, Objective::MaxReduction)),
                )
            })
            .collect()
    } else {
        run_all(&inst, mode)
    };
    let runs: Vec<_> = runs
        .into_iter()
        .map(|(id, r)| {
            (
                id,
                r.map(|res| {
                    let an = analyze(&res, &inst, &opts);
                    (res, an)
                }),
            )
        })
        .collect();
    write_run_all(&a.out, &inst, &runs)?;
    let mut failed = 0;
    for (id, run) in &runs {
        match run {
            Ok((r, an)) => println!(
                "scenario {id} optimal objective {} yen reduction {}% payback {}",
                yen(r.objective_value),
                pct(r.reduction_pct),
                payback(an.payback_year)
            ),
            Err(e) => {
                failed += 1;
                println!("scenario {id} failed: {e}");
            }
        }
    }
    if failed == runs.len() {
        return Err(anyhow!("every scenario failed").into());
    }
    Ok(())
}

fn cmd_sweep(a: &SweepArgs) -> Outcome {
    if !(a.from <= a.to) {
        return Err(usage(format!(
            "--from ({}) must not exceed --to ({})",
            a.from, a.to
        )));
    }
    if a.from < 0.0 {
        return Err(usage(format!(
            "--from must be non-negative, got {}",
            a.from
        )));
    }
    if a.steps > 1 && a.from == a.to {
        return Err(usage("--from and --to must differ when --steps > 1".into()));
    }
    let inst = load_instance(&a.data.data)?;
    let cfg = config(a.scenario, &a.model, Objective::Cost);
    let grid = linear_grid(a.from, a.to, a.steps as usize).map_err(|e| usage(e.to_string()))?;
    let opts = SweepOptions {
        jump_pp: a.jump_pp,
        jobs: a.jobs.map(|j| j as usize),
    };
    let res = sweep(&inst, &cfg, a.param.into(), &grid, &opts)?;
    let cash = cash_options(&a.model);
    let analyses: Vec<_> = res
        .points
        .iter()
        .map(|p| p.result.as_ref().ok().map(|r| analyze(r, &inst, &cash)))
        .collect();
    write_sweep(&a.out, &inst, &res, &analyses)?;
    for v in &res.monotonicity_violations {
        log::warn!("reduction decreased at {} = {}", res.parameter.name(), v);
    }
    let solved = res.points.iter().filter(|p| p.result.is_ok()).count();
    println!(
        "{} points ({} solved), threshold {}",
        res.points.len(),
        solved,
        res.threshold.map_or("none".to_string(), io::format_number)
    );
    if solved == 0 {
        return Err(anyhow!("no sweep point solved").into());
    }
    Ok(())
}

fn cmd_report(a: &ReportArgs) -> Outcome {
    let check = io::verify_bundle(&a.bundle)?;
    let s = &check.summary;
    println!(
        "scenario {} {} reduction {}% offset solar {} t wind {} t ccs {} t traded {} t cumulative net {} yen",
        s.scenario.map_or("custom".to_string(), |n| n.to_string()),
        s.status,
        pct(check.reduction_pct),
        io::format_number(check.offset_t.solar.round()),
        io::format_number(check.offset_t.wind.round()),
        io::format_number(check.offset_t.ccs.round()),
        io::format_number(check.traded_t.round()),
        yen(check.cumulative_net_yen)
    );
    if !check.is_consistent() {
        for m in &check.mismatches {
            println!("mismatch: {m}");
        }
        return Err(anyhow!("{} inconsistent figure(s)", check.mismatches.len()).into());
    }
    println!("consistent");
    Ok(())
}
