use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analytics::Analysis;
use crate::domain::{ModelInstance, TechKind};
use crate::model::PriceOverrides;
use crate::scenario::{ScenarioError, ScenarioResult, SweepResult, SweepSummary};

use super::format::{format_number as num, round9};
use super::{io_err, WriteError};

pub const SUMMARY_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TechTotals {
    pub solar: f64,
    pub wind: f64,
    pub ccs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LpSize {
    pub vars: usize,
    pub rows: usize,
    pub iterations: usize,
}

/// Contents of `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub schema_version: u32,
    pub scenario: Option<u8>,
    pub objective_mode: String,
    pub ccs_limit_mode: String,
    pub resilience: bool,
    pub nonneg_emissions: bool,
    pub overrides: PriceOverrides,
    pub status: String,
    pub objective_yen: f64,
    pub reduction_pct: f64,
    pub baseline_t: f64,
    pub final_emissions_t: f64,
    pub offset_t: TechTotals,
    pub shares_pct: Option<TechTotals>,
    pub payback_year: Option<i32>,
    pub cumulative_net_yen: f64,
    pub any_trading: bool,
    pub traded_t: f64,
    pub lp: LpSize,
}

impl Summary {
    pub fn new(instance: &ModelInstance, result: &ScenarioResult, analysis: &Analysis) -> Self {
        let c = &result.config;
        let last = instance.num_years() - 1;
        let shares = &analysis.shares;
        let mode = serde_json::to_value(c.ccs_limit_mode)
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default();
        Summary {
            schema_version: SUMMARY_SCHEMA_VERSION,
            scenario: c.scenario,
            objective_mode: c.objective_mode.to_string(),
            ccs_limit_mode: mode,
            resilience: c.resilience_enabled,
            nonneg_emissions: c.nonneg_emissions,
            overrides: c.overrides,
            status: "optimal".into(),
            objective_yen: round9(result.objective_value),
            reduction_pct: round9(result.reduction_pct),
            baseline_t: round9(instance.baseline_total()),
            final_emissions_t: round9(result.national_emissions(last)),
            offset_t: TechTotals {
                solar: round9(shares.solar_t[last]),
                wind: round9(shares.wind_t[last]),
                ccs: round9(shares.ccs_t[last]),
            },
            shares_pct: shares.shares_pct.map(|[solar, wind, ccs]| TechTotals {
                solar: round9(solar),
                wind: round9(wind),
                ccs: round9(ccs),
            }),
            payback_year: analysis.payback_year,
            cumulative_net_yen: round9(analysis.cashflow.final_cumulative()),
            any_trading: analysis.trades.any_trading,
            traded_t: round9(analysis.trades.total_tonnes),
            lp: LpSize {
                vars: result.stats.num_vars,
                rows: result.stats.num_rows,
                iterations: result.stats.iterations,
            },
        }
    }
}

fn write(path: &Path, text: &str) -> Result<(), WriteError> {
    fs::write(path, text.as_bytes()).map_err(io_err(path))
}

fn json_text<T: Serialize>(value: &T) -> Result<String, WriteError> {
    let mut s =
        serde_json::to_string_pretty(value).map_err(|e| WriteError::Serialize(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Comma-joined line with LF ending, quoting fields where needed.
fn line(out: &mut String, fields: &[String]) {
    let quoted: Vec<String> = fields.iter().map(|f| csv_field(f)).collect();
    out.push_str(&quoted.join(","));
    out.push('\n');
}

fn plan_csv(instance: &ModelInstance, result: &ScenarioResult) -> String {
    let mut out = String::from("region,kind,year,amount,unit\n");
    let plan = &result.plan;
    for (i, r) in instance.regions().iter().enumerate() {
        for t in 0..instance.num_years() {
            let year = instance.horizon().year(t).to_string();
            for k in TechKind::ALL {
                let v = plan.re(i, k, t);
                if v != 0.0 {
                    line(
                        &mut out,
                        &[
                            r.id.clone(),
                            k.to_string(),
                            year.clone(),
                            num(v),
                            "GW".into(),
                        ],
                    );
                }
            }
            let ccs = plan.ccs_total(i, t);
            if ccs != 0.0 {
                line(
                    &mut out,
                    &[
                        r.id.clone(),
                        "CCS".into(),
                        year.clone(),
                        num(ccs),
                        "t".into(),
                    ],
                );
            }
        }
    }
    out
}

fn emissions_csv(instance: &ModelInstance, result: &ScenarioResult) -> String {
    let mut out = String::from("region,year,tonnes\n");
    let start = instance.horizon().start_year;
    for (i, r) in instance.regions().iter().enumerate() {
        line(
            &mut out,
            &[
                r.id.clone(),
                (start - 1).to_string(),
                num(r.baseline_emissions),
            ],
        );
        for (t, &c) in result.emissions[i].iter().enumerate() {
            line(
                &mut out,
                &[r.id.clone(), instance.horizon().year(t).to_string(), num(c)],
            );
        }
    }
    out
}

fn trades_csv(instance: &ModelInstance, analysis: &Analysis) -> String {
    let mut out = String::from("year,from,to,tonnes\n");
    for f in analysis.trades.flows(instance) {
        line(&mut out, &[f.year.to_string(), f.from, f.to, num(f.tonnes)]);
    }
    out
}

const CASH_HEADER: &str =
    "region,year,invest_re_solar,invest_re_wind,replacement_solar,replacement_wind,\
invest_ccs,transport_cost,storage_fee_paid,fit_revenue_solar,fit_revenue_wind,ets_revenue_solar,\
ets_revenue_wind,storage_fee_received,net,net_with_transfers\n";

fn cashflow_csv(instance: &ModelInstance, analysis: &Analysis) -> String {
    let mut out = String::from(CASH_HEADER);
    for (i, r) in instance.regions().iter().enumerate() {
        for (t, c) in analysis.cashflow.regions[i].iter().enumerate() {
            line(
                &mut out,
                &[
                    r.id.clone(),
                    instance.horizon().year(t).to_string(),
                    num(c.invest_re[0]),
                    num(c.invest_re[1]),
                    num(c.replacement_re[0]),
                    num(c.replacement_re[1]),
                    num(c.invest_ccs),
                    num(c.transport_cost),
                    num(c.storage_fee_paid),
                    num(c.fit_revenue[0]),
                    num(c.fit_revenue[1]),
                    num(c.ets_revenue[0]),
                    num(c.ets_revenue[1]),
                    num(c.storage_fee_received),
                    num(c.net()),
                    num(c.net_with_transfers()),
                ],
            );
        }
    }
    out
}

/// `year,<region ids...>` table of a per-region yearly quantity.
fn region_table(instance: &ModelInstance, value: impl Fn(usize, usize) -> f64) -> String {
    let mut out = String::from("year");
    for r in instance.regions() {
        out.push(',');
        out.push_str(&r.id);
    }
    out.push('\n');
    for t in 0..instance.num_years() {
        let mut fields = vec![instance.horizon().year(t).to_string()];
        fields.extend((0..instance.regions().len()).map(|i| num(value(i, t))));
        line(&mut out, &fields);
    }
    out
}

fn write_plotdata(
    dir: &Path,
    instance: &ModelInstance,
    result: &ScenarioResult,
    analysis: &Analysis,
) -> Result<(), WriteError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let plan = &result.plan;
    for k in TechKind::ALL {
        write(
            &dir.join(format!("deployment_{k}.csv")),
            &region_table(instance, |i, t| plan.re(i, k, t)),
        )?;
    }
    write(
        &dir.join("deployment_ccs.csv"),
        &region_table(instance, |i, t| plan.ccs_total(i, t)),
    )?;
    write(
        &dir.join("emissions.csv"),
        &region_table(instance, |i, t| result.emissions[i][t]),
    )?;

    let shares = &analysis.shares;
    let mut offsets = String::from("year,solar_t,wind_t,ccs_t\n");
    for t in 0..instance.num_years() {
        line(
            &mut offsets,
            &[
                instance.horizon().year(t).to_string(),
                num(shares.solar_t[t]),
                num(shares.wind_t[t]),
                num(shares.ccs_t[t]),
            ],
        );
    }
    write(&dir.join("offsets_by_tech.csv"), &offsets)?;

    let mut national = String::from(
        "year,solar_revenue,wind_revenue,solar_cost,wind_cost,ccs_cost,net,cumulative_net,storage_fee_received\n",
    );
    for (t, c) in analysis.cashflow.national.iter().enumerate() {
        let ccs = c.invest_ccs + c.transport_cost + c.storage_fee_paid;
        line(
            &mut national,
            &[
                instance.horizon().year(t).to_string(),
                num(c.fit_revenue[0] + c.ets_revenue[0]),
                num(c.fit_revenue[1] + c.ets_revenue[1]),
                num(c.invest_re[0] + c.replacement_re[0]),
                num(c.invest_re[1] + c.replacement_re[1]),
                num(ccs),
                num(c.net()),
                num(analysis.cashflow.cumulative_net[t]),
                num(c.storage_fee_received),
            ],
        );
    }
    write(&dir.join("national_cashflow.csv"), &national)
}

/// Writes a result bundle into `dir`, creating it if needed. Output is
/// byte-identical for identical inputs.
pub fn write_results(
    dir: &Path,
    instance: &ModelInstance,
    result: &ScenarioResult,
    analysis: &Analysis,
) -> Result<(), WriteError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    write(&dir.join("plan.csv"), &plan_csv(instance, result))?;
    write(&dir.join("emissions.csv"), &emissions_csv(instance, result))?;
    write(&dir.join("trades.csv"), &trades_csv(instance, analysis))?;
    write(&dir.join("cashflow.csv"), &cashflow_csv(instance, analysis))?;
    write(
        &dir.join("summary.json"),
        &json_text(&Summary::new(instance, result, analysis))?,
    )?;
    write_plotdata(&dir.join("plotdata"), instance, result, analysis)
}

/// One scenario of a run-all, solved and analyzed or failed.
pub type ScenarioRun = Result<(ScenarioResult, Analysis), ScenarioError>;

/// Writes `S<n>/` bundles for the solved scenarios plus `run-all.csv`.
pub fn write_run_all(
    dir: &Path,
    instance: &ModelInstance,
    runs: &[(u8, ScenarioRun)],
) -> Result<(), WriteError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut table = String::from("scenario,status,objective_yen,reduction_pct,payback_year\n");
    for (id, run) in runs {
        match run {
            Ok((result, analysis)) => {
                write_results(&dir.join(format!("S{id}")), instance, result, analysis)?;
                line(
                    &mut table,
                    &[
                        id.to_string(),
                        "optimal".into(),
                        num(result.objective_value),
                        num(result.reduction_pct),
                        analysis
                            .payback_year
                            .map(|y| y.to_string())
                            .unwrap_or_default(),
                    ],
                );
            }
            Err(e) => line(
                &mut table,
                &[
                    id.to_string(),
                    e.to_string(),
                    String::new(),
                    String::new(),
                    String::new(),
                ],
            ),
        }
    }
    write(&dir.join("run-all.csv"), &table)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Debug, Serialize)]
struct SweepPointJson {
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    summary: Option<SweepSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

#[derive(Debug, Serialize)]
struct SweepJson {
    parameter: String,
    scenario: Option<u8>,
    objective_mode: String,
    threshold: Option<f64>,
    monotonicity_violations: Vec<f64>,
    points: Vec<SweepPointJson>,
}

/// Writes `sweep.csv`, `sweep.json` and a `points/NN/` bundle per solved point.
pub fn write_sweep(
    dir: &Path,
    instance: &ModelInstance,
    sweep: &SweepResult,
    analyses: &[Option<Analysis>],
) -> Result<(), WriteError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let mut table = String::from("param_value,reduction_pct,objective,any_trading,status\n");
    let mut points = Vec::new();
    let width = sweep.points.len().to_string().len().max(2);
    for (n, (p, analysis)) in sweep.points.iter().zip(analyses).enumerate() {
        match (&p.result, analysis) {
            (Ok(result), Some(analysis)) => {
                let s = SweepSummary::of(result);
                line(
                    &mut table,
                    &[
                        num(p.value),
                        num(s.reduction_pct),
                        num(s.objective),
                        s.any_trading.to_string(),
                        "optimal".into(),
                    ],
                );
                write_results(
                    &dir.join("points").join(format!("{:0width$}", n + 1)),
                    instance,
                    result,
                    analysis,
                )?;
                points.push(SweepPointJson {
                    value: p.value,
                    summary: Some(SweepSummary {
                        reduction_pct: round9(s.reduction_pct),
                        objective: round9(s.objective),
                        solar_gw: round9(s.solar_gw),
                        wind_gw: round9(s.wind_gw),
                        ccs_local_t: round9(s.ccs_local_t),
                        ccs_traded_t: round9(s.ccs_traded_t),
                        any_trading: s.any_trading,
                    }),
                    error: None,
                });
            }
            (result, _) => {
                let message = match result {
                    Err(e) => e.to_string(),
                    Ok(_) => "missing analysis".to_string(),
                };
                line(
                    &mut table,
                    &[
                        num(p.value),
                        String::new(),
                        String::new(),
                        String::new(),
                        message.clone(),
                    ],
                );
                points.push(SweepPointJson {
                    value: p.value,
                    summary: None,
                    error: Some(message),
                });
            }
        }
    }
    write(&dir.join("sweep.csv"), &table)?;
    let doc = SweepJson {
        parameter: sweep.parameter.name().into(),
        scenario: sweep.config.scenario,
        objective_mode: sweep.config.objective_mode.to_string(),
        threshold: sweep.threshold,
        monotonicity_violations: sweep.monotonicity_violations.clone(),
        points,
    };
    write(&dir.join("sweep.json"), &json_text(&doc)?)
}

pub fn read_summary(dir: &Path) -> Result<Summary, WriteError> {
    let path = dir.join("summary.json");
    let text = fs::read_to_string(&path).map_err(io_err(&path))?;
    serde_json::from_str(&text)
        .map_err(|e| WriteError::Serialize(format!("{}: {e}", path.display())))
}

/// Figures of `summary.json` recomputed from the bundle's CSV files.
#[derive(Debug, Clone, PartialEq)]
pub struct BundleCheck {
    pub summary: Summary,
    pub reduction_pct: f64,
    pub cumulative_net_yen: f64,
    pub offset_t: TechTotals,
    pub traded_t: f64,
    /// Figures that disagree beyond 1e-6 relative.
    pub mismatches: Vec<String>,
}

impl BundleCheck {
    pub fn is_consistent(&self) -> bool {
        self.mismatches.is_empty()
    }
}

fn read_table(path: &Path) -> Result<(Vec<String>, Vec<Vec<String>>), WriteError> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| WriteError::Serialize(format!("{}: {e}", path.display())))?;
    let headers = reader
        .headers()
        .map_err(|e| WriteError::Serialize(e.to_string()))?
        .iter()
        .map(String::from)
        .collect();
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec.map_err(|e| WriteError::Serialize(format!("{}: {e}", path.display())))?;
        rows.push(rec.iter().map(String::from).collect());
    }
    Ok((headers, rows))
}

fn column(headers: &[String], name: &str) -> Result<usize, WriteError> {
    headers
        .iter()
        .position(|h| h == name)
        .ok_or_else(|| WriteError::Serialize(format!("missing column {name}")))
}

fn parse(s: &str) -> Result<f64, WriteError> {
    s.parse()
        .map_err(|_| WriteError::Serialize(format!("not a number: {s:?}")))
}

/// Recomputes reduction, cumulative net, offsets and traded tonnes from the
/// CSVs of a bundle and compares them with `summary.json`.
pub fn verify_bundle(dir: &Path) -> Result<BundleCheck, WriteError> {
    let summary = read_summary(dir)?;

    let (h, rows) = read_table(&dir.join("emissions.csv"))?;
    let (year_col, t_col) = (column(&h, "year")?, column(&h, "tonnes")?);
    let years: Vec<i32> = rows
        .iter()
        .filter_map(|r| r[year_col].parse().ok())
        .collect();
    let (first, last) = (
        years.iter().copied().min().unwrap_or(0),
        years.iter().copied().max().unwrap_or(0),
    );
    let mut baseline = 0.0;
    let mut final_total = 0.0;
    for r in &rows {
        let y: i32 = r[year_col].parse().unwrap_or(i32::MIN);
        let v = parse(&r[t_col])?;
        if y == first {
            baseline += v;
        }
        if y == last {
            final_total += v;
        }
    }
    let reduction_pct = if baseline > 0.0 {
        100.0 * (baseline - final_total) / baseline
    } else {
        0.0
    };

    let (h, rows) = read_table(&dir.join("cashflow.csv"))?;
    let net = column(&h, "net")?;
    let cumulative_net_yen = rows
        .iter()
        .map(|r| parse(&r[net]))
        .sum::<Result<f64, _>>()?;

    let (h, rows) = read_table(&dir.join("plotdata").join("offsets_by_tech.csv"))?;
    let last_row = rows.last().cloned().unwrap_or_default();
    let get = |name: &str| -> Result<f64, WriteError> {
        let c = column(&h, name)?;
        last_row.get(c).map_or(Ok(0.0), |s| parse(s))
    };
    let offset_t = TechTotals {
        solar: get("solar_t")?,
        wind: get("wind_t")?,
        ccs: get("ccs_t")?,
    };

    let (h, rows) = read_table(&dir.join("trades.csv"))?;
    let tonnes = column(&h, "tonnes")?;
    let traded_t = rows
        .iter()
        .map(|r| parse(&r[tonnes]))
        .sum::<Result<f64, _>>()?;

    let mut mismatches = Vec::new();
    let mut check = |name: &str, recomputed: f64, reported: f64| {
        let scale = recomputed.abs().max(reported.abs()).max(1.0);
        if (recomputed - reported).abs() > 1e-6 * scale {
            mismatches.push(format!("{name}: csv {recomputed} vs summary {reported}"));
        }
    };
    check("reduction_pct", reduction_pct, summary.reduction_pct);
    check(
        "cumulative_net_yen",
        cumulative_net_yen,
        summary.cumulative_net_yen,
    );
    check(
        "cumulative_net_yen vs objective",
        cumulative_net_yen,
        -summary.objective_yen,
    );
    check("offset_t.solar", offset_t.solar, summary.offset_t.solar);
    check("offset_t.wind", offset_t.wind, summary.offset_t.wind);
    check("offset_t.ccs", offset_t.ccs, summary.offset_t.ccs);
    check("final_emissions_t", final_total, summary.final_emissions_t);
    check("traded_t", traded_t, summary.traded_t);
    if summary.any_trading != (traded_t > 0.0) {
        mismatches.push("any_trading disagrees with trades.csv".into());
    }

    Ok(BundleCheck {
        summary,
        reduction_pct,
        cumulative_net_yen,
        offset_t,
        traded_t,
        mismatches,
    })
}
