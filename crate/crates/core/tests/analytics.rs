use ccsplan_core::analytics::{
    analyze, cashflow, contribution_shares, payback_year, payback_year_from, reduction_percentage,
    trade_matrix, CashflowOptions,
};
use ccsplan_core::domain::{validate_instance, Horizon, TechKind};
use ccsplan_core::fixtures;
use ccsplan_core::model::{DeploymentPlan, ObjectiveMode, ScenarioConfig};
use ccsplan_core::scenario::{run_all, run_scenario, ScenarioResult};
use proptest::prelude::*;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}

fn s1() -> ScenarioConfig {
    ScenarioConfig::scenario(1).unwrap()
}

#[test]
fn headline_percentage() {
    let pct = reduction_percentage(834.24e6, 1.25e9).unwrap();
    assert_eq!((pct * 100.0).round() / 100.0, 66.74);
    assert_eq!(reduction_percentage(0.0, 5.0).unwrap(), 0.0);
    assert_eq!(reduction_percentage(7.0, 7.0).unwrap(), 100.0);
    assert!(reduction_percentage(1.0, 0.0).is_err());
    assert!(reduction_percentage(1.0, -1.0).is_err());
}

#[test]
fn unit_one_shares_and_cash() {
    let inst = fixtures::unit_one();
    let r = run_scenario(&inst, &s1()).unwrap();
    let shares = contribution_shares(&r, &inst);
    let [solar, wind, ccs] = shares.shares_pct.unwrap();
    assert!(close(solar, 80.0, 1e-9));
    assert_eq!(wind, 0.0);
    assert!(close(ccs, 20.0, 1e-9));
    assert!(close(shares.solar_t[0], 40.0, 1e-9));

    let cash = cashflow(&r, &inst, &CashflowOptions::default());
    let y = &cash.national[0];
    assert!(close(y.cost(), 42.0, 1e-9));
    assert!(close(y.revenue(), 48.0, 1e-9));
    assert!(close(cash.final_cumulative(), 6.0, 1e-9));
    assert!(close(cash.final_cumulative(), -r.objective_value, 1e-9));
    assert_eq!(payback_year(&cash), Some(2018));

    let trades = trade_matrix(&r, &inst);
    assert!(trades.buyers.is_empty());
    assert!(!trades.any_trading);
    assert_eq!(trades.total_tonnes, 0.0);
}

#[test]
fn payback_first_sign_change() {
    assert_eq!(payback_year_from(&[-5.0, -1.0, 2.0, 4.0], 2018), Some(2020));
    assert_eq!(payback_year_from(&[-5.0, -1.0], 2018), None);
    assert_eq!(payback_year_from(&[0.0], 2030), Some(2030));
}

fn zero_result(inst: &ccsplan_core::domain::ModelInstance) -> ScenarioResult {
    let plan = DeploymentPlan::zero(inst.regions().len(), inst.num_years());
    let mut r = run_scenario(inst, &s1()).unwrap();
    r.emissions = ccsplan_core::scenario::emission_paths(inst, &plan);
    r.plan = plan;
    r.objective_value = 0.0;
    r
}

#[test]
fn zero_plan_is_all_zero() {
    let inst = fixtures::unit_one_uncapped();
    let r = zero_result(&inst);
    let shares = contribution_shares(&r, &inst);
    assert_eq!(shares.shares_pct, None);
    assert_eq!(shares.total_at(0), 0.0);
    let cash = cashflow(&r, &inst, &CashflowOptions::default());
    assert!(cash
        .national
        .iter()
        .all(|c| c.net() == 0.0 && c.cost() == 0.0));
}

#[test]
fn wind_only_plan() {
    let inst = fixtures::toy_nation();
    let mut r = zero_result(&inst);
    r.plan.re_installed[0][TechKind::Wind.index()][3] = 1.5;
    let shares = contribution_shares(&r, &inst);
    assert_eq!(shares.shares_pct, Some([0.0, 100.0, 0.0]));
}

#[test]
fn tariff_revenue_follows_installed_stock() {
    let mut raw = fixtures::unit_one_raw(None);
    raw.horizon = Horizon::new(2018, 2);
    for t in &mut raw.techs {
        t.unit_cost = vec![t.unit_cost[0], 100.0];
        t.offset_per_gw = vec![t.offset_per_gw[0]; 2];
    }
    for s in [
        &mut raw.globals.carbon_price,
        &mut raw.globals.ccs_unit_cost,
        &mut raw.globals.transport_cost,
    ] {
        let v = s.as_ref().unwrap()[0];
        *s = Some(vec![v; 2]);
    }
    raw.globals.cap = Some(vec![None; 2]);
    for v in raw.globals.tariff.values_mut() {
        *v = vec![v[0]; 2];
    }
    let inst = validate_instance(&raw, &Default::default()).unwrap();
    let r = run_scenario(&inst, &s1()).unwrap();
    assert!(close(r.plan.re(0, TechKind::Solar, 0), 4.0, 1e-9));
    assert_eq!(r.plan.re(0, TechKind::Solar, 1), 0.0);
    let cash = cashflow(&r, &inst, &CashflowOptions::default());
    let fit = |t: usize| cash.regions[0][t].fit_revenue[0];
    assert!(close(fit(0), 8.0, 1e-9));
    assert_eq!(fit(0), fit(1));
    assert!(close(cash.final_cumulative(), -r.objective_value, 1e-9));
}

#[test]
fn replacement_adds_capex_twenty_years_on() {
    let inst = fixtures::toy_nation();
    let r = run_scenario(&inst, &s1()).unwrap();
    let plain = cashflow(&r, &inst, &CashflowOptions::default());
    let with = cashflow(
        &r,
        &inst,
        &CashflowOptions {
            replacement: true,
            ..Default::default()
        },
    );
    let expected: f64 = (0..inst.regions().len())
        .flat_map(|i| TechKind::ALL.map(|k| (i, k)))
        .map(|(i, k)| inst.region(i).tech(k).unit_cost.at(20) * r.plan.re(i, k, 0))
        .sum();
    let extra: f64 = with.national[20].replacement_re.iter().sum();
    assert!(expected > 0.0);
    assert!(rel_close(extra, expected, 1e-12));
    assert!(plain.national.iter().all(|c| c.replacement_re == [0.0; 2]));
    assert!(with.final_cumulative() < plain.final_cumulative());
}

#[test]
fn forced_trade_transfers_conserve() {
    let inst = fixtures::forced_trade();
    let r = run_scenario(&inst, &s1().with_nonneg_emissions(true)).unwrap();
    let a = analyze(&r, &inst, &CashflowOptions::default());
    assert!(a.trades.any_trading);
    assert!(close(a.trades.total_tonnes, 40.0, 1e-9));
    let flows = a.trades.flows(&inst);
    assert_eq!(flows.len(), 1);
    assert_eq!((flows[0].from.as_str(), flows[0].to.as_str()), ("B", "S"));
    for c in &a.cashflow.national {
        assert_eq!(c.storage_fee_paid, c.storage_fee_received);
    }
    assert!(close(a.cashflow.regions[0][0].storage_fee_paid, 40.0, 1e-9));
    assert!(rel_close(
        a.cashflow.final_cumulative(),
        -r.objective_value,
        1e-9
    ));
    assert_eq!(a.shares.shares_pct, Some([0.0, 0.0, 100.0]));
}

#[test]
fn cash_matches_objective_on_toy_runs() {
    let inst = fixtures::toy_nation();
    for mode in [ObjectiveMode::CostOnly, ObjectiveMode::MaxReductionLex] {
        for (id, r) in run_all(&inst, mode) {
            let r = r.unwrap();
            let a = analyze(&r, &inst, &CashflowOptions::default());
            assert!(
                rel_close(a.cashflow.final_cumulative(), -r.objective_value, 1e-6),
                "S{id} {mode}"
            );
            let total = r.total_offset(&inst);
            let last = inst.num_years() - 1;
            assert!(rel_close(a.shares.total_at(last), total, 1e-12));
            let pct: f64 = a.shares.shares_pct.unwrap().iter().sum();
            assert!(close(pct, 100.0, 1e-9));
            assert!(!a.trades.any_trading);
        }
    }
}

proptest! {
    #[test]
    fn extra_revenue_never_delays_payback(
        nets in prop::collection::vec(-10.0f64..10.0, 1..40),
        bonus in 0.0f64..5.0,
    ) {
        let cumulative = |xs: &[f64]| -> Vec<f64> {
            xs.iter().scan(0.0, |s, v| { *s += v; Some(*s) }).collect()
        };
        let base = payback_year_from(&cumulative(&nets), 2018);
        let raised: Vec<f64> = nets.iter().map(|v| v + bonus).collect();
        let better = payback_year_from(&cumulative(&raised), 2018);
        if let Some(b) = base {
            prop_assert!(better.is_some_and(|y| y <= b));
        }
    }
}
