use ccsplan_core::domain::{
    validate_instance, Horizon, ModelInstance, RawDistance, TechKind, ValidateOptions,
};
use ccsplan_core::fixtures;
use ccsplan_core::lp::{enumerate_oracle, solve, Sense, SolverSettings, Status};
use ccsplan_core::model::{
    assemble, extract_plan, CcsLimitMode, PriceOverrides, ScenarioConfig, VarKey, VariableIndex,
};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

/// Buyer "B" and seller "S", `years` long, 100 km apart.
fn pair(years: usize) -> ModelInstance {
    let mut raw = fixtures::forced_trade_raw();
    raw.horizon = Horizon::new(2018, years);
    for t in &mut raw.techs {
        t.unit_cost = vec![0.0; years];
        t.offset_per_gw = vec![0.0; years];
    }
    raw.globals.carbon_price = Some(vec![10_000.0; years]);
    raw.globals.ccs_unit_cost = Some(vec![10_000.0; years]);
    raw.globals.transport_cost = Some(vec![8.1739; years]);
    raw.globals.cap = Some(vec![None; years]);
    for s in raw.globals.tariff.values_mut() {
        *s = vec![0.0; years];
    }
    raw.distances = vec![RawDistance {
        from: "B".into(),
        to: "S".into(),
        km: 100.0,
    }];
    validate_instance(&raw, &ValidateOptions::default()).unwrap()
}

fn coefficient(lp: &ccsplan_core::lp::LinearProgram, j: usize) -> f64 {
    lp.objective_dense()[j]
}

#[test]
fn traded_ccs_cost_includes_transport_and_fee() {
    let inst = pair(1);
    let (lp, index) = assemble(&inst, &ScenarioConfig::scenario(1).unwrap()).unwrap();
    let j = index.ccs_traded(0, 1, 0).unwrap();
    assert!(close(coefficient(&lp, j), 20_817.39, 1e-6));
    let local = index.ccs_local(1, 0).unwrap();
    assert!(close(coefficient(&lp, local), 10_000.0, 1e-12));
}

#[test]
fn renewable_cost_nets_credit_and_tariff() {
    let inst = fixtures::unit_one();
    let (lp, index) = assemble(&inst, &ScenarioConfig::scenario(1).unwrap()).unwrap();
    let j = index.re(0, TechKind::Solar, 0);
    assert!(close(coefficient(&lp, j), -4.0, 1e-12));
}

#[test]
fn tariff_accrues_over_remaining_years() {
    let mut raw = fixtures::unit_one_raw(None);
    raw.horizon = Horizon::new(2018, 3);
    raw.regions[0].ccs_capacity = 30.0;
    for t in &mut raw.techs {
        t.unit_cost = vec![0.0; 3];
        t.offset_per_gw = vec![0.0; 3];
    }
    raw.techs[0].generation_per_gw = 1.0;
    raw.globals.carbon_price = Some(vec![0.0; 3]);
    raw.globals.ccs_unit_cost = Some(vec![0.0; 3]);
    raw.globals.transport_cost = Some(vec![0.0; 3]);
    raw.globals.cap = Some(vec![None; 3]);
    raw.globals
        .tariff
        .insert("solar".into(), vec![1.0, 1.0, 2.0]);
    raw.globals.tariff.insert("wind".into(), vec![0.0; 3]);
    let inst = validate_instance(&raw, &ValidateOptions::default()).unwrap();
    let (lp, index) = assemble(&inst, &ScenarioConfig::scenario(3).unwrap()).unwrap();
    let c: Vec<f64> = (0..3)
        .map(|t| coefficient(&lp, index.re(0, TechKind::Solar, t)))
        .collect();
    assert_eq!(c, vec![-4.0, -3.0, -2.0]);
}

#[test]
fn variable_count_for_one_buyer_one_seller() {
    let inst = pair(2);
    let index = VariableIndex::new(&inst);
    assert_eq!(index.len(), 12);
    for j in 0..index.len() {
        assert_eq!(index.index_of(index.key(j)), Some(j));
    }
    assert_eq!(
        index.key(index.ccs_traded(0, 1, 1).unwrap()),
        VarKey::CcsTraded {
            buyer: 0,
            seller: 1,
            year: 1
        }
    );
    assert_eq!(index.ccs_local(0, 0), None);
    assert_eq!(index.ccs_traded(1, 0, 0), None);
}

#[test]
fn equal_yearly_storage_splits_capacity() {
    let inst = fixtures::toy_nation();
    let (lp, _) = assemble(&inst, &ScenarioConfig::scenario(1).unwrap()).unwrap();
    let row = lp
        .rows
        .iter()
        .find(|r| r.name.as_deref() == Some("storage[R5][2030]"))
        .expect("yearly storage row");
    assert_eq!(row.sense, Sense::Le);
    assert!(close(row.rhs, 18e6 / 33.0, 1e-6));

    let mut raw = fixtures::unit_one_raw(None);
    raw.horizon = Horizon::new(2018, 33);
    raw.regions[0].ccs_capacity = 330.0;
    for t in &mut raw.techs {
        t.unit_cost = vec![0.0; 33];
        t.offset_per_gw = vec![0.0; 33];
    }
    for s in [
        &mut raw.globals.carbon_price,
        &mut raw.globals.ccs_unit_cost,
        &mut raw.globals.transport_cost,
    ] {
        *s = Some(vec![1.0; 33]);
    }
    raw.globals.cap = Some(vec![None; 33]);
    for s in raw.globals.tariff.values_mut() {
        *s = vec![0.0; 33];
    }
    let inst = validate_instance(&raw, &ValidateOptions::default()).unwrap();
    let (lp, _) = assemble(&inst, &ScenarioConfig::scenario(1).unwrap()).unwrap();
    let storage: Vec<_> = lp
        .rows
        .iter()
        .filter(|r| r.name.as_deref().is_some_and(|n| n.starts_with("storage")))
        .collect();
    assert_eq!(storage.len(), 33);
    assert!(storage.iter().all(|r| r.rhs == 10.0));
    let (lp, _) = assemble(&inst, &ScenarioConfig::scenario(3).unwrap()).unwrap();
    let total: Vec<_> = lp
        .rows
        .iter()
        .filter(|r| r.name.as_deref().is_some_and(|n| n.starts_with("storage")))
        .collect();
    assert_eq!(total.len(), 1);
    assert_eq!(total[0].rhs, 330.0);
}

#[test]
fn row_counts_per_scenario() {
    let inst = fixtures::toy_nation();
    let t = inst.num_years();
    let caps = inst.globals().cap.finite_years();
    let potentials = 20;
    let count = |id| {
        assemble(&inst, &ScenarioConfig::scenario(id).unwrap())
            .unwrap()
            .0
            .rows
            .len()
    };
    assert_eq!(count(1), caps + 3 * t + potentials);
    assert_eq!(count(2), caps + 3 * t + potentials + 2 * t);
    assert_eq!(count(3), caps + 3 + potentials);
    assert_eq!(count(4), caps + 3 + potentials + 2 * t);
    let nonneg = assemble(
        &inst,
        &ScenarioConfig::scenario(3)
            .unwrap()
            .with_nonneg_emissions(true),
    )
    .unwrap()
    .0;
    assert_eq!(nonneg.rows.len(), caps + 3 + potentials + 10 * t);
}

#[test]
fn resilience_rows_use_mix_ratio() {
    let inst = fixtures::toy_nation();
    let (lp, index) = assemble(&inst, &ScenarioConfig::scenario(2).unwrap()).unwrap();
    let row = lp
        .rows
        .iter()
        .find(|r| r.name.as_deref() == Some("resilience[solar][2018]"))
        .unwrap();
    let coeff = |j| row.coeffs.iter().find(|&&(v, _)| v == j).unwrap().1;
    assert!(close(coeff(index.re(0, TechKind::Solar, 0)), 0.69, 1e-12));
    assert!(close(coeff(index.re(0, TechKind::Wind, 0)), -0.31, 1e-12));
}

#[test]
fn unit_one_matches_hand_solution() {
    let inst = fixtures::unit_one();
    let (lp, index) = assemble(&inst, &ScenarioConfig::scenario(1).unwrap()).unwrap();
    assert_eq!(lp.num_vars, 3);
    assert_eq!(lp.rows.len(), 3);

    let sol = solve(&lp, &SolverSettings::default()).unwrap();
    assert_eq!(sol.status, Status::Optimal);
    assert!(close(sol.objective_value, -6.0, 1e-9));
    let oracle = enumerate_oracle(&lp).unwrap();
    assert!(close(oracle.objective_value, -6.0, 1e-9));

    let plan = extract_plan(&sol, &index).unwrap();
    assert!(close(plan.re(0, TechKind::Solar, 0), 4.0, 1e-9));
    assert_eq!(plan.re(0, TechKind::Wind, 0), 0.0);
    assert!(close(plan.ccs_local[0][0], 10.0, 1e-9));
    assert!(plan
        .violations(&inst, CcsLimitMode::EqualYearly, 1e-9)
        .is_empty());
}

#[test]
fn extraction_clamps_noise() {
    let inst = fixtures::unit_one();
    let (lp, index) = assemble(&inst, &ScenarioConfig::scenario(1).unwrap()).unwrap();
    let mut sol = solve(&lp, &SolverSettings::default()).unwrap();
    sol.x[index.re(0, TechKind::Wind, 0)] = 1e-12;
    sol.x[index.ccs_local(0, 0).unwrap()] = 5e-7;
    let plan = extract_plan(&sol, &index).unwrap();
    assert_eq!(plan.re(0, TechKind::Wind, 0), 0.0);
    assert_eq!(plan.ccs_local[0][0], 0.0);
    assert_eq!(plan.clamp_events, 2);

    sol.status = Status::Infeasible;
    assert!(extract_plan(&sol, &index).is_err());
}

#[test]
fn overrides_replace_price_series() {
    let inst = pair(1);
    let cfg = ScenarioConfig::scenario(1)
        .unwrap()
        .with_overrides(PriceOverrides {
            carbon_price: Some(0.0),
            ccs_unit_cost: Some(1.0),
            transport_cost: Some(0.5),
        });
    let (lp, index) = assemble(&inst, &cfg).unwrap();
    assert!(close(
        coefficient(&lp, index.ccs_traded(0, 1, 0).unwrap()),
        51.0,
        1e-12
    ));

    let bad = cfg.with_overrides(PriceOverrides {
        carbon_price: Some(-1.0),
        ..Default::default()
    });
    assert!(assemble(&inst, &bad).is_err());
}

#[test]
fn unknown_scenario_rejected() {
    assert!(ScenarioConfig::scenario(0).is_err());
    assert!(ScenarioConfig::scenario(5).is_err());
}

#[test]
fn variable_names_are_readable() {
    let inst = pair(1);
    let (lp, index) = assemble(&inst, &ScenarioConfig::scenario(1).unwrap()).unwrap();
    assert_eq!(
        lp.var_name(index.re(0, TechKind::Wind, 0)),
        "RE[B][wind][2018]"
    );
    assert_eq!(
        lp.var_name(index.ccs_local(1, 0).unwrap()),
        "CCS_s[S][2018]"
    );
    assert_eq!(
        lp.var_name(index.ccs_traded(0, 1, 0).unwrap()),
        "CCS_b[B][S][2018]"
    );
}
