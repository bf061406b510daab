mod common;

use ccsplan_core::lp::{
    check_solution, enumerate_oracle, feasibility_tolerance, solve, LinearProgram, SolverSettings,
    Status,
};
use common::{random_lp, rel_close};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn lp_strategy() -> impl Strategy<Value = LinearProgram> {
    any::<u64>().prop_map(|seed| random_lp(&mut ChaCha8Rng::seed_from_u64(seed)))
}

fn settings() -> SolverSettings {
    SolverSettings::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn simplex_agrees_with_enumeration(lp in lp_strategy()) {
        let ours = solve(&lp, &settings()).unwrap();
        let oracle = enumerate_oracle(&lp).unwrap();
        prop_assert_eq!(ours.status, oracle.status);
        if ours.status == Status::Optimal {
            prop_assert!(rel_close(ours.objective_value, oracle.objective_value, 1e-8),
                "{} vs {}", ours.objective_value, oracle.objective_value);
            let report = check_solution(&lp, &ours.x);
            prop_assert!(report.is_feasible(feasibility_tolerance(&lp)));
            prop_assert!(rel_close(lp.objective_at(&ours.x), ours.objective_value, 1e-9));
        }
    }

    #[test]
    fn row_and_cost_scaling_preserve_optimum(
        lp in lp_strategy(),
        row_exp in prop::collection::vec(-3i32..=3, 5),
        cost_scale in 0.01f64..100.0,
    ) {
        let base = solve(&lp, &settings()).unwrap();
        let mut scaled = lp.clone();
        for (row, e) in scaled.rows.iter_mut().zip(&row_exp) {
            let f = 10f64.powi(*e);
            row.coeffs.iter_mut().for_each(|c| c.1 *= f);
            row.rhs *= f;
        }
        scaled.objective.iter_mut().for_each(|c| c.1 *= cost_scale);
        let other = solve(&scaled, &settings()).unwrap();
        prop_assert_eq!(base.status, other.status);
        if base.status == Status::Optimal {
            prop_assert!(rel_close(base.objective_value * cost_scale, other.objective_value, 1e-8));
        }
    }

    #[test]
    fn dropping_a_row_never_worsens(lp in lp_strategy(), pick in any::<prop::sample::Index>()) {
        let base = solve(&lp, &settings()).unwrap();
        let mut relaxed = lp.clone();
        relaxed.rows.remove(pick.index(lp.rows.len()));
        let r = solve(&relaxed, &settings()).unwrap();
        if base.status == Status::Optimal {
            prop_assert!(matches!(r.status, Status::Optimal | Status::Unbounded));
            if r.status == Status::Optimal {
                prop_assert!(r.objective_value <= base.objective_value + 1e-9 * (1.0 + base.objective_value.abs()));
            }
        }
        if r.status == Status::Infeasible {
            prop_assert_eq!(base.status, Status::Infeasible);
        }
    }

    #[test]
    fn solving_is_deterministic(lp in lp_strategy()) {
        let a = format!("{:?}", solve(&lp, &settings()).unwrap());
        let b = format!("{:?}", solve(&lp, &settings()).unwrap());
        prop_assert_eq!(a, b);
    }

    #[test]
    fn unscaled_solver_agrees(lp in lp_strategy()) {
        let plain = SolverSettings { scaling: false, ..settings() };
        let a = solve(&lp, &settings()).unwrap();
        let b = solve(&lp, &plain).unwrap();
        prop_assert_eq!(a.status, b.status);
        if a.status == Status::Optimal {
            prop_assert!(rel_close(a.objective_value, b.objective_value, 1e-8));
        }
    }
}

#[test]
fn generator_covers_every_status() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut seen = [0usize; 3];
    for _ in 0..300 {
        match solve(&random_lp(&mut rng), &settings()).unwrap().status {
            Status::Optimal => seen[0] += 1,
            Status::Infeasible => seen[1] += 1,
            Status::Unbounded => seen[2] += 1,
            Status::IterationLimit => panic!("iteration limit on a tiny LP"),
        }
    }
    assert!(seen.iter().all(|&c| c >= 10), "{seen:?}");
}
