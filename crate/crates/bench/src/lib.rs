//! Workload generators shared by the benchmarks.

use ccsplan_core::lp::{LinearProgram, Row, Sense};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Dense feasible, bounded LP: `max c·x` with `A x ≤ b`, `A, b, c > 0`,
/// written as a minimization.
pub fn packing_lp(seed: u64, num_vars: usize, num_rows: usize) -> LinearProgram {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let objective = (0..num_vars)
        .map(|j| (j, -rng.random_range(1.0..10.0)))
        .collect();
    let mut lp = LinearProgram::new(num_vars).with_objective(objective);
    for _ in 0..num_rows {
        let mut coeffs = Vec::new();
        for j in 0..num_vars {
            if rng.random_bool(0.6) {
                coeffs.push((j, rng.random_range(0.5..5.0)));
            }
        }
        lp.add_row(Row::new(coeffs, Sense::Le, rng.random_range(10.0..100.0)));
    }
    for j in 0..num_vars {
        lp.set_bounds(j, 0.0, rng.random_range(5.0..50.0));
    }
    lp
}
