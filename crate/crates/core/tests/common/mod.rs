use ccsplan_core::lp::{LinearProgram, Row, Sense};
use rand::Rng;

/// Small integer LP within the enumeration oracle's reach. The mix of row
/// senses, free upper bounds and positive lower bounds yields optimal,
/// infeasible and unbounded instances.
pub fn random_lp(rng: &mut impl Rng) -> LinearProgram {
    let n = rng.random_range(2..=5);
    let m = rng.random_range(1..=5);
    let objective = (0..n)
        .filter_map(|j| {
            let c = rng.random_range(-5..=5);
            (c != 0).then_some((j, c as f64))
        })
        .collect();
    let mut lp = LinearProgram::new(n).with_objective(objective);
    for _ in 0..m {
        let coeffs = (0..n)
            .filter_map(|j| {
                let a = rng.random_range(-4..=6);
                (a != 0).then_some((j, a as f64))
            })
            .collect();
        let sense = match rng.random_range(0..10) {
            0..=5 => Sense::Le,
            6..=8 => Sense::Ge,
            _ => Sense::Eq,
        };
        lp.add_row(Row::new(coeffs, sense, rng.random_range(-4..=12) as f64));
    }
    for j in 0..n {
        let lower = if rng.random_bool(0.2) {
            rng.random_range(1..=2) as f64
        } else {
            0.0
        };
        let upper = if rng.random_bool(0.4) {
            lower + rng.random_range(0..=6) as f64
        } else {
            f64::INFINITY
        };
        lp.set_bounds(j, lower, upper);
    }
    lp
}

#[allow(dead_code)]
pub fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(1.0)
}
