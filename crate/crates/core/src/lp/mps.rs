use std::fmt::Write;

use super::{LinearProgram, Sense};

fn mps_name(name: &str) -> String {
    // free MPS fields are whitespace separated
    name.chars()
        .map(|c| if c.is_whitespace() { '_' } else { c })
        .collect()
}

/// Renders `lp` in free-format MPS (NAME, ROWS, COLUMNS, RHS, BOUNDS, ENDATA).
/// The objective row is named `COST`.
pub fn write_mps(lp: &LinearProgram, name: &str) -> String {
    let mut out = String::new();
    let row_names: Vec<String> = (0..lp.rows.len())
        .map(|i| mps_name(&lp.row_name(i)))
        .collect();
    let col_names: Vec<String> = (0..lp.num_vars)
        .map(|j| mps_name(&lp.var_name(j)))
        .collect();

    let _ = writeln!(out, "NAME {}", mps_name(name));
    out.push_str("ROWS\n N COST\n");
    for (row, rname) in lp.rows.iter().zip(&row_names) {
        let tag = match row.sense {
            Sense::Le => 'L',
            Sense::Ge => 'G',
            Sense::Eq => 'E',
        };
        let _ = writeln!(out, " {tag} {rname}");
    }

    let mut columns: Vec<Vec<(usize, f64)>> = vec![Vec::new(); lp.num_vars];
    for (i, row) in lp.rows.iter().enumerate() {
        for &(j, a) in &row.coeffs {
            columns[j].push((i, a));
        }
    }
    let cost = lp.objective_dense();
    out.push_str("COLUMNS\n");
    for (j, col) in columns.iter().enumerate() {
        if cost[j] != 0.0 {
            let _ = writeln!(out, " {} COST {}", col_names[j], cost[j]);
        }
        for &(i, a) in col {
            let _ = writeln!(out, " {} {} {}", col_names[j], row_names[i], a);
        }
    }

    out.push_str("RHS\n");
    for (row, rname) in lp.rows.iter().zip(&row_names) {
        if row.rhs != 0.0 {
            let _ = writeln!(out, " RHS {} {}", rname, row.rhs);
        }
    }

    out.push_str("BOUNDS\n");
    for (j, b) in lp.bounds.iter().enumerate() {
        let col = &col_names[j];
        if b.lower == b.upper {
            let _ = writeln!(out, " FX BND {col} {}", b.lower);
            continue;
        }
        if b.lower != 0.0 {
            let _ = writeln!(out, " LO BND {col} {}", b.lower);
        }
        if b.upper.is_finite() {
            let _ = writeln!(out, " UP BND {col} {}", b.upper);
        }
    }
    out.push_str("ENDATA\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp::Row;

    #[test]
    fn sections_and_entries() {
        let mut lp = LinearProgram::new(2).with_objective(vec![(0, -1.0)]);
        lp.var_names = vec!["RE[R][solar][2018]".into(), "CCS s".into()];
        lp.add_row(Row::new(vec![(0, 10.0), (1, 1.0)], Sense::Ge, 50.0).named("cap[2018]"));
        lp.set_bounds(0, 0.0, 4.0);
        lp.set_bounds(1, 1.0, 1.0);
        let text = write_mps(&lp, "unit one");
        let expected = "NAME unit_one\nROWS\n N COST\n G cap[2018]\nCOLUMNS\n RE[R][solar][2018] COST -1\n RE[R][solar][2018] cap[2018] 10\n CCS_s cap[2018] 1\nRHS\n RHS cap[2018] 50\nBOUNDS\n UP BND RE[R][solar][2018] 4\n FX BND CCS_s 1\nENDATA\n";
        assert_eq!(text, expected);
    }
}
