use crate::domain::{ModelInstance, TechKind};
use crate::lp::{LinearProgram, Row, Sense, SparseVec};

use super::{CcsLimitMode, ModelError, ScenarioConfig, VarKey, VariableIndex};

/// Per-variable net cost over the whole horizon.
///
/// * RE(i,k,t): `rp(t) − cp(t)·g(t) − h·Σ_{τ≥t} sp_k(τ)`; capacity installed in
///   year `t` earns the tariff in every remaining year.
/// * local CCS(i,t): `ccsp(t)`.
/// * traded CCS(j,i,t): `ccsp(t) + gt(t)·d_ji + cp(t)`, the storage fee paid
///   by the buyer counted as cost only.
pub fn build_objective(
    instance: &ModelInstance,
    config: &ScenarioConfig,
    index: &VariableIndex,
) -> Result<SparseVec, ModelError> {
    let g = config.effective_globals(instance);
    let mut out = Vec::with_capacity(index.len());
    for idx in 0..index.len() {
        let c = match index.key(idx) {
            VarKey::Re { region, tech, year } => {
                let rt = instance.region(region).tech(tech);
                let fit = rt.generation_per_gw * g.tariff(tech).tail_sum(year);
                rt.unit_cost.at(year) - g.carbon_price.at(year) * rt.offset_per_gw.at(year) - fit
            }
            VarKey::CcsLocal { year, .. } => g.ccs_unit_cost.at(year),
            VarKey::CcsTraded {
                buyer,
                seller,
                year,
            } => {
                let d = instance.distance(buyer, seller)?;
                g.ccs_unit_cost.at(year) + g.transport_cost.at(year) * d + g.carbon_price.at(year)
            }
        };
        if c != 0.0 {
            out.push((idx, c));
        }
    }
    Ok(out)
}

/// Tonnes offset in `region` during `year`: `Σ_k g·RE + CCS_i(t)`.
fn region_offset_terms(
    instance: &ModelInstance,
    index: &VariableIndex,
    region: usize,
    year: usize,
    out: &mut SparseVec,
) {
    let r = instance.region(region);
    for k in TechKind::ALL {
        let g = r.tech(k).offset_per_gw.at(year);
        if g != 0.0 {
            out.push((index.re(region, k, year), g));
        }
    }
    out.extend(
        index
            .ccs_of_region(region, year)
            .into_iter()
            .map(|v| (v, 1.0)),
    );
}

/// National tonnes offset during `year`, as coefficients on the variables.
pub fn offset_terms(instance: &ModelInstance, index: &VariableIndex, year: usize) -> SparseVec {
    let mut out = Vec::new();
    for i in 0..instance.regions().len() {
        region_offset_terms(instance, index, i, year, &mut out);
    }
    out
}

/// Objective whose minimum is the largest total offset (so the smallest
/// final national emissions).
pub fn reduction_objective(instance: &ModelInstance, index: &VariableIndex) -> SparseVec {
    (0..instance.num_years())
        .flat_map(|t| offset_terms(instance, index, t))
        .map(|(j, v)| (j, -v))
        .collect()
}

/// `Σ_t offset(t) ≥ min_total`.
pub fn total_offset_row(instance: &ModelInstance, index: &VariableIndex, min_total: f64) -> Row {
    let coeffs = (0..instance.num_years())
        .flat_map(|t| offset_terms(instance, index, t))
        .collect();
    Row::new(coeffs, Sense::Ge, min_total).named("lex_reduction")
}

/// Constraint rows: yearly caps, storage limits, renewable potentials,
/// the mix-ratio rows when resilience is on, and optional non-negative
/// regional emissions.
pub fn build_constraints(
    instance: &ModelInstance,
    config: &ScenarioConfig,
    index: &VariableIndex,
) -> Vec<Row> {
    let horizon = instance.horizon();
    let years = instance.num_years();
    let n = instance.regions().len();
    let mut rows = Vec::new();

    // cap: C0 − Σ_{τ≤t} offset(τ) ≤ cap(t)
    let baseline = instance.baseline_total();
    let mut cumulative: SparseVec = Vec::new();
    for t in 0..years {
        cumulative.extend(offset_terms(instance, index, t));
        if let Some(cap) = instance.globals().cap.at(t) {
            rows.push(
                Row::new(cumulative.clone(), Sense::Ge, baseline - cap)
                    .named(format!("cap[{}]", horizon.year(t))),
            );
        }
    }

    // storage capacity
    for &i in index.sellers() {
        let r = instance.region(i);
        match config.ccs_limit_mode {
            CcsLimitMode::EqualYearly => {
                let per_year = r.ccs_capacity / years as f64;
                for t in 0..years {
                    let coeffs = index
                        .storage_use(i, t)
                        .into_iter()
                        .map(|v| (v, 1.0))
                        .collect();
                    rows.push(Row::new(coeffs, Sense::Le, per_year).named(format!(
                        "storage[{}][{}]",
                        r.id,
                        horizon.year(t)
                    )));
                }
            }
            CcsLimitMode::TotalOnly => {
                let coeffs = (0..years)
                    .flat_map(|t| index.storage_use(i, t))
                    .map(|v| (v, 1.0))
                    .collect();
                rows.push(
                    Row::new(coeffs, Sense::Le, r.ccs_capacity).named(format!("storage[{}]", r.id)),
                );
            }
        }
    }

    // cumulative renewable potential; zero potentials become variable bounds
    for (i, r) in instance.regions().iter().enumerate() {
        for k in TechKind::ALL {
            let p = r.tech(k).potential_gw;
            if p > 0.0 {
                let coeffs = (0..years).map(|t| (index.re(i, k, t), 1.0)).collect();
                rows.push(
                    Row::new(coeffs, Sense::Le, p).named(format!("potential[{}][{}]", r.id, k)),
                );
            }
        }
    }

    // mix ratio: Σ_i RE_k − α_k·Σ_k' Σ_i RE_k' ≤ 0
    if config.resilience_enabled {
        let alpha = instance.globals().mix_ratio;
        for t in 0..years {
            for k in TechKind::ALL {
                let a = alpha[k.index()];
                let mut coeffs = Vec::with_capacity(n * TechKind::COUNT);
                for i in 0..n {
                    for k2 in TechKind::ALL {
                        let c = if k2 == k { 1.0 - a } else { -a };
                        if c != 0.0 {
                            coeffs.push((index.re(i, k2, t), c));
                        }
                    }
                }
                rows.push(Row::new(coeffs, Sense::Le, 0.0).named(format!(
                    "resilience[{}][{}]",
                    k,
                    horizon.year(t)
                )));
            }
        }
    }

    // C_i(t) ≥ 0  ⇔  Σ_{τ≤t} offset_i(τ) ≤ C_i(0)
    if config.nonneg_emissions {
        for (i, r) in instance.regions().iter().enumerate() {
            let mut cumulative = Vec::new();
            for t in 0..years {
                region_offset_terms(instance, index, i, t, &mut cumulative);
                rows.push(
                    Row::new(cumulative.clone(), Sense::Le, r.baseline_emissions).named(format!(
                        "nonneg_emissions[{}][{}]",
                        r.id,
                        horizon.year(t)
                    )),
                );
            }
        }
    }
    rows
}

/// Builds the full program for `config` with the net-cost objective.
pub fn assemble(
    instance: &ModelInstance,
    config: &ScenarioConfig,
) -> Result<(LinearProgram, VariableIndex), ModelError> {
    if config.resilience_enabled {
        instance.check_mix_ratio()?;
    }
    let o = &config.overrides;
    for (name, v) in [
        ("carbon_price", o.carbon_price),
        ("ccs_unit_cost", o.ccs_unit_cost),
        ("transport_cost", o.transport_cost),
    ] {
        if let Some(v) = v {
            if !v.is_finite() || v < 0.0 {
                return Err(ModelError::InvalidOverride(format!("{name} = {v}")));
            }
        }
    }

    let index = VariableIndex::new(instance);
    let mut lp =
        LinearProgram::new(index.len()).with_objective(build_objective(instance, config, &index)?);
    for row in build_constraints(instance, config, &index) {
        lp.add_row(row);
    }
    for (i, r) in instance.regions().iter().enumerate() {
        for k in TechKind::ALL {
            if r.tech(k).potential_gw <= 0.0 {
                for t in 0..instance.num_years() {
                    lp.set_bounds(index.re(i, k, t), 0.0, 0.0);
                }
            }
        }
    }
    lp.var_names = (0..index.len()).map(|j| index.name(j, instance)).collect();
    Ok((lp, index))
}
