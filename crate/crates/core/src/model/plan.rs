use crate::domain::{ModelInstance, TechKind};
use crate::lp::LpSolution;

use super::{CcsLimitMode, ModelError, VarKey, VariableIndex};

/// Renewable values below this many GW are reported as exactly zero.
pub const RE_CLAMP_GW: f64 = 1e-9;
/// CCS values below this many tonnes are reported as exactly zero.
pub const CCS_CLAMP_T: f64 = 1e-6;

/// Solved decision variables in domain terms.
#[derive(Debug, Clone, PartialEq)]
pub struct DeploymentPlan {
    /// GW installed, `[region][tech][year]`.
    pub re_installed: Vec<[Vec<f64>; TechKind::COUNT]>,
    /// Tonnes stored locally, `[region][year]`; zero for regions without storage.
    pub ccs_local: Vec<Vec<f64>>,
    /// Tonnes traded, `[buyer][seller][year]`; zero outside buyer→seller pairs.
    pub ccs_traded: Vec<Vec<Vec<f64>>>,
    /// Number of values snapped to zero on extraction.
    pub clamp_events: usize,
}

impl DeploymentPlan {
    pub fn zero(regions: usize, years: usize) -> Self {
        Self {
            re_installed: (0..regions)
                .map(|_| std::array::from_fn(|_| vec![0.0; years]))
                .collect(),
            ccs_local: vec![vec![0.0; years]; regions],
            ccs_traded: vec![vec![vec![0.0; years]; regions]; regions],
            clamp_events: 0,
        }
    }

    pub fn num_regions(&self) -> usize {
        self.re_installed.len()
    }

    pub fn num_years(&self) -> usize {
        self.ccs_local.first().map_or(0, Vec::len)
    }

    pub fn re(&self, region: usize, tech: TechKind, year: usize) -> f64 {
        self.re_installed[region][tech.index()][year]
    }

    /// `CCS_i(t)`: own storage for sellers, bought storage for buyers.
    pub fn ccs_total(&self, region: usize, year: usize) -> f64 {
        self.ccs_local[region][year]
            + self.ccs_traded[region]
                .iter()
                .map(|per_seller| per_seller[year])
                .sum::<f64>()
    }

    /// Tonnes placed in `seller`'s storage during `year`.
    pub fn storage_use(&self, seller: usize, year: usize) -> f64 {
        self.ccs_local[seller][year]
            + self
                .ccs_traded
                .iter()
                .map(|per_seller| per_seller[seller][year])
                .sum::<f64>()
    }

    /// Tonnes offset by renewables of kind `tech` in `region` during `year`.
    pub fn re_offset(
        &self,
        instance: &ModelInstance,
        region: usize,
        tech: TechKind,
        year: usize,
    ) -> f64 {
        instance.region(region).tech(tech).offset_per_gw.at(year) * self.re(region, tech, year)
    }

    /// Tonnes offset in `region` during `year`: `Σ_k g·RE + CCS_i(t)`.
    pub fn offset(&self, instance: &ModelInstance, region: usize, year: usize) -> f64 {
        TechKind::ALL
            .into_iter()
            .map(|k| self.re_offset(instance, region, k, year))
            .sum::<f64>()
            + self.ccs_total(region, year)
    }

    pub fn total_re_gw(&self, tech: TechKind) -> f64 {
        self.re_installed
            .iter()
            .map(|r| r[tech.index()].iter().sum::<f64>())
            .sum()
    }

    pub fn total_ccs_local(&self) -> f64 {
        self.ccs_local.iter().flatten().sum()
    }

    pub fn total_traded(&self) -> f64 {
        self.ccs_traded.iter().flatten().flatten().sum()
    }

    /// Lists every violated plan invariant (non-negativity, potentials,
    /// storage limits), with absolute tolerance `tol`.
    pub fn violations(
        &self,
        instance: &ModelInstance,
        mode: CcsLimitMode,
        tol: f64,
    ) -> Vec<String> {
        let mut out = Vec::new();
        let years = instance.num_years();
        let negative = self
            .re_installed
            .iter()
            .flat_map(|r| r.iter().flatten())
            .chain(self.ccs_local.iter().flatten())
            .chain(self.ccs_traded.iter().flatten().flatten())
            .any(|&v| v < 0.0);
        if negative {
            out.push("negative plan entry".to_string());
        }
        for (i, r) in instance.regions().iter().enumerate() {
            for k in TechKind::ALL {
                let total: f64 = self.re_installed[i][k.index()].iter().sum();
                if total > r.tech(k).potential_gw + tol {
                    out.push(format!("{} {k}: {total} GW exceeds potential", r.id));
                }
            }
            let used: Vec<f64> = (0..years).map(|t| self.storage_use(i, t)).collect();
            let exceeded = match mode {
                CcsLimitMode::EqualYearly => {
                    let limit = r.ccs_capacity / years as f64;
                    used.iter().any(|&u| u > limit + tol)
                }
                CcsLimitMode::TotalOnly => used.iter().sum::<f64>() > r.ccs_capacity + tol,
            };
            if exceeded {
                out.push(format!("{}: storage limit exceeded", r.id));
            }
        }
        out
    }
}

fn clamp(v: f64, threshold: f64, events: &mut usize) -> f64 {
    if v < threshold {
        if v != 0.0 {
            *events += 1;
        }
        0.0
    } else {
        v
    }
}

/// Maps an optimal solution back onto the plan, snapping values below
/// [`RE_CLAMP_GW`] / [`CCS_CLAMP_T`] (including tiny negatives) to zero.
pub fn extract_plan(
    solution: &LpSolution,
    index: &VariableIndex,
) -> Result<DeploymentPlan, ModelError> {
    if !solution.is_optimal() {
        return Err(ModelError::NotOptimal(solution.status));
    }
    let mut plan = DeploymentPlan::zero(index.num_regions(), index.num_years());
    let mut events = 0;
    for (idx, &v) in solution.x.iter().enumerate().take(index.len()) {
        match index.key(idx) {
            VarKey::Re { region, tech, year } => {
                plan.re_installed[region][tech.index()][year] = clamp(v, RE_CLAMP_GW, &mut events);
            }
            VarKey::CcsLocal { region, year } => {
                plan.ccs_local[region][year] = clamp(v, CCS_CLAMP_T, &mut events);
            }
            VarKey::CcsTraded {
                buyer,
                seller,
                year,
            } => {
                plan.ccs_traded[buyer][seller][year] = clamp(v, CCS_CLAMP_T, &mut events);
            }
        }
    }
    if events > 0 {
        log::debug!("clamped {events} near-zero plan values");
    }
    plan.clamp_events = events;
    Ok(plan)
}
