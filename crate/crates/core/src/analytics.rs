//! Post-processing of solved scenarios: offset shares by technology, cash
//! flows, payback years and CCS trade flows.

use serde::Serialize;
use thiserror::Error;

use crate::domain::{ModelInstance, TechKind};
use crate::scenario::ScenarioResult;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyticsError {
    #[error("baseline must be positive, got {0}")]
    NonPositiveBaseline(f64),
}

/// `100·offset / baseline`.
pub fn reduction_percentage(total_offset: f64, baseline: f64) -> Result<f64, AnalyticsError> {
    if !(baseline > 0.0) {
        return Err(AnalyticsError::NonPositiveBaseline(baseline));
    }
    Ok(100.0 * total_offset / baseline)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContributionShares {
    /// Cumulative tonnes offset up to and including each year.
    pub solar_t: Vec<f64>,
    pub wind_t: Vec<f64>,
    pub ccs_t: Vec<f64>,
    /// Solar, wind and CCS shares of the final total; `None` if nothing was offset.
    pub shares_pct: Option<[f64; 3]>,
}

impl ContributionShares {
    pub fn total_at(&self, year: usize) -> f64 {
        self.solar_t[year] + self.wind_t[year] + self.ccs_t[year]
    }
}

pub fn contribution_shares(
    result: &ScenarioResult,
    instance: &ModelInstance,
) -> ContributionShares {
    let plan = &result.plan;
    let n = instance.regions().len();
    let mut acc = [0.0; 3];
    let mut series: [Vec<f64>; 3] = Default::default();
    for t in 0..instance.num_years() {
        for i in 0..n {
            acc[0] += plan.re_offset(instance, i, TechKind::Solar, t);
            acc[1] += plan.re_offset(instance, i, TechKind::Wind, t);
            acc[2] += plan.ccs_total(i, t);
        }
        for (s, a) in series.iter_mut().zip(acc) {
            s.push(a);
        }
    }
    let total: f64 = acc.iter().sum();
    let shares_pct = (total > 0.0).then(|| acc.map(|a| 100.0 * a / total));
    let [solar_t, wind_t, ccs_t] = series;
    ContributionShares {
        solar_t,
        wind_t,
        ccs_t,
        shares_pct,
    }
}

/// Cash items of one region in one year, in yen.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct RegionCash {
    pub invest_re: [f64; TechKind::COUNT],
    pub fit_revenue: [f64; TechKind::COUNT],
    pub ets_revenue: [f64; TechKind::COUNT],
    /// Capture cost of the region's own CCS, local or traded.
    pub invest_ccs: f64,
    pub transport_cost: f64,
    pub storage_fee_paid: f64,
    pub storage_fee_received: f64,
    /// Equipment replacement, when enabled.
    pub replacement_re: [f64; TechKind::COUNT],
}

impl RegionCash {
    pub fn revenue(&self) -> f64 {
        self.fit_revenue.iter().sum::<f64>() + self.ets_revenue.iter().sum::<f64>()
    }

    pub fn cost(&self) -> f64 {
        self.invest_re.iter().sum::<f64>()
            + self.replacement_re.iter().sum::<f64>()
            + self.invest_ccs
            + self.transport_cost
            + self.storage_fee_paid
    }

    /// Net cash without storage fees received from buyers.
    pub fn net(&self) -> f64 {
        self.revenue() - self.cost()
    }

    pub fn net_with_transfers(&self) -> f64 {
        self.net() + self.storage_fee_received
    }

    fn add(&mut self, o: &RegionCash) {
        for k in 0..TechKind::COUNT {
            self.invest_re[k] += o.invest_re[k];
            self.fit_revenue[k] += o.fit_revenue[k];
            self.ets_revenue[k] += o.ets_revenue[k];
            self.replacement_re[k] += o.replacement_re[k];
        }
        self.invest_ccs += o.invest_ccs;
        self.transport_cost += o.transport_cost;
        self.storage_fee_paid += o.storage_fee_paid;
        self.storage_fee_received += o.storage_fee_received;
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CashflowOptions {
    /// Re-buy renewable capacity after `replacement_years`.
    pub replacement: bool,
    pub replacement_years: usize,
}

impl Default for CashflowOptions {
    fn default() -> Self {
        Self {
            replacement: false,
            replacement_years: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CashflowSeries {
    pub start_year: i32,
    /// `[region][year]`.
    pub regions: Vec<Vec<RegionCash>>,
    /// National totals per year.
    pub national: Vec<RegionCash>,
    /// Running sum of national net cash, excluding transfers.
    pub cumulative_net: Vec<f64>,
}

impl CashflowSeries {
    pub fn final_cumulative(&self) -> f64 {
        self.cumulative_net.last().copied().unwrap_or(0.0)
    }
}

pub fn cashflow(
    result: &ScenarioResult,
    instance: &ModelInstance,
    options: &CashflowOptions,
) -> CashflowSeries {
    let plan = &result.plan;
    let g = result.config.effective_globals(instance);
    let years = instance.num_years();
    let n = instance.regions().len();
    let mut regions = vec![vec![RegionCash::default(); years]; n];

    for (i, region) in instance.regions().iter().enumerate() {
        for k in TechKind::ALL {
            let rt = region.tech(k);
            let mut installed = 0.0;
            for t in 0..years {
                let re = plan.re(i, k, t);
                installed += re;
                let cell = &mut regions[i][t];
                cell.invest_re[k.index()] = rt.unit_cost.at(t) * re;
                cell.ets_revenue[k.index()] = g.carbon_price.at(t) * rt.offset_per_gw.at(t) * re;
                cell.fit_revenue[k.index()] = g.tariff(k).at(t) * rt.generation_per_gw * installed;
                let later = t + options.replacement_years;
                if options.replacement && later < years {
                    regions[i][later].replacement_re[k.index()] += rt.unit_cost.at(later) * re;
                }
            }
        }
        for t in 0..years {
            regions[i][t].invest_ccs = g.ccs_unit_cost.at(t) * plan.ccs_total(i, t);
        }
    }
    for &j in instance.buyer_regions() {
        for &i in instance.storage_regions() {
            // validated instances always resolve buyer→seller distances
            let d = instance.distance(j, i).unwrap_or(0.0);
            for t in 0..years {
                let q = plan.ccs_traded[j][i][t];
                if q == 0.0 {
                    continue;
                }
                let fee = g.carbon_price.at(t) * q;
                regions[j][t].transport_cost += g.transport_cost.at(t) * d * q;
                regions[j][t].storage_fee_paid += fee;
                regions[i][t].storage_fee_received += fee;
            }
        }
    }

    let mut national = vec![RegionCash::default(); years];
    for row in &regions {
        for (acc, cell) in national.iter_mut().zip(row) {
            acc.add(cell);
        }
    }
    let cumulative_net = national
        .iter()
        .scan(0.0, |sum, c| {
            *sum += c.net();
            Some(*sum)
        })
        .collect();
    CashflowSeries {
        start_year: instance.horizon().start_year,
        regions,
        national,
        cumulative_net,
    }
}

/// First calendar year whose cumulative value is non-negative.
pub fn payback_year_from(cumulative: &[f64], start_year: i32) -> Option<i32> {
    cumulative
        .iter()
        .position(|&v| v >= 0.0)
        .map(|t| start_year + t as i32)
}

/// First year with non-negative national cumulative net; `None` if the
/// horizon ends first.
pub fn payback_year(series: &CashflowSeries) -> Option<i32> {
    payback_year_from(&series.cumulative_net, series.start_year)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TradeFlow {
    pub year: i32,
    pub from: String,
    pub to: String,
    pub tonnes: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TradeMatrix {
    /// Buyer region indices, in instance order.
    pub buyers: Vec<usize>,
    pub sellers: Vec<usize>,
    /// `[year][buyer][seller]` tonnes, positions as in `buyers` / `sellers`.
    pub tonnes: Vec<Vec<Vec<f64>>>,
    pub any_trading: bool,
    pub total_tonnes: f64,
}

impl TradeMatrix {
    /// Non-zero entries in (year, buyer, seller) order.
    pub fn flows(&self, instance: &ModelInstance) -> Vec<TradeFlow> {
        let mut out = Vec::new();
        for (t, slice) in self.tonnes.iter().enumerate() {
            for (b, row) in slice.iter().enumerate() {
                for (s, &q) in row.iter().enumerate() {
                    if q > 0.0 {
                        out.push(TradeFlow {
                            year: instance.horizon().year(t),
                            from: instance.region(self.buyers[b]).id.clone(),
                            to: instance.region(self.sellers[s]).id.clone(),
                            tonnes: q,
                        });
                    }
                }
            }
        }
        out
    }
}

pub fn trade_matrix(result: &ScenarioResult, instance: &ModelInstance) -> TradeMatrix {
    let buyers = instance.buyer_regions().to_vec();
    let sellers = instance.storage_regions().to_vec();
    let tonnes: Vec<Vec<Vec<f64>>> = (0..instance.num_years())
        .map(|t| {
            buyers
                .iter()
                .map(|&j| {
                    sellers
                        .iter()
                        .map(|&i| result.plan.ccs_traded[j][i][t])
                        .collect()
                })
                .collect()
        })
        .collect();
    let total_tonnes: f64 = tonnes.iter().flatten().flatten().sum();
    TradeMatrix {
        buyers,
        sellers,
        tonnes,
        any_trading: total_tonnes > 0.0,
        total_tonnes,
    }
}

/// Everything the report writer needs besides the result itself.
#[derive(Debug, Clone, PartialEq)]
pub struct Analysis {
    pub shares: ContributionShares,
    pub cashflow: CashflowSeries,
    pub payback_year: Option<i32>,
    pub trades: TradeMatrix,
}

pub fn analyze(
    result: &ScenarioResult,
    instance: &ModelInstance,
    options: &CashflowOptions,
) -> Analysis {
    let cashflow = cashflow(result, instance, options);
    Analysis {
        shares: contribution_shares(result, instance),
        payback_year: payback_year(&cashflow),
        trades: trade_matrix(result, instance),
        cashflow,
    }
}
