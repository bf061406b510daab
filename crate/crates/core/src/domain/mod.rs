//! Input-side domain types: regions, technologies, price schedules and the
//! validated [`ModelInstance`].
//!
//! All values held by validated types are in canonical units: tonnes of
//! CO₂, GW, GWh, yen and km.

mod geo;
mod raw;
pub mod units;
mod validate;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use geo::{great_circle_km, DistanceError, EARTH_RADIUS_KM};
pub use raw::{RawDistance, RawGlobals, RawInstance, RawRegion, RawTech};
pub use units::{Quantity, UnitDecl, UnknownUnit};
pub use validate::{validate_instance, ValidateOptions, ValidationError, ValidationErrors};

/// Renewable technology kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TechKind {
    Solar,
    Wind,
}

impl TechKind {
    pub const COUNT: usize = 2;
    pub const ALL: [TechKind; 2] = [TechKind::Solar, TechKind::Wind];

    /// Zero-based position (solar first).
    pub fn index(self) -> usize {
        match self {
            TechKind::Solar => 0,
            TechKind::Wind => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TechKind::Solar => "solar",
            TechKind::Wind => "wind",
        }
    }
}

impl fmt::Display for TechKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TechKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "solar" => Ok(TechKind::Solar),
            "wind" => Ok(TechKind::Wind),
            other => Err(format!("unknown technology {other:?}")),
        }
    }
}

/// Planning horizon of `num_years` consecutive calendar years.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Horizon {
    pub start_year: i32,
    pub num_years: usize,
}

impl Default for Horizon {
    fn default() -> Self {
        Self {
            start_year: 2018,
            num_years: 33,
        }
    }
}

impl Horizon {
    pub fn new(start_year: i32, num_years: usize) -> Self {
        Self {
            start_year,
            num_years,
        }
    }

    pub fn end_year(&self) -> i32 {
        self.start_year + self.num_years as i32 - 1
    }

    /// Calendar year of zero-based year index `t`.
    pub fn year(&self, t: usize) -> i32 {
        self.start_year + t as i32
    }

    pub fn index_of(&self, year: i32) -> Option<usize> {
        let t = year.checked_sub(self.start_year)?;
        usize::try_from(t).ok().filter(|&t| t < self.num_years)
    }

    pub fn years(&self) -> impl Iterator<Item = i32> + '_ {
        (0..self.num_years).map(|t| self.year(t))
    }
}

/// One value per horizon year.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TimeSeries(Vec<f64>);

impl TimeSeries {
    pub fn new(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn constant(value: f64, len: usize) -> Self {
        Self(vec![value; len])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn at(&self, t: usize) -> f64 {
        self.0[t]
    }

    /// Sum over years `t..len`.
    pub fn tail_sum(&self, t: usize) -> f64 {
        self.0[t..].iter().sum()
    }
}

impl From<Vec<f64>> for TimeSeries {
    fn from(values: Vec<f64>) -> Self {
        Self(values)
    }
}

/// Yearly national emission ceiling; `None` years impose no limit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CapSchedule(Vec<Option<f64>>);

impl CapSchedule {
    pub fn new(values: Vec<Option<f64>>) -> Self {
        Self(values)
    }

    pub fn unbounded(len: usize) -> Self {
        Self(vec![None; len])
    }

    pub fn at(&self, t: usize) -> Option<f64> {
        self.0[t]
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn finite_years(&self) -> usize {
        self.0.iter().filter(|c| c.is_some()).count()
    }
}

/// Per region and technology inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionTech {
    /// Tonnes CO₂ offset per GW installed, per installation year.
    pub offset_per_gw: TimeSeries,
    /// Investment cost in yen per GW, per installation year (learning curve).
    pub unit_cost: TimeSeries,
    /// GWh generated per GW per year.
    pub generation_per_gw: f64,
    /// Total economically feasible capacity over the horizon, GW.
    pub potential_gw: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Location {
    pub lat: f64,
    pub lon: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub id: String,
    /// Emissions in the year before the horizon starts, tonnes/year.
    pub baseline_emissions: f64,
    /// Indexed by [`TechKind::index`].
    pub tech: [RegionTech; TechKind::COUNT],
    /// Total storable tonnes over the horizon; zero for regions without storage.
    pub ccs_capacity: f64,
    pub location: Option<Location>,
}

impl Region {
    pub fn tech(&self, kind: TechKind) -> &RegionTech {
        &self.tech[kind.index()]
    }

    pub fn has_storage(&self) -> bool {
        self.ccs_capacity > 0.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GlobalParams {
    /// Carbon price, yen/t.
    pub carbon_price: TimeSeries,
    /// Capture and storage cost, yen/t.
    pub ccs_unit_cost: TimeSeries,
    /// Ground transport cost, yen/(t·km).
    pub transport_cost: TimeSeries,
    pub cap: CapSchedule,
    /// Feed-in tariff per technology, yen/GWh.
    pub tariff: [TimeSeries; TechKind::COUNT],
    /// Required share of each technology in yearly installations.
    pub mix_ratio: [f64; TechKind::COUNT],
}

impl GlobalParams {
    pub fn tariff(&self, kind: TechKind) -> &TimeSeries {
        &self.tariff[kind.index()]
    }
}

/// Default renewable mix used by the resilience constraint.
pub const DEFAULT_MIX_RATIO: [f64; 2] = [0.31, 0.69];

/// Explicit region-to-region distances, row = origin.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    km: Vec<Option<f64>>,
}

impl DistanceMatrix {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            km: vec![None; n * n],
        }
    }

    pub fn set(&mut self, from: usize, to: usize, km: f64) {
        self.km[from * self.n + to] = Some(km);
    }

    pub fn get(&self, from: usize, to: usize) -> Option<f64> {
        self.km[from * self.n + to]
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.km
            .iter()
            .enumerate()
            .filter_map(move |(pos, d)| d.map(|d| (pos / self.n, pos % self.n, d)))
    }
}

/// A validated dataset. Construct through [`validate_instance`].
#[derive(Debug, Clone, PartialEq)]
pub struct ModelInstance {
    horizon: Horizon,
    regions: Vec<Region>,
    globals: GlobalParams,
    distances: Option<DistanceMatrix>,
    storage: Vec<usize>,
    buyers: Vec<usize>,
}

impl ModelInstance {
    pub fn horizon(&self) -> Horizon {
        self.horizon
    }

    pub fn num_years(&self) -> usize {
        self.horizon.num_years
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn region(&self, i: usize) -> &Region {
        &self.regions[i]
    }

    pub fn region_index(&self, id: &str) -> Option<usize> {
        self.regions.iter().position(|r| r.id == id)
    }

    pub fn globals(&self) -> &GlobalParams {
        &self.globals
    }

    pub fn distances(&self) -> Option<&DistanceMatrix> {
        self.distances.as_ref()
    }

    /// Regions with physical storage (sellers), in region order.
    pub fn storage_regions(&self) -> &[usize] {
        &self.storage
    }

    /// Regions without storage (buyers), in region order.
    pub fn buyer_regions(&self) -> &[usize] {
        &self.buyers
    }

    /// Sum of baseline emissions over all regions.
    pub fn baseline_total(&self) -> f64 {
        self.regions.iter().map(|r| r.baseline_emissions).sum()
    }

    /// Distance from region `from` to region `to` in km.
    ///
    /// An explicit matrix entry wins; otherwise the great-circle distance
    /// between the two locations is used.
    pub fn distance(&self, from: usize, to: usize) -> Result<f64, DistanceError> {
        if let Some(km) = self.distances.as_ref().and_then(|m| m.get(from, to)) {
            return Ok(km);
        }
        if from == to {
            return Ok(0.0);
        }
        let a = &self.regions[from];
        let b = &self.regions[to];
        match (a.location, b.location) {
            (Some(la), Some(lb)) => Ok(great_circle_km(la, lb)),
            _ => Err(DistanceError {
                from: a.id.clone(),
                to: b.id.clone(),
            }),
        }
    }

    /// Checks the mix-ratio rule required by the resilience constraint.
    pub fn check_mix_ratio(&self) -> Result<(), ValidationErrors> {
        let errors = validate::mix_ratio_errors(&self.globals.mix_ratio);
        if errors.is_empty() {
            Ok(())
        } else {
            Err(ValidationErrors(errors))
        }
    }
}
