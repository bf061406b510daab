//! Small hand-checkable instances and the synthetic `toy-nation` dataset.

use std::collections::BTreeMap;

use crate::domain::{
    validate_instance, Horizon, ModelInstance, RawGlobals, RawInstance, RawRegion, RawTech,
    UnitDecl, ValidateOptions,
};

fn single_series(v: f64) -> Vec<f64> {
    vec![v]
}

fn tariffs(solar: Vec<f64>, wind: Vec<f64>) -> BTreeMap<String, Vec<f64>> {
    [("solar".to_string(), solar), ("wind".to_string(), wind)]
        .into_iter()
        .collect()
}

/// One region with storage, solar only, one year.
///
/// C0 = 100 t, g = 10 t/GW, P = 4 GW, rp = 8 ¥/GW, cp = 1 ¥/t, sp·h = 2,
/// ccsp = 1 ¥/t, storage 30 t, cap 50 t. The optimum installs 4 GW and
/// stores 10 t for a net cost of −6 ¥.
pub fn unit_one_raw(cap: Option<f64>) -> RawInstance {
    RawInstance {
        horizon: Horizon::new(2018, 1),
        units: UnitDecl::canonical(),
        regions: vec![RawRegion {
            id: "R".into(),
            baseline_emissions: 100.0,
            ccs_capacity: 30.0,
            lat: Some(35.0),
            lon: Some(139.0),
        }],
        techs: vec![
            RawTech {
                region_id: "R".into(),
                tech: "solar".into(),
                potential: 4.0,
                generation_per_gw: 2.0,
                unit_cost: single_series(8.0),
                offset_per_gw: single_series(10.0),
            },
            RawTech {
                region_id: "R".into(),
                tech: "wind".into(),
                potential: 0.0,
                generation_per_gw: 0.0,
                unit_cost: single_series(0.0),
                offset_per_gw: single_series(0.0),
            },
        ],
        globals: RawGlobals {
            carbon_price: Some(single_series(1.0)),
            ccs_unit_cost: Some(single_series(1.0)),
            transport_cost: Some(single_series(0.0)),
            cap: Some(vec![cap]),
            tariff: tariffs(single_series(1.0), single_series(1.0)),
            mix_ratio: None,
        },
        distances: vec![],
    }
}

pub fn unit_one() -> ModelInstance {
    validate(&unit_one_raw(Some(50.0)))
}

/// [`unit_one`] without an emission cap.
pub fn unit_one_uncapped() -> ModelInstance {
    validate(&unit_one_raw(None))
}

/// [`unit_one`] with a cap of 10 t, beyond the 70 t reachable offset.
pub fn unit_one_infeasible() -> ModelInstance {
    validate(&unit_one_raw(Some(10.0)))
}

/// A buyer that has to use a seller's storage: the buyer has no renewable
/// potential and the seller has no emissions of its own, so with
/// non-negative regional emissions the seller cannot store locally.
/// The cap of 60 t forces 40 t to be traded.
pub fn forced_trade_raw() -> RawInstance {
    let zero_tech = |region: &str, tech: &str| RawTech {
        region_id: region.into(),
        tech: tech.into(),
        potential: 0.0,
        generation_per_gw: 0.0,
        unit_cost: single_series(0.0),
        offset_per_gw: single_series(0.0),
    };
    RawInstance {
        horizon: Horizon::new(2018, 1),
        units: UnitDecl::canonical(),
        regions: vec![
            RawRegion {
                id: "B".into(),
                baseline_emissions: 100.0,
                ccs_capacity: 0.0,
                lat: Some(35.0),
                lon: Some(139.0),
            },
            RawRegion {
                id: "S".into(),
                baseline_emissions: 0.0,
                ccs_capacity: 200.0,
                lat: Some(37.0),
                lon: Some(140.0),
            },
        ],
        techs: vec![
            zero_tech("B", "solar"),
            zero_tech("B", "wind"),
            zero_tech("S", "solar"),
            zero_tech("S", "wind"),
        ],
        globals: RawGlobals {
            carbon_price: Some(single_series(1.0)),
            ccs_unit_cost: Some(single_series(1.0)),
            transport_cost: Some(single_series(0.01)),
            cap: Some(vec![Some(60.0)]),
            tariff: tariffs(single_series(0.0), single_series(0.0)),
            mix_ratio: None,
        },
        distances: vec![],
    }
}

pub fn forced_trade() -> ModelInstance {
    validate(&forced_trade_raw())
}

fn validate(raw: &RawInstance) -> ModelInstance {
    validate_instance(raw, &ValidateOptions::default()).expect("fixture is valid")
}

/// Region parameters of the synthetic dataset.
struct ToyRegion {
    id: &'static str,
    baseline_mt: f64,
    storage_mt: f64,
    lat: f64,
    lon: f64,
    /// Resource quality relative to a reference site.
    solar_quality: f64,
    wind_quality: f64,
    /// Regional investment cost multiplier.
    cost_factor: f64,
    solar_gw: f64,
    wind_gw: f64,
}

const TOY_REGIONS: [ToyRegion; 10] = [
    ToyRegion {
        id: "R1",
        baseline_mt: 15.0,
        storage_mt: 0.0,
        lat: 43.06,
        lon: 141.35,
        solar_quality: 0.85,
        wind_quality: 1.25,
        cost_factor: 1.00,
        solar_gw: 3.0,
        wind_gw: 6.0,
    },
    ToyRegion {
        id: "R2",
        baseline_mt: 9.0,
        storage_mt: 7.0,
        lat: 40.82,
        lon: 140.74,
        solar_quality: 0.80,
        wind_quality: 1.15,
        cost_factor: 1.05,
        solar_gw: 2.0,
        wind_gw: 4.0,
    },
    ToyRegion {
        id: "R3",
        baseline_mt: 20.0,
        storage_mt: 0.0,
        lat: 38.27,
        lon: 140.87,
        solar_quality: 0.95,
        wind_quality: 1.00,
        cost_factor: 1.00,
        solar_gw: 4.0,
        wind_gw: 3.0,
    },
    ToyRegion {
        id: "R4",
        baseline_mt: 6.0,
        storage_mt: 0.0,
        lat: 37.90,
        lon: 139.02,
        solar_quality: 0.75,
        wind_quality: 0.90,
        cost_factor: 1.15,
        solar_gw: 2.0,
        wind_gw: 2.0,
    },
    ToyRegion {
        id: "R5",
        baseline_mt: 12.0,
        storage_mt: 18.0,
        lat: 37.75,
        lon: 140.47,
        solar_quality: 1.00,
        wind_quality: 1.05,
        cost_factor: 0.95,
        solar_gw: 5.0,
        wind_gw: 4.0,
    },
    ToyRegion {
        id: "R6",
        baseline_mt: 18.0,
        storage_mt: 0.0,
        lat: 35.69,
        lon: 139.69,
        solar_quality: 1.00,
        wind_quality: 0.65,
        cost_factor: 1.10,
        solar_gw: 3.0,
        wind_gw: 1.0,
    },
    ToyRegion {
        id: "R7",
        baseline_mt: 7.0,
        storage_mt: 0.0,
        lat: 36.59,
        lon: 136.63,
        solar_quality: 0.78,
        wind_quality: 0.95,
        cost_factor: 1.10,
        solar_gw: 2.0,
        wind_gw: 3.0,
    },
    ToyRegion {
        id: "R8",
        baseline_mt: 10.0,
        storage_mt: 5.0,
        lat: 34.69,
        lon: 135.52,
        solar_quality: 1.05,
        wind_quality: 0.70,
        cost_factor: 1.05,
        solar_gw: 3.0,
        wind_gw: 1.0,
    },
    ToyRegion {
        id: "R9",
        baseline_mt: 16.0,
        storage_mt: 0.0,
        lat: 34.40,
        lon: 132.46,
        solar_quality: 1.10,
        wind_quality: 0.80,
        cost_factor: 0.95,
        solar_gw: 4.0,
        wind_gw: 2.0,
    },
    ToyRegion {
        id: "R10",
        baseline_mt: 12.0,
        storage_mt: 0.0,
        lat: 33.59,
        lon: 130.40,
        solar_quality: 1.15,
        wind_quality: 0.85,
        cost_factor: 0.90,
        solar_gw: 4.0,
        wind_gw: 2.0,
    },
];

/// Reference solar site: GWh per GW per year.
const SOLAR_YIELD: f64 = 1300.0;
const WIND_YIELD: f64 = 2200.0;
/// Grid emission factor displaced by renewables, t CO₂ per GWh.
const GRID_INTENSITY: f64 = 500.0;
/// 2018 investment cost, yen/kW, and yearly learning rate.
const SOLAR_COST_2018: f64 = 380_000.0;
const WIND_COST_2018: f64 = 550_000.0;
const SOLAR_LEARNING: f64 = 0.03;
const WIND_LEARNING: f64 = 0.02;
/// Share of baseline emissions allowed in the final year.
const FINAL_CAP_SHARE: f64 = 0.65;

/// The synthetic 10-region dataset shipped as `data/toy-nation`, with
/// tariffs declared in yen/kWh and investment costs in yen/kW.
///
/// Values echo the magnitudes of a national study (baseline 125 Mt,
/// storage 30 Mt, with one oversized storage region) but are invented.
pub fn toy_nation_raw() -> RawInstance {
    let horizon = Horizon::default();
    let years = horizon.num_years;
    let learning = |base: f64, rate: f64, factor: f64| -> Vec<f64> {
        (0..years)
            .map(|t| (base * factor * (1.0 - rate).powi(t as i32)).round())
            .collect()
    };
    let regions = TOY_REGIONS
        .iter()
        .map(|r| RawRegion {
            id: r.id.into(),
            baseline_emissions: r.baseline_mt * 1e6,
            ccs_capacity: r.storage_mt * 1e6,
            lat: Some(r.lat),
            lon: Some(r.lon),
        })
        .collect();
    let techs = TOY_REGIONS
        .iter()
        .flat_map(|r| {
            let solar_yield = (SOLAR_YIELD * r.solar_quality).round();
            let wind_yield = (WIND_YIELD * r.wind_quality).round();
            [
                RawTech {
                    region_id: r.id.into(),
                    tech: "solar".into(),
                    potential: r.solar_gw,
                    generation_per_gw: solar_yield,
                    unit_cost: learning(SOLAR_COST_2018, SOLAR_LEARNING, r.cost_factor),
                    offset_per_gw: vec![solar_yield * GRID_INTENSITY; years],
                },
                RawTech {
                    region_id: r.id.into(),
                    tech: "wind".into(),
                    potential: r.wind_gw,
                    generation_per_gw: wind_yield,
                    unit_cost: learning(WIND_COST_2018, WIND_LEARNING, r.cost_factor),
                    offset_per_gw: vec![wind_yield * GRID_INTENSITY; years],
                },
            ]
        })
        .collect();

    // feed-in tariffs until 2020, 8 yen/kWh afterwards
    let tariff = |early: f64| -> Vec<f64> {
        horizon
            .years()
            .map(|y| if y <= 2020 { early } else { 8.0 })
            .collect()
    };
    let baseline: f64 = TOY_REGIONS.iter().map(|r| r.baseline_mt * 1e6).sum();
    // no cap before 2020, then a straight line down to the final share
    let cap = horizon
        .years()
        .map(|y| {
            (y >= 2020).then(|| {
                let f = (y - 2020) as f64 / (horizon.end_year() - 2020) as f64;
                (baseline * (1.0 - (1.0 - FINAL_CAP_SHARE) * f)).round()
            })
        })
        .collect();

    RawInstance {
        horizon,
        units: UnitDecl::from_tags([("tariff", "yen/kWh"), ("unit_cost", "yen/kW")])
            .expect("known units"),
        regions,
        techs,
        globals: RawGlobals {
            carbon_price: Some(vec![10_000.0; years]),
            ccs_unit_cost: Some(vec![10_000.0; years]),
            transport_cost: Some(vec![8.1739; years]),
            cap: Some(cap),
            tariff: tariffs(tariff(18.0), tariff(20.0)),
            mix_ratio: Some(
                [("solar".to_string(), 0.31), ("wind".to_string(), 0.69)]
                    .into_iter()
                    .collect(),
            ),
        },
        distances: vec![],
    }
}

pub fn toy_nation() -> ModelInstance {
    validate(&toy_nation_raw())
}
