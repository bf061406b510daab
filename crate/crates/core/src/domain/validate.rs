use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use super::units::Quantity;
use super::{
    CapSchedule, DistanceMatrix, GlobalParams, Location, ModelInstance, RawInstance, Region,
    RegionTech, TechKind, TimeSeries, DEFAULT_MIX_RATIO,
};

const MIX_SUM_TOL: f64 = 1e-9;

/// One violated rule, with a path to the offending field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationError {
    pub path: String,
    pub message: String,
}

impl ValidationError {
    fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ValidationErrors(pub Vec<ValidationError>);

impl fmt::Display for ValidationErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} validation error(s)", self.0.len())?;
        for e in &self.0 {
            write!(f, "\n  {e}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ValidateOptions {
    /// Enforce the mix-ratio rule needed by the resilience constraint.
    pub require_resilience: bool,
}

fn trim_number(v: f64) -> String {
    let s = format!("{v:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

pub(crate) fn mix_ratio_errors(ratio: &[f64; TechKind::COUNT]) -> Vec<ValidationError> {
    let mut errors = Vec::new();
    for k in TechKind::ALL {
        let a = ratio[k.index()];
        if !(a > 0.0) {
            errors.push(ValidationError::new(
                format!("globals.mix_ratio.{k}"),
                format!("alpha must be positive, got {}", trim_number(a)),
            ));
        }
    }
    let sum: f64 = ratio.iter().sum();
    if (sum - 1.0).abs() > MIX_SUM_TOL {
        errors.push(ValidationError::new(
            "globals.mix_ratio",
            format!("alpha sums to {}", trim_number(sum)),
        ));
    }
    errors
}

struct Checker<'a> {
    horizon_len: usize,
    start_year: i32,
    errors: &'a mut Vec<ValidationError>,
}

impl Checker<'_> {
    fn push(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.errors.push(ValidationError::new(path, message));
    }

    fn scalar(&mut self, path: &str, value: f64) {
        if !value.is_finite() {
            self.push(path, format!("value {value} is not finite"));
        } else if value < 0.0 {
            self.push(path, format!("value {} is negative", trim_number(value)));
        }
    }

    /// Checks length, finiteness and sign; returns the converted series if valid.
    fn series(&mut self, path: &str, values: Option<&[f64]>, factor: f64) -> Option<TimeSeries> {
        let Some(values) = values else {
            self.push(path, "missing series");
            return None;
        };
        let mut ok = true;
        if values.len() != self.horizon_len {
            self.push(
                path,
                format!(
                    "series length {} ≠ horizon {}",
                    values.len(),
                    self.horizon_len
                ),
            );
            ok = false;
        }
        for (t, &v) in values.iter().enumerate() {
            let year = self.start_year + t as i32;
            if !v.is_finite() {
                self.push(path, format!("value at year {year} is not finite"));
                ok = false;
            } else if v < 0.0 {
                self.push(
                    path,
                    format!("value {} at year {year} is negative", trim_number(v)),
                );
                ok = false;
            }
        }
        ok.then(|| TimeSeries::new(values.iter().map(|v| v * factor).collect()))
    }
}

/// Validates a raw instance and converts it to canonical units.
///
/// Either every invariant holds on the returned instance, or every violated
/// rule is reported.
pub fn validate_instance(
    raw: &RawInstance,
    options: &ValidateOptions,
) -> Result<ModelInstance, ValidationErrors> {
    let mut errors = Vec::new();
    let horizon = raw.horizon;
    if horizon.num_years == 0 {
        errors.push(ValidationError::new(
            "horizon.num_years",
            "horizon must span at least one year",
        ));
        return Err(ValidationErrors(errors));
    }
    let units = &raw.units;
    let mut ck = Checker {
        horizon_len: horizon.num_years,
        start_year: horizon.start_year,
        errors: &mut errors,
    };

    // regions
    if raw.regions.is_empty() {
        ck.push("regions", "no regions defined");
    }
    let mut ids = BTreeMap::new();
    for (pos, r) in raw.regions.iter().enumerate() {
        if r.id.trim().is_empty() {
            ck.push(format!("regions[{pos}].id"), "empty region id");
        } else if ids.insert(r.id.as_str(), pos).is_some() {
            ck.push(format!("regions[{}].id", r.id), "duplicate region id");
        }
        ck.scalar(
            &format!("regions[{}].baseline_emissions", r.id),
            r.baseline_emissions,
        );
        ck.scalar(&format!("regions[{}].ccs_capacity", r.id), r.ccs_capacity);
        match (r.lat, r.lon) {
            (Some(lat), Some(lon)) => {
                if !(-90.0..=90.0).contains(&lat) {
                    ck.push(
                        format!("regions[{}].lat", r.id),
                        "latitude outside [-90, 90]",
                    );
                }
                if !(-180.0..=180.0).contains(&lon) {
                    ck.push(
                        format!("regions[{}].lon", r.id),
                        "longitude outside [-180, 180]",
                    );
                }
            }
            (None, None) => {}
            _ => ck.push(
                format!("regions[{}].location", r.id),
                "latitude and longitude must be given together",
            ),
        }
    }

    // technologies
    let mut techs: BTreeMap<(usize, TechKind), RegionTech> = BTreeMap::new();
    let mut seen = BTreeSet::new();
    for t in &raw.techs {
        let base = format!("techs[{}/{}]", t.region_id, t.tech);
        let region = ids.get(t.region_id.as_str()).copied();
        if region.is_none() {
            ck.push(&base, format!("unknown region {:?}", t.region_id));
        }
        let kind = match t.tech.parse::<TechKind>() {
            Ok(k) => Some(k),
            Err(msg) => {
                ck.push(format!("{base}.tech"), msg);
                None
            }
        };
        if let (Some(region), Some(kind)) = (region, kind) {
            if !seen.insert((region, kind)) {
                ck.push(&base, "duplicate technology row");
                continue;
            }
        }
        ck.scalar(&format!("{base}.potential"), t.potential);
        ck.scalar(&format!("{base}.generation_per_gw"), t.generation_per_gw);
        let unit_cost = ck.series(
            &format!("{base}.unit_cost"),
            Some(&t.unit_cost),
            units.factor(Quantity::UnitCost),
        );
        let offset = ck.series(
            &format!("{base}.offset_per_gw"),
            Some(&t.offset_per_gw),
            units.factor(Quantity::OffsetRatio),
        );
        if let (Some(region), Some(kind), Some(unit_cost), Some(offset_per_gw)) =
            (region, kind, unit_cost, offset)
        {
            techs.insert(
                (region, kind),
                RegionTech {
                    offset_per_gw,
                    unit_cost,
                    generation_per_gw: t.generation_per_gw * units.factor(Quantity::Generation),
                    potential_gw: t.potential * units.factor(Quantity::Capacity),
                },
            );
        }
    }
    for r in &raw.regions {
        let Some(&pos) = ids.get(r.id.as_str()) else {
            continue;
        };
        for k in TechKind::ALL {
            if !seen.contains(&(pos, k)) {
                ck.push(format!("techs[{}/{}]", r.id, k), "missing technology row");
            }
        }
    }

    // globals
    let g = &raw.globals;
    let price = units.factor(Quantity::CarbonPrice);
    let carbon_price = ck.series("globals.carbon_price", g.carbon_price.as_deref(), price);
    let ccs_unit_cost = ck.series("globals.ccs_unit_cost", g.ccs_unit_cost.as_deref(), price);
    let transport_cost = ck.series(
        "globals.transport_cost",
        g.transport_cost.as_deref(),
        units.factor(Quantity::TransportCost),
    );
    let cap = match &g.cap {
        None => Some(CapSchedule::unbounded(horizon.num_years)),
        Some(values) => {
            let mut ok = true;
            if values.len() != horizon.num_years {
                ck.push(
                    "globals.cap",
                    format!(
                        "series length {} ≠ horizon {}",
                        values.len(),
                        horizon.num_years
                    ),
                );
                ok = false;
            }
            for (t, v) in values.iter().enumerate() {
                if let Some(v) = v {
                    if !v.is_finite() || *v < 0.0 {
                        ck.push(
                            "globals.cap",
                            format!(
                                "value {} at year {} must be finite and non-negative",
                                trim_number(*v),
                                horizon.year(t)
                            ),
                        );
                        ok = false;
                    }
                }
            }
            let factor = units.factor(Quantity::Emissions);
            ok.then(|| CapSchedule::new(values.iter().map(|v| v.map(|v| v * factor)).collect()))
        }
    };
    for name in g.tariff.keys() {
        if name.parse::<TechKind>().is_err() {
            ck.push(format!("globals.tariff.{name}"), "unknown technology");
        }
    }
    let tariff_factor = units.factor(Quantity::Tariff);
    let tariffs: Vec<Option<TimeSeries>> = TechKind::ALL
        .into_iter()
        .map(|k| {
            let values = g
                .tariff
                .iter()
                .find(|(name, _)| name.parse::<TechKind>() == Ok(k))
                .map(|(_, v)| v.as_slice());
            ck.series(&format!("globals.tariff.{k}"), values, tariff_factor)
        })
        .collect();

    let mut mix_ratio = DEFAULT_MIX_RATIO;
    if let Some(map) = &g.mix_ratio {
        let mut given = [None; TechKind::COUNT];
        for (name, &a) in map {
            match name.parse::<TechKind>() {
                Ok(k) => given[k.index()] = Some(a),
                Err(_) => ck.push(format!("globals.mix_ratio.{name}"), "unknown technology"),
            }
        }
        for k in TechKind::ALL {
            match given[k.index()] {
                Some(a) if (0.0..=1.0).contains(&a) => mix_ratio[k.index()] = a,
                Some(a) => ck.push(
                    format!("globals.mix_ratio.{k}"),
                    format!("alpha {} outside [0, 1]", trim_number(a)),
                ),
                None => ck.push(format!("globals.mix_ratio.{k}"), "missing alpha"),
            }
        }
    }
    if options.require_resilience {
        ck.errors.extend(mix_ratio_errors(&mix_ratio));
    }

    // distances
    let n = raw.regions.len();
    let mut matrix = None;
    if !raw.distances.is_empty() {
        let mut m = DistanceMatrix::new(n);
        let factor = units.factor(Quantity::Distance);
        for d in &raw.distances {
            let path = format!("distances[{}->{}]", d.from, d.to);
            let (Some(&from), Some(&to)) = (ids.get(d.from.as_str()), ids.get(d.to.as_str()))
            else {
                ck.push(path, "unknown region id");
                continue;
            };
            if !d.km.is_finite() || d.km < 0.0 {
                ck.push(path, "distance must be finite and non-negative");
                continue;
            }
            if from == to && d.km != 0.0 {
                ck.push(path, "distance from a region to itself must be 0");
                continue;
            }
            if m.get(from, to).is_some() {
                ck.push(path, "duplicate distance entry");
                continue;
            }
            m.set(from, to, d.km * factor);
        }
        matrix = Some(m);
    } else {
        for r in &raw.regions {
            if r.lat.is_none() || r.lon.is_none() {
                ck.push(
                    format!("regions[{}].location", r.id),
                    "missing both distances and locations",
                );
            }
        }
    }

    let storage: Vec<usize> = (0..n)
        .filter(|&i| raw.regions[i].ccs_capacity > 0.0)
        .collect();
    let buyers: Vec<usize> = (0..n)
        .filter(|&i| !(raw.regions[i].ccs_capacity > 0.0))
        .collect();
    if let Some(m) = &matrix {
        // every trade pair needs a distance from somewhere
        for &j in &buyers {
            for &i in &storage {
                let (a, b) = (&raw.regions[j], &raw.regions[i]);
                let located =
                    a.lat.is_some() && a.lon.is_some() && b.lat.is_some() && b.lon.is_some();
                if m.get(j, i).is_none() && !located {
                    ck.push(
                        format!("distances[{}->{}]", a.id, b.id),
                        "missing both distances and locations",
                    );
                }
            }
        }
    }

    if !errors.is_empty() {
        return Err(ValidationErrors(errors));
    }

    let (Some(carbon_price), Some(ccs_unit_cost), Some(transport_cost), Some(cap)) =
        (carbon_price, ccs_unit_cost, transport_cost, cap)
    else {
        unreachable!("series errors are reported above");
    };
    let [Some(t_solar), Some(t_wind)] = <[Option<TimeSeries>; 2]>::try_from(tariffs).unwrap()
    else {
        unreachable!("series errors are reported above");
    };
    let mass = units.factor(Quantity::Emissions);
    let regions = raw
        .regions
        .iter()
        .enumerate()
        .map(|(pos, r)| Region {
            id: r.id.clone(),
            baseline_emissions: r.baseline_emissions * mass,
            tech: TechKind::ALL.map(|k| techs[&(pos, k)].clone()),
            ccs_capacity: r.ccs_capacity * mass,
            location: r.lat.zip(r.lon).map(|(lat, lon)| Location { lat, lon }),
        })
        .collect();
    Ok(ModelInstance {
        horizon,
        regions,
        globals: GlobalParams {
            carbon_price,
            ccs_unit_cost,
            transport_cost,
            cap,
            tariff: [t_solar, t_wind],
            mix_ratio,
        },
        distances: matrix,
        storage,
        buyers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{RawDistance, RawGlobals, RawRegion, RawTech, UnitDecl};

    fn tech(region: &str, kind: &str, t: usize) -> RawTech {
        RawTech {
            region_id: region.into(),
            tech: kind.into(),
            potential: 5.0,
            generation_per_gw: 1000.0,
            unit_cost: vec![100.0; t],
            offset_per_gw: vec![10.0; t],
        }
    }

    fn two_region(t: usize) -> RawInstance {
        RawInstance {
            horizon: crate::domain::Horizon::new(2018, t),
            units: UnitDecl::canonical(),
            regions: vec![
                RawRegion {
                    id: "A".into(),
                    baseline_emissions: 100.0,
                    ccs_capacity: 50.0,
                    lat: Some(35.0),
                    lon: Some(139.0),
                },
                RawRegion {
                    id: "B".into(),
                    baseline_emissions: 80.0,
                    ccs_capacity: 0.0,
                    lat: Some(34.0),
                    lon: Some(135.0),
                },
            ],
            techs: vec![
                tech("A", "solar", t),
                tech("A", "wind", t),
                tech("B", "solar", t),
                tech("B", "wind", t),
            ],
            globals: RawGlobals {
                carbon_price: Some(vec![10_000.0; t]),
                ccs_unit_cost: Some(vec![10_000.0; t]),
                transport_cost: Some(vec![8.1739; t]),
                cap: None,
                tariff: [
                    ("solar".to_string(), vec![8e6; t]),
                    ("wind".to_string(), vec![8e6; t]),
                ]
                .into_iter()
                .collect(),
                mix_ratio: None,
            },
            distances: vec![],
        }
    }

    fn messages(err: ValidationErrors) -> Vec<String> {
        err.0.into_iter().map(|e| e.to_string()).collect()
    }

    #[test]
    fn well_formed_partitions_regions() {
        let inst = validate_instance(&two_region(33), &ValidateOptions::default()).unwrap();
        assert_eq!(inst.storage_regions(), &[0]);
        assert_eq!(inst.buyer_regions(), &[1]);
        assert_eq!(inst.globals().mix_ratio, DEFAULT_MIX_RATIO);
    }

    #[test]
    fn short_series_reported() {
        let mut raw = two_region(33);
        raw.globals.carbon_price = Some(vec![1.0; 32]);
        let msgs = messages(validate_instance(&raw, &ValidateOptions::default()).unwrap_err());
        assert_eq!(
            msgs,
            vec!["globals.carbon_price: series length 32 ≠ horizon 33"]
        );
    }

    #[test]
    fn alpha_sum_checked_only_with_resilience() {
        let mut raw = two_region(3);
        raw.globals.mix_ratio = Some(
            [("solar".to_string(), 0.31), ("wind".to_string(), 0.68)]
                .into_iter()
                .collect(),
        );
        assert!(validate_instance(&raw, &ValidateOptions::default()).is_ok());
        let opts = ValidateOptions {
            require_resilience: true,
        };
        let msgs = messages(validate_instance(&raw, &opts).unwrap_err());
        assert_eq!(msgs, vec!["globals.mix_ratio: alpha sums to 0.99"]);
    }

    #[test]
    fn collects_every_error() {
        let mut raw = two_region(3);
        raw.regions[1].id = "A".into();
        raw.regions[0].baseline_emissions = -1.0;
        raw.globals.ccs_unit_cost = None;
        raw.techs[0].unit_cost[1] = -3.0;
        let msgs = messages(validate_instance(&raw, &ValidateOptions::default()).unwrap_err());
        assert!(
            msgs.iter().any(|m| m.contains("duplicate region id")),
            "{msgs:?}"
        );
        assert!(msgs
            .iter()
            .any(|m| m.contains("baseline_emissions: value -1 is negative")));
        assert!(msgs
            .iter()
            .any(|m| m == "globals.ccs_unit_cost: missing series"));
        assert!(msgs
            .iter()
            .any(|m| m.contains("value -3 at year 2019 is negative")));
    }

    #[test]
    fn missing_locations_without_matrix() {
        let mut raw = two_region(3);
        raw.regions[1].lat = None;
        raw.regions[1].lon = None;
        let msgs = messages(validate_instance(&raw, &ValidateOptions::default()).unwrap_err());
        assert_eq!(
            msgs,
            vec!["regions[B].location: missing both distances and locations"]
        );

        raw.distances = vec![RawDistance {
            from: "B".into(),
            to: "A".into(),
            km: 250.0,
        }];
        let inst = validate_instance(&raw, &ValidateOptions::default()).unwrap();
        assert_eq!(inst.distance(1, 0).unwrap(), 250.0);
    }

    #[test]
    fn matrix_wins_over_locations() {
        let mut raw = two_region(3);
        raw.distances = vec![RawDistance {
            from: "B".into(),
            to: "A".into(),
            km: 250.0,
        }];
        let inst = validate_instance(&raw, &ValidateOptions::default()).unwrap();
        assert_eq!(inst.distance(1, 0).unwrap(), 250.0);
        // reverse direction falls back to great-circle
        let back = inst.distance(0, 1).unwrap();
        assert!(back > 300.0 && back < 500.0, "{back}");
        assert_eq!(inst.distance(0, 0).unwrap(), 0.0);
    }

    #[test]
    fn bad_distance_entries() {
        let mut raw = two_region(3);
        raw.distances = vec![
            RawDistance {
                from: "A".into(),
                to: "A".into(),
                km: 3.0,
            },
            RawDistance {
                from: "B".into(),
                to: "Z".into(),
                km: 3.0,
            },
            RawDistance {
                from: "B".into(),
                to: "A".into(),
                km: -1.0,
            },
        ];
        let err = validate_instance(&raw, &ValidateOptions::default()).unwrap_err();
        assert_eq!(err.0.len(), 3);
    }

    #[test]
    fn missing_and_unknown_tech_rows() {
        let mut raw = two_region(3);
        raw.techs.pop();
        raw.techs.push(tech("A", "hydro", 3));
        raw.techs.push(tech("Q", "solar", 3));
        let msgs = messages(validate_instance(&raw, &ValidateOptions::default()).unwrap_err());
        assert!(
            msgs.iter()
                .any(|m| m == "techs[B/wind]: missing technology row"),
            "{msgs:?}"
        );
        assert!(msgs
            .iter()
            .any(|m| m.contains("unknown technology \"hydro\"")));
        assert!(msgs.iter().any(|m| m.contains("unknown region \"Q\"")));
    }

    #[test]
    fn declared_units_converted() {
        let mut raw = two_region(3);
        raw.units = UnitDecl::from_tags([
            ("emissions", "kt"),
            ("unit_cost", "yen/kW"),
            ("tariff", "yen/kWh"),
            ("capacity", "MW"),
        ])
        .unwrap();
        let inst = validate_instance(&raw, &ValidateOptions::default()).unwrap();
        assert_eq!(inst.region(0).baseline_emissions, 100_000.0);
        assert_eq!(inst.region(0).ccs_capacity, 50_000.0);
        assert_eq!(
            inst.region(0).tech(TechKind::Solar).unit_cost.at(0),
            100.0 * 1e6
        );
        assert_eq!(
            inst.region(0).tech(TechKind::Solar).potential_gw,
            5.0 * 1e-3
        );
        assert_eq!(inst.globals().tariff(TechKind::Wind).at(0), 8e6 * 1e6);
    }

    #[test]
    fn revalidation_is_identity() {
        let mut raw = two_region(4);
        raw.units = UnitDecl::from_tags([("emissions", "Mt")]).unwrap();
        raw.globals.cap = Some(vec![None, Some(1.0), Some(0.5), None]);
        let once = validate_instance(&raw, &ValidateOptions::default()).unwrap();
        let twice =
            validate_instance(&RawInstance::from(&once), &ValidateOptions::default()).unwrap();
        assert_eq!(once, twice);
    }
}
