use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::domain::{Horizon, RawDistance, RawGlobals, RawInstance, RawRegion, RawTech, UnitDecl};

use super::{io_err, LoadError, WriteError};

pub const GLOBALS_FILE: &str = "globals.json";
pub const REGIONS_FILE: &str = "regions.csv";
pub const TECH_FILE: &str = "tech.csv";
const DISTANCES_FILE: &str = "distances.csv";
const SERIES_DIR: &str = "series";

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HorizonJson {
    start_year: i32,
    num_years: usize,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum SeriesJson {
    Values(Vec<f64>),
    Constant { constant: f64 },
}

impl SeriesJson {
    /// Uniform full-length series collapse to the constant form.
    fn compact(values: &[f64], len: usize) -> Self {
        match values.first() {
            Some(&v)
                if values.len() == len && values.iter().all(|&x| x.to_bits() == v.to_bits()) =>
            {
                SeriesJson::Constant { constant: v }
            }
            _ => SeriesJson::Values(values.to_vec()),
        }
    }

    fn expand(self, len: usize) -> Vec<f64> {
        match self {
            SeriesJson::Values(v) => v,
            SeriesJson::Constant { constant } => vec![constant; len],
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum CapJson {
    Values(Vec<Option<f64>>),
    Constant { constant: f64 },
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GlobalsJson {
    horizon: HorizonJson,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    units: BTreeMap<String, String>,
    #[serde(alias = "cp", skip_serializing_if = "Option::is_none")]
    carbon_price: Option<SeriesJson>,
    #[serde(alias = "ccsp", skip_serializing_if = "Option::is_none")]
    ccs_unit_cost: Option<SeriesJson>,
    #[serde(alias = "gt", skip_serializing_if = "Option::is_none")]
    transport_cost: Option<SeriesJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cap: Option<CapJson>,
    #[serde(alias = "sp", default)]
    tariff: BTreeMap<String, SeriesJson>,
    #[serde(alias = "alpha", skip_serializing_if = "Option::is_none")]
    mix_ratio: Option<BTreeMap<String, f64>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct RegionRow {
    id: String,
    #[serde(rename = "C0_tonnes")]
    baseline: f64,
    lat: Option<f64>,
    lon: Option<f64>,
    ccs_capacity_tonnes: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct TechRow {
    region_id: String,
    tech: String,
    potential_gw: f64,
    h_gwh_per_gw: f64,
    rp_series: String,
    g_series: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct SeriesRow {
    year: i32,
    value: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct DistanceRow {
    from_id: String,
    to_id: String,
    km: f64,
}

fn read_to_string(path: &Path) -> Result<String, LoadError> {
    fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Rows of a headed CSV file with their 1-based line numbers.
fn read_csv<T: DeserializeOwned>(path: &Path, label: &str) -> Result<Vec<(u64, T)>, LoadError> {
    let malformed = |line: u64, message: String| LoadError::Malformed {
        file: label.to_string(),
        line,
        message,
    };
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(source) => LoadError::Io {
                path: path.to_path_buf(),
                source,
            },
            other => malformed(1, format!("{other:?}")),
        })?;
    let headers = reader
        .headers()
        .map_err(|e| malformed(1, e.to_string()))?
        .clone();
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            malformed(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let row = record
            .deserialize(Some(&headers))
            .map_err(|e| malformed(line, deserialize_message(&e)))?;
        out.push((line, row));
    }
    Ok(out)
}

fn deserialize_message(e: &csv::Error) -> String {
    match e.kind() {
        csv::ErrorKind::Deserialize { err, .. } => match err.field() {
            Some(f) => format!("field {}: {}", f + 1, err.kind()),
            None => err.kind().to_string(),
        },
        _ => e.to_string(),
    }
}

/// Series file values for each horizon year; rows outside the horizon are
/// ignored.
fn read_series(
    dir: &Path,
    name: &str,
    horizon: Horizon,
    referenced: (&str, u64),
) -> Result<Vec<f64>, LoadError> {
    let path = dir.join(SERIES_DIR).join(format!("{name}.csv"));
    if !path.is_file() {
        return Err(LoadError::Malformed {
            file: referenced.0.to_string(),
            line: referenced.1,
            message: format!("series file {SERIES_DIR}/{name}.csv not found"),
        });
    }
    let label = format!("{SERIES_DIR}/{name}.csv");
    let mut values = vec![None; horizon.num_years];
    for (line, row) in read_csv::<SeriesRow>(&path, &label)? {
        let Some(t) = horizon.index_of(row.year) else {
            continue;
        };
        if values[t].replace(row.value).is_some() {
            return Err(LoadError::Malformed {
                file: label,
                line,
                message: format!("duplicate year {}", row.year),
            });
        }
    }
    values
        .into_iter()
        .enumerate()
        .map(|(t, v)| {
            v.ok_or_else(|| LoadError::Invalid {
                file: label.clone(),
                message: format!("year {} missing in series {name}", horizon.year(t)),
            })
        })
        .collect()
}

fn parse_globals(text: &str) -> Result<GlobalsJson, LoadError> {
    serde_json::from_str(text).map_err(|e| LoadError::Malformed {
        file: GLOBALS_FILE.to_string(),
        line: e.line() as u64,
        message: e.to_string(),
    })
}

/// Reads a dataset directory into a [`RawInstance`] in its declared units.
/// Semantic checks and unit conversion happen in
/// [`validate_instance`](crate::domain::validate_instance).
pub fn load(dir: &Path) -> Result<RawInstance, LoadError> {
    let missing: Vec<String> = [GLOBALS_FILE, REGIONS_FILE, TECH_FILE]
        .into_iter()
        .filter(|f| !dir.join(f).is_file())
        .map(String::from)
        .collect();
    if !missing.is_empty() {
        return Err(LoadError::MissingFiles {
            dir: dir.to_path_buf(),
            files: missing,
        });
    }

    let globals = parse_globals(&read_to_string(&dir.join(GLOBALS_FILE))?)?;
    let horizon = Horizon::new(globals.horizon.start_year, globals.horizon.num_years);
    if horizon.num_years == 0 {
        return Err(LoadError::Invalid {
            file: GLOBALS_FILE.into(),
            message: "horizon must span at least one year".into(),
        });
    }
    let units = UnitDecl::from_tags(globals.units.iter().map(|(k, v)| (k.as_str(), v.as_str())))?;
    let len = horizon.num_years;

    let regions = read_csv::<RegionRow>(&dir.join(REGIONS_FILE), REGIONS_FILE)?
        .into_iter()
        .map(|(_, r)| RawRegion {
            id: r.id,
            baseline_emissions: r.baseline,
            ccs_capacity: r.ccs_capacity_tonnes,
            lat: r.lat,
            lon: r.lon,
        })
        .collect();

    let mut techs = Vec::new();
    for (line, row) in read_csv::<TechRow>(&dir.join(TECH_FILE), TECH_FILE)? {
        let at = (TECH_FILE, line);
        techs.push(RawTech {
            unit_cost: read_series(dir, &row.rp_series, horizon, at)?,
            offset_per_gw: read_series(dir, &row.g_series, horizon, at)?,
            region_id: row.region_id,
            tech: row.tech,
            potential: row.potential_gw,
            generation_per_gw: row.h_gwh_per_gw,
        });
    }

    let distances_path = dir.join(DISTANCES_FILE);
    let distances = if distances_path.is_file() {
        read_csv::<DistanceRow>(&distances_path, DISTANCES_FILE)?
            .into_iter()
            .map(|(_, d)| RawDistance {
                from: d.from_id,
                to: d.to_id,
                km: d.km,
            })
            .collect()
    } else {
        Vec::new()
    };

    let cap = globals.cap.map(|c| match c {
        CapJson::Values(v) => v,
        CapJson::Constant { constant } => vec![Some(constant); len],
    });
    Ok(RawInstance {
        horizon,
        units,
        regions,
        techs,
        globals: RawGlobals {
            carbon_price: globals.carbon_price.map(|s| s.expand(len)),
            ccs_unit_cost: globals.ccs_unit_cost.map(|s| s.expand(len)),
            transport_cost: globals.transport_cost.map(|s| s.expand(len)),
            cap,
            tariff: globals
                .tariff
                .into_iter()
                .map(|(k, s)| (k, s.expand(len)))
                .collect(),
            mix_ratio: globals.mix_ratio,
        },
        distances,
    })
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), WriteError> {
    fs::write(path, contents).map_err(io_err(path))
}

fn csv_bytes<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Result<Vec<u8>, WriteError> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for row in rows {
        w.serialize(row)
            .map_err(|e| WriteError::Serialize(e.to_string()))?;
    }
    w.into_inner()
        .map_err(|e| WriteError::Serialize(e.to_string()))
}

fn series_name(kind: &str, tech: &RawTech) -> String {
    format!("{kind}_{}_{}", tech.tech, tech.region_id)
}

/// Writes `raw` as a dataset directory that [`load`] reads back unchanged.
/// Series are written for consecutive years starting at the horizon start.
pub fn write_dataset(raw: &RawInstance, dir: &Path) -> Result<(), WriteError> {
    let series_dir = dir.join(SERIES_DIR);
    fs::create_dir_all(&series_dir).map_err(io_err(&series_dir))?;

    let compact = |v: &[f64]| SeriesJson::compact(v, raw.horizon.num_years);
    let globals = GlobalsJson {
        horizon: HorizonJson {
            start_year: raw.horizon.start_year,
            num_years: raw.horizon.num_years,
        },
        units: raw
            .units
            .declared()
            .map(|(q, tag)| (q.key().to_string(), tag.to_string()))
            .collect(),
        carbon_price: raw.globals.carbon_price.as_deref().map(compact),
        ccs_unit_cost: raw.globals.ccs_unit_cost.as_deref().map(compact),
        transport_cost: raw.globals.transport_cost.as_deref().map(compact),
        cap: raw.globals.cap.clone().map(CapJson::Values),
        tariff: raw
            .globals
            .tariff
            .iter()
            .map(|(k, v)| (k.clone(), compact(v)))
            .collect(),
        mix_ratio: raw.globals.mix_ratio.clone(),
    };
    let mut json =
        serde_json::to_string_pretty(&globals).map_err(|e| WriteError::Serialize(e.to_string()))?;
    json.push('\n');
    write_file(&dir.join(GLOBALS_FILE), json.as_bytes())?;

    let regions = raw.regions.iter().map(|r| RegionRow {
        id: r.id.clone(),
        baseline: r.baseline_emissions,
        lat: r.lat,
        lon: r.lon,
        ccs_capacity_tonnes: r.ccs_capacity,
    });
    write_file(&dir.join(REGIONS_FILE), &csv_bytes(regions)?)?;

    let techs = raw.techs.iter().map(|t| TechRow {
        region_id: t.region_id.clone(),
        tech: t.tech.clone(),
        potential_gw: t.potential,
        h_gwh_per_gw: t.generation_per_gw,
        rp_series: series_name("rp", t),
        g_series: series_name("g", t),
    });
    write_file(&dir.join(TECH_FILE), &csv_bytes(techs)?)?;

    for t in &raw.techs {
        for (kind, values) in [("rp", &t.unit_cost), ("g", &t.offset_per_gw)] {
            let rows = values.iter().enumerate().map(|(i, &value)| SeriesRow {
                year: raw.horizon.start_year + i as i32,
                value,
            });
            let path = series_dir.join(format!("{}.csv", series_name(kind, t)));
            write_file(&path, &csv_bytes(rows)?)?;
        }
    }

    if !raw.distances.is_empty() {
        let rows = raw.distances.iter().map(|d| DistanceRow {
            from_id: d.from.clone(),
            to_id: d.to.clone(),
            km: d.km,
        });
        write_file(&dir.join(DISTANCES_FILE), &csv_bytes(rows)?)?;
    }
    Ok(())
}
