//! Unvalidated instance as produced by the loaders, values in declared units.

use std::collections::BTreeMap;

use super::{units::UnitDecl, Horizon, ModelInstance, TechKind};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RawRegion {
    pub id: String,
    pub baseline_emissions: f64,
    pub ccs_capacity: f64,
    pub lat: Option<f64>,
    pub lon: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RawTech {
    pub region_id: String,
    pub tech: String,
    pub potential: f64,
    pub generation_per_gw: f64,
    pub unit_cost: Vec<f64>,
    pub offset_per_gw: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RawGlobals {
    pub carbon_price: Option<Vec<f64>>,
    pub ccs_unit_cost: Option<Vec<f64>>,
    pub transport_cost: Option<Vec<f64>>,
    /// Missing means no cap in any year.
    pub cap: Option<Vec<Option<f64>>>,
    /// Keyed by technology name.
    pub tariff: BTreeMap<String, Vec<f64>>,
    /// Keyed by technology name; missing means the default 31/69 mix.
    pub mix_ratio: Option<BTreeMap<String, f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RawDistance {
    pub from: String,
    pub to: String,
    pub km: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RawInstance {
    pub horizon: Horizon,
    pub units: UnitDecl,
    pub regions: Vec<RawRegion>,
    pub techs: Vec<RawTech>,
    pub globals: RawGlobals,
    /// Empty means no explicit matrix.
    pub distances: Vec<RawDistance>,
}

impl From<&ModelInstance> for RawInstance {
    /// Canonical-unit raw form of a validated instance.
    fn from(inst: &ModelInstance) -> Self {
        let regions = inst
            .regions()
            .iter()
            .map(|r| RawRegion {
                id: r.id.clone(),
                baseline_emissions: r.baseline_emissions,
                ccs_capacity: r.ccs_capacity,
                lat: r.location.map(|l| l.lat),
                lon: r.location.map(|l| l.lon),
            })
            .collect();
        let techs = inst
            .regions()
            .iter()
            .flat_map(|r| {
                TechKind::ALL.into_iter().map(move |k| {
                    let rt = r.tech(k);
                    RawTech {
                        region_id: r.id.clone(),
                        tech: k.name().to_string(),
                        potential: rt.potential_gw,
                        generation_per_gw: rt.generation_per_gw,
                        unit_cost: rt.unit_cost.values().to_vec(),
                        offset_per_gw: rt.offset_per_gw.values().to_vec(),
                    }
                })
            })
            .collect();
        let g = inst.globals();
        let globals = RawGlobals {
            carbon_price: Some(g.carbon_price.values().to_vec()),
            ccs_unit_cost: Some(g.ccs_unit_cost.values().to_vec()),
            transport_cost: Some(g.transport_cost.values().to_vec()),
            cap: Some(g.cap.values().to_vec()),
            tariff: TechKind::ALL
                .into_iter()
                .map(|k| (k.name().to_string(), g.tariff(k).values().to_vec()))
                .collect(),
            mix_ratio: Some(
                TechKind::ALL
                    .into_iter()
                    .map(|k| (k.name().to_string(), g.mix_ratio[k.index()]))
                    .collect(),
            ),
        };
        let distances = inst
            .distances()
            .map(|m| {
                m.entries()
                    .map(|(from, to, km)| RawDistance {
                        from: inst.region(from).id.clone(),
                        to: inst.region(to).id.clone(),
                        km,
                    })
                    .collect()
            })
            .unwrap_or_default();
        RawInstance {
            horizon: inst.horizon(),
            units: UnitDecl::canonical(),
            regions,
            techs,
            globals,
            distances,
        }
    }
}
