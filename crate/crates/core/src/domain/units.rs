//! Declared input units and their conversion to the canonical set
//! (tonnes CO₂, GW, GWh, yen, km).

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown unit tag {tag:?} for {quantity}")]
pub struct UnknownUnit {
    pub quantity: String,
    pub tag: String,
}

fn mass_factor(tag: &str) -> Option<f64> {
    match tag {
        "t" => Some(1.0),
        "kt" => Some(1e3),
        "Mt" => Some(1e6),
        _ => None,
    }
}

fn power_factor(tag: &str) -> Option<f64> {
    match tag {
        "GW" => Some(1.0),
        "MW" => Some(1e-3),
        "kW" => Some(1e-6),
        _ => None,
    }
}

fn energy_factor(tag: &str) -> Option<f64> {
    match tag {
        "GWh" => Some(1.0),
        "MWh" => Some(1e-3),
        "kWh" => Some(1e-6),
        _ => None,
    }
}

fn distance_factor(tag: &str) -> Option<f64> {
    match tag {
        "km" => Some(1.0),
        "m" => Some(1e-3),
        _ => None,
    }
}

fn money_factor(tag: &str) -> Option<f64> {
    match tag {
        "yen" => Some(1.0),
        "kyen" => Some(1e3),
        "Myen" => Some(1e6),
        _ => None,
    }
}

fn split_ratio(tag: &str) -> Option<(&str, &str)> {
    let (num, den) = tag.split_once('/')?;
    Some((num.trim(), den.trim()))
}

/// Factor for a compound `num/den` tag, e.g. `kt/MW`.
fn ratio_factor(
    tag: &str,
    num: fn(&str) -> Option<f64>,
    den: fn(&str) -> Option<f64>,
) -> Option<f64> {
    let (n, d) = split_ratio(tag)?;
    Some(num(n)? / den(d)?)
}

/// Kind of physical quantity a unit tag applies to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Quantity {
    /// C0, cap, storage capacity.
    Emissions,
    /// Renewable potential.
    Capacity,
    /// Tonnes offset per GW per year.
    OffsetRatio,
    /// GWh generated per GW per year.
    Generation,
    /// Investment cost per GW.
    UnitCost,
    /// Feed-in tariff per GWh.
    Tariff,
    /// Carbon and capture prices per tonne.
    CarbonPrice,
    /// Transport cost per tonne-km.
    TransportCost,
    Distance,
}

impl Quantity {
    pub const ALL: [Quantity; 9] = [
        Quantity::Emissions,
        Quantity::Capacity,
        Quantity::OffsetRatio,
        Quantity::Generation,
        Quantity::UnitCost,
        Quantity::Tariff,
        Quantity::CarbonPrice,
        Quantity::TransportCost,
        Quantity::Distance,
    ];

    /// Key used in the `units` block of `globals.json`.
    pub fn key(self) -> &'static str {
        match self {
            Quantity::Emissions => "emissions",
            Quantity::Capacity => "capacity",
            Quantity::OffsetRatio => "offset_ratio",
            Quantity::Generation => "generation",
            Quantity::UnitCost => "unit_cost",
            Quantity::Tariff => "tariff",
            Quantity::CarbonPrice => "carbon_price",
            Quantity::TransportCost => "transport_cost",
            Quantity::Distance => "distance",
        }
    }

    pub fn canonical_tag(self) -> &'static str {
        match self {
            Quantity::Emissions => "t",
            Quantity::Capacity => "GW",
            Quantity::OffsetRatio => "t/GW",
            Quantity::Generation => "GWh/GW",
            Quantity::UnitCost => "yen/GW",
            Quantity::Tariff => "yen/GWh",
            Quantity::CarbonPrice => "yen/t",
            Quantity::TransportCost => "yen/(t*km)",
            Quantity::Distance => "km",
        }
    }

    /// Multiplier taking a value in `tag` to the canonical unit.
    pub fn factor(self, tag: &str) -> Option<f64> {
        match self {
            Quantity::Emissions => mass_factor(tag),
            Quantity::Capacity => power_factor(tag),
            Quantity::OffsetRatio => ratio_factor(tag, mass_factor, power_factor),
            Quantity::Generation => ratio_factor(tag, energy_factor, power_factor),
            Quantity::UnitCost => ratio_factor(tag, money_factor, power_factor),
            Quantity::Tariff => ratio_factor(tag, money_factor, energy_factor),
            Quantity::CarbonPrice => ratio_factor(tag, money_factor, mass_factor),
            Quantity::TransportCost => {
                let (money, rest) = split_ratio(tag)?;
                let rest = rest.trim_start_matches('(').trim_end_matches(')');
                let (mass, dist) = rest.split_once('*')?;
                Some(
                    money_factor(money)?
                        / (mass_factor(mass.trim())? * distance_factor(dist.trim())?),
                )
            }
            Quantity::Distance => distance_factor(tag),
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// Unit declaration of a dataset. Quantities not mentioned are canonical.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitDecl {
    tags: BTreeMap<Quantity, String>,
}

impl Default for UnitDecl {
    fn default() -> Self {
        Self::canonical()
    }
}

impl UnitDecl {
    pub fn canonical() -> Self {
        Self {
            tags: BTreeMap::new(),
        }
    }

    /// Parses a `units` block. Unknown keys and unknown tags are errors.
    pub fn from_tags<'a, I>(pairs: I) -> Result<Self, UnknownUnit>
    where
        I: IntoIterator<Item = (&'a str, &'a str)>,
    {
        let mut tags = BTreeMap::new();
        for (key, tag) in pairs {
            let quantity = Quantity::ALL
                .into_iter()
                .find(|q| q.key() == key)
                .ok_or_else(|| UnknownUnit {
                    quantity: key.to_string(),
                    tag: tag.to_string(),
                })?;
            if quantity.factor(tag).is_none() {
                return Err(UnknownUnit {
                    quantity: key.to_string(),
                    tag: tag.to_string(),
                });
            }
            tags.insert(quantity, tag.to_string());
        }
        Ok(Self { tags })
    }

    pub fn tag(&self, quantity: Quantity) -> &str {
        self.tags
            .get(&quantity)
            .map(String::as_str)
            .unwrap_or(quantity.canonical_tag())
    }

    pub fn factor(&self, quantity: Quantity) -> f64 {
        // tags are checked on construction
        quantity.factor(self.tag(quantity)).unwrap_or(1.0)
    }

    /// Explicitly declared tags in key order.
    pub fn declared(&self) -> impl Iterator<Item = (Quantity, &str)> + '_ {
        self.tags.iter().map(|(q, t)| (*q, t.as_str()))
    }

    pub fn is_canonical(&self) -> bool {
        Quantity::ALL.iter().all(|&q| self.factor(q) == 1.0)
    }
}
