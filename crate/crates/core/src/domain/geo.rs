use thiserror::Error;

use super::Location;

pub const EARTH_RADIUS_KM: f64 = 6371.0;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("no distance available from {from} to {to}: no explicit entry and missing location")]
pub struct DistanceError {
    pub from: String,
    pub to: String,
}

/// Haversine distance on a sphere of radius [`EARTH_RADIUS_KM`].
pub fn great_circle_km(a: Location, b: Location) -> f64 {
    let (lat1, lat2) = (a.lat.to_radians(), b.lat.to_radians());
    let dlat = lat2 - lat1;
    let dlon = (b.lon - a.lon).to_radians();
    let h = (dlat / 2.0).sin().powi(2) + lat1.cos() * lat2.cos() * (dlon / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_KM * h.sqrt().min(1.0).asin()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loc(lat: f64, lon: f64) -> Location {
        Location { lat, lon }
    }

    #[test]
    fn quarter_equator() {
        // R·π/2
        let d = great_circle_km(loc(0.0, 0.0), loc(0.0, 90.0));
        assert!((d - 10007.54).abs() < 0.01, "{d}");
    }

    #[test]
    fn same_point_is_zero() {
        assert_eq!(great_circle_km(loc(35.7, 139.7), loc(35.7, 139.7)), 0.0);
    }

    #[test]
    fn symmetric() {
        let a = loc(43.06, 141.35);
        let b = loc(33.59, 130.40);
        assert_eq!(great_circle_km(a, b), great_circle_km(b, a));
    }

    #[test]
    fn antipodes() {
        let d = great_circle_km(loc(0.0, 0.0), loc(0.0, 180.0));
        assert!((d - EARTH_RADIUS_KM * std::f64::consts::PI).abs() < 1e-6);
    }
}
