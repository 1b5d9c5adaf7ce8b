//! Flight emission model.
//!
//! Each flight segment is priced as `(distance + detour) × band factor ×
//! cabin multiplier`, where the band is chosen by the detoured distance.
//! Bands are half-open: a distance exactly on an edge belongs to the band
//! above it.
//!
//! The defaults are rough economy-class factors in the range of published
//! aviation emission factors (short, medium and long haul).

use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::geo::haversine_distance;
use crate::geodata::Airport;
use crate::records::ResolvedTraveler;

pub const DEFAULT_DETOUR_KM: f64 = 95.0;
pub const DEFAULT_BAND_EDGES_KM: [f64; 2] = [1500.0, 4000.0];
pub const DEFAULT_BAND_FACTORS: [f64; 3] = [0.251, 0.195, 0.151];

#[derive(Debug, Clone, PartialEq)]
pub struct EmissionModel {
    detour_km: f64,
    band_edges_km: Vec<f64>,
    band_factors_kg_per_km: Vec<f64>,
    cabin_multiplier: f64,
}

impl Default for EmissionModel {
    fn default() -> Self {
        EmissionModel {
            detour_km: DEFAULT_DETOUR_KM,
            band_edges_km: DEFAULT_BAND_EDGES_KM.to_vec(),
            band_factors_kg_per_km: DEFAULT_BAND_FACTORS.to_vec(),
            cabin_multiplier: 1.0,
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelConfig {
    detour_km: Option<f64>,
    band_edges_km: Option<Vec<f64>>,
    band_factors_kg_per_km: Option<Vec<f64>>,
    cabin_multiplier: Option<f64>,
}

impl EmissionModel {
    pub fn new(
        detour_km: f64,
        band_edges_km: Vec<f64>,
        band_factors_kg_per_km: Vec<f64>,
        cabin_multiplier: f64,
    ) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidModel(msg));
        if !(detour_km.is_finite() && detour_km >= 0.0) {
            return bad(format!("detour_km must be a non-negative number, got {detour_km}"));
        }
        if band_factors_kg_per_km.len() != band_edges_km.len() + 1 {
            return bad(format!(
                "{} band edges need {} factors, got {}",
                band_edges_km.len(),
                band_edges_km.len() + 1,
                band_factors_kg_per_km.len()
            ));
        }
        if band_edges_km.iter().any(|e| !e.is_finite() || *e < 0.0) {
            return bad("band edges must be finite and non-negative".into());
        }
        if band_edges_km.windows(2).any(|w| w[0] >= w[1]) {
            return bad("band edges must be strictly ascending".into());
        }
        if band_factors_kg_per_km.iter().any(|f| !(f.is_finite() && *f > 0.0)) {
            return bad("band factors must be positive".into());
        }
        if !(cabin_multiplier.is_finite() && cabin_multiplier > 0.0) {
            return bad(format!("cabin_multiplier must be positive, got {cabin_multiplier}"));
        }
        Ok(EmissionModel {
            detour_km,
            band_edges_km,
            band_factors_kg_per_km,
            cabin_multiplier,
        })
    }

    /// Reads a JSON model config. Missing keys take the default value.
    pub fn from_json_str(source_name: &str, text: &str) -> Result<Self> {
        let cfg: ModelConfig = serde_json::from_str(text).map_err(|e| Error::Parse {
            source_name: source_name.to_string(),
            location: format!("line {}", e.line()),
            message: e.to_string(),
        })?;
        let d = EmissionModel::default();
        EmissionModel::new(
            cfg.detour_km.unwrap_or(d.detour_km),
            cfg.band_edges_km.unwrap_or(d.band_edges_km),
            cfg.band_factors_kg_per_km.unwrap_or(d.band_factors_kg_per_km),
            cfg.cabin_multiplier.unwrap_or(d.cabin_multiplier),
        )
    }

    /// `None` gives the defaults.
    pub fn load(path: Option<&Path>) -> Result<Self> {
        match path {
            None => Ok(EmissionModel::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
                EmissionModel::from_json_str(&p.display().to_string(), &text)
            }
        }
    }

    pub fn detour_km(&self) -> f64 {
        self.detour_km
    }

    pub fn band_edges_km(&self) -> &[f64] {
        &self.band_edges_km
    }

    pub fn band_factors_kg_per_km(&self) -> &[f64] {
        &self.band_factors_kg_per_km
    }

    pub fn cabin_multiplier(&self) -> f64 {
        self.cabin_multiplier
    }

    /// Per-km factor for a detoured distance.
    fn factor_for(&self, detoured_km: f64) -> f64 {
        let band = self.band_edges_km.partition_point(|edge| *edge <= detoured_km);
        self.band_factors_kg_per_km[band]
    }

    /// kg CO₂ for one one-way flight segment.
    pub fn segment_emissions(&self, one_way_km: f64) -> f64 {
        if one_way_km <= 0.0 {
            return 0.0;
        }
        let detoured = one_way_km + self.detour_km;
        detoured * self.factor_for(detoured) * self.cabin_multiplier
    }

    /// One-way itinerary made of several legs, each priced as its own flight.
    pub fn multi_segment_emissions(&self, leg_distances_km: &[f64]) -> f64 {
        leg_distances_km.iter().map(|d| self.segment_emissions(*d)).sum()
    }

    /// Round-trip kg CO₂ for a direct flight between two airports.
    pub fn round_trip_kg(&self, origin: &Airport, destination: &Airport) -> f64 {
        2.0 * self.segment_emissions(haversine_distance(origin.location, destination.location))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trip {
    pub paper_id: String,
    pub origin: Airport,
    pub destination: Airport,
    pub one_way_km: f64,
    pub round_trip_co2_kg: f64,
}

pub fn trip_for(model: &EmissionModel, traveler: &ResolvedTraveler, venue_airport: &Airport) -> Trip {
    let one_way_km = haversine_distance(traveler.origin_airport.location, venue_airport.location);
    Trip {
        paper_id: traveler.paper_id.clone(),
        origin: traveler.origin_airport.clone(),
        destination: venue_airport.clone(),
        one_way_km,
        round_trip_co2_kg: 2.0 * model.segment_emissions(one_way_km),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geo::GeoPoint;
    use crate::geodata::ResolutionQuality;
    use proptest::prelude::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-9 * b.abs().max(1.0)
    }

    fn airport(iata: &str, lat: f64, lon: f64) -> Airport {
        Airport {
            iata: iata.into(),
            name: iata.into(),
            city: String::new(),
            country_code: "XX".into(),
            location: GeoPoint::new(lat, lon).unwrap(),
            international: true,
        }
    }

    fn traveler(from: &Airport) -> ResolvedTraveler {
        ResolvedTraveler {
            paper_id: "p".into(),
            origin_point: from.location,
            origin_airport: from.clone(),
            resolution: ResolutionQuality::Exact,
        }
    }

    #[test]
    fn segment_examples() {
        let m = EmissionModel::default();
        assert_eq!(m.segment_emissions(0.0), 0.0);
        assert!(close(m.segment_emissions(1000.0), 274.845));
        assert!(close(m.segment_emissions(5000.0), 769.345));
        assert!(close(m.segment_emissions(2000.0), 408.525));
    }

    #[test]
    fn band_edge_belongs_to_upper_band() {
        let m = EmissionModel::default();
        // 1405 + 95 lands exactly on the 1500 km edge
        assert!(close(m.segment_emissions(1405.0), 1500.0 * 0.195));
        assert!(close(m.segment_emissions(1404.0), 1499.0 * 0.251));
        assert!(close(m.segment_emissions(3905.0), 4000.0 * 0.151));
    }

    #[test]
    fn multi_segment_examples() {
        let m = EmissionModel::default();
        assert_eq!(m.multi_segment_emissions(&[]), 0.0);
        assert!(close(m.multi_segment_emissions(&[1000.0]), 274.845));
        let two_legs = m.multi_segment_emissions(&[1000.0, 1000.0]);
        assert!(close(two_legs, 549.69));
        assert!(two_legs >= m.segment_emissions(2000.0));
    }

    #[test]
    fn same_airport_trip_is_free() {
        let m = EmissionModel::default();
        let pek = airport("PEK", 40.0801, 116.5846);
        let trip = trip_for(&m, &traveler(&pek), &pek);
        assert_eq!(trip.one_way_km, 0.0);
        assert_eq!(trip.round_trip_co2_kg, 0.0);
    }

    #[test]
    fn jfk_to_lhr_round_trip() {
        // distance oracle: 50-digit haversine evaluation = 5540.0113179765 km
        let m = EmissionModel::default();
        let jfk = airport("JFK", 40.6413, -73.7781);
        let lhr = airport("LHR", 51.4700, -0.4543);
        let trip = trip_for(&m, &traveler(&jfk), &lhr);
        assert!((trip.one_way_km - 5540.011317976542).abs() < 1e-6);
        assert!((trip.round_trip_co2_kg - 1701.7734180289158).abs() < 1e-6);
        assert_eq!(trip.round_trip_co2_kg, 2.0 * m.segment_emissions(trip.one_way_km));
    }

    #[test]
    fn thousand_km_apart_round_trip() {
        // 1000 km along the equator is 1000 / 6371 rad
        let m = EmissionModel::default();
        let a = airport("AAA", 0.0, 0.0);
        let b = airport("BBB", 0.0, (1000.0f64 / 6371.0).to_degrees());
        let trip = trip_for(&m, &traveler(&a), &b);
        assert!((trip.round_trip_co2_kg - 549.69).abs() < 1e-6);
    }

    #[test]
    fn config_defaults_and_validation() {
        let m = EmissionModel::from_json_str("m", "{}").unwrap();
        assert_eq!(m, EmissionModel::default());
        let m = EmissionModel::from_json_str("m", r#"{"cabin_multiplier": 2.0, "detour_km": 0}"#).unwrap();
        assert_eq!(m.cabin_multiplier(), 2.0);
        assert_eq!(m.detour_km(), 0.0);
        for bad in [
            r#"{"band_edges_km": [4000, 1500]}"#,
            r#"{"band_factors_kg_per_km": [0.2, 0.1]}"#,
            r#"{"band_factors_kg_per_km": [0.2, 0.0, 0.1]}"#,
            r#"{"cabin_multiplier": 0}"#,
            r#"{"detour_km": -1}"#,
        ] {
            assert!(matches!(EmissionModel::from_json_str("m", bad), Err(Error::InvalidModel(_))), "{bad}");
        }
        assert!(matches!(EmissionModel::from_json_str("m", r#"{"detour": 1}"#), Err(Error::Parse { .. })));
    }

    proptest! {
        #[test]
        fn positive_and_increasing_within_band(d in 0.001f64..20_000.0, step in 0.001f64..50.0) {
            let m = EmissionModel::default();
            let e = m.segment_emissions(d);
            prop_assert!(e > 0.0);
            let (da, db) = (d + m.detour_km(), d + step + m.detour_km());
            let same_band = m.band_edges_km().iter().all(|edge| (da < *edge) == (db < *edge));
            if same_band {
                prop_assert!(m.segment_emissions(d + step) > e);
            }
        }

        #[test]
        fn cabin_multiplier_is_linear(d in 0.0f64..20_000.0) {
            let base = EmissionModel::default();
            let doubled = EmissionModel::new(95.0, vec![1500.0, 4000.0], vec![0.251, 0.195, 0.151], 2.0).unwrap();
            prop_assert_eq!(doubled.segment_emissions(d), 2.0 * base.segment_emissions(d));
        }
    }
}
