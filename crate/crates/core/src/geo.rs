//! Spherical geodesy.

use std::fmt;

/// Mean Earth radius used for every distance in the crate.
pub const EARTH_RADIUS_KM: f64 = 6371.0;

/// A latitude/longitude position in degrees.
///
/// Latitude is checked to lie in `[-90, 90]`; longitude is wrapped into
/// `(-180, 180]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoPoint {
    lat: f64,
    lon: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, thiserror::Error)]
pub enum CoordError {
    #[error("latitude {0} outside [-90, 90]")]
    Latitude(f64),
    #[error("non-finite longitude {0}")]
    Longitude(f64),
}

impl GeoPoint {
    pub fn new(lat: f64, lon: f64) -> Result<Self, CoordError> {
        if !(-90.0..=90.0).contains(&lat) {
            return Err(CoordError::Latitude(lat));
        }
        if !lon.is_finite() {
            return Err(CoordError::Longitude(lon));
        }
        Ok(GeoPoint {
            lat,
            lon: normalize_lon(lon),
        })
    }

    pub fn lat(&self) -> f64 {
        self.lat
    }

    pub fn lon(&self) -> f64 {
        self.lon
    }
}

impl fmt::Display for GeoPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.lat, self.lon)
    }
}

fn normalize_lon(lon: f64) -> f64 {
    if lon > -180.0 && lon <= 180.0 {
        return lon;
    }
    let wrapped = (lon + 180.0).rem_euclid(360.0) - 180.0;
    if wrapped <= -180.0 {
        wrapped + 360.0
    } else {
        wrapped
    }
}

/// Central angle between two points, in radians.
///
/// The haversine terms are built from `|Δφ|` and `|Δλ|` and the cosine
/// product is commutative, so swapping the arguments yields the same bits.
pub fn central_angle(a: GeoPoint, b: GeoPoint) -> f64 {
    let (lat_a, lat_b) = (a.lat.to_radians(), b.lat.to_radians());
    let dlat = (a.lat - b.lat).abs().to_radians();
    let dlon = (a.lon - b.lon).abs().to_radians();
    let sin_dlat = (dlat / 2.0).sin();
    let sin_dlon = (dlon / 2.0).sin();
    let h = sin_dlat * sin_dlat + lat_a.cos() * lat_b.cos() * sin_dlon * sin_dlon;
    2.0 * h.clamp(0.0, 1.0).sqrt().asin()
}

/// Great-circle distance in kilometres on a sphere of radius
/// [`EARTH_RADIUS_KM`].
pub fn haversine_distance(a: GeoPoint, b: GeoPoint) -> f64 {
    EARTH_RADIUS_KM * central_angle(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(lat: f64, lon: f64) -> GeoPoint {
        GeoPoint::new(lat, lon).unwrap()
    }

    #[test]
    fn identical_points_are_zero() {
        assert_eq!(haversine_distance(p(0.0, 0.0), p(0.0, 0.0)), 0.0);
    }

    #[test]
    fn antipodal_equator() {
        let d = haversine_distance(p(0.0, 0.0), p(0.0, 180.0));
        assert!((d - std::f64::consts::PI * 6371.0).abs() < 1e-9);
        assert!((d - 20015.09).abs() < 0.01);
    }

    #[test]
    fn poles_ignore_longitude() {
        assert!(haversine_distance(p(90.0, 0.0), p(90.0, 123.0)) < 1e-9);
        assert!(haversine_distance(p(-90.0, -45.0), p(-90.0, 170.0)) < 1e-9);
    }

    #[test]
    fn latitude_out_of_range_is_rejected() {
        assert_eq!(GeoPoint::new(90.5, 0.0), Err(CoordError::Latitude(90.5)));
        assert!(GeoPoint::new(f64::NAN, 0.0).is_err());
        assert!(GeoPoint::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn longitude_wraps_into_half_open_range() {
        assert_eq!(p(0.0, 180.0).lon(), 180.0);
        assert_eq!(p(0.0, -180.0).lon(), 180.0);
        assert_eq!(p(0.0, 190.0).lon(), -170.0);
        assert_eq!(p(0.0, 540.0).lon(), 180.0);
        assert_eq!(p(0.0, -190.0).lon(), 170.0);
        assert_eq!(p(0.0, 360.0).lon(), 0.0);
    }

    fn point() -> impl Strategy<Value = GeoPoint> {
        (-90.0f64..=90.0, -180.0f64..=180.0).prop_map(|(lat, lon)| p(lat, lon))
    }

    proptest! {
        #[test]
        fn symmetric_and_bounded(a in point(), b in point()) {
            let ab = haversine_distance(a, b);
            prop_assert_eq!(ab.to_bits(), haversine_distance(b, a).to_bits());
            prop_assert!(ab >= 0.0);
            prop_assert!(ab <= std::f64::consts::PI * EARTH_RADIUS_KM);
        }

        #[test]
        fn longitude_wrap_invariant(lat in -90.0f64..=90.0, lon in -180.0f64..180.0, x in point()) {
            let d0 = haversine_distance(p(lat, lon), x);
            let d1 = haversine_distance(p(lat, lon + 360.0), x);
            prop_assert!((d0 - d1).abs() < 1e-6);
        }
    }
}
