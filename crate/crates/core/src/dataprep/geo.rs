use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, invalid, Result};
use crate::model::rotation2;
use nalgebra::Vector2;

/// Mean Earth radius of the spherical projection, m.
pub const EARTH_RADIUS: f64 = 6_371_000.0;

/// Origin of the local NED frame and the GNSS antenna position in the
/// body frame.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoReference {
    pub lat0: f64,
    pub lon0: f64,
    /// `[forward, starboard]` offset of the antenna from the body origin, m.
    #[serde(default)]
    pub antenna_offset: [f64; 2],
}

impl GeoReference {
    pub fn new(lat0: f64, lon0: f64, antenna_offset: [f64; 2]) -> Result<Self> {
        check_lat_lon(lat0, lon0)?;
        ensure_finite("antenna offset", antenna_offset[0])?;
        ensure_finite("antenna offset", antenna_offset[1])?;
        if lat0.abs() >= 90.0 {
            return Err(invalid("the projection origin cannot be a pole"));
        }
        Ok(Self {
            lat0,
            lon0,
            antenna_offset,
        })
    }
}

fn check_lat_lon(lat: f64, lon: f64) -> Result<()> {
    ensure_finite("latitude", lat)?;
    ensure_finite("longitude", lon)?;
    if lat.abs() > 90.0 {
        return Err(invalid(format!("latitude {lat} outside [-90, 90]")));
    }
    if lon.abs() > 180.0 {
        return Err(invalid(format!("longitude {lon} outside [-180, 180]")));
    }
    Ok(())
}

fn wrap_deg(d: f64) -> f64 {
    let mut a = (d + 180.0).rem_euclid(360.0) - 180.0;
    if a == -180.0 {
        a = 180.0;
    }
    a
}

/// Flat-earth projection about the reference: north is arc length along
/// the meridian, east is arc length along the reference parallel.
pub fn geodetic_to_ned(lat: f64, lon: f64, geo: &GeoReference) -> Result<(f64, f64)> {
    check_lat_lon(lat, lon)?;
    let x = EARTH_RADIUS * (lat - geo.lat0).to_radians();
    let y = EARTH_RADIUS * geo.lat0.to_radians().cos() * wrap_deg(lon - geo.lon0).to_radians();
    Ok((x, y))
}

/// Inverse of [`geodetic_to_ned`].
pub fn ned_to_geodetic(x: f64, y: f64, geo: &GeoReference) -> (f64, f64) {
    let lat = geo.lat0 + (x / EARTH_RADIUS).to_degrees();
    let lon = wrap_deg(geo.lon0 + (y / (EARTH_RADIUS * geo.lat0.to_radians().cos())).to_degrees());
    (lat, lon)
}

/// Moves an antenna position to the body origin: `p − R₂(ψ) offset`.
pub fn lever_arm_correct(pos: (f64, f64), psi: f64, offset: [f64; 2]) -> (f64, f64) {
    let d = rotation2(psi) * Vector2::new(offset[0], offset[1]);
    (pos.0 - d.x, pos.1 - d.y)
}

/// Antenna position of a body-origin position: `p + R₂(ψ) offset`.
pub fn lever_arm_apply(pos: (f64, f64), psi: f64, offset: [f64; 2]) -> (f64, f64) {
    let d = rotation2(psi) * Vector2::new(offset[0], offset[1]);
    (pos.0 + d.x, pos.1 + d.y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn origin_maps_to_origin() {
        let g = GeoReference::new(43.3, -2.0, [0.0, 0.0]).unwrap();
        assert_eq!(geodetic_to_ned(43.3, -2.0, &g).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn one_degree_of_latitude() {
        let g = GeoReference::new(10.0, 5.0, [0.0, 0.0]).unwrap();
        let (x, y) = geodetic_to_ned(11.0, 5.0, &g).unwrap();
        let oracle = EARTH_RADIUS * std::f64::consts::PI / 180.0;
        assert!((x - oracle).abs() < 1e-6);
        assert!((x - 111_194.93).abs() < 0.01);
        assert_eq!(y, 0.0);
    }

    #[test]
    fn equator_symmetry() {
        let g = GeoReference::new(0.0, 0.0, [0.0, 0.0]).unwrap();
        let (x, _) = geodetic_to_ned(0.5, 0.0, &g).unwrap();
        let (_, y) = geodetic_to_ned(0.0, 0.5, &g).unwrap();
        assert!((x - y).abs() < 1e-9);
    }

    #[test]
    fn invalid_latitude() {
        let g = GeoReference::new(0.0, 0.0, [0.0, 0.0]).unwrap();
        assert!(geodetic_to_ned(91.0, 0.0, &g).is_err());
        assert!(GeoReference::new(95.0, 0.0, [0.0, 0.0]).is_err());
    }

    #[test]
    fn round_trip() {
        let g = GeoReference::new(43.3, 179.99, [0.0, 0.0]).unwrap();
        let (lat, lon) = ned_to_geodetic(250.0, 1500.0, &g);
        assert!(lon < 0.0);
        let (x, y) = geodetic_to_ned(lat, lon, &g).unwrap();
        assert!((x - 250.0).abs() < 1e-6 && (y - 1500.0).abs() < 1e-6);
    }

    #[test]
    fn lever_arm_examples() {
        assert_eq!(lever_arm_correct((3.0, 4.0), 1.0, [0.0, 0.0]), (3.0, 4.0));
        assert_eq!(lever_arm_correct((3.0, 4.0), 0.0, [1.0, 0.0]), (2.0, 4.0));
        let (x, y) = lever_arm_correct((3.0, 4.0), FRAC_PI_2, [1.0, 0.0]);
        assert!((x - 3.0).abs() < 1e-15 && (y - 3.0).abs() < 1e-15);
        let back = lever_arm_correct(
            lever_arm_apply((1.0, 2.0), 0.7, [0.3, -0.1]),
            0.7,
            [0.3, -0.1],
        );
        assert!((back.0 - 1.0).abs() < 1e-15 && (back.1 - 2.0).abs() < 1e-15);
    }
}
