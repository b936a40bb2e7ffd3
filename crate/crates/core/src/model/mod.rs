//! Vessel-level domain types: body velocities, poses, PWM frames, thrust
//! models and the input-gain maps built on top of identified parameters.
//!
//! Conventions: the body frame is forward-starboard-down, the inertial frame
//! is local NED, and headings are kept unwrapped so they can be
//! differentiated directly. Trigonometry is insensitive to the wrap.

mod gain;
mod params;
mod region;
mod thrust;

pub use gain::{
    input_gain_dynamic_step, input_gain_static_p, input_gain_static_u, DynamicGainParams,
};
pub use params::{
    DynamicSurgeParams, DynamicSwayYawParams, StaticSurgeParams, StaticSwayYawParams,
};
pub use region::{classify_region, OperatingRegion, PwmFrame};
pub use thrust::{
    force_torque_from_thrusts, thrust_dynamic_step, thrust_static, DeadZone, ThrustDynamicParams,
    ThrustStaticParams,
};

use nalgebra::{Matrix2, Matrix3, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, invalid, Result};

/// Body-frame velocity `[u v r]`: surge and sway in m/s, yaw rate in rad/s.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BodyVelocity {
    pub u: f64,
    pub v: f64,
    pub r: f64,
}

impl BodyVelocity {
    pub const ZERO: Self = Self {
        u: 0.0,
        v: 0.0,
        r: 0.0,
    };

    pub fn new(u: f64, v: f64, r: f64) -> Result<Self> {
        ensure_finite("u", u)?;
        ensure_finite("v", v)?;
        ensure_finite("r", r)?;
        Ok(Self { u, v, r })
    }

    pub fn component(&self, axis: Axis) -> f64 {
        match axis {
            Axis::Surge => self.u,
            Axis::Sway => self.v,
            Axis::Yaw => self.r,
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.u, self.v, self.r]
    }

    pub fn norm(&self) -> f64 {
        (self.u * self.u + self.v * self.v + self.r * self.r).sqrt()
    }
}

/// Planar pose in the local NED frame. `psi` is unwrapped.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Pose {
    pub x: f64,
    pub y: f64,
    pub psi: f64,
}

/// The three velocity components, each identified by its own regression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    #[serde(rename = "u")]
    Surge,
    #[serde(rename = "v")]
    Sway,
    #[serde(rename = "r")]
    Yaw,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::Surge, Axis::Sway, Axis::Yaw];

    pub fn symbol(self) -> &'static str {
        match self {
            Axis::Surge => "u",
            Axis::Sway => "v",
            Axis::Yaw => "r",
        }
    }

    pub fn index(self) -> usize {
        match self {
            Axis::Surge => 0,
            Axis::Sway => 1,
            Axis::Yaw => 2,
        }
    }
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Static (memoryless) or first-order dynamic propeller model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Static,
    Dynamic,
}

impl ModelKind {
    /// Parameter count of the regression for `axis`.
    pub fn param_count(self, axis: Axis) -> usize {
        match (self, axis) {
            (ModelKind::Static, Axis::Surge) => 7,
            (ModelKind::Static, _) => 13,
            (ModelKind::Dynamic, Axis::Surge) => 11,
            (ModelKind::Dynamic, _) => 21,
        }
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ModelKind::Static => "static",
            ModelKind::Dynamic => "dynamic",
        })
    }
}

impl std::str::FromStr for ModelKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "static" => Ok(ModelKind::Static),
            "dynamic" => Ok(ModelKind::Dynamic),
            other => Err(invalid(format!("unknown model kind '{other}'"))),
        }
    }
}

/// The inverse-inertia entries that scale thrust into per-step velocity
/// increments, together with the propeller separation and sampling period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InertiaLayout {
    /// M⁻¹(1,1), 1/kg
    pub m11_inv: f64,
    /// M⁻¹(2,3), 1/(kg m)
    pub m23_inv: f64,
    /// M⁻¹(3,3), 1/(kg m²)
    pub m33_inv: f64,
    /// Distance between the propellers, m.
    pub d: f64,
    /// Sampling period, s.
    pub h: f64,
}

impl InertiaLayout {
    pub const DEFAULT_H: f64 = 0.2;

    pub fn new(m11_inv: f64, m23_inv: f64, m33_inv: f64, d: f64, h: f64) -> Result<Self> {
        for (name, value) in [
            ("m11_inv", m11_inv),
            ("m23_inv", m23_inv),
            ("m33_inv", m33_inv),
        ] {
            ensure_finite(name, value)?;
        }
        if !(h > 0.0 && h.is_finite()) {
            return Err(invalid(format!(
                "sampling period must be positive, got {h}"
            )));
        }
        if !(d > 0.0 && d.is_finite()) {
            return Err(invalid(format!(
                "propeller separation must be positive, got {d}"
            )));
        }
        Ok(Self {
            m11_inv,
            m23_inv,
            m33_inv,
            d,
            h,
        })
    }

    /// Per-step input gains `[G_u, G_v, G_r]` for a force/torque pair.
    pub fn input_gains(&self, force: f64, torque: f64) -> [f64; 3] {
        [
            self.h * self.m11_inv * force,
            self.h * self.m23_inv * torque,
            self.h * self.m33_inv * torque,
        ]
    }
}

/// Planar rotation from body to inertial frame, padded to 3-DOF.
pub fn rotation_matrix(psi: f64) -> Result<Matrix3<f64>> {
    ensure_finite("psi", psi)?;
    let (s, c) = psi.sin_cos();
    Ok(Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0))
}

/// Upper-left 2x2 block of [`rotation_matrix`].
pub fn rotation2(psi: f64) -> Matrix2<f64> {
    let (s, c) = psi.sin_cos();
    Matrix2::new(c, -s, s, c)
}

/// Rotates an inertial-frame planar vector into the body frame.
pub fn to_body(psi: f64, north: f64, east: f64) -> (f64, f64) {
    let b = rotation2(psi).transpose() * Vector2::new(north, east);
    (b.x, b.y)
}

/// Wraps an angle to (-π, π].
pub fn wrap_angle(psi: f64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let mut a = psi.rem_euclid(TAU);
    if a > PI {
        a -= TAU;
    }
    a
}

/// Removes 2π jumps between consecutive samples.
pub fn unwrap_angles(angles: &[f64]) -> Vec<f64> {
    use std::f64::consts::{PI, TAU};
    let mut out = Vec::with_capacity(angles.len());
    let mut offset = 0.0;
    let mut prev: Option<f64> = None;
    for &a in angles {
        if let Some(p) = prev {
            let jump = a - p;
            if jump > PI {
                offset -= TAU * ((jump + PI) / TAU).floor();
            } else if jump < -PI {
                offset += TAU * ((-jump + PI) / TAU).floor();
            }
        }
        out.push(a + offset);
        prev = Some(a);
    }
    out
}
