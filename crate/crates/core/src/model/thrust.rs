use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, invalid, Result};

/// Asymmetric dead band around zero PWM.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeadZone {
    /// Forward limit, > 0.
    pub delta_f: f64,
    /// Reverse limit, < 0.
    pub delta_r: f64,
}

impl DeadZone {
    pub fn new(delta_f: f64, delta_r: f64) -> Result<Self> {
        if !(delta_f > 0.0 && delta_f.is_finite()) || !(delta_r < 0.0 && delta_r.is_finite()) {
            return Err(invalid(format!(
                "dead zone needs delta_f > 0 and delta_r < 0, got ({delta_f}, {delta_r})"
            )));
        }
        Ok(Self { delta_f, delta_r })
    }
}

/// Piecewise-quadratic static thrust map of one propeller.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ThrustStaticParams {
    pub a_f: f64,
    pub b_f: f64,
    pub a_r: f64,
    pub b_r: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dead_zone: Option<DeadZone>,
}

impl ThrustStaticParams {
    pub fn new(a_f: f64, b_f: f64, a_r: f64, b_r: f64) -> Result<Self> {
        for (name, v) in [("a_f", a_f), ("b_f", b_f), ("a_r", a_r), ("b_r", b_r)] {
            ensure_finite(name, v)?;
        }
        Ok(Self {
            a_f,
            b_f,
            a_r,
            b_r,
            dead_zone: None,
        })
    }

    pub fn with_dead_zone(mut self, dz: DeadZone) -> Self {
        self.dead_zone = Some(dz);
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("a_f", self.a_f),
            ("b_f", self.b_f),
            ("a_r", self.a_r),
            ("b_r", self.b_r),
        ] {
            ensure_finite(name, v)?;
        }
        if let Some(dz) = self.dead_zone {
            DeadZone::new(dz.delta_f, dz.delta_r)?;
        }
        Ok(())
    }
}

/// First-order lag driven by the static map.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThrustDynamicParams {
    pub alpha: f64,
    pub beta: f64,
    pub static_part: ThrustStaticParams,
}

impl ThrustDynamicParams {
    pub fn new(alpha: f64, beta: f64, static_part: ThrustStaticParams) -> Result<Self> {
        ensure_finite("alpha", alpha)?;
        ensure_finite("beta", beta)?;
        static_part.validate()?;
        Ok(Self {
            alpha,
            beta,
            static_part,
        })
    }

    pub fn is_stable(&self) -> bool {
        self.alpha < 1.0
    }
}

/// Static thrust for a normalized PWM command.
pub fn thrust_static(delta: f64, p: &ThrustStaticParams) -> Result<f64> {
    ensure_finite("delta", delta)?;
    if !(-1.0..=1.0).contains(&delta) {
        return Err(invalid(format!("delta = {delta} outside [-1, 1]")));
    }
    Ok(match p.dead_zone {
        None if delta >= 0.0 => p.a_f * delta * delta + p.b_f * delta,
        None => p.a_r * delta * delta + p.b_r * delta,
        Some(dz) if delta >= dz.delta_f => {
            let s = delta - dz.delta_f;
            p.a_f * s * s + p.b_f * s
        }
        Some(dz) if delta <= dz.delta_r => {
            let s = delta - dz.delta_r;
            p.a_r * s * s + p.b_r * s
        }
        Some(_) => 0.0,
    })
}

/// One step of the first-order thrust lag: `α T(k−1) + β T_st(δ(k−1))`.
pub fn thrust_dynamic_step(t_prev: f64, delta_prev: f64, p: &ThrustDynamicParams) -> Result<f64> {
    ensure_finite("t_prev", t_prev)?;
    Ok(p.alpha * t_prev + p.beta * thrust_static(delta_prev, &p.static_part)?)
}

/// Surge force and yaw torque of a symmetric twin-thruster layout.
pub fn force_torque_from_thrusts(t_l: f64, t_r: f64, d: f64) -> Result<(f64, f64)> {
    ensure_finite("t_l", t_l)?;
    ensure_finite("t_r", t_r)?;
    ensure_finite("d", d)?;
    Ok((t_l + t_r, 0.5 * d * (t_l - t_r)))
}
