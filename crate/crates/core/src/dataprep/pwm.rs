use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, invalid, Result};

/// Affine PWM normalization `(pwm − neutral) / half_span`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PwmMap {
    /// μs.
    pub neutral: f64,
    /// μs from neutral to either endpoint.
    pub half_span: f64,
    /// Overshoot beyond an endpoint, as a fraction of `half_span`, above
    /// which a sample is flagged instead of clamped.
    pub tolerance: f64,
}

impl Default for PwmMap {
    fn default() -> Self {
        Self {
            neutral: 1500.0,
            half_span: 400.0,
            tolerance: 0.05,
        }
    }
}

impl PwmMap {
    pub fn validate(&self) -> Result<()> {
        ensure_finite("PWM neutral", self.neutral)?;
        if !(self.half_span > 0.0 && self.half_span.is_finite()) {
            return Err(invalid("PWM half span must be positive"));
        }
        if !(self.tolerance >= 0.0 && self.tolerance.is_finite()) {
            return Err(invalid("PWM tolerance must be non-negative"));
        }
        Ok(())
    }

    /// μs value of a normalized command.
    pub fn denormalize(&self, delta: f64) -> f64 {
        self.neutral + self.half_span * delta
    }
}

/// Outcome of normalizing one PWM reading.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PwmReading {
    Valid(f64),
    /// Further out of range than the tolerance allows; carries the raw
    /// normalized value.
    Flagged(f64),
}

impl PwmReading {
    pub fn valid(self) -> Option<f64> {
        match self {
            PwmReading::Valid(d) => Some(d),
            PwmReading::Flagged(_) => None,
        }
    }
}

pub fn normalize_pwm(pwm_us: f64, map: &PwmMap) -> PwmReading {
    let d = (pwm_us - map.neutral) / map.half_span;
    if !d.is_finite() || d.abs() > 1.0 + map.tolerance {
        PwmReading::Flagged(d)
    } else {
        PwmReading::Valid(d.clamp(-1.0, 1.0))
    }
}
