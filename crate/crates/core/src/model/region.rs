use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, invalid, Result};

/// Rotation sense of the left then right propeller.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OperatingRegion {
    FF,
    FR,
    RF,
    RR,
}

impl OperatingRegion {
    pub const ALL: [OperatingRegion; 4] = [Self::FF, Self::FR, Self::RF, Self::RR];

    /// Sign applied to the left/right-asymmetric thrust columns: zero when
    /// both propellers share a branch, `+1` for FR and `-1` for RF.
    pub fn asymmetry_sign(self) -> f64 {
        match self {
            Self::FR => 1.0,
            Self::RF => -1.0,
            Self::FF | Self::RR => 0.0,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::FF => "FF",
            Self::FR => "FR",
            Self::RF => "RF",
            Self::RR => "RR",
        }
    }
}

impl std::fmt::Display for OperatingRegion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for OperatingRegion {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "FF" => Ok(Self::FF),
            "FR" => Ok(Self::FR),
            "RF" => Ok(Self::RF),
            "RR" => Ok(Self::RR),
            other => Err(invalid(format!("unknown operating region '{other}'"))),
        }
    }
}

fn check_unit(name: &str, delta: f64) -> Result<()> {
    ensure_finite(name, delta)?;
    if !(-1.0..=1.0).contains(&delta) {
        return Err(invalid(format!("{name} = {delta} outside [-1, 1]")));
    }
    Ok(())
}

/// Classifies a PWM pair by sign. Zero counts as forward.
pub fn classify_region(delta_l: f64, delta_r: f64) -> Result<OperatingRegion> {
    check_unit("delta_l", delta_l)?;
    check_unit("delta_r", delta_r)?;
    Ok(match (delta_l >= 0.0, delta_r >= 0.0) {
        (true, true) => OperatingRegion::FF,
        (true, false) => OperatingRegion::FR,
        (false, true) => OperatingRegion::RF,
        (false, false) => OperatingRegion::RR,
    })
}

/// Normalized left/right PWM with the derived mean, difference and region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PwmFrame {
    delta_l: f64,
    delta_r: f64,
    delta_mean: f64,
    delta_diff: f64,
    region: OperatingRegion,
}

impl PwmFrame {
    pub const NEUTRAL: PwmFrame = PwmFrame {
        delta_l: 0.0,
        delta_r: 0.0,
        delta_mean: 0.0,
        delta_diff: 0.0,
        region: OperatingRegion::FF,
    };

    pub fn new(delta_l: f64, delta_r: f64) -> Result<Self> {
        let region = classify_region(delta_l, delta_r)?;
        Ok(Self {
            delta_l,
            delta_r,
            delta_mean: 0.5 * (delta_l + delta_r),
            delta_diff: delta_l - delta_r,
            region,
        })
    }

    /// Builds a frame from mean and difference. The stored mean and
    /// difference are the given values, so regressors see them exactly.
    pub fn from_mean_diff(delta_mean: f64, delta_diff: f64) -> Result<Self> {
        ensure_finite("delta_mean", delta_mean)?;
        ensure_finite("delta_diff", delta_diff)?;
        let delta_l = delta_mean + 0.5 * delta_diff;
        let delta_r = delta_mean - 0.5 * delta_diff;
        let region = classify_region(delta_l, delta_r)?;
        Ok(Self {
            delta_l,
            delta_r,
            delta_mean,
            delta_diff,
            region,
        })
    }

    pub fn delta_l(&self) -> f64 {
        self.delta_l
    }

    pub fn delta_r(&self) -> f64 {
        self.delta_r
    }

    pub fn delta_mean(&self) -> f64 {
        self.delta_mean
    }

    pub fn delta_diff(&self) -> f64 {
        self.delta_diff
    }

    pub fn region(&self) -> OperatingRegion {
        self.region
    }

    /// `δ̄² + Δδ²/4`, the common quadratic thrust monomial.
    pub fn quadratic_term(&self) -> f64 {
        self.delta_mean * self.delta_mean + 0.25 * self.delta_diff * self.delta_diff
    }
}

impl Default for PwmFrame {
    fn default() -> Self {
        Self::NEUTRAL
    }
}
