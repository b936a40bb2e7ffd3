use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::Trajectory;
use crate::dataprep::{
    lever_arm_apply, ned_to_geodetic, GeoReference, GnssFix, HeadingSample, PwmMap, PwmSample,
    RawLogBundle,
};
use crate::error::{invalid, Result};
use crate::model::wrap_angle;

/// Sensor rates as samples per sampling period, and measurement noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LogConfig {
    pub gnss_per_h: usize,
    pub heading_per_h: usize,
    pub pwm_per_h: usize,
    /// Per-axis GNSS position noise, m.
    pub position_std: f64,
    /// Heading noise, rad.
    pub heading_std: f64,
    pub pwm_map: PwmMap,
    pub seed: u64,
}

impl Default for LogConfig {
    fn default() -> Self {
        Self {
            gnss_per_h: 1,
            heading_per_h: 10,
            pwm_per_h: 2,
            position_std: 0.0,
            heading_std: 0.0,
            pwm_map: PwmMap::default(),
            seed: 0,
        }
    }
}

/// Samples a trajectory as the vessel's sensors would: GNSS antenna
/// position as lat/lon, wrapped heading and PWM commands in μs, each on
/// its own clock. Timestamps are `i h / rate` so that the samples which
/// fall on grid instants coincide exactly with the grid.
pub fn emit_sensor_logs(
    traj: &Trajectory,
    geo: &GeoReference,
    cfg: &LogConfig,
) -> Result<RawLogBundle> {
    for (name, per) in [
        ("gnss", cfg.gnss_per_h),
        ("heading", cfg.heading_per_h),
        ("pwm", cfg.pwm_per_h),
    ] {
        if per == 0 || !traj.substeps.is_multiple_of(per) {
            return Err(invalid(format!(
                "{name} rate of {per} per period does not divide the {} integrator substeps",
                traj.substeps
            )));
        }
    }
    if traj.steps() == 0 {
        return Err(invalid("trajectory is empty"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let pos_noise = Normal::new(0.0, cfg.position_std).map_err(|e| invalid(e.to_string()))?;
    let psi_noise = Normal::new(0.0, cfg.heading_std).map_err(|e| invalid(e.to_string()))?;
    let h = traj.h;
    let last = traj.t.len() - 1;
    let time = |i: usize, per: usize| i as f64 * h / per as f64;

    let mut gnss = Vec::new();
    let stride = traj.substeps / cfg.gnss_per_h;
    for (i, j) in (0..=last).step_by(stride).enumerate() {
        let p = traj.pose[j];
        let (mut x, mut y) = lever_arm_apply((p.x, p.y), p.psi, geo.antenna_offset);
        if cfg.position_std > 0.0 {
            x += pos_noise.sample(&mut rng);
            y += pos_noise.sample(&mut rng);
        }
        let (lat, lon) = ned_to_geodetic(x, y, geo);
        gnss.push(GnssFix {
            t: time(i, cfg.gnss_per_h),
            lat,
            lon,
        });
    }

    let mut heading = Vec::new();
    let stride = traj.substeps / cfg.heading_per_h;
    for (i, j) in (0..=last).step_by(stride).enumerate() {
        let mut psi = traj.pose[j].psi;
        if cfg.heading_std > 0.0 {
            psi += psi_noise.sample(&mut rng);
        }
        heading.push(HeadingSample {
            t: time(i, cfg.heading_per_h),
            psi: wrap_angle(psi),
        });
    }

    let mut pwm = Vec::new();
    let stride = traj.substeps / cfg.pwm_per_h;
    for (i, j) in (0..last).step_by(stride).enumerate() {
        let f = traj.frames[j / traj.substeps];
        pwm.push(PwmSample {
            t: time(i, cfg.pwm_per_h),
            pwm_l: cfg.pwm_map.denormalize(f.delta_l()),
            pwm_r: cfg.pwm_map.denormalize(f.delta_r()),
        });
    }
    Ok(RawLogBundle { gnss, heading, pwm })
}
