//! Raw multi-rate logs to a synchronized, filtered and segmented dataset.

mod dataset;
mod geo;
mod pwm;
mod resample;
mod savgol;
mod velocity;

pub use dataset::*;
pub use geo::*;
pub use pwm::*;
pub use resample::*;
pub use savgol::*;
pub use velocity::*;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::model::{unwrap_angles, InertiaLayout, Pose, PwmFrame};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GnssFix {
    pub t: f64,
    pub lat: f64,
    pub lon: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeadingSample {
    pub t: f64,
    pub psi: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PwmSample {
    pub t: f64,
    pub pwm_l: f64,
    pub pwm_r: f64,
}

/// The three sensor streams as logged.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RawLogBundle {
    pub gnss: Vec<GnssFix>,
    pub heading: Vec<HeadingSample>,
    pub pwm: Vec<PwmSample>,
}

impl RawLogBundle {
    pub fn validate(&self) -> Result<()> {
        check_stream("gnss", self.gnss.iter().map(|s| s.t))?;
        check_stream("heading", self.heading.iter().map(|s| s.t))?;
        check_stream("pwm", self.pwm.iter().map(|s| s.t))
    }
}

fn check_stream(name: &str, t: impl Iterator<Item = f64>) -> Result<()> {
    let mut prev: Option<f64> = None;
    for (i, t) in t.enumerate() {
        if !t.is_finite() {
            return Err(invalid(format!("{name} timestamp {i} is not finite")));
        }
        if let Some(p) = prev {
            if t <= p {
                return Err(invalid(format!(
                    "{name} timestamps not strictly increasing at sample {i}"
                )));
            }
        }
        prev = Some(t);
    }
    if prev.is_none() {
        return Err(invalid(format!("{name} stream is empty")));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PrepConfig {
    pub h: f64,
    pub savgol: SavGolConfig,
    /// Samples past the newest backward difference at which the causal
    /// smoother is evaluated.
    pub velocity_lead: f64,
    /// Segment break threshold in sampling periods.
    pub gap_factor: f64,
    pub pwm: PwmMap,
    pub position_fit: ResampleSpec,
    pub heading_fit: ResampleSpec,
    pub pwm_fit: ResampleSpec,
    pub min_segment_len: usize,
}

impl Default for PrepConfig {
    fn default() -> Self {
        Self {
            h: InertiaLayout::DEFAULT_H,
            savgol: SavGolConfig::default(),
            velocity_lead: 0.5,
            gap_factor: 3.0,
            pwm: PwmMap::default(),
            position_fit: ResampleSpec::CUBIC,
            heading_fit: ResampleSpec::HEADING,
            pwm_fit: ResampleSpec::CUBIC,
            min_segment_len: 2,
        }
    }
}

impl PrepConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(invalid("sampling period must be positive"));
        }
        if !(self.gap_factor > 1.0 && self.gap_factor.is_finite()) {
            return Err(invalid("gap factor must exceed 1"));
        }
        if !self.velocity_lead.is_finite() {
            return Err(invalid("velocity lead must be finite"));
        }
        self.savgol.validate()?;
        self.pwm.validate()?;
        self.position_fit.validate()?;
        self.heading_fit.validate()?;
        self.pwm_fit.validate()
    }

    pub fn gap(&self) -> f64 {
        self.gap_factor * self.h
    }
}

/// Prepared dataset plus bookkeeping from the pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct PrepReport {
    pub dataset: PreparedDataset,
    pub grid_points: usize,
    pub flagged_pwm: usize,
    pub dropped_segments: usize,
}

/// Full pipeline; see [`prepare`].
pub fn build_prepared_dataset(
    raw: &RawLogBundle,
    geo: &GeoReference,
    cfg: &PrepConfig,
) -> Result<PreparedDataset> {
    Ok(prepare(raw, geo, cfg)?.dataset)
}

/// Projects GNSS to NED, resamples every stream causally on an h-grid
/// anchored at the first fix, moves the antenna to the body origin,
/// differentiates to body velocities and splits into segments wherever
/// any value is missing.
pub fn prepare(raw: &RawLogBundle, geo: &GeoReference, cfg: &PrepConfig) -> Result<PrepReport> {
    raw.validate()?;
    cfg.validate()?;
    let h = cfg.h;
    let gap = cfg.gap();
    let t0 = raw.gnss[0].t;
    let t_end = raw.gnss[raw.gnss.len() - 1].t;
    let n = ((t_end - t0) / h + 1e-9).floor() as usize + 1;
    let grid: Vec<f64> = (0..n).map(|k| t0 + k as f64 * h).collect();

    let gt: Vec<f64> = raw.gnss.iter().map(|s| s.t).collect();
    let mut north = Vec::with_capacity(gt.len());
    let mut east = Vec::with_capacity(gt.len());
    for s in &raw.gnss {
        let (x, y) = geodetic_to_ned(s.lat, s.lon, geo)?;
        north.push(x);
        east.push(y);
    }
    let ht: Vec<f64> = raw.heading.iter().map(|s| s.t).collect();
    let psi = unwrap_angles(&raw.heading.iter().map(|s| s.psi).collect::<Vec<_>>());

    let mut flagged = 0usize;
    let (mut pt, mut pl, mut pr) = (Vec::new(), Vec::new(), Vec::new());
    for s in &raw.pwm {
        match (
            normalize_pwm(s.pwm_l, &cfg.pwm).valid(),
            normalize_pwm(s.pwm_r, &cfg.pwm).valid(),
        ) {
            (Some(l), Some(r)) => {
                pt.push(s.t);
                pl.push(l);
                pr.push(r);
            }
            _ => flagged += 1,
        }
    }
    if flagged > 0 {
        log::warn!("{flagged} PWM samples out of range were dropped");
    }

    let x_g = resample_causal(&gt, &north, &grid, cfg.position_fit, gap)?;
    let y_g = resample_causal(&gt, &east, &grid, cfg.position_fit, gap)?;
    let psi_g = resample_causal(&ht, &psi, &grid, cfg.heading_fit, gap)?;
    let l_g = resample_causal(&pt, &pl, &grid, cfg.pwm_fit, gap)?;
    let r_g = resample_causal(&pt, &pr, &grid, cfg.pwm_fit, gap)?;

    let mut runs: Vec<Vec<(usize, Pose, PwmFrame)>> = Vec::new();
    let mut current = Vec::new();
    for k in 0..n {
        let v = match (x_g[k], y_g[k], psi_g[k], l_g[k], r_g[k]) {
            (Some(x), Some(y), Some(psi), Some(l), Some(r)) => {
                let (bx, by) = lever_arm_correct((x, y), psi, geo.antenna_offset);
                Some((
                    k,
                    Pose { x: bx, y: by, psi },
                    PwmFrame::new(l.clamp(-1.0, 1.0), r.clamp(-1.0, 1.0))?,
                ))
            }
            _ => None,
        };
        match v {
            Some(v) => current.push(v),
            None if !current.is_empty() => runs.push(std::mem::take(&mut current)),
            None => {}
        }
    }
    if !current.is_empty() {
        runs.push(current);
    }

    let processed: Vec<Option<Vec<PreparedSample>>> = runs
        .par_iter()
        .map(|run| -> Result<Option<Vec<PreparedSample>>> {
            if run.len() < 2 {
                return Ok(None);
            }
            let poses: Vec<Pose> = run.iter().map(|r| r.1).collect();
            let vel = body_velocities_from_pose(&poses, h, &cfg.savgol, cfg.velocity_lead)?;
            let seg: Vec<PreparedSample> = run
                .iter()
                .zip(vel)
                .filter_map(|(&(k, pose, frame), nu)| {
                    nu.map(|nu| PreparedSample {
                        t: grid[k],
                        k: k as i64,
                        nu,
                        frame,
                        pose,
                    })
                })
                .collect();
            Ok((seg.len() >= cfg.min_segment_len.max(1)).then_some(seg))
        })
        .collect::<Result<_>>()?;
    let dropped = processed.iter().filter(|s| s.is_none()).count();
    if dropped > 0 {
        log::warn!("{dropped} segments too short after warm-up were dropped");
    }
    let segments: Vec<Vec<PreparedSample>> = processed.into_iter().flatten().collect();
    if segments.is_empty() {
        return Err(Error::InsufficientData(
            "no usable samples after preparation".into(),
        ));
    }
    Ok(PrepReport {
        dataset: PreparedDataset::new(segments, h)?,
        grid_points: n,
        flagged_pwm: flagged,
        dropped_segments: dropped,
    })
}
