use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::{lumped_static_gains, DisturbanceMode, Excitation, GroundTruth, ThrustModel};
use crate::dataprep::{PreparedDataset, PreparedSample};
use crate::error::{invalid, Error, Result};
use crate::model::{BodyVelocity, Pose};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteGenConfig {
    /// Samples per segment.
    pub steps: usize,
    pub segments: usize,
    pub initial_nu: BodyVelocity,
    pub excitation: Excitation,
    /// Standard deviation of additive measurement noise on `u, v, r`.
    pub noise_std: [f64; 3],
    pub disturbance: DisturbanceMode,
    /// Initial input gain of the first-order propeller model.
    pub initial_gain: [f64; 3],
    pub seed: u64,
    /// `‖ν‖` above which generation stops with an error.
    pub divergence_bound: f64,
}

impl Default for DiscreteGenConfig {
    fn default() -> Self {
        Self {
            steps: 5000,
            segments: 1,
            initial_nu: BodyVelocity::ZERO,
            excitation: Excitation::prbs(1),
            noise_std: [0.0; 3],
            disturbance: DisturbanceMode::FullFossen,
            initial_gain: [0.0; 3],
            seed: 0,
            divergence_bound: 50.0,
        }
    }
}

/// Iterates `ν(k+1) = ν(k) + G(k) + h σ(ν(k))` with quasi-quadratic `σ`
/// and the lumped per-step input gain, so the data lie exactly in the
/// identified model class. With a first-order propeller the gain follows
/// `G(k) = α G(k−1) + β G_st(k−1)`. Poses are integrated with forward
/// Euler; measurement noise is added to the stored velocities only.
pub fn generate_discrete(gt: &GroundTruth, cfg: &DiscreteGenConfig) -> Result<PreparedDataset> {
    gt.validate()?;
    if cfg.steps < 3 {
        return Err(invalid("the discrete generator needs at least 3 steps"));
    }
    if cfg.segments == 0 {
        return Err(invalid("the discrete generator needs at least one segment"));
    }
    if cfg.noise_std.iter().any(|s| !(*s >= 0.0 && s.is_finite())) {
        return Err(invalid(
            "noise standard deviations must be finite and non-negative",
        ));
    }
    let q = cfg.disturbance.coefficients(gt)?;
    let layout = gt.layout()?;
    let thrust = gt.thrust.static_part();
    let h = gt.h;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let noise: Vec<Option<Normal<f64>>> = cfg
        .noise_std
        .iter()
        .map(|&s| {
            if s > 0.0 {
                Normal::new(0.0, s).ok()
            } else {
                None
            }
        })
        .collect();

    let mut segments = Vec::with_capacity(cfg.segments);
    let mut k_global: i64 = 0;
    for seg_id in 0..cfg.segments {
        let t0 = k_global as f64 * h;
        let frames = cfg.excitation.frames(cfg.steps, h, t0, seg_id as u64)?;
        let mut nu = cfg.initial_nu;
        let mut pose = Pose::default();
        let mut gain = cfg.initial_gain;
        let mut prev_static = [0.0; 3];
        let mut seg = Vec::with_capacity(cfg.steps);
        for (i, frame) in frames.iter().enumerate() {
            let mut measured = nu;
            for (c, n) in noise.iter().enumerate() {
                if let Some(n) = n {
                    let e = n.sample(&mut rng);
                    match c {
                        0 => measured.u += e,
                        1 => measured.v += e,
                        _ => measured.r += e,
                    }
                }
            }
            seg.push(PreparedSample {
                t: k_global as f64 * h,
                k: k_global,
                nu: measured,
                frame: *frame,
                pose,
            });

            let g_static = lumped_static_gains(thrust, &layout, frame)?;
            match gt.thrust {
                ThrustModel::Static(_) => gain = g_static,
                ThrustModel::Dynamic(p) => {
                    if i > 0 {
                        for c in 0..3 {
                            gain[c] = p.alpha * gain[c] + p.beta * prev_static[c];
                        }
                    }
                }
            }
            prev_static = g_static;

            let sigma = q.sigma(&nu);
            let (s, c) = pose.psi.sin_cos();
            pose = Pose {
                x: pose.x + h * (c * nu.u - s * nu.v),
                y: pose.y + h * (s * nu.u + c * nu.v),
                psi: pose.psi + h * nu.r,
            };
            nu = BodyVelocity {
                u: nu.u + gain[0] + h * sigma[0],
                v: nu.v + gain[1] + h * sigma[1],
                r: nu.r + gain[2] + h * sigma[2],
            };
            let norm = nu.norm();
            if !(norm <= cfg.divergence_bound) {
                return Err(Error::Diverged { step: i + 1, norm });
            }
            k_global += 1;
        }
        segments.push(seg);
        // Leave a gap so segments stay distinct on the global grid.
        k_global += 5;
    }
    PreparedDataset::new(segments, h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::PwmFrame;

    #[test]
    fn zero_everything_is_zero() {
        let gt = GroundTruth {
            tau_w: [0.0; 3],
            ..GroundTruth::default()
        };
        let cfg = DiscreteGenConfig {
            steps: 50,
            excitation: Excitation::Schedule {
                frames: vec![PwmFrame::NEUTRAL],
            },
            ..DiscreteGenConfig::default()
        };
        let ds = generate_discrete(&gt, &cfg).unwrap();
        assert!(ds
            .samples()
            .all(|(_, _, s)| s.nu == BodyVelocity::ZERO && s.pose == Pose::default()));
    }

    #[test]
    fn segments_and_grid() {
        let cfg = DiscreteGenConfig {
            steps: 40,
            segments: 3,
            ..DiscreteGenConfig::default()
        };
        let ds = generate_discrete(&GroundTruth::default(), &cfg).unwrap();
        assert_eq!(ds.segment_count(), 3);
        assert_eq!(ds.len(), 120);
        for seg in &ds.segments {
            for w in seg.windows(2) {
                assert_eq!(w[1].k, w[0].k + 1);
            }
        }
    }

    #[test]
    fn divergence_guard() {
        let cfg = DiscreteGenConfig {
            steps: 2000,
            divergence_bound: 0.5,
            ..DiscreteGenConfig::default()
        };
        assert!(matches!(
            generate_discrete(&GroundTruth::default(), &cfg),
            Err(Error::Diverged { .. })
        ));
    }
}
