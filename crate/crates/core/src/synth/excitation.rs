use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::model::PwmFrame;

/// One sinusoidal component `amplitude · sin(2π f t + phase)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sine {
    pub amplitude: f64,
    pub frequency_hz: f64,
    pub phase_rad: f64,
}

impl Sine {
    fn eval(&self, t: f64) -> f64 {
        self.amplitude * (std::f64::consts::TAU * self.frequency_hz * t + self.phase_rad).sin()
    }
}

/// PWM command generator, sampled once per step `h` and held in between.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Excitation {
    /// Random switching between fixed mean and difference levels, with
    /// dwell times drawn uniformly in `[min_hold, max_hold]` steps.
    /// Pairs leaving `[-1, 1]` are clipped per propeller.
    Prbs {
        mean_levels: Vec<f64>,
        diff_levels: Vec<f64>,
        min_hold: usize,
        max_hold: usize,
        seed: u64,
    },
    /// Sums of sines on the mean and the difference.
    Smooth {
        mean_offset: f64,
        mean: Vec<Sine>,
        diff: Vec<Sine>,
    },
    /// Explicit per-step frames, repeated cyclically.
    Schedule { frames: Vec<PwmFrame> },
}

impl Excitation {
    /// The default PRBS: mean in {0.15, 0.45, 0.8}, difference in
    /// {−0.9, −0.5, 0, 0.4, 0.8}. Each of FF, FR and RF sees at least two
    /// non-proportional `(δ̄, Δδ)` pairs, which every thrust column needs.
    pub fn prbs(seed: u64) -> Self {
        Excitation::Prbs {
            mean_levels: vec![0.15, 0.45, 0.8],
            diff_levels: vec![-0.9, -0.5, 0.0, 0.4, 0.8],
            min_hold: 2,
            max_hold: 12,
            seed,
        }
    }

    /// Slow forward-biased sinusoids that visit FF, FR and RF.
    pub fn smooth() -> Self {
        Excitation::Smooth {
            mean_offset: 0.45,
            mean: vec![
                Sine {
                    amplitude: 0.2,
                    frequency_hz: 0.011,
                    phase_rad: 0.0,
                },
                Sine {
                    amplitude: 0.1,
                    frequency_hz: 0.037,
                    phase_rad: 1.0,
                },
            ],
            diff: vec![
                Sine {
                    amplitude: 0.5,
                    frequency_hz: 0.017,
                    phase_rad: 0.3,
                },
                Sine {
                    amplitude: 0.25,
                    frequency_hz: 0.053,
                    phase_rad: 2.0,
                },
            ],
        }
    }

    /// Frames for `steps` consecutive steps of length `h`. `stream`
    /// decorrelates independent segments drawn from one PRBS seed.
    pub fn frames(&self, steps: usize, h: f64, t0: f64, stream: u64) -> Result<Vec<PwmFrame>> {
        match self {
            Excitation::Prbs {
                mean_levels,
                diff_levels,
                min_hold,
                max_hold,
                seed,
            } => {
                if mean_levels.is_empty() || diff_levels.is_empty() {
                    return Err(invalid(
                        "PRBS needs at least one mean and one difference level",
                    ));
                }
                if *min_hold == 0 || min_hold > max_hold {
                    return Err(invalid("PRBS hold range must satisfy 1 <= min <= max"));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                rng.set_stream(stream);
                let mut out = Vec::with_capacity(steps);
                while out.len() < steps {
                    let m = mean_levels[rng.random_range(0..mean_levels.len())];
                    let d = diff_levels[rng.random_range(0..diff_levels.len())];
                    let hold = rng.random_range(*min_hold..=*max_hold);
                    let f = clipped(m, d)?;
                    out.extend(std::iter::repeat_n(f, hold.min(steps - out.len())));
                }
                Ok(out)
            }
            Excitation::Smooth {
                mean_offset,
                mean,
                diff,
            } => (0..steps)
                .map(|k| {
                    let t = t0 + k as f64 * h;
                    let m = mean_offset + mean.iter().map(|s| s.eval(t)).sum::<f64>();
                    let d = diff.iter().map(|s| s.eval(t)).sum::<f64>();
                    clipped(m, d)
                })
                .collect(),
            Excitation::Schedule { frames } => {
                if frames.is_empty() {
                    return Err(invalid("empty PWM schedule"));
                }
                Ok((0..steps).map(|k| frames[k % frames.len()]).collect())
            }
        }
    }
}

fn clipped(mean: f64, diff: f64) -> Result<PwmFrame> {
    let l = (mean + 0.5 * diff).clamp(-1.0, 1.0);
    let r = (mean - 0.5 * diff).clamp(-1.0, 1.0);
    PwmFrame::new(l, r)
}
