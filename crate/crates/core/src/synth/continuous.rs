use nalgebra::{SVector, Vector3};
use serde::{Deserialize, Serialize};

use super::{Excitation, GroundTruth, ThrustModel};
use crate::dataprep::{PreparedDataset, PreparedSample};
use crate::error::{invalid, Error, Result};
use crate::model::{force_torque_from_thrusts, thrust_static, BodyVelocity, Pose, PwmFrame};

type State = SVector<f64, 6>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContinuousConfig {
    /// Integrator steps per sampling period.
    pub substeps: usize,
    pub initial_nu: BodyVelocity,
    pub initial_pose: Pose,
    pub divergence_bound: f64,
}

impl Default for ContinuousConfig {
    fn default() -> Self {
        Self {
            substeps: 20,
            initial_nu: BodyVelocity::ZERO,
            initial_pose: Pose::default(),
            divergence_bound: 50.0,
        }
    }
}

/// Finely sampled simulator output.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub h: f64,
    pub substeps: usize,
    /// Fine-step times, `t[j] = j h / substeps`.
    pub t: Vec<f64>,
    pub pose: Vec<Pose>,
    pub nu: Vec<BodyVelocity>,
    /// Command held over `[k h, (k+1) h)`.
    pub frames: Vec<PwmFrame>,
}

impl Trajectory {
    pub fn dt(&self) -> f64 {
        self.h / self.substeps as f64
    }

    pub fn duration(&self) -> f64 {
        self.t.last().copied().unwrap_or(0.0)
    }

    /// Number of whole sampling periods.
    pub fn steps(&self) -> usize {
        self.frames.len()
    }

    /// The exact state at every sampling instant, as one segment.
    pub fn grid_dataset(&self) -> Result<PreparedDataset> {
        let seg = (0..self.steps())
            .map(|k| {
                let j = k * self.substeps;
                PreparedSample {
                    t: self.t[j],
                    k: k as i64,
                    nu: self.nu[j],
                    frame: self.frames[k],
                    pose: self.pose[j],
                }
            })
            .collect();
        PreparedDataset::new(vec![seg], self.h)
    }
}

fn derivative(
    gt: &GroundTruth,
    minv: &nalgebra::Matrix3<f64>,
    y: &State,
    tau: &Vector3<f64>,
) -> State {
    let nu = BodyVelocity {
        u: y[3],
        v: y[4],
        r: y[5],
    };
    let (s, c) = y[2].sin_cos();
    let acc = minv * (gt.generalized_force(&nu) + tau);
    State::from([
        c * nu.u - s * nu.v,
        s * nu.u + c * nu.v,
        nu.r,
        acc[0],
        acc[1],
        acc[2],
    ])
}

/// Fixed-step RK4 integration of the 3-DOF model under zero-order-hold
/// PWM commands, with per-propeller thrust (static map, optional dead
/// zone, optional first-order lag updated once per sampling period).
pub fn simulate_continuous(
    gt: &GroundTruth,
    excitation: &Excitation,
    duration: f64,
    cfg: &ContinuousConfig,
) -> Result<Trajectory> {
    gt.validate()?;
    if cfg.substeps == 0 {
        return Err(invalid("integrator needs at least one substep per period"));
    }
    if !(duration > 0.0 && duration.is_finite()) {
        return Err(invalid("duration must be positive"));
    }
    let minv = gt.mass_inverse()?;
    let h = gt.h;
    let steps = (duration / h).round() as usize;
    let frames = excitation.frames(steps, h, 0.0, 0)?;
    let dt = h / cfg.substeps as f64;

    let n = steps * cfg.substeps + 1;
    let mut out = Trajectory {
        h,
        substeps: cfg.substeps,
        t: Vec::with_capacity(n),
        pose: Vec::with_capacity(n),
        nu: Vec::with_capacity(n),
        frames: frames.clone(),
    };
    let p0 = cfg.initial_pose;
    let v0 = cfg.initial_nu;
    let mut y = State::from([p0.x, p0.y, p0.psi, v0.u, v0.v, v0.r]);
    let push = |out: &mut Trajectory, j: usize, y: &State| {
        out.t.push(j as f64 * dt);
        out.pose.push(Pose {
            x: y[0],
            y: y[1],
            psi: y[2],
        });
        out.nu.push(BodyVelocity {
            u: y[3],
            v: y[4],
            r: y[5],
        });
    };
    push(&mut out, 0, &y);

    let st = gt.thrust.static_part();
    let mut thrusts = [0.0, 0.0];
    let mut prev_static = [0.0, 0.0];
    for (k, frame) in frames.iter().enumerate() {
        let now_static = [
            thrust_static(frame.delta_l(), st)?,
            thrust_static(frame.delta_r(), st)?,
        ];
        match gt.thrust {
            ThrustModel::Static(_) => thrusts = now_static,
            ThrustModel::Dynamic(p) => {
                if k > 0 {
                    for i in 0..2 {
                        thrusts[i] = p.alpha * thrusts[i] + p.beta * prev_static[i];
                    }
                }
            }
        }
        prev_static = now_static;
        let (fu, tr) = force_torque_from_thrusts(thrusts[0], thrusts[1], gt.d)?;
        let tau = Vector3::new(fu, 0.0, tr);
        for s in 0..cfg.substeps {
            let k1 = derivative(gt, &minv, &y, &tau);
            let k2 = derivative(gt, &minv, &(y + k1 * (0.5 * dt)), &tau);
            let k3 = derivative(gt, &minv, &(y + k2 * (0.5 * dt)), &tau);
            let k4 = derivative(gt, &minv, &(y + k3 * dt), &tau);
            y += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
            let j = k * cfg.substeps + s + 1;
            let norm = Vector3::new(y[3], y[4], y[5]).norm();
            if !(norm <= cfg.divergence_bound) {
                return Err(Error::Diverged { step: j, norm });
            }
            push(&mut out, j, &y);
        }
    }
    Ok(out)
}
