use nalgebra::{Matrix2, Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, invalid, Error, Result};
use crate::model::{
    BodyVelocity, InertiaLayout, ModelKind, OperatingRegion, PwmFrame, ThrustDynamicParams,
    ThrustStaticParams,
};

/// Propeller model used by the simulators. Both propellers share it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "lowercase")]
pub enum ThrustModel {
    Static(ThrustStaticParams),
    Dynamic(ThrustDynamicParams),
}

impl ThrustModel {
    pub fn static_part(&self) -> &ThrustStaticParams {
        match self {
            ThrustModel::Static(p) => p,
            ThrustModel::Dynamic(p) => &p.static_part,
        }
    }

    pub fn kind(&self) -> ModelKind {
        match self {
            ThrustModel::Static(_) => ModelKind::Static,
            ThrustModel::Dynamic(_) => ModelKind::Dynamic,
        }
    }
}

/// Continuous-time 3-DOF vessel parameters. Hydrodynamic derivatives
/// follow the usual sign convention (damping derivatives are negative).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    #[serde(rename = "m_kg")]
    pub m: f64,
    #[serde(rename = "x_g_m")]
    pub x_g: f64,
    #[serde(rename = "i_z_kgm2")]
    pub i_z: f64,
    #[serde(rename = "x_udot_kg")]
    pub x_udot: f64,
    #[serde(rename = "y_vdot_kg")]
    pub y_vdot: f64,
    #[serde(rename = "y_rdot_kgm")]
    pub y_rdot: f64,
    #[serde(rename = "n_rdot_kgm2")]
    pub n_rdot: f64,
    #[serde(rename = "x_u_kg_per_s")]
    pub x_u: f64,
    #[serde(rename = "x_uu_kg_per_m")]
    pub x_uu: f64,
    #[serde(rename = "y_v_kg_per_s")]
    pub y_v: f64,
    #[serde(rename = "y_vv_kg_per_m")]
    pub y_vv: f64,
    #[serde(rename = "y_rv_kg")]
    pub y_rv: f64,
    #[serde(rename = "y_r_kgm_per_s")]
    pub y_r: f64,
    #[serde(rename = "y_vr_kg")]
    pub y_vr: f64,
    #[serde(rename = "y_rr_kgm")]
    pub y_rr: f64,
    #[serde(rename = "n_v_kgm_per_s")]
    pub n_v: f64,
    #[serde(rename = "n_vv_kg")]
    pub n_vv: f64,
    #[serde(rename = "n_rv_kgm")]
    pub n_rv: f64,
    #[serde(rename = "n_r_kgm2_per_s")]
    pub n_r: f64,
    #[serde(rename = "n_vr_kgm")]
    pub n_vr: f64,
    #[serde(rename = "n_rr_kgm2")]
    pub n_rr: f64,
    pub thrust: ThrustModel,
    /// Distance between the propellers.
    #[serde(rename = "d_m")]
    pub d: f64,
    /// Constant environmental force and torque `[N, N, N m]`.
    #[serde(rename = "tau_w_n_n_nm")]
    pub tau_w: [f64; 3],
    #[serde(rename = "h_s")]
    pub h: f64,
}

impl Default for GroundTruth {
    /// A 1.28 m, 30 kg twin-hull vessel with 0.784 m between propellers.
    fn default() -> Self {
        Self {
            m: 30.0,
            x_g: 0.0,
            i_z: 6.5,
            x_udot: -3.0,
            y_vdot: -20.0,
            y_rdot: -1.0,
            n_rdot: -2.0,
            x_u: -8.0,
            x_uu: -10.0,
            y_v: -25.0,
            y_vv: -40.0,
            y_rv: -2.0,
            y_r: -1.0,
            y_vr: -1.5,
            y_rr: -0.5,
            n_v: -0.5,
            n_vv: -0.8,
            n_rv: -0.3,
            n_r: -6.0,
            n_vr: -0.4,
            n_rr: -3.0,
            thrust: ThrustModel::Static(ThrustStaticParams {
                a_f: 15.0,
                b_f: 20.0,
                a_r: -8.0,
                b_r: 16.0,
                dead_zone: None,
            }),
            d: 0.784,
            tau_w: [0.5, -0.3, 0.1],
            h: InertiaLayout::DEFAULT_H,
        }
    }
}

impl GroundTruth {
    /// Same vessel with a first-order propeller lag of pole `alpha` and
    /// gain `beta`.
    pub fn with_dynamic_thrust(mut self, alpha: f64, beta: f64) -> Result<Self> {
        let st = *self.thrust.static_part();
        self.thrust = ThrustModel::Dynamic(ThrustDynamicParams::new(alpha, beta, st)?);
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let scalars = [
            ("m", self.m),
            ("x_g", self.x_g),
            ("i_z", self.i_z),
            ("x_udot", self.x_udot),
            ("y_vdot", self.y_vdot),
            ("y_rdot", self.y_rdot),
            ("n_rdot", self.n_rdot),
            ("x_u", self.x_u),
            ("x_uu", self.x_uu),
            ("y_v", self.y_v),
            ("y_vv", self.y_vv),
            ("y_rv", self.y_rv),
            ("y_r", self.y_r),
            ("y_vr", self.y_vr),
            ("y_rr", self.y_rr),
            ("n_v", self.n_v),
            ("n_vv", self.n_vv),
            ("n_rv", self.n_rv),
            ("n_r", self.n_r),
            ("n_vr", self.n_vr),
            ("n_rr", self.n_rr),
            ("tau_w_u", self.tau_w[0]),
            ("tau_w_v", self.tau_w[1]),
            ("tau_w_r", self.tau_w[2]),
        ];
        for (name, v) in scalars {
            ensure_finite(name, v)?;
        }
        if !(self.m > 0.0) {
            return Err(invalid("mass must be positive"));
        }
        self.layout()?;
        match &self.thrust {
            ThrustModel::Static(p) => p.validate(),
            ThrustModel::Dynamic(p) => {
                ThrustDynamicParams::new(p.alpha, p.beta, p.static_part).map(|_| ())
            }
        }
    }

    pub fn mass_matrix(&self) -> Matrix3<f64> {
        let m23 = self.m * self.x_g - self.y_rdot;
        Matrix3::new(
            self.m - self.x_udot,
            0.0,
            0.0,
            0.0,
            self.m - self.y_vdot,
            m23,
            0.0,
            m23,
            self.i_z - self.n_rdot,
        )
    }

    pub fn mass_inverse(&self) -> Result<Matrix3<f64>> {
        let m = self.mass_matrix();
        let m11 = m[(0, 0)];
        let lower = Matrix2::new(m[(1, 1)], m[(1, 2)], m[(2, 1)], m[(2, 2)]);
        let det = lower.determinant();
        let scale = lower.abs().max().powi(2);
        if m11.abs() <= f64::EPSILON * m11.abs().max(1.0) || det.abs() <= 1e-12 * scale {
            return Err(Error::Numerical("inertia matrix is singular".into()));
        }
        m.try_inverse()
            .ok_or_else(|| Error::Numerical("inertia matrix is singular".into()))
    }

    pub fn layout(&self) -> Result<InertiaLayout> {
        let mi = self.mass_inverse()?;
        InertiaLayout::new(mi[(0, 0)], mi[(1, 2)], mi[(2, 2)], self.d, self.h)
    }

    /// Coriolis-centripetal and damping matrices at `nu`.
    pub fn coriolis_damping(&self, nu: &BodyVelocity) -> (Matrix3<f64>, Matrix3<f64>) {
        let BodyVelocity { u, v, r } = *nu;
        let m11 = self.m - self.x_udot;
        let m22 = self.m - self.y_vdot;
        let m23 = self.m * self.x_g - self.y_rdot;
        let c13 = -(m22 * v + m23 * r);
        let c23 = m11 * u;
        let c = Matrix3::new(0.0, 0.0, c13, 0.0, 0.0, c23, -c13, -c23, 0.0);
        let (au, av, ar) = (u.abs(), v.abs(), r.abs());
        let d = Matrix3::new(
            -self.x_u - self.x_uu * au,
            0.0,
            0.0,
            0.0,
            -self.y_v - self.y_vv * av - self.y_rv * ar,
            -self.y_r - self.y_vr * av - self.y_rr * ar,
            0.0,
            -self.n_v - self.n_vv * av - self.n_rv * ar,
            -self.n_r - self.n_vr * av - self.n_rr * ar,
        );
        (c, d)
    }

    /// Lumped disturbance `M⁻¹(−C ν − D ν + τ_w)`.
    pub fn sigma(&self, nu: &BodyVelocity) -> Result<Vector3<f64>> {
        let mi = self.mass_inverse()?;
        Ok(mi * self.generalized_force(nu))
    }

    /// `−C ν − D ν + τ_w`.
    pub fn generalized_force(&self, nu: &BodyVelocity) -> Vector3<f64> {
        let (c, d) = self.coriolis_damping(nu);
        let n = Vector3::new(nu.u, nu.v, nu.r);
        -(c + d) * n + Vector3::from(self.tau_w)
    }
}

/// `(M, C(ν), D(ν))` for the given ground truth.
pub fn assemble_matrices(
    gt: &GroundTruth,
    nu: &BodyVelocity,
) -> Result<(Matrix3<f64>, Matrix3<f64>, Matrix3<f64>)> {
    gt.mass_inverse()?;
    let (c, d) = gt.coriolis_damping(nu);
    Ok((gt.mass_matrix(), c, d))
}

/// Quasi-quadratic disturbance coefficients, listed per axis in the order
/// of the leading entries of the static parameter vectors (without the
/// factor `h`): surge `[P11, 2Q23, Q33, R1, c]`, sway and yaw
/// `[P22, P23, P32, P33, 2Q12, 2Q13, R2, R3, c]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuasiQuadratic {
    pub surge: [f64; 5],
    pub sway: [f64; 9],
    pub yaw: [f64; 9],
}

impl QuasiQuadratic {
    /// Exact quasi-quadratic form of the Fossen disturbance. Every term of
    /// `M⁻¹(−Cν − Dν + τ_w)` is a monomial of this family because the
    /// first row and column of `M` decouple from the other two.
    pub fn from_fossen(gt: &GroundTruth) -> Result<Self> {
        let mi = gt.mass_inverse()?;
        let m11 = gt.m - gt.x_udot;
        let m22 = gt.m - gt.y_vdot;
        let m23 = gt.m * gt.x_g - gt.y_rdot;
        let i11 = mi[(0, 0)];
        let surge = [
            i11 * gt.x_uu,
            i11 * m22,
            i11 * m23,
            i11 * gt.x_u,
            i11 * gt.tau_w[0],
        ];
        let row = |a: f64, b: f64| {
            [
                a * gt.y_vv + b * gt.n_vv,
                a * gt.y_rv + b * gt.n_rv,
                a * gt.y_vr + b * gt.n_vr,
                a * gt.y_rr + b * gt.n_rr,
                b * (gt.y_vdot - gt.x_udot),
                -a * m11 - b * m23,
                a * gt.y_v + b * gt.n_v,
                a * gt.y_r + b * gt.n_r,
                a * gt.tau_w[1] + b * gt.tau_w[2],
            ]
        };
        Ok(Self {
            surge,
            sway: row(mi[(1, 1)], mi[(1, 2)]),
            yaw: row(mi[(2, 1)], mi[(2, 2)]),
        })
    }

    pub fn sigma(&self, nu: &BodyVelocity) -> [f64; 3] {
        let BodyVelocity { u, v, r } = *nu;
        let su = [u * u.abs(), v * r, r * r, u, 1.0];
        let sp = [
            v * v.abs(),
            v * r.abs(),
            r * v.abs(),
            r * r.abs(),
            u * v,
            u * r,
            v,
            r,
            1.0,
        ];
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        [
            dot(&self.surge, &su),
            dot(&self.sway, &sp),
            dot(&self.yaw, &sp),
        ]
    }
}

/// How the synthetic generators model the lumped disturbance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum DisturbanceMode {
    /// Exact `M⁻¹(−Cν − Dν + τ_w)` from the ground truth.
    FullFossen,
    /// Freely chosen quasi-quadratic coefficients.
    QuasiQuadratic(QuasiQuadratic),
}

impl DisturbanceMode {
    pub fn coefficients(&self, gt: &GroundTruth) -> Result<QuasiQuadratic> {
        match self {
            DisturbanceMode::FullFossen => QuasiQuadratic::from_fossen(gt),
            DisturbanceMode::QuasiQuadratic(q) => Ok(*q),
        }
    }
}

/// Per-step input gains `[G_u, G_v, G_r]` that the discrete generator
/// applies for a PWM frame, from one propeller thrust map.
///
/// Surge uses the physical force `T(δ_L) + T(δ_R)`. The torque is written
/// on the four PWM monomials with one coefficient per monomial, shared by
/// all operating regions: the asymmetric ones `(a_f − a_r)`, `(b_f − b_r)`
/// enter with the region sign, the symmetric ones take their FF values
/// `2a_f`, `2b_f`. This is the only torque with region-independent
/// coefficients that agrees with the physical torque on FF.
pub fn lumped_static_gains(
    p: &ThrustStaticParams,
    layout: &InertiaLayout,
    frame: &PwmFrame,
) -> Result<[f64; 3]> {
    if p.dead_zone.is_some() {
        return Err(invalid(
            "the in-class generator does not support a thrust dead zone",
        ));
    }
    if frame.region() == OperatingRegion::RR {
        return Err(Error::Domain {
            region: frame.region(),
            context: "the synthetic actuation",
        });
    }
    let tl = crate::model::thrust_static(frame.delta_l(), p)?;
    let tr = crate::model::thrust_static(frame.delta_r(), p)?;
    let force = tl + tr;
    let s = frame.region().asymmetry_sign();
    let (mean, diff) = (frame.delta_mean(), frame.delta_diff());
    let torque = 0.5
        * layout.d
        * (s * (p.a_f - p.a_r) * frame.quadratic_term()
            + 2.0 * p.a_f * mean * diff
            + s * (p.b_f - p.b_r) * mean
            + 2.0 * p.b_f * 0.5 * diff);
    Ok(layout.input_gains(force, torque))
}

/// Parameter vectors the identification must return for data generated
/// by the discrete generator, in the same shape as an identified model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpectedParams {
    pub kind: ModelKind,
    pub surge: Vec<f64>,
    pub sway: Vec<f64>,
    pub yaw: Vec<f64>,
    pub alpha: Option<f64>,
}

impl ExpectedParams {
    pub fn vector(&self, axis: crate::model::Axis) -> &[f64] {
        match axis {
            crate::model::Axis::Surge => &self.surge,
            crate::model::Axis::Sway => &self.sway,
            crate::model::Axis::Yaw => &self.yaw,
        }
    }
}

/// Static parameter vectors for a thrust map and disturbance coefficients.
fn static_vectors(
    q: &QuasiQuadratic,
    p: &ThrustStaticParams,
    l: &InertiaLayout,
) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let h = l.h;
    let mut surge: Vec<f64> = q.surge.iter().map(|c| h * c).collect();
    surge.push(2.0 * h * l.m11_inv * p.a_f);
    surge.push(2.0 * h * l.m11_inv * p.b_f);
    let thrust = |minv: f64| {
        let k = h * minv * 0.5 * l.d;
        [
            k * (p.a_f - p.a_r),
            k * 2.0 * p.a_f,
            k * (p.b_f - p.b_r),
            k * 2.0 * p.b_f,
        ]
    };
    let mut sway: Vec<f64> = q.sway.iter().map(|c| h * c).collect();
    sway.extend(thrust(l.m23_inv));
    let mut yaw: Vec<f64> = q.yaw.iter().map(|c| h * c).collect();
    yaw.extend(thrust(l.m33_inv));
    (surge, sway, yaw)
}

/// Composes the ground truth into the lumped parameter vectors of its
/// propeller model.
pub fn known_params_to_x(gt: &GroundTruth, mode: &DisturbanceMode) -> Result<ExpectedParams> {
    gt.validate()?;
    let q = mode.coefficients(gt)?;
    let layout = gt.layout()?;
    let (su, sv, sr) = static_vectors(&q, gt.thrust.static_part(), &layout);
    match gt.thrust {
        ThrustModel::Static(_) => Ok(ExpectedParams {
            kind: ModelKind::Static,
            surge: su,
            sway: sv,
            yaw: sr,
            alpha: None,
        }),
        ThrustModel::Dynamic(dp) => {
            let (a, b) = (dp.alpha, dp.beta);
            let s = &su;
            let surge = vec![
                a + s[3],
                -a * s[0],
                -a * s[1],
                -a * s[2],
                -a * (1.0 + s[3]),
                s[0],
                s[1],
                s[2],
                (1.0 - a) * s[4],
                b * s[5],
                b * s[6],
            ];
            let turning = |s: &[f64], own: usize| {
                let other = 13 - own;
                let mut x = Vec::with_capacity(21);
                x.push(a + s[own]);
                x.extend(s[0..6].iter().map(|c| -a * c));
                for j in [6, 7] {
                    x.push(if j == own {
                        -a * (1.0 + s[j])
                    } else {
                        -a * s[j]
                    });
                }
                x.extend_from_slice(&s[0..6]);
                x.push(s[other]);
                x.push((1.0 - a) * s[8]);
                x.extend(s[9..13].iter().map(|c| b * c));
                x
            };
            Ok(ExpectedParams {
                kind: ModelKind::Dynamic,
                surge,
                sway: turning(&sv, 6),
                yaw: turning(&sr, 7),
                alpha: Some(a),
            })
        }
    }
}
