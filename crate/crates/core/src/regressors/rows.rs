use crate::model::{Axis, BodyVelocity, PwmFrame};

fn quad_p(nu: &BodyVelocity) -> [f64; 4] {
    let BodyVelocity { v, r, .. } = *nu;
    [v * v.abs(), v * r.abs(), r * v.abs(), r * r.abs()]
}

fn thrust_p(f: &PwmFrame) -> [f64; 4] {
    let s = f.region().asymmetry_sign();
    let (mean, diff) = (f.delta_mean(), f.delta_diff());
    [s * f.quadratic_term(), mean * diff, s * mean, 0.5 * diff]
}

/// `[u|u|, v r, r², u, 1, δ̄² + Δδ²/4, δ̄]`
pub fn static_surge_row(nu: &BodyVelocity, f: &PwmFrame) -> [f64; 7] {
    let BodyVelocity { u, v, r } = *nu;
    [
        u * u.abs(),
        v * r,
        r * r,
        u,
        1.0,
        f.quadratic_term(),
        f.delta_mean(),
    ]
}

/// `[v|v|, v|r|, r|v|, r|r|, u v, u r, v, r, 1, ±S, δ̄Δδ, ±δ̄, Δδ/2]`, shared
/// by sway and yaw. The signed columns vanish on FF and flip on RF.
pub fn static_swayyaw_row(nu: &BodyVelocity, f: &PwmFrame) -> [f64; 13] {
    let BodyVelocity { u, v, r } = *nu;
    let p = quad_p(nu);
    let t = thrust_p(f);
    [
        p[0],
        p[1],
        p[2],
        p[3],
        u * v,
        u * r,
        v,
        r,
        1.0,
        t[0],
        t[1],
        t[2],
        t[3],
    ]
}

/// Surge row of the first-order propeller model at step `k`, given the
/// state at `k−1` (`prev`) and `k` (`cur`) and the PWM at `k−1`.
pub fn dynamic_surge_row(prev: &BodyVelocity, cur: &BodyVelocity, f_prev: &PwmFrame) -> [f64; 11] {
    let p = static_surge_row(prev, f_prev);
    let c = static_surge_row(cur, f_prev);
    [
        cur.u, p[0], p[1], p[2], p[3], c[0], c[1], c[2], 1.0, p[5], p[6],
    ]
}

/// Sway or yaw row of the first-order propeller model. The two axes
/// differ only in which velocity carries the persistence term (column 1)
/// and which appears bare at step `k` (column 16).
pub fn dynamic_swayyaw_row(
    axis: Axis,
    prev: &BodyVelocity,
    cur: &BodyVelocity,
    f_prev: &PwmFrame,
) -> [f64; 21] {
    let (own, other) = match axis {
        Axis::Yaw => (cur.r, cur.v),
        _ => (cur.v, cur.r),
    };
    let pp = quad_p(prev);
    let pc = quad_p(cur);
    let t = thrust_p(f_prev);
    [
        own,
        pp[0],
        pp[1],
        pp[2],
        pp[3],
        prev.u * prev.v,
        prev.u * prev.r,
        prev.v,
        prev.r,
        pc[0],
        pc[1],
        pc[2],
        pc[3],
        cur.u * cur.v,
        cur.u * cur.r,
        other,
        1.0,
        t[0],
        t[1],
        t[2],
        t[3],
    ]
}
