use super::{savitzky_golay_causal, SavGolConfig};
use crate::error::{Error, Result};
use crate::model::{BodyVelocity, Pose};

/// Body-frame velocities from poses on a uniform grid.
///
/// Backward differences of position are rotated into the body frame with
/// the heading halfway between the two samples, and the heading difference
/// gives `r`. Each series is then smoothed with a causal Savitzky-Golay fit
/// evaluated `lead` samples past the newest difference; `lead = 0.5` puts
/// the estimate at the current sample, since a backward difference is
/// centred half a step in the past. Headings must be unwrapped.
///
/// The output has one entry per pose; the first `window_length` entries
/// are `None` while the filter warms up.
pub fn body_velocities_from_pose(
    poses: &[Pose],
    h: f64,
    sg: &SavGolConfig,
    lead: f64,
) -> Result<Vec<Option<BodyVelocity>>> {
    if poses.len() < 2 {
        return Err(Error::InsufficientData(
            "velocity differentiation needs at least 2 poses".into(),
        ));
    }
    let n = poses.len();
    let mut u = Vec::with_capacity(n - 1);
    let mut v = Vec::with_capacity(n - 1);
    let mut r = Vec::with_capacity(n - 1);
    for w in poses.windows(2) {
        let (dx, dy) = ((w[1].x - w[0].x) / h, (w[1].y - w[0].y) / h);
        let (s, c) = (0.5 * (w[0].psi + w[1].psi)).sin_cos();
        u.push(c * dx + s * dy);
        v.push(-s * dx + c * dy);
        r.push((w[1].psi - w[0].psi) / h);
    }
    let mut out = vec![None; n];
    if u.len() < sg.window_length {
        return Ok(out);
    }
    let (fu, fv, fr) = (
        savitzky_golay_causal(&u, sg, lead)?,
        savitzky_golay_causal(&v, sg, lead)?,
        savitzky_golay_causal(&r, sg, lead)?,
    );
    // Filtered value j uses differences up to index j + w − 1, which ends at pose j + w.
    let w = sg.window_length;
    for j in 0..fu.len() {
        out[j + w] = Some(BodyVelocity {
            u: fu[j],
            v: fv[j],
            r: fr[j],
        });
    }
    Ok(out)
}
