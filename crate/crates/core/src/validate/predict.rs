use serde::{Deserialize, Serialize};

use super::Partition;
use super::Split;
use crate::dataprep::{PreparedDataset, PreparedSample};
use crate::error::{invalid, Result};
use crate::estimator::IdentifiedModel;
use crate::model::{Axis, BodyVelocity, ModelKind};
use crate::regressors::{regressor_row, row_eligible, RowIndex};

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// One-step prediction `ν̂(k+1) = ν(k) + A(k) X` for one axis at step `i`
/// of `seg`, using the row layout of `kind`. `None` where the step does
/// not satisfy the row preconditions.
pub fn predict_axis(
    kind: ModelKind,
    x: &[f64],
    axis: Axis,
    seg: &[PreparedSample],
    i: usize,
) -> Option<f64> {
    if !row_eligible(kind, axis, seg, i) {
        return None;
    }
    Some(seg[i].nu.component(axis) + dot(&regressor_row(kind, axis, seg, i), x))
}

/// Static one-step prediction for one axis.
pub fn predict_one_step_static(
    model: &IdentifiedModel,
    axis: Axis,
    seg: &[PreparedSample],
    i: usize,
) -> Result<Option<f64>> {
    if model.kind != ModelKind::Static {
        return Err(invalid("static prediction needs a static model"));
    }
    Ok(predict_axis(
        ModelKind::Static,
        model.vector(axis),
        axis,
        seg,
        i,
    ))
}

/// Dynamic one-step prediction for one axis; needs steps `i − 1` and `i`.
pub fn predict_one_step_dynamic(
    model: &IdentifiedModel,
    axis: Axis,
    seg: &[PreparedSample],
    i: usize,
) -> Result<Option<f64>> {
    if model.kind != ModelKind::Dynamic {
        return Err(invalid("dynamic prediction needs a dynamic model"));
    }
    Ok(predict_axis(
        ModelKind::Dynamic,
        model.vector(axis),
        axis,
        seg,
        i,
    ))
}

/// Predicted and measured next velocities for one axis over a subset.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct AxisTrace {
    pub rows: Vec<RowIndex>,
    /// Time of the predicted sample, `t(k+1)`.
    pub t: Vec<f64>,
    pub truth: Vec<f64>,
    pub prediction: Vec<f64>,
    /// Steps with a successor that fail the region preconditions.
    pub skipped: usize,
}

/// One-step predictions over every step of `ds` whose label is `split`
/// (all steps when `partition` is `None`).
pub fn predict_dataset(
    model: &IdentifiedModel,
    ds: &PreparedDataset,
    partition: Option<&Partition>,
    split: Split,
) -> [AxisTrace; 3] {
    Axis::ALL.map(|axis| {
        let x = model.vector(axis);
        let mut tr = AxisTrace::default();
        for (s, seg) in ds.segments.iter().enumerate() {
            for i in 0..seg.len().saturating_sub(1) {
                if partition.is_some_and(|p| p.label(s, i) != split) {
                    continue;
                }
                match predict_axis(model.kind, x, axis, seg, i) {
                    Some(p) => {
                        tr.rows.push(RowIndex { segment: s, k: i });
                        tr.t.push(seg[i + 1].t);
                        tr.truth.push(seg[i + 1].nu.component(axis));
                        tr.prediction.push(p);
                    }
                    None => tr.skipped += 1,
                }
            }
        }
        tr
    })
}

/// Free-running simulation over one segment: predictions are fed back as
/// the next state while commands come from the data. Where a step fails
/// the region preconditions on some axis the measured value is taken
/// instead, and the number of such resets is returned.
pub fn free_run(model: &IdentifiedModel, seg: &[PreparedSample]) -> (Vec<BodyVelocity>, usize) {
    let mut sim: Vec<PreparedSample> = seg.to_vec();
    let mut resets = 0;
    for i in 0..seg.len().saturating_sub(1) {
        let mut next = seg[i + 1].nu;
        for axis in Axis::ALL {
            match predict_axis(model.kind, model.vector(axis), axis, &sim, i) {
                Some(p) => match axis {
                    Axis::Surge => next.u = p,
                    Axis::Sway => next.v = p,
                    Axis::Yaw => next.r = p,
                },
                None => resets += 1,
            }
        }
        sim[i + 1].nu = next;
    }
    (sim.into_iter().map(|s| s.nu).collect(), resets)
}
