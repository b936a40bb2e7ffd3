//! Linear-in-parameters regression systems `A X = b` for surge, sway and
//! yaw under the static and first-order dynamic propeller models.
//!
//! Each row maps back to a `(segment, position)` pair of the source
//! dataset. Rows are only formed where every sample they touch lies in the
//! same segment and in an allowed operating region. The dynamic builders
//! additionally require the same region at `k−1` and `k`.

mod layout;
mod rows;

pub use layout::{ColumnSpec, LumpedDisturbanceShape};
pub use rows::{dynamic_surge_row, dynamic_swayyaw_row, static_surge_row, static_swayyaw_row};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::dataprep::{PreparedDataset, PreparedSample};
use crate::error::{invalid, Error, Result};
use crate::model::{Axis, ModelKind, OperatingRegion};

/// Set of operating regions a regression may draw rows from. RR is never
/// admissible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionMask {
    ff: bool,
    fr: bool,
    rf: bool,
}

impl RegionMask {
    pub const SURGE: RegionMask = RegionMask {
        ff: true,
        fr: false,
        rf: false,
    };
    pub const TURNING: RegionMask = RegionMask {
        ff: true,
        fr: true,
        rf: true,
    };

    pub fn new(allowed: &[OperatingRegion]) -> Result<Self> {
        let mut m = RegionMask {
            ff: false,
            fr: false,
            rf: false,
        };
        for r in allowed {
            match r {
                OperatingRegion::FF => m.ff = true,
                OperatingRegion::FR => m.fr = true,
                OperatingRegion::RF => m.rf = true,
                OperatingRegion::RR => {
                    return Err(invalid("region RR cannot be used for identification"))
                }
            }
        }
        Ok(m)
    }

    pub fn for_axis(axis: Axis) -> Self {
        match axis {
            Axis::Surge => Self::SURGE,
            _ => Self::TURNING,
        }
    }

    pub fn contains(&self, r: OperatingRegion) -> bool {
        match r {
            OperatingRegion::FF => self.ff,
            OperatingRegion::FR => self.fr,
            OperatingRegion::RF => self.rf,
            OperatingRegion::RR => false,
        }
    }

    pub fn regions(&self) -> Vec<OperatingRegion> {
        OperatingRegion::ALL
            .into_iter()
            .filter(|r| self.contains(*r))
            .collect()
    }
}

/// Source of a regression row: segment id and the position of step `k`
/// within that segment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RowIndex {
    pub segment: usize,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegressionSystem {
    pub a: DMatrix<f64>,
    pub b: DVector<f64>,
    pub row_index: Vec<RowIndex>,
    pub model_kind: ModelKind,
    pub axis: Axis,
}

impl RegressionSystem {
    pub fn rows(&self) -> usize {
        self.a.nrows()
    }

    pub fn cols(&self) -> usize {
        self.a.ncols()
    }

    pub fn shape(&self) -> LumpedDisturbanceShape {
        LumpedDisturbanceShape::of(self.model_kind, self.axis)
    }

    /// Subsystem made of the rows whose source satisfies `keep`, in order.
    pub fn select(&self, keep: impl Fn(RowIndex) -> bool) -> RegressionSystem {
        let picked: Vec<usize> = (0..self.rows())
            .filter(|&i| keep(self.row_index[i]))
            .collect();
        let a = self.a.select_rows(picked.iter());
        let b = DVector::from_iterator(picked.len(), picked.iter().map(|&i| self.b[i]));
        RegressionSystem {
            a,
            b,
            row_index: picked.iter().map(|&i| self.row_index[i]).collect(),
            model_kind: self.model_kind,
            axis: self.axis,
        }
    }
}

/// Whether step `i` of `seg` yields a row of the given regression.
pub fn row_eligible(kind: ModelKind, axis: Axis, seg: &[PreparedSample], i: usize) -> bool {
    let mask = RegionMask::for_axis(axis);
    if i + 1 >= seg.len() || !mask.contains(seg[i].region()) {
        return false;
    }
    match kind {
        ModelKind::Static => true,
        ModelKind::Dynamic => i >= 1 && seg[i - 1].region() == seg[i].region(),
    }
}

/// Regressor row for step `i` of `seg`. The caller checks eligibility.
pub fn regressor_row(kind: ModelKind, axis: Axis, seg: &[PreparedSample], i: usize) -> Vec<f64> {
    let cur = &seg[i];
    match (kind, axis) {
        (ModelKind::Static, Axis::Surge) => static_surge_row(&cur.nu, &cur.frame).to_vec(),
        (ModelKind::Static, _) => static_swayyaw_row(&cur.nu, &cur.frame).to_vec(),
        (ModelKind::Dynamic, Axis::Surge) => {
            let prev = &seg[i - 1];
            dynamic_surge_row(&prev.nu, &cur.nu, &prev.frame).to_vec()
        }
        (ModelKind::Dynamic, _) => {
            let prev = &seg[i - 1];
            dynamic_swayyaw_row(axis, &prev.nu, &cur.nu, &prev.frame).to_vec()
        }
    }
}

/// Generic builder behind the four public constructors.
pub fn build_system(ds: &PreparedDataset, kind: ModelKind, axis: Axis) -> Result<RegressionSystem> {
    let cols = kind.param_count(axis);
    let mut data = Vec::new();
    let mut b = Vec::new();
    let mut row_index = Vec::new();
    for (s, seg) in ds.segments.iter().enumerate() {
        for i in 0..seg.len() {
            if !row_eligible(kind, axis, seg, i) {
                continue;
            }
            let row = regressor_row(kind, axis, seg, i);
            debug_assert_eq!(row.len(), cols);
            let target = seg[i + 1].nu.component(axis) - seg[i].nu.component(axis);
            if !target.is_finite() || row.iter().any(|x| !x.is_finite()) {
                return Err(invalid(format!(
                    "non-finite regressor at segment {s}, step {i}"
                )));
            }
            data.extend_from_slice(&row);
            b.push(target);
            row_index.push(RowIndex { segment: s, k: i });
        }
    }
    if b.is_empty() {
        return Err(Error::InsufficientData(format!(
            "no usable {kind} rows for axis {axis} (regions {:?})",
            RegionMask::for_axis(axis).regions()
        )));
    }
    Ok(RegressionSystem {
        a: DMatrix::from_row_slice(b.len(), cols, &data),
        b: DVector::from_vec(b),
        row_index,
        model_kind: kind,
        axis,
    })
}

/// Static surge system on FF rows.
pub fn build_static_surge(ds: &PreparedDataset) -> Result<RegressionSystem> {
    build_system(ds, ModelKind::Static, Axis::Surge)
}

/// Static sway or yaw system on FF, FR and RF rows.
pub fn build_static_swayyaw(ds: &PreparedDataset, axis: Axis) -> Result<RegressionSystem> {
    if axis == Axis::Surge {
        return Err(invalid("build_static_swayyaw needs axis v or r"));
    }
    build_system(ds, ModelKind::Static, axis)
}

/// Dynamic surge system on FF rows with FF at the previous step.
pub fn build_dynamic_surge(ds: &PreparedDataset) -> Result<RegressionSystem> {
    build_system(ds, ModelKind::Dynamic, Axis::Surge)
}

/// Dynamic sway or yaw system.
pub fn build_dynamic_swayyaw(ds: &PreparedDataset, axis: Axis) -> Result<RegressionSystem> {
    if axis == Axis::Surge {
        return Err(invalid("build_dynamic_swayyaw needs axis v or r"));
    }
    build_system(ds, ModelKind::Dynamic, axis)
}
