use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::model::{BodyVelocity, OperatingRegion, Pose, PwmFrame};

/// One synchronized sample on the uniform grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PreparedSample {
    /// Time, s.
    pub t: f64,
    /// Grid index, `t = t0 + k h`. Consecutive samples of a segment have
    /// consecutive indices.
    pub k: i64,
    pub nu: BodyVelocity,
    pub frame: PwmFrame,
    pub pose: Pose,
}

impl PreparedSample {
    pub fn region(&self) -> OperatingRegion {
        self.frame.region()
    }
}

/// Contiguous runs of samples at a fixed step.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PreparedDataset {
    pub segments: Vec<Vec<PreparedSample>>,
    pub h: f64,
}

impl PreparedDataset {
    /// Builds a dataset, checking that every segment is nonempty and steps
    /// one grid index at a time.
    pub fn new(segments: Vec<Vec<PreparedSample>>, h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(invalid(format!(
                "sampling period must be positive, got {h}"
            )));
        }
        for (s, seg) in segments.iter().enumerate() {
            if seg.is_empty() {
                return Err(invalid(format!("segment {s} is empty")));
            }
            if let Some(w) = seg.windows(2).find(|w| w[1].k != w[0].k + 1) {
                return Err(invalid(format!(
                    "segment {s} is not contiguous between grid indices {} and {}",
                    w[0].k, w[1].k
                )));
            }
        }
        Ok(Self { segments, h })
    }

    pub fn len(&self) -> usize {
        self.segments.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn segment_count(&self) -> usize {
        self.segments.len()
    }

    /// Recorded duration in minutes, counting one step per sample.
    pub fn minutes(&self) -> f64 {
        self.len() as f64 * self.h / 60.0
    }

    pub fn samples(&self) -> impl Iterator<Item = (usize, usize, &PreparedSample)> {
        self.segments
            .iter()
            .enumerate()
            .flat_map(|(s, seg)| seg.iter().enumerate().map(move |(i, p)| (s, i, p)))
    }
}
