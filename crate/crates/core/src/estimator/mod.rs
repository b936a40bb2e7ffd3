//! Least-squares identification of the parameter vectors and resolution of
//! the shared propeller pole.

mod alpha;
mod lstsq;
mod structure;

pub use alpha::{resolve_alpha, AlphaResolution};
pub use lstsq::{solve_dense, solve_least_squares, LeastSquaresReport, CONDITION_WARN};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataprep::PreparedDataset;
use crate::error::{invalid, Error, Result};
use crate::model::{
    Axis, DynamicGainParams, DynamicSurgeParams, DynamicSwayYawParams, ModelKind, OperatingRegion,
    StaticSurgeParams, StaticSwayYawParams,
};
use crate::regressors::{build_system, RegionMask, RegressionSystem};

/// Descriptive metadata attached to an identified model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelMetadata {
    pub h: f64,
    /// Regions admitted per axis, in `u, v, r` order.
    pub regions: [Vec<OperatingRegion>; 3],
    /// Free-form description of the training rows, e.g. a partition spec.
    pub training: Option<String>,
}

/// The three identified parameter vectors of one propeller model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentifiedModel {
    pub kind: ModelKind,
    pub surge: Vec<f64>,
    pub sway: Vec<f64>,
    pub yaw: Vec<f64>,
    /// Present for the dynamic model only.
    pub alpha: Option<AlphaResolution>,
    pub metadata: ModelMetadata,
    /// Per-axis solver diagnostics, `u, v, r`.
    pub reports: Vec<LeastSquaresReport>,
}

impl IdentifiedModel {
    /// Assembles a model from given vectors, checking their lengths.
    pub fn from_vectors(
        kind: ModelKind,
        surge: Vec<f64>,
        sway: Vec<f64>,
        yaw: Vec<f64>,
        alpha: Option<AlphaResolution>,
        h: f64,
    ) -> Result<Self> {
        for (axis, x) in Axis::ALL.iter().zip([&surge, &sway, &yaw]) {
            let n = kind.param_count(*axis);
            if x.len() != n {
                return Err(invalid(format!(
                    "{kind} {axis} vector needs {n} entries, got {}",
                    x.len()
                )));
            }
            if x.iter().any(|v| !v.is_finite()) {
                return Err(invalid(format!(
                    "{kind} {axis} vector has non-finite entries"
                )));
            }
        }
        if (kind == ModelKind::Dynamic) != alpha.is_some() {
            return Err(invalid(
                "a dynamic model carries exactly one alpha, a static one none",
            ));
        }
        Ok(Self {
            kind,
            surge,
            sway,
            yaw,
            alpha,
            metadata: ModelMetadata {
                h,
                regions: default_regions(),
                training: None,
            },
            reports: Vec::new(),
        })
    }

    pub fn vector(&self, axis: Axis) -> &[f64] {
        match axis {
            Axis::Surge => &self.surge,
            Axis::Sway => &self.sway,
            Axis::Yaw => &self.yaw,
        }
    }

    pub fn static_surge(&self) -> Result<StaticSurgeParams> {
        self.expect(ModelKind::Static)?;
        StaticSurgeParams::from_slice(&self.surge)
    }

    pub fn static_swayyaw(&self, axis: Axis) -> Result<StaticSwayYawParams> {
        self.expect(ModelKind::Static)?;
        StaticSwayYawParams::from_slice(self.vector(axis))
    }

    pub fn dynamic_surge(&self) -> Result<DynamicSurgeParams> {
        self.expect(ModelKind::Dynamic)?;
        DynamicSurgeParams::from_slice(&self.surge)
    }

    pub fn dynamic_swayyaw(&self, axis: Axis) -> Result<DynamicSwayYawParams> {
        self.expect(ModelKind::Dynamic)?;
        DynamicSwayYawParams::from_slice(self.vector(axis))
    }

    /// Parameters of the dynamic input-gain recursion for `axis`.
    pub fn dynamic_gain(&self, axis: Axis) -> Result<DynamicGainParams> {
        Ok(match axis {
            Axis::Surge => DynamicGainParams::Surge(self.dynamic_surge()?),
            _ => DynamicGainParams::SwayYaw(self.dynamic_swayyaw(axis)?),
        })
    }

    fn expect(&self, kind: ModelKind) -> Result<()> {
        if self.kind != kind {
            return Err(invalid(format!("model is {}, not {kind}", self.kind)));
        }
        Ok(())
    }
}

fn default_regions() -> [Vec<OperatingRegion>; 3] {
    Axis::ALL.map(|a| RegionMask::for_axis(a).regions())
}

/// Builds the three systems of a model kind over a dataset.
pub fn build_systems(ds: &PreparedDataset, kind: ModelKind) -> Result<[RegressionSystem; 3]> {
    let surge = build_system(ds, kind, Axis::Surge)?;
    let sway = build_system(ds, kind, Axis::Sway)?;
    let yaw = build_system(ds, kind, Axis::Yaw)?;
    Ok([surge, sway, yaw])
}

/// Solves already-assembled systems (for instance training subsets).
pub fn identify_systems(systems: &[RegressionSystem; 3], h: f64) -> Result<IdentifiedModel> {
    let kind = systems[0].model_kind;
    for (sys, axis) in systems.iter().zip(Axis::ALL) {
        if sys.axis != axis || sys.model_kind != kind {
            return Err(invalid("systems must be one model kind in u, v, r order"));
        }
    }
    let reports: Vec<Result<LeastSquaresReport>> = systems
        .par_iter()
        .map(|s| {
            solve_least_squares(s).map_err(|e| match e {
                Error::InsufficientData(m) => {
                    Error::InsufficientData(format!("axis {}: {m}", s.axis))
                }
                Error::Numerical(m) => Error::Numerical(format!("axis {}: {m}", s.axis)),
                other => other,
            })
        })
        .collect();
    let mut reports: Vec<LeastSquaresReport> = reports.into_iter().collect::<Result<_>>()?;
    let mut vectors = [0, 1, 2].map(|i| reports[i].solution.clone());
    if kind == ModelKind::Dynamic {
        let nulls = [0, 1, 2].map(|i| reports[i].null_space.as_slice());
        if let Some(a) = structure::complete_null_space(&mut vectors, nulls) {
            log::info!(
                "null-space components fixed by the dynamic parameter structure (alpha {a:.6})"
            );
            for rep in reports.iter_mut().filter(|r| !r.null_space.is_empty()) {
                rep.structured = true;
            }
            for (rep, x) in reports.iter_mut().zip(&vectors) {
                rep.solution = x.clone();
            }
        }
    }
    let [su, sv, sr] = vectors;
    let alpha = match kind {
        ModelKind::Static => None,
        ModelKind::Dynamic => Some(resolve_alpha(
            &DynamicSurgeParams::from_slice(&su)?,
            &DynamicSwayYawParams::from_slice(&sv)?,
            &DynamicSwayYawParams::from_slice(&sr)?,
        )?),
    };
    let mut model = IdentifiedModel::from_vectors(kind, su, sv, sr, alpha, h)?;
    model.reports = reports;
    Ok(model)
}

/// Identifies the static propeller model: independent surge, sway and yaw
/// least-squares solves.
pub fn identify_static(ds: &PreparedDataset) -> Result<IdentifiedModel> {
    identify_systems(&build_systems(ds, ModelKind::Static)?, ds.h)
}

/// Identifies the first-order propeller model, then resolves the pole.
pub fn identify_dynamic(ds: &PreparedDataset) -> Result<IdentifiedModel> {
    identify_systems(&build_systems(ds, ModelKind::Dynamic)?, ds.h)
}

pub fn identify(ds: &PreparedDataset, kind: ModelKind) -> Result<IdentifiedModel> {
    match kind {
        ModelKind::Static => identify_static(ds),
        ModelKind::Dynamic => identify_dynamic(ds),
    }
}
