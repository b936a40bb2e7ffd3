use std::collections::BTreeMap;
use std::path::Path;

use asv_gain::estimator::{AlphaResolution, IdentifiedModel, ModelMetadata};
use asv_gain::model::{Axis, ModelKind, OperatingRegion};
use asv_gain::regressors::LumpedDisturbanceShape;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult, ResultExt};
use crate::io::{read_bytes, write_atomic};

pub const FORMAT_VERSION: u32 = 1;

/// One identified coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamRow {
    pub axis: Axis,
    /// One-based position in the axis vector.
    pub index: usize,
    pub symbol: String,
    pub value: f64,
    pub unit: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisDiagnostics {
    pub axis: Axis,
    pub rows_used: usize,
    pub rank: usize,
    pub residual_norm: f64,
    /// Absent when infinite.
    pub condition_estimate: Option<f64>,
    pub rank_deficient: bool,
    pub structured: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub dataset_sha256: String,
    pub config_sha256: String,
    /// Seconds since the Unix epoch; `SOURCE_DATE_EPOCH` when set.
    pub created_unix: u64,
    pub tool: String,
}

impl Provenance {
    pub fn new(dataset: &[u8], config: &[u8]) -> Self {
        let created_unix = std::env::var("SOURCE_DATE_EPOCH")
            .ok()
            .and_then(|s| s.trim().parse().ok())
            .unwrap_or_else(|| {
                std::time::SystemTime::now()
                    .duration_since(std::time::UNIX_EPOCH)
                    .map_or(0, |d| d.as_secs())
            });
        Self {
            dataset_sha256: crate::io::sha256_hex(dataset),
            config_sha256: crate::io::sha256_hex(config),
            created_unix,
            tool: format!("asv-gain {}", env!("CARGO_PKG_VERSION")),
        }
    }
}

/// Identified model on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format_version: u32,
    pub kind: ModelKind,
    /// Sampling period, s.
    pub h: f64,
    pub parameters: Vec<ParamRow>,
    /// Shared propeller pole of the dynamic model.
    pub alpha: Option<AlphaResolution>,
    pub regions: BTreeMap<Axis, Vec<OperatingRegion>>,
    pub training: Option<String>,
    pub diagnostics: Vec<AxisDiagnostics>,
    pub provenance: Provenance,
}

impl ModelFile {
    pub fn from_model(model: &IdentifiedModel, provenance: Provenance) -> Self {
        let mut parameters = Vec::new();
        for axis in Axis::ALL {
            let shape = LumpedDisturbanceShape::of(model.kind, axis);
            for (i, &value) in model.vector(axis).iter().enumerate() {
                parameters.push(ParamRow {
                    axis,
                    index: i + 1,
                    symbol: shape.columns[i].symbol.to_string(),
                    value,
                    unit: shape.unit(i),
                });
            }
        }
        let diagnostics = Axis::ALL
            .iter()
            .zip(&model.reports)
            .map(|(&axis, r)| AxisDiagnostics {
                axis,
                rows_used: r.rows_used,
                rank: r.rank,
                residual_norm: r.residual_norm,
                condition_estimate: r
                    .condition_estimate
                    .is_finite()
                    .then_some(r.condition_estimate),
                rank_deficient: r.rank_deficient,
                structured: r.structured,
            })
            .collect();
        Self {
            format_version: FORMAT_VERSION,
            kind: model.kind,
            h: model.metadata.h,
            parameters,
            alpha: model.alpha,
            regions: Axis::ALL
                .iter()
                .map(|&a| (a, model.metadata.regions[a.index()].clone()))
                .collect(),
            training: model.metadata.training.clone(),
            diagnostics,
            provenance,
        }
    }

    /// Rebuilds the model, checking the version and every row index.
    pub fn to_model(&self) -> CliResult<IdentifiedModel> {
        if self.format_version != FORMAT_VERSION {
            return Err(CliError::io(format!(
                "model file format version {} is not supported (expected {FORMAT_VERSION})",
                self.format_version
            )));
        }
        let vectors = Axis::ALL.map(|axis| {
            let rows: Vec<&ParamRow> = self.parameters.iter().filter(|p| p.axis == axis).collect();
            (
                rows.iter().enumerate().all(|(i, p)| p.index == i + 1),
                rows.iter().map(|p| p.value).collect::<Vec<_>>(),
            )
        });
        if let Some(axis) = Axis::ALL.iter().find(|a| !vectors[a.index()].0) {
            return Err(CliError::io(format!(
                "model file: {axis} rows are not numbered 1, 2, ... in order"
            )));
        }
        let [su, sv, sr] = vectors.map(|v| v.1);
        let mut model = IdentifiedModel::from_vectors(self.kind, su, sv, sr, self.alpha, self.h)
            .map_err(|e| CliError::io(format!("model file: {e}")))?;
        let mut regions = model.metadata.regions.clone();
        for (axis, r) in &self.regions {
            regions[axis.index()] = r.clone();
        }
        model.metadata = ModelMetadata {
            h: self.h,
            regions,
            training: self.training.clone(),
        };
        Ok(model)
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        let mut text = serde_json::to_string_pretty(self).at(path)?;
        text.push('\n');
        write_atomic(path, text.as_bytes())
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        serde_json::from_slice(&read_bytes(path)?).at(path)
    }
}
