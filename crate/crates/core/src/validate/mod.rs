//! Partitions, one-step prediction and the R²/MAE protocols.

mod metrics;
mod partition;
mod predict;

pub use metrics::*;
pub use partition::*;
pub use predict::*;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataprep::PreparedDataset;
use crate::error::{invalid, Error, Result};
use crate::estimator::{build_systems, identify_systems, IdentifiedModel};
use crate::model::{Axis, ModelKind};
use crate::regressors::RegressionSystem;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisMetrics {
    pub axis: Axis,
    pub r2: f64,
    pub mae: f64,
    /// Evaluated rows.
    pub n: usize,
    pub skipped: usize,
}

/// Metrics of one model on one subset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub kind: ModelKind,
    pub split: Split,
    pub partition: String,
    pub axes: [AxisMetrics; 3],
}

impl MetricsReport {
    pub fn axis(&self, axis: Axis) -> &AxisMetrics {
        &self.axes[axis.index()]
    }

    pub fn min_r2(&self) -> f64 {
        self.axes.iter().map(|a| a.r2).fold(f64::INFINITY, f64::min)
    }
}

/// Metrics of per-axis traces.
pub fn metrics_from_traces(
    kind: ModelKind,
    split: Split,
    partition: &str,
    traces: &[AxisTrace; 3],
) -> Result<MetricsReport> {
    let mut axes = Vec::with_capacity(3);
    for (axis, tr) in Axis::ALL.into_iter().zip(traces) {
        let ctx = |e: Error| match e {
            Error::InsufficientData(m) => Error::InsufficientData(format!("axis {axis}: {m}")),
            Error::Numerical(m) => Error::Numerical(format!("axis {axis}: {m}")),
            other => other,
        };
        axes.push(AxisMetrics {
            axis,
            r2: r_squared(&tr.truth, &tr.prediction).map_err(ctx)?,
            mae: mae(&tr.truth, &tr.prediction).map_err(ctx)?,
            n: tr.truth.len(),
            skipped: tr.skipped,
        });
    }
    Ok(MetricsReport {
        kind,
        split,
        partition: partition.to_string(),
        axes: [axes[0], axes[1], axes[2]],
    })
}

/// Evaluates a model on the samples of `ds` labelled `split`.
pub fn evaluate(
    model: &IdentifiedModel,
    ds: &PreparedDataset,
    partition: Option<&Partition>,
    split: Split,
) -> Result<MetricsReport> {
    let traces = predict_dataset(model, ds, partition, split);
    let desc = partition.map_or_else(|| "all".to_string(), |p| p.description.clone());
    metrics_from_traces(model.kind, split, &desc, &traces)
}

/// Identifies on the training side of a partition, reusing prebuilt
/// systems over the whole dataset.
pub fn identify_on(
    systems: &[RegressionSystem; 3],
    partition: &Partition,
    h: f64,
) -> Result<IdentifiedModel> {
    let train =
        [0, 1, 2].map(|i| systems[i].select(|r| partition.label(r.segment, r.k) == Split::Train));
    let mut model = identify_systems(&train, h)?;
    model.metadata.training = Some(partition.description.clone());
    Ok(model)
}

/// Training and validation metrics of one partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionEvaluation {
    pub train_fraction: f64,
    pub validation_fraction: f64,
    pub training: MetricsReport,
    pub validation: MetricsReport,
}

fn run_partition(
    ds: &PreparedDataset,
    systems: &[RegressionSystem; 3],
    p: &Partition,
) -> Result<(IdentifiedModel, PartitionEvaluation)> {
    let model = identify_on(systems, p, ds.h)?;
    let training = evaluate(&model, ds, Some(p), Split::Train)?;
    let validation = evaluate(&model, ds, Some(p), Split::Validation)?;
    let eval = PartitionEvaluation {
        train_fraction: p.fraction(Split::Train),
        validation_fraction: p.fraction(Split::Validation),
        training,
        validation,
    };
    Ok((model, eval))
}

/// Identifies on the training side of a given partition and evaluates
/// both sides.
pub fn identify_and_evaluate_on(
    ds: &PreparedDataset,
    kind: ModelKind,
    p: &Partition,
) -> Result<(IdentifiedModel, PartitionEvaluation)> {
    run_partition(ds, &build_systems(ds, kind)?, p)
}

/// Partition, identify on the training side, evaluate both sides.
pub fn identify_and_evaluate(
    ds: &PreparedDataset,
    kind: ModelKind,
    spec: &PartitionSpec,
) -> Result<(IdentifiedModel, PartitionEvaluation)> {
    let systems = build_systems(ds, kind)?;
    run_partition(ds, &systems, &partition(ds, spec)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisSummary {
    pub axis: Axis,
    pub r2_mean: f64,
    pub r2_sd: f64,
    pub mae_mean: f64,
    pub mae_sd: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport {
    pub kind: ModelKind,
    pub method: PartitionMethod,
    pub train_fraction: f64,
    pub repetitions: usize,
    pub seeds: Vec<u64>,
    pub training: [AxisSummary; 3],
    pub validation: [AxisSummary; 3],
}

impl SensitivityReport {
    pub fn max_r2_sd(&self, split: Split) -> f64 {
        let s = if split == Split::Train {
            &self.training
        } else {
            &self.validation
        };
        s.iter().map(|a| a.r2_sd).fold(0.0, f64::max)
    }
}

/// Seed of repetition `i` of a study with base seed `base`.
pub fn repetition_seed(base: u64, i: usize) -> u64 {
    base.wrapping_add(i as u64)
}

fn summarize(reports: &[&MetricsReport]) -> Result<[AxisSummary; 3]> {
    let mut out = Vec::with_capacity(3);
    for axis in Axis::ALL {
        let r2: Vec<f64> = reports.iter().map(|r| r.axis(axis).r2).collect();
        let ma: Vec<f64> = reports.iter().map(|r| r.axis(axis).mae).collect();
        let (r2_mean, r2_sd) = mean_sd(&r2)?;
        let (mae_mean, mae_sd) = mean_sd(&ma)?;
        out.push(AxisSummary {
            axis,
            r2_mean,
            r2_sd,
            mae_mean,
            mae_sd,
        });
    }
    Ok([out[0], out[1], out[2]])
}

/// Repeats partition, identification and evaluation once per seed and
/// aggregates mean and sample SD per axis and metric.
pub fn sensitivity_study_with_seeds(
    ds: &PreparedDataset,
    kind: ModelKind,
    spec: &PartitionSpec,
    seeds: &[u64],
) -> Result<SensitivityReport> {
    if seeds.len() < 2 {
        return Err(invalid("a sensitivity study needs at least 2 repetitions"));
    }
    spec.validate()?;
    let systems = build_systems(ds, kind)?;
    let evals: Vec<PartitionEvaluation> = seeds
        .par_iter()
        .enumerate()
        .map(|(i, &seed)| {
            let p = partition(ds, &spec.with_seed(seed))?;
            run_partition(ds, &systems, &p)
                .map(|r| r.1)
                .map_err(|e| match e {
                    Error::InsufficientData(m) => {
                        Error::InsufficientData(format!("repetition {i} (seed {seed}): {m}"))
                    }
                    Error::Numerical(m) => {
                        Error::Numerical(format!("repetition {i} (seed {seed}): {m}"))
                    }
                    other => other,
                })
        })
        .collect::<Result<_>>()?;
    Ok(SensitivityReport {
        kind,
        method: spec.method,
        train_fraction: spec.train_fraction,
        repetitions: seeds.len(),
        seeds: seeds.to_vec(),
        training: summarize(&evals.iter().map(|e| &e.training).collect::<Vec<_>>())?,
        validation: summarize(&evals.iter().map(|e| &e.validation).collect::<Vec<_>>())?,
    })
}

/// [`sensitivity_study_with_seeds`] with seeds counted up from `spec.seed`.
pub fn sensitivity_study(
    ds: &PreparedDataset,
    kind: ModelKind,
    spec: &PartitionSpec,
    repetitions: usize,
) -> Result<SensitivityReport> {
    let seeds: Vec<u64> = (0..repetitions)
        .map(|i| repetition_seed(spec.seed, i))
        .collect();
    sensitivity_study_with_seeds(ds, kind, spec, &seeds)
}

/// One row of a training-share sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub requested_fraction: f64,
    pub evaluation: PartitionEvaluation,
}

/// Trains on each share in `fractions` and evaluates every model on the
/// same held-out validation share.
pub fn training_fraction_sweep(
    ds: &PreparedDataset,
    kind: ModelKind,
    method: PartitionMethod,
    fractions: &[f64],
    validation_fraction: f64,
    seed: u64,
) -> Result<Vec<SweepRow>> {
    if fractions.is_empty() {
        return Err(invalid("the sweep needs at least one training share"));
    }
    let systems = build_systems(ds, kind)?;
    fractions
        .iter()
        .map(|&f| {
            let p = partition_with_validation(ds, method, f, validation_fraction, seed)?;
            let (_, evaluation) = run_partition(ds, &systems, &p)?;
            Ok(SweepRow {
                requested_fraction: f,
                evaluation,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::{generate_discrete, DiscreteGenConfig, GroundTruth};

    fn data(kind: ModelKind) -> PreparedDataset {
        let gt = match kind {
            ModelKind::Static => GroundTruth::default(),
            ModelKind::Dynamic => GroundTruth::default()
                .with_dynamic_thrust(0.9, 0.1)
                .unwrap(),
        };
        generate_discrete(
            &gt,
            &DiscreteGenConfig {
                steps: 1500,
                segments: 4,
                ..DiscreteGenConfig::default()
            },
        )
        .unwrap()
    }

    #[test]
    fn zero_model_is_persistence() {
        let ds = data(ModelKind::Static);
        for kind in [ModelKind::Static, ModelKind::Dynamic] {
            let z = |a| vec![0.0; kind.param_count(a)];
            let alpha = (kind == ModelKind::Dynamic).then_some(crate::estimator::AlphaResolution {
                alpha: 0.0,
                r_u1: 0.0,
                r_v2: 0.0,
                r_r3: 0.0,
                residual: 0.0,
                stable: true,
                iterations: 0,
            });
            let m = IdentifiedModel::from_vectors(
                kind,
                z(Axis::Surge),
                z(Axis::Sway),
                z(Axis::Yaw),
                alpha,
                0.2,
            )
            .unwrap();
            let seg = &ds.segments[0];
            for i in 1..seg.len() - 1 {
                for axis in Axis::ALL {
                    if let Some(p) = predict_axis(kind, m.vector(axis), axis, seg, i) {
                        assert_eq!(p, seg[i].nu.component(axis));
                    }
                }
            }
        }
    }

    #[test]
    fn true_model_predicts_exactly() {
        for kind in [ModelKind::Static, ModelKind::Dynamic] {
            let ds = data(kind);
            let model = crate::estimator::identify(&ds, kind).unwrap();
            let traces = predict_dataset(&model, &ds, None, Split::Train);
            for tr in &traces {
                for (t, p) in tr.truth.iter().zip(&tr.prediction) {
                    assert!((t - p).abs() < 1e-10, "{kind}");
                }
            }
            let m = evaluate(&model, &ds, None, Split::Train).unwrap();
            assert!(m.min_r2() > 1.0 - 1e-12);
        }
    }

    #[test]
    fn mixed_region_rows_are_skipped() {
        let ds = data(ModelKind::Dynamic);
        let model = crate::estimator::identify(&ds, ModelKind::Dynamic).unwrap();
        let traces = predict_dataset(&model, &ds, None, Split::Train);
        assert!(traces[1].skipped > 0);
        for r in &traces[1].rows {
            let seg = &ds.segments[r.segment];
            assert_eq!(seg[r.k - 1].region(), seg[r.k].region());
        }
    }

    #[test]
    fn same_seed_gives_zero_sd() {
        let ds = data(ModelKind::Static);
        let spec = PartitionSpec::by_points(0.7, 5).unwrap();
        let rep = sensitivity_study_with_seeds(&ds, ModelKind::Static, &spec, &[5, 5]).unwrap();
        assert_eq!(rep.max_r2_sd(Split::Validation), 0.0);
        assert!(rep.validation.iter().all(|a| a.mae_sd == 0.0));
        assert!(sensitivity_study(&ds, ModelKind::Static, &spec, 1).is_err());
    }

    #[test]
    fn sweep_single_row() {
        let ds = data(ModelKind::Static);
        let rows = training_fraction_sweep(
            &ds,
            ModelKind::Static,
            PartitionMethod::ByPoints,
            &[0.7],
            0.3,
            1,
        )
        .unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].evaluation.validation.min_r2() > 0.999);
        assert!(training_fraction_sweep(
            &ds,
            ModelKind::Static,
            PartitionMethod::ByPoints,
            &[0.8],
            0.3,
            1
        )
        .is_err());
    }

    #[test]
    fn free_run_of_true_model_tracks_data() {
        let ds = data(ModelKind::Static);
        let model = crate::estimator::identify(&ds, ModelKind::Static).unwrap();
        let (sim, _) = free_run(&model, &ds.segments[0]);
        for (a, b) in sim.iter().zip(&ds.segments[0]) {
            assert!((a.u - b.nu.u).abs() < 1e-8 && (a.r - b.nu.r).abs() < 1e-8);
        }
    }
}
