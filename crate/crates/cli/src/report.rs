use std::fmt::Write as _;
use std::path::Path;

use asv_gain::model::ModelKind;
use asv_gain::validate::{
    AxisSummary, MetricsReport, PartitionEvaluation, PartitionMethod, SensitivityReport, SweepRow,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliResult, ResultExt};
use crate::io::{read_bytes, write_atomic};

/// Any metrics file written by `validate`, tagged with its type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum MetricsFile {
    /// A given model evaluated on the whole dataset.
    Metrics {
        report: MetricsReport,
    },
    /// Identification on one partition, evaluated on both sides.
    Evaluation {
        kind: ModelKind,
        evaluation: PartitionEvaluation,
    },
    Sensitivity {
        report: SensitivityReport,
    },
    Sweep {
        kind: ModelKind,
        method: PartitionMethod,
        validation_fraction: f64,
        rows: Vec<SweepRow>,
    },
}

impl MetricsFile {
    pub fn write(&self, path: &Path) -> CliResult<()> {
        let mut text = serde_json::to_string_pretty(self).at(path)?;
        text.push('\n');
        write_atomic(path, text.as_bytes())
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        serde_json::from_slice(&read_bytes(path)?).at(path)
    }
}

/// One value of the tidy report table.
#[derive(Debug, Clone, PartialEq)]
pub struct TidyRow {
    pub section: &'static str,
    pub kind: ModelKind,
    pub split: String,
    pub train_fraction: f64,
    pub axis: String,
    pub metric: &'static str,
    pub value: f64,
}

pub const TIDY_HEADER: [&str; 7] = [
    "section",
    "kind",
    "split",
    "train_fraction",
    "axis",
    "metric",
    "value",
];

impl TidyRow {
    pub fn fields(&self) -> Vec<String> {
        vec![
            self.section.to_string(),
            self.kind.to_string(),
            self.split.clone(),
            self.train_fraction.to_string(),
            self.axis.clone(),
            self.metric.to_string(),
            self.value.to_string(),
        ]
    }
}

/// Plain-text tables plus the same numbers in tidy form.
#[derive(Debug, Default)]
pub struct Rendered {
    pub text: String,
    pub rows: Vec<TidyRow>,
}

fn metrics_table(
    out: &mut Rendered,
    section: &'static str,
    label: &str,
    r: &MetricsReport,
    train_fraction: f64,
) {
    for a in &r.axes {
        let _ = writeln!(
            out.text,
            "{label:<12} {:<4} {:>10.6} {:>12.4e} {:>8} {:>8}",
            a.axis, a.r2, a.mae, a.n, a.skipped
        );
        for (metric, value) in [("r2", a.r2), ("mae", a.mae), ("n", a.n as f64)] {
            out.rows.push(TidyRow {
                section,
                kind: r.kind,
                split: label.to_string(),
                train_fraction,
                axis: a.axis.to_string(),
                metric,
                value,
            });
        }
    }
}

fn summary_table(
    out: &mut Rendered,
    kind: ModelKind,
    label: &str,
    s: &[AxisSummary; 3],
    train_fraction: f64,
) {
    for a in s {
        let _ = writeln!(
            out.text,
            "{label:<12} {:<4} {:>10.6} {:>10.3e} {:>12.4e} {:>10.3e}",
            a.axis, a.r2_mean, a.r2_sd, a.mae_mean, a.mae_sd
        );
        for (metric, value) in [
            ("r2_mean", a.r2_mean),
            ("r2_sd", a.r2_sd),
            ("mae_mean", a.mae_mean),
            ("mae_sd", a.mae_sd),
        ] {
            out.rows.push(TidyRow {
                section: "sensitivity",
                kind,
                split: label.to_string(),
                train_fraction,
                axis: a.axis.to_string(),
                metric,
                value,
            });
        }
    }
}

const METRICS_HEAD: &str = "split        axis         R2          MAE        n  skipped";

/// Renders each file as one section, in the order given.
pub fn render(files: &[MetricsFile]) -> Rendered {
    let mut out = Rendered::default();
    for (i, f) in files.iter().enumerate() {
        if i > 0 {
            out.text.push('\n');
        }
        match f {
            MetricsFile::Metrics { report } => {
                let _ = writeln!(
                    out.text,
                    "One-step prediction, {} model, {}",
                    report.kind, report.partition
                );
                let _ = writeln!(out.text, "{METRICS_HEAD}");
                metrics_table(&mut out, "metrics", "all", report, 1.0);
            }
            MetricsFile::Evaluation {
                kind,
                evaluation: e,
            } => {
                let _ = writeln!(
                    out.text,
                    "One-step prediction, {kind} model, {}",
                    e.training.partition
                );
                let _ = writeln!(
                    out.text,
                    "training share {:.4}, validation share {:.4}",
                    e.train_fraction, e.validation_fraction
                );
                let _ = writeln!(out.text, "{METRICS_HEAD}");
                metrics_table(
                    &mut out,
                    "evaluation",
                    "training",
                    &e.training,
                    e.train_fraction,
                );
                metrics_table(
                    &mut out,
                    "evaluation",
                    "validation",
                    &e.validation,
                    e.train_fraction,
                );
            }
            MetricsFile::Sensitivity { report: s } => {
                let _ = writeln!(
                    out.text,
                    "Sensitivity, {} model, {}, training share {}, {} repetitions",
                    s.kind, s.method, s.train_fraction, s.repetitions
                );
                let _ = writeln!(
                    out.text,
                    "split        axis    R2 mean      R2 SD     MAE mean     MAE SD"
                );
                summary_table(&mut out, s.kind, "training", &s.training, s.train_fraction);
                summary_table(
                    &mut out,
                    s.kind,
                    "validation",
                    &s.validation,
                    s.train_fraction,
                );
            }
            MetricsFile::Sweep {
                kind,
                method,
                validation_fraction,
                rows,
            } => {
                let _ = writeln!(
                    out.text,
                    "Training share sweep, {kind} model, {method}, validation share {validation_fraction}"
                );
                let _ = writeln!(
                    out.text,
                    "share  axis   train R2     val R2    train MAE      val MAE"
                );
                for row in rows {
                    let e = &row.evaluation;
                    for (t, v) in e.training.axes.iter().zip(&e.validation.axes) {
                        let _ = writeln!(
                            out.text,
                            "{:<6.2} {:<4} {:>10.6} {:>10.6} {:>12.4e} {:>12.4e}",
                            row.requested_fraction, t.axis, t.r2, v.r2, t.mae, v.mae
                        );
                    }
                    for (label, r) in [("training", &e.training), ("validation", &e.validation)] {
                        for a in &r.axes {
                            for (metric, value) in [("r2", a.r2), ("mae", a.mae)] {
                                out.rows.push(TidyRow {
                                    section: "sweep",
                                    kind: *kind,
                                    split: label.to_string(),
                                    train_fraction: row.requested_fraction,
                                    axis: a.axis.to_string(),
                                    metric,
                                    value,
                                });
                            }
                        }
                    }
                }
            }
        }
    }
    out
}
