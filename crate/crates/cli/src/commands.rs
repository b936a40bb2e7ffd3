use std::path::PathBuf;

use asv_gain::dataprep::prepare;
use asv_gain::estimator::identify;
use asv_gain::model::{Axis, ModelKind};
use asv_gain::synth::{
    emit_sensor_logs, generate_discrete, known_params_to_x, simulate_continuous, ContinuousConfig,
    DiscreteGenConfig, DisturbanceMode, GroundTruth, ThrustModel,
};
use asv_gain::validate::{
    identify_and_evaluate_on, metrics_from_traces, partition, partition_with_validation,
    predict_dataset, sensitivity_study, training_fraction_sweep, AxisTrace, MetricsReport,
    Partition, Split,
};
use serde::Serialize;

use crate::config::{Generator, RunConfig};
use crate::error::{CliError, CliResult, ResultExt};
use crate::io::{
    read_bytes, read_dataset, read_raw_logs, write_atomic, write_csv, write_dataset, write_raw_logs,
};
use crate::model_file::{ModelFile, Provenance};
use crate::report::{render, MetricsFile, TIDY_HEADER};

fn write_json<T: Serialize>(path: &std::path::Path, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).at(path)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}

#[derive(Debug, Serialize)]
struct PrepareSummary {
    rows: usize,
    segments: usize,
    minutes: f64,
    grid_points: usize,
    flagged_pwm: usize,
    dropped_segments: usize,
}

/// Raw logs to a prepared dataset and its summary.
pub fn cmd_prepare(cfg: &RunConfig) -> CliResult<()> {
    let raw = read_raw_logs(&cfg.logs_dir(), &cfg.columns)?;
    let geo = cfg
        .geo
        .reference(raw.gnss.first().map(|f| (f.lat, f.lon)))?;
    let rep = prepare(&raw, &geo, &cfg.prep)?;
    let ds = &rep.dataset;
    let path = cfg.out_file("prepared.csv");
    write_dataset(&path, ds)?;
    let summary = PrepareSummary {
        rows: ds.len(),
        segments: ds.segment_count(),
        minutes: ds.minutes(),
        grid_points: rep.grid_points,
        flagged_pwm: rep.flagged_pwm,
        dropped_segments: rep.dropped_segments,
    };
    write_json(&cfg.out_file("prepare_summary.json"), &summary)?;
    println!(
        "prepared {} points in {} segments ({:.2} min) from {} grid points; {} PWM samples flagged, {} short segments dropped",
        summary.rows, summary.segments, summary.minutes, summary.grid_points, summary.flagged_pwm, summary.dropped_segments
    );
    println!("wrote {}", path.display());
    Ok(())
}

/// Prepared dataset to a model file.
pub fn cmd_identify(cfg: &RunConfig) -> CliResult<()> {
    let path = cfg.dataset_path();
    let bytes = read_bytes(&path)?;
    let ds = read_dataset(&path, cfg.h)?;
    let model = identify(&ds, cfg.kind)?;
    for (axis, r) in Axis::ALL.iter().zip(&model.reports) {
        let note = match (r.rank_deficient, r.structured) {
            (true, true) => ", null space fixed by structure",
            (true, false) => ", rank deficient: minimum-norm solution",
            _ => "",
        };
        println!(
            "{axis}: {} rows, rank {}/{}, residual norm {:.6e}, condition {:.3e}{note}",
            r.rows_used,
            r.rank,
            r.solution.len(),
            r.residual_norm,
            r.condition_estimate
        );
    }
    if let Some(a) = &model.alpha {
        println!(
            "alpha {:.9} ({}), relation residual {:.3e}",
            a.alpha,
            if a.stable { "stable" } else { "UNSTABLE" },
            a.residual
        );
    }
    let out = cfg.out_file("model.json");
    ModelFile::from_model(&model, Provenance::new(&bytes, &cfg.canonical_bytes())).write(&out)?;
    println!("wrote {}", out.display());
    Ok(())
}

fn trace_rows<'a>(
    split: &'a str,
    traces: &'a [AxisTrace; 3],
) -> impl Iterator<Item = Vec<String>> + 'a {
    Axis::ALL
        .into_iter()
        .zip(traces)
        .flat_map(move |(axis, tr)| {
            (0..tr.truth.len()).map(move |i| {
                vec![
                    tr.t[i].to_string(),
                    axis.to_string(),
                    tr.rows[i].segment.to_string(),
                    tr.rows[i].k.to_string(),
                    split.to_string(),
                    tr.truth[i].to_string(),
                    tr.prediction[i].to_string(),
                ]
            })
        })
}

const TRACE_HEADER: [&str; 7] = ["t", "axis", "segment", "k", "split", "truth", "prediction"];

fn print_metrics(label: &str, r: &MetricsReport) {
    for a in &r.axes {
        println!(
            "{label} {}: R2 {:.6}, MAE {:.4e} over {} rows",
            a.axis, a.r2, a.mae, a.n
        );
    }
}

fn metrics_csv(path: &std::path::Path, reports: &[(&str, &MetricsReport)]) -> CliResult<()> {
    let rows = reports.iter().flat_map(|(label, r)| {
        r.axes.iter().map(move |a| {
            vec![
                label.to_string(),
                a.axis.to_string(),
                a.r2.to_string(),
                a.mae.to_string(),
                a.n.to_string(),
                a.skipped.to_string(),
            ]
        })
    });
    write_csv(path, &["split", "axis", "r2", "mae", "n", "skipped"], rows)
}

fn cfg_partition(
    cfg: &RunConfig,
    ds: &asv_gain::dataprep::PreparedDataset,
) -> CliResult<Partition> {
    let spec = cfg.partition_spec()?;
    Ok(match cfg.partition.validation_fraction {
        Some(v) => partition_with_validation(ds, spec.method, spec.train_fraction, v, spec.seed)?,
        None => partition(ds, &spec)?,
    })
}

/// Metrics, prediction traces and the optional sensitivity and sweep
/// studies.
pub fn cmd_validate(cfg: &RunConfig) -> CliResult<()> {
    let ds = read_dataset(&cfg.dataset_path(), cfg.h)?;
    let traces_path = cfg.out_file("traces.csv");
    if let Some(mp) = &cfg.paths.model {
        let model = ModelFile::read(&cfg.resolve(mp))?.to_model()?;
        let traces = predict_dataset(&model, &ds, None, Split::Validation);
        let report = metrics_from_traces(model.kind, Split::Validation, "all", &traces)?;
        print_metrics("all", &report);
        write_csv(&traces_path, &TRACE_HEADER, trace_rows("all", &traces))?;
        metrics_csv(&cfg.out_file("metrics.csv"), &[("all", &report)])?;
        MetricsFile::Metrics { report }.write(&cfg.out_file("metrics.json"))?;
    } else {
        let p = cfg_partition(cfg, &ds)?;
        let (model, evaluation) = identify_and_evaluate_on(&ds, cfg.kind, &p)?;
        print_metrics("training", &evaluation.training);
        print_metrics("validation", &evaluation.validation);
        let train = predict_dataset(&model, &ds, Some(&p), Split::Train);
        let val = predict_dataset(&model, &ds, Some(&p), Split::Validation);
        write_csv(
            &traces_path,
            &TRACE_HEADER,
            trace_rows("training", &train).chain(trace_rows("validation", &val)),
        )?;
        metrics_csv(
            &cfg.out_file("metrics.csv"),
            &[
                ("training", &evaluation.training),
                ("validation", &evaluation.validation),
            ],
        )?;
        MetricsFile::Evaluation {
            kind: cfg.kind,
            evaluation,
        }
        .write(&cfg.out_file("metrics.json"))?;
    }
    println!("wrote {}", traces_path.display());

    if cfg.partition.repetitions >= 2 {
        let spec = cfg.partition_spec()?;
        let report = sensitivity_study(&ds, cfg.kind, &spec, cfg.partition.repetitions)?;
        for (label, s) in [
            ("training", &report.training),
            ("validation", &report.validation),
        ] {
            for a in s {
                println!(
                    "sensitivity {label} {}: R2 {:.6} +- {:.3e}, MAE {:.4e} +- {:.3e}",
                    a.axis, a.r2_mean, a.r2_sd, a.mae_mean, a.mae_sd
                );
            }
        }
        let rows = [
            ("training", &report.training),
            ("validation", &report.validation),
        ]
        .into_iter()
        .flat_map(|(label, s)| {
            s.iter().map(move |a| {
                vec![
                    label.to_string(),
                    a.axis.to_string(),
                    a.r2_mean.to_string(),
                    a.r2_sd.to_string(),
                    a.mae_mean.to_string(),
                    a.mae_sd.to_string(),
                ]
            })
        });
        write_csv(
            &cfg.out_file("sensitivity.csv"),
            &["split", "axis", "r2_mean", "r2_sd", "mae_mean", "mae_sd"],
            rows,
        )?;
        MetricsFile::Sensitivity { report }.write(&cfg.out_file("sensitivity.json"))?;
    }

    if !cfg.partition.sweep.is_empty() {
        let largest = cfg.partition.sweep.iter().copied().fold(0.0, f64::max);
        let val = cfg.partition.validation_fraction.unwrap_or(1.0 - largest);
        let rows = training_fraction_sweep(
            &ds,
            cfg.kind,
            cfg.partition.method,
            &cfg.partition.sweep,
            val,
            cfg.seed,
        )?;
        let csv_rows = rows.iter().flat_map(|row| {
            let e = &row.evaluation;
            e.training
                .axes
                .iter()
                .zip(&e.validation.axes)
                .map(move |(t, v)| {
                    vec![
                        row.requested_fraction.to_string(),
                        t.axis.to_string(),
                        t.r2.to_string(),
                        v.r2.to_string(),
                        t.mae.to_string(),
                        v.mae.to_string(),
                    ]
                })
        });
        write_csv(
            &cfg.out_file("sweep.csv"),
            &[
                "train_fraction",
                "axis",
                "train_r2",
                "val_r2",
                "train_mae",
                "val_mae",
            ],
            csv_rows,
        )?;
        MetricsFile::Sweep {
            kind: cfg.kind,
            method: cfg.partition.method,
            validation_fraction: val,
            rows,
        }
        .write(&cfg.out_file("sweep.json"))?;
        println!(
            "sweep over {} training shares written",
            cfg.partition.sweep.len()
        );
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct TruthSidecar<'a> {
    generator: Generator,
    seed: u64,
    duration_s: f64,
    truth: &'a GroundTruth,
    excitation: &'a asv_gain::synth::Excitation,
    disturbance: &'a DisturbanceMode,
    lat0: f64,
    lon0: f64,
    antenna_offset: [f64; 2],
}

/// The configured vessel with the propeller model the run asks for.
fn simulated_truth(cfg: &RunConfig) -> CliResult<GroundTruth> {
    let mut gt = cfg.simulate.truth.clone();
    let st = *gt.thrust.static_part();
    gt.thrust = match (cfg.kind, gt.thrust) {
        (ModelKind::Static, _) => ThrustModel::Static(st),
        (ModelKind::Dynamic, ThrustModel::Dynamic(p)) => ThrustModel::Dynamic(p),
        (ModelKind::Dynamic, ThrustModel::Static(_)) => {
            return Ok(
                gt.with_dynamic_thrust(cfg.simulate.propeller_alpha, cfg.simulate.propeller_beta)?
            )
        }
    };
    Ok(gt)
}

/// Synthetic logs (continuous generator) or an in-class prepared dataset
/// (discrete generator), with the ground truth and the parameter vectors
/// identification should return.
pub fn cmd_simulate(cfg: &RunConfig) -> CliResult<()> {
    let sim = &cfg.simulate;
    let gt = simulated_truth(cfg)?;
    let excitation = cfg.default_excitation();
    let geo = cfg.geo.reference(None)?;
    let out = cfg.out_dir();
    let disturbance = match sim.generator {
        Generator::Continuous => DisturbanceMode::FullFossen,
        Generator::Discrete => sim.disturbance,
    };
    match sim.generator {
        Generator::Continuous => {
            let cc = ContinuousConfig {
                substeps: sim.substeps,
                ..ContinuousConfig::default()
            };
            let traj = simulate_continuous(&gt, &excitation, sim.duration_s, &cc)?;
            let raw = emit_sensor_logs(&traj, &geo, &sim.logs)?;
            write_raw_logs(&out, &raw)?;
            write_dataset(&out.join("truth_grid.csv"), &traj.grid_dataset()?)?;
            println!(
                "simulated {:.1} s: {} GNSS, {} heading and {} PWM samples",
                traj.duration(),
                raw.gnss.len(),
                raw.heading.len(),
                raw.pwm.len()
            );
        }
        Generator::Discrete => {
            if sim.duration_s.is_nan() || sim.duration_s <= 0.0 {
                return Err(CliError::io("config: simulate.duration_s must be positive"));
            }
            let dc = DiscreteGenConfig {
                steps: (sim.duration_s / cfg.h).round() as usize,
                segments: sim.segments,
                excitation: excitation.clone(),
                noise_std: sim.noise_std,
                disturbance,
                seed: cfg.seed,
                ..DiscreteGenConfig::default()
            };
            let ds = generate_discrete(&gt, &dc)?;
            write_dataset(&out.join("prepared.csv"), &ds)?;
            println!(
                "generated {} in-class samples in {} segments",
                ds.len(),
                ds.segment_count()
            );
        }
    }
    let sidecar = TruthSidecar {
        generator: sim.generator,
        seed: cfg.seed,
        duration_s: sim.duration_s,
        truth: &gt,
        excitation: &excitation,
        disturbance: &disturbance,
        lat0: geo.lat0,
        lon0: geo.lon0,
        antenna_offset: geo.antenna_offset,
    };
    write_json(&out.join("truth.json"), &sidecar)?;
    write_json(
        &out.join("expected.json"),
        &known_params_to_x(&gt, &disturbance)?,
    )?;
    println!("wrote {}", out.display());
    Ok(())
}

/// Plain-text and tidy tables of the metrics files.
pub fn cmd_report(cfg: &RunConfig) -> CliResult<()> {
    let inputs: Vec<PathBuf> = if cfg.report.inputs.is_empty() {
        ["metrics.json", "sensitivity.json", "sweep.json"]
            .iter()
            .map(|n| cfg.out_file(n))
            .filter(|p| p.exists())
            .collect()
    } else {
        cfg.report.inputs.iter().map(|p| cfg.resolve(p)).collect()
    };
    if inputs.is_empty() {
        return Err(CliError::io(format!(
            "no metrics files found in {}",
            cfg.out_dir().display()
        )));
    }
    let files = inputs
        .iter()
        .map(|p| MetricsFile::read(p))
        .collect::<CliResult<Vec<_>>>()?;
    let rendered = render(&files);
    write_atomic(&cfg.out_file("report.txt"), rendered.text.as_bytes())?;
    write_csv(
        &cfg.out_file("report.csv"),
        &TIDY_HEADER,
        rendered.rows.iter().map(|r| r.fields()),
    )?;
    print!("{}", rendered.text);
    Ok(())
}
