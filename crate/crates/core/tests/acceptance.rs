//! Acceptance suite: one line per criterion, non-zero exit if any fails.

use std::time::Instant;

use asv_gain::dataprep::{
    build_prepared_dataset, GeoReference, GnssFix, HeadingSample, PrepConfig, PreparedDataset,
    PwmSample, RawLogBundle,
};
use asv_gain::estimator::{identify, identify_dynamic, identify_static, IdentifiedModel};
use asv_gain::model::{
    classify_region, input_gain_dynamic_step, rotation_matrix, Axis, BodyVelocity,
    DynamicGainParams, DynamicSwayYawParams, ModelKind, OperatingRegion, PwmFrame,
};
use asv_gain::regressors::{regressor_row, row_eligible, LumpedDisturbanceShape};
use asv_gain::synth::{
    assemble_matrices, emit_sensor_logs, generate_discrete, known_params_to_x, simulate_continuous,
    ContinuousConfig, DiscreteGenConfig, DisturbanceMode, Excitation, ExpectedParams, GroundTruth,
    LogConfig, Trajectory,
};
use asv_gain::validate::{
    evaluate, identify_and_evaluate, mae, r_squared, sensitivity_study, PartitionSpec, Split,
};
use proptest::prelude::*;
use proptest::test_runner::{Config as PropConfig, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

enum Outcome {
    Pass(String),
    Fail(String),
}

type Check = Result<String, String>;
type Criterion = Box<dyn Fn() -> Outcome>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn e2s<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Largest entry-wise error relative to the expected entry. Entries that
/// vanish to rounding (below 1e-12 of the largest entry) are judged
/// against the largest entry instead.
fn worst_relative(got: &[f64], want: &[f64]) -> f64 {
    let scale = want.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    got.iter()
        .zip(want)
        .map(|(g, w)| {
            (g - w).abs()
                / if w.abs() > 1e-12 * scale {
                    w.abs()
                } else {
                    scale
                }
        })
        .fold(0.0, f64::max)
}

fn recovery_error(model: &IdentifiedModel, expected: &ExpectedParams) -> f64 {
    Axis::ALL
        .iter()
        .map(|&a| worst_relative(model.vector(a), expected.vector(a)))
        .fold(0.0, f64::max)
}

// 1
fn exact_static_recovery() -> Check {
    let start = Instant::now();
    let gt = GroundTruth::default();
    let ds = e2s(generate_discrete(
        &gt,
        &DiscreteGenConfig {
            steps: 5000,
            ..DiscreteGenConfig::default()
        },
    ))?;
    let model = e2s(identify_static(&ds))?;
    let elapsed = start.elapsed().as_secs_f64();
    let expected = e2s(known_params_to_x(&gt, &DisturbanceMode::FullFossen))?;
    let err = recovery_error(&model, &expected);
    ensure(
        err <= 1e-8,
        format!("worst relative error {err:.3e} > 1e-8"),
    )?;
    ensure(elapsed < 5.0, format!("took {elapsed:.2} s"))?;
    Ok(format!(
        "5000 PRBS steps, worst relative error {err:.2e}, {elapsed:.3} s"
    ))
}

// 2
fn exact_dynamic_recovery() -> Check {
    let start = Instant::now();
    let gt = e2s(GroundTruth::default().with_dynamic_thrust(0.9, 0.1))?;
    let ds = e2s(generate_discrete(
        &gt,
        &DiscreteGenConfig {
            steps: 5000,
            ..DiscreteGenConfig::default()
        },
    ))?;
    let model = e2s(identify_dynamic(&ds))?;
    let elapsed = start.elapsed().as_secs_f64();
    let expected = e2s(known_params_to_x(&gt, &DisturbanceMode::FullFossen))?;
    let err = recovery_error(&model, &expected);
    let a = model.alpha.ok_or("no alpha resolved")?;
    ensure(
        err <= 1e-6,
        format!("worst relative error {err:.3e} > 1e-6"),
    )?;
    ensure(
        (a.alpha - 0.9).abs() <= 1e-6,
        format!("alpha {} off 0.9", a.alpha),
    )?;
    ensure(
        a.residual <= 1e-10,
        format!("alpha residual {:.3e}", a.residual),
    )?;
    ensure(a.stable, "alpha not flagged stable")?;
    ensure(elapsed < 5.0, format!("took {elapsed:.2} s"))?;
    Ok(format!(
        "worst relative error {err:.2e}, alpha {:.9} (residual {:.1e}), {elapsed:.3} s",
        a.alpha, a.residual
    ))
}

// 3
fn initial_condition_decay() -> Check {
    let alpha = 0.9;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let x: Vec<f64> = (0..21).map(|_| rng.random_range(-0.1..0.1)).collect();
    let p = DynamicGainParams::SwayYaw(e2s(DynamicSwayYawParams::from_slice(&x))?);
    let frames = e2s(Excitation::prbs(3).frames(200, 0.2, 0.0, 0))?;
    let (g0a, g0b) = (0.3, -0.45);
    let (mut ga, mut gb) = (g0a, g0b);
    let mut worst = 0.0f64;
    for (k, f) in frames.iter().enumerate() {
        ga = e2s(input_gain_dynamic_step(ga, f, alpha, &p))?;
        gb = e2s(input_gain_dynamic_step(gb, f, alpha, &p))?;
        let want = alpha.powi(k as i32 + 1) * (g0a - g0b).abs();
        worst = worst.max(((ga - gb).abs() - want).abs());
    }
    ensure(worst <= 1e-12, format!("deviation {worst:.3e}"))?;
    Ok(format!(
        "200 steps, max deviation from alpha^k decay {worst:.1e}"
    ))
}

fn smooth_trajectory(duration: f64) -> Result<Trajectory, String> {
    e2s(simulate_continuous(
        &GroundTruth::default(),
        &Excitation::smooth(),
        duration,
        &ContinuousConfig::default(),
    ))
}

// 4
fn continuous_mismatch() -> Outcome {
    let run = || -> Check {
        let tr = smooth_trajectory(1200.0)?;
        let ds = e2s(tr.grid_dataset())?;
        let spec = e2s(PartitionSpec::by_points(0.7, 4))?;
        let mut parts = Vec::new();
        for kind in [ModelKind::Static, ModelKind::Dynamic] {
            let (_, ev) = e2s(identify_and_evaluate(&ds, kind, &spec))?;
            let v = &ev.validation;
            ensure(
                v.min_r2() >= 0.99,
                format!(
                    "{kind} validation R2 u={:.5} v={:.5} r={:.5}",
                    v.axes[0].r2, v.axes[1].r2, v.axes[2].r2
                ),
            )?;
            parts.push(format!("{kind} min R2 {:.5}", v.min_r2()));
        }
        Ok(format!("{} rows, {}", ds.len(), parts.join(", ")))
    };
    let synthetic = match run() {
        Ok(m) => m,
        Err(e) => return Outcome::Fail(e),
    };
    match std::env::var("ASV_REAL_DATASET") {
        Err(_) => Outcome::Pass(format!(
            "{synthetic}; real-data branch skipped (ASV_REAL_DATASET unset)"
        )),
        Ok(path) => match real_dataset_check(&path) {
            Ok(m) => Outcome::Pass(format!("{synthetic}; {m}")),
            Err(e) => Outcome::Fail(format!("{synthetic}; real data: {e}")),
        },
    }
}

/// `ASV_REAL_DATASET` names a directory holding `gnss.csv`, `heading.csv`
/// and `pwm.csv`, plus an optional `antenna.csv` with one `forward,starboard`
/// row.
fn real_dataset_check(dir: &str) -> Check {
    let dir = std::path::Path::new(dir);
    let rows = |name: &str| -> Result<Vec<Vec<f64>>, String> {
        let mut rd = e2s(csv::Reader::from_path(dir.join(name)))?;
        rd.records()
            .map(|r| {
                let r = e2s(r)?;
                r.iter().map(|f| e2s(f.trim().parse::<f64>())).collect()
            })
            .collect()
    };
    let raw = RawLogBundle {
        gnss: rows("gnss.csv")?
            .iter()
            .map(|r| GnssFix {
                t: r[0],
                lat: r[1],
                lon: r[2],
            })
            .collect(),
        heading: rows("heading.csv")?
            .iter()
            .map(|r| HeadingSample { t: r[0], psi: r[1] })
            .collect(),
        pwm: rows("pwm.csv")?
            .iter()
            .map(|r| PwmSample {
                t: r[0],
                pwm_l: r[1],
                pwm_r: r[2],
            })
            .collect(),
    };
    let offset = match rows("antenna.csv") {
        Ok(r) if !r.is_empty() => [r[0][0], r[0][1]],
        _ => [0.0, 0.0],
    };
    let first = raw.gnss.first().ok_or("empty gnss.csv")?;
    let geo = e2s(GeoReference::new(first.lat, first.lon, offset))?;
    let ds = e2s(build_prepared_dataset(&raw, &geo, &PrepConfig::default()))?;
    let spec = e2s(PartitionSpec::by_points(0.7, 0))?;
    let (_, ev) = e2s(identify_and_evaluate(&ds, ModelKind::Static, &spec))?;
    ensure(
        ev.validation.min_r2() >= 0.95,
        format!("static validation min R2 {:.4}", ev.validation.min_r2()),
    )?;
    let (m, _) = e2s(identify_and_evaluate(&ds, ModelKind::Dynamic, &spec))?;
    let a = m.alpha.map(|a| a.alpha).unwrap_or(f64::NAN);
    ensure(a > 0.95 && a < 1.0, format!("dynamic alpha {a}"))?;
    Ok(format!(
        "real data static min R2 {:.4}, alpha {a:.4}",
        ev.validation.min_r2()
    ))
}

// 5
fn metric_correctness() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let n = rng.random_range(2..200);
        let y: Vec<f64> = (0..n).map(|_| rng.random_range(-3.0..3.0)).collect();
        let p: Vec<f64> = y.iter().map(|v| v + rng.random_range(-0.5..0.5)).collect();
        // Brute-force oracles written out independently.
        let mut mean = 0.0;
        for v in &y {
            mean += v / n as f64;
        }
        let (mut num, mut den, mut abs) = (0.0, 0.0, 0.0);
        for i in 0..n {
            num += (y[i] - p[i]) * (y[i] - p[i]);
            den += (y[i] - mean) * (y[i] - mean);
            abs += (y[i] - p[i]).abs();
        }
        let r2 = e2s(r_squared(&y, &p))?;
        let m = e2s(mae(&y, &p))?;
        worst = worst
            .max((r2 - (1.0 - num / den)).abs())
            .max((m - abs / n as f64).abs());
        ensure(
            e2s(r_squared(&y, &y))? == 1.0 && e2s(mae(&y, &y))? == 0.0,
            "identity metrics",
        )?;
    }
    ensure(worst <= 1e-12, format!("max deviation {worst:.3e}"))?;
    Ok(format!("1000 random series, max deviation {worst:.1e}"))
}

fn rel_rms(truth: &[f64], got: &[f64]) -> f64 {
    let e: f64 = truth.iter().zip(got).map(|(t, g)| (t - g).powi(2)).sum();
    let s: f64 = truth.iter().map(|t| t * t).sum();
    (e / s).sqrt()
}

fn prepare_from(
    tr: &Trajectory,
    geo: &GeoReference,
) -> Result<(RawLogBundle, PreparedDataset), String> {
    let logs = e2s(emit_sensor_logs(tr, geo, &LogConfig::default()))?;
    let ds = e2s(build_prepared_dataset(&logs, geo, &PrepConfig::default()))?;
    Ok((logs, ds))
}

// 6
fn pipeline_closure() -> Check {
    let tr = smooth_trajectory(600.0)?;
    let geo = e2s(GeoReference::new(43.2, 5.4, [0.3, -0.1]))?;
    let (logs, ds) = prepare_from(&tr, &geo)?;
    let mut errs = [0.0; 3];
    for axis in Axis::ALL {
        let (mut t, mut g) = (Vec::new(), Vec::new());
        for (_, _, s) in ds.samples() {
            t.push(tr.nu[s.k as usize * tr.substeps].component(axis));
            g.push(s.nu.component(axis));
        }
        errs[axis.index()] = rel_rms(&t, &g);
    }
    ensure(
        errs.iter().all(|e| *e <= 0.02),
        format!(
            "relative RMS u={:.4} v={:.4} r={:.4}",
            errs[0], errs[1], errs[2]
        ),
    )?;

    // Perturb one sample of each stream and compare every earlier grid value.
    let mut checked = 0usize;
    let t_cut = 240.0 + 0.013;
    for stream in 0..3 {
        let mut bumped = logs.clone();
        match stream {
            0 => {
                let i = bumped
                    .gnss
                    .iter()
                    .position(|s| s.t >= t_cut)
                    .ok_or("no gnss sample")?;
                bumped.gnss[i].lat += 1e-5;
            }
            1 => {
                let i = bumped
                    .heading
                    .iter()
                    .position(|s| s.t >= t_cut)
                    .ok_or("no heading sample")?;
                bumped.heading[i].psi += 0.05;
            }
            _ => {
                let i = bumped
                    .pwm
                    .iter()
                    .position(|s| s.t >= t_cut + 0.15)
                    .ok_or("no pwm sample")?;
                bumped.pwm[i].pwm_l += 40.0;
            }
        }
        let t_p = match stream {
            0 => bumped.gnss.iter().find(|s| s.t >= t_cut).map(|s| s.t),
            1 => bumped.heading.iter().find(|s| s.t >= t_cut).map(|s| s.t),
            _ => bumped.pwm.iter().find(|s| s.t >= t_cut + 0.15).map(|s| s.t),
        }
        .ok_or("no perturbed sample")?;
        let ds2 = e2s(build_prepared_dataset(
            &bumped,
            &geo,
            &PrepConfig::default(),
        ))?;
        let before = |d: &PreparedDataset| {
            d.samples()
                .filter(|(_, _, s)| s.t < t_p)
                .map(|(_, _, s)| *s)
                .collect::<Vec<_>>()
        };
        let (a, b) = (before(&ds), before(&ds2));
        ensure(a == b, format!("stream {stream}: earlier values changed"))?;
        let later_changed = ds.samples().zip(ds2.samples()).any(|(x, y)| x.2 != y.2);
        ensure(
            later_changed,
            format!("stream {stream}: perturbation had no effect"),
        )?;
        checked += a.len();
    }
    Ok(format!(
        "relative RMS u={:.4} v={:.4} r={:.4}; causality held on {checked} earlier samples",
        errs[0], errs[1], errs[2]
    ))
}

// 7
fn sensitivity_protocol() -> Check {
    let tr = smooth_trajectory(1000.0)?;
    let clean = e2s(tr.grid_dataset())?;
    let spec = e2s(PartitionSpec::by_points(0.7, 70))?;
    let rep = e2s(sensitivity_study(&clean, ModelKind::Static, &spec, 20))?;
    let sd_clean = rep
        .max_r2_sd(Split::Validation)
        .max(rep.max_r2_sd(Split::Train));
    ensure(
        sd_clean < 1e-3,
        format!("noise-free by-points SD of R2 {sd_clean:.3e}"),
    )?;

    let gt = GroundTruth::default();
    let mut wins = 0;
    let mut detail = Vec::new();
    for noise_seed in 0..5u64 {
        let cfg = DiscreteGenConfig {
            steps: 400,
            segments: 20,
            noise_std: [0.02, 0.01, 0.01],
            seed: noise_seed,
            excitation: Excitation::prbs(100 + noise_seed),
            ..DiscreteGenConfig::default()
        };
        let ds = e2s(generate_discrete(&gt, &cfg))?;
        let pts = e2s(sensitivity_study(
            &ds,
            ModelKind::Static,
            &e2s(PartitionSpec::by_points(0.7, 1))?,
            20,
        ))?;
        let segs = e2s(sensitivity_study(
            &ds,
            ModelKind::Static,
            &e2s(PartitionSpec::by_segments(0.7, 1))?,
            20,
        ))?;
        let ok = Axis::ALL
            .iter()
            .all(|a| segs.validation[a.index()].r2_sd >= pts.validation[a.index()].r2_sd);
        if ok {
            wins += 1;
        }
        detail.push(format!(
            "{:.1e}/{:.1e}",
            segs.max_r2_sd(Split::Validation),
            pts.max_r2_sd(Split::Validation)
        ));
    }
    ensure(
        wins == 5,
        format!(
            "by-segments SD >= by-points SD held for {wins}/5 noise seeds ({})",
            detail.join(", ")
        ),
    )?;
    Ok(format!(
        "noise-free by-points SD {sd_clean:.1e}; noisy segments/points max SD {}",
        detail.join(", ")
    ))
}

// 8
fn structural_invariants() -> Check {
    const CASES: u32 = 1000;
    let mut runner = TestRunner::new(PropConfig {
        cases: CASES,
        failure_persistence: None,
        ..PropConfig::default()
    });
    let vel = (-3.0..3.0f64, -1.5..1.5f64, -1.0..1.0f64);
    let pwm = (-1.0..=1.0f64, -1.0..=1.0f64);
    let mut names = Vec::new();

    // Column counts and FF cancellation over random three-step windows.
    let r = runner.run(
        &(
            vel.clone(),
            vel.clone(),
            vel.clone(),
            pwm.clone(),
            pwm.clone(),
            pwm.clone(),
        ),
        |(a, b, c, p0, p1, p2)| {
            let seg = window(&[a, b, c], &[p0, p1, p2]);
            for kind in [ModelKind::Static, ModelKind::Dynamic] {
                for axis in Axis::ALL {
                    let shape = LumpedDisturbanceShape::of(kind, axis);
                    prop_assert_eq!(shape.columns.len(), kind.param_count(axis));
                    if row_eligible(kind, axis, &seg, 1) {
                        let row = regressor_row(kind, axis, &seg, 1);
                        prop_assert_eq!(row.len(), kind.param_count(axis));
                        let src = if kind == ModelKind::Static {
                            &seg[1]
                        } else {
                            &seg[0]
                        };
                        if src.frame.region() == OperatingRegion::FF {
                            for &c in shape.ff_cancelled() {
                                prop_assert_eq!(row[c - 1], 0.0);
                            }
                        }
                    }
                }
            }
            Ok(())
        },
    );
    prop(r, "column counts and FF zeros", &mut names)?;

    // Region partition totality.
    let r = runner.run(&pwm, |(l, rr)| {
        let region = classify_region(l, rr).unwrap();
        let matches = OperatingRegion::ALL
            .iter()
            .filter(|g| match g {
                OperatingRegion::FF => l >= 0.0 && rr >= 0.0,
                OperatingRegion::FR => l >= 0.0 && rr < 0.0,
                OperatingRegion::RF => l < 0.0 && rr >= 0.0,
                OperatingRegion::RR => l < 0.0 && rr < 0.0,
            })
            .count();
        prop_assert_eq!(matches, 1);
        let consistent = match region {
            OperatingRegion::FF => l >= 0.0 && rr >= 0.0,
            OperatingRegion::FR => l >= 0.0 && rr < 0.0,
            OperatingRegion::RF => l < 0.0 && rr >= 0.0,
            OperatingRegion::RR => l < 0.0 && rr < 0.0,
        };
        prop_assert!(consistent);
        Ok(())
    });
    prop(r, "region totality", &mut names)?;

    // Rotation orthogonality.
    let r = runner.run(&(-100.0..100.0f64), |psi| {
        let m = rotation_matrix(psi).unwrap();
        let e = (m.transpose() * m - nalgebra::Matrix3::identity())
            .abs()
            .max();
        prop_assert!(e < 1e-14);
        prop_assert!((m.determinant() - 1.0).abs() < 1e-14);
        Ok(())
    });
    prop(r, "rotation orthogonality", &mut names)?;

    // Zero power of the Coriolis matrix.
    let gt = GroundTruth::default();
    let r = runner.run(&(vel, -1.0..1.0f64), |((u, v, rr), xg)| {
        let g = GroundTruth {
            x_g: xg,
            ..gt.clone()
        };
        let nu = BodyVelocity::new(u, v, rr).unwrap();
        let (_, c, _) = assemble_matrices(&g, &nu).unwrap();
        let n = nalgebra::Vector3::new(u, v, rr);
        prop_assert!((n.transpose() * c * n)[0].abs() < 1e-12);
        Ok(())
    });
    prop(r, "Coriolis zero power", &mut names)?;

    Ok(format!(
        "{} properties x {CASES} cases: {}",
        names.len(),
        names.join(", ")
    ))
}

fn prop<T: std::fmt::Debug>(
    res: Result<(), proptest::test_runner::TestError<T>>,
    name: &str,
    names: &mut Vec<String>,
) -> Result<(), String> {
    res.map_err(|e| format!("{name}: {e}"))?;
    names.push(name.to_string());
    Ok(())
}

fn window(nu: &[(f64, f64, f64)], pwm: &[(f64, f64)]) -> Vec<asv_gain::dataprep::PreparedSample> {
    nu.iter()
        .zip(pwm)
        .enumerate()
        .map(
            |(k, (&(u, v, r), &(l, rr)))| asv_gain::dataprep::PreparedSample {
                t: k as f64 * 0.2,
                k: k as i64,
                nu: BodyVelocity { u, v, r },
                frame: PwmFrame::new(l, rr).unwrap(),
                pose: Default::default(),
            },
        )
        .collect()
}

// 9
fn performance() -> Check {
    let tr = smooth_trajectory(16_025.0 * 0.2 + 4.0)?;
    let geo = e2s(GeoReference::new(43.2, 5.4, [0.3, 0.0]))?;
    let logs = e2s(emit_sensor_logs(&tr, &geo, &LogConfig::default()))?;
    let start = Instant::now();
    let ds = e2s(build_prepared_dataset(&logs, &geo, &PrepConfig::default()))?;
    let t_prep = start.elapsed().as_secs_f64();
    let spec = e2s(PartitionSpec::by_points(0.7, 9))?;
    let p = e2s(asv_gain::validate::partition(&ds, &spec))?;
    let mut t_ident = 0.0f64;
    for kind in [ModelKind::Static, ModelKind::Dynamic] {
        let t0 = Instant::now();
        let systems = e2s(asv_gain::estimator::build_systems(&ds, kind))?;
        let model = e2s(asv_gain::validate::identify_on(&systems, &p, ds.h))?;
        t_ident = t_ident.max(t0.elapsed().as_secs_f64());
        e2s(evaluate(&model, &ds, Some(&p), Split::Validation))?;
    }
    let total = start.elapsed().as_secs_f64();
    let full = e2s(identify(&ds, ModelKind::Static))?;
    ensure(full.kind == ModelKind::Static, "model kind")?;
    ensure(
        ds.len() >= 15_900,
        format!("only {} prepared rows", ds.len()),
    )?;
    ensure(t_ident < 1.0, format!("identification took {t_ident:.3} s"))?;
    ensure(total < 10.0, format!("end to end took {total:.3} s"))?;
    Ok(format!(
        "{} rows: prepare {t_prep:.3} s, identify <= {t_ident:.3} s, total {total:.3} s",
        ds.len()
    ))
}

fn main() {
    let criteria: Vec<(&str, Criterion)> = vec![
        (
            "exact static recovery",
            Box::new(|| wrap(exact_static_recovery())),
        ),
        (
            "exact dynamic recovery",
            Box::new(|| wrap(exact_dynamic_recovery())),
        ),
        (
            "initial-condition decay",
            Box::new(|| wrap(initial_condition_decay())),
        ),
        (
            "continuous-model mismatch bound",
            Box::new(continuous_mismatch),
        ),
        (
            "metric correctness",
            Box::new(|| wrap(metric_correctness())),
        ),
        (
            "pipeline closure and causality",
            Box::new(|| wrap(pipeline_closure())),
        ),
        (
            "sensitivity protocol",
            Box::new(|| wrap(sensitivity_protocol())),
        ),
        (
            "structural invariants",
            Box::new(|| wrap(structural_invariants())),
        ),
        ("performance", Box::new(|| wrap(performance()))),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(f))
            .unwrap_or_else(|_| Outcome::Fail("panicked".into()));
        match outcome {
            Outcome::Pass(m) => println!("criterion {}: PASS  {name}: {m}", i + 1),
            Outcome::Fail(m) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {m}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

fn wrap(c: Check) -> Outcome {
    match c {
        Ok(m) => Outcome::Pass(m),
        Err(m) => Outcome::Fail(m),
    }
}
