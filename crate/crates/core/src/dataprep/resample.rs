use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Causal local-polynomial resampler settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResampleSpec {
    pub degree: usize,
    /// Number of most recent samples fitted. Equal to `degree + 1` the
    /// fit interpolates; larger windows give a least-squares fit.
    pub window: usize,
}

impl ResampleSpec {
    pub const CUBIC: ResampleSpec = ResampleSpec {
        degree: 3,
        window: 4,
    };
    pub const HEADING: ResampleSpec = ResampleSpec {
        degree: 8,
        window: 25,
    };

    pub fn validate(&self) -> Result<()> {
        if self.window < self.degree + 1 {
            return Err(invalid(format!(
                "resample window {} too short for degree {}",
                self.window, self.degree
            )));
        }
        Ok(())
    }
}

/// Values of a stream at grid times using only the samples at or before
/// each grid time.
///
/// A polynomial of `spec.degree` is fitted to the most recent samples and
/// evaluated at the grid time. If a grid time coincides with a sample time
/// the sample is returned as is. The stream is treated as broken wherever
/// consecutive samples are `gap` or more apart: history restarts after the
/// break, and grid times at least `gap` after the last sample are invalid.
/// Grid times with fewer than `degree + 1` usable samples give `None`.
pub fn resample_causal(
    t: &[f64],
    x: &[f64],
    grid: &[f64],
    spec: ResampleSpec,
    gap: f64,
) -> Result<Vec<Option<f64>>> {
    spec.validate()?;
    if t.len() != x.len() {
        return Err(invalid("stream timestamps and values differ in length"));
    }
    if t.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(invalid("stream timestamps must be strictly increasing"));
    }
    // Index of the first sample of the unbroken run containing each sample.
    let mut run_start = vec![0usize; t.len()];
    for i in 1..t.len() {
        run_start[i] = if t[i] - t[i - 1] >= gap - 1e-9 {
            i
        } else {
            run_start[i - 1]
        };
    }
    let n_coef = spec.degree + 1;
    let mut out = Vec::with_capacity(grid.len());
    let mut last = 0usize; // number of samples with t <= current grid time
    for &g in grid {
        while last < t.len() && t[last] <= g {
            last += 1;
        }
        if last == 0 {
            out.push(None);
            continue;
        }
        let i_end = last - 1;
        if t[i_end] == g {
            out.push(Some(x[i_end]));
            continue;
        }
        if g - t[i_end] >= gap - 1e-9 {
            out.push(None);
            continue;
        }
        let first = run_start[i_end].max((i_end + 1).saturating_sub(spec.window));
        let m = i_end + 1 - first;
        if m < n_coef {
            out.push(None);
            continue;
        }
        out.push(Some(fit_eval(
            &t[first..=i_end],
            &x[first..=i_end],
            g,
            spec.degree,
        )?));
    }
    Ok(out)
}

fn fit_eval(t: &[f64], x: &[f64], at: f64, degree: usize) -> Result<f64> {
    let span = (t[t.len() - 1] - t[0]).max(f64::MIN_POSITIVE);
    let n = degree + 1;
    let a = DMatrix::from_fn(t.len(), n, |i, j| ((t[i] - at) / span).powi(j as i32));
    let b = DVector::from_column_slice(x);
    if t.len() == n {
        let lu = a.clone().lu();
        if let Some(c) = lu.solve(&b) {
            return Ok(c[0]);
        }
    }
    let rep = crate::estimator::solve_dense(&a, &b)?;
    Ok(rep.solution[0])
}
