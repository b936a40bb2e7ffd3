use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SavGolConfig {
    pub window_length: usize,
    pub poly_order: usize,
}

impl Default for SavGolConfig {
    fn default() -> Self {
        Self {
            window_length: 11,
            poly_order: 3,
        }
    }
}

impl SavGolConfig {
    pub fn new(window_length: usize, poly_order: usize) -> Result<Self> {
        let c = Self {
            window_length,
            poly_order,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if self.window_length.is_multiple_of(2) {
            return Err(invalid(format!(
                "Savitzky-Golay window must be odd, got {}",
                self.window_length
            )));
        }
        if self.poly_order >= self.window_length {
            return Err(invalid(format!(
                "Savitzky-Golay order {} must be below the window {}",
                self.poly_order, self.window_length
            )));
        }
        Ok(())
    }
}

/// Weights `w` such that `Σ w_j x(p_j)` is the value at `at` of the
/// least-squares polynomial of `order` through the points `p_j`.
pub fn savgol_weights(positions: &[f64], order: usize, at: f64) -> Result<Vec<f64>> {
    let n = order + 1;
    let v = DMatrix::from_fn(positions.len(), n, |i, j| positions[i].powi(j as i32));
    let e = DVector::from_fn(n, |j, _| at.powi(j as i32));
    let gram = v.transpose() * &v;
    let chol = gram
        .cholesky()
        .ok_or_else(|| Error::Numerical("singular Savitzky-Golay design".into()))?;
    let y = chol.solve(&e);
    Ok((v * y).iter().copied().collect())
}

/// Centered Savitzky-Golay smoothing. The first and last half-windows are
/// taken from polynomial fits to the first and last full windows, so the
/// output has the input length and polynomials up to `poly_order` are
/// reproduced everywhere.
pub fn savitzky_golay(signal: &[f64], cfg: &SavGolConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let w = cfg.window_length;
    let n = signal.len();
    if n < w {
        return Err(Error::InsufficientData(format!(
            "signal of {n} samples is shorter than the window {w}"
        )));
    }
    let half = (w / 2) as isize;
    let pos: Vec<f64> = (-half..=half).map(|i| i as f64).collect();
    let center = savgol_weights(&pos, cfg.poly_order, 0.0)?;
    let apply = |weights: &[f64], start: usize| -> f64 {
        weights
            .iter()
            .zip(&signal[start..start + w])
            .map(|(a, b)| a * b)
            .sum()
    };
    let mut out = vec![0.0; n];
    let h = half as usize;
    for (i, o) in out.iter_mut().enumerate().take(n - h).skip(h) {
        *o = apply(&center, i - h);
    }
    for i in 0..h {
        let at = i as f64 - half as f64;
        out[i] = apply(&savgol_weights(&pos, cfg.poly_order, at)?, 0);
        let at_end = half as f64 - (h - 1 - i) as f64;
        out[n - h + i] = apply(&savgol_weights(&pos, cfg.poly_order, at_end)?, n - w);
    }
    Ok(out)
}

/// Causal Savitzky-Golay: output `i` fits the samples `i−w+1 ..= i` and
/// evaluates the fit `lead` samples after the newest one. Returns
/// `n − w + 1` values, the first aligned with input index `w − 1`.
pub fn savitzky_golay_causal(signal: &[f64], cfg: &SavGolConfig, lead: f64) -> Result<Vec<f64>> {
    cfg.validate()?;
    let w = cfg.window_length;
    if signal.len() < w {
        return Err(Error::InsufficientData(format!(
            "signal of {} samples is shorter than the window {w}",
            signal.len()
        )));
    }
    let pos: Vec<f64> = (0..w).map(|j| j as f64 - (w - 1) as f64).collect();
    let weights = savgol_weights(&pos, cfg.poly_order, lead)?;
    Ok(signal
        .windows(w)
        .map(|win| weights.iter().zip(win).map(|(a, b)| a * b).sum())
        .collect())
}
