use crate::error::{invalid, Error, Result};

/// Coefficient of determination `1 − Σ(y − ŷ)² / Σ(y − ȳ)²`, with `ȳ` the
/// mean of `truth`.
pub fn r_squared(truth: &[f64], prediction: &[f64]) -> Result<f64> {
    if truth.len() != prediction.len() {
        return Err(invalid("truth and prediction differ in length"));
    }
    if truth.len() < 2 {
        return Err(Error::InsufficientData("R² needs at least 2 points".into()));
    }
    let mean = truth.iter().sum::<f64>() / truth.len() as f64;
    let ss_tot: f64 = truth.iter().map(|y| (y - mean).powi(2)).sum();
    if ss_tot == 0.0 {
        return Err(Error::Numerical(
            "R² is undefined for a constant truth series".into(),
        ));
    }
    let ss_res: f64 = truth
        .iter()
        .zip(prediction)
        .map(|(y, p)| (y - p).powi(2))
        .sum();
    Ok(1.0 - ss_res / ss_tot)
}

/// Mean absolute error.
pub fn mae(truth: &[f64], prediction: &[f64]) -> Result<f64> {
    if truth.len() != prediction.len() {
        return Err(invalid("truth and prediction differ in length"));
    }
    if truth.is_empty() {
        return Err(Error::InsufficientData("MAE of an empty series".into()));
    }
    Ok(truth
        .iter()
        .zip(prediction)
        .map(|(y, p)| (y - p).abs())
        .sum::<f64>()
        / truth.len() as f64)
}

/// Mean and sample standard deviation (`n − 1` denominator).
pub fn mean_sd(x: &[f64]) -> Result<(f64, f64)> {
    if x.len() < 2 {
        return Err(Error::InsufficientData(
            "a sample SD needs at least 2 values".into(),
        ));
    }
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let var = x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    Ok((mean, var.sqrt()))
}
