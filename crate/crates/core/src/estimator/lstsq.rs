use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::regressors::RegressionSystem;

/// Condition number above which a warning is logged.
pub const CONDITION_WARN: f64 = 1e8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LeastSquaresReport {
    pub solution: Vec<f64>,
    /// `‖A x − b‖₂` at the returned solution.
    pub residual_norm: f64,
    /// 2-norm condition number of the column-equilibrated, nonzero columns.
    pub condition_estimate: f64,
    pub rank: usize,
    pub rows_used: usize,
    /// Set when the minimum-norm solution was returned.
    pub rank_deficient: bool,
    /// Zero-based columns that were identically zero and pinned to 0.
    pub zero_columns: Vec<usize>,
    /// Unit basis of the numerical null space among the active columns,
    /// in the original coordinates. Empty at full rank.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub null_space: Vec<Vec<f64>>,
    /// Set when the null-space component was fixed by the structure of
    /// the parameter vector rather than by the minimum-norm rule.
    #[serde(default)]
    pub structured: bool,
}

/// Least-squares solve of a regression system.
pub fn solve_least_squares(sys: &RegressionSystem) -> Result<LeastSquaresReport> {
    solve_dense(&sys.a, &sys.b)
}

/// Householder QR with column pivoting on the column-equilibrated matrix.
///
/// Columns that are exactly zero carry no information and are removed
/// before factorization; their coefficients are reported as zero. Rank and
/// the condition estimate come from the singular values of `R`. When the
/// remaining columns are rank deficient the minimum-norm solution of the
/// equilibrated problem is returned and flagged.
pub fn solve_dense(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<LeastSquaresReport> {
    let (m, n) = a.shape();
    if b.len() != m {
        return Err(invalid(format!("A has {m} rows but b has {}", b.len())));
    }
    if m < n {
        return Err(Error::InsufficientData(format!(
            "{m} rows for {n} unknowns"
        )));
    }
    if a.iter().chain(b.iter()).any(|x| !x.is_finite()) {
        return Err(invalid("non-finite entry in least-squares system"));
    }

    let norms: Vec<f64> = a.column_iter().map(|c| c.norm()).collect();
    let active: Vec<usize> = (0..n).filter(|&j| norms[j] > 0.0).collect();
    let zero_columns: Vec<usize> = (0..n).filter(|&j| norms[j] == 0.0).collect();
    let mut solution = vec![0.0; n];

    if active.is_empty() {
        return Ok(LeastSquaresReport {
            solution,
            residual_norm: b.norm(),
            condition_estimate: f64::INFINITY,
            rank: 0,
            rows_used: m,
            rank_deficient: n > 0,
            zero_columns,
            null_space: Vec::new(),
            structured: false,
        });
    }

    let p = active.len();
    let mut scaled = a.select_columns(active.iter());
    for (c, &j) in active.iter().enumerate() {
        scaled.column_mut(c).unscale_mut(norms[j]);
    }

    let qr = scaled.col_piv_qr();
    let mut qtb = b.clone();
    qr.q_tr_mul(&mut qtb);
    let rhs = qtb.rows(0, p).into_owned();
    let r = qr.r();

    let svd = r.clone().svd(false, false);
    let sv = &svd.singular_values;
    let s_max = sv.max();
    let tol = s_max * (m.max(n) as f64) * f64::EPSILON;
    let rank = sv.iter().filter(|&&s| s > tol).count();
    let s_min = sv.min();
    let condition_estimate = if s_min > 0.0 {
        s_max / s_min
    } else {
        f64::INFINITY
    };
    if condition_estimate > CONDITION_WARN {
        log::warn!("least-squares system is ill-conditioned (cond ~ {condition_estimate:.3e})");
    }

    let rank_deficient = rank < p;
    let mut null_space = Vec::new();
    let mut z = if rank_deficient {
        log::warn!("least-squares system rank {rank} < {p}; returning minimum-norm solution");
        let svd = r.svd(true, true);
        let v_t = svd
            .v_t
            .as_ref()
            .ok_or_else(|| Error::Numerical("SVD without right vectors".into()))?;
        for (i, &s) in svd.singular_values.iter().enumerate() {
            if s > tol {
                continue;
            }
            let mut w = v_t.row(i).transpose();
            qr.p().inv_permute_rows(&mut w);
            let mut x = vec![0.0; n];
            for (c, &j) in active.iter().enumerate() {
                x[j] = w[c] / norms[j];
            }
            let len = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            null_space.push(x.iter().map(|v| v / len).collect());
        }
        svd.solve(&rhs, tol)
            .map_err(|e| Error::Numerical(e.to_string()))?
    } else {
        r.solve_upper_triangular(&rhs)
            .ok_or_else(|| Error::Numerical("triangular solve failed".into()))?
    };
    qr.p().inv_permute_rows(&mut z);

    for (c, &j) in active.iter().enumerate() {
        solution[j] = z[c] / norms[j];
    }
    let x = DVector::from_column_slice(&solution);
    let residual_norm = (a * &x - b).norm();

    Ok(LeastSquaresReport {
        solution,
        residual_norm,
        condition_estimate,
        rank,
        rows_used: m,
        rank_deficient,
        zero_columns,
        null_space,
        structured: false,
    })
}
