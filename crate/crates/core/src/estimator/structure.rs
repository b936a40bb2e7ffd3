use nalgebra::{DMatrix, DVector};

use crate::model::{Axis, ModelKind};

/// The identities every dynamic vector satisfies for its pole `α`, written
/// as residuals `(C₀ + α C₁) x + α (1 − α) e_own`: each lagged quadratic
/// or cross term equals `−α` times its current-step twin, and the own
/// lagged term equals `−α (1 + x₁ − α)`.
struct Identities {
    c0: DMatrix<f64>,
    c1: DMatrix<f64>,
    own_row: usize,
}

fn identities(axis: Axis) -> Identities {
    // (lagged, current) pairs and the own lagged column, zero-based.
    let (pairs, own): (Vec<(usize, usize)>, usize) = match axis {
        Axis::Surge => ((1..=3).map(|i| (i, i + 4)).collect(), 4),
        Axis::Sway => ((1..=6).map(|i| (i, i + 8)).chain([(8, 15)]).collect(), 7),
        Axis::Yaw => ((1..=6).map(|i| (i, i + 8)).chain([(7, 15)]).collect(), 8),
    };
    let n = ModelKind::Dynamic.param_count(axis);
    let rows = pairs.len() + 1;
    let mut c0 = DMatrix::zeros(rows, n);
    let mut c1 = DMatrix::zeros(rows, n);
    for (r, &(lag, cur)) in pairs.iter().enumerate() {
        c0[(r, lag)] = 1.0;
        c1[(r, cur)] = 1.0;
    }
    let own_row = pairs.len();
    c0[(own_row, own)] = 1.0;
    c1[(own_row, 0)] = 1.0;
    Identities { c0, c1, own_row }
}

struct AxisProblem {
    id: Identities,
    x0: DVector<f64>,
    basis: DMatrix<f64>,
}

impl AxisProblem {
    fn residual(&self, alpha: f64, t: &DVector<f64>) -> DVector<f64> {
        let x = &self.x0 + &self.basis * t;
        let mut r = (&self.id.c0 + &self.id.c1 * alpha) * x;
        r[self.id.own_row] += alpha * (1.0 - alpha);
        r
    }

    /// Null-space coordinates that best satisfy the identities at `alpha`.
    fn best_t(&self, alpha: f64) -> DVector<f64> {
        let q = self.basis.ncols();
        if q == 0 {
            return DVector::zeros(0);
        }
        let c = &self.id.c0 + &self.id.c1 * alpha;
        let mut rhs = -(&c * &self.x0);
        rhs[self.id.own_row] -= alpha * (1.0 - alpha);
        (c * &self.basis)
            .svd(true, true)
            .solve(&rhs, 1e-14)
            .unwrap_or_else(|_| DVector::zeros(q))
    }
}

fn stacked(problems: &[AxisProblem], alpha: f64, ts: &[DVector<f64>]) -> DVector<f64> {
    let parts: Vec<DVector<f64>> = problems
        .iter()
        .zip(ts)
        .map(|(p, t)| p.residual(alpha, t))
        .collect();
    let n = parts.iter().map(|p| p.len()).sum();
    DVector::from_iterator(n, parts.iter().flat_map(|p| p.iter().copied()))
}

/// Fixes the null-space components of rank-deficient dynamic vectors.
///
/// With no lateral thrust the sway and yaw input gains are proportional,
/// so exact in-class data leave one direction of each sway/yaw regression
/// undetermined. Among all least-squares solutions the one whose entries
/// satisfy the identities of the dynamic parameterization is selected:
/// a coarse scan over `α` followed by Gauss-Newton on `α` and the
/// null-space coordinates jointly. Returns the pole found, or `None` when
/// no axis has a null space.
pub(crate) fn complete_null_space(
    vectors: &mut [Vec<f64>; 3],
    nulls: [&[Vec<f64>]; 3],
) -> Option<f64> {
    if nulls.iter().all(|n| n.is_empty()) {
        return None;
    }
    let problems: Vec<AxisProblem> = Axis::ALL
        .iter()
        .zip(vectors.iter())
        .zip(nulls)
        .map(|((&axis, x), null)| {
            let n = x.len();
            let basis = DMatrix::from_fn(n, null.len(), |i, j| null[j][i]);
            AxisProblem {
                id: identities(axis),
                x0: DVector::from_column_slice(x),
                basis,
            }
        })
        .collect();
    let profile = |alpha: f64| -> f64 {
        let ts: Vec<DVector<f64>> = problems.iter().map(|p| p.best_t(alpha)).collect();
        stacked(&problems, alpha, &ts).norm_squared()
    };
    let mut alpha = (0..=2000)
        .map(|i| -0.5 + i as f64 * 1e-3)
        .map(|a| (a, profile(a)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(a, _)| a)?;
    let mut ts: Vec<DVector<f64>> = problems.iter().map(|p| p.best_t(alpha)).collect();

    let dims: Vec<usize> = problems.iter().map(|p| p.basis.ncols()).collect();
    let unknowns = 1 + dims.iter().sum::<usize>();
    let mut cost = stacked(&problems, alpha, &ts).norm_squared();
    for _ in 0..100 {
        let r = stacked(&problems, alpha, &ts);
        let mut jac = DMatrix::zeros(r.len(), unknowns);
        let (mut row, mut col) = (0, 1);
        for (p, t) in problems.iter().zip(&ts) {
            let x = &p.x0 + &p.basis * t;
            let mut da = &p.id.c1 * &x;
            da[p.id.own_row] += 1.0 - 2.0 * alpha;
            let dt = (&p.id.c0 + &p.id.c1 * alpha) * &p.basis;
            let m = da.len();
            jac.view_mut((row, 0), (m, 1)).copy_from(&da);
            jac.view_mut((row, col), (m, dt.ncols())).copy_from(&dt);
            row += m;
            col += dt.ncols();
        }
        let Ok(step) = jac.svd(true, true).solve(&(-&r), 1e-14) else {
            break;
        };
        let mut s = 1.0;
        let mut improved = false;
        for _ in 0..30 {
            let a = alpha + s * step[0];
            let mut off = 1;
            let cand: Vec<DVector<f64>> = ts
                .iter()
                .zip(&dims)
                .map(|(t, &q)| {
                    let v = t + step.rows(off, q) * s;
                    off += q;
                    v
                })
                .collect();
            let c = stacked(&problems, a, &cand).norm_squared();
            if c < cost {
                alpha = a;
                ts = cand;
                let done = cost - c <= 1e-30 + 1e-15 * cost;
                cost = c;
                improved = !done;
                break;
            }
            s *= 0.5;
        }
        if !improved {
            break;
        }
    }
    for ((x, p), t) in vectors.iter_mut().zip(&problems).zip(&ts) {
        if t.is_empty() {
            continue;
        }
        let full = &p.x0 + &p.basis * t;
        x.copy_from_slice(full.as_slice());
    }
    Some(alpha)
}
