use nalgebra::{Matrix6x4, Vector4, Vector6};
use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, Error, Result};
use crate::model::{DynamicSurgeParams, DynamicSwayYawParams};

const MAX_ITER: usize = 200;
const FALLBACK_SEED: f64 = 0.9;

/// The shared propeller pole and the per-axis damping-like terms it is
/// entangled with in the dynamic parameter vectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AlphaResolution {
    pub alpha: f64,
    /// `h R_u(1)`
    pub r_u1: f64,
    /// `h R_v(2)`
    pub r_v2: f64,
    /// `h R_r(3)`
    pub r_r3: f64,
    /// Euclidean norm of the six relation residuals.
    pub residual: f64,
    pub stable: bool,
    pub iterations: usize,
}

/// The `(persistence, paired)` entries of each axis: the persistence
/// coefficient equals `α + ρ` and the paired one `−α(1 + ρ)`.
fn pairs(
    xu: &DynamicSurgeParams,
    xv: &DynamicSwayYawParams,
    xr: &DynamicSwayYawParams,
) -> [(f64, f64); 3] {
    [
        (xu.at(1), xu.at(5)),
        (xv.at(1), xv.at(8)),
        (xr.at(1), xr.at(9)),
    ]
}

fn residuals(p: &[(f64, f64); 3], z: &Vector4<f64>) -> Vector6<f64> {
    let a = z[0];
    let mut e = Vector6::zeros();
    for (j, &(x1, x2)) in p.iter().enumerate() {
        let rho = z[j + 1];
        e[2 * j] = a + rho - x1;
        e[2 * j + 1] = -a * (1.0 + rho) - x2;
    }
    e
}

fn jacobian(z: &Vector4<f64>) -> Matrix6x4<f64> {
    let a = z[0];
    let mut jac = Matrix6x4::zeros();
    for j in 0..3 {
        let rho = z[j + 1];
        jac[(2 * j, 0)] = 1.0;
        jac[(2 * j, j + 1)] = 1.0;
        jac[(2 * j + 1, 0)] = -(1.0 + rho);
        jac[(2 * j + 1, j + 1)] = -a;
    }
    jac
}

/// Real roots of `α² − α(1 + x1) − x2 = 0`, i.e. the two ways of splitting
/// one axis' pair into a pole and a damping term.
fn axis_roots(x1: f64, x2: f64) -> Option<(f64, f64)> {
    let b = 1.0 + x1;
    let disc = b * b + 4.0 * x2;
    if disc < 0.0 {
        return None;
    }
    let s = disc.sqrt();
    Some((0.5 * (b - s), 0.5 * (b + s)))
}

fn gauss_newton(p: &[(f64, f64); 3], alpha0: f64) -> Option<(Vector4<f64>, f64, usize)> {
    let mut z = Vector4::new(alpha0, p[0].0 - alpha0, p[1].0 - alpha0, p[2].0 - alpha0);
    let mut e = residuals(p, &z);
    let mut cost = e.norm();
    for it in 1..=MAX_ITER {
        let jac = jacobian(&z);
        let step = jac.svd(true, true).solve(&(-e), 1e-14).ok()?;
        // Backtrack until the residual does not grow.
        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..30 {
            let cand = z + step * t;
            let ec = residuals(p, &cand);
            if ec.norm() <= cost {
                accepted = Some((cand, ec));
                break;
            }
            t *= 0.5;
        }
        let Some((zn, en)) = accepted else {
            return Some((z, cost, it));
        };
        let moved = (zn - z).norm();
        z = zn;
        e = en;
        let new_cost = e.norm();
        let stalled = cost - new_cost <= 1e-15 * cost.max(1.0);
        cost = new_cost;
        if cost <= 1e-15 || moved <= 1e-15 * (1.0 + z.norm()) || stalled {
            return Some((z, cost, it));
        }
    }
    None
}

/// Resolves the shared pole `α` from the six relations linking it to the
/// dynamic vectors, by Gauss-Newton over `(α, hR_u, hR_v, hR_r)`.
///
/// Each axis alone admits two splits of its pair (the roots of a
/// quadratic), so the solver is started from the mean of the roots in
/// `(0, 1.5)` and from every individual root. The lowest residual wins;
/// among equally good solutions the largest stable pole is preferred.
pub fn resolve_alpha(
    xu: &DynamicSurgeParams,
    xv: &DynamicSwayYawParams,
    xr: &DynamicSwayYawParams,
) -> Result<AlphaResolution> {
    let p = pairs(xu, xv, xr);
    for &(a, b) in &p {
        ensure_finite("persistence coefficient", a)?;
        ensure_finite("paired coefficient", b)?;
    }

    let roots: Vec<f64> = p
        .iter()
        .filter_map(|&(x1, x2)| axis_roots(x1, x2))
        .flat_map(|(a, b)| [a, b])
        .collect();
    let mut seeds = Vec::new();
    let in_band: Vec<f64> = roots
        .iter()
        .copied()
        .filter(|r| *r > 0.0 && *r < 1.5)
        .collect();
    if !in_band.is_empty() {
        seeds.push(in_band.iter().sum::<f64>() / in_band.len() as f64);
    }
    seeds.extend(roots.iter().copied());
    if seeds.is_empty() {
        log::warn!("no real pole candidate on any axis; starting from alpha = {FALLBACK_SEED}");
        seeds.push(FALLBACK_SEED);
    }

    let mut best: Option<(Vector4<f64>, f64, usize)> = None;
    for seed in seeds {
        let Some(cand) = gauss_newton(&p, seed) else {
            continue;
        };
        best = Some(match best {
            None => cand,
            Some(cur) => {
                if better(&cand, &cur) {
                    cand
                } else {
                    cur
                }
            }
        });
    }
    let (z, residual, iterations) = best.ok_or_else(|| {
        Error::Numerical(format!(
            "pole resolution did not converge in {MAX_ITER} iterations"
        ))
    })?;
    Ok(AlphaResolution {
        alpha: z[0],
        r_u1: z[1],
        r_v2: z[2],
        r_r3: z[3],
        residual,
        stable: z[0] < 1.0,
        iterations,
    })
}

fn better(a: &(Vector4<f64>, f64, usize), b: &(Vector4<f64>, f64, usize)) -> bool {
    let tie = 1e-12 * (1.0 + a.1.max(b.1)) + 1e-9 * a.1.max(b.1);
    if (a.1 - b.1).abs() > tie {
        return a.1 < b.1;
    }
    let (aa, ab) = (a.0[0], b.0[0]);
    match (aa < 1.0, ab < 1.0) {
        (true, false) => true,
        (false, true) => false,
        _ => aa > ab,
    }
}
