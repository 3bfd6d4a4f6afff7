//! Finite-difference condition number.
//!
//! Each free real or imaginary parameter direction is perturbed by `±ε`, the
//! eigenvalue is re-tracked by Newton's method on the bordered system
//! `M(p, z(c)) x = 0, w* x = 1` along a chart `c -> z(c)` of the output curve,
//! and the derivative of the solution map is assembled from central
//! differences. Nothing here uses the adjugate factorization.

use num_complex::Complex64;

use super::StructuredWeights;
use crate::error::{Error, Result};
use crate::geometry::{
    quadric_map, quadric_map_jacobian, quadric_preimage, tangent, OutputVariety,
};
use crate::linalg::{dot, norm, normalize, ComplexMatrix, Lu};
use crate::matpoly::EigenTriple;

pub const FD_STEP: f64 = 1e-6;
pub const NEWTON_TOL: f64 = 1e-12;
pub const NEWTON_MAX_STEPS: usize = 8;

/// Local holomorphic chart of the output curve around the base point.
enum Chart {
    Line {
        z0: Vec<Complex64>,
        t: Vec<Complex64>,
    },
    Conic {
        w0: [Complex64; 2],
        wperp: [Complex64; 2],
    },
}

impl Chart {
    fn new(o: OutputVariety, triple: &EigenTriple) -> Result<Self> {
        let z0 = triple.z.coords().to_vec();
        Ok(match o {
            OutputVariety::ProjectiveLine => Chart::Line {
                t: tangent(o, &triple.z)?.t,
                z0,
            },
            OutputVariety::QuadricCurve => {
                let mut w = quadric_preimage(&z0).to_vec();
                normalize(&mut w);
                Chart::Conic {
                    w0: [w[0], w[1]],
                    wperp: [-w[1].conj(), w[0].conj()],
                }
            }
        })
    }

    fn point(&self, c: Complex64) -> Vec<Complex64> {
        match self {
            Chart::Line { z0, t } => z0.iter().zip(t).map(|(a, b)| a + c * b).collect(),
            Chart::Conic { w0, wperp } => {
                quadric_map(w0[0] + c * wperp[0], w0[1] + c * wperp[1]).to_vec()
            }
        }
    }

    fn derivative(&self, c: Complex64) -> Vec<Complex64> {
        match self {
            Chart::Line { t, .. } => t.clone(),
            Chart::Conic { w0, wperp } => {
                let [ju, jv] = quadric_map_jacobian(w0[0] + c * wperp[0], w0[1] + c * wperp[1]);
                (0..3)
                    .map(|k| ju[k] * wperp[0] + jv[k] * wperp[1])
                    .collect()
            }
        }
    }
}

/// Tracks the eigenvalue of the perturbed problem; returns the chart parameter.
fn track(
    weights: &StructuredWeights,
    blocks: &[ComplexMatrix],
    chart: &Chart,
    x0: &[Complex64],
) -> Option<Complex64> {
    let n = x0.len();
    let scale: f64 = blocks.iter().map(|b| b.norm_fro_sqr()).sum::<f64>().sqrt();
    let mut x = x0.to_vec();
    let mut c = Complex64::new(0.0, 0.0);
    let mut converged = false;
    for _ in 0..NEWTON_MAX_STEPS {
        let z = chart.point(c);
        let m = weights.evaluate(blocks, &z);
        let r = m.matvec(&x);
        let border = dot(x0, &x) - 1.0;
        if converged {
            // one polishing step was taken after reaching tolerance
            return Some(c);
        }
        if norm(&r) <= NEWTON_TOL * scale && border.norm() <= NEWTON_TOL {
            converged = true;
        }
        let dm = weights.evaluate_directional(blocks, &z, &chart.derivative(c));
        let dmx = dm.matvec(&x);
        let mut jac = ComplexMatrix::zeros(n + 1, n + 1);
        for i in 0..n {
            for j in 0..n {
                jac[(i, j)] = m[(i, j)];
            }
            jac[(i, n)] = dmx[i];
            jac[(n, i)] = x0[i].conj();
        }
        let mut rhs: Vec<Complex64> = r.iter().map(|v| -v).collect();
        rhs.push(-border);
        let step = Lu::factor(&jac).ok()?.solve(&rhs);
        if step.iter().any(|s| !s.re.is_finite() || !s.im.is_finite()) {
            return None;
        }
        for i in 0..n {
            x[i] += step[i];
        }
        c += step[n];
    }
    converged.then_some(c)
}

/// `‖p‖ ‖D Sol‖₂` by central differences over every free real direction.
pub fn mu_fd_oracle(
    weights: &StructuredWeights,
    blocks: &[ComplexMatrix],
    o: OutputVariety,
    triple: &EigenTriple,
    p_norm: f64,
) -> Result<f64> {
    let chart = Chart::new(o, triple)?;
    let t = tangent(o, &triple.z)?.t;
    let base_norm = norm(&chart.point(Complex64::new(0.0, 0.0)));

    let mut jac_re = Vec::new();
    let mut jac_im = Vec::new();
    let mut perturbed = blocks.to_vec();
    let units = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)];
    let mut direction = 0;
    for (k, mask) in weights.masks.iter().enumerate() {
        for (i, j) in mask.free_entries() {
            for unit in units {
                let original = perturbed[k][(i, j)];
                perturbed[k][(i, j)] = original + unit * FD_STEP;
                let plus = track(weights, &perturbed, &chart, &triple.x);
                perturbed[k][(i, j)] = original - unit * FD_STEP;
                let minus = track(weights, &perturbed, &chart, &triple.x);
                perturbed[k][(i, j)] = original;
                let (Some(cp), Some(cm)) = (plus, minus) else {
                    return Err(Error::OracleDivergence { direction });
                };
                let (zp, zm) = (chart.point(cp), chart.point(cm));
                let zdot: Vec<Complex64> = zp
                    .iter()
                    .zip(&zm)
                    .map(|(a, b)| (a - b) / (2.0 * FD_STEP))
                    .collect();
                let tau = dot(&t, &zdot) / base_norm;
                jac_re.push(tau.re);
                jac_im.push(tau.im);
                direction += 1;
            }
        }
    }
    // Largest singular value of the 2 x (2m) real Jacobian.
    let g11: f64 = jac_re.iter().map(|v| v * v).sum();
    let g22: f64 = jac_im.iter().map(|v| v * v).sum();
    let g12: f64 = jac_re.iter().zip(&jac_im).map(|(a, b)| a * b).sum();
    let half_tr = 0.5 * (g11 + g22);
    let lambda_max = half_tr + (0.25 * (g11 - g22).powi(2) + g12 * g12).sqrt();
    Ok(p_norm * lambda_max.sqrt())
}
