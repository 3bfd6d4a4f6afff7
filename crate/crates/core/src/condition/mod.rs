//! Eigenvalue condition numbers.
//!
//! All formulas are evaluated at the canonical unit-norm representative of
//! the eigenvalue and are relative: they carry the input norm as a factor and
//! are therefore invariant under `A -> tA`. A vanishing denominator yields
//! `+∞` rather than an error.
//!
//! The generic engine covers any determinantal problem `det M(p, z) = 0`
//! with `M` linear in the free entries `p`. At a singular `M` the adjugate is
//! `κ x y*`, so `dF = κ y* dM x` and the unknown `κ` cancels from the
//! implicit-function ratio:
//!
//! ```text
//! μ = ‖p‖ · sqrt(Σ_k |w_k(z)|² Σ_{(i,j) free in block k} |y_i|² |x_j|²) / |y* D_t M(z) x|
//! ```
//!
//! with `t` the unit tangent of the output curve at `z`.

mod oracle;
mod structured;

use num_complex::Complex64;
use rand::Rng;

pub use oracle::{mu_fd_oracle, FD_STEP, NEWTON_MAX_STEPS, NEWTON_TOL};
pub use structured::{Mask, MaskPattern, StructuredWeights, WeightKind};

use crate::error::{Error, Result};
use crate::geometry::{tangent, OutputVariety};
use crate::linalg::{complex_gaussian, norm, ComplexMatrix};
use crate::matpoly::{EigenTriple, MatrixPolynomial, Var};
use crate::point::ProjectivePoint;

/// Denominators below `INFINITY_FACTOR * εmach * scale` give `μ = +∞`.
pub const INFINITY_FACTOR: f64 = 1e3;

fn is_negligible(den: f64, scale: f64) -> bool {
    den < INFINITY_FACTOR * f64::EPSILON * scale
}

/// Closed-form PEVP condition number
/// `(Σ|α|^{2k}|β|^{2d-2k})^{1/2} ‖x‖‖y‖ ‖A‖ / |y* v|`, with
/// `v = β̄ ∂_α P x - ᾱ ∂_β P x`.
pub fn mu_pevp_closed(p: &MatrixPolynomial, triple: &EigenTriple) -> Result<f64> {
    if !triple.trusted {
        return Err(Error::UntrustedEigenpair);
    }
    let c = triple.z.coords();
    let (alpha, beta) = (c[0], c[1]);
    let d = p.degree();
    let weight: f64 = (0..=d)
        .map(|k| alpha.norm().powi(2 * k as i32) * beta.norm().powi(2 * (d - k) as i32))
        .sum::<f64>()
        .sqrt();
    let da = p.derivative(alpha, beta, Var::Alpha).matvec(&triple.x);
    let db = p.derivative(alpha, beta, Var::Beta).matvec(&triple.x);
    let v: Vec<Complex64> = da
        .iter()
        .zip(&db)
        .map(|(a, b)| beta.conj() * a - alpha.conj() * b)
        .collect();
    let den = crate::linalg::dot(&triple.y, &v).norm();
    let xy = norm(&triple.x) * norm(&triple.y);
    let a_norm = p.norm();
    if is_negligible(den, a_norm * xy) {
        return Ok(f64::INFINITY);
    }
    Ok(weight * xy / den * a_norm)
}

/// Closed-form GEVP condition number for `det(βA - αB) = 0`:
/// `‖(α,β)‖ ‖x‖‖y‖ ‖(A,B)‖_F / |ᾱ y*Ax + β̄ y*Bx|`.
pub fn mu_gevp_closed(a: &ComplexMatrix, b: &ComplexMatrix, triple: &EigenTriple) -> Result<f64> {
    if !triple.trusted {
        return Err(Error::UntrustedEigenpair);
    }
    let c = triple.z.coords();
    let (alpha, beta) = (c[0], c[1]);
    let den = (alpha.conj() * a.bilinear(&triple.y, &triple.x)
        + beta.conj() * b.bilinear(&triple.y, &triple.x))
    .norm();
    let xy = norm(&triple.x) * norm(&triple.y);
    let ab_norm = (a.norm_fro_sqr() + b.norm_fro_sqr()).sqrt();
    if is_negligible(den, ab_norm * xy) {
        return Ok(f64::INFINITY);
    }
    Ok(norm(c) * xy / den * ab_norm)
}

/// Condition of the affine root `z` of `p(X, Y) = Σ a_k X^k Y^{N-k}`:
/// `‖p‖ ‖(1, z, …, z^N)‖ / (|p'(z)| (1 + |z|²))`.
pub fn mu_scalar_closed(coeffs: &[Complex64], z: Complex64) -> f64 {
    let n = coeffs.len() - 1;
    let mut powers = Vec::with_capacity(n + 1);
    let mut zk = Complex64::new(1.0, 0.0);
    for _ in 0..=n {
        powers.push(zk);
        zk *= z;
    }
    let deriv: Complex64 = (1..=n)
        .map(|k| (k as f64) * coeffs[k] * powers[k - 1])
        .sum();
    let p_norm = norm(coeffs);
    let mono = norm(&powers);
    let den = deriv.norm() * (1.0 + z.norm_sqr());
    if is_negligible(den, p_norm * mono) {
        return f64::INFINITY;
    }
    p_norm * mono / den
}

/// Generic structured condition number at an eigen-triple of
/// `M(z) = Σ_k w_k(z) C_k` restricted to the output curve `o`.
pub fn mu_generic(
    weights: &StructuredWeights,
    blocks: &[ComplexMatrix],
    o: OutputVariety,
    triple: &EigenTriple,
    p_norm: f64,
) -> Result<f64> {
    if !triple.trusted {
        return Err(Error::UntrustedEigenpair);
    }
    let z = triple.z.coords();
    let t = tangent(o, &triple.z)?;
    let (x, y) = (&triple.x, &triple.y);
    let (nx, ny) = (norm(x), norm(y));

    let w = weights.values(z);
    let mut numer = 0.0;
    for (mask, wk) in weights.masks.iter().zip(&w) {
        let wk2 = wk.norm_sqr();
        if wk2 == 0.0 {
            continue;
        }
        let s: f64 = mask
            .free_entries()
            .map(|(i, j)| y[i].norm_sqr() * x[j].norm_sqr())
            .sum();
        numer += wk2 * s;
    }
    let numer = numer.sqrt() / (nx * ny);

    let dm = weights.evaluate_directional(blocks, z, &t.t);
    let den = dm.bilinear(y, x).norm() / (nx * ny);
    let scale: f64 = blocks.iter().map(|b| b.norm_fro_sqr()).sum::<f64>().sqrt();
    if is_negligible(den, scale) {
        return Ok(f64::INFINITY);
    }
    Ok(p_norm * numer / den)
}

/// Stochastic condition number squared from the worst-case one:
/// `μ_st² = μ² / m` for an input space of complex dimension `m`.
pub fn mu_stochastic(mu: f64, m_full: usize) -> f64 {
    if mu.is_infinite() {
        return f64::INFINITY;
    }
    mu * mu / m_full as f64
}

/// Direction-sampled stochastic condition number squared:
/// the mean of `|y* M(Ȧ, z) x|² / |y* D_t M x|² · ‖p‖²` over `samples`
/// uniformly random unit perturbations `Ȧ` of the free entries.
pub fn mu_stochastic_sampled<R: Rng + ?Sized>(
    weights: &StructuredWeights,
    blocks: &[ComplexMatrix],
    o: OutputVariety,
    triple: &EigenTriple,
    p_norm: f64,
    samples: usize,
    rng: &mut R,
) -> Result<f64> {
    if !triple.trusted {
        return Err(Error::UntrustedEigenpair);
    }
    let z = triple.z.coords();
    let t = tangent(o, &triple.z)?;
    let (x, y) = (&triple.x, &triple.y);
    let den = weights
        .evaluate_directional(blocks, z, &t.t)
        .bilinear(y, x)
        .norm_sqr();
    // The functional Ȧ -> y* M(Ȧ, z) x has coefficient w_k(z) conj(y_i) x_j
    // on the free entry (k, i, j).
    let w = weights.values(z);
    let coeffs: Vec<Complex64> = weights
        .masks
        .iter()
        .zip(&w)
        .flat_map(|(mask, &wk)| {
            mask.free_entries()
                .map(move |(i, j)| wk * y[i].conj() * x[j])
        })
        .collect();
    let mut acc = 0.0;
    let mut dir = vec![Complex64::new(0.0, 0.0); coeffs.len()];
    for _ in 0..samples {
        for d in dir.iter_mut() {
            *d = complex_gaussian(rng);
        }
        let dn = norm(&dir);
        let s: Complex64 = coeffs.iter().zip(&dir).map(|(c, d)| c * d).sum();
        acc += s.norm_sqr() / (dn * dn);
    }
    Ok(acc / samples as f64 / den * p_norm * p_norm)
}

/// Condition data of one eigenvalue.
#[derive(Clone, Debug)]
pub struct EigenCondition {
    pub z: ProjectivePoint,
    pub mu: f64,
    pub mu_st_sq: f64,
    pub trusted: bool,
}

/// Per-eigenvalue condition numbers of one instance with their summaries.
#[derive(Clone, Debug)]
pub struct ConditionReport {
    pub per_eigenvalue: Vec<EigenCondition>,
    /// `(1/count) Σ μ²`
    pub mean_mu_sq: f64,
    pub mu_max: f64,
}

impl ConditionReport {
    pub fn new(per_eigenvalue: Vec<EigenCondition>) -> Self {
        let count = per_eigenvalue.len().max(1) as f64;
        let mean_mu_sq = per_eigenvalue.iter().map(|e| e.mu * e.mu).sum::<f64>() / count;
        let mu_max = per_eigenvalue.iter().map(|e| e.mu).fold(0.0, f64::max);
        Self {
            per_eigenvalue,
            mean_mu_sq,
            mu_max,
        }
    }

    /// True when every eigenvalue is trusted and has finite condition.
    pub fn is_clean(&self) -> bool {
        self.per_eigenvalue
            .iter()
            .all(|e| e.trusted && e.mu.is_finite())
    }
}
