use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{complex_gaussian, norm, normalize, ComplexMatrix, Lu};
use crate::error::{Error, Result};

/// Which null space to extract.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `m x = 0`
    Right,
    /// `y* m = 0`
    Left,
}

pub const INVERSE_ITERATION_STEPS: usize = 5;
pub const NULL_RESIDUAL_TOL: f64 = 1e-10;
const DEFAULT_START_SEED: u64 = 0x5eed_0f_1a11;

/// Unit null vector of a numerically singular matrix, residual measured
/// against `‖m‖_F`.
pub fn null_vector(m: &ComplexMatrix, side: Side) -> Result<Vec<Complex64>> {
    null_vector_scaled(m, side, m.norm_fro(), DEFAULT_START_SEED)
}

/// Inverse iteration with residual target `1e-10 * scale`.
///
/// `scale` is the reference magnitude for the residual and for the pivot
/// floor. Callers evaluating a matrix polynomial pass the norm of the
/// coefficients rather than the norm of the (nearly singular) evaluated matrix.
pub fn null_vector_scaled(
    m: &ComplexMatrix,
    side: Side,
    scale: f64,
    seed: u64,
) -> Result<Vec<Complex64>> {
    let target = NULL_RESIDUAL_TOL * scale;
    let (v, residual) = inverse_iteration(m, side, scale, seed)?;
    if residual <= target {
        Ok(v)
    } else {
        Err(Error::NoNullVector { residual, target })
    }
}

/// Runs up to five inverse-iteration steps and returns the last unit iterate
/// with its residual `‖m x‖` (or `‖y* m‖`). Stops early once the residual
/// reaches `1e-10 * scale`.
pub fn inverse_iteration(
    m: &ComplexMatrix,
    side: Side,
    scale: f64,
    seed: u64,
) -> Result<(Vec<Complex64>, f64)> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "null vector of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let target = NULL_RESIDUAL_TOL * scale;
    let floor = 1e2 * f64::EPSILON * scale;
    let lu = Lu::factor_regularized(m, floor);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<Complex64> = (0..n).map(|_| complex_gaussian(&mut rng)).collect();
    normalize(&mut v);

    let residual = |v: &[Complex64]| match side {
        Side::Right => norm(&m.matvec(v)),
        Side::Left => norm(&m.vecmat_adjoint(v)),
    };

    let mut best = residual(&v);
    for _ in 0..INVERSE_ITERATION_STEPS {
        let mut w = match side {
            Side::Right => lu.solve(&v),
            Side::Left => lu.solve_adjoint(&v),
        };
        if w.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) || normalize(&mut w) == 0.0 {
            break;
        }
        v = w;
        best = residual(&v);
        if best <= target {
            break;
        }
    }
    Ok((v, best))
}

/// Upper estimate of the smallest singular value: `‖m x‖` for the unit vector
/// produced by a few inverse-iteration steps. Exact for 1x1 input.
pub fn sigma_min_estimate(m: &ComplexMatrix) -> f64 {
    assert!(m.is_square());
    let n = m.rows();
    if n == 0 {
        return 0.0;
    }
    if n == 1 {
        return m[(0, 0)].norm();
    }
    let scale = m.norm_fro();
    if scale == 0.0 {
        return 0.0;
    }
    let lu = Lu::factor_regularized(m, 1e2 * f64::EPSILON * scale);
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_START_SEED);
    let mut v: Vec<Complex64> = (0..n).map(|_| complex_gaussian(&mut rng)).collect();
    normalize(&mut v);
    let mut best = norm(&m.matvec(&v));
    // Alternate M^{-1} and M^{-*}: power iteration on (M* M)^{-1}.
    for _ in 0..8 {
        let mut w = lu.solve_adjoint(&v);
        if normalize(&mut w) == 0.0 {
            break;
        }
        let mut u = lu.solve(&w);
        if !u.iter().all(|z| z.re.is_finite() && z.im.is_finite()) || normalize(&mut u) == 0.0 {
            break;
        }
        v = u;
        best = best.min(norm(&m.matvec(&v)));
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dot;

    fn phase_free_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
        (1.0 - dot(a, b).norm().min(1.0)).max(0.0).sqrt()
    }

    #[test]
    fn diagonal_right_null_vector() {
        let m = ComplexMatrix::from_real_diag(&[0.0, 1.0]);
        let x = null_vector(&m, Side::Right).unwrap();
        let e1 = [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)];
        assert!(phase_free_distance(&x, &e1) < 1e-12);
    }

    #[test]
    fn all_ones_matrix() {
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let x = null_vector(&m, Side::Right).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let want = [Complex64::new(s, 0.0), Complex64::new(-s, 0.0)];
        assert!(phase_free_distance(&x, &want) < 1e-12);
        assert!((norm(&x) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rank_one_right_null_space_is_orthogonal_complement() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u: Vec<Complex64> = (0..4).map(|_| complex_gaussian(&mut rng)).collect();
        let v: Vec<Complex64> = (0..4).map(|_| complex_gaussian(&mut rng)).collect();
        let m = ComplexMatrix::outer(&u, &v);
        let x = null_vector(&m, Side::Right).unwrap();
        assert!(dot(&v, &x).norm() / norm(&v) <= 1e-9);
        let y = null_vector(&m, Side::Left).unwrap();
        assert!(dot(&u, &y).norm() / norm(&u) <= 1e-9);
    }

    #[test]
    fn constructed_rank_deficient_residuals() {
        // Q diag(s) W* with one zero singular value and the rest >= 1e-6 ||m||.
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for n in 2..8 {
            let a = ComplexMatrix::random_gaussian(n, n, &mut rng);
            let b = ComplexMatrix::random_gaussian(n, n, &mut rng);
            let qa = crate::linalg::schur_eigenvalues(&(&a + &a.adjoint()))
                .unwrap()
                .q;
            let qb = crate::linalg::schur_eigenvalues(&(&b + &b.adjoint()))
                .unwrap()
                .q;
            let mut s: Vec<f64> = (0..n).map(|i| 1.0 + i as f64).collect();
            s[0] = 0.0;
            let m = &(&qa * &ComplexMatrix::from_real_diag(&s)) * &qb.adjoint();
            let x = null_vector(&m, Side::Right).unwrap();
            assert!(norm(&m.matvec(&x)) <= 1e-10 * m.norm_fro());
            let y = null_vector(&m, Side::Left).unwrap();
            assert!(norm(&m.vecmat_adjoint(&y)) <= 1e-10 * m.norm_fro());
        }
    }

    #[test]
    fn well_conditioned_matrix_has_no_null_vector() {
        let m = ComplexMatrix::identity(3);
        assert!(matches!(
            null_vector(&m, Side::Right),
            Err(Error::NoNullVector { .. })
        ));
    }

    #[test]
    fn sigma_min_on_known_spectrum() {
        let m = ComplexMatrix::from_real_diag(&[3.0, 0.5, 2.0]);
        assert!((sigma_min_estimate(&m) - 0.5).abs() < 1e-12);
        let m = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]);
        assert!(sigma_min_estimate(&m) < 1e-12);
    }
}
