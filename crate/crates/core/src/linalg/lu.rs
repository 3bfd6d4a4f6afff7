use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// LU factorization with partial (row) pivoting: `P M = L U`.
#[derive(Clone, Debug)]
pub struct Lu {
    n: usize,
    // L (unit diagonal, strictly lower) and U packed together, row-major.
    lu: Vec<Complex64>,
    perm: Vec<usize>,
    swaps: usize,
}

impl Lu {
    /// Factors `m`, failing with `ExactSingular` on an exactly zero pivot.
    pub fn factor(m: &ComplexMatrix) -> Result<Self> {
        Self::factor_impl(m, None)
    }

    /// Factors `m`, replacing any pivot of modulus below `floor` by a pivot of
    /// modulus `floor` (keeping its phase). Used by inverse iteration, where
    /// the matrix is singular on purpose.
    pub fn factor_regularized(m: &ComplexMatrix, floor: f64) -> Self {
        Self::factor_impl(m, Some(floor)).expect("regularized factorization cannot fail")
    }

    fn factor_impl(m: &ComplexMatrix, floor: Option<f64>) -> Result<Self> {
        assert!(m.is_square(), "LU needs a square matrix");
        let n = m.rows();
        let mut lu = m.as_slice().to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for k in 0..n {
            let mut p = k;
            let mut best = lu[k * n + k].norm();
            for i in k + 1..n {
                let v = lu[i * n + k].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                swaps += 1;
            }
            let mut pivot = lu[k * n + k];
            match floor {
                Some(f) if pivot.norm() < f => {
                    pivot = if pivot.norm() == 0.0 {
                        Complex64::new(f, 0.0)
                    } else {
                        pivot / pivot.norm() * f
                    };
                    lu[k * n + k] = pivot;
                }
                None if pivot.norm() == 0.0 => return Err(Error::ExactSingular { column: k }),
                _ => {}
            }
            for i in k + 1..n {
                let l = lu[i * n + k] / pivot;
                lu[i * n + k] = l;
                if l == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[k * n + j];
                    lu[i * n + j] -= l * u;
                }
            }
        }
        Ok(Self { n, lu, perm, swaps })
    }

    /// Solves `M x = rhs`.
    pub fn solve(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        assert_eq!(rhs.len(), n);
        let mut x: Vec<Complex64> = self.perm.iter().map(|&p| rhs[p]).collect();
        for i in 0..n {
            let mut s = x[i];
            for j in 0..i {
                s -= self.lu[i * n + j] * x[j];
            }
            x[i] = s;
        }
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..n {
                s -= self.lu[i * n + j] * x[j];
            }
            x[i] = s / self.lu[i * n + i];
        }
        x
    }

    /// Solves `M* x = rhs`.
    pub fn solve_adjoint(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        // M = P^T L U  =>  M* = U* L* P, solve U* w = rhs, L* v = w, x = P^T v.
        let n = self.n;
        assert_eq!(rhs.len(), n);
        let mut w = rhs.to_vec();
        for i in 0..n {
            let mut s = w[i];
            for j in 0..i {
                s -= self.lu[j * n + i].conj() * w[j];
            }
            w[i] = s / self.lu[i * n + i].conj();
        }
        for i in (0..n).rev() {
            let mut s = w[i];
            for j in i + 1..n {
                s -= self.lu[j * n + i].conj() * w[j];
            }
            w[i] = s;
        }
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = w[k];
        }
        x
    }

    pub fn determinant(&self) -> Complex64 {
        let n = self.n;
        let mut det = if self.swaps % 2 == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(-1.0, 0.0)
        };
        for i in 0..n {
            det *= self.lu[i * n + i];
        }
        det
    }
}

/// Solves `m x = rhs` with partial pivoting.
pub fn lu_solve(m: &ComplexMatrix, rhs: &[Complex64]) -> Result<Vec<Complex64>> {
    if !m.is_square() || rhs.len() != m.rows() {
        return Err(Error::Dimension(format!(
            "{}x{} system with rhs of length {}",
            m.rows(),
            m.cols(),
            rhs.len()
        )));
    }
    Ok(Lu::factor(m)?.solve(rhs))
}

/// Determinant by LU; zero for exactly singular input.
pub fn determinant(m: &ComplexMatrix) -> Complex64 {
    match Lu::factor(m) {
        Ok(lu) => lu.determinant(),
        Err(_) => Complex64::new(0.0, 0.0),
    }
}
