//! Complex Schur decomposition `M = Q T Q*`.
//!
//! Householder reduction to upper Hessenberg form followed by single-shift
//! implicit QR sweeps (Givens bulge chasing) with Wilkinson shifts. A
//! subdiagonal entry is set to zero once it falls below
//! `eps * (|t_ii| + |t_{i+1,i+1}|)`. Every tenth stalled sweep on the same
//! eigenvalue uses an exceptional shift.

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Largest matrix accepted by [`schur_eigenvalues`].
pub const DEFAULT_SIZE_CAP: usize = 512;

/// Sweeps allowed per eigenvalue before giving up.
pub const MAX_SWEEPS_PER_EIGENVALUE: usize = 30;

const EXCEPTIONAL_PERIOD: usize = 10;

#[derive(Clone, Debug)]
pub struct SchurDecomposition {
    /// Unitary factor.
    pub q: ComplexMatrix,
    /// Upper triangular factor.
    pub t: ComplexMatrix,
    /// Diagonal of `t`, in order.
    pub eigenvalues: Vec<Complex64>,
}

/// Complex Schur form of a square matrix, with the default size cap.
pub fn schur_eigenvalues(m: &ComplexMatrix) -> Result<SchurDecomposition> {
    schur_with_cap(m, DEFAULT_SIZE_CAP)
}

pub fn schur_with_cap(m: &ComplexMatrix, cap: usize) -> Result<SchurDecomposition> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "Schur of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    if m.rows() > cap {
        return Err(Error::InvalidInput(format!(
            "matrix size {} exceeds cap {cap}",
            m.rows()
        )));
    }
    if !m.is_finite() {
        return Err(Error::InvalidInput("non-finite matrix entry".into()));
    }
    let (mut h, mut q) = hessenberg(m);
    qr_iterate(&mut h, &mut q)?;
    let eigenvalues = h.diagonal();
    Ok(SchurDecomposition {
        q,
        t: h,
        eigenvalues,
    })
}

/// Householder reduction `M = Q H Q*` with `H` upper Hessenberg.
pub fn hessenberg(m: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = m.rows();
    let mut h = m.clone();
    let mut q = ComplexMatrix::identity(n);
    if n < 3 {
        return (h, q);
    }
    let zero = Complex64::new(0.0, 0.0);
    for k in 0..n - 2 {
        let mut v: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let alpha = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let tail = v[1..].iter().map(|z| z.norm_sqr()).sum::<f64>();
        if tail == 0.0 {
            continue;
        }
        let phase = if v[0].norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            v[0] / v[0].norm()
        };
        v[0] += phase * alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        let tau = 2.0 / vnorm2;
        // H <- (I - tau v v*) H on rows k+1..n
        for j in 0..n {
            let mut s = zero;
            for (idx, vi) in v.iter().enumerate() {
                s += vi.conj() * h[(k + 1 + idx, j)];
            }
            s *= tau;
            if s == zero {
                continue;
            }
            for (idx, vi) in v.iter().enumerate() {
                h[(k + 1 + idx, j)] -= vi * s;
            }
        }
        // H <- H (I - tau v v*) and Q <- Q (I - tau v v*) on columns k+1..n
        for mat in [&mut h, &mut q] {
            for i in 0..n {
                let mut s = zero;
                for (idx, vi) in v.iter().enumerate() {
                    s += mat[(i, k + 1 + idx)] * vi;
                }
                s *= tau;
                if s == zero {
                    continue;
                }
                for (idx, vi) in v.iter().enumerate() {
                    mat[(i, k + 1 + idx)] -= s * vi.conj();
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = zero;
        }
    }
    (h, q)
}

/// Rotation `G = [[c, s], [-conj(s), c]]` with `G (x, y)^T = (r, 0)^T`.
#[derive(Clone, Copy, Debug)]
struct Givens {
    c: f64,
    s: Complex64,
}

impl Givens {
    fn new(x: Complex64, y: Complex64) -> Self {
        let ax = x.norm();
        let ay = y.norm();
        if ay == 0.0 {
            return Self {
                c: 1.0,
                s: Complex64::new(0.0, 0.0),
            };
        }
        if ax == 0.0 {
            return Self {
                c: 0.0,
                s: y.conj() / ay,
            };
        }
        let rho = ax.hypot(ay);
        Self {
            c: ax / rho,
            s: (x / ax) * y.conj() / rho,
        }
    }

    /// Rows `k, k+1` of `m` on columns `cols`: `m <- G m`.
    fn rotate_rows(&self, m: &mut ComplexMatrix, k: usize, cols: std::ops::Range<usize>) {
        for j in cols {
            let a = m[(k, j)];
            let b = m[(k + 1, j)];
            m[(k, j)] = a * self.c + self.s * b;
            m[(k + 1, j)] = -self.s.conj() * a + b * self.c;
        }
    }

    /// Columns `k, k+1` of `m` on rows `rows`: `m <- m G*`.
    fn rotate_cols(&self, m: &mut ComplexMatrix, k: usize, rows: std::ops::Range<usize>) {
        for i in rows {
            let a = m[(i, k)];
            let b = m[(i, k + 1)];
            m[(i, k)] = a * self.c + b * self.s.conj();
            m[(i, k + 1)] = -self.s * a + b * self.c;
        }
    }
}

/// Eigenvalue of `[[a, b], [c, d]]` closest to `d`.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    // Roots are d + half -/+ disc.
    if (half - disc).norm() <= (half + disc).norm() {
        d + (half - disc)
    } else {
        d + (half + disc)
    }
}

fn qr_iterate(h: &mut ComplexMatrix, q: &mut ComplexMatrix) -> Result<()> {
    let n = h.rows();
    if n == 0 {
        return Ok(());
    }
    let eps = f64::EPSILON;
    let zero = Complex64::new(0.0, 0.0);
    let mut hi = n - 1;
    let mut sweeps = 0usize;
    while hi > 0 {
        // Locate the top of the active unreduced block.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let mut scale = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if scale == 0.0 {
                // Both diagonal entries vanish; compare against the neighbourhood.
                scale = h.norm_fro();
            }
            if sub <= eps * scale {
                h[(lo, lo - 1)] = zero;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            sweeps = 0;
            continue;
        }
        sweeps += 1;
        if sweeps > MAX_SWEEPS_PER_EIGENVALUE {
            return Err(Error::NonConvergence {
                index: hi,
                sweeps: sweeps - 1,
            });
        }
        let shift = if sweeps % EXCEPTIONAL_PERIOD == 0 {
            h[(hi, hi)] + Complex64::new(0.75 * h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        // First rotation, then chase the bulge down the subdiagonal.
        let mut x = h[(lo, lo)] - shift;
        let mut y = h[(lo + 1, lo)];
        for k in lo..hi {
            let g = Givens::new(x, y);
            let first_col = if k == lo { lo } else { k - 1 };
            g.rotate_rows(h, k, first_col..n);
            g.rotate_cols(h, k, 0..(k + 3).min(hi + 1));
            g.rotate_cols(q, k, 0..n);
            if k > lo {
                h[(k + 1, k - 1)] = zero;
            }
            if k + 1 < hi {
                x = h[(k + 1, k)];
                y = h[(k + 2, k)];
            }
        }
    }
    // Clean rounding residue below the diagonal.
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = zero;
        }
    }
    Ok(())
}
