//! Homogeneous matrix polynomials `P(α, β) = Σ_k α^k β^{d-k} A_k`.
//!
//! Eigenvalues are points `(α, β)` of the projective line with
//! `det P(α, β) = 0`. They are computed from the first companion
//! linearization; when the leading coefficient is close to singular the
//! variables are first moved by a random unitary change of coordinates.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{
    complex_gaussian, inverse_iteration, norm, schur_eigenvalues, sigma_min_estimate,
    ComplexMatrix, Lu, Side, NULL_RESIDUAL_TOL,
};
use crate::point::ProjectivePoint;

/// Leading coefficients with `σ_min < LEADING_COEFF_TOL * ‖A_d‖_F` trigger a
/// change of variables before linearizing.
pub const LEADING_COEFF_TOL: f64 = 1e-6;
pub const MOEBIUS_RETRIES: usize = 3;
/// Residual bound for a trusted eigen-triple, relative to `‖A‖`.
pub const TRIPLE_RESIDUAL_TOL: f64 = 1e-8;
pub const DEFAULT_SEED: u64 = 0x00c0_ffee;

#[derive(Clone, Debug, PartialEq)]
pub struct MatrixPolynomial {
    coeffs: Vec<ComplexMatrix>,
}

/// Partial derivative selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    Alpha,
    Beta,
}

impl MatrixPolynomial {
    /// `coeffs[k]` multiplies `α^k β^{d-k}`.
    pub fn new(coeffs: Vec<ComplexMatrix>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidInput(
                "matrix polynomial needs degree >= 1".into(),
            ));
        }
        let n = coeffs[0].rows();
        if n == 0 {
            return Err(Error::Dimension("empty coefficient matrices".into()));
        }
        for (k, a) in coeffs.iter().enumerate() {
            if a.rows() != n || a.cols() != n {
                return Err(Error::Dimension(format!(
                    "coefficient {k} is {}x{}, expected {n}x{n}",
                    a.rows(),
                    a.cols()
                )));
            }
            if !a.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "coefficient {k} has non-finite entries"
                )));
            }
        }
        let p = Self { coeffs };
        let nrm = p.norm();
        if !(nrm > 0.0) || !nrm.is_finite() {
            return Err(Error::InvalidInput(
                "coefficient norm must be finite and nonzero".into(),
            ));
        }
        Ok(p)
    }

    /// 1x1 polynomial `Σ a_k X^k Y^{N-k}`.
    pub fn scalar(coeffs: &[Complex64]) -> Result<Self> {
        Self::new(
            coeffs
                .iter()
                .map(|&a| ComplexMatrix::from_diag(&[a]))
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.coeffs[0].rows()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[ComplexMatrix] {
        &self.coeffs
    }

    /// Frobenius norm of the stacked coefficients `‖(A_0, …, A_d)‖`.
    pub fn norm(&self) -> f64 {
        self.coeffs
            .iter()
            .map(|a| a.norm_fro_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(&self, t: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|a| a.scale(t)).collect(),
        }
    }

    /// `Σ_k α^k β^{d-k} A_k`.
    pub fn evaluate(&self, alpha: Complex64, beta: Complex64) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.n(), self.n());
        for (w, a) in monomials(alpha, beta, self.degree())
            .into_iter()
            .zip(&self.coeffs)
        {
            out.add_scaled(w, a);
        }
        out
    }

    pub fn evaluate_at(&self, z: &ProjectivePoint) -> ComplexMatrix {
        let c = z.coords();
        assert_eq!(c.len(), 2, "matrix polynomials live on the projective line");
        self.evaluate(c[0], c[1])
    }

    /// `∂P/∂α = Σ k α^{k-1} β^{d-k} A_k` or `∂P/∂β = Σ (d-k) α^k β^{d-k-1} A_k`.
    pub fn derivative(&self, alpha: Complex64, beta: Complex64, var: Var) -> ComplexMatrix {
        let d = self.degree();
        let mut out = ComplexMatrix::zeros(self.n(), self.n());
        for (k, a) in self.coeffs.iter().enumerate() {
            let w = match var {
                Var::Alpha if k > 0 => (k as f64) * powi(alpha, k - 1) * powi(beta, d - k),
                Var::Beta if k < d => ((d - k) as f64) * powi(alpha, k) * powi(beta, d - k - 1),
                _ => continue,
            };
            out.add_scaled(w, a);
        }
        out
    }

    /// First companion pencil `(E, F)` with `det(λE - F) ∝ det(Σ λ^k A_k)`.
    ///
    /// `E = diag(I, …, I, A_d)`; `F` carries identities on the block
    /// superdiagonal and `(-A_0, …, -A_{d-1})` in its last block row.
    pub fn companion_pencil(&self) -> (ComplexMatrix, ComplexMatrix) {
        let n = self.n();
        let d = self.degree();
        let dn = d * n;
        let mut e = ComplexMatrix::identity(dn);
        let mut f = ComplexMatrix::zeros(dn, dn);
        let last = (d - 1) * n;
        for i in 0..n {
            for j in 0..n {
                e[(last + i, last + j)] = self.coeffs[d][(i, j)];
            }
        }
        for b in 0..d - 1 {
            for i in 0..n {
                f[(b * n + i, (b + 1) * n + i)] = Complex64::new(1.0, 0.0);
            }
        }
        for k in 0..d {
            for i in 0..n {
                for j in 0..n {
                    f[(last + i, k * n + j)] = -self.coeffs[k][(i, j)];
                }
            }
        }
        (e, f)
    }

    /// `p̃(z̃) = p(u z̃)`.
    pub fn moebius_substitute(&self, u: &MoebiusMap) -> Self {
        let d = self.degree();
        let [[u11, u12], [u21, u22]] = u.entries;
        let mut coeffs = vec![ComplexMatrix::zeros(self.n(), self.n()); d + 1];
        for (k, a) in self.coeffs.iter().enumerate() {
            // (u11 t + u12)^k (u21 t + u22)^{d-k}, t = α̃/β̃, ascending powers of t.
            let mut poly = vec![Complex64::new(1.0, 0.0)];
            for _ in 0..k {
                poly = poly_mul_linear(&poly, u11, u12);
            }
            for _ in k..d {
                poly = poly_mul_linear(&poly, u21, u22);
            }
            for (j, c) in poly.into_iter().enumerate() {
                if c != Complex64::new(0.0, 0.0) {
                    coeffs[j].add_scaled(c, a);
                }
            }
        }
        Self { coeffs }
    }

    /// Homogeneous eigenvalues with the default seed.
    pub fn hom_eigenvalues(&self) -> Result<Vec<ProjectivePoint>> {
        self.hom_eigenvalues_seeded(DEFAULT_SEED)
    }

    /// Homogeneous eigenvalues; `seed` drives the change of variables used
    /// when the leading coefficient is nearly singular.
    pub fn hom_eigenvalues_seeded(&self, seed: u64) -> Result<Vec<ProjectivePoint>> {
        if leading_well_conditioned(self) {
            return self.companion_eigenvalues();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6d6f_6562_6975_73);
        for _ in 0..MOEBIUS_RETRIES {
            let u = MoebiusMap::random_unitary(&mut rng);
            let moved = self.moebius_substitute(&u);
            if !leading_well_conditioned(&moved) {
                continue;
            }
            return moved
                .companion_eigenvalues()?
                .iter()
                .map(|zt| ProjectivePoint::new(&u.apply(zt.coords())))
                .collect();
        }
        Err(Error::DegenerateInstance(format!(
            "leading coefficient stays singular after {MOEBIUS_RETRIES} changes of variables"
        )))
    }

    fn companion_eigenvalues(&self) -> Result<Vec<ProjectivePoint>> {
        let n = self.n();
        let d = self.degree();
        let dn = d * n;
        let lu = Lu::factor(&self.coeffs[d])
            .map_err(|_| Error::DegenerateInstance("singular leading coefficient".into()))?;
        // E^{-1} F: identity blocks above, -A_d^{-1} A_k in the last block row.
        let mut c = ComplexMatrix::zeros(dn, dn);
        for b in 0..d - 1 {
            for i in 0..n {
                c[(b * n + i, (b + 1) * n + i)] = Complex64::new(1.0, 0.0);
            }
        }
        let last = (d - 1) * n;
        for k in 0..d {
            for j in 0..n {
                let col = lu.solve(&self.coeffs[k].column(j));
                for i in 0..n {
                    c[(last + i, k * n + j)] = -col[i];
                }
            }
        }
        let schur = schur_eigenvalues(&c)?;
        Ok(schur
            .eigenvalues
            .into_iter()
            .map(ProjectivePoint::from_affine)
            .collect())
    }

    /// Eigenvalues with unit right/left eigenvectors and residuals.
    pub fn eigen_triples(&self) -> Result<Vec<EigenTriple>> {
        self.eigen_triples_seeded(DEFAULT_SEED)
    }

    pub fn eigen_triples_seeded(&self, seed: u64) -> Result<Vec<EigenTriple>> {
        let scale = self.norm();
        self.hom_eigenvalues_seeded(seed)?
            .into_iter()
            .enumerate()
            .map(|(i, z)| {
                let m = self.evaluate_at(&z);
                triple_from_matrix(z, &m, scale, seed.wrapping_add(2 * i as u64 + 1))
            })
            .collect()
    }
}

/// Builds an eigen-triple at `z` from the evaluated matrix `m`, with residuals
/// relative to `scale`.
pub fn triple_from_matrix(
    z: ProjectivePoint,
    m: &ComplexMatrix,
    scale: f64,
    seed: u64,
) -> Result<EigenTriple> {
    let one = Complex64::new(1.0, 0.0);
    if m.rows() == 1 {
        let r = m[(0, 0)].norm() / scale;
        return Ok(EigenTriple {
            z,
            x: vec![one],
            y: vec![one],
            residual_right: r,
            residual_left: r,
            trusted: r <= TRIPLE_RESIDUAL_TOL,
        });
    }
    let (x, rx) = inverse_iteration(m, Side::Right, scale, seed)?;
    let (y, ry) = inverse_iteration(m, Side::Left, scale, seed.wrapping_add(0x9e37_79b9))?;
    let found = rx <= NULL_RESIDUAL_TOL * scale && ry <= NULL_RESIDUAL_TOL * scale;
    let (residual_right, residual_left) = (rx / scale, ry / scale);
    Ok(EigenTriple {
        z,
        x,
        y,
        residual_right,
        residual_left,
        trusted: found
            && residual_right <= TRIPLE_RESIDUAL_TOL
            && residual_left <= TRIPLE_RESIDUAL_TOL,
    })
}

/// Projective roots of `Σ a_k X^k Y^{N-k}`.
pub fn roots_homogeneous(coeffs: &[Complex64]) -> Result<Vec<ProjectivePoint>> {
    if coeffs.iter().all(|c| c.norm() == 0.0) {
        return Err(Error::InvalidInput(
            "zero polynomial has no isolated roots".into(),
        ));
    }
    MatrixPolynomial::scalar(coeffs)?.hom_eigenvalues()
}

fn leading_well_conditioned(p: &MatrixPolynomial) -> bool {
    let lead = &p.coeffs[p.degree()];
    let nrm = lead.norm_fro();
    nrm > 0.0 && sigma_min_estimate(lead) >= LEADING_COEFF_TOL * nrm
}

/// `[α^0 β^d, α^1 β^{d-1}, …, α^d β^0]`.
pub fn monomials(alpha: Complex64, beta: Complex64, d: usize) -> Vec<Complex64> {
    let mut apow = vec![Complex64::new(1.0, 0.0); d + 1];
    let mut bpow = vec![Complex64::new(1.0, 0.0); d + 1];
    for k in 1..=d {
        apow[k] = apow[k - 1] * alpha;
        bpow[k] = bpow[k - 1] * beta;
    }
    (0..=d).map(|k| apow[k] * bpow[d - k]).collect()
}

fn powi(z: Complex64, k: usize) -> Complex64 {
    let mut out = Complex64::new(1.0, 0.0);
    for _ in 0..k {
        out *= z;
    }
    out
}

/// Multiplies an ascending-power polynomial by `(a t + b)`.
fn poly_mul_linear(p: &[Complex64], a: Complex64, b: Complex64) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); p.len() + 1];
    for (i, &c) in p.iter().enumerate() {
        out[i] += c * b;
        out[i + 1] += c * a;
    }
    out
}

/// Eigenvalue with its unit right and left eigenvectors.
#[derive(Clone, Debug)]
pub struct EigenTriple {
    pub z: ProjectivePoint,
    /// `P(z) x ≈ 0`, `‖x‖ = 1`.
    pub x: Vec<Complex64>,
    /// `y* P(z) ≈ 0`, `‖y‖ = 1`.
    pub y: Vec<Complex64>,
    /// `‖P(z) x‖ / ‖A‖`
    pub residual_right: f64,
    /// `‖y* P(z)‖ / ‖A‖`
    pub residual_left: f64,
    pub trusted: bool,
}

impl EigenTriple {
    /// Triple assembled from known data; residuals are not recomputed.
    pub fn exact(z: ProjectivePoint, x: Vec<Complex64>, y: Vec<Complex64>) -> Self {
        Self {
            z,
            x,
            y,
            residual_right: 0.0,
            residual_left: 0.0,
            trusted: true,
        }
    }
}

/// Linear change of homogeneous coordinates `z = u z̃` with `|det u| = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MoebiusMap {
    entries: [[Complex64; 2]; 2],
}

impl MoebiusMap {
    pub fn new(entries: [[Complex64; 2]; 2]) -> Result<Self> {
        let det = entries[0][0] * entries[1][1] - entries[0][1] * entries[1][0];
        if (det.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "|det u| = {} is not 1",
                det.norm()
            )));
        }
        Ok(Self { entries })
    }

    pub fn identity() -> Self {
        let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        Self {
            entries: [[o, z], [z, o]],
        }
    }

    /// `(α, β) -> (β, α)`.
    pub fn swap() -> Self {
        let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        Self {
            entries: [[z, o], [o, z]],
        }
    }

    /// Haar-like random unitary built from a Gaussian unit vector and a phase.
    pub fn random_unitary<R: rand::Rng + ?Sized>(rng: &mut R) -> Self {
        let mut ab = [complex_gaussian(rng), complex_gaussian(rng)];
        let nrm = norm(&ab);
        ab[0] /= nrm;
        ab[1] /= nrm;
        let [a, b] = ab;
        let phase = complex_gaussian(rng);
        let phase = phase / phase.norm();
        Self {
            entries: [
                [a * phase, -b.conj() * phase],
                [b * phase, a.conj() * phase],
            ],
        }
    }

    pub fn entries(&self) -> [[Complex64; 2]; 2] {
        self.entries
    }

    pub fn apply(&self, z: &[Complex64]) -> Vec<Complex64> {
        let [[a, b], [c, d]] = self.entries;
        vec![a * z[0] + b * z[1], c * z[0] + d * z[1]]
    }

    pub fn inverse(&self) -> Self {
        let [[a, b], [c, d]] = self.entries;
        let det = a * d - b * c;
        Self {
            entries: [[d / det, -b / det], [-c / det, a / det]],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::multiset_distance;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn diag_qep() -> MatrixPolynomial {
        MatrixPolynomial::new(vec![
            ComplexMatrix::from_real_diag(&[1.0, 4.0]),
            ComplexMatrix::zeros(2, 2),
            ComplexMatrix::from_real_diag(&[-1.0, -1.0]),
        ])
        .unwrap()
    }

    fn random_poly(n: usize, d: usize, seed: u64) -> MatrixPolynomial {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        MatrixPolynomial::new(
            (0..=d)
                .map(|_| ComplexMatrix::random_gaussian(n, n, &mut rng))
                .collect(),
        )
        .unwrap()
    }

    fn pts(v: &[[f64; 2]]) -> Vec<ProjectivePoint> {
        v.iter()
            .map(|p| ProjectivePoint::from_real(p).unwrap())
            .collect()
    }

    #[test]
    fn rejects_invalid_polynomials() {
        assert!(MatrixPolynomial::new(vec![ComplexMatrix::identity(2)]).is_err());
        assert!(MatrixPolynomial::new(vec![
            ComplexMatrix::identity(2),
            ComplexMatrix::identity(3)
        ])
        .is_err());
        assert!(MatrixPolynomial::new(vec![
            ComplexMatrix::zeros(2, 2),
            ComplexMatrix::zeros(2, 2)
        ])
        .is_err());
    }

    #[test]
    fn evaluate_examples() {
        let p = MatrixPolynomial::new(vec![ComplexMatrix::identity(2), ComplexMatrix::zeros(2, 2)])
            .unwrap();
        assert_eq!(p.evaluate(c(0.0), c(1.0)), ComplexMatrix::identity(2));

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let m = diag_qep().evaluate(c(s), c(s));
        let want = ComplexMatrix::from_real_diag(&[0.0, 1.5]);
        assert!((&m - &want).norm_fro() < 1e-15);

        let q = MatrixPolynomial::scalar(&[c(-1.0), c(0.0), c(1.0)]).unwrap();
        assert!(q.evaluate(c(s), c(s))[(0, 0)].norm() < 1e-15);
    }

    #[test]
    fn linear_pencil_derivatives() {
        let a0 = ComplexMatrix::from_real_diag(&[1.0, 2.0]);
        let a1 = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[3.0, 0.0]]);
        let p = MatrixPolynomial::new(vec![a0.clone(), a1.clone()]).unwrap();
        let (al, be) = (Complex64::new(0.3, -0.2), Complex64::new(0.1, 0.9));
        assert_eq!(p.derivative(al, be, Var::Alpha), a1);
        assert_eq!(p.derivative(al, be, Var::Beta), a0);
    }

    #[test]
    fn quadratic_derivative_at_infinity() {
        let a2 = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[0.0, -1.0]]);
        let p = MatrixPolynomial::new(vec![
            ComplexMatrix::identity(2),
            ComplexMatrix::zeros(2, 2),
            a2.clone(),
        ])
        .unwrap();
        assert_eq!(p.derivative(c(1.0), c(0.0), Var::Alpha), a2.scale(c(2.0)));
        assert_eq!(
            p.derivative(c(1.0), c(0.0), Var::Beta),
            ComplexMatrix::zeros(2, 2)
        );
    }

    #[test]
    fn euler_identity_on_random_polynomial() {
        let p = random_poly(3, 4, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(55);
        let (al, be) = (complex_gaussian(&mut rng), complex_gaussian(&mut rng));
        let mut lhs = p.derivative(al, be, Var::Alpha).scale(al);
        lhs.add_scaled(be, &p.derivative(al, be, Var::Beta));
        let rhs = p.evaluate(al, be).scale(c(4.0));
        assert!((&lhs - &rhs).norm_fro() <= 1e-12 * rhs.norm_fro());
    }

    #[test]
    fn companion_layout() {
        let p = random_poly(2, 3, 8);
        let (e, f) = p.companion_pencil();
        assert_eq!((e.rows(), f.rows()), (6, 6));
        assert_eq!(e[(4, 5)], p.coeffs()[3][(0, 1)]);
        assert_eq!(e[(0, 0)], c(1.0));
        assert_eq!(f[(0, 2)], c(1.0));
        assert_eq!(f[(5, 3)], -p.coeffs()[1][(1, 1)]);
    }

    #[test]
    fn scalar_companion_roots() {
        let roots = roots_homogeneous(&[c(-1.0), c(0.0), c(1.0)]).unwrap();
        assert!(multiset_distance(&roots, &pts(&[[1.0, 1.0], [-1.0, 1.0]])) < 1e-14);
    }

    #[test]
    fn quadratic_formula_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let a: Vec<Complex64> = (0..3).map(|_| complex_gaussian(&mut rng)).collect();
        let disc = (a[1] * a[1] - 4.0 * a[2] * a[0]).sqrt();
        let want = [(-a[1] + disc) / (2.0 * a[2]), (-a[1] - disc) / (2.0 * a[2])];
        let got = roots_homogeneous(&a).unwrap();
        let want: Vec<_> = want
            .iter()
            .map(|&l| ProjectivePoint::from_affine(l))
            .collect();
        assert!(multiset_distance(&got, &want) < 1e-10);
    }

    #[test]
    fn linear_pencil_matches_determinant_expansion() {
        // det(β A_0 + α A_1) = 0 with λ = α/β: det(A_0 + λ A_1) is a quadratic in λ.
        let p = random_poly(2, 1, 77);
        let (a0, a1) = (&p.coeffs()[0], &p.coeffs()[1]);
        let det2 = |m: [[Complex64; 2]; 2]| m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let e = |i: usize, j: usize| [a0[(i, j)], a1[(i, j)]];
        // (p00 + λ q00)(p11 + λ q11) - (p01 + λ q01)(p10 + λ q10)
        let (x00, x11, x01, x10) = (e(0, 0), e(1, 1), e(0, 1), e(1, 0));
        let c0 = det2([[x00[0], x01[0]], [x10[0], x11[0]]]);
        let c2 = det2([[x00[1], x01[1]], [x10[1], x11[1]]]);
        let c1 = x00[0] * x11[1] + x00[1] * x11[0] - x01[0] * x10[1] - x01[1] * x10[0];
        let want = roots_homogeneous(&[c0, c1, c2]).unwrap();
        let got = p.hom_eigenvalues().unwrap();
        assert!(multiset_distance(&got, &want) < 1e-10);
    }

    #[test]
    fn diagonal_eigenvalue_examples() {
        let got = diag_qep().hom_eigenvalues().unwrap();
        let want = pts(&[[1.0, 1.0], [-1.0, 1.0], [2.0, 1.0], [-2.0, 1.0]]);
        assert!(multiset_distance(&got, &want) < 1e-14);

        let pencil = MatrixPolynomial::new(vec![
            ComplexMatrix::from_real_diag(&[1.0, 2.0]),
            ComplexMatrix::from_real_diag(&[-1.0, -1.0]),
        ])
        .unwrap();
        let got = pencil.hom_eigenvalues().unwrap();
        assert!(multiset_distance(&got, &pts(&[[1.0, 1.0], [2.0, 1.0]])) < 1e-14);
    }

    #[test]
    fn random_eigenvalues_are_residual_certified() {
        let p = random_poly(3, 2, 21);
        let z = p.hom_eigenvalues().unwrap();
        assert_eq!(z.len(), 6);
        for zi in &z {
            let m = p.evaluate_at(zi);
            assert!(sigma_min_estimate(&m) <= 1e-8 * p.norm());
        }
    }

    #[test]
    fn moebius_identity_and_swap() {
        let p = random_poly(2, 3, 4);
        assert_eq!(p.moebius_substitute(&MoebiusMap::identity()), p);
        let swapped = p.moebius_substitute(&MoebiusMap::swap());
        for k in 0..=3 {
            assert_eq!(swapped.coeffs()[k], p.coeffs()[3 - k]);
        }
    }

    #[test]
    fn moebius_transports_eigenvalues() {
        let p = random_poly(2, 2, 13);
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let u = MoebiusMap::random_unitary(&mut rng);
        let moved = p.moebius_substitute(&u).hom_eigenvalues().unwrap();
        let inv = u.inverse();
        let want: Vec<ProjectivePoint> = p
            .hom_eigenvalues()
            .unwrap()
            .iter()
            .map(|z| ProjectivePoint::new(&inv.apply(z.coords())).unwrap())
            .collect();
        assert!(multiset_distance(&moved, &want) < 1e-8);
    }

    #[test]
    fn moebius_map_validation() {
        let bad = [[c(2.0), c(0.0)], [c(0.0), c(2.0)]];
        assert!(MoebiusMap::new(bad).is_err());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u = MoebiusMap::random_unitary(&mut rng);
        assert!(MoebiusMap::new(u.entries()).is_ok());
    }

    #[test]
    fn infinite_eigenvalue_via_change_of_variables() {
        // A_1 singular: (1, 0) is an eigenvalue.
        let p = MatrixPolynomial::new(vec![
            ComplexMatrix::from_real_diag(&[1.0, 2.0]),
            ComplexMatrix::from_real_diag(&[0.0, -1.0]),
        ])
        .unwrap();
        let got = p.hom_eigenvalues().unwrap();
        assert!(multiset_distance(&got, &pts(&[[1.0, 0.0], [2.0, 1.0]])) < 1e-12);
    }

    #[test]
    fn degenerate_polynomial_is_reported() {
        // det P vanishes identically.
        let p = MatrixPolynomial::new(vec![
            ComplexMatrix::from_real_diag(&[1.0, 0.0]),
            ComplexMatrix::from_real_diag(&[1.0, 0.0]),
        ])
        .unwrap();
        assert!(matches!(
            p.hom_eigenvalues(),
            Err(Error::DegenerateInstance(_))
        ));
    }

    #[test]
    fn double_root_returned_twice() {
        let roots = roots_homogeneous(&[c(0.0), c(0.0), c(1.0)]).unwrap();
        assert_eq!(roots.len(), 2);
        for r in &roots {
            assert!(r.distance(&ProjectivePoint::from_real(&[0.0, 1.0]).unwrap()) < 1e-14);
        }
    }

    #[test]
    fn refactorization_of_degree_seven() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a: Vec<Complex64> = (0..8).map(|_| complex_gaussian(&mut rng)).collect();
        let roots = roots_homogeneous(&a).unwrap();
        assert_eq!(roots.len(), 7);
        // a_7 Π (t - λ_i) in ascending powers of t.
        let mut prod = vec![a[7]];
        for r in &roots {
            prod = poly_mul_linear(&prod, c(1.0), -r.affine().unwrap());
        }
        let err: f64 = prod
            .iter()
            .zip(&a)
            .map(|(x, y)| (x - y).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(err <= 1e-8 * norm(&a), "refactorization error {err}");
    }

    #[test]
    fn triples_on_diagonal_pencil() {
        let pencil = MatrixPolynomial::new(vec![
            ComplexMatrix::from_real_diag(&[1.0, 2.0]),
            ComplexMatrix::from_real_diag(&[-1.0, -1.0]),
        ])
        .unwrap();
        let target = ProjectivePoint::from_real(&[1.0, 1.0]).unwrap();
        let t = pencil
            .eigen_triples()
            .unwrap()
            .into_iter()
            .find(|t| t.z.distance(&target) < 1e-12)
            .unwrap();
        assert!(t.trusted);
        assert!((t.x[0].norm() - 1.0).abs() < 1e-12 && t.x[1].norm() < 1e-12);
        assert!((t.y[0].norm() - 1.0).abs() < 1e-12 && t.y[1].norm() < 1e-12);
    }

    #[test]
    fn scalar_triples_are_trivial() {
        let p = MatrixPolynomial::scalar(&[c(-1.0), c(0.5), c(1.0)]).unwrap();
        for t in p.eigen_triples().unwrap() {
            assert_eq!(t.x, vec![c(1.0)]);
            assert_eq!(t.y, vec![c(1.0)]);
            assert!(t.trusted);
        }
    }

    #[test]
    fn random_triples_trusted() {
        let p = random_poly(2, 2, 33);
        let triples = p.eigen_triples().unwrap();
        assert_eq!(triples.len(), 4);
        for t in &triples {
            assert!(t.trusted);
            assert!(t.residual_right <= 1e-8 && t.residual_left <= 1e-8);
            let m = p.evaluate_at(&t.z);
            assert!(norm(&m.matvec(&t.x)) <= 1e-8 * p.norm());
            assert!(norm(&m.vecmat_adjoint(&t.y)) <= 1e-8 * p.norm());
        }
    }
}
