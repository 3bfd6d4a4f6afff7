//! Output curves: the projective line `P(C^2)` and the conic
//! `g(α, β, γ) = αβ + αγ + βγ = 0` in `P(C^3)`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{dot, norm};
use crate::point::{canonicalize, ProjectivePoint};

/// Points farther than this from the conic are rejected by [`tangent`].
pub const ON_CURVE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputVariety {
    ProjectiveLine,
    QuadricCurve,
}

impl OutputVariety {
    /// Number of homogeneous coordinates.
    pub fn ambient_dim(self) -> usize {
        match self {
            Self::ProjectiveLine => 2,
            Self::QuadricCurve => 3,
        }
    }

    pub fn degree(self) -> usize {
        match self {
            Self::ProjectiveLine => 1,
            Self::QuadricCurve => 2,
        }
    }
}

/// Unit tangent direction at a curve point, orthogonal to the point.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector {
    pub t: Vec<Complex64>,
}

pub fn quadric_g(z: &[Complex64]) -> Complex64 {
    z[0] * z[1] + z[0] * z[2] + z[1] * z[2]
}

/// `Dg = (β + γ, α + γ, α + β)`.
pub fn quadric_gradient(z: &[Complex64]) -> [Complex64; 3] {
    [z[1] + z[2], z[0] + z[2], z[0] + z[1]]
}

/// Unit tangent vector of `o` at `z`.
pub fn tangent(o: OutputVariety, z: &ProjectivePoint) -> Result<TangentVector> {
    let c = z.coords();
    if c.len() != o.ambient_dim() {
        return Err(Error::Dimension(format!(
            "point with {} coordinates on a curve in P(C^{})",
            c.len(),
            o.ambient_dim()
        )));
    }
    match o {
        OutputVariety::ProjectiveLine => Ok(TangentVector {
            t: canonicalize(&[-c[1].conj(), c[0].conj()]),
        }),
        OutputVariety::QuadricCurve => {
            if quadric_g(c).norm() > ON_CURVE_TOL {
                return Err(Error::InvalidInput(format!(
                    "point is off the conic: |g| = {:e}",
                    quadric_g(c).norm()
                )));
            }
            let [e1, e2] = orthogonal_complement(c);
            let grad = quadric_gradient(c);
            let lin = |v: &[Complex64]| grad.iter().zip(v).map(|(a, b)| a * b).sum::<Complex64>();
            let (g1, g2) = (lin(&e1), lin(&e2));
            if g1.norm() + g2.norm() <= 1e-14 * norm(&grad).max(1.0) {
                return Err(Error::SingularCurvePoint);
            }
            // a g1 + b g2 = 0 with (a, b) = (g2, -g1).
            let t: Vec<Complex64> = (0..3).map(|i| g2 * e1[i] - g1 * e2[i]).collect();
            Ok(TangentVector {
                t: canonicalize(&t),
            })
        }
    }
}

/// Orthonormal basis of `z^⊥` in `C^3` (z unit).
fn orthogonal_complement(z: &[Complex64]) -> [Vec<Complex64>; 2] {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    // Gram-Schmidt on the two standard vectors least aligned with z.
    let mut order = [0usize, 1, 2];
    order.sort_by(|&a, &b| z[a].norm().total_cmp(&z[b].norm()));
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(2);
    for &i in &order[..2] {
        let mut v = vec![zero; 3];
        v[i] = one;
        let mut prev: Vec<&[Complex64]> = vec![z];
        prev.extend(basis.iter().map(|b| b.as_slice()));
        for _ in 0..2 {
            for q in &prev {
                let c = dot(q, &v);
                for k in 0..3 {
                    v[k] -= c * q[k];
                }
            }
        }
        let nv = norm(&v);
        for x in v.iter_mut() {
            *x /= nv;
        }
        basis.push(v);
    }
    let e2 = basis.pop().unwrap();
    let e1 = basis.pop().unwrap();
    [e1, e2]
}

/// `φ(u, v) = (uv, -u(u+v), -v(u+v))`, the conic seen from its point `(1, 0, 0)`.
pub fn quadric_map(u: Complex64, v: Complex64) -> [Complex64; 3] {
    let s = u + v;
    [u * v, -u * s, -v * s]
}

/// Partial derivatives `(∂φ/∂u, ∂φ/∂v)`.
pub fn quadric_map_jacobian(u: Complex64, v: Complex64) -> [[Complex64; 3]; 2] {
    let s = u + v;
    [[v, -(s + u), -v], [u, -u, -(s + v)]]
}

/// Canonical point `φ(u, v)` of the conic.
pub fn quadric_parametrize(u: Complex64, v: Complex64) -> Result<ProjectivePoint> {
    if u.norm() == 0.0 && v.norm() == 0.0 {
        return Err(Error::InvalidInput("(u, v) must be nonzero".into()));
    }
    ProjectivePoint::new(&quadric_map(u, v))
}

/// Parameter `(u, v)` with `φ(u, v) ∝ z`; the inverse of `φ` is `(β, γ)`,
/// except at the base point `(1, 0, 0)` which is `φ(1, -1)`.
pub fn quadric_preimage(z: &[Complex64]) -> [Complex64; 2] {
    if z[1].norm() + z[2].norm() <= 1e-14 * z[0].norm() {
        return [Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)];
    }
    [z[1], z[2]]
}
