use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{dot, norm};

/// Relative slack under which two coordinate moduli count as tied when
/// choosing the phase-fixing coordinate.
const TIE_TOL: f64 = 1e-12;

/// Canonical representative of a point of `P(C^b)`: unit norm, and the
/// coordinate of largest modulus (lowest index on ties) is real positive.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectivePoint {
    coords: Vec<Complex64>,
}

impl ProjectivePoint {
    pub fn new(coords: &[Complex64]) -> Result<Self> {
        let nrm = norm(coords);
        if !(nrm > 0.0) || !nrm.is_finite() {
            return Err(Error::InvalidInput(
                "projective point needs a finite nonzero vector".into(),
            ));
        }
        Ok(Self {
            coords: canonicalize(coords),
        })
    }

    /// The point `(λ, 1)` of the projective line.
    pub fn from_affine(lambda: Complex64) -> Self {
        Self::new(&[lambda, Complex64::new(1.0, 0.0)]).expect("(λ, 1) is never zero")
    }

    pub fn from_real(coords: &[f64]) -> Result<Self> {
        let c: Vec<Complex64> = coords.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::new(&c)
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// `α/β` for a point of the projective line when `|β| > 1e-12`.
    pub fn affine(&self) -> Option<Complex64> {
        if self.coords.len() == 2 && self.coords[1].norm() > 1e-12 {
            Some(self.coords[0] / self.coords[1])
        } else {
            None
        }
    }

    /// Distance between unit representatives after optimal phase alignment,
    /// `min_θ ‖a - e^{iθ} b‖`. Accurate to rounding for nearby points.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(self.dim(), other.dim());
        let overlap = dot(&other.coords, &self.coords);
        if overlap.norm() == 0.0 {
            return std::f64::consts::SQRT_2;
        }
        let phase = overlap / overlap.norm();
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b * phase).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Unit-normalizes `v` and rotates its phase so the dominant coordinate is real positive.
pub fn canonicalize(v: &[Complex64]) -> Vec<Complex64> {
    let nrm = norm(v);
    let max = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let lead = v
        .iter()
        .position(|z| z.norm() >= max * (1.0 - TIE_TOL))
        .expect("nonempty");
    let phase = v[lead].conj() / v[lead].norm();
    v.iter().map(|&z| z * phase / nrm).collect()
}

/// Greedy matching of two point multisets; returns the largest matched distance.
pub fn multiset_distance(a: &[ProjectivePoint], b: &[ProjectivePoint]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for p in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, q)| (j, p.distance(q)))
            .min_by(|x, y| x.1.total_cmp(&y.1))
            .expect("same length");
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}
