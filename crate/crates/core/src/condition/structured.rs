use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::matpoly::monomials;

/// Boolean sparsity pattern of one coefficient block; `true` marks a free entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mask {
    n: usize,
    free: Vec<bool>,
}

/// Named mask shapes accepted on the command line and in problem files.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MaskPattern {
    Full,
    Diagonal,
    Upper,
    Lower,
}

impl MaskPattern {
    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "full" => Some(Self::Full),
            "diag" | "diagonal" => Some(Self::Diagonal),
            "upper" | "triu" => Some(Self::Upper),
            "lower" | "tril" => Some(Self::Lower),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Full => "full",
            Self::Diagonal => "diag",
            Self::Upper => "upper",
            Self::Lower => "lower",
        }
    }
}

impl Mask {
    pub fn from_pattern(pattern: MaskPattern, n: usize) -> Self {
        let keep = |i: usize, j: usize| match pattern {
            MaskPattern::Full => true,
            MaskPattern::Diagonal => i == j,
            MaskPattern::Upper => i <= j,
            MaskPattern::Lower => i >= j,
        };
        let free = (0..n * n).map(|idx| keep(idx / n, idx % n)).collect();
        Self { n, free }
    }

    pub fn full(n: usize) -> Self {
        Self::from_pattern(MaskPattern::Full, n)
    }

    /// Row-major pattern; `free.len()` must be a perfect square.
    pub fn from_bools(free: Vec<bool>) -> Result<Self> {
        let n = (free.len() as f64).sqrt().round() as usize;
        if n * n != free.len() {
            return Err(Error::Dimension(format!(
                "mask with {} entries is not square",
                free.len()
            )));
        }
        Ok(Self { n, free })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_free(&self, i: usize, j: usize) -> bool {
        self.free[i * self.n + j]
    }

    pub fn count(&self) -> usize {
        self.free.iter().filter(|&&b| b).count()
    }

    pub fn is_full(&self) -> bool {
        self.free.iter().all(|&b| b)
    }

    pub fn as_bools(&self) -> &[bool] {
        &self.free
    }

    /// Zeroes every non-free entry of `m`.
    pub fn apply(&self, m: &mut ComplexMatrix) {
        for i in 0..self.n {
            for j in 0..self.n {
                if !self.is_free(i, j) {
                    m[(i, j)] = Complex64::new(0.0, 0.0);
                }
            }
        }
    }

    /// Free positions in row-major order.
    pub fn free_entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n * self.n)
            .filter(move |&idx| self.free[idx])
            .map(move |idx| (idx / self.n, idx % self.n))
    }
}

/// How the coefficient blocks enter the matrix-valued map `M(z) = Σ_k w_k(z) C_k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightKind {
    /// `w_k(α, β) = α^k β^{d-k}`, `k = 0..=d`.
    Monomial { degree: usize },
    /// `w_k(z) = z_k` on `C^3`.
    Linear,
}

/// Weights and free-entry masks of a structured determinantal problem.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuredWeights {
    pub kind: WeightKind,
    pub masks: Vec<Mask>,
}

impl StructuredWeights {
    pub fn new(kind: WeightKind, masks: Vec<Mask>) -> Result<Self> {
        let blocks = match kind {
            WeightKind::Monomial { degree } => degree + 1,
            WeightKind::Linear => 3,
        };
        if masks.len() != blocks {
            return Err(Error::Dimension(format!(
                "{} masks for {blocks} blocks",
                masks.len()
            )));
        }
        if masks.iter().map(Mask::count).sum::<usize>() == 0 {
            return Err(Error::InvalidInput("no free entries".into()));
        }
        if masks.windows(2).any(|w| w[0].n() != w[1].n()) {
            return Err(Error::Dimension("masks of different sizes".into()));
        }
        Ok(Self { kind, masks })
    }

    /// All entries of all blocks free.
    pub fn dense(kind: WeightKind, n: usize) -> Self {
        let blocks = match kind {
            WeightKind::Monomial { degree } => degree + 1,
            WeightKind::Linear => 3,
        };
        Self {
            kind,
            masks: vec![Mask::full(n); blocks],
        }
    }

    pub fn n(&self) -> usize {
        self.masks[0].n()
    }

    /// Total number of free complex parameters.
    pub fn free_count(&self) -> usize {
        self.masks.iter().map(Mask::count).sum()
    }

    pub fn values(&self, z: &[Complex64]) -> Vec<Complex64> {
        match self.kind {
            WeightKind::Monomial { degree } => monomials(z[0], z[1], degree),
            WeightKind::Linear => z[..3].to_vec(),
        }
    }

    /// Directional derivatives `∇w_k(z) · t`.
    pub fn directional(&self, z: &[Complex64], t: &[Complex64]) -> Vec<Complex64> {
        match self.kind {
            WeightKind::Monomial { degree: d } => {
                let lower = if d == 0 {
                    vec![]
                } else {
                    monomials(z[0], z[1], d - 1)
                };
                (0..=d)
                    .map(|k| {
                        let mut s = Complex64::new(0.0, 0.0);
                        if k > 0 {
                            // k α^{k-1} β^{d-k}
                            s += (k as f64) * lower[k - 1] * t[0];
                        }
                        if k < d {
                            // (d-k) α^k β^{d-k-1}
                            s += ((d - k) as f64) * lower[k] * t[1];
                        }
                        s
                    })
                    .collect()
            }
            WeightKind::Linear => t[..3].to_vec(),
        }
    }

    /// `M(z) = Σ w_k(z) C_k`.
    pub fn evaluate(&self, blocks: &[ComplexMatrix], z: &[Complex64]) -> ComplexMatrix {
        combine(blocks, &self.values(z))
    }

    /// `D_t M(z) = Σ (∇w_k(z)·t) C_k`.
    pub fn evaluate_directional(
        &self,
        blocks: &[ComplexMatrix],
        z: &[Complex64],
        t: &[Complex64],
    ) -> ComplexMatrix {
        combine(blocks, &self.directional(z, t))
    }
}

fn combine(blocks: &[ComplexMatrix], w: &[Complex64]) -> ComplexMatrix {
    let n = blocks[0].rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for (b, &wk) in blocks.iter().zip(w) {
        out.add_scaled(wk, b);
    }
    out
}
