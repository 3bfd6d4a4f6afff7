//! Problem families, Gaussian sampling, and solving.
//!
//! Every family is a bihomogeneous problem `F(p, z) = 0` with input `p ∈ C^m`
//! and output `z` on a curve of degree `d_O`; `r` and `s` are the degrees of
//! `F` in `p` and in `z`. For Gaussian inputs the mean over solutions of the
//! squared condition number has expectation `(m - 1) r / s`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use crate::condition::{
    mu_generic, mu_pevp_closed, mu_stochastic, ConditionReport, EigenCondition, Mask, MaskPattern,
    StructuredWeights, WeightKind,
};
use crate::error::{Error, Result};
use crate::geometry::{quadric_map, quadric_parametrize, OutputVariety};
use crate::linalg::{complex_gaussian, determinant, ComplexMatrix};
use crate::matpoly::{
    roots_homogeneous, triple_from_matrix, EigenTriple, MatrixPolynomial, DEFAULT_SEED,
};
use crate::rng::substream;

/// Two solutions closer than this count as coincident.
pub const COINCIDENCE_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProblemDescriptor {
    /// Roots of a dense binary form of degree `degree`.
    DensePoly { degree: usize },
    /// Roots of a binary form supported on `indices` (contains 0 and `degree`).
    Lacunary { degree: usize, indices: Vec<usize> },
    /// `det(βA - αB) = 0`.
    Gevp { n: usize },
    /// `det(Σ α^k β^{d-k} A_k) = 0`.
    Pevp { n: usize, d: usize },
    /// PEVP with per-coefficient sparsity masks; `masks[k]` applies to `A_k`.
    MaskedPevp {
        n: usize,
        d: usize,
        masks: Vec<Mask>,
    },
    /// `det(αA + βB + γC) = 0` on the conic `αβ + αγ + βγ = 0`.
    Quadric { n: usize },
}

impl ProblemDescriptor {
    pub fn dense_poly(degree: usize) -> Result<Self> {
        if degree < 1 {
            return Err(Error::InvalidInput("polynomial degree must be >= 1".into()));
        }
        Ok(Self::DensePoly { degree })
    }

    pub fn lacunary(degree: usize, indices: &[usize]) -> Result<Self> {
        let mut idx = indices.to_vec();
        idx.sort_unstable();
        idx.dedup();
        if degree < 1 || idx.first() != Some(&0) || idx.last() != Some(&degree) {
            return Err(Error::InvalidInput(format!(
                "lacunary support must contain 0 and the degree {degree}"
            )));
        }
        Ok(Self::Lacunary {
            degree,
            indices: idx,
        })
    }

    pub fn gevp(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidInput("matrix size must be >= 1".into()));
        }
        Ok(Self::Gevp { n })
    }

    pub fn pevp(n: usize, d: usize) -> Result<Self> {
        if n < 1 || d < 1 {
            return Err(Error::InvalidInput("PEVP needs n >= 1 and d >= 1".into()));
        }
        Ok(Self::Pevp { n, d })
    }

    pub fn masked_pevp(n: usize, d: usize, masks: Vec<Mask>) -> Result<Self> {
        if n < 1 || d < 1 {
            return Err(Error::InvalidInput("PEVP needs n >= 1 and d >= 1".into()));
        }
        if masks.len() != d + 1 {
            return Err(Error::Dimension(format!(
                "{} masks for degree {d}",
                masks.len()
            )));
        }
        if let Some(k) = masks.iter().position(|m| m.n() != n) {
            return Err(Error::Dimension(format!("mask {k} is not {n}x{n}")));
        }
        if let Some(k) = masks.iter().position(|m| m.count() == 0) {
            return Err(Error::InvalidInput(format!("mask {k} has no free entry")));
        }
        Ok(Self::MaskedPevp { n, d, masks })
    }

    /// Quadratic problem with `A` (of `α²`) diagonal, `B` full and `C` (of
    /// `β²`) upper triangular.
    pub fn sparse_qep(n: usize) -> Result<Self> {
        Self::masked_pevp(
            n,
            2,
            vec![
                Mask::from_pattern(MaskPattern::Upper, n),
                Mask::from_pattern(MaskPattern::Full, n),
                Mask::from_pattern(MaskPattern::Diagonal, n),
            ],
        )
    }

    pub fn quadric(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidInput("matrix size must be >= 1".into()));
        }
        Ok(Self::Quadric { n })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::DensePoly { .. } => "dense",
            Self::Lacunary { .. } => "lacunary",
            Self::Gevp { .. } => "gevp",
            Self::Pevp { .. } => "pevp",
            Self::MaskedPevp { .. } => "masked",
            Self::Quadric { .. } => "quadric",
        }
    }

    /// Matrix size (1 for scalar polynomials).
    pub fn n(&self) -> usize {
        match self {
            Self::DensePoly { .. } | Self::Lacunary { .. } => 1,
            Self::Gevp { n }
            | Self::Pevp { n, .. }
            | Self::MaskedPevp { n, .. }
            | Self::Quadric { n } => *n,
        }
    }

    /// Degree of the matrix polynomial in `(α, β)`; 1 for the conic problem.
    pub fn degree(&self) -> usize {
        match self {
            Self::DensePoly { degree } | Self::Lacunary { degree, .. } => *degree,
            Self::Gevp { .. } | Self::Quadric { .. } => 1,
            Self::Pevp { d, .. } | Self::MaskedPevp { d, .. } => *d,
        }
    }

    /// Free complex dimension of the input space.
    pub fn m(&self) -> usize {
        match self {
            Self::DensePoly { degree } => degree + 1,
            Self::Lacunary { indices, .. } => indices.len(),
            Self::Gevp { n } => 2 * n * n,
            Self::Pevp { n, d } => (d + 1) * n * n,
            Self::MaskedPevp { masks, .. } => masks.iter().map(Mask::count).sum(),
            Self::Quadric { n } => 3 * n * n,
        }
    }

    /// Degree of `F` in the input.
    pub fn r(&self) -> usize {
        match self {
            Self::DensePoly { .. } | Self::Lacunary { .. } => 1,
            _ => self.n(),
        }
    }

    /// Degree of `F` in the output.
    pub fn s(&self) -> usize {
        match self {
            Self::DensePoly { degree } | Self::Lacunary { degree, .. } => *degree,
            Self::Gevp { n } | Self::Quadric { n } => *n,
            Self::Pevp { n, d } | Self::MaskedPevp { n, d, .. } => d * n,
        }
    }

    pub fn output_variety(&self) -> OutputVariety {
        match self {
            Self::Quadric { .. } => OutputVariety::QuadricCurve,
            _ => OutputVariety::ProjectiveLine,
        }
    }

    pub fn d_o(&self) -> usize {
        self.output_variety().degree()
    }

    /// `(m - 1) r / s`.
    pub fn expected_mean_sq_condition(&self) -> f64 {
        (self.m() as f64 - 1.0) * self.r() as f64 / self.s() as f64
    }

    /// `m r / s`: the closed form without the `-1`. Reported next to the
    /// correct value for the masked and conic families, where it has been
    /// quoted as the expected value.
    pub fn uncorrected_value(&self) -> Option<f64> {
        match self {
            Self::MaskedPevp { .. } | Self::Quadric { .. } => {
                Some(self.m() as f64 * self.r() as f64 / self.s() as f64)
            }
            _ => None,
        }
    }

    /// Number of solutions of a generic instance: `s d_O`.
    pub fn expected_solution_count(&self) -> usize {
        self.s() * self.d_o()
    }

    /// Weights and masks of the structured map `M(z) = Σ w_k(z) C_k`.
    pub fn weights(&self) -> StructuredWeights {
        match self {
            Self::DensePoly { degree } => {
                StructuredWeights::dense(WeightKind::Monomial { degree: *degree }, 1)
            }
            Self::Lacunary { degree, indices } => StructuredWeights {
                kind: WeightKind::Monomial { degree: *degree },
                masks: (0..=*degree)
                    .map(|k| Mask::from_bools(vec![indices.contains(&k)]).expect("1x1"))
                    .collect(),
            },
            Self::Gevp { n } => StructuredWeights::dense(WeightKind::Monomial { degree: 1 }, *n),
            Self::Pevp { n, d } => {
                StructuredWeights::dense(WeightKind::Monomial { degree: *d }, *n)
            }
            Self::MaskedPevp { d, masks, .. } => StructuredWeights {
                kind: WeightKind::Monomial { degree: *d },
                masks: masks.clone(),
            },
            Self::Quadric { n } => StructuredWeights::dense(WeightKind::Linear, *n),
        }
    }

    /// Number of coefficient blocks the instance data carries.
    fn block_count(&self) -> usize {
        match self {
            Self::DensePoly { degree } | Self::Lacunary { degree, .. } => degree + 1,
            Self::Gevp { .. } => 2,
            Self::Pevp { d, .. } | Self::MaskedPevp { d, .. } => d + 1,
            Self::Quadric { .. } => 3,
        }
    }
}

/// Concrete coefficient data of an instance.
#[derive(Clone, Debug, PartialEq)]
pub enum InstanceData {
    /// `a_k` multiplies `X^k Y^{N-k}`.
    Coefficients(Vec<Complex64>),
    /// `(A, B)` for the GEVP, `(A_0, …, A_d)` for PEVPs, `(A, B, C)` for the conic problem.
    Matrices(Vec<ComplexMatrix>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProblemInstance {
    pub descriptor: ProblemDescriptor,
    pub data: InstanceData,
    /// Euclidean norm of the free parameters.
    pub p_norm: f64,
}

impl ProblemInstance {
    /// Validates shapes and masks; masked entries must be exactly zero.
    pub fn new(descriptor: ProblemDescriptor, data: InstanceData) -> Result<Self> {
        let weights = descriptor.weights();
        let want = descriptor.block_count();
        match (&descriptor, &data) {
            (
                ProblemDescriptor::DensePoly { .. } | ProblemDescriptor::Lacunary { .. },
                InstanceData::Coefficients(a),
            ) => {
                if a.len() != want {
                    return Err(Error::Dimension(format!(
                        "{} coefficients, expected {want}",
                        a.len()
                    )));
                }
                for (k, ak) in a.iter().enumerate() {
                    if !weights.masks[k].is_free(0, 0) && *ak != Complex64::new(0.0, 0.0) {
                        return Err(Error::InvalidInput(format!("coefficient {k} must be zero")));
                    }
                    if !ak.re.is_finite() || !ak.im.is_finite() {
                        return Err(Error::InvalidInput(format!(
                            "coefficient {k} is not finite"
                        )));
                    }
                }
            }
            (ProblemDescriptor::DensePoly { .. } | ProblemDescriptor::Lacunary { .. }, _) => {
                return Err(Error::InvalidInput(
                    "polynomial families take coefficient data".into(),
                ))
            }
            (_, InstanceData::Matrices(ms)) => {
                let n = descriptor.n();
                if ms.len() != want {
                    return Err(Error::Dimension(format!(
                        "{} matrices, expected {want}",
                        ms.len()
                    )));
                }
                for (k, m) in ms.iter().enumerate() {
                    if m.rows() != n || m.cols() != n {
                        return Err(Error::Dimension(format!("matrix {k} is not {n}x{n}")));
                    }
                    if !m.is_finite() {
                        return Err(Error::InvalidInput(format!("matrix {k} is not finite")));
                    }
                }
                if let ProblemDescriptor::MaskedPevp { masks, .. } = &descriptor {
                    for (k, (m, mask)) in ms.iter().zip(masks).enumerate() {
                        for i in 0..n {
                            for j in 0..n {
                                if !mask.is_free(i, j) && m[(i, j)] != Complex64::new(0.0, 0.0) {
                                    return Err(Error::InvalidInput(format!(
                                        "matrix {k} entry ({i},{j}) is masked but nonzero"
                                    )));
                                }
                            }
                        }
                    }
                }
            }
            (_, InstanceData::Coefficients(_)) => {
                return Err(Error::InvalidInput(
                    "matrix families take matrix data".into(),
                ))
            }
        }
        let p_norm = match &data {
            InstanceData::Coefficients(a) => a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt(),
            InstanceData::Matrices(ms) => ms.iter().map(|m| m.norm_fro_sqr()).sum::<f64>().sqrt(),
        };
        if !(p_norm > 0.0) {
            return Err(Error::InvalidInput("instance norm must be positive".into()));
        }
        Ok(Self {
            descriptor,
            data,
            p_norm,
        })
    }

    /// Coefficient blocks `C_k` of the structured map; the GEVP pair `(A, B)`
    /// becomes `(A, -B)` so that `det(βA - αB) = det(β C_0 + α C_1)`.
    pub fn blocks(&self) -> Vec<ComplexMatrix> {
        match (&self.descriptor, &self.data) {
            (_, InstanceData::Coefficients(a)) => a
                .iter()
                .map(|&ak| ComplexMatrix::from_diag(&[ak]))
                .collect(),
            (ProblemDescriptor::Gevp { .. }, InstanceData::Matrices(ms)) => {
                vec![ms[0].clone(), -&ms[1]]
            }
            (_, InstanceData::Matrices(ms)) => ms.clone(),
        }
    }

    /// Matrix polynomial of a projective-line family.
    pub fn matrix_polynomial(&self) -> Option<MatrixPolynomial> {
        match self.descriptor {
            ProblemDescriptor::Quadric { .. } => None,
            _ => Some(MatrixPolynomial::new(self.blocks()).expect("validated instance")),
        }
    }

    /// `t · p`.
    pub fn scaled(&self, t: Complex64) -> Self {
        let data = match &self.data {
            InstanceData::Coefficients(a) => {
                InstanceData::Coefficients(a.iter().map(|z| z * t).collect())
            }
            InstanceData::Matrices(ms) => {
                InstanceData::Matrices(ms.iter().map(|m| m.scale(t)).collect())
            }
        };
        Self::new(self.descriptor.clone(), data).expect("scaling preserves validity")
    }
}

/// Gaussian instance number `index` of the run seeded by `seed`.
pub fn sample_instance(desc: &ProblemDescriptor, seed: u64, index: u64) -> ProblemInstance {
    sample_instance_attempt(desc, seed, index, 0)
}

/// Like [`sample_instance`] on the replacement stream `attempt`.
pub fn sample_instance_attempt(
    desc: &ProblemDescriptor,
    seed: u64,
    index: u64,
    attempt: u64,
) -> ProblemInstance {
    let mut rng = substream(seed, index, attempt);
    let data = sample_data(desc, &mut rng);
    ProblemInstance::new(desc.clone(), data)
        .expect("sampled instance is valid with probability one")
}

fn sample_data<R: Rng + ?Sized>(desc: &ProblemDescriptor, rng: &mut R) -> InstanceData {
    let zero = Complex64::new(0.0, 0.0);
    match desc {
        ProblemDescriptor::DensePoly { degree } => {
            InstanceData::Coefficients((0..=*degree).map(|_| complex_gaussian(rng)).collect())
        }
        ProblemDescriptor::Lacunary { degree, indices } => InstanceData::Coefficients(
            (0..=*degree)
                .map(|k| {
                    if indices.contains(&k) {
                        complex_gaussian(rng)
                    } else {
                        zero
                    }
                })
                .collect(),
        ),
        ProblemDescriptor::MaskedPevp { n, masks, .. } => InstanceData::Matrices(
            masks
                .iter()
                .map(|mask| {
                    let mut m = ComplexMatrix::zeros(*n, *n);
                    for (i, j) in mask.free_entries() {
                        m[(i, j)] = complex_gaussian(rng);
                    }
                    m
                })
                .collect(),
        ),
        _ => {
            let n = desc.n();
            InstanceData::Matrices(
                (0..desc.block_count())
                    .map(|_| ComplexMatrix::random_gaussian(n, n, rng))
                    .collect(),
            )
        }
    }
}

/// Solutions of one instance.
#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub triples: Vec<EigenTriple>,
    /// Set when the instance does not have exactly `s d_O` distinct solutions.
    pub count_mismatch: bool,
}

/// Finds all solutions with their right/left null vectors.
pub fn solve_instance(inst: &ProblemInstance) -> Result<SolveOutcome> {
    let triples = match &inst.descriptor {
        ProblemDescriptor::Quadric { .. } => solve_quadric(inst)?,
        _ => inst
            .matrix_polynomial()
            .expect("line family")
            .eigen_triples_seeded(DEFAULT_SEED)?,
    };
    let expected = inst.descriptor.expected_solution_count();
    let coincident = triples.iter().enumerate().any(|(i, a)| {
        triples[i + 1..]
            .iter()
            .any(|b| a.z.distance(&b.z) < COINCIDENCE_TOL)
    });
    Ok(SolveOutcome {
        count_mismatch: triples.len() != expected || coincident,
        triples,
    })
}

/// `det(M(φ(u, v)))` is a binary form of degree `2n`; its coefficients are
/// recovered from the values at `(ω^j, 1)`, `ω = e^{2πi/(2n+1)}`, by an
/// inverse DFT. Its roots are mapped back onto the conic.
fn solve_quadric(inst: &ProblemInstance) -> Result<Vec<EigenTriple>> {
    let blocks = inst.blocks();
    let weights = inst.descriptor.weights();
    let n = inst.descriptor.n();
    let deg = 2 * n;
    let nodes = deg + 1;
    let values: Vec<Complex64> = (0..nodes)
        .map(|j| {
            let w = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / nodes as f64);
            let z = quadric_map(w, Complex64::new(1.0, 0.0));
            determinant(&weights.evaluate(&blocks, &z))
        })
        .collect();
    let coeffs: Vec<Complex64> = (0..=deg)
        .map(|k| {
            values
                .iter()
                .enumerate()
                .map(|(j, q)| {
                    q * Complex64::from_polar(
                        1.0,
                        -2.0 * PI * (j * k % nodes) as f64 / nodes as f64,
                    )
                })
                .sum::<Complex64>()
                / nodes as f64
        })
        .collect();
    let roots = roots_homogeneous(&coeffs)
        .map_err(|e| Error::DegenerateInstance(format!("conic determinant form: {e}")))?;
    let scale = inst.p_norm;
    roots
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let z = quadric_parametrize(r.coords()[0], r.coords()[1])?;
            let m = weights.evaluate(&blocks, z.coords());
            triple_from_matrix(z, &m, scale, DEFAULT_SEED.wrapping_add(2 * i as u64 + 1))
        })
        .collect()
}

/// Condition numbers of every solution. Untrusted solutions are reported
/// with `μ = +∞`.
pub fn condition_report(inst: &ProblemInstance, outcome: &SolveOutcome) -> Result<ConditionReport> {
    let desc = &inst.descriptor;
    let m = desc.m();
    let closed_form = matches!(
        desc,
        ProblemDescriptor::DensePoly { .. }
            | ProblemDescriptor::Gevp { .. }
            | ProblemDescriptor::Pevp { .. }
    );
    let poly = if closed_form {
        inst.matrix_polynomial()
    } else {
        None
    };
    let weights = desc.weights();
    let blocks = inst.blocks();
    let o = desc.output_variety();
    let per = outcome
        .triples
        .iter()
        .map(|t| {
            let mu = if !t.trusted {
                f64::INFINITY
            } else if let Some(p) = &poly {
                mu_pevp_closed(p, t)?
            } else {
                mu_generic(&weights, &blocks, o, t, inst.p_norm)?
            };
            Ok(EigenCondition {
                z: t.z.clone(),
                mu,
                mu_st_sq: mu_stochastic(mu, m),
                trusted: t.trusted,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConditionReport::new(per))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::quadric_g;
    use crate::linalg::sigma_min_estimate;
    use crate::point::{multiset_distance, ProjectivePoint};

    #[test]
    fn theorem_parameters() {
        let p = ProblemDescriptor::pevp(2, 2).unwrap();
        assert_eq!((p.m(), p.r(), p.s(), p.d_o()), (12, 2, 4, 1));
        assert_eq!(p.expected_mean_sq_condition(), 5.5);
        for n in 1..10 {
            assert_eq!(
                ProblemDescriptor::dense_poly(n)
                    .unwrap()
                    .expected_mean_sq_condition(),
                1.0
            );
        }
        assert_eq!(
            ProblemDescriptor::gevp(3)
                .unwrap()
                .expected_mean_sq_condition(),
            17.0
        );
        let lac = ProblemDescriptor::lacunary(7, &[0, 3, 7]).unwrap();
        assert!((lac.expected_mean_sq_condition() - 2.0 / 7.0).abs() < 1e-15);
        let q = ProblemDescriptor::sparse_qep(2).unwrap();
        assert_eq!(q.m(), 9);
        assert_eq!(q.expected_mean_sq_condition(), 4.0);
        assert_eq!(q.uncorrected_value(), Some(4.5));
        let c = ProblemDescriptor::quadric(2).unwrap();
        assert_eq!((c.m(), c.r(), c.s(), c.d_o()), (12, 2, 2, 2));
        assert_eq!(c.expected_mean_sq_condition(), 11.0);
        assert_eq!(c.uncorrected_value(), Some(12.0));
    }

    #[test]
    fn solution_counts() {
        assert_eq!(
            ProblemDescriptor::pevp(2, 3)
                .unwrap()
                .expected_solution_count(),
            6
        );
        assert_eq!(
            ProblemDescriptor::quadric(2)
                .unwrap()
                .expected_solution_count(),
            4
        );
        assert_eq!(
            ProblemDescriptor::dense_poly(5)
                .unwrap()
                .expected_solution_count(),
            5
        );
    }

    #[test]
    fn descriptor_validation() {
        assert!(ProblemDescriptor::lacunary(7, &[3, 7]).is_err());
        assert!(ProblemDescriptor::lacunary(7, &[0, 3]).is_err());
        assert!(ProblemDescriptor::pevp(0, 2).is_err());
        let empty = Mask::from_bools(vec![false; 4]).unwrap();
        assert!(ProblemDescriptor::masked_pevp(2, 1, vec![Mask::full(2), empty]).is_err());
        assert!(ProblemDescriptor::masked_pevp(2, 2, vec![Mask::full(2); 2]).is_err());
    }

    #[test]
    fn sampling_is_deterministic_and_masked() {
        let q = ProblemDescriptor::sparse_qep(2).unwrap();
        let a = sample_instance(&q, 5, 17);
        assert_eq!(a, sample_instance(&q, 5, 17));
        assert_ne!(a, sample_instance(&q, 5, 18));
        let InstanceData::Matrices(ms) = &a.data else {
            panic!()
        };
        // A_2 diagonal, A_0 upper triangular.
        assert_eq!(ms[2][(0, 1)], Complex64::new(0.0, 0.0));
        assert_eq!(ms[2][(1, 0)], Complex64::new(0.0, 0.0));
        assert_eq!(ms[0][(1, 0)], Complex64::new(0.0, 0.0));
        assert_ne!(ms[0][(0, 1)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn masked_nonzero_entries_rejected() {
        let q = ProblemDescriptor::sparse_qep(2).unwrap();
        let ms = vec![
            ComplexMatrix::identity(2),
            ComplexMatrix::identity(2),
            ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]),
        ];
        assert!(ProblemInstance::new(q, InstanceData::Matrices(ms)).is_err());
    }

    #[test]
    fn diagonal_pevp_solutions() {
        let desc = ProblemDescriptor::pevp(2, 2).unwrap();
        let inst = ProblemInstance::new(
            desc,
            InstanceData::Matrices(vec![
                ComplexMatrix::from_real_diag(&[1.0, 4.0]),
                ComplexMatrix::zeros(2, 2),
                ComplexMatrix::from_real_diag(&[-1.0, -1.0]),
            ]),
        )
        .unwrap();
        let out = solve_instance(&inst).unwrap();
        assert!(!out.count_mismatch);
        let got: Vec<_> = out.triples.iter().map(|t| t.z.clone()).collect();
        let want: Vec<_> = [[1.0, 1.0], [-1.0, 1.0], [2.0, 1.0], [-2.0, 1.0]]
            .iter()
            .map(|p| ProjectivePoint::from_real(p).unwrap())
            .collect();
        assert!(multiset_distance(&got, &want) < 1e-14);
    }

    #[test]
    fn scalar_conic_problem_by_elimination() {
        // α + β + γ = 0 on the conic: γ = -α-β gives α² + αβ + β² = 0,
        // so α/β is a primitive cube root of unity ω and the points are (ω, 1, ω²).
        let desc = ProblemDescriptor::quadric(1).unwrap();
        let one = ComplexMatrix::identity(1);
        let inst = ProblemInstance::new(
            desc,
            InstanceData::Matrices(vec![one.clone(), one.clone(), one]),
        )
        .unwrap();
        let out = solve_instance(&inst).unwrap();
        assert_eq!(out.triples.len(), 2);
        assert!(!out.count_mismatch);
        let w = Complex64::from_polar(1.0, 2.0 * PI / 3.0);
        let one = Complex64::new(1.0, 0.0);
        let want = vec![
            ProjectivePoint::new(&[w, one, w * w]).unwrap(),
            ProjectivePoint::new(&[w * w, one, w]).unwrap(),
        ];
        let got: Vec<_> = out.triples.iter().map(|t| t.z.clone()).collect();
        assert!(multiset_distance(&got, &want) < 1e-12);
    }

    #[test]
    fn random_conic_problem_residuals() {
        let desc = ProblemDescriptor::quadric(2).unwrap();
        let inst = sample_instance(&desc, 23, 0);
        let out = solve_instance(&inst).unwrap();
        assert_eq!(out.triples.len(), 4);
        let blocks = inst.blocks();
        for t in &out.triples {
            assert!(quadric_g(t.z.coords()).norm() <= 1e-10);
            let m = desc.weights().evaluate(&blocks, t.z.coords());
            assert!(sigma_min_estimate(&m) <= 1e-8 * inst.p_norm);
            assert!(t.trusted);
        }
    }

    #[test]
    fn gevp_blocks_follow_sign_convention() {
        let desc = ProblemDescriptor::gevp(2).unwrap();
        let inst = ProblemInstance::new(
            desc,
            InstanceData::Matrices(vec![
                ComplexMatrix::from_real_diag(&[1.0, 2.0]),
                ComplexMatrix::identity(2),
            ]),
        )
        .unwrap();
        let out = solve_instance(&inst).unwrap();
        let report = condition_report(&inst, &out).unwrap();
        let mut mus: Vec<f64> = report.per_eigenvalue.iter().map(|e| e.mu).collect();
        mus.sort_by(f64::total_cmp);
        assert!((mus[0] - 1.4f64.sqrt()).abs() < 1e-12);
        assert!((mus[1] - 3.5f64.sqrt()).abs() < 1e-12);
    }
}
