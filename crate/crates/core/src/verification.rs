//! Seeded cross-checks between the condition-number formulas, and solver
//! certification runs.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::condition::{
    mu_fd_oracle, mu_generic, mu_gevp_closed, mu_pevp_closed, mu_scalar_closed,
};
use crate::error::{Error, Result};
use crate::matpoly::MatrixPolynomial;
use crate::problems::{sample_instance, solve_instance, InstanceData, ProblemDescriptor};

/// Pairs of condition-number evaluations that must agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Comparison {
    /// Structured engine with full masks vs the PEVP closed form.
    GenericVsPevp,
    /// PEVP closed form at degree 1 vs the GEVP closed form.
    PevpVsGevp,
    /// PEVP closed form at `n = 1` vs the scalar root formula.
    PevpVsScalar,
    /// Structured engine vs finite differences, over all families.
    GenericVsOracle,
}

impl Comparison {
    pub const ALL: [Comparison; 4] = [
        Comparison::GenericVsPevp,
        Comparison::PevpVsGevp,
        Comparison::PevpVsScalar,
        Comparison::GenericVsOracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::GenericVsPevp => "generic-vs-pevp",
            Self::PevpVsGevp => "pevp-vs-gevp",
            Self::PevpVsScalar => "pevp-vs-scalar",
            Self::GenericVsOracle => "generic-vs-oracle",
        }
    }

    /// Relative agreement required.
    pub fn tolerance(self) -> f64 {
        match self {
            Self::GenericVsPevp | Self::PevpVsScalar => 1e-10,
            Self::PevpVsGevp => 1e-12,
            Self::GenericVsOracle => 1e-4,
        }
    }

    /// Problem used for instance `index`.
    pub fn descriptor(self, index: u64) -> ProblemDescriptor {
        let i = index as usize;
        match self {
            Self::GenericVsPevp => ProblemDescriptor::pevp(1 + i % 3, 1 + (i / 3) % 3),
            Self::PevpVsGevp => ProblemDescriptor::gevp(1 + i % 4),
            Self::PevpVsScalar => ProblemDescriptor::dense_poly(1 + i % 8),
            Self::GenericVsOracle => match i % 6 {
                0 => ProblemDescriptor::pevp(2, 2),
                1 => ProblemDescriptor::gevp(3),
                2 => ProblemDescriptor::dense_poly(5),
                3 => ProblemDescriptor::lacunary(7, &[0, 3, 7]),
                4 => ProblemDescriptor::sparse_qep(2),
                _ => ProblemDescriptor::quadric(2),
            },
        }
        .expect("valid sizes")
    }
}

/// Worst disagreement over the eigenvalues of one instance.
#[derive(Clone, Debug)]
pub struct CoherenceCase {
    pub family: &'static str,
    pub index: u64,
    pub lhs: f64,
    pub rhs: f64,
    pub rel_diff: f64,
}

fn rel_diff(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// Evaluates `cmp` on `instances` seeded instances.
pub fn run_comparison(cmp: Comparison, instances: usize, seed: u64) -> Result<Vec<CoherenceCase>> {
    (0..instances as u64)
        .into_par_iter()
        .map(|i| compare_instance(cmp, seed, i))
        .collect()
}

fn compare_instance(cmp: Comparison, seed: u64, index: u64) -> Result<CoherenceCase> {
    let desc = cmp.descriptor(index);
    let inst = sample_instance(&desc, seed, index);
    let outcome = solve_instance(&inst)?;
    let blocks = inst.blocks();
    let weights = desc.weights();
    let o = desc.output_variety();
    let mut worst = CoherenceCase {
        family: desc.name(),
        index,
        lhs: 0.0,
        rhs: 0.0,
        rel_diff: 0.0,
    };
    for t in &outcome.triples {
        let (lhs, rhs) = match cmp {
            Comparison::GenericVsPevp => {
                let p = inst.matrix_polynomial().expect("line family");
                (
                    mu_generic(&weights, &blocks, o, t, inst.p_norm)?,
                    mu_pevp_closed(&p, t)?,
                )
            }
            Comparison::PevpVsGevp => {
                let InstanceData::Matrices(ms) = &inst.data else {
                    unreachable!()
                };
                let p = inst.matrix_polynomial().expect("line family");
                (mu_pevp_closed(&p, t)?, mu_gevp_closed(&ms[0], &ms[1], t)?)
            }
            Comparison::PevpVsScalar => {
                let InstanceData::Coefficients(a) = &inst.data else {
                    unreachable!()
                };
                let p = MatrixPolynomial::scalar(a)?;
                let z =
                    t.z.affine()
                        .ok_or_else(|| Error::DegenerateInstance("root at infinity".into()))?;
                (mu_pevp_closed(&p, t)?, mu_scalar_closed(a, z))
            }
            Comparison::GenericVsOracle => (
                mu_generic(&weights, &blocks, o, t, inst.p_norm)?,
                mu_fd_oracle(&weights, &blocks, o, t, inst.p_norm)?,
            ),
        };
        let r = rel_diff(lhs, rhs);
        if !(r <= worst.rel_diff) {
            worst.lhs = lhs;
            worst.rhs = rhs;
            worst.rel_diff = r;
        }
    }
    Ok(worst)
}

/// Families and sizes used by the solver certification.
pub fn certification_descriptor(family: &str, index: u64) -> Result<ProblemDescriptor> {
    let i = index as usize;
    let n = 1 + i % 4;
    let d = 1 + (i / 4) % 3;
    match family {
        "dense" => ProblemDescriptor::dense_poly(1 + i % 8),
        "lacunary" => {
            if i % 2 == 0 {
                ProblemDescriptor::lacunary(7, &[0, 3, 7])
            } else {
                ProblemDescriptor::lacunary(5, &[0, 2, 5])
            }
        }
        "gevp" => ProblemDescriptor::gevp(n),
        "pevp" => ProblemDescriptor::pevp(n, d),
        "masked" => ProblemDescriptor::sparse_qep(n),
        "quadric" => ProblemDescriptor::quadric(n),
        other => Err(Error::InvalidInput(format!("unknown family {other}"))),
    }
}

pub const CERTIFIED_FAMILIES: [&str; 6] =
    ["dense", "lacunary", "gevp", "pevp", "masked", "quadric"];

/// Multipliers for the scale-invariance check.
pub fn scale_factors() -> [Complex64; 3] {
    [
        Complex64::new(2.0, 0.0),
        Complex64::new(0.0, 3.0),
        Complex64::new(1e-3, 0.0),
    ]
}

#[derive(Clone, Debug, Default)]
pub struct CertificationReport {
    pub instances: usize,
    /// Instances with exactly `s d_O` distinct solutions.
    pub count_ok: usize,
    /// Largest relative residual over all null vectors.
    pub max_residual: f64,
    pub untrusted: usize,
    /// Largest relative change of `μ` under `p -> t p` at the same solution.
    pub max_scale_change: f64,
}

impl CertificationReport {
    pub fn passed(&self, residual_tol: f64, scale_tol: f64) -> bool {
        self.count_ok == self.instances
            && self.untrusted == 0
            && self.max_residual <= residual_tol
            && self.max_scale_change <= scale_tol
    }
}

/// Solves `instances` seeded instances of `family` and collects solution
/// counts, residuals and the scale invariance of `μ`.
pub fn certify_family(family: &str, instances: usize, seed: u64) -> Result<CertificationReport> {
    let per: Vec<CertificationReport> = (0..instances as u64)
        .into_par_iter()
        .map(|i| certify_instance(family, seed, i))
        .collect::<Result<_>>()?;
    Ok(per
        .into_iter()
        .fold(CertificationReport::default(), |acc, r| {
            CertificationReport {
                instances: acc.instances + r.instances,
                count_ok: acc.count_ok + r.count_ok,
                max_residual: acc.max_residual.max(r.max_residual),
                untrusted: acc.untrusted + r.untrusted,
                max_scale_change: acc.max_scale_change.max(r.max_scale_change),
            }
        }))
}

fn certify_instance(family: &str, seed: u64, index: u64) -> Result<CertificationReport> {
    let desc = certification_descriptor(family, index)?;
    let inst = sample_instance(&desc, seed, index);
    let out = solve_instance(&inst)?;
    let weights = desc.weights();
    let o = desc.output_variety();
    let blocks = inst.blocks();
    let mut report = CertificationReport {
        instances: 1,
        count_ok: usize::from(!out.count_mismatch),
        ..Default::default()
    };
    for t in &out.triples {
        report.max_residual = report
            .max_residual
            .max(t.residual_right)
            .max(t.residual_left);
        if !t.trusted {
            report.untrusted += 1;
            continue;
        }
        let mu = mu_generic(&weights, &blocks, o, t, inst.p_norm)?;
        for s in scale_factors() {
            let scaled = inst.scaled(s);
            let mu_s = mu_generic(&weights, &scaled.blocks(), o, t, scaled.p_norm)?;
            report.max_scale_change = report.max_scale_change.max(rel_diff(mu, mu_s));
        }
    }
    Ok(report)
}
