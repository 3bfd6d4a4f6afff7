//! JSON problem files.
//!
//! ```json
//! { "family": "gevp", "n": 2,
//!   "matrices": [ [[[1,0],[0,0]], [[0,0],[2,0]]],
//!                 [[[1,0],[0,0]], [[0,0],[1,0]]] ] }
//! ```
//!
//! Complex numbers are `[re, im]` pairs and matrices are lists of rows.
//! Scalar families use `"coefficients"` (`a_k` multiplies `X^k Y^{N-k}`).
//! Without explicit data the instance is drawn from `"seed"`.

use pevcond::condition::{Mask, MaskPattern};
use pevcond::linalg::{Complex64, ComplexMatrix};
use pevcond::problems::{sample_instance, InstanceData, ProblemDescriptor, ProblemInstance};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub indices: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub masks: Option<Vec<MaskSpec>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrices: Option<Vec<Vec<Vec<[f64; 2]>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// A mask given by name (`full`, `diag`, `upper`, `lower`) or as a 0/1 matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MaskSpec {
    Pattern(String),
    Matrix(Vec<Vec<u8>>),
}

impl MaskSpec {
    pub fn to_mask(&self, n: usize) -> Result<Mask, String> {
        match self {
            MaskSpec::Pattern(name) => MaskPattern::parse(name)
                .map(|p| Mask::from_pattern(p, n))
                .ok_or_else(|| format!("unknown mask pattern '{name}'")),
            MaskSpec::Matrix(rows) => {
                if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                    return Err(format!("mask matrix must be {n}x{n}"));
                }
                let bools = rows
                    .iter()
                    .flatten()
                    .map(|&v| match v {
                        0 => Ok(false),
                        1 => Ok(true),
                        other => Err(format!("mask entries must be 0 or 1, got {other}")),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Mask::from_bools(bools).map_err(|e| e.to_string())
            }
        }
    }
}

/// Descriptor from family name and size parameters, shared by problem files
/// and command-line flags.
pub fn build_descriptor(
    family: &str,
    n: Option<usize>,
    d: Option<usize>,
    degree: Option<usize>,
    indices: Option<&[usize]>,
    masks: Option<&[MaskSpec]>,
) -> Result<ProblemDescriptor, String> {
    let need =
        |v: Option<usize>, flag: &str| v.ok_or_else(|| format!("family '{family}' needs {flag}"));
    let desc = match family.to_ascii_lowercase().as_str() {
        "dense" | "dense_poly" => ProblemDescriptor::dense_poly(need(degree, "N")?),
        "lacunary" => {
            let idx = indices.ok_or_else(|| "family 'lacunary' needs indices".to_string())?;
            ProblemDescriptor::lacunary(need(degree, "N")?, idx)
        }
        "gevp" => ProblemDescriptor::gevp(need(n, "n")?),
        "pevp" => ProblemDescriptor::pevp(need(n, "n")?, need(d, "d")?),
        "masked" | "sparse_qep" => {
            let n = need(n, "n")?;
            match masks {
                None => ProblemDescriptor::sparse_qep(n),
                Some(specs) => {
                    let ms = specs
                        .iter()
                        .map(|s| s.to_mask(n))
                        .collect::<Result<Vec<_>, _>>()?;
                    let d = d.unwrap_or(ms.len().saturating_sub(1));
                    ProblemDescriptor::masked_pevp(n, d, ms)
                }
            }
        }
        "quadric" => ProblemDescriptor::quadric(need(n, "n")?),
        other => return Err(format!("unknown family '{other}'")),
    };
    desc.map_err(|e| e.to_string())
}

fn to_pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn from_pair(p: [f64; 2]) -> Complex64 {
    Complex64::new(p[0], p[1])
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn descriptor(&self) -> Result<ProblemDescriptor, String> {
        build_descriptor(
            &self.family,
            self.n,
            self.d,
            self.degree,
            self.indices.as_deref(),
            self.masks.as_deref(),
        )
    }

    /// The explicit instance, or a sampled one when only a seed is given.
    pub fn instance(&self) -> Result<ProblemInstance, String> {
        let desc = self.descriptor()?;
        let data = match (&self.coefficients, &self.matrices) {
            (Some(_), Some(_)) => {
                return Err("give either coefficients or matrices, not both".into())
            }
            (Some(c), None) => {
                InstanceData::Coefficients(c.iter().copied().map(from_pair).collect())
            }
            (None, Some(ms)) => InstanceData::Matrices(
                ms.iter()
                    .map(|rows| {
                        let r = rows.len();
                        let c = rows.first().map_or(0, Vec::len);
                        if rows.iter().any(|row| row.len() != c) {
                            return Err("ragged matrix".to_string());
                        }
                        let data = rows.iter().flatten().copied().map(from_pair).collect();
                        ComplexMatrix::from_vec(r, c, data).map_err(|e| e.to_string())
                    })
                    .collect::<Result<_, _>>()?,
            ),
            (None, None) => {
                let seed = self.seed.ok_or("no coefficient data and no seed")?;
                return Ok(sample_instance(&desc, seed, 0));
            }
        };
        ProblemInstance::new(desc, data).map_err(|e| e.to_string())
    }

    /// File carrying the explicit data of `inst`.
    pub fn from_instance(inst: &ProblemInstance) -> Self {
        let desc = &inst.descriptor;
        let mut file = ProblemFile {
            family: desc.name().to_string(),
            n: None,
            d: None,
            degree: None,
            indices: None,
            masks: None,
            coefficients: None,
            matrices: None,
            seed: None,
        };
        match desc {
            ProblemDescriptor::DensePoly { degree } => file.degree = Some(*degree),
            ProblemDescriptor::Lacunary { degree, indices } => {
                file.degree = Some(*degree);
                file.indices = Some(indices.clone());
            }
            ProblemDescriptor::Gevp { n } | ProblemDescriptor::Quadric { n } => file.n = Some(*n),
            ProblemDescriptor::Pevp { n, d } => {
                file.n = Some(*n);
                file.d = Some(*d);
            }
            ProblemDescriptor::MaskedPevp { n, d, masks } => {
                file.n = Some(*n);
                file.d = Some(*d);
                file.masks = Some(
                    masks
                        .iter()
                        .map(|m| {
                            MaskSpec::Matrix(
                                m.as_bools()
                                    .chunks(*n)
                                    .map(|r| r.iter().map(|&b| u8::from(b)).collect())
                                    .collect(),
                            )
                        })
                        .collect(),
                );
            }
        }
        match &inst.data {
            InstanceData::Coefficients(a) => {
                file.coefficients = Some(a.iter().copied().map(to_pair).collect())
            }
            InstanceData::Matrices(ms) => {
                file.matrices = Some(
                    ms.iter()
                        .map(|m| {
                            (0..m.rows())
                                .map(|i| m.row(i).iter().copied().map(to_pair).collect())
                                .collect()
                        })
                        .collect(),
                )
            }
        }
        file
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        for desc in [
            ProblemDescriptor::sparse_qep(3).unwrap(),
            ProblemDescriptor::quadric(2).unwrap(),
            ProblemDescriptor::lacunary(7, &[0, 3, 7]).unwrap(),
            ProblemDescriptor::gevp(2).unwrap(),
        ] {
            let inst = sample_instance(&desc, 99, 3);
            let text = ProblemFile::from_instance(&inst).to_json();
            let back = ProblemFile::parse(&text).unwrap().instance().unwrap();
            assert_eq!(back, inst);
        }
    }

    #[test]
    fn named_masks() {
        let f = ProblemFile::parse(
            r#"{"family":"masked","n":2,"masks":["upper","full","diag"],"seed":1}"#,
        )
        .unwrap();
        assert_eq!(
            f.descriptor().unwrap(),
            ProblemDescriptor::sparse_qep(2).unwrap()
        );
        let bad =
            ProblemFile::parse(r#"{"family":"masked","n":2,"masks":["weird","full"],"seed":1}"#)
                .unwrap();
        assert!(bad.descriptor().is_err());
    }

    #[test]
    fn shape_errors() {
        let f = ProblemFile::parse(r#"{"family":"gevp","n":2,"matrices":[[[[1,0]]],[[[1,0]]]]}"#)
            .unwrap();
        assert!(f.instance().is_err());
        assert!(ProblemFile::parse(r#"{"family":"gevp","n":2,"bogus":1}"#).is_err());
        let none = ProblemFile::parse(r#"{"family":"gevp","n":2}"#).unwrap();
        assert!(none.instance().is_err());
    }
}
