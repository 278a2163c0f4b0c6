//! JSON gate files.
//!
//! Two shapes are accepted:
//!
//! ```text
//! { "family": "weyl", "params": [0.7, 1.5707963267948966, 1.5707963267948966] }
//! { "matrix": [[[re, im], x4], x4] }
//! ```
//!
//! Matrices are row-major in the `|00⟩,|01⟩,|10⟩,|11⟩` basis.

use std::path::Path;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{controlled_rotation, macroscopic_family, random_gate, squeezing_gate, weyl_gate, Gate};
use crate::densemat::CMatrix;
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum GateFile {
    Family { family: String, params: Vec<f64> },
    Matrix { matrix: Vec<Vec<[f64; 2]>> },
}

impl GateFile {
    pub fn from_gate<T: Real>(g: &Gate<T>) -> Self {
        let m = g.matrix();
        GateFile::Matrix {
            matrix: (0..4)
                .map(|i| {
                    (0..4)
                        .map(|j| [m[(i, j)].re.to_f64_lossy(), m[(i, j)].im.to_f64_lossy()])
                        .collect()
                })
                .collect(),
        }
    }

    pub fn build<T: Real>(&self, tol: T) -> Result<Gate<T>> {
        match self {
            GateFile::Family { family, params } => gate_from_family(family, params),
            GateFile::Matrix { matrix } => {
                if matrix.len() != 4 || matrix.iter().any(|r| r.len() != 4) {
                    return Err(Error::GateFile("matrix must be 4x4".into()));
                }
                let data = matrix
                    .iter()
                    .flatten()
                    .map(|&[re, im]| Complex::new(T::lit(re), T::lit(im)))
                    .collect();
                Gate::from_matrix(CMatrix::new(4, 4, data)?, tol)
            }
        }
    }
}

/// Builds a gate from a family name and its numeric parameters.
///
/// | family                | params                 |
/// |-----------------------|------------------------|
/// | `identity`            | none                   |
/// | `weyl`                | α, β, γ                |
/// | `controlled_rotation` | a                      |
/// | `squeezing`           | χt                     |
/// | `macroscopic_family`  | p, θ, θ′, seed         |
/// | `random`              | seed                   |
pub fn gate_from_family<T: Real>(family: &str, params: &[f64]) -> Result<Gate<T>> {
    let want = |n: usize| -> Result<()> {
        if params.len() == n {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "gate family `{family}` takes {n} parameter(s), got {}",
                params.len()
            )))
        }
    };
    let seed = |x: f64| -> Result<u64> {
        if x >= 0.0 && x.fract() == 0.0 && x < u64::MAX as f64 {
            Ok(x as u64)
        } else {
            Err(Error::InvalidInput(format!(
                "seed must be a non-negative integer, got {x}"
            )))
        }
    };
    let p = |i: usize| T::lit(params[i]);
    match family {
        "identity" => {
            want(0)?;
            Ok(Gate::identity())
        }
        "weyl" => {
            want(3)?;
            Ok(weyl_gate(p(0), p(1), p(2)))
        }
        "controlled_rotation" => {
            want(1)?;
            Ok(controlled_rotation(p(0)))
        }
        "squeezing" => {
            want(1)?;
            Ok(squeezing_gate(p(0)))
        }
        "macroscopic_family" => {
            want(4)?;
            macroscopic_family(p(0), p(1), p(2), seed(params[3])?)
        }
        "random" => {
            want(1)?;
            Ok(random_gate(seed(params[0])?))
        }
        other => Err(Error::InvalidInput(format!("unknown gate family `{other}`"))),
    }
}

pub fn parse_gate_json<T: Real>(text: &str, tol: T) -> Result<Gate<T>> {
    let spec: GateFile = serde_json::from_str(text).map_err(|e| Error::GateFile(e.to_string()))?;
    spec.build(tol)
}

pub fn load_gate_file<T: Real>(path: impl AsRef<Path>, tol: T) -> Result<Gate<T>> {
    let text = std::fs::read_to_string(path.as_ref())?;
    parse_gate_json(&text, tol)
}
