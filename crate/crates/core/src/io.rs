//! JSON file formats for states and density matrices.
//!
//! ```json
//! { "local_dims": [2, 2], "amplitudes": [[0.7071, 0.0], [0, 0], [0, 0], [0.7071, 0.0]] }
//! { "local_dims": [2], "rows": [[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]] }
//! ```
//!
//! Complex numbers are `[re, im]` pairs; amplitudes follow the party-0-most-significant order.

use std::fs;
use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{DensityMatrix, StateVector, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub local_dims: Vec<usize>,
    pub amplitudes: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityFile {
    pub local_dims: Vec<usize>,
    pub rows: Vec<Vec<[f64; 2]>>,
}

impl TryFrom<StateFile> for StateVector {
    type Error = Error;

    fn try_from(file: StateFile) -> Result<Self> {
        let amplitudes = file.amplitudes.iter().map(|&[re, im]| C64::new(re, im)).collect();
        StateVector::new(amplitudes, file.local_dims)
    }
}

impl From<StateVector> for StateFile {
    fn from(psi: StateVector) -> Self {
        StateFile {
            local_dims: psi.local_dims().to_vec(),
            amplitudes: psi.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
        }
    }
}

impl TryFrom<DensityFile> for DensityMatrix {
    type Error = Error;

    fn try_from(file: DensityFile) -> Result<Self> {
        let n = file.rows.len();
        if file.rows.iter().any(|r| r.len() != n) {
            return Err(Error::Format("density matrix rows must form a square array".into()));
        }
        let entries = DMatrix::from_fn(n, n, |i, j| {
            let [re, im] = file.rows[i][j];
            C64::new(re, im)
        });
        DensityMatrix::new(entries, file.local_dims)
    }
}

impl From<&DensityMatrix> for DensityFile {
    fn from(rho: &DensityMatrix) -> Self {
        let m = rho.entries();
        DensityFile {
            local_dims: rho.local_dims().to_vec(),
            rows: (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                .collect(),
        }
    }
}

pub fn state_from_json(text: &str) -> Result<StateVector> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    file.try_into()
}

pub fn density_from_json(text: &str) -> Result<DensityMatrix> {
    let file: DensityFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    file.try_into()
}

pub fn state_to_json(psi: &StateVector) -> String {
    serde_json::to_string_pretty(&StateFile::from(psi.clone())).expect("state serializes")
}

pub fn density_to_json(rho: &DensityMatrix) -> String {
    serde_json::to_string_pretty(&DensityFile::from(rho)).expect("density serializes")
}

/// Reads a state file.
pub fn parse_state(path: impl AsRef<Path>) -> Result<StateVector> {
    state_from_json(&fs::read_to_string(path)?)
}

pub fn parse_density(path: impl AsRef<Path>) -> Result<DensityMatrix> {
    density_from_json(&fs::read_to_string(path)?)
}

/// Reads either file kind: a state file becomes its projector.
pub fn parse_density_or_state(path: impl AsRef<Path>) -> Result<DensityMatrix> {
    let text = fs::read_to_string(path)?;
    match density_from_json(&text) {
        Ok(rho) => Ok(rho),
        Err(density_err) => match state_from_json(&text) {
            Ok(psi) => Ok(psi.projector()),
            Err(_) => Err(density_err),
        },
    }
}
