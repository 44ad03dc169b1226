//! JSON dump of a generator, read back by `dequantize`.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::densecore::ComplexMatrix;
use crate::error::{Error, Result};
use crate::fockspace::{build_space, FockSpace};
use crate::superspace::SuperOperator;
use crate::C64;

/// Operators are vectorized by stacking columns: entry `(i, j)` of an
/// `N x N` operator sits at index `j·N + i`.
pub const VECTORIZATION: &str = "column-stacking";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDump {
    #[serde(rename = "N")]
    pub n: usize,
    pub hbar: f64,
    pub mass: f64,
    pub omega: f64,
    pub vectorization: String,
    /// Row-major real parts of the `N² x N²` matrix.
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl GeneratorDump {
    pub fn from_super(s: &SuperOperator) -> Self {
        let sp = s.space();
        let flat = s.mat().to_row_major();
        Self {
            n: sp.dim(),
            hbar: sp.hbar(),
            mass: sp.mass(),
            omega: sp.omega(),
            vectorization: VECTORIZATION.into(),
            re: flat.iter().map(|z| z.re).collect(),
            im: flat.iter().map(|z| z.im).collect(),
        }
    }

    pub fn space(&self) -> Result<Arc<FockSpace>> {
        build_space(self.n, self.hbar, self.mass, self.omega)
    }

    pub fn to_super(&self) -> Result<SuperOperator> {
        if self.vectorization != VECTORIZATION {
            return Err(Error::config("vectorization", format!("expected `{VECTORIZATION}`, got `{}`", self.vectorization)));
        }
        let side = self.n * self.n;
        if self.re.len() != side * side || self.im.len() != side * side {
            return Err(Error::ShapeMismatch {
                expected: format!("{} entries", side * side),
                got: format!("{} real, {} imaginary", self.re.len(), self.im.len()),
            });
        }
        let data: Vec<C64> = self.re.iter().zip(&self.im).map(|(&r, &i)| C64::new(r, i)).collect();
        SuperOperator::new(&self.space()?, ComplexMatrix::from_row_major(side, side, &data)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string(self).expect("dump serializes");
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::config(format!("line {} column {}", e.line(), e.column()), e.to_string()))
    }
}
