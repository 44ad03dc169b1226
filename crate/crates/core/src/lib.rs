//! Dynamical Weyl quantization on a truncated Fock space.
//!
//! Classical dynamical operators `L(q, p, ∂q, ∂p)` acting on phase-space
//! functions are mapped to superoperators acting on `N x N` operator
//! matrices. The crate is organized bottom-up:
//!
//! * [`densecore`]: dense complex matrices, `kron`, `expm`, `vec`, `lstsq`
//! * [`fockspace`]: `q̂`, `p̂`, Weyl operators, Weyl ordering, Weyl symbols
//! * [`superspace`]: left/right multiplication, `Q̂ᵏ`, `P̂ᵏ`, `V̂(a, b)`
//! * [`dynquant`]: quantization and dequantization of dynamical operators
//! * [`classical`]: the phase-space grid side used as an oracle
//! * [`sim`]: evolution engines, scenarios, algebra checks, configuration

pub mod classical;
pub mod densecore;
pub mod dynquant;
mod error;
pub mod fockspace;
pub mod sim;
pub mod superspace;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

pub use classical::{GridSymbol, PhaseGrid};
pub use densecore::ComplexMatrix;
pub use dynquant::{DynOperator, DynTerm, Form};
pub use fockspace::{FockSpace, Operator, PolynomialSymbol};
pub use superspace::SuperOperator;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);
