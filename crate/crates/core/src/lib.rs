//! Population-preserving quantum channels on pairs of path-superposed
//! particles.
//!
//! - [`linalg`]: dense complex matrices and a Jacobi Hermitian eigensolver.
//! - [`state`]: bipartite path-basis states and validity checks.
//! - [`channel`]: coefficient-matrix channels, Kraus operators, Choi matrices.
//! - [`separability`]: partial transpose, negativity, channel inseparability.
//! - [`gravity`]: interferometer phases under a Newtonian `1/r` coupling.
//! - [`quadrature`]: adaptive Simpson integration.

pub mod channel;
pub mod error;
pub mod gravity;
pub mod linalg;
pub mod quadrature;
pub mod random;
pub mod separability;
pub mod state;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64, DEFAULT_TOL};
