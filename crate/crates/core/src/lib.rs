//! Ergotropy and Clifford-restricted work extraction for N-qubit systems.
//!
//! States and Hamiltonians are expanded in the Pauli basis. Clifford
//! conjugation permutes Pauli strings up to sign, so the energy reachable on
//! a Clifford orbit only depends on how the Hamiltonian's terms are mapped
//! onto the state's Pauli coefficients.

pub mod bounds;
pub mod clifford;
pub mod ergotropy;
pub mod error;
pub mod experiments;
pub mod haar;
pub mod linalg;
pub mod models;
pub mod operator;
pub mod pauli;
pub mod spectrum;
pub mod state;

pub use error::{Error, Result};
