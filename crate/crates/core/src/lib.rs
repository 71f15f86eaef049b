//! Numerical laboratory for quantum alternating-operator schedules on
//! constrained combinatorial optimization problems.
//!
//! The crate models problems over bit strings, builds the associated
//! operators, validates mixer/phase-separator structure (non-negativity,
//! irreducibility, feasibility preservation), tracks the spectrum of the
//! linear interpolation between mixer and objective, integrates the
//! quasi-adiabatic evolution, and synthesizes explicit Trotterized
//! (β, γ) schedules whose output state converges into the optimal
//! solution subspace — with everything checked against independent
//! brute-force oracles at desk scale (N ≤ 12 qubits).

pub mod adiabatic;
pub mod doc;
pub mod error;
pub mod hamiltonians;
pub mod linalg;
pub mod oracles;
pub mod problems;
pub mod qaoa;
pub mod spectral;
pub mod suite;
pub mod tol;

pub use error::{Error, Result};
pub use tol::Tolerances;
