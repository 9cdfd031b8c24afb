//! Exact collective-dephasing dynamics of small qubit registers and the
//! single-qubit gate fidelities of one-way (measurement-based) quantum
//! computation on a five-qubit linear cluster.
//!
//! All qubits couple through `σ_z` to one shared ohmic bosonic bath. The
//! reduced dynamics is then an elementwise map on the density matrix whose
//! factors depend only on the total `σ_z` eigenvalue of the row and column
//! basis states, so every quantity here is exact up to floating point.
//!
//! Module map:
//!
//! * [`tensor`]: state vectors, density matrices, projective measurement.
//! * [`bath`]: decoherence functions `Γ(t)` and `Θ(t)` plus quadrature oracles.
//! * [`channel`]: the dephasing map and its two-time propagator.
//! * [`states`]: chain, cluster and post-measurement states.
//! * [`fidelity`]: fidelity dynamics and closed-form reference expressions.
//! * [`mbqc`]: measurement bases, the gate catalog and gate runs.
//! * [`scheduler`]: extrema location and measurement-time optimization.
//! * [`reference`]: published reference values and the reproduction report.

pub mod bath;
pub mod channel;
mod error;
pub mod fidelity;
pub mod mbqc;
pub mod quadrature;
pub mod reference;
pub mod scheduler;
pub mod states;
pub mod tensor;

pub use error::{Error, Result};

pub use num_complex::Complex64 as C64;

/// Absolute tolerance used for algebraic identities on ≤ 32-dimensional objects.
pub const ALGEBRA_TOL: f64 = 1e-12;
