//! Proof system: trusted setup, witness computation, proving, verifying.
//!
//! The pipeline mirrors how a provider works a task: synthesize the circuit
//! once to get keys, compute a witness per solution, prove, and hand the
//! 256-byte proof to whoever holds the verifying key.

mod domain;
mod groth16;
mod qap;
mod serialize;

pub use domain::EvaluationDomain;
pub use groth16::{
    compute_witness, prove, rng_from_seed, setup, synthesize_system, verify, Proof, ProvingKey,
    VerifyingKey,
};
pub use qap::{r1cs_to_qap, QapInstance};
pub use serialize::PROOF_BYTES;

use crate::algebra::AlgebraError;
use crate::constraint::ConstraintError;

#[derive(Debug, thiserror::Error, Clone, PartialEq, Eq)]
pub enum SnarkError {
    #[error("constraint system has no constraints")]
    EmptySystem,
    #[error("system needs {0} domain points, beyond the field's 2-adic range")]
    SystemTooLarge(usize),
    #[error("key does not match this constraint system")]
    KeyMismatch,
    #[error("assignment does not satisfy the system; refusing to prove")]
    UnsatisfiedAssignment,
    #[error("assignment has {got} entries, system has {expected}")]
    AssignmentLength { expected: usize, got: usize },
    #[error("expected {expected} public inputs, got {got}")]
    PublicInputArity { expected: usize, got: usize },
    #[error("constraint error: {0}")]
    Constraint(#[from] ConstraintError),
    #[error("algebra error: {0}")]
    Algebra(#[from] AlgebraError),
    #[error("encoding error: {0}")]
    Encoding(String),
}
