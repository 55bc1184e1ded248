//! Verifiable computation offloading on a simulated ledger.
//!
//! A consumer posts a task (a TSP instance) with an escrowed stake to a
//! broker contract on a simulated blockchain. A provider solves the task
//! off-chain, computes a witness for a circuit that re-checks the solution,
//! produces a succinct zero-knowledge proof, and submits solution plus proof.
//! The broker recomputes the binding hash, calls the verifier contract, and
//! stores and eventually pays for the first solution whose proof verifies.
//!
//! The crate is organized bottom-up:
//!
//! - [`algebra`]: prime fields, two curve groups, bilinear pairing.
//! - [`constraint`]: rank-1 constraint systems and the gadget library.
//! - [`snark`]: trusted setup, witness computation, proving, verifying.
//! - [`tsp`]: maps, tours, solvers, the verification circuit.
//! - [`ledger`]: simulated chain, broker and verifier contracts, gas.
//! - [`harness`]: provider/consumer flows, fault injection, benchmarks.
//!
//! Start with the runnable programs in `examples/`; `offload_end_to_end`
//! walks the whole protocol in one sitting.
//!
//! **Not production cryptography.** Arithmetic is variable-time, the trusted
//! setup is single-party, and test mode derives all randomness from seeds.

pub mod algebra;
pub mod constraint;
pub mod harness;
pub mod ledger;
pub mod snark;
pub mod tsp;
