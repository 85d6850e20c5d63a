//! Basis-state shift circuits for cyclic one-dimensional grids.
//!
//! Three constructions of the coin-controlled shift |k⟩ → |k±1 mod 2^m⟩
//! (canonical multi-controlled-X cascades, the Fourier-diagonalized shift,
//! and the parallel even/odd shift), lowering passes that bring them down to
//! CX + single-qubit gates, a dense statevector simulator used as the
//! correctness oracle, closed-form CX predictors, and a discrete-time
//! quantum walk driver.

pub mod analysis;
pub mod builders;
pub mod circuit;
pub mod cli;
pub mod error;
pub mod passes;
pub mod qasm;
pub mod sim;
pub mod walk;

pub use builders::{build_canonical, build_parallel, build_qft, build_shift, ShiftVariant};
pub use circuit::{Circuit, Control, Gate, GateCensus, GateKind, GateTag, Polarity, QubitId, RegisterLayout};
pub use error::{Error, Result};
pub use passes::{run_pipeline, PassPipeline, Stage};
pub use sim::{extract_permutation, run, unitary_equal, PermutationTable, StateVector};
