//! Mode entanglement of a single electron on 1D tight-binding lattices.
//!
//! Builds Hamiltonians for four lattice families (slowly varying
//! incommensurate potential, random dimer, long-range correlated
//! disorder, long-range hopping with diagonal disorder), diagonalizes
//! them with a dense symmetric eigensolver, and measures the average
//! pairwise mode concurrence of each eigenstate. Ensemble averaging,
//! parameter sweeps with transition detection, and mobility-edge
//! extraction sit on top; everything is seeded and bitwise reproducible.

pub mod concurrence;
pub mod eig;
pub mod ensemble;
pub mod error;
pub mod io;
pub mod models;
pub mod rng;
pub mod sweep;

pub use concurrence::{spectrum_concurrence, ConcurrenceReport, StateRecord};
pub use eig::{diagonalize, Spectrum};
pub use ensemble::{run_ensemble, BinnedCurve, BinningMode, EnsembleSpec, GlobalStats};
pub use error::{Error, Result};
pub use models::{build_hamiltonian, Boundary, Family, Hamiltonian, ModelKind, ModelParams};
pub use sweep::{
    detect_mobility_edges, detect_transition, sweep_parameter, SweepParameter, SweepResult,
    SweepSize, TransitionEstimate,
};
