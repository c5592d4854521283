//! Discrete-time quantum walks on cycles, lines, tori and hypercubes, and a
//! lattice SIR epidemic whose infected agents move as quantum (or classical)
//! walkers.
//!
//! The crate is split into three layers:
//!
//! - [`qwalk`]: coin and shift operators, unitary evolution and position
//!   statistics of a single walk.
//! - [`epidemic`]: one realization of the lattice epidemic (movement,
//!   infection, branching, expiry) plus snapshot rendering.
//! - [`analysis`]: Monte-Carlo estimators over many realizations (R₀ tables,
//!   cluster growth, quantum/classical comparison).
//!
//! Randomness is always drawn from [`rng`] substreams so that results depend
//! only on the master seed, never on thread scheduling.

pub mod analysis;
pub mod epidemic;
mod error;
pub mod io;
pub mod qwalk;
pub mod rng;
pub mod sampling;
pub mod tol;
pub mod verify;

pub use error::{Error, Result};
pub use num_complex::Complex64;

pub use analysis::{
    cluster_growth, estimate_r0, naive_r0, r0_sweep, summarize_comparison, ClusterCurvePoint,
    ComparisonRow, R0Estimate, R0Table,
};
pub use epidemic::{
    run_realization, Boundary, EpidemicConfig, LatticeState, Policy, RealizationStats, ShotMode,
    SiteState,
};
pub use qwalk::{
    AmplitudeVector, CoinOperator, Evolution, Geometry, Permutation, ShiftOperator, WalkSpec,
};
