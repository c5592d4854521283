//! Numerical tolerances shared by constructors, checks and tests.

/// Exact algebraic identities (unitarity, matrix entries).
pub const ALGEBRAIC: f64 = 1e-12;

/// Quantities accumulated over many floating-point operations (norms after
/// evolution, probability sums).
pub const ACCUMULATED: f64 = 1e-10;

/// Loose bound on externally supplied states and distributions.
pub const INPUT: f64 = 1e-6;
