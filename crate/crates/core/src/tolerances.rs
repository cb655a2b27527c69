//! Numerical thresholds shared across modules.
//!
//! A "zero" single-particle energy is always judged relative to the scale of
//! the coupling matrix, so the same parameter set gives the same zero-mode
//! count regardless of the overall energy unit.

/// Relative factor for zero detection: `ZERO_RELATIVE * (1 + ||A||_2)`.
pub const ZERO_RELATIVE: f64 = 1e-10;

/// Hermiticity of assembled matrices, absolute entrywise.
pub const HERMITIAN: f64 = 1e-12;

/// Agreement of two independently computed spectra, relative to `1 + max|eps|`.
pub const SPECTRUM_MATCH: f64 = 1e-10;

/// Clustering of many-body eigenvalues, relative to `1 + |E|`.
pub const DEGENERACY_CLUSTER: f64 = 1e-8;

/// Canonical anticommutation relations and operator commutators.
pub const OPERATOR_IDENTITY: f64 = 1e-12;

/// Expectation values taken from numerically diagonalized eigenstates.
pub const ORACLE_EXPECTATION: f64 = 1e-8;

/// Maximum number of lattice sites accepted by the many-body oracle.
pub const ORACLE_SITE_CAP: usize = 14;

/// Above this many sites, only the extremal (ground) eigenvalue is computed.
pub const DENSE_SITE_LIMIT: usize = 10;

pub fn zero_threshold(scale: f64) -> f64 {
    ZERO_RELATIVE * (1.0 + scale)
}
