//! Central tolerance constants.
//!
//! All validation thresholds live here so that type invariants, checks and
//! tests agree on the same numbers.

/// Relative Hermitian-symmetry defect allowed at construction:
/// ‖m − m*‖_op ≤ HERMITIAN_REL · ‖m‖_op.
pub const HERMITIAN_REL: f64 = 1e-12;

/// Eigenvalue floor for positive semidefiniteness. Eigenvalues in
/// [-PSD_EIG_FLOOR, 0] are treated as zero (eigensolver noise must not
/// fail valid density operators).
pub const PSD_EIG_FLOOR: f64 = 1e-10;

/// Allowed deviation of an unnormalized trace from 1 for density operators.
pub const TRACE_ONE: f64 = 1e-10;

/// Unitarity defect allowed at construction: ‖uu* − I‖_op.
pub const UNITARY: f64 = 1e-10;

/// Orthonormality defect for eigenvector / spectrum columns: ‖V*V − I‖_op.
pub const ORTHONORMAL: f64 = 1e-10;

/// Spectral reconstruction: ‖VΛV* − h‖_op ≤ SPECTRUM_RECON · (1 + ‖h‖_op).
pub const SPECTRUM_RECON: f64 = 1e-9;

/// Default relative tolerance for inequality reports; the effective
/// absolute tolerance is REPORT_REL · (1 + |rhs|).
pub const REPORT_REL: f64 = 1e-9;

/// Eigenvalues below this magnitude count as zero when ranking the
/// strictly positive spectrum (rationalization feasibility).
pub const RANK_EIG: f64 = 1e-12;
