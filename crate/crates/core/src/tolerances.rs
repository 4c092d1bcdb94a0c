//! Numerical thresholds used across the crate.
//!
//! Every tolerance that appears in a validation or a report is named here,
//! so outputs can state which threshold produced a verdict.

/// Allowed drift of |⟨ψ|ψ⟩ − 1| after a constructor or a unitary application.
pub const NORM_TOL: f64 = 1e-10;

/// ‖H − H†‖_F bound for operators tagged hermitian.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// ‖U†U − I‖_F bound for operators tagged unitary.
pub const UNITARITY_TOL: f64 = 1e-10;

/// ‖P² − P‖_F bound for operators tagged projector.
pub const PROJECTOR_TOL: f64 = 1e-10;

/// Off-diagonal magnitude (relative) below which a Jacobi sweep is converged.
pub const JACOBI_OFFDIAG_TOL: f64 = 1e-14;

/// Sweep cap for the Jacobi SVD/eigensolver.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Relative gap below which two singular values or eigenvalues count as equal.
pub const DEGENERACY_REL_GAP: f64 = 1e-8;

/// Default product-test threshold: normalized second singular value.
pub const PRODUCT_TOL: f64 = 1e-7;

/// Default angular resolution of the Bloch-sphere scan, in degrees.
pub const SCAN_GRID_DEG: f64 = 1.0;

/// Two unit vectors count as the same direction when 1 − |⟨u|v⟩| ≤ this.
pub const MATCH_FIDELITY_TOL: f64 = 1e-6;

/// Best residual beyond `NOT_FOUND_FACTOR × tol` means no decomposition exists;
/// residuals between `tol` and the factor are reported as inconclusive.
pub const NOT_FOUND_FACTOR: f64 = 100.0;

/// |r| below this counts as decohered in the demos.
pub const DECOHERED_ABS_R: f64 = 0.01;

/// Conditional vectors with squared norm below this are treated as empty
/// branches (vacuously product).
pub const CONDITIONAL_PROB_FLOOR: f64 = 1e-12;

/// Eigenvalues of a reduced density matrix above this count as a branch.
pub const BRANCH_RANK_CUTOFF: f64 = 1e-12;

/// Relative eigenvalue cutoff (squared-singular-value scale) when compressing
/// the conditional pencil; keeps lift-back error near 1e-13.
pub const PENCIL_RANK_CUTOFF: f64 = 1e-26;

/// Gram-matrix threshold for the family flags: orthonormality deviation,
/// linear-independence smallest singular value, colinearity margin.
pub const FAMILY_FLAG_TOL: f64 = 1e-8;

/// Hits within this many grid steps of each other join one scan cluster.
pub const CLUSTER_LINK_STEPS: f64 = 2.0;

/// A cluster whose angular spread exceeds this many grid steps is a curve,
/// not an isolated direction.
pub const CURVE_SPREAD_STEPS: f64 = 5.0;
