//! Numerical tolerances shared across the crate.
//!
//! All kernels are closed forms on 4x4 matrices, so these sit far above
//! accumulated f64 rounding.

/// Minimum eigenvalue of a covariance matrix must exceed this to count as
/// strictly positive definite.
pub const POSITIVE_DEFINITE: f64 = 1e-10;

/// Slack allowed on the smallest eigenvalue of `g - J^T g^-1 J`, scaled by
/// `max|g| max|g^-1|`.
pub const UNCERTAINTY_PSD: f64 = 1e-9;

/// Relative agreement expected of invariants after a round trip.
pub const INVARIANT_RELATIVE: f64 = 1e-9;

/// Determinant magnitude below which a 4x4 matrix is treated as singular.
pub const SINGULAR_DET: f64 = 1e-14;

/// Allowed deviation of a 2x2 block determinant from 1 for a local symplectic.
pub const SYMPLECTIC_DET: f64 = 1e-9;

/// Relative slack on the standard-form discriminant before it counts as negative.
pub const DISCRIMINANT_RELATIVE: f64 = 1e-9;

/// Discriminant (relative to the squared root sum) below which the two
/// standard-form roots are treated as equal.
pub const EQUAL_ROOTS: f64 = 1e-14;

/// `|n - m|` below which a standard form counts as symmetric (relative to `n`).
pub const SYMMETRIC_MODES: f64 = 1e-12;

/// Slack on the `n, m >= 1` uncertainty bound for single-mode blocks.
pub const SINGLE_MODE_BOUND: f64 = 1e-9;

/// Slack on `h(n,m) h(m,n) >= 0` in the closed-form first bound.
pub const RADICAND_SIGN: f64 = 1e-12;

/// Symmetry defect accepted when reading a matrix from text before averaging.
pub const INPUT_SYMMETRY: f64 = 1e-9;

/// `|g| / n^3` below which a symmetric state's first bound is taken from the
/// limit `(n - |k_x|)(n - |k_p|)`; the general quotient loses ~eps n^3 / |g|.
pub const LB1_SYMMETRIC_LIMIT: f64 = 1e-4;
