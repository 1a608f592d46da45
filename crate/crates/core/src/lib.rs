//! Lower bounds on the entanglement of formation of two-mode Gaussian states.
//!
//! A state is given by its 4x4 covariance matrix over `(X1, P1, X2, P2)`.
//! [`symplectic`] validates it and reduces it to the `(n, m, k_x, k_p)`
//! standard form, [`bounds`] evaluates the two closed-form lower bounds, and
//! [`symmetrization`] provides the explicit LOCC symmetrization route to the
//! first bound. [`testkit`] holds the seeded random ensembles and Monte-Carlo
//! checks used by the test suite and the `check` command.

pub mod bounds;
pub mod error;
pub mod matrix;
pub mod symmetrization;
pub mod symplectic;
pub mod testkit;
pub mod tol;

pub use bounds::{
    bound_report, bound_report_from_cm, candidate_f1, candidate_f2, eof_symmetric, epr_delta, f_of_delta, lb1, lb2,
    optimal_local_squeezing, squeezed_state_entropy, BoundReport, SqueezedStateParams,
};
pub use error::{Error, Result};
pub use symmetrization::{lb1_via_invariant_chain, lb1_via_pipeline, symmetrize, SymmetrizationResult};
pub use symplectic::{
    apply_local_symplectic, classify, cm_from_standard_form, cm_from_wigner, invariants, relate_invariants,
    standard_form, validate_cm, wigner_from_cm, CovarianceMatrix, Inequality, PhysicalityReport, Role, StandardForm,
    StateClass, StateTag, SymplecticInvariants,
};

/// Parameters of the six example states and their reference bounds
/// `(n, m, k_x, k_p, lb1, lb2)`.
pub const TABLE_I: [(f64, f64, f64, f64, f64, f64); 6] = [
    (1.5, 2.0, 1.2, -1.0, 0.14635, 0.28919),
    (1.5, 2.0, 1.0, -1.0, 0.08687, 0.14672),
    (2.0, 3.0, 1.8, -1.2, 0.02448, 0.00681),
    (1.7, 2.6, 1.3, -0.9, 0.00549, 0.0),
    (2.0, 3.0, 1.7, -1.2, 0.00725, 0.00142),
    (2.0, 2.5, 1.3, -1.2, 0.00173, 0.00001),
];
