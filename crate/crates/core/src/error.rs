use thiserror::Error;

use crate::symplectic::Role;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not symmetric: |g[{row}][{col}] - g[{col}][{row}]| = {defect:e}")]
    NotSymmetric { row: usize, col: usize, defect: f64 },

    #[error("matrix is singular (det = {det:e})")]
    Singular { det: f64 },

    #[error("block determinant is negative (det A = {det_a:e}, det B = {det_b:e})")]
    NegativeBlockDeterminant { det_a: f64, det_b: f64 },

    #[error("standard-form quadratic has complex roots (discriminant = {discriminant:e})")]
    ComplexRoot { discriminant: f64 },

    #[error("state is unphysical: {reason}")]
    Unphysical { reason: String },

    #[error("state is not entangled")]
    NotEntangled,

    #[error("transformation is not symplectic: block determinants ({det1}, {det2})")]
    NotSymplectic { det1: f64, det2: f64 },

    #[error("transformation is not local: off-diagonal blocks are nonzero")]
    NotLocal,

    #[error("division by zero in {what}")]
    DivisionByZero { what: &'static str },

    #[error("symmetrization angle out of domain: tan^2(theta) = {tan_sq_theta:e} (numerator {numerator:e}, denominator {denominator:e})")]
    InvalidAngle {
        tan_sq_theta: f64,
        numerator: f64,
        denominator: f64,
    },

    #[error("argument {value} outside the domain of {what}")]
    Domain { what: &'static str, value: f64 },

    #[error("standard form is not symmetric: n = {n}, m = {m}")]
    NotSymmetricForm { n: f64, m: f64 },

    #[error("radicand {radicand:e} outside the expected range (h(n,m) = {h_nm:e}, h(m,n) = {h_mn:e}, g = {g:e})")]
    NegativeRadicand {
        radicand: f64,
        h_nm: f64,
        h_mn: f64,
        g: f64,
    },

    #[error("expected a {expected:?}-role matrix, got {found:?}")]
    RoleMismatch { expected: Role, found: Role },

    #[error("rejection sampler exhausted: {accepted} accepted out of {draws} draws")]
    ExhaustedRejection { accepted: usize, draws: usize },
}
