//! LOCC symmetrization of a two-mode Gaussian state at the level of its
//! Wigner covariance matrix, and the two independent routes from it to the
//! first lower bound.
//!
//! Starting from a Wigner standard form `(N, M, K_x, K_p)` with `N > M`, a
//! local measurement maps the blocks to
//!
//! ```text
//! A~ = diag((N c^2 + (NM - K_x^2) s^2) / d, (N c^2 + NM s^2) / d)
//! B~ = diag(M / d, s^2 + M c^2)
//! C~ = diag(K_x c / d, K_p c)
//! ```
//!
//! with `c = cos(theta)`, `s = sin(theta)`, `d = c^2 + M s^2` and
//! `tan^2(theta) = (N^2 - M^2) / (M - N(NM - K_x^2))`, which makes
//! `det A~ = det B~`. Only `cos^2`, `sin^2` and `cos = +sqrt(cos^2)` are used;
//! flipping the sign of `cos` is a local rotation by pi and leaves every
//! invariant unchanged.

use nalgebra::Matrix2;
use serde::Serialize;

use crate::bounds::f_of_delta;
use crate::error::{Error, Result};
use crate::matrix;
use crate::symplectic::{self, CovarianceMatrix, Role, StandardForm, SymplecticInvariants};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetrizationResult {
    /// Wigner-role matrix with equal diagonal block determinants.
    pub symmetric_wigner_cm: CovarianceMatrix,
    pub tan_sq_theta: f64,
    pub input: StandardForm,
}

/// Symmetrizes a Wigner-role standard form.
///
/// The canonical constructor already orders the modes so that `N >= M`; an
/// input with `N = M` is returned unchanged with `tan^2(theta) = 0`.
pub fn symmetrize(wigner_sf: &StandardForm) -> Result<SymmetrizationResult> {
    if wigner_sf.role() != Role::Wigner {
        return Err(Error::RoleMismatch {
            expected: Role::Wigner,
            found: wigner_sf.role(),
        });
    }
    let wigner_cm = symplectic::cm_from_standard_form(wigner_sf);
    symplectic::ensure_physical(&symplectic::cm_from_wigner(&wigner_cm)?)?;

    if wigner_sf.is_symmetric() {
        return Ok(SymmetrizationResult {
            symmetric_wigner_cm: wigner_cm,
            tan_sq_theta: 0.0,
            input: *wigner_sf,
        });
    }

    let (symmetric_wigner_cm, tan_sq_theta) = symmetrized_blocks(wigner_sf)?;
    Ok(SymmetrizationResult {
        symmetric_wigner_cm,
        tan_sq_theta,
        input: *wigner_sf,
    })
}

/// The tilded blocks and `tan^2(theta)`, without any physicality check.
fn symmetrized_blocks(wigner_sf: &StandardForm) -> Result<(CovarianceMatrix, f64)> {
    let (big_n, big_m, kx, kp) = wigner_sf.as_tuple();
    let nm = big_n * big_m;
    let numerator = big_n * big_n - big_m * big_m;
    let denominator = big_m - big_n * (nm - kx * kx);
    let tan_sq_theta = numerator / denominator;
    if !tan_sq_theta.is_finite() || tan_sq_theta < 0.0 {
        return Err(Error::InvalidAngle {
            tan_sq_theta,
            numerator,
            denominator,
        });
    }

    let cos_sq = 1.0 / (1.0 + tan_sq_theta);
    let sin_sq = tan_sq_theta * cos_sq;
    let cos = cos_sq.sqrt();
    let d = cos_sq + big_m * sin_sq;

    let a = Matrix2::new(
        (big_n * cos_sq + (nm - kx * kx) * sin_sq) / d,
        0.0,
        0.0,
        (big_n * cos_sq + nm * sin_sq) / d,
    );
    let b = Matrix2::new(big_m / d, 0.0, 0.0, sin_sq + big_m * cos_sq);
    let c = Matrix2::new(kx * cos / d, 0.0, 0.0, kp * cos);
    let cm = CovarianceMatrix::with_role(matrix::from_blocks(&a, &c, &b), Role::Wigner)?;
    Ok((cm, tan_sq_theta))
}

/// Symmetric-state EoF from the invariants of a symmetric Wigner matrix:
/// `f(sqrt((W1 - W3 - sqrt(W4 - 2 W1 W3)) / W5))` with `W1 = det A_W`.
pub fn eof_from_symmetric_wigner(w: &SymplecticInvariants) -> Result<f64> {
    let w1 = w.i1 * w.i1;
    let inner = w.i4 - 2.0 * w1 * w.i3;
    let radicand = (w1 - w.i3 - inner.max(0.0).sqrt()) / w.i5;
    if radicand.is_nan() || radicand <= 0.0 {
        return Err(Error::Domain {
            what: "symmetric EoF radicand",
            value: radicand,
        });
    }
    f_of_delta(radicand.sqrt())
}

/// Every intermediate of the symmetrize-then-evaluate route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineTrace {
    pub state: StandardForm,
    pub wigner: StandardForm,
    pub symmetrization: SymmetrizationResult,
    pub symmetric_invariants: SymplecticInvariants,
    pub value: f64,
}

/// First lower bound by the explicit chain
/// `g -> g_W -> standard form -> symmetrize -> invariants -> f`.
pub fn lb1_via_pipeline(gamma: &CovarianceMatrix) -> Result<f64> {
    pipeline_trace(gamma).map(|t| t.value)
}

pub fn pipeline_trace(gamma: &CovarianceMatrix) -> Result<PipelineTrace> {
    if gamma.role() != Role::State {
        return Err(Error::RoleMismatch {
            expected: Role::State,
            found: gamma.role(),
        });
    }
    symplectic::ensure_physical(gamma)?;
    let state = symplectic::standard_form(gamma)?;
    symplectic::ensure_entangled(&state)?;
    let wigner = symplectic::standard_form(&symplectic::wigner_from_cm(gamma)?)?;
    let symmetrization = symmetrize(&wigner)?;
    let symmetric_invariants = symplectic::invariants(&symmetrization.symmetric_wigner_cm)?;
    let value = eof_from_symmetric_wigner(&symmetric_invariants)?;
    Ok(PipelineTrace {
        state,
        wigner,
        symmetrization,
        symmetric_invariants,
        value,
    })
}

/// Intermediates of the route written in the Wigner invariants alone,
/// where `W1 = det A_W`, `W2 = det B_W` and `W3, W4, W5` are as usual.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvariantChain {
    pub kx_sq: f64,
    pub tan_sq_theta: f64,
    pub alpha: f64,
    pub beta: f64,
    pub epsilon: f64,
    pub value: f64,
}

/// First lower bound as `f(sqrt((alpha - sqrt(beta)) / epsilon))`.
pub fn lb1_via_invariant_chain(gamma: &CovarianceMatrix) -> Result<f64> {
    invariant_chain(gamma).map(|c| c.value)
}

pub fn invariant_chain(gamma: &CovarianceMatrix) -> Result<InvariantChain> {
    symplectic::ensure_physical(gamma)?;
    let state = symplectic::standard_form(gamma)?;
    symplectic::ensure_entangled(&state)?;
    let mut w = symplectic::invariants(&symplectic::wigner_from_cm(gamma)?)?;
    // The chain assumes the first Wigner mode is the larger one.
    if w.i1 < w.i2 {
        std::mem::swap(&mut w.i1, &mut w.i2);
    }
    let (w1, w2, w3, w4, w5) = (w.i1 * w.i1, w.i2 * w.i2, w.i3, w.i4, w.i5);
    let (rw1, rw2) = (w.i1, w.i2);
    let disc = (w4 * w4 - 4.0 * w1 * w2 * w3 * w3).max(0.0);
    let kx_sq = (w4 + disc.sqrt()) / (2.0 * rw1 * rw2);

    let tan_sq_theta = if state.is_symmetric() {
        0.0
    } else {
        let numerator = w1 - w2;
        let denominator = rw2 - rw1 * (rw1 * rw2 - kx_sq);
        let t = numerator / denominator;
        if !t.is_finite() || t < 0.0 {
            return Err(Error::InvalidAngle {
                tan_sq_theta: t,
                numerator,
                denominator,
            });
        }
        t
    };
    let t = tan_sq_theta;
    let alpha = w2 - w3 + rw2 * t;
    let epsilon = w5 + rw1 * (rw1 * rw2 - kx_sq) * t;
    let beta = w4 - 2.0 * w2 * w3 + t * ((w4 - 2.0 * w3 - w3 * w3) * rw2 + (1.0 - w2) * kx_sq * rw1);
    let radicand = (alpha - beta.max(0.0).sqrt()) / epsilon;
    if radicand.is_nan() || radicand <= 0.0 {
        return Err(Error::Domain {
            what: "alpha/beta/epsilon radicand",
            value: radicand,
        });
    }
    Ok(InvariantChain {
        kx_sq,
        tan_sq_theta,
        alpha,
        beta,
        epsilon,
        value: f_of_delta(radicand.sqrt())?,
    })
}
