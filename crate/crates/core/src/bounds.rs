//! Scalar entanglement functionals: the EPR-correlation entropy `f`, the
//! symmetric-state EoF, the two lower bounds and the EPR correlation itself.
//!
//! Every entropy is in ebits (log base 2).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symplectic::{self, CovarianceMatrix, StandardForm};
use crate::tol;

/// `x log2 x` with `0 log2 0 = 0`.
fn xlog2x(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// `f(d) = c+ log2 c+ - c- log2 c-` with `c± = (d^-1/2 ± d^1/2)^2 / 4`.
///
/// Extended by `f(d) = 0` for `d >= 1`.
pub fn f_of_delta(delta: f64) -> Result<f64> {
    if delta.is_nan() || delta <= 0.0 {
        return Err(Error::Domain {
            what: "f(delta)",
            value: delta,
        });
    }
    if delta >= 1.0 {
        return Ok(0.0);
    }
    let (inv_root, root) = (delta.sqrt().recip(), delta.sqrt());
    let c_plus = 0.25 * (inv_root + root).powi(2);
    let c_minus = 0.25 * (inv_root - root).powi(2);
    Ok(xlog2x(c_plus) - xlog2x(c_minus))
}

/// Squeezing parameter of a two-mode squeezed vacuum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SqueezedStateParams {
    r: f64,
}

impl SqueezedStateParams {
    /// `r = 0` (the vacuum) is allowed.
    pub fn new(r: f64) -> Result<Self> {
        if r.is_nan() || r < 0.0 {
            return Err(Error::Domain {
                what: "squeezing parameter",
                value: r,
            });
        }
        Ok(Self { r })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    /// Covariance matrix with `n = m = cosh 2r`, `k_x = -k_p = sinh 2r`.
    pub fn covariance_matrix(&self) -> CovarianceMatrix {
        let (c, s) = ((2.0 * self.r).cosh(), (2.0 * self.r).sinh());
        symplectic::cm_from_standard_form(&StandardForm::new(c, c, s, -s))
    }
}

/// Entanglement entropy `cosh^2 r log2 cosh^2 r - sinh^2 r log2 sinh^2 r`.
pub fn squeezed_state_entropy(p: &SqueezedStateParams) -> f64 {
    let (c, s) = (p.r.cosh().powi(2), p.r.sinh().powi(2));
    xlog2x(c) - xlog2x(s)
}

/// EoF of a symmetric state, `f(sqrt((n - |k_x|)(n - |k_p|)))`.
///
/// Returns 0 for states that are not entangled.
pub fn eof_symmetric(sf: &StandardForm) -> Result<f64> {
    if !sf.is_symmetric() {
        return Err(Error::NotSymmetricForm { n: sf.n(), m: sf.m() });
    }
    if !symplectic::classify(sf).is_entangled() {
        return Ok(0.0);
    }
    let n = sf.n();
    f_of_delta(((n - sf.kx().abs()) * (n - sf.kp().abs())).sqrt())
}

/// Intermediate quantities of the closed-form first bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Lb1Terms {
    /// `h(n, m) = n - m(nm - k_p^2)`
    pub h_nm: f64,
    /// `h(m, n) = m - n(nm - k_p^2)`
    pub h_mn: f64,
    /// `g(n, m) = m(1 - m^2) + n k_p^2`
    pub g: f64,
    /// Argument of `f` squared.
    pub radicand: f64,
    pub value: f64,
    /// Radicand reached 1, so the bound is trivially 0.
    pub degenerate: bool,
}

pub fn lb1_terms(sf: &StandardForm) -> Result<Lb1Terms> {
    symplectic::ensure_entangled(sf)?;
    let (n, m, kx, kp) = sf.as_tuple();
    let nm = n * m;
    let h_nm = n - m * (nm - kp * kp);
    let h_mn = m - n * (nm - kp * kp);
    let g = m * (1.0 - m * m) + n * kp * kp;
    // For symmetric states h(n,m) = h(m,n) = g, and all three vanish at purity.
    // Close to that 0/0 the quotient's limit is used instead.
    let near_limit = sf.is_symmetric() && g.abs() <= tol::LB1_SYMMETRIC_LIMIT * n.powi(3);
    let hh = h_nm * h_mn;
    let scale = h_nm.abs().max(h_mn.abs()).max(1.0).powi(2);
    if hh < -tol::RADICAND_SIGN * scale || (g == 0.0 && !near_limit) {
        return Err(Error::NegativeRadicand {
            radicand: f64::NAN,
            h_nm,
            h_mn,
            g,
        });
    }
    let radicand = if near_limit {
        (n - kx.abs()) * (n - kp.abs())
    } else {
        (nm * h_nm - kx * kp * h_mn + (m * kx - n * kp).abs() * hh.max(0.0).sqrt()) / g
    };
    if radicand.is_nan() || radicand <= 0.0 {
        return Err(Error::NegativeRadicand {
            radicand,
            h_nm,
            h_mn,
            g,
        });
    }
    let degenerate = radicand >= 1.0;
    let value = f_of_delta(radicand.sqrt())?;
    Ok(Lb1Terms {
        h_nm,
        h_mn,
        g,
        radicand,
        value,
        degenerate,
    })
}

/// First lower bound: EoF of the state reached by LOCC symmetrization,
/// written in the standard-form parameters.
pub fn lb1(sf: &StandardForm) -> Result<f64> {
    lb1_terms(sf).map(|t| t.value)
}

/// Second lower bound, `f(min{1, sqrt(((n+m)/2 - |k_x|)((n+m)/2 - |k_p|))})`,
/// with a flag set when the clamp at 1 is active.
pub fn lb2_detail(sf: &StandardForm) -> Result<(f64, bool)> {
    symplectic::ensure_entangled(sf)?;
    let (a, b) = squeezing_factors(sf);
    let arg = (a * b).sqrt();
    let degenerate = arg >= 1.0;
    Ok((f_of_delta(arg.min(1.0))?, degenerate))
}

pub fn lb2(sf: &StandardForm) -> Result<f64> {
    lb2_detail(sf).map(|(v, _)| v)
}

fn squeezing_factors(sf: &StandardForm) -> (f64, f64) {
    let mean = 0.5 * (sf.n() + sf.m());
    (mean - sf.kx().abs(), mean - sf.kp().abs())
}

/// `min{1, (Var(X1 - X2) + Var(P1 + P2)) / 2}` for a zero-mean state.
///
/// Quadrature variances are half the diagonal covariance entries.
pub fn epr_delta(gamma: &CovarianceMatrix) -> Result<f64> {
    symplectic::ensure_physical(gamma)?;
    Ok(epr_delta_unchecked(gamma))
}

/// [`epr_delta`] without the physicality check.
pub fn epr_delta_unchecked(gamma: &CovarianceMatrix) -> f64 {
    let g = |r, c| gamma.get(r, c);
    let sum = g(0, 0) + g(2, 2) - 2.0 * g(0, 2) + g(1, 1) + g(3, 3) + 2.0 * g(1, 3);
    (0.25 * sum).min(1.0)
}

/// Local squeeze `X_j -> s X_j`, `P_j -> P_j / s` on both modes that
/// minimises the EPR correlation of a standard form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimalSqueezing {
    pub scale: f64,
    pub delta_min: f64,
}

/// With `a = (n+m)/2 - |k_x|` and `b = (n+m)/2 - |k_p|`, the squeezed
/// correlation is `(s^2 a + b / s^2) / 2`, minimised at `s = (b/a)^(1/4)`
/// where it equals `sqrt(ab)`.
pub fn optimal_local_squeezing(sf: &StandardForm) -> Result<OptimalSqueezing> {
    let (a, b) = squeezing_factors(sf);
    if a.is_nan() || a <= 0.0 {
        return Err(Error::Domain {
            what: "optimal squeezing ((n+m)/2 - |k_x|)",
            value: a,
        });
    }
    Ok(OptimalSqueezing {
        scale: (b / a).powf(0.25),
        delta_min: (a * b).sqrt().min(1.0),
    })
}

/// `f(sqrt((sqrt(nm) - |k_x|)(sqrt(nm) - |k_p|)))`.
pub fn candidate_f1(sf: &StandardForm) -> Result<f64> {
    candidate(sf, (sf.n() * sf.m()).sqrt())
}

/// `f(sqrt((sqrt((n^2+m^2)/2) - |k_x|)(sqrt((n^2+m^2)/2) - |k_p|)))`.
pub fn candidate_f2(sf: &StandardForm) -> Result<f64> {
    candidate(sf, (0.5 * (sf.n().powi(2) + sf.m().powi(2))).sqrt())
}

fn candidate(sf: &StandardForm, mean: f64) -> Result<f64> {
    let product = (mean - sf.kx().abs()) * (mean - sf.kp().abs());
    if product.is_nan() || product <= 0.0 {
        return Err(Error::Domain {
            what: "candidate function argument",
            value: product,
        });
    }
    f_of_delta(product.sqrt())
}

/// Both lower bounds for one state with the EPR correlations behind them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub lb1: f64,
    pub lb2: f64,
    pub best: f64,
    /// EPR correlation of the standard-form matrix.
    pub delta_raw: f64,
    /// EPR correlation after the optimal local squeeze.
    pub delta_optimized: f64,
    pub lb1_degenerate: bool,
    pub lb2_degenerate: bool,
}

pub fn bound_report(sf: &StandardForm) -> Result<BoundReport> {
    let terms = lb1_terms(sf)?;
    let (lb2, lb2_degenerate) = lb2_detail(sf)?;
    let squeeze = optimal_local_squeezing(sf)?;
    let delta_raw = epr_delta(&symplectic::cm_from_standard_form(sf))?;
    Ok(BoundReport {
        lb1: terms.value,
        lb2,
        best: terms.value.max(lb2),
        delta_raw,
        delta_optimized: squeeze.delta_min,
        lb1_degenerate: terms.degenerate,
        lb2_degenerate,
    })
}

/// Validates `gamma`, reduces it to standard form and reports both bounds.
pub fn bound_report_from_cm(gamma: &CovarianceMatrix) -> Result<(StandardForm, BoundReport)> {
    symplectic::ensure_physical(gamma)?;
    let sf = symplectic::standard_form(gamma)?;
    Ok((sf, bound_report(&sf)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sf(n: f64, m: f64, kx: f64, kp: f64) -> StandardForm {
        StandardForm::new(n, m, kx, kp)
    }

    #[test]
    fn f_at_one_is_exactly_zero() {
        assert_eq!(f_of_delta(1.0).unwrap(), 0.0);
        assert_eq!(f_of_delta(1.5).unwrap(), 0.0);
    }

    #[test]
    fn f_rejects_non_positive() {
        assert!(matches!(f_of_delta(0.0), Err(Error::Domain { .. })));
        assert!(matches!(f_of_delta(-0.1), Err(Error::Domain { .. })));
        assert!(f_of_delta(f64::NAN).is_err());
    }

    #[test]
    fn f_matches_squeezed_entropy() {
        for r in [0.1, 0.5, 1.0, 2.0] {
            let p = SqueezedStateParams::new(r).unwrap();
            let direct = r.cosh().powi(2) * r.cosh().powi(2).log2() - r.sinh().powi(2) * r.sinh().powi(2).log2();
            assert_abs_diff_eq!(f_of_delta((-2.0 * r).exp()).unwrap(), direct, epsilon = 1e-12);
            assert_abs_diff_eq!(squeezed_state_entropy(&p), direct, epsilon = 1e-12);
        }
    }

    #[test]
    fn f_at_lb2_argument_of_table_row1() {
        let v = f_of_delta((0.55f64 * 0.75).sqrt()).unwrap();
        assert_abs_diff_eq!(v, 0.28919, epsilon = 1e-5);
    }

    #[test]
    fn squeezed_entropy_edge_cases() {
        assert_eq!(squeezed_state_entropy(&SqueezedStateParams::new(0.0).unwrap()), 0.0);
        assert!(SqueezedStateParams::new(-0.1).is_err());
    }

    #[test]
    fn eof_symmetric_cases() {
        assert_eq!(eof_symmetric(&sf(2.0, 2.0, 0.0, 0.0)).unwrap(), 0.0);
        // argument sqrt(0.8 * 0.8)
        let expected = f_of_delta(0.8).unwrap();
        assert_abs_diff_eq!(
            eof_symmetric(&sf(2.0, 2.0, 1.2, -1.2)).unwrap(),
            expected,
            epsilon = 1e-15
        );
        assert!(matches!(
            eof_symmetric(&sf(1.5, 2.0, 1.2, -1.0)),
            Err(Error::NotSymmetricForm { .. })
        ));
    }

    #[test]
    fn lb1_table_values() {
        assert_abs_diff_eq!(lb1(&sf(1.5, 2.0, 1.2, -1.0)).unwrap(), 0.14635, epsilon = 1e-5);
        assert_abs_diff_eq!(lb1(&sf(2.0, 3.0, 1.8, -1.2)).unwrap(), 0.02448, epsilon = 1e-5);
    }

    #[test]
    fn lb1_reduces_to_symmetric_eof() {
        let s = sf(2.0, 2.0, 1.3, -1.3);
        assert_abs_diff_eq!(lb1(&s).unwrap(), eof_symmetric(&s).unwrap(), epsilon = 1e-12);
        assert_abs_diff_eq!(lb2(&s).unwrap(), eof_symmetric(&s).unwrap(), epsilon = 1e-12);
    }

    #[test]
    fn lb1_sign_structure_on_table_row() {
        let t = lb1_terms(&sf(1.5, 2.0, 1.2, -1.0)).unwrap();
        assert!(t.h_nm <= 0.0 && t.h_mn <= 0.0 && t.g <= 0.0);
        assert!(t.radicand > 0.0 && t.radicand <= 1.0);
        assert!(!t.degenerate);
    }

    #[test]
    fn bounds_reject_separable_and_unphysical() {
        assert_eq!(lb1(&sf(1.0, 1.0, 0.0, 0.0)), Err(Error::NotEntangled));
        assert_eq!(lb2(&sf(1.0, 1.0, 0.0, 0.0)), Err(Error::NotEntangled));
        assert!(matches!(lb1(&sf(1.0, 1.0, 0.5, -0.5)), Err(Error::Unphysical { .. })));
    }

    #[test]
    fn lb2_table_values() {
        assert_abs_diff_eq!(lb2(&sf(1.5, 2.0, 1.2, -1.0)).unwrap(), 0.28919, epsilon = 1e-5);
        let (v, degenerate) = lb2_detail(&sf(1.7, 2.6, 1.3, -0.9)).unwrap();
        assert_eq!(v, 0.0);
        assert!(degenerate);
    }

    #[test]
    fn epr_delta_cases() {
        assert_eq!(epr_delta(&CovarianceMatrix::vacuum()).unwrap(), 1.0);
        let s = sf(1.5, 2.0, 1.2, -1.0);
        let expected = (0.5f64 * (3.5 - 1.2 - 1.0)).min(1.0);
        assert_abs_diff_eq!(
            epr_delta(&symplectic::cm_from_standard_form(&s)).unwrap(),
            expected,
            epsilon = 1e-15
        );
        for r in [0.1, 0.7, 2.5] {
            let g = SqueezedStateParams::new(r).unwrap().covariance_matrix();
            assert_abs_diff_eq!(epr_delta(&g).unwrap(), (-2.0 * r).exp(), epsilon = 1e-12);
        }
        let bad = CovarianceMatrix::new(nalgebra::Matrix4::identity() * 0.5).unwrap();
        assert!(matches!(epr_delta(&bad), Err(Error::Unphysical { .. })));
    }

    #[test]
    fn optimal_squeezing_cases() {
        let sym = optimal_local_squeezing(&sf(2.0, 2.0, 1.2, -1.2)).unwrap();
        assert_eq!(sym.scale, 1.0);
        let row1 = optimal_local_squeezing(&sf(1.5, 2.0, 1.2, -1.0)).unwrap();
        assert_abs_diff_eq!(row1.delta_min, (0.55f64 * 0.75).sqrt(), epsilon = 1e-15);
        assert!(optimal_local_squeezing(&sf(1.0, 1.0, 1.5, 0.0)).is_err());
    }

    #[test]
    fn candidates_reduce_at_equal_modes() {
        let s = sf(2.0, 2.0, 1.4, -1.1);
        let e = eof_symmetric(&s).unwrap();
        assert_abs_diff_eq!(candidate_f1(&s).unwrap(), e, epsilon = 1e-14);
        assert_abs_diff_eq!(candidate_f2(&s).unwrap(), e, epsilon = 1e-14);
    }

    #[test]
    fn bound_report_table_rows() {
        let r = bound_report(&sf(1.5, 2.0, 1.2, -1.0)).unwrap();
        assert_abs_diff_eq!(r.lb1, 0.14635, epsilon = 1e-5);
        assert_abs_diff_eq!(r.lb2, 0.28919, epsilon = 1e-5);
        assert_eq!(r.best, r.lb2);
        let r = bound_report(&sf(1.7, 2.6, 1.3, -0.9)).unwrap();
        assert_abs_diff_eq!(r.lb1, 0.00549, epsilon = 1e-5);
        assert_eq!((r.lb2, r.best, r.lb2_degenerate), (0.0, r.lb1, true));
        let r = bound_report(&sf(2.0, 2.5, 1.3, -1.2)).unwrap();
        assert_abs_diff_eq!(r.lb1, 0.00173, epsilon = 1e-5);
        assert_abs_diff_eq!(r.lb2, 0.00001, epsilon = 1e-5);
        assert!(r.delta_optimized <= r.delta_raw);
    }

    #[test]
    fn pure_states_give_the_entanglement_entropy() {
        for r in [0.1, 0.7, 1.5, 3.0] {
            let p = SqueezedStateParams::new(r).unwrap();
            let sf = symplectic::standard_form(&p.covariance_matrix()).unwrap();
            let e = squeezed_state_entropy(&p);
            let report = bound_report(&sf).unwrap();
            // n - |k| = e^-2r is itself a cancellation of cosh and sinh.
            let tol = 1e-13 * (4.0 * r).exp();
            assert_abs_diff_eq!(report.lb1, e, epsilon = tol);
            assert_abs_diff_eq!(report.lb2, e, epsilon = tol);
        }
    }
}
