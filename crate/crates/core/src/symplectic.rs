//! Covariance matrices of two-mode Gaussian states, their local-symplectic
//! invariants and the `(n, m, k_x, k_p)` standard form.
//!
//! Quadratures are ordered `(X1, P1, X2, P2)` in units where the vacuum
//! covariance matrix is the identity. A matrix is either a state covariance
//! matrix `g` or its Wigner dual `g_W = J^T g^-1 J`; the two are tagged with
//! [`Role`] so they cannot be mixed up silently.

use nalgebra::{Matrix2, Matrix4};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{self, block, j1, symplectic_form};
use crate::tol;

/// Which side of the duality `g_W = J^T g^-1 J` a matrix lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    State,
    Wigner,
}

impl Role {
    pub fn dual(self) -> Role {
        match self {
            Role::State => Role::Wigner,
            Role::Wigner => Role::State,
        }
    }
}

/// Real symmetric 4x4 covariance matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovarianceMatrix {
    entries: Matrix4<f64>,
    role: Role,
}

impl CovarianceMatrix {
    /// Wraps a state-role matrix. Entries must be finite and exactly symmetric.
    pub fn new(entries: Matrix4<f64>) -> Result<Self> {
        Self::with_role(entries, Role::State)
    }

    pub fn with_role(entries: Matrix4<f64>, role: Role) -> Result<Self> {
        check_finite(&entries)?;
        for r in 0..4 {
            for c in (r + 1)..4 {
                let defect = (entries[(r, c)] - entries[(c, r)]).abs();
                if defect != 0.0 {
                    return Err(Error::NotSymmetric { row: r, col: c, defect });
                }
            }
        }
        Ok(Self { entries, role })
    }

    /// Accepts an asymmetry up to `tolerance` and averages it away.
    pub fn symmetrize_within(entries: Matrix4<f64>, tolerance: f64, role: Role) -> Result<Self> {
        check_finite(&entries)?;
        for r in 0..4 {
            for c in (r + 1)..4 {
                let defect = (entries[(r, c)] - entries[(c, r)]).abs();
                if defect > tolerance {
                    return Err(Error::NotSymmetric { row: r, col: c, defect });
                }
            }
        }
        Ok(Self {
            entries: matrix::symmetrized(&entries),
            role,
        })
    }

    pub fn vacuum() -> Self {
        Self {
            entries: Matrix4::identity(),
            role: Role::State,
        }
    }

    pub fn entries(&self) -> &Matrix4<f64> {
        &self.entries
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[(row, col)]
    }

    pub fn det(&self) -> f64 {
        matrix::det4(&self.entries)
    }

    /// Mode-1 block `A`.
    pub fn a(&self) -> Matrix2<f64> {
        block(&self.entries, 0, 0)
    }

    /// Mode-2 block `B`.
    pub fn b(&self) -> Matrix2<f64> {
        block(&self.entries, 1, 1)
    }

    /// Correlation block `C` (rows: mode 1, columns: mode 2).
    pub fn c(&self) -> Matrix2<f64> {
        block(&self.entries, 0, 1)
    }

    /// Exchanges the two modes.
    pub fn swap_modes(&self) -> Self {
        let entries = matrix::from_blocks(&self.b(), &self.c().transpose(), &self.a());
        Self {
            entries,
            role: self.role,
        }
    }
}

fn check_finite(m: &Matrix4<f64>) -> Result<()> {
    for r in 0..4 {
        for c in 0..4 {
            if !m[(r, c)].is_finite() {
                return Err(Error::NonFinite { row: r, col: c });
            }
        }
    }
    Ok(())
}

/// The four numbers `(n, m, k_x, k_p)` describing a covariance matrix with
/// blocks `A = n I`, `B = m I`, `C = diag(k_x, k_p)`.
///
/// The constructor puts the quadruple into canonical order: the larger
/// correlation magnitude goes to `k_x`, `k_x >= 0`, and `k_p` carries the
/// sign of `k_x k_p`. Modes are ordered so that `m >= n` for a state and
/// `N >= M` for a Wigner matrix; the two orderings describe the same
/// physical labelling because `N = m / sqrt(det g)` and `M = n / sqrt(det g)`.
/// Every one of these rearrangements is a local symplectic operation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StandardForm {
    n: f64,
    m: f64,
    kx: f64,
    kp: f64,
    role: Role,
    swapped: bool,
}

impl StandardForm {
    /// Canonicalizes a state-role quadruple.
    pub fn new(n: f64, m: f64, kx: f64, kp: f64) -> Self {
        Self::with_role(n, m, kx, kp, Role::State)
    }

    pub fn with_role(n: f64, m: f64, kx: f64, kp: f64, role: Role) -> Self {
        let (big, small) = if kx.abs() >= kp.abs() {
            (kx.abs(), kp.abs())
        } else {
            (kp.abs(), kx.abs())
        };
        let kp = if kx * kp < 0.0 { -small } else { small };
        let swapped = match role {
            Role::State => n > m,
            Role::Wigner => n < m,
        };
        let (n, m) = if swapped { (m, n) } else { (n, m) };
        Self {
            n,
            m,
            kx: big,
            kp,
            role,
            swapped,
        }
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn kx(&self) -> f64 {
        self.kx
    }

    pub fn kp(&self) -> f64 {
        self.kp
    }

    pub fn role(&self) -> Role {
        self.role
    }

    /// Whether canonicalization exchanged the two modes.
    pub fn modes_swapped(&self) -> bool {
        self.swapped
    }

    pub fn as_tuple(&self) -> (f64, f64, f64, f64) {
        (self.n, self.m, self.kx, self.kp)
    }

    /// `det g = (nm - k_x^2)(nm - k_p^2)`.
    pub fn det(&self) -> f64 {
        let nm = self.n * self.m;
        (nm - self.kx * self.kx) * (nm - self.kp * self.kp)
    }

    pub fn is_symmetric(&self) -> bool {
        (self.n - self.m).abs() <= tol::SYMMETRIC_MODES * self.n.abs().max(1.0)
    }
}

/// Local-symplectic invariants of a covariance matrix.
///
/// `i1 = sqrt(det A)`, `i2 = sqrt(det B)`, `i3 = det C`,
/// `i4 = tr(A J1 C J1 B J1 C^T J1)` and `i5 = det g`. On a standard form these
/// are `n`, `m`, `k_x k_p`, `nm(k_x^2 + k_p^2)` and `(nm - k_x^2)(nm - k_p^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymplecticInvariants {
    pub i1: f64,
    pub i2: f64,
    pub i3: f64,
    pub i4: f64,
    pub i5: f64,
    pub role: Role,
}

impl SymplecticInvariants {
    pub fn as_array(&self) -> [f64; 5] {
        [self.i1, self.i2, self.i3, self.i4, self.i5]
    }

    /// Largest relative difference over the five components.
    pub fn max_relative_diff(&self, other: &Self) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| (a - b).abs() / a.abs().max(b.abs()).max(1.0))
            .fold(0.0, f64::max)
    }
}

/// Outcome of [`validate_cm`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalityReport {
    pub symmetry_defect: f64,
    pub min_eigenvalue: f64,
    /// Smallest eigenvalue of `g - J^T g^-1 J`; `-inf` when `g` is singular.
    pub min_uncertainty_eigenvalue: f64,
    pub singular: bool,
    pub physical: bool,
}

/// Checks strict positivity and the uncertainty relation `g >= J^T g^-1 J`.
///
/// A singular matrix is reported as unphysical rather than rejected.
pub fn validate_cm(gamma: &CovarianceMatrix) -> Result<PhysicalityReport> {
    let g = gamma.entries();
    check_finite(g)?;
    let symmetry_defect = (g - g.transpose()).abs().max();
    let min_eigenvalue = matrix::min_eigenvalue(&matrix::symmetrized(g));
    // Pure states sit exactly on the boundary; rounding in the inverse grows
    // with the conditioning of g, so the slack does too.
    let (min_uncertainty_eigenvalue, slack, singular) = match matrix::inverse4(g, tol::SINGULAR_DET) {
        Some((inv, _)) => {
            let j = symplectic_form();
            let diff = g - j.transpose() * inv * j;
            let scale = (g.abs().max() * inv.abs().max()).max(1.0);
            (
                matrix::min_eigenvalue(&matrix::symmetrized(&diff)),
                tol::UNCERTAINTY_PSD * scale,
                false,
            )
        }
        None => (f64::NEG_INFINITY, 0.0, true),
    };
    let physical = !singular && min_eigenvalue > tol::POSITIVE_DEFINITE && min_uncertainty_eigenvalue >= -slack;
    Ok(PhysicalityReport {
        symmetry_defect,
        min_eigenvalue,
        min_uncertainty_eigenvalue,
        singular,
        physical,
    })
}

/// Fails with [`Error::Unphysical`] unless `validate_cm` accepts the matrix.
pub fn ensure_physical(gamma: &CovarianceMatrix) -> Result<PhysicalityReport> {
    let report = validate_cm(gamma)?;
    if report.physical {
        Ok(report)
    } else if report.singular {
        Err(Error::Unphysical {
            reason: "covariance matrix is singular".into(),
        })
    } else if report.min_eigenvalue <= tol::POSITIVE_DEFINITE {
        Err(Error::Unphysical {
            reason: format!("not positive definite (min eigenvalue {:e})", report.min_eigenvalue),
        })
    } else {
        Err(Error::Unphysical {
            reason: format!(
                "violates g >= J^T g^-1 J (min eigenvalue of difference {:e})",
                report.min_uncertainty_eigenvalue
            ),
        })
    }
}

/// `J^T g^-1 J`, flipping the role. The map is its own inverse.
pub fn wigner_from_cm(gamma: &CovarianceMatrix) -> Result<CovarianceMatrix> {
    let g = gamma.entries();
    let (inv, _) = matrix::inverse4(g, tol::SINGULAR_DET).ok_or(Error::Singular { det: matrix::det4(g) })?;
    let j = symplectic_form();
    Ok(CovarianceMatrix {
        entries: matrix::symmetrized(&(j.transpose() * inv * j)),
        role: gamma.role().dual(),
    })
}

/// Inverse of [`wigner_from_cm`]; the same formula.
pub fn cm_from_wigner(gamma_w: &CovarianceMatrix) -> Result<CovarianceMatrix> {
    wigner_from_cm(gamma_w)
}

pub fn invariants(gamma: &CovarianceMatrix) -> Result<SymplecticInvariants> {
    let (a, b, c) = (gamma.a(), gamma.b(), gamma.c());
    let (det_a, det_b) = (a.determinant(), b.determinant());
    if det_a < 0.0 || det_b < 0.0 {
        return Err(Error::NegativeBlockDeterminant { det_a, det_b });
    }
    let j = j1();
    let i4 = (a * j * c * j * b * j * c.transpose() * j).trace();
    Ok(SymplecticInvariants {
        i1: det_a.sqrt(),
        i2: det_b.sqrt(),
        i3: c.determinant(),
        i4,
        i5: gamma.det(),
        role: gamma.role(),
    })
}

/// Recovers the canonical standard form from the invariants of `gamma`.
///
/// `k_x^2` and `k_p^2` are the roots of `t^2 - (i4 / nm) t + i3^2`.
pub fn standard_form(gamma: &CovarianceMatrix) -> Result<StandardForm> {
    let inv = invariants(gamma)?;
    standard_form_from_invariants(&inv)
}

pub fn standard_form_from_invariants(inv: &SymplecticInvariants) -> Result<StandardForm> {
    let (n, m) = (inv.i1, inv.i2);
    if inv.role == Role::State {
        let smallest = n.min(m);
        if smallest < 1.0 - tol::SINGLE_MODE_BOUND {
            return Err(Error::Unphysical {
                reason: format!("single-mode determinant below the uncertainty bound (sqrt det = {smallest})"),
            });
        }
    }
    let nm = n * m;
    if nm <= 0.0 {
        return Err(Error::DivisionByZero {
            what: "standard form (n m = 0)",
        });
    }
    let sum = inv.i4 / nm;
    let product_sq = inv.i3 * inv.i3;
    let mut discriminant = sum * sum - 4.0 * product_sq;
    if discriminant < -tol::DISCRIMINANT_RELATIVE * sum.abs().max(1.0).powi(2) {
        return Err(Error::ComplexRoot { discriminant });
    }
    // A double root (|k_x| = |k_p|, e.g. pure states) comes out of rounding as
    // a discriminant of order eps * sum^2, which would split the roots by
    // ~sqrt(eps). Inside that noise the roots are taken as equal.
    if discriminant <= tol::EQUAL_ROOTS * sum * sum {
        discriminant = 0.0;
    }
    let large = 0.5 * (sum + discriminant.sqrt());
    let small = if large > 0.0 { product_sq / large } else { 0.0 };
    let kx = large.max(0.0).sqrt();
    let kp = small.max(0.0).sqrt();
    let kp = if inv.i3 < 0.0 { -kp } else { kp };
    Ok(StandardForm::with_role(n, m, kx, kp, inv.role))
}

pub fn cm_from_standard_form(sf: &StandardForm) -> CovarianceMatrix {
    let (n, m, kx, kp) = sf.as_tuple();
    #[rustfmt::skip]
    let entries = Matrix4::new(
        n, 0.0, kx, 0.0,
        0.0, n, 0.0, kp,
        kx, 0.0, m, 0.0,
        0.0, kp, 0.0, m,
    );
    CovarianceMatrix {
        entries,
        role: sf.role(),
    }
}

/// Maps Wigner-side invariants to state-side invariants.
///
/// With determinant-valued first two invariants the relations read
/// `det A = det B_W / det g_W`, `det B = det A_W / det g_W`,
/// `i3 = w3 / w5`, `i4 = w4 / w5^2`, `i5 = 1 / w5`. The square-rooted `i1`
/// and `i2` stored here therefore pick up `sqrt(w5)` in the denominator.
pub fn relate_invariants(w: &SymplecticInvariants) -> Result<SymplecticInvariants> {
    if w.role != Role::Wigner {
        return Err(Error::RoleMismatch {
            expected: Role::Wigner,
            found: w.role,
        });
    }
    if w.i5 == 0.0 {
        return Err(Error::DivisionByZero {
            what: "relate_invariants (w5 = 0)",
        });
    }
    if w.i5 < 0.0 {
        return Err(Error::Unphysical {
            reason: format!("Wigner determinant is negative ({})", w.i5),
        });
    }
    let root = w.i5.sqrt();
    Ok(SymplecticInvariants {
        i1: w.i2 / root,
        i2: w.i1 / root,
        i3: w.i3 / w.i5,
        i4: w.i4 / (w.i5 * w.i5),
        i5: 1.0 / w.i5,
        role: Role::State,
    })
}

/// Which of the three standard-form inequalities decided the class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Inequality {
    /// `det g + 1 >= n^2 + m^2 + 2 k_x k_p`
    Uncertainty,
    /// `nm - k_x^2 >= 1`
    Positivity,
    /// `det g + 1 < n^2 + m^2 - 2 k_x k_p`
    Entanglement,
}

impl Inequality {
    pub fn describe(self) -> &'static str {
        match self {
            Inequality::Uncertainty => "det g + 1 >= n^2 + m^2 + 2 kx kp",
            Inequality::Positivity => "n m - kx^2 >= 1",
            Inequality::Entanglement => "det g + 1 < n^2 + m^2 - 2 kx kp",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateTag {
    Unphysical,
    Separable,
    Entangled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateClass {
    pub tag: StateTag,
    /// The inequality that failed; `Entanglement` for a separable state.
    pub violated_inequality: Option<Inequality>,
}

impl StateClass {
    pub fn is_entangled(&self) -> bool {
        self.tag == StateTag::Entangled
    }
}

/// Physicality and separability of a canonical state-role standard form.
///
/// Equality in the first two inequalities counts as physical, up to a
/// relative `tol::UNCERTAINTY_PSD` so that pure states recovered from a matrix
/// stay physical. Equality in the third counts as separable, exactly.
pub fn classify(sf: &StandardForm) -> StateClass {
    let (n, m, kx, kp) = sf.as_tuple();
    let det = sf.det();
    let unphysical = |which| StateClass {
        tag: StateTag::Unphysical,
        violated_inequality: Some(which),
    };
    let below = |lhs: f64, rhs: f64| lhs < rhs - tol::UNCERTAINTY_PSD * rhs.abs().max(1.0);
    if below(det + 1.0, n * n + m * m + 2.0 * kx * kp) {
        return unphysical(Inequality::Uncertainty);
    }
    if below(n * m - kx * kx, 1.0) {
        return unphysical(Inequality::Positivity);
    }
    if det + 1.0 < n * n + m * m - 2.0 * kx * kp {
        StateClass {
            tag: StateTag::Entangled,
            violated_inequality: None,
        }
    } else {
        StateClass {
            tag: StateTag::Separable,
            violated_inequality: Some(Inequality::Entanglement),
        }
    }
}

/// Fails unless `sf` classifies as entangled.
pub fn ensure_entangled(sf: &StandardForm) -> Result<()> {
    let class = classify(sf);
    match class.tag {
        StateTag::Entangled => Ok(()),
        StateTag::Separable => Err(Error::NotEntangled),
        StateTag::Unphysical => Err(Error::Unphysical {
            reason: format!(
                "violates {}",
                class.violated_inequality.map_or("", Inequality::describe)
            ),
        }),
    }
}

/// `S g S^T` for a block-diagonal `S` whose 2x2 blocks have unit determinant.
pub fn apply_local_symplectic(gamma: &CovarianceMatrix, s: &Matrix4<f64>) -> Result<CovarianceMatrix> {
    if block(s, 0, 1).iter().chain(block(s, 1, 0).iter()).any(|&x| x != 0.0) {
        return Err(Error::NotLocal);
    }
    let det1 = block(s, 0, 0).determinant();
    let det2 = block(s, 1, 1).determinant();
    if (det1 - 1.0).abs() > tol::SYMPLECTIC_DET || (det2 - 1.0).abs() > tol::SYMPLECTIC_DET {
        return Err(Error::NotSymplectic { det1, det2 });
    }
    let entries = matrix::symmetrized(&(s * gamma.entries() * s.transpose()));
    CovarianceMatrix::with_role(entries, gamma.role())
}

/// Local symplectic built from one 2x2 block per mode.
pub fn local_symplectic(mode1: &Matrix2<f64>, mode2: &Matrix2<f64>) -> Matrix4<f64> {
    matrix::from_blocks(mode1, &Matrix2::zeros(), mode2)
}
