//! Fixed-size kernels on 4x4 and 2x2 real matrices.
//!
//! The 4x4 determinant and inverse are closed forms, so results do not depend
//! on pivoting order. Covariance matrices are handled through the Schur
//! complement of their first 2x2 block, which avoids the cancellation the
//! plain cofactor expansion suffers on strongly correlated matrices; the
//! cofactor expansion remains as the fallback when that block is singular.

use nalgebra::{Matrix2, Matrix4};

/// Single-mode symplectic form `[[0, -1], [1, 0]]`.
pub fn j1() -> Matrix2<f64> {
    Matrix2::new(0.0, -1.0, 1.0, 0.0)
}

/// Two-mode symplectic form `J1 (+) J1`.
pub fn symplectic_form() -> Matrix4<f64> {
    let mut j = Matrix4::zeros();
    j.fixed_view_mut::<2, 2>(0, 0).copy_from(&j1());
    j.fixed_view_mut::<2, 2>(2, 2).copy_from(&j1());
    j
}

/// Sub-determinants shared by `det4` and `inverse4`.
struct Minors {
    s: [f64; 6],
    c: [f64; 6],
}

fn minors(m: &Matrix4<f64>) -> Minors {
    let a = |r: usize, c: usize| m[(r, c)];
    Minors {
        s: [
            a(0, 0) * a(1, 1) - a(1, 0) * a(0, 1),
            a(0, 0) * a(1, 2) - a(1, 0) * a(0, 2),
            a(0, 0) * a(1, 3) - a(1, 0) * a(0, 3),
            a(0, 1) * a(1, 2) - a(1, 1) * a(0, 2),
            a(0, 1) * a(1, 3) - a(1, 1) * a(0, 3),
            a(0, 2) * a(1, 3) - a(1, 2) * a(0, 3),
        ],
        c: [
            a(2, 0) * a(3, 1) - a(3, 0) * a(2, 1),
            a(2, 0) * a(3, 2) - a(3, 0) * a(2, 2),
            a(2, 0) * a(3, 3) - a(3, 0) * a(2, 3),
            a(2, 1) * a(3, 2) - a(3, 1) * a(2, 2),
            a(2, 1) * a(3, 3) - a(3, 1) * a(2, 3),
            a(2, 2) * a(3, 3) - a(3, 2) * a(2, 3),
        ],
    }
}

impl Minors {
    fn det(&self) -> f64 {
        let (s, c) = (&self.s, &self.c);
        s[0] * c[5] - s[1] * c[4] + s[2] * c[3] + s[3] * c[2] - s[4] * c[1] + s[5] * c[0]
    }
}

fn inverse2(m: &Matrix2<f64>) -> Option<(Matrix2<f64>, f64)> {
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    let adj = Matrix2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]);
    Some((adj / det, det))
}

/// `A^-1`, `S = D - C A^-1 B` and `S^-1` for the partition `[[A, B], [C, D]]`.
struct Schur {
    a_inv: Matrix2<f64>,
    s_inv: Option<Matrix2<f64>>,
    det: f64,
}

fn schur(m: &Matrix4<f64>) -> Option<Schur> {
    let a = block(m, 0, 0);
    let (a_inv, det_a) = inverse2(&a)?;
    // Only worth it when A is comfortably invertible.
    if det_a.abs() <= 1e-8 * a.abs().max().powi(2) {
        return None;
    }
    let s = block(m, 1, 1) - block(m, 1, 0) * a_inv * block(m, 0, 1);
    let s_inv = inverse2(&s);
    let det_s = s_inv.map_or(0.0, |(_, d)| d);
    Some(Schur {
        a_inv,
        s_inv: s_inv.map(|(i, _)| i),
        det: det_a * det_s,
    })
}

pub fn det4(m: &Matrix4<f64>) -> f64 {
    match schur(m) {
        Some(sc) => sc.det,
        None => minors(m).det(),
    }
}

/// Closed-form inverse. Returns `None` when `|det| <= tiny`.
pub fn inverse4(m: &Matrix4<f64>, tiny: f64) -> Option<(Matrix4<f64>, f64)> {
    if let Some(sc) = schur(m) {
        if !sc.det.is_finite() || sc.det.abs() <= tiny {
            return None;
        }
        let s_inv = sc.s_inv?;
        let (b, c) = (block(m, 0, 1), block(m, 1, 0));
        let upper_right = -sc.a_inv * b * s_inv;
        let lower_left = -s_inv * c * sc.a_inv;
        let upper_left = sc.a_inv - upper_right * c * sc.a_inv;
        let mut inv = Matrix4::zeros();
        inv.fixed_view_mut::<2, 2>(0, 0).copy_from(&upper_left);
        inv.fixed_view_mut::<2, 2>(0, 2).copy_from(&upper_right);
        inv.fixed_view_mut::<2, 2>(2, 0).copy_from(&lower_left);
        inv.fixed_view_mut::<2, 2>(2, 2).copy_from(&s_inv);
        return Some((inv, sc.det));
    }
    cofactor_inverse(m, tiny)
}

/// Inverse by cofactor expansion.
pub fn cofactor_inverse(m: &Matrix4<f64>, tiny: f64) -> Option<(Matrix4<f64>, f64)> {
    let mi = minors(m);
    let det = mi.det();
    if !det.is_finite() || det.abs() <= tiny {
        return None;
    }
    let (s, c) = (&mi.s, &mi.c);
    let a = |r: usize, c: usize| m[(r, c)];
    let inv = 1.0 / det;
    #[rustfmt::skip]
    let adj = Matrix4::new(
        a(1, 1) * c[5] - a(1, 2) * c[4] + a(1, 3) * c[3],
        -a(0, 1) * c[5] + a(0, 2) * c[4] - a(0, 3) * c[3],
        a(3, 1) * s[5] - a(3, 2) * s[4] + a(3, 3) * s[3],
        -a(2, 1) * s[5] + a(2, 2) * s[4] - a(2, 3) * s[3],

        -a(1, 0) * c[5] + a(1, 2) * c[2] - a(1, 3) * c[1],
        a(0, 0) * c[5] - a(0, 2) * c[2] + a(0, 3) * c[1],
        -a(3, 0) * s[5] + a(3, 2) * s[2] - a(3, 3) * s[1],
        a(2, 0) * s[5] - a(2, 2) * s[2] + a(2, 3) * s[1],

        a(1, 0) * c[4] - a(1, 1) * c[2] + a(1, 3) * c[0],
        -a(0, 0) * c[4] + a(0, 1) * c[2] - a(0, 3) * c[0],
        a(3, 0) * s[4] - a(3, 1) * s[2] + a(3, 3) * s[0],
        -a(2, 0) * s[4] + a(2, 1) * s[2] - a(2, 3) * s[0],

        -a(1, 0) * c[3] + a(1, 1) * c[1] - a(1, 2) * c[0],
        a(0, 0) * c[3] - a(0, 1) * c[1] + a(0, 2) * c[0],
        -a(3, 0) * s[3] + a(3, 1) * s[1] - a(3, 2) * s[0],
        a(2, 0) * s[3] - a(2, 1) * s[1] + a(2, 2) * s[0],
    );
    Some((adj * inv, det))
}

/// Smallest eigenvalue of a symmetric 4x4 matrix.
pub fn min_eigenvalue(m: &Matrix4<f64>) -> f64 {
    m.symmetric_eigenvalues().min()
}

/// `(m + m^T) / 2`, exactly symmetric in floating point.
pub fn symmetrized(m: &Matrix4<f64>) -> Matrix4<f64> {
    (m + m.transpose()) * 0.5
}

pub fn block(m: &Matrix4<f64>, row: usize, col: usize) -> Matrix2<f64> {
    m.fixed_view::<2, 2>(2 * row, 2 * col).into_owned()
}

pub fn from_blocks(a: &Matrix2<f64>, c: &Matrix2<f64>, b: &Matrix2<f64>) -> Matrix4<f64> {
    let mut m = Matrix4::zeros();
    m.fixed_view_mut::<2, 2>(0, 0).copy_from(a);
    m.fixed_view_mut::<2, 2>(0, 2).copy_from(c);
    m.fixed_view_mut::<2, 2>(2, 0).copy_from(&c.transpose());
    m.fixed_view_mut::<2, 2>(2, 2).copy_from(b);
    m
}
