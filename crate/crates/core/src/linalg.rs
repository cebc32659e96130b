//! Tiny dense helpers for the 4-dimensional real view.

use alloc::vec::Vec;

use crate::math;
use crate::point::{axpy4, dot4, norm4, Real4};

/// Singular values (descending) of the 4×k matrix whose columns are `cols`,
/// by one-sided Jacobi rotations.
pub(crate) fn singular_values(cols: &[Real4]) -> Vec<f64> {
    let mut a: Vec<Real4> = cols.to_vec();
    let k = a.len();
    for _sweep in 0..60 {
        let mut rotated = false;
        for i in 0..k {
            for j in i + 1..k {
                let alpha = dot4(&a[i], &a[i]);
                let beta = dot4(&a[j], &a[j]);
                let gamma = dot4(&a[i], &a[j]);
                if gamma == 0.0 || gamma.abs() <= 1e-15 * math::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + math::sqrt(1.0 + zeta * zeta));
                let c = 1.0 / math::sqrt(1.0 + t * t);
                let s = c * t;
                let (ai, aj) = (a[i], a[j]);
                for r in 0..4 {
                    a[i][r] = c * ai[r] - s * aj[r];
                    a[j][r] = s * ai[r] + c * aj[r];
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = a.iter().map(norm4).collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// Component of `v` orthogonal to the span of `basis` (modified Gram–Schmidt,
/// basis vectors need not be orthonormal).
pub(crate) fn orthogonal_part(v: &Real4, basis: &[Real4]) -> Real4 {
    let ortho = orthonormalize(basis, 0.0);
    let mut r = *v;
    for _ in 0..2 {
        for e in &ortho {
            r = axpy4(-dot4(e, &r), e, &r);
        }
    }
    r
}

/// Orthonormalizes `vectors` in order, dropping any whose residual norm is at
/// most `drop_tol` times its original norm.
pub(crate) fn orthonormalize(vectors: &[Real4], drop_tol: f64) -> Vec<Real4> {
    let mut out: Vec<Real4> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let n0 = norm4(v);
        if n0 == 0.0 {
            continue;
        }
        let mut r = *v;
        // two passes keep the result orthogonal to rounding
        for _ in 0..2 {
            for e in &out {
                r = axpy4(-dot4(e, &r), e, &r);
            }
        }
        let n = norm4(&r);
        if n <= drop_tol.max(1e-12) * n0 {
            continue;
        }
        out.push(r.map(|c| c / n));
    }
    out
}

/// Solves the 2×2 system `m · x = b`; `None` if singular.
pub(crate) fn solve2(m: [[f64; 2]; 2], b: [f64; 2]) -> Option<[f64; 2]> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let scale = m.iter().flatten().fold(0.0f64, |a, v| a.max(v.abs()));
    if det == 0.0 || !det.is_finite() || det.abs() <= 1e-300 + 1e-14 * scale * scale {
        return None;
    }
    Some([
        (b[0] * m[1][1] - m[0][1] * b[1]) / det,
        (m[0][0] * b[1] - m[1][0] * b[0]) / det,
    ])
}

/// Smallest singular value of a 2×4 matrix given by its rows.
pub(crate) fn min_singular_2x4(rows: &[Real4; 2]) -> f64 {
    let a = dot4(&rows[0], &rows[0]);
    let b = dot4(&rows[0], &rows[1]);
    let d = dot4(&rows[1], &rows[1]);
    let lam = 0.5 * (a + d) - math::hypot(0.5 * (a - d), b);
    math::sqrt(lam.max(0.0))
}
