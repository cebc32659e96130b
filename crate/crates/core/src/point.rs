use core::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::math;

/// Real view `(Re z, Im z, Re w, Im w)` of a point or tangent vector.
pub type Real4 = [f64; 4];

/// A point (or tangent vector) of `C^2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PointC2 {
    pub z: Complex64,
    pub w: Complex64,
}

impl PointC2 {
    pub const ZERO: PointC2 = PointC2 {
        z: Complex64::new(0.0, 0.0),
        w: Complex64::new(0.0, 0.0),
    };

    pub const fn new(z: Complex64, w: Complex64) -> Self {
        PointC2 { z, w }
    }

    /// Point with real `z` and `w` coordinates.
    pub const fn real(z: f64, w: f64) -> Self {
        PointC2::new(Complex64::new(z, 0.0), Complex64::new(w, 0.0))
    }

    pub const fn from_real(v: Real4) -> Self {
        PointC2::new(Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3]))
    }

    pub const fn to_real(self) -> Real4 {
        [self.z.re, self.z.im, self.w.re, self.w.im]
    }

    pub fn norm(self) -> f64 {
        math::sqrt(self.norm_sqr())
    }

    pub fn norm_sqr(self) -> f64 {
        self.z.norm_sqr() + self.w.norm_sqr()
    }

    pub fn is_finite(self) -> bool {
        self.to_real().iter().all(|c| c.is_finite())
    }

    /// Multiplication by `i`, i.e. the complex structure `J` in the real view.
    pub fn mul_i(self) -> Self {
        let i = Complex64::i();
        PointC2::new(self.z * i, self.w * i)
    }

    pub fn scale_c(self, s: Complex64) -> Self {
        PointC2::new(self.z * s, self.w * s)
    }

    /// Hermitian inner product `<self, other> = z conj(z') + w conj(w')`.
    pub fn hdot(self, other: PointC2) -> Complex64 {
        self.z * other.z.conj() + self.w * other.w.conj()
    }

    /// Euclidean inner product of the real views.
    pub fn rdot(self, other: PointC2) -> f64 {
        self.hdot(other).re
    }

    /// `det[self | other]` as a 2×2 complex matrix with the points as columns.
    pub fn det(self, other: PointC2) -> Complex64 {
        self.z * other.w - self.w * other.z
    }
}

impl Add for PointC2 {
    type Output = PointC2;
    fn add(self, rhs: PointC2) -> PointC2 {
        PointC2::new(self.z + rhs.z, self.w + rhs.w)
    }
}

impl Sub for PointC2 {
    type Output = PointC2;
    fn sub(self, rhs: PointC2) -> PointC2 {
        PointC2::new(self.z - rhs.z, self.w - rhs.w)
    }
}

impl Neg for PointC2 {
    type Output = PointC2;
    fn neg(self) -> PointC2 {
        PointC2::new(-self.z, -self.w)
    }
}

impl Mul<PointC2> for f64 {
    type Output = PointC2;
    fn mul(self, rhs: PointC2) -> PointC2 {
        PointC2::new(rhs.z * self, rhs.w * self)
    }
}

impl From<Real4> for PointC2 {
    fn from(v: Real4) -> Self {
        PointC2::from_real(v)
    }
}

impl From<PointC2> for Real4 {
    fn from(p: PointC2) -> Self {
        p.to_real()
    }
}

pub(crate) fn dot4(a: &Real4, b: &Real4) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm4(a: &Real4) -> f64 {
    math::sqrt(dot4(a, a))
}

pub(crate) fn axpy4(alpha: f64, x: &Real4, y: &Real4) -> Real4 {
    [
        alpha * x[0] + y[0],
        alpha * x[1] + y[1],
        alpha * x[2] + y[2],
        alpha * x[3] + y[3],
    ]
}

/// `J` acting on the real view: multiplication by `i`.
pub(crate) fn j4(v: &Real4) -> Real4 {
    [-v[1], v[0], -v[3], v[2]]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn real_view_round_trips_bit_exactly() {
        let p = PointC2::from_real([0.1, -3.5e-300, f64::MAX, -0.0]);
        let back = PointC2::from_real(p.to_real());
        assert_eq!(
            p.to_real().map(f64::to_bits),
            back.to_real().map(f64::to_bits)
        );
    }

    #[test]
    fn j_matches_complex_multiplication() {
        let p = PointC2::from_real([1.0, 2.0, -3.0, 0.5]);
        assert_eq!(j4(&p.to_real()), p.mul_i().to_real());
    }
}
