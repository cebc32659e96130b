//! Polynomial vector fields on `C^2` and the checks a field must pass before a
//! chart and gauge can be built on it: involutivity of the complex-line
//! distribution, homogeneity, and transversality to the radial direction.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;
use crate::math;
use crate::point::{j4, norm4, PointC2, Real4};
use crate::wirtinger::{complex_hessian, ComplexQ, Degree, NumericPoly, Var, WirtingerPoly};

/// Relative cutoffs for "nonzero" in numeric checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// `|V(q)|` must exceed `nonvanishing · |q|^m`.
    pub nonvanishing: f64,
    /// `|det[p | V(p)]|` must exceed `transversality · |p| · |V(p)|`.
    pub transversality: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            nonvanishing: 1e-8,
            transversality: 1e-8,
        }
    }
}

/// 4×4 real Jacobian, row-major: `jac[r][c] = ∂X_r/∂x_c`.
pub type Jacobian4 = [[f64; 4]; 4];

#[derive(Debug, Clone)]
struct NumericField {
    comps: [NumericPoly; 2],
    /// `∂f_k/∂(x1, y1, x2, y2)` as complex polynomials.
    partials: [[NumericPoly; 4]; 2],
}

impl NumericField {
    fn new(comps: &[WirtingerPoly; 2]) -> Self {
        let i = ComplexQ::i();
        let partials = comps.each_ref().map(|f| {
            let fz = f.diff(Var::Z);
            let fzb = f.diff(Var::ZBar);
            let fw = f.diff(Var::W);
            let fwb = f.diff(Var::WBar);
            [
                (&fz + &fzb).to_numeric(),
                (&fz - &fzb).scale(&i).to_numeric(),
                (&fw + &fwb).to_numeric(),
                (&fw - &fwb).scale(&i).to_numeric(),
            ]
        });
        NumericField {
            comps: comps.each_ref().map(WirtingerPoly::to_numeric),
            partials,
        }
    }
}

/// Vector field `V = (V_z, V_w)` with polynomial components in `z, z̄, w, w̄`
/// and a declared homogeneity degree `m`.
///
/// `X1` denotes the real view of `V` and `X2 = J·X1` the real view of `iV`.
#[derive(Debug, Clone)]
pub struct VectorFieldC2 {
    comps: [WirtingerPoly; 2],
    degree: u32,
    numeric: NumericField,
}

impl PartialEq for VectorFieldC2 {
    fn eq(&self, other: &Self) -> bool {
        self.comps == other.comps && self.degree == other.degree
    }
}

impl VectorFieldC2 {
    pub fn new(comp_z: WirtingerPoly, comp_w: WirtingerPoly, degree: u32) -> Self {
        let comps = [comp_z, comp_w];
        let numeric = NumericField::new(&comps);
        VectorFieldC2 {
            comps,
            degree,
            numeric,
        }
    }

    pub fn comp_z(&self) -> &WirtingerPoly {
        &self.comps[0]
    }

    pub fn comp_w(&self) -> &WirtingerPoly {
        &self.comps[1]
    }

    pub fn components(&self) -> &[WirtingerPoly; 2] {
        &self.comps
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Exact componentwise evaluation (see [`WirtingerPoly::eval`]).
    pub fn field_eval(&self, q: PointC2) -> PointC2 {
        PointC2::new(self.comps[0].eval(q), self.comps[1].eval(q))
    }

    /// Floating-point evaluation for integration loops.
    pub fn eval(&self, q: PointC2) -> PointC2 {
        PointC2::new(self.numeric.comps[0].eval(q), self.numeric.comps[1].eval(q))
    }

    /// `X1(q)`, the real view of `V(q)`.
    pub fn x1(&self, q: PointC2) -> Real4 {
        self.eval(q).to_real()
    }

    /// `X2(q) = J·X1(q)`, the real view of `iV(q)`.
    pub fn x2(&self, q: PointC2) -> Real4 {
        j4(&self.x1(q))
    }

    /// Real Jacobian of `X1` at `q`, from the symbolic partials.
    pub fn jacobian_x1(&self, q: PointC2) -> Jacobian4 {
        let mut jac = [[0.0; 4]; 4];
        for (k, partials) in self.numeric.partials.iter().enumerate() {
            for (c, p) in partials.iter().enumerate() {
                let v: Complex64 = p.eval(q);
                jac[2 * k][c] = v.re;
                jac[2 * k + 1][c] = v.im;
            }
        }
        jac
    }

    /// Real Jacobian of `X2 = J·X1`.
    pub fn jacobian_x2(&self, q: PointC2) -> Jacobian4 {
        let a = self.jacobian_x1(q);
        [a[1].map(|v| -v), a[0], a[3].map(|v| -v), a[2]]
    }

    pub fn is_nonvanishing_at(&self, q: PointC2, thr: &Thresholds) -> bool {
        self.eval(q).norm() > thr.nonvanishing * math::powi(q.norm(), self.degree as i32)
    }
}

pub(crate) fn mat_vec(m: &Jacobian4, v: &Real4) -> Real4 {
    m.map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
}

/// `[A, B](p) = DB(p)·A(p) − DA(p)·B(p)` from values and Jacobians.
pub fn bracket_from_parts(a: &Real4, jac_a: &Jacobian4, b: &Real4, jac_b: &Jacobian4) -> Real4 {
    let db_a = mat_vec(jac_b, a);
    let da_b = mat_vec(jac_a, b);
    core::array::from_fn(|i| db_a[i] - da_b[i])
}

pub fn field_eval(v: &VectorFieldC2, q: PointC2) -> PointC2 {
    v.field_eval(q)
}

/// The two candidate fields `V1 = (−P_wz̄, P_zz̄)` and `V2 = (−P_ww̄, P_zw̄)`,
/// both of degree `deg(P) − 2`.
pub fn derive_candidate_fields(p: &WirtingerPoly) -> Result<(VectorFieldC2, VectorFieldC2)> {
    let h = complex_hessian(p)?;
    let deg = match p.homogeneity_degree()? {
        Degree::Homogeneous(d) => d,
        Degree::Inhomogeneous => return Err(Error::Inhomogeneous),
    };
    if deg < 2 {
        return Err(Error::DegreeTooLow(deg));
    }
    let [[pzzb, pwzb], [pzwb, pwwb]] = h.entries;
    let v1 = VectorFieldC2::new(-&pwzb, pzzb, deg - 2);
    let v2 = VectorFieldC2::new(-&pwwb, pzwb, deg - 2);
    Ok((v1, v2))
}

/// Picks `V1` if it does not vanish at `x`, else `V2`.
pub fn select_field(p: &WirtingerPoly, x: PointC2, thr: &Thresholds) -> Result<VectorFieldC2> {
    let (v1, v2) = derive_candidate_fields(p)?;
    if v1.is_nonvanishing_at(x, thr) {
        Ok(v1)
    } else if v2.is_nonvanishing_at(x, thr) {
        Ok(v2)
    } else {
        Err(Error::HessianVanishes)
    }
}

/// Whether `H_P · V` is identically zero (exact).
pub fn annihilation_check(p: &WirtingerPoly, v: &VectorFieldC2) -> Result<bool> {
    let h = complex_hessian(p)?;
    let [a, b] = h.mul_vec(v.components());
    Ok(a.is_zero() && b.is_zero())
}

/// `[X1, X2](p)` in real Cartesian coordinates.
pub fn lie_bracket_real(v: &VectorFieldC2, p: PointC2) -> Real4 {
    let x1 = v.x1(p);
    let x2 = j4(&x1);
    bracket_from_parts(&x1, &v.jacobian_x1(p), &x2, &v.jacobian_x2(p))
}

/// Norm of the part of `[X1, X2](p)` orthogonal to `span{X1(p), X2(p)}`.
pub fn bracket_transversal_component(v: &VectorFieldC2, p: PointC2) -> f64 {
    let x1 = v.x1(p);
    let x2 = j4(&x1);
    let b = lie_bracket_real(v, p);
    norm4(&linalg::orthogonal_part(&b, &[x1, x2]))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvolutivityCheck {
    pub pass: bool,
    /// Largest `σ_min / σ_max` of `[X1 | X2 | [X1,X2]]` over the samples.
    pub worst_residual: f64,
    /// Largest norm of the bracket component transversal to the distribution.
    pub worst_transversal: f64,
}

pub fn involutivity_check(
    v: &VectorFieldC2,
    samples: &[PointC2],
    tol: f64,
    thr: &Thresholds,
) -> Result<InvolutivityCheck> {
    let mut worst_residual = 0.0f64;
    let mut worst_transversal = 0.0f64;
    for &p in samples {
        if !v.is_nonvanishing_at(p, thr) {
            return Err(Error::RankDrop {
                norm: v.eval(p).norm(),
            });
        }
        let x1 = v.x1(p);
        let x2 = j4(&x1);
        let b = lie_bracket_real(v, p);
        let sv = linalg::singular_values(&[x1, x2, b]);
        worst_residual = worst_residual.max(sv[2] / sv[0]);
        worst_transversal = worst_transversal.max(norm4(&linalg::orthogonal_part(&b, &[x1, x2])));
    }
    Ok(InvolutivityCheck {
        pass: worst_residual <= tol,
        worst_residual,
        worst_transversal,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransversalityCheck {
    pub pass: bool,
    pub det_abs: f64,
}

/// `p` and `V(p)` must be C-linearly independent.
pub fn transversality_check(
    v: &VectorFieldC2,
    p: PointC2,
    thr: &Thresholds,
) -> TransversalityCheck {
    let vp = v.eval(p);
    let det_abs = p.det(vp).norm();
    TransversalityCheck {
        pass: det_abs > thr.transversality * p.norm() * vp.norm(),
        det_abs,
    }
}

/// Every monomial of both components has total degree `m` (exact).
pub fn homogeneity_check_field(v: &VectorFieldC2) -> bool {
    v.comps.iter().all(|c| c.is_homogeneous_of(v.degree))
}

/// Field samples around `x` used by the pipelines' involutivity check.
pub fn sample_ring(x: PointC2, radius: f64, count: usize) -> Vec<PointC2> {
    let r = radius * x.norm();
    let base = x.to_real();
    (0..count)
        .map(|k| {
            let t = k as f64 + 0.5;
            // quasi-random directions from irrational rotations
            let dir = [
                libm::sin(t * 1.618_033_988_749_895),
                libm::cos(t * 2.414_213_562_373_095),
                libm::sin(t * 3.302_775_637_731_995),
                libm::cos(t * 0.732_050_807_568_877),
            ];
            let n = norm4(&dir).max(1e-300);
            let scale = r * (k as f64 + 1.0) / count as f64;
            PointC2::from_real(core::array::from_fn(|i| base[i] + scale * dir[i] / n))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(e: [u32; 4], k: i64) -> WirtingerPoly {
        WirtingerPoly::monomial(e, k)
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn v_zw() -> VectorFieldC2 {
        VectorFieldC2::new(mono([1, 0, 0, 1], -1), mono([0, 0, 1, 1], 1), 2)
    }

    fn v_z4() -> VectorFieldC2 {
        VectorFieldC2::new(WirtingerPoly::zero(), mono([1, 1, 0, 0], 4), 2)
    }

    fn v_lin() -> VectorFieldC2 {
        VectorFieldC2::new(mono([1, 0, 0, 0], -1), mono([0, 0, 1, 0], 1), 1)
    }

    fn v_bad() -> VectorFieldC2 {
        VectorFieldC2::new(mono([0; 4], 1), mono([0, 1, 0, 0], 1), 1)
    }

    fn pzw() -> WirtingerPoly {
        mono([1, 1, 1, 1], 1)
    }

    fn pz4() -> WirtingerPoly {
        mono([2, 2, 0, 0], 1)
    }

    fn ball() -> WirtingerPoly {
        &mono([1, 1, 0, 0], 1) + &mono([0, 0, 1, 1], 1)
    }

    #[test]
    fn field_eval_examples() {
        assert_eq!(
            field_eval(&v_zw(), PointC2::real(1.0, 1.0)),
            PointC2::real(-1.0, 1.0)
        );
        assert_eq!(
            field_eval(&v_z4(), PointC2::real(1.0, 0.0)),
            PointC2::real(0.0, 4.0)
        );
        assert_eq!(field_eval(&v_zw(), PointC2::ZERO), PointC2::ZERO);
    }

    #[test]
    fn candidate_fields_examples() {
        let (v1, v2) = derive_candidate_fields(&pzw()).unwrap();
        assert_eq!(
            v1.components(),
            &[mono([1, 0, 0, 1], -1), mono([0, 0, 1, 1], 1)]
        );
        assert_eq!(
            v2.components(),
            &[mono([1, 1, 0, 0], -1), mono([0, 1, 1, 0], 1)]
        );
        assert_eq!(v1.degree(), 2);

        let (v1, v2) = derive_candidate_fields(&pz4()).unwrap();
        assert_eq!(
            v1.components(),
            &[WirtingerPoly::zero(), mono([1, 1, 0, 0], 4)]
        );
        assert!(v2.comp_z().is_zero() && v2.comp_w().is_zero());

        let (v1, v2) = derive_candidate_fields(&ball()).unwrap();
        assert_eq!(v1.components(), &[WirtingerPoly::zero(), mono([0; 4], 1)]);
        assert_eq!(v2.components(), &[mono([0; 4], -1), WirtingerPoly::zero()]);
        assert_eq!(v1.degree(), 0);

        assert_eq!(
            derive_candidate_fields(&mono([1, 0, 0, 0], 1)).unwrap_err(),
            Error::NotReal
        );
        let linear = &mono([1, 0, 0, 0], 1) + &mono([0, 1, 0, 0], 1);
        assert_eq!(
            derive_candidate_fields(&linear).unwrap_err(),
            Error::DegreeTooLow(1)
        );
    }

    #[test]
    fn select_field_examples() {
        let thr = Thresholds::default();
        let v = select_field(&pz4(), PointC2::real(1.0, 0.0), &thr).unwrap();
        assert_eq!(v, v_z4());
        let v = select_field(&pzw(), PointC2::real(1.0, 1.0), &thr).unwrap();
        assert_eq!(v, derive_candidate_fields(&pzw()).unwrap().0);
        assert_eq!(
            select_field(&pz4(), PointC2::real(0.0, 1.0), &thr).unwrap_err(),
            Error::HessianVanishes
        );
    }

    #[test]
    fn annihilation_examples() {
        let (v1, _) = derive_candidate_fields(&pzw()).unwrap();
        assert!(annihilation_check(&pzw(), &v1).unwrap());
        assert!(annihilation_check(&pz4(), &v_z4()).unwrap());
        let v = VectorFieldC2::new(WirtingerPoly::zero(), mono([0; 4], 1), 0);
        assert!(!annihilation_check(&ball(), &v).unwrap());
    }

    #[test]
    fn lie_bracket_examples() {
        let p = PointC2::new(c(1.0, 0.0), c(0.2, 0.0));
        assert_eq!(lie_bracket_real(&v_z4(), p), [0.0; 4]);
        let b = lie_bracket_real(&v_lin(), PointC2::real(1.0, 1.0));
        assert!(b.iter().all(|x| x.abs() < 1e-15), "{b:?}");
        let b = lie_bracket_real(&v_bad(), PointC2::real(0.0, 1.0));
        assert_eq!(b, [0.0, 0.0, 0.0, 2.0]);
    }

    #[test]
    fn involutivity_examples() {
        let thr = Thresholds::default();
        let samples = sample_ring(PointC2::real(1.0, 1.0), 0.05, 20);
        let r = involutivity_check(&v_zw(), &samples, 1e-10, &thr).unwrap();
        assert!(r.pass && r.worst_residual <= 1e-10, "{r:?}");

        let samples = sample_ring(PointC2::real(1.0, 0.3), 0.1, 10);
        assert!(
            involutivity_check(&v_z4(), &samples, 1e-10, &thr)
                .unwrap()
                .pass
        );

        let r = involutivity_check(&v_bad(), &[PointC2::real(0.0, 1.0)], 1e-10, &thr).unwrap();
        assert!(!r.pass);
        assert!((r.worst_transversal - 2.0).abs() < 1e-12);

        let err = involutivity_check(&v_z4(), &[PointC2::real(0.0, 1.0)], 1e-10, &thr);
        assert!(matches!(err, Err(Error::RankDrop { .. })));
    }

    #[test]
    fn transversality_examples() {
        let thr = Thresholds::default();
        let t = transversality_check(&v_z4(), PointC2::real(1.0, 0.0), &thr);
        assert!(t.pass && t.det_abs == 4.0);
        let t = transversality_check(&v_zw(), PointC2::real(1.0, 1.0), &thr);
        assert!(t.pass && t.det_abs == 2.0);
        let radial = VectorFieldC2::new(mono([1, 0, 0, 0], 1), mono([0, 0, 1, 0], 1), 1);
        let t = transversality_check(&radial, PointC2::new(c(0.3, 1.0), c(-2.0, 0.5)), &thr);
        assert!(!t.pass && t.det_abs == 0.0);
    }

    #[test]
    fn homogeneity_examples() {
        assert!(homogeneity_check_field(&v_zw()));
        assert!(homogeneity_check_field(&v_lin()));
        let bad = VectorFieldC2::new(mono([1, 0, 0, 0], 1), mono([0; 4], 1), 1);
        assert!(!homogeneity_check_field(&bad));
    }

    #[test]
    fn x2_jacobian_is_j_times_x1_jacobian() {
        let v = v_zw();
        let q = PointC2::new(c(0.9, 0.2), c(1.1, -0.3));
        let a = v.jacobian_x1(q);
        let b = v.jacobian_x2(q);
        for col in 0..4 {
            let column = [a[0][col], a[1][col], a[2][col], a[3][col]];
            let jc = j4(&column);
            for r in 0..4 {
                assert_eq!(b[r][col], jc[r]);
            }
        }
    }

    #[test]
    fn symbolic_jacobian_matches_finite_differences() {
        let v = VectorFieldC2::new(mono([1, 1, 0, 0], -1), mono([0, 1, 1, 0], 1), 2);
        let q = PointC2::new(c(0.7, -0.4), c(1.2, 0.5));
        let jac = v.jacobian_x1(q);
        let h = 1e-6;
        for col in 0..4 {
            let mut e = [0.0; 4];
            e[col] = h;
            let plus = v.x1(PointC2::from_real(core::array::from_fn(|i| {
                q.to_real()[i] + e[i]
            })));
            let minus = v.x1(PointC2::from_real(core::array::from_fn(|i| {
                q.to_real()[i] - e[i]
            })));
            for r in 0..4 {
                let fd = (plus[r] - minus[r]) / (2.0 * h);
                assert!((fd - jac[r][col]).abs() < 1e-8, "r={r} c={col}");
            }
        }
    }
}
