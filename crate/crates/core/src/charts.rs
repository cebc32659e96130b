//! Leaf-space chart `u` around a base point `x`.
//!
//! A query point is moved along its leaf (by the flows of `X1`, `X2`) until it
//! hits the affine transversal `x + span{n1, n2}`; its coordinates there are
//! `u(q)`. Leaves are exactly the level sets of `u` inside the chart.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fields::{transversality_check, Thresholds, VectorFieldC2};
use crate::flows::{leaf_flow_map, FlowConfig};
use crate::linalg;
use crate::math;
use crate::point::{axpy4, dot4, j4, norm4, PointC2, Real4};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartConfig {
    /// Chart domain is the ball of radius `radius · |x|` around `x`; must be in `(0, 1)`.
    pub radius: f64,
    /// Adaptive shrinking stops (with an error) below this radius.
    pub min_radius: f64,
    /// Projection converges when the tangential residual is at most `newton_tol · |x|`.
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    /// Finite-difference step in flow time, relative to `|x| / |V(x)|`.
    pub fd_step: f64,
    pub flow: FlowConfig,
    pub thresholds: Thresholds,
}

impl Default for ChartConfig {
    fn default() -> Self {
        ChartConfig {
            radius: 0.4,
            min_radius: 1e-4,
            newton_tol: 1e-11,
            newton_max_iter: 40,
            fd_step: 1e-6,
            flow: FlowConfig::default(),
            thresholds: Thresholds::default(),
        }
    }
}

/// Frame `(e1, e2, n1, n2)` and solver settings of a leaf chart at `x`.
#[derive(Debug, Clone)]
pub struct LeafChart {
    field: VectorFieldC2,
    base: PointC2,
    frame: [Real4; 4],
    radius: f64,
    time_scale: f64,
    newton_tol: f64,
    newton_max_iter: usize,
    fd_step: f64,
    flow: FlowConfig,
}

const MAX_HALVINGS: usize = 8;

impl LeafChart {
    pub fn field(&self) -> &VectorFieldC2 {
        &self.field
    }

    pub fn base(&self) -> PointC2 {
        self.base
    }

    /// `[e1, e2, n1, n2]`: leaf tangent at `x` first, then the transversal.
    pub fn frame(&self) -> &[Real4; 4] {
        &self.frame
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn flow_config(&self) -> &FlowConfig {
        &self.flow
    }

    pub fn newton_tol(&self) -> f64 {
        self.newton_tol
    }

    pub fn newton_max_iter(&self) -> usize {
        self.newton_max_iter
    }

    /// Typical flow time needed to move a distance `|x|`.
    pub fn time_scale(&self) -> f64 {
        self.time_scale
    }

    pub fn contains(&self, q: PointC2) -> bool {
        (q - self.base).norm() <= self.radius * self.base.norm() * (1.0 + 1e-12)
    }

    /// Same chart with a different domain radius.
    pub fn with_radius(&self, radius: f64) -> Self {
        LeafChart {
            radius,
            ..self.clone()
        }
    }

    fn tangential_residual(&self, q: PointC2, s: [f64; 2]) -> Result<([f64; 2], PointC2)> {
        let p = leaf_flow_map(&self.field, q, s[0], s[1], &self.flow)?;
        let d = (p - self.base).to_real();
        Ok(([dot4(&d, &self.frame[0]), dot4(&d, &self.frame[1])], p))
    }

    /// Point where the leaf of `q` meets the transversal, and the flow times used.
    pub fn project(&self, q: PointC2) -> Result<(PointC2, [f64; 2])> {
        if !self.contains(q) {
            return Err(Error::OutsideChart);
        }
        let tol = self.newton_tol * self.base.norm();
        let h = self.fd_step * self.time_scale;
        let mut s = [0.0, 0.0];
        let (mut r, mut p) = self.tangential_residual(q, s)?;
        for _ in 0..self.newton_max_iter {
            let rn = norm2(&r);
            if rn <= tol {
                return Ok((p, s));
            }
            let mut jac = [[0.0; 2]; 2];
            for k in 0..2 {
                let mut sk = s;
                sk[k] += h;
                let (rk, _) = self
                    .tangential_residual(q, sk)
                    .map_err(|_| Error::LeafProjectionFailed)?;
                jac[0][k] = (rk[0] - r[0]) / h;
                jac[1][k] = (rk[1] - r[1]) / h;
            }
            let step = linalg::solve2(jac, [-r[0], -r[1]]).ok_or(Error::LeafProjectionFailed)?;
            let mut lambda = 1.0;
            let mut accepted = false;
            for _ in 0..=MAX_HALVINGS {
                let trial = [s[0] + lambda * step[0], s[1] + lambda * step[1]];
                if let Ok((rt, pt)) = self.tangential_residual(q, trial) {
                    if norm2(&rt) < rn {
                        s = trial;
                        r = rt;
                        p = pt;
                        accepted = true;
                        break;
                    }
                }
                lambda *= 0.5;
            }
            if !accepted {
                // no further decrease: accept only if we are already at the noise floor
                if rn <= 10.0 * tol {
                    return Ok((p, s));
                }
                return Err(Error::LeafProjectionFailed);
            }
        }
        if norm2(&r) <= tol {
            Ok((p, s))
        } else {
            Err(Error::LeafProjectionFailed)
        }
    }

    /// `u(q)`: transversal coordinates of the leaf of `q`; `u(x) = (0, 0)`.
    pub fn u_eval(&self, q: PointC2) -> Result<[f64; 2]> {
        let (p, _) = self.project(q)?;
        let d = (p - self.base).to_real();
        Ok([dot4(&d, &self.frame[2]), dot4(&d, &self.frame[3])])
    }

    /// Central-difference Jacobian of `u` at `q` (rows `∇u1`, `∇u2`), step `h`.
    pub fn u_jacobian(&self, q: PointC2, h: f64) -> Result<[Real4; 2]> {
        let mut rows = [[0.0; 4]; 2];
        let base = q.to_real();
        for c in 0..4 {
            let mut e = [0.0; 4];
            e[c] = 1.0;
            let plus = self.u_eval(PointC2::from_real(axpy4(h, &e, &base)))?;
            let minus = self.u_eval(PointC2::from_real(axpy4(-h, &e, &base)))?;
            rows[0][c] = (plus[0] - minus[0]) / (2.0 * h);
            rows[1][c] = (plus[1] - minus[1]) / (2.0 * h);
        }
        Ok(rows)
    }

    fn probes(&self) -> Vec<PointC2> {
        let r = 0.9 * self.radius * self.base.norm();
        let x = self.base.to_real();
        let mut out = Vec::with_capacity(10);
        for dir in &self.frame {
            out.push(PointC2::from_real(axpy4(r, dir, &x)));
            out.push(PointC2::from_real(axpy4(-r, dir, &x)));
        }
        for t in [1.0 - 0.9 * self.radius, 1.0 + 0.9 * self.radius] {
            out.push(t * self.base);
        }
        out
    }
}

fn norm2(v: &[f64; 2]) -> f64 {
    math::hypot(v[0], v[1])
}

/// Builds the frame at `x` and shrinks the radius until leaf projection works
/// at probe points near the boundary of the domain.
pub fn build_chart(v: &VectorFieldC2, x: PointC2, cfg: &ChartConfig) -> Result<LeafChart> {
    cfg.flow.validate()?;
    if cfg.radius.is_nan()
        || cfg.radius <= 0.0
        || cfg.radius >= 1.0
        || cfg.min_radius.is_nan()
        || cfg.min_radius <= 0.0
    {
        return Err(Error::InvalidConfig(
            "chart radius must lie in (0, 1)".into(),
        ));
    }
    if !v.is_nonvanishing_at(x, &cfg.thresholds) {
        return Err(Error::RankDrop {
            norm: v.eval(x).norm(),
        });
    }
    let t = transversality_check(v, x, &cfg.thresholds);
    if !t.pass {
        return Err(Error::NotTransversal { det: t.det_abs });
    }
    let x1 = v.x1(x);
    let x2 = j4(&x1);
    let tangent = linalg::orthonormalize(&[x1, x2], 1e-8);
    if tangent.len() != 2 {
        return Err(Error::RankDrop { norm: norm4(&x1) });
    }
    let mut candidates = tangent.clone();
    for k in 0..4 {
        let mut e = [0.0; 4];
        e[k] = 1.0;
        candidates.push(e);
    }
    let full = linalg::orthonormalize(&candidates, 1e-6);
    debug_assert_eq!(full.len(), 4);
    let frame = [full[0], full[1], full[2], full[3]];

    let mut chart = LeafChart {
        field: v.clone(),
        base: x,
        frame,
        radius: cfg.radius,
        time_scale: x.norm() / v.eval(x).norm(),
        newton_tol: cfg.newton_tol,
        newton_max_iter: cfg.newton_max_iter,
        fd_step: cfg.fd_step,
        flow: cfg.flow,
    };
    loop {
        if chart.probes().into_iter().all(|p| chart.u_eval(p).is_ok()) {
            return Ok(chart);
        }
        chart.radius *= 0.5;
        if chart.radius < cfg.min_radius {
            return Err(Error::ChartCollapsed(cfg.min_radius));
        }
    }
}

/// `u(q)` for a built chart.
pub fn u_eval(chart: &LeafChart, q: PointC2) -> Result<[f64; 2]> {
    chart.u_eval(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flows::leaf_flow_map;
    use crate::wirtinger::WirtingerPoly;
    use num_complex::Complex64;

    fn mono(e: [u32; 4], k: i64) -> WirtingerPoly {
        WirtingerPoly::monomial(e, k)
    }

    fn v_z4() -> VectorFieldC2 {
        VectorFieldC2::new(WirtingerPoly::zero(), mono([1, 1, 0, 0], 4), 2)
    }

    fn v_zw() -> VectorFieldC2 {
        VectorFieldC2::new(mono([1, 0, 0, 1], -1), mono([0, 0, 1, 1], 1), 2)
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn vertical_field_frame() {
        let chart = build_chart(&v_z4(), PointC2::real(1.0, 0.0), &ChartConfig::default()).unwrap();
        let f = chart.frame();
        assert_eq!(f[0], [0.0, 0.0, 1.0, 0.0]);
        assert_eq!(f[1], [0.0, 0.0, 0.0, 1.0]);
        assert_eq!(f[2], [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(f[3], [0.0, 1.0, 0.0, 0.0]);
        assert_eq!(chart.radius(), 0.4);
    }

    #[test]
    fn frame_is_orthonormal_and_spans_tangent() {
        for (v, x) in [
            (v_z4(), PointC2::real(1.0, 0.0)),
            (v_zw(), PointC2::real(1.0, 1.0)),
            (v_zw(), PointC2::new(c(0.8, 0.3), c(1.1, -0.4))),
        ] {
            let chart = build_chart(&v, x, &ChartConfig::default()).unwrap();
            let f = chart.frame();
            for i in 0..4 {
                for j in 0..4 {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((dot4(&f[i], &f[j]) - expect).abs() < 1e-12);
                }
            }
            let x1 = v.x1(x);
            for e in &f[..2] {
                let off = linalg::orthogonal_part(e, &[x1, j4(&x1)]);
                assert!(norm4(&off) < 1e-12);
            }
        }
    }

    #[test]
    fn radial_field_is_rejected() {
        let radial = VectorFieldC2::new(mono([1, 0, 0, 0], 1), mono([0, 0, 1, 0], 1), 1);
        let err = build_chart(&radial, PointC2::real(1.0, 0.0), &ChartConfig::default());
        assert!(matches!(err, Err(Error::NotTransversal { .. })));
    }

    #[test]
    fn u_examples() {
        let chart = build_chart(&v_z4(), PointC2::real(1.0, 0.0), &ChartConfig::default()).unwrap();
        assert_eq!(chart.u_eval(PointC2::real(1.0, 0.0)).unwrap(), [0.0, 0.0]);
        let u = chart
            .u_eval(PointC2::new(c(1.2, 0.0), c(0.3, -0.1)))
            .unwrap();
        assert!((u[0] - 0.2).abs() < 1e-12 && u[1].abs() < 1e-12, "{u:?}");

        let chart = build_chart(&v_zw(), PointC2::real(1.0, 1.0), &ChartConfig::default()).unwrap();
        let u = chart.u_eval(PointC2::real(1.1, 1.0 / 1.1)).unwrap();
        assert!(u[0].abs() <= 1e-8 && u[1].abs() <= 1e-8, "{u:?}");
    }

    #[test]
    fn outside_domain_is_rejected() {
        let chart = build_chart(&v_z4(), PointC2::real(1.0, 0.0), &ChartConfig::default()).unwrap();
        assert_eq!(
            chart.u_eval(PointC2::real(2.0, 0.0)),
            Err(Error::OutsideChart)
        );
    }

    #[test]
    fn u_is_constant_on_leaves() {
        let chart = build_chart(&v_zw(), PointC2::real(1.0, 1.0), &ChartConfig::default()).unwrap();
        let q = PointC2::new(c(1.03, -0.02), c(0.97, 0.04));
        let uq = chart.u_eval(q).unwrap();
        for (s1, s2) in [(0.02, 0.0), (-0.03, 0.01), (0.01, -0.02)] {
            let q2 = leaf_flow_map(chart.field(), q, s1, s2, chart.flow_config()).unwrap();
            let u2 = chart.u_eval(q2).unwrap();
            assert!(math::hypot(u2[0] - uq[0], u2[1] - uq[1]) <= 1e-7);
        }
    }

    #[test]
    fn invalid_radius_is_rejected() {
        let bad = ChartConfig {
            radius: 1.5,
            ..ChartConfig::default()
        };
        assert!(matches!(
            build_chart(&v_z4(), PointC2::real(1.0, 0.0), &bad),
            Err(Error::InvalidConfig(_))
        ));
    }
}
