//! Real flows of `X1` (the real view of `V`) and `X2` (of `iV`).
//!
//! Integration uses the Dormand–Prince 5(4) embedded pair with FSAL and the
//! usual mixed absolute/relative error control.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fields::VectorFieldC2;
use crate::math;
use crate::point::{j4, PointC2, Real4};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_step: f64,
    pub max_steps: usize,
    /// Integration aborts when `|V(q)| <= rank_threshold · |q|^m`.
    pub rank_threshold: f64,
}

impl Default for FlowConfig {
    fn default() -> Self {
        FlowConfig {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_step: 0.1,
            max_steps: 100_000,
            rank_threshold: 1e-8,
        }
    }
}

impl FlowConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            self.abs_tol,
            self.rel_tol,
            self.max_step,
            self.rank_threshold,
        ]
        .iter()
        .all(|v| *v > 0.0 && v.is_finite());
        if !positive || self.max_steps == 0 {
            return Err(Error::InvalidConfig(
                "flow tolerances and step limits must be positive".into(),
            ));
        }
        Ok(())
    }
}

// autonomous right-hand side: the stage nodes c_i are not needed
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// fifth-order weights minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

fn comb(y: &Real4, h: f64, terms: &[(f64, &Real4)]) -> Real4 {
    core::array::from_fn(|i| y[i] + h * terms.iter().map(|(c, k)| c * k[i]).sum::<f64>())
}

struct Rhs<'a> {
    field: &'a VectorFieldC2,
    a: f64,
    b: f64,
    rank_threshold: f64,
}

impl Rhs<'_> {
    fn eval(&self, y: &Real4) -> Real4 {
        let x1 = self.field.x1(PointC2::from_real(*y));
        let x2 = j4(&x1);
        core::array::from_fn(|i| self.a * x1[i] + self.b * x2[i])
    }

    fn check_rank(&self, y: &Real4) -> Result<()> {
        let q = PointC2::from_real(*y);
        let norm = self.field.eval(q).norm();
        if norm <= self.rank_threshold * math::powi(q.norm(), self.field.degree() as i32) {
            return Err(Error::RankDrop { norm });
        }
        Ok(())
    }
}

fn weighted_rms(v: &Real4, y0: &Real4, y1: &Real4, cfg: &FlowConfig) -> f64 {
    let sum: f64 = (0..4)
        .map(|i| {
            let sc = cfg.abs_tol + cfg.rel_tol * y0[i].abs().max(y1[i].abs());
            (v[i] / sc) * (v[i] / sc)
        })
        .sum();
    math::sqrt(sum / 4.0)
}

/// Solution at time `s` of `q' = a·X1(q) + b·X2(q)` starting from `q0`.
pub fn integrate_flow(
    v: &VectorFieldC2,
    coeffs: (f64, f64),
    s: f64,
    q0: PointC2,
    cfg: &FlowConfig,
) -> Result<PointC2> {
    if s == 0.0 || (coeffs.0 == 0.0 && coeffs.1 == 0.0) {
        return Ok(q0);
    }
    if !s.is_finite() || !q0.is_finite() {
        return Err(Error::NonFinite);
    }
    let rhs = Rhs {
        field: v,
        a: coeffs.0,
        b: coeffs.1,
        rank_threshold: cfg.rank_threshold,
    };
    let dir = s.signum();
    let total = s.abs();
    let mut y = q0.to_real();
    rhs.check_rank(&y)?;
    let mut k1 = rhs.eval(&y);

    // initial step from the scale of the state and its derivative
    let d0 = weighted_rms(&y, &y, &y, cfg);
    let d1 = weighted_rms(&k1, &y, &y, cfg);
    let mut h = if d0 < 1e-5 || d1 < 1e-5 {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    h = h.min(cfg.max_step).min(total);

    let mut t = 0.0;
    let mut steps = 0;
    let mut rejected_last = false;
    while t < total {
        if steps >= cfg.max_steps {
            return Err(Error::StepLimit(cfg.max_steps));
        }
        steps += 1;
        let last = t + h >= total * (1.0 - 1e-14);
        if last {
            h = total - t;
        }
        let hs = dir * h;
        let k2 = rhs.eval(&comb(&y, hs, &[(A21, &k1)]));
        let k3 = rhs.eval(&comb(&y, hs, &[(A31, &k1), (A32, &k2)]));
        let k4 = rhs.eval(&comb(&y, hs, &[(A41, &k1), (A42, &k2), (A43, &k3)]));
        let k5 = rhs.eval(&comb(
            &y,
            hs,
            &[(A51, &k1), (A52, &k2), (A53, &k3), (A54, &k4)],
        ));
        let k6 = rhs.eval(&comb(
            &y,
            hs,
            &[(A61, &k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
        ));
        let y_new = comb(
            &y,
            hs,
            &[(A71, &k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
        );
        let k7 = rhs.eval(&y_new);
        let err_vec: Real4 = core::array::from_fn(|i| {
            hs * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i])
        });
        if !y_new.iter().all(|c| c.is_finite()) {
            return Err(Error::NonFinite);
        }
        let err = weighted_rms(&err_vec, &y, &y_new, cfg);
        if err <= 1.0 {
            t = if last { total } else { t + h };
            y = y_new;
            k1 = k7;
            rhs.check_rank(&y)?;
            let grow = if err == 0.0 {
                5.0
            } else {
                (0.9 * math::pow(err, -0.2)).clamp(0.2, 5.0)
            };
            let grow = if rejected_last { grow.min(1.0) } else { grow };
            h = (h * grow).min(cfg.max_step);
            rejected_last = false;
        } else {
            h *= (0.9 * math::pow(err, -0.2)).clamp(0.2, 1.0);
            rejected_last = true;
            if h <= 1e-15 * total.max(1.0) {
                return Err(Error::StepLimit(steps));
            }
        }
    }
    Ok(PointC2::from_real(y))
}

/// Flow along `X1` for time `s1`, then along `X2` for time `s2`.
pub fn leaf_flow_map(
    v: &VectorFieldC2,
    q: PointC2,
    s1: f64,
    s2: f64,
    cfg: &FlowConfig,
) -> Result<PointC2> {
    let mid = integrate_flow(v, (1.0, 0.0), s1, q, cfg)?;
    integrate_flow(v, (0.0, 1.0), s2, mid, cfg)
}

/// [`leaf_flow_map`] at every grid point, in grid order.
pub fn trace_leaf(
    v: &VectorFieldC2,
    q: PointC2,
    grid: &[(f64, f64)],
    cfg: &FlowConfig,
) -> Result<Vec<PointC2>> {
    grid.iter()
        .map(|&(s1, s2)| leaf_flow_map(v, q, s1, s2, cfg))
        .collect()
}

/// `k × k` grid of flow times on `[-span, span]^2`, `s1` varying slowest.
pub fn square_grid(k: usize, span: f64) -> Vec<(f64, f64)> {
    let at = |i: usize| {
        if k <= 1 {
            0.0
        } else {
            -span + 2.0 * span * i as f64 / (k - 1) as f64
        }
    };
    (0..k)
        .flat_map(|i| (0..k).map(move |j| (at(i), at(j))))
        .collect()
}
