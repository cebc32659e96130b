//! The gauge `g(q) = T(q)^-n`.
//!
//! `T(q)` is the scaling factor that brings `q` back to the leaf-space curve
//! `{τ : <τ, d> = 0}`, where `d` is the leaf-space velocity of the radial ray
//! through `x`. The zero set of `q ↦ <u(q), d>` is a union of leaves, so `T` and
//! `g` are leaf-constant, and `T(sq)·s = T(q)` makes `g` homogeneous of degree `n`.

use alloc::vec::Vec;

use crate::charts::LeafChart;
use crate::error::{Error, Result};
use crate::math;
use crate::point::{axpy4, PointC2};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaugeConfig {
    /// Homogeneity degree `n` of `g`.
    pub degree: u32,
    /// `T` is searched in `(1 - delta, 1 + delta)`.
    pub delta: f64,
    /// Required `|M(q, T(q))|`.
    pub root_tol: f64,
    /// Step for the scaling-velocity difference quotient.
    pub velocity_step: f64,
    pub max_iter: usize,
}

impl Default for GaugeConfig {
    fn default() -> Self {
        GaugeConfig {
            degree: 2,
            delta: 0.25,
            root_tol: 1e-11,
            velocity_step: 1e-4,
            max_iter: 60,
        }
    }
}

/// Velocity norms at or below this mean the ray is tangent to the leaf.
pub const MIN_VELOCITY: f64 = 1e-4;
/// `|dM/dt|` below this is treated as a degenerate implicit equation.
pub const MIN_SLOPE: f64 = 1e-10;

/// `d/dt u(t·x)` at `t = 1`: central difference with one Richardson level.
pub fn scaling_velocity(chart: &LeafChart, h: f64) -> Result<[f64; 2]> {
    let x = chart.base();
    let central = |h: f64| -> Result<[f64; 2]> {
        let plus = chart.u_eval((1.0 + h) * x)?;
        let minus = chart.u_eval((1.0 - h) * x)?;
        Ok([
            (plus[0] - minus[0]) / (2.0 * h),
            (plus[1] - minus[1]) / (2.0 * h),
        ])
    };
    let coarse = central(h)?;
    let fine = central(0.5 * h)?;
    let d = [
        (4.0 * fine[0] - coarse[0]) / 3.0,
        (4.0 * fine[1] - coarse[1]) / 3.0,
    ];
    let norm = math::hypot(d[0], d[1]);
    if norm <= MIN_VELOCITY {
        return Err(Error::RadialTangent(norm));
    }
    Ok(d)
}

#[derive(Debug, Clone)]
pub struct GaugeFunction {
    chart: LeafChart,
    velocity: [f64; 2],
    degree: u32,
    delta: f64,
    root_tol: f64,
    max_iter: usize,
}

impl GaugeFunction {
    pub fn new(chart: LeafChart, cfg: &GaugeConfig) -> Result<Self> {
        let velocity = scaling_velocity(&chart, cfg.velocity_step)?;
        GaugeFunction::with_velocity(chart, velocity, cfg)
    }

    /// Gauge with a given (previously computed) leaf-space velocity.
    pub fn with_velocity(chart: LeafChart, velocity: [f64; 2], cfg: &GaugeConfig) -> Result<Self> {
        if cfg.degree == 0 {
            return Err(Error::InvalidConfig("gauge degree must be positive".into()));
        }
        if !(cfg.delta > 0.0 && cfg.delta < 1.0) {
            return Err(Error::InvalidConfig("delta must lie in (0, 1)".into()));
        }
        if cfg.root_tol.is_nan() || cfg.root_tol <= 0.0 {
            return Err(Error::InvalidConfig(
                "root tolerance must be positive".into(),
            ));
        }
        let norm = math::hypot(velocity[0], velocity[1]);
        if norm.is_nan() || norm <= MIN_VELOCITY {
            return Err(Error::RadialTangent(norm));
        }
        Ok(GaugeFunction {
            chart,
            velocity,
            degree: cfg.degree,
            delta: cfg.delta,
            root_tol: cfg.root_tol,
            max_iter: cfg.max_iter.max(1),
        })
    }

    pub fn chart(&self) -> &LeafChart {
        &self.chart
    }

    pub fn velocity(&self) -> [f64; 2] {
        self.velocity
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn root_tol(&self) -> f64 {
        self.root_tol
    }

    /// `M(q, t) = <u(t·q), d>`; `u(x) = 0` so no base value is subtracted.
    pub fn m_func(&self, q: PointC2, t: f64) -> Result<f64> {
        let u = self.chart.u_eval(t * q)?;
        Ok(u[0] * self.velocity[0] + u[1] * self.velocity[1])
    }

    /// Scalings `t` in `(1 - δ, 1 + δ)` with `t·q` inside the chart.
    pub fn admissible_interval(&self, q: PointC2) -> Result<(f64, f64)> {
        let x = self.chart.base();
        let r = self.chart.radius() * x.norm();
        let qq = q.norm_sqr();
        if qq == 0.0 {
            return Err(Error::OutsideGaugeDomain);
        }
        let qx = q.rdot(x);
        let disc = qx * qx - qq * (x.norm_sqr() - r * r);
        if disc <= 0.0 {
            return Err(Error::OutsideGaugeDomain);
        }
        let sq = math::sqrt(disc);
        let shrink = 1.0 - 1e-12;
        let mid = qx / qq;
        let half = sq / qq * shrink;
        let lo = (mid - half).max(1.0 - self.delta);
        let hi = (mid + half).min(1.0 + self.delta);
        if lo >= hi {
            return Err(Error::OutsideGaugeDomain);
        }
        Ok((lo, hi))
    }

    /// The unique root `T(q)` of `t ↦ M(q, t)` in the admissible interval, by
    /// Newton with a finite-difference slope, falling back to bisection.
    pub fn solve_t(&self, q: PointC2) -> Result<f64> {
        let (lo, hi) = self.admissible_interval(q)?;
        let m = |t: f64| self.m_func(q, t);
        let mut t = 1.0f64.clamp(lo, hi);
        let mut f = m(t)?;
        // (a, f(a), b, f(b)) with a sign change
        let mut bracket: Option<(f64, f64, f64, f64)> = None;
        let ensure_bracket = |t: f64, f: f64| -> Result<(f64, f64, f64, f64)> {
            let f_lo = m(lo).map_err(|_| Error::OutsideGaugeDomain)?;
            if f_lo * f <= 0.0 {
                return Ok((lo, f_lo, t, f));
            }
            let f_hi = m(hi).map_err(|_| Error::OutsideGaugeDomain)?;
            if f * f_hi <= 0.0 {
                return Ok((t, f, hi, f_hi));
            }
            Err(Error::OutsideGaugeDomain)
        };
        for _ in 0..self.max_iter {
            if f.abs() <= self.root_tol {
                return Ok(t);
            }
            let h = 1e-6;
            let slope = if t + h < hi && t - h > lo {
                (m(t + h)? - m(t - h)?) / (2.0 * h)
            } else if t + h < hi {
                (m(t + h)? - f) / h
            } else {
                (f - m(t - h)?) / h
            };
            if slope.abs() < MIN_SLOPE && bracket.is_none() {
                return Err(Error::DegenerateImplicit(slope));
            }
            let (a, b) = bracket.map_or((lo, hi), |(a, _, b, _)| (a, b));
            let mut next = if slope.abs() >= MIN_SLOPE {
                t - f / slope
            } else {
                f64::NAN
            };
            if !(next > a && next < b) {
                let br = match bracket {
                    Some(br) => br,
                    None => ensure_bracket(t, f)?,
                };
                bracket = Some(br);
                next = 0.5 * (br.0 + br.2);
            }
            let f_next = m(next)?;
            match bracket.as_mut() {
                Some(br) => {
                    if f_next * br.1 > 0.0 {
                        *br = (next, f_next, br.2, br.3);
                    } else {
                        *br = (br.0, br.1, next, f_next);
                    }
                }
                None if f_next * f < 0.0 => {
                    bracket = Some(if next < t {
                        (next, f_next, t, f)
                    } else {
                        (t, f, next, f_next)
                    });
                }
                None => {}
            }
            if f_next.abs() > 0.5 * f.abs() && bracket.is_none() {
                bracket = Some(ensure_bracket(next, f_next)?);
            }
            t = next;
            f = f_next;
        }
        if f.abs() <= self.root_tol {
            Ok(t)
        } else {
            Err(Error::RootNotConverged)
        }
    }

    /// `g(q) = T(q)^-n > 0`.
    pub fn gauge_eval(&self, q: PointC2) -> Result<f64> {
        let t = self.solve_t(q)?;
        Ok(math::powi(t, -(self.degree as i32)))
    }

    /// `T` and `g` on a `k × k` grid spanning `x + s·(α n1 + β n2)`, `α, β ∈ [-1, 1]`,
    /// with `s = span · |x|`. Points where the gauge fails are omitted.
    pub fn sample_grid(&self, k: usize, span: f64) -> Vec<GridSample> {
        let x = self.chart.base();
        let s = span * x.norm();
        let frame = self.chart.frame();
        let at = |i: usize| {
            if k <= 1 {
                0.0
            } else {
                -1.0 + 2.0 * i as f64 / (k - 1) as f64
            }
        };
        let mut out = Vec::with_capacity(k * k);
        for i in 0..k {
            for j in 0..k {
                let p = axpy4(s * at(i), &frame[2], &x.to_real());
                let q = PointC2::from_real(axpy4(s * at(j), &frame[3], &p));
                if let Ok(t) = self.solve_t(q) {
                    out.push(GridSample {
                        point: q,
                        t,
                        g: math::powi(t, -(self.degree as i32)),
                    });
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSample {
    pub point: PointC2,
    pub t: f64,
    pub g: f64,
}

pub fn m_func(g: &GaugeFunction, q: PointC2, t: f64) -> Result<f64> {
    g.m_func(q, t)
}

pub fn solve_t(g: &GaugeFunction, q: PointC2) -> Result<f64> {
    g.solve_t(q)
}

pub fn gauge_eval(g: &GaugeFunction, q: PointC2) -> Result<f64> {
    g.gauge_eval(q)
}
