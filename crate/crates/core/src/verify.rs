//! Residual checks for the chart and the gauge, collected into a
//! [`VerificationReport`].
//!
//! Every check draws its samples from a ChaCha stream seeded by
//! `VerifyConfig::seed` plus a per-check salt, so reports are reproducible and
//! independent of the order in which checks run.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::charts::LeafChart;
use crate::error::{Error, Result};
use crate::flows::leaf_flow_map;
use crate::gauge::GaugeFunction;
use crate::linalg;
use crate::math;
use crate::point::{axpy4, dot4, j4, norm4, PointC2, Real4};

pub const DEFAULT_SEED: u64 = 0x5EED;

/// Tolerances of the individual checks.
pub mod tol {
    pub const LEAF_CONSTANCY: f64 = 1e-6;
    pub const LEAF_DERIVATIVE: f64 = 1e-4;
    pub const HOMOGENEITY: f64 = 1e-6;
    pub const EULER: f64 = 1e-4;
    pub const T_SCALING: f64 = 1e-8;
    pub const RAY_CONSISTENCY: f64 = 1e-5;
    pub const CHART_LEAF_CONSTANCY: f64 = 1e-7;
    pub const CHART_SUBMERSION: f64 = 1e-3;
    pub const CHART_ORTHOGONALITY: f64 = 1e-6;
    pub const CHART_LEAF_SCALING: f64 = 1e-6;
    /// Largest `|u(a) - u(b)|` for `(a, b)` to count as a leaf pair.
    pub const LEAF_PAIR: f64 = 1e-9;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub samples: usize,
    /// Samples are drawn uniformly from the ball of radius `sample_radius · |x|` around `x`.
    pub sample_radius: f64,
    /// Leaf moves travel at most about `move_scale · sample_radius · |x|`.
    pub move_scale: f64,
    /// Scalings used by the homogeneity and T-scaling checks.
    pub t_range: (f64, f64),
    /// Finite-difference step relative to `|x|` for gradients of `g`.
    pub fd_step: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: DEFAULT_SEED,
            samples: 50,
            sample_radius: 0.05,
            move_scale: 0.2,
            t_range: (0.92, 1.08),
            fd_step: 1e-5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    /// `value <= tolerance`.
    AtMost,
    /// `value >= tolerance`.
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub name: String,
    /// Worst residual (for [`Bound::AtMost`]) or smallest value (for [`Bound::AtLeast`]).
    pub value: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub pass: bool,
    pub samples: usize,
    pub skipped: usize,
}

impl ReportEntry {
    pub fn at_most(name: &str, value: f64, tolerance: f64, samples: usize, skipped: usize) -> Self {
        ReportEntry {
            name: name.to_string(),
            value,
            tolerance,
            bound: Bound::AtMost,
            pass: value <= tolerance,
            samples,
            skipped,
        }
    }

    pub fn at_least(
        name: &str,
        value: f64,
        tolerance: f64,
        samples: usize,
        skipped: usize,
    ) -> Self {
        ReportEntry {
            name: name.to_string(),
            value,
            tolerance,
            bound: Bound::AtLeast,
            pass: value >= tolerance,
            samples,
            skipped,
        }
    }

    /// Same entry with the tolerance replaced and the verdict recomputed.
    pub fn with_tolerance(&self, tolerance: f64) -> Self {
        let pass = match self.bound {
            Bound::AtMost => self.value <= tolerance,
            Bound::AtLeast => self.value >= tolerance,
        };
        ReportEntry {
            tolerance,
            pass,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    pub entries: Vec<ReportEntry>,
}

impl VerificationReport {
    pub fn entry(&self, name: &str) -> Option<&ReportEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }
}

/// Sorts entries by name and computes the overall verdict.
pub fn assemble_report(mut entries: Vec<ReportEntry>) -> Result<VerificationReport> {
    entries.sort_by(|a, b| a.name.cmp(&b.name));
    if let Some(w) = entries.windows(2).find(|w| w[0].name == w[1].name) {
        return Err(Error::DuplicateCheck(w[0].name.clone()));
    }
    let note = entries.is_empty().then(|| String::from("no checks run"));
    Ok(VerificationReport {
        pass: entries.iter().all(|e| e.pass),
        note,
        entries,
    })
}

/// Deterministic sample source for one check.
pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64, salt: u64) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15)),
        }
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        if lo == hi {
            return lo;
        }
        self.rng.gen_range(lo..hi)
    }

    /// Uniform point of the real 4-ball of the given radius around `center`.
    pub fn in_ball(&mut self, center: PointC2, radius: f64) -> PointC2 {
        loop {
            let v: Real4 = core::array::from_fn(|_| self.rng.gen_range(-1.0..1.0));
            if dot4(&v, &v) <= 1.0 {
                return PointC2::from_real(axpy4(radius, &v, &center.to_real()));
            }
        }
    }
}

fn salt(name: &str) -> u64 {
    // FNV-1a
    name.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

struct Tally {
    name: &'static str,
    total: usize,
    skipped: usize,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            total: 0,
            skipped: 0,
        }
    }

    fn finish(&self) -> Result<usize> {
        if self.total > 0 && 2 * self.skipped > self.total {
            return Err(Error::TooManySkipped {
                check: self.name.to_string(),
                skipped: self.skipped,
                total: self.total,
            });
        }
        Ok(self.total - self.skipped)
    }
}

fn ball_radius(chart: &LeafChart, cfg: &VerifyConfig) -> f64 {
    cfg.sample_radius.min(chart.radius()) * chart.base().norm()
}

/// Random leaf move: flow times sized so the point travels about
/// `move_scale · sample_radius · |x|`.
fn leaf_move(
    chart: &LeafChart,
    cfg: &VerifyConfig,
    sampler: &mut Sampler,
    q: PointC2,
) -> Result<PointC2> {
    let s_max = cfg.move_scale * cfg.sample_radius * chart.time_scale();
    let s1 = sampler.uniform(-s_max, s_max);
    let s2 = sampler.uniform(-s_max, s_max);
    leaf_flow_map(chart.field(), q, s1, s2, chart.flow_config())
}

fn dist2(a: [f64; 2], b: [f64; 2]) -> f64 {
    math::hypot(a[0] - b[0], a[1] - b[1])
}

/// Central-difference directional derivative of `g` at `q` along unit `dir`.
fn directional_derivative(g: &GaugeFunction, q: PointC2, dir: &Real4, h: f64) -> Result<f64> {
    let base = q.to_real();
    let plus = g.gauge_eval(PointC2::from_real(axpy4(h, dir, &base)))?;
    let minus = g.gauge_eval(PointC2::from_real(axpy4(-h, dir, &base)))?;
    Ok((plus - minus) / (2.0 * h))
}

fn unit(v: &Real4) -> Real4 {
    let n = norm4(v);
    v.map(|c| c / n)
}

/// Leaf-mate deltas of `g` and its derivatives along `X1`, `X2`.
pub fn check_leaf_constancy(g: &GaugeFunction, cfg: &VerifyConfig) -> Result<Vec<ReportEntry>> {
    let chart = g.chart();
    let mut sampler = Sampler::new(cfg.seed, salt("leaf_constancy"));
    let radius = ball_radius(chart, cfg);
    let h = cfg.fd_step * chart.base().norm();
    let n = g.degree() as f64;
    let mut tally = Tally::new("leaf_constancy");
    let mut worst_delta = 0.0f64;
    let mut worst_deriv = 0.0f64;
    for _ in 0..cfg.samples {
        tally.total += 1;
        let q = sampler.in_ball(chart.base(), radius);
        let outcome = (|| -> Result<(f64, f64)> {
            let q2 = leaf_move(chart, cfg, &mut sampler, q)?;
            let gq = g.gauge_eval(q)?;
            let gq2 = g.gauge_eval(q2)?;
            let x1 = chart.field().x1(q);
            let scale = n * gq / q.norm();
            let d1 = directional_derivative(g, q, &unit(&x1), h)?;
            let d2 = directional_derivative(g, q, &unit(&j4(&x1)), h)?;
            Ok(((gq2 - gq).abs() / gq, d1.abs().max(d2.abs()) / scale))
        })();
        match outcome {
            Ok((delta, deriv)) => {
                worst_delta = worst_delta.max(delta);
                worst_deriv = worst_deriv.max(deriv);
            }
            Err(_) => tally.skipped += 1,
        }
    }
    let ok = tally.finish()?;
    Ok(alloc::vec![
        ReportEntry::at_most(
            "leaf_constancy",
            worst_delta,
            tol::LEAF_CONSTANCY,
            ok,
            tally.skipped
        ),
        ReportEntry::at_most(
            "leaf_derivative",
            worst_deriv,
            tol::LEAF_DERIVATIVE,
            ok,
            tally.skipped
        ),
    ])
}

/// `|g(tq) - t^n g(q)|` relative to the smaller of `g(q)`, `t^n g(q)`, for `t` in `t_grid`.
pub fn check_homogeneity(
    g: &GaugeFunction,
    t_grid: &[f64],
    cfg: &VerifyConfig,
) -> Result<ReportEntry> {
    let chart = g.chart();
    let mut sampler = Sampler::new(cfg.seed, salt("homogeneity"));
    let radius = ball_radius(chart, cfg);
    let n = g.degree() as i32;
    let mut tally = Tally::new("homogeneity");
    let mut worst = 0.0f64;
    for _ in 0..cfg.samples {
        let q = sampler.in_ball(chart.base(), radius);
        let Ok(gq) = g.gauge_eval(q) else {
            tally.total += t_grid.len();
            tally.skipped += t_grid.len();
            continue;
        };
        for &t in t_grid {
            tally.total += 1;
            match g.gauge_eval(t * q) {
                Ok(gt) => {
                    let expect = math::powi(t, n) * gq;
                    worst = worst.max((gt - expect).abs() / expect.min(gq));
                }
                Err(_) => tally.skipped += 1,
            }
        }
    }
    let ok = tally.finish()?;
    Ok(ReportEntry::at_most(
        "homogeneity",
        worst,
        tol::HOMOGENEITY,
        ok,
        tally.skipped,
    ))
}

/// Default scalings for [`check_homogeneity`].
pub fn default_t_grid(cfg: &VerifyConfig) -> Vec<f64> {
    let (lo, hi) = cfg.t_range;
    (0..6).map(|k| lo + (hi - lo) * k as f64 / 5.0).collect()
}

/// `|T(tq)·t - T(q)|` for random `t` in `t_range`.
pub fn check_t_scaling(g: &GaugeFunction, cfg: &VerifyConfig) -> Result<ReportEntry> {
    let chart = g.chart();
    let mut sampler = Sampler::new(cfg.seed, salt("t_scaling"));
    let radius = ball_radius(chart, cfg);
    let mut tally = Tally::new("t_scaling");
    let mut worst = 0.0f64;
    for _ in 0..cfg.samples {
        tally.total += 1;
        let q = sampler.in_ball(chart.base(), radius);
        let t = sampler.uniform(cfg.t_range.0, cfg.t_range.1);
        match (g.solve_t(t * q), g.solve_t(q)) {
            (Ok(tt), Ok(t0)) => worst = worst.max((tt * t - t0).abs()),
            _ => tally.skipped += 1,
        }
    }
    let ok = tally.finish()?;
    Ok(ReportEntry::at_most(
        "t_scaling",
        worst,
        tol::T_SCALING,
        ok,
        tally.skipped,
    ))
}

/// Smallest sampled value of `g`; must be strictly positive.
pub fn check_positivity(g: &GaugeFunction, cfg: &VerifyConfig) -> Result<ReportEntry> {
    let chart = g.chart();
    let mut sampler = Sampler::new(cfg.seed, salt("positivity"));
    let radius = ball_radius(chart, cfg);
    let mut tally = Tally::new("positivity");
    let mut min = f64::INFINITY;
    for _ in 0..cfg.samples {
        tally.total += 1;
        match g.gauge_eval(sampler.in_ball(chart.base(), radius)) {
            Ok(v) => min = min.min(v),
            Err(_) => tally.skipped += 1,
        }
    }
    let ok = tally.finish()?;
    let mut entry = ReportEntry::at_least("positivity", min, f64::MIN_POSITIVE, ok, tally.skipped);
    entry.pass &= min.is_finite();
    Ok(entry)
}

/// `|<∇g(q), q> - n g(q)| / (n g(q))` with a central-difference gradient.
pub fn check_euler(g: &GaugeFunction, cfg: &VerifyConfig) -> Result<ReportEntry> {
    let chart = g.chart();
    let mut sampler = Sampler::new(cfg.seed, salt("euler"));
    let radius = ball_radius(chart, cfg);
    let h = cfg.fd_step * chart.base().norm();
    let n = g.degree() as f64;
    let mut tally = Tally::new("euler");
    let mut worst = 0.0f64;
    for _ in 0..cfg.samples {
        tally.total += 1;
        let q = sampler.in_ball(chart.base(), radius);
        let outcome = (|| -> Result<f64> {
            let gq = g.gauge_eval(q)?;
            let mut radial = 0.0;
            let qr = q.to_real();
            for c in 0..4 {
                let mut e = [0.0; 4];
                e[c] = 1.0;
                radial += directional_derivative(g, q, &e, h)? * qr[c];
            }
            Ok((radial - n * gq).abs() / (n * gq))
        })();
        match outcome {
            Ok(r) => worst = worst.max(r),
            Err(_) => tally.skipped += 1,
        }
    }
    let ok = tally.finish()?;
    Ok(ReportEntry::at_most(
        "euler",
        worst,
        tol::EULER,
        ok,
        tally.skipped,
    ))
}

/// `|M(q, T(q))|` against the gauge's root tolerance.
pub fn check_root_consistency(g: &GaugeFunction, cfg: &VerifyConfig) -> Result<ReportEntry> {
    let chart = g.chart();
    let mut sampler = Sampler::new(cfg.seed, salt("root_consistency"));
    let radius = ball_radius(chart, cfg);
    let mut tally = Tally::new("root_consistency");
    let mut worst = 0.0f64;
    for _ in 0..cfg.samples {
        tally.total += 1;
        let q = sampler.in_ball(chart.base(), radius);
        match g.solve_t(q).and_then(|t| g.m_func(q, t)) {
            Ok(m) => worst = worst.max(m.abs()),
            Err(_) => tally.skipped += 1,
        }
    }
    let ok = tally.finish()?;
    Ok(ReportEntry::at_most(
        "root_consistency",
        worst,
        g.root_tol(),
        ok,
        tally.skipped,
    ))
}

/// For `p1 = t1·p`, `p2 = t2·p`, the part of `u(p1) - u(p2)` orthogonal to the
/// ray's leaf-space tangent at the midpoint scaling.
pub fn check_ray_consistency(chart: &LeafChart, cfg: &VerifyConfig) -> Result<ReportEntry> {
    let mut sampler = Sampler::new(cfg.seed, salt("ray_consistency"));
    let radius = ball_radius(chart, cfg);
    let mut tally = Tally::new("ray_consistency");
    let mut worst = 0.0f64;
    let h = 1e-4;
    for _ in 0..cfg.samples {
        tally.total += 1;
        let p = sampler.in_ball(chart.base(), radius);
        let t1 = sampler.uniform(0.97, 1.03);
        let t2 = sampler.uniform(0.97, 1.03);
        let outcome = (|| -> Result<f64> {
            let u1 = chart.u_eval(t1 * p)?;
            let u2 = chart.u_eval(t2 * p)?;
            let tm = 0.5 * (t1 + t2);
            let up = chart.u_eval((tm + h) * p)?;
            let um = chart.u_eval((tm - h) * p)?;
            let tangent = [up[0] - um[0], up[1] - um[1]];
            let tn = math::hypot(tangent[0], tangent[1]);
            if tn == 0.0 {
                return Err(Error::RadialTangent(0.0));
            }
            let chord = [u1[0] - u2[0], u1[1] - u2[1]];
            Ok((chord[0] * tangent[1] - chord[1] * tangent[0]).abs() / tn)
        })();
        match outcome {
            Ok(r) => worst = worst.max(r),
            Err(_) => tally.skipped += 1,
        }
    }
    let ok = tally.finish()?;
    Ok(ReportEntry::at_most(
        "ray_consistency",
        worst,
        tol::RAY_CONSISTENCY,
        ok,
        tally.skipped,
    ))
}

/// `u(x) = 0`, leaf constancy of `u`, submersion and orthogonality of `Du(x)`,
/// and the leaf-scaling property `u(a) = u(b) ⇒ u(ta) = u(tb)`.
pub fn check_chart(chart: &LeafChart, cfg: &VerifyConfig) -> Result<Vec<ReportEntry>> {
    let x = chart.base();
    let mut entries = Vec::with_capacity(5);

    let origin = chart.u_eval(x)?;
    entries.push(ReportEntry::at_most(
        "chart_origin",
        math::hypot(origin[0], origin[1]),
        0.0,
        1,
        0,
    ));

    let radius = ball_radius(chart, cfg);
    let mut sampler = Sampler::new(cfg.seed, salt("chart_leaf_constancy"));
    let mut tally = Tally::new("chart_leaf_constancy");
    let mut worst = 0.0f64;
    for _ in 0..cfg.samples {
        tally.total += 1;
        let q = sampler.in_ball(x, radius);
        let outcome = (|| -> Result<f64> {
            let q2 = leaf_move(chart, cfg, &mut sampler, q)?;
            Ok(dist2(chart.u_eval(q)?, chart.u_eval(q2)?))
        })();
        match outcome {
            Ok(r) => worst = worst.max(r),
            Err(_) => tally.skipped += 1,
        }
    }
    let ok = tally.finish()?;
    entries.push(ReportEntry::at_most(
        "chart_leaf_constancy",
        worst,
        tol::CHART_LEAF_CONSTANCY,
        ok,
        tally.skipped,
    ));

    let jac = chart.u_jacobian(x, 1e-4 * x.norm())?;
    entries.push(ReportEntry::at_least(
        "chart_submersion",
        linalg::min_singular_2x4(&jac),
        tol::CHART_SUBMERSION,
        1,
        0,
    ));
    let x1 = chart.field().x1(x);
    let x2 = j4(&x1);
    let apply = |v: &Real4| math::hypot(dot4(&jac[0], v), dot4(&jac[1], v));
    entries.push(ReportEntry::at_most(
        "chart_orthogonality",
        apply(&x1).max(apply(&x2)),
        tol::CHART_ORTHOGONALITY,
        2,
        0,
    ));

    let mut sampler = Sampler::new(cfg.seed, salt("chart_leaf_scaling"));
    let mut tally = Tally::new("chart_leaf_scaling");
    let mut worst = 0.0f64;
    for _ in 0..cfg.samples {
        tally.total += 1;
        let a = sampler.in_ball(x, radius);
        let t = sampler.uniform(0.95, 1.05);
        let outcome = (|| -> Result<f64> {
            let b = leaf_move(chart, cfg, &mut sampler, a)?;
            if dist2(chart.u_eval(a)?, chart.u_eval(b)?) > tol::LEAF_PAIR {
                return Err(Error::LeafProjectionFailed);
            }
            Ok(dist2(chart.u_eval(t * a)?, chart.u_eval(t * b)?))
        })();
        match outcome {
            Ok(r) => worst = worst.max(r),
            Err(_) => tally.skipped += 1,
        }
    }
    let ok = tally.finish()?;
    entries.push(ReportEntry::at_most(
        "chart_leaf_scaling",
        worst,
        tol::CHART_LEAF_SCALING,
        ok,
        tally.skipped,
    ));
    Ok(entries)
}

/// Every chart and gauge check, unassembled.
pub fn suite_entries(g: &GaugeFunction, cfg: &VerifyConfig) -> Result<Vec<ReportEntry>> {
    let mut entries = check_chart(g.chart(), cfg)?;
    entries.push(check_ray_consistency(g.chart(), cfg)?);
    entries.extend(check_leaf_constancy(g, cfg)?);
    entries.push(check_homogeneity(g, &default_t_grid(cfg), cfg)?);
    entries.push(check_t_scaling(g, cfg)?);
    entries.push(check_positivity(g, cfg)?);
    entries.push(check_euler(g, cfg)?);
    entries.push(check_root_consistency(g, cfg)?);
    Ok(entries)
}

pub fn full_suite(g: &GaugeFunction, cfg: &VerifyConfig) -> Result<VerificationReport> {
    assemble_report(suite_entries(g, cfg)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charts::{build_chart, ChartConfig};
    use crate::fields::VectorFieldC2;
    use crate::gauge::GaugeConfig;
    use crate::wirtinger::WirtingerPoly;
    use num_complex::Complex64;

    fn mono(e: [u32; 4], k: i64) -> WirtingerPoly {
        WirtingerPoly::monomial(e, k)
    }

    fn gauge(v: VectorFieldC2, x: PointC2, n: u32) -> GaugeFunction {
        let chart = build_chart(&v, x, &ChartConfig::default()).unwrap();
        GaugeFunction::new(
            chart,
            &GaugeConfig {
                degree: n,
                ..GaugeConfig::default()
            },
        )
        .unwrap()
    }

    fn gauge_z4(n: u32) -> GaugeFunction {
        gauge(
            VectorFieldC2::new(WirtingerPoly::zero(), mono([1, 1, 0, 0], 4), 2),
            PointC2::real(1.0, 0.0),
            n,
        )
    }

    fn gauge_zw(n: u32) -> GaugeFunction {
        gauge(
            VectorFieldC2::new(mono([1, 0, 0, 1], -1), mono([0, 0, 1, 1], 1), 2),
            PointC2::real(1.0, 1.0),
            n,
        )
    }

    fn small() -> VerifyConfig {
        VerifyConfig {
            samples: 10,
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn assemble_examples() {
        let r = assemble_report(Vec::new()).unwrap();
        assert!(r.pass);
        assert_eq!(r.note.as_deref(), Some("no checks run"));

        let r = assemble_report(alloc::vec![
            ReportEntry::at_most("b", 1.0, 2.0, 1, 0),
            ReportEntry::at_most("a", 3.0, 2.0, 1, 0),
        ])
        .unwrap();
        assert!(!r.pass);
        assert_eq!(r.entries[0].name, "a");

        let dup = assemble_report(alloc::vec![
            ReportEntry::at_most("a", 1.0, 2.0, 1, 0),
            ReportEntry::at_most("a", 1.0, 2.0, 1, 0),
        ]);
        assert_eq!(dup, Err(Error::DuplicateCheck("a".into())));
    }

    #[test]
    fn vertical_gauge_is_w_independent() {
        let g = gauge_z4(2);
        let a = g.gauge_eval(PointC2::real(1.0, 0.3)).unwrap();
        let b = g
            .gauge_eval(PointC2::new(
                Complex64::new(1.0, 0.0),
                Complex64::new(-0.2, 0.1),
            ))
            .unwrap();
        assert!((a - 1.0).abs() <= 1e-9 && (b - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn zw_base_leaf_has_unit_gauge() {
        let g = gauge_zw(4);
        for (s1, s2) in [(0.05, 0.0), (-0.04, 0.03), (0.02, -0.05)] {
            let q = leaf_flow_map(
                g.chart().field(),
                PointC2::real(1.0, 1.0),
                s1,
                s2,
                g.chart().flow_config(),
            )
            .unwrap();
            assert!((g.gauge_eval(q).unwrap() - 1.0).abs() <= 1e-6);
        }
    }

    #[test]
    fn homogeneity_examples() {
        let g = gauge_z4(2);
        let v = g.gauge_eval(PointC2::real(1.05, 0.0)).unwrap();
        assert!((v - 1.1025).abs() < 1e-9);
        let g = gauge_zw(4);
        let v = g.gauge_eval(0.95 * PointC2::real(1.0, 1.0)).unwrap();
        assert!((v - 0.95f64.powi(4)).abs() < 1e-9);
        let e = check_homogeneity(&g, &[1.0], &small()).unwrap();
        assert_eq!(e.value, 0.0);
    }

    #[test]
    fn ray_consistency_on_vertical_field() {
        let g = gauge_z4(2);
        let p = PointC2::real(1.05, 0.1);
        for t in [0.97, 1.0, 1.02] {
            let u = g.chart().u_eval(t * p).unwrap();
            assert!((u[0] - (1.05 * t - 1.0)).abs() < 1e-12 && u[1].abs() < 1e-12);
        }
        let e = check_ray_consistency(g.chart(), &small()).unwrap();
        assert!(e.pass, "{e:?}");
    }

    #[test]
    fn suite_passes_on_fixtures() {
        for g in [gauge_z4(2), gauge_zw(4)] {
            let report = full_suite(&g, &small()).unwrap();
            assert!(report.pass, "{report:#?}");
            assert!(report.entries.iter().all(|e| e.skipped == 0));
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let g = gauge_zw(4);
        let a = full_suite(&g, &small()).unwrap();
        let b = full_suite(&g, &small()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn loosening_keeps_passes() {
        let g = gauge_zw(4);
        let report = full_suite(&g, &small()).unwrap();
        for e in &report.entries {
            let looser = match e.bound {
                Bound::AtMost => e.tolerance * 10.0,
                Bound::AtLeast => e.tolerance / 10.0,
            };
            assert!(!e.pass || e.with_tolerance(looser).pass);
        }
    }

    #[test]
    fn too_many_skips_is_an_error() {
        let g = gauge_z4(2);
        // all samples land far outside the chart
        let cfg = VerifyConfig {
            sample_radius: 0.0,
            t_range: (3.0, 3.0),
            ..small()
        };
        assert!(matches!(
            check_t_scaling(&g, &cfg),
            Err(Error::TooManySkipped { .. })
        ));
    }
}
