//! From a Levi-flat homogeneous polynomial `P` and a base point `x` to a
//! verified gauge: hypotheses, field selection, chart, gauge, and the check
//! that `P` is harmonic along the constructed leaves.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::charts::{build_chart, ChartConfig, LeafChart};
use crate::error::{Error, Result};
use crate::fields::{
    annihilation_check, homogeneity_check_field, involutivity_check, mat_vec, sample_ring,
    select_field, transversality_check, Thresholds, VectorFieldC2,
};
use crate::flows::{integrate_flow, leaf_flow_map};
use crate::gauge::{GaugeConfig, GaugeFunction};
use crate::math;
use crate::point::{dot4, j4, PointC2, Real4};
use crate::verify::{self, ReportEntry, Sampler, VerificationReport, VerifyConfig};
use crate::wirtinger::{
    complex_hessian, is_on_harmonic_line, Degree, NumericPoly, Var, WirtingerPoly,
};

pub const LEVI_FORM_TOL: f64 = 1e-9;
pub const STENCIL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

/// Per-hypothesis verdicts, in evaluation order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisChecklist {
    pub verdicts: Vec<Verdict>,
}

impl HypothesisChecklist {
    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn first_failure(&self) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| !v.pass)
    }

    pub fn get(&self, name: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.name == name)
    }
}

pub mod hypothesis {
    pub const REAL_VALUED: &str = "real_valued";
    pub const DEGREE: &str = "degree";
    pub const HESSIAN_NONZERO: &str = "hessian_nonzero";
    pub const OFF_HARMONIC_LINE: &str = "off_harmonic_line";
    pub const LEVI_FLAT: &str = "levi_flat";
}

fn verdict(name: &'static str, pass: bool, detail: String) -> Verdict {
    Verdict { name, pass, detail }
}

fn frobenius(h: &[[Complex64; 2]; 2]) -> f64 {
    math::sqrt(h.iter().flatten().map(|c| c.norm_sqr()).sum())
}

/// Checks, in order: `P` real; `P` homogeneous of degree `2k`, `k ≥ 2`;
/// `H_P(x) ≠ 0`; `x` not on a complex line through 0 along which `P` is
/// harmonic; `det H_P ≡ 0`.
pub fn validate_hypotheses(p: &WirtingerPoly, x: PointC2, thr: &Thresholds) -> HypothesisChecklist {
    use hypothesis::*;
    let mut verdicts = Vec::with_capacity(5);
    let real = p.is_real();
    verdicts.push(verdict(
        REAL_VALUED,
        real,
        String::from(if real {
            "P is real-valued"
        } else {
            "P is not real-valued"
        }),
    ));
    let degree = p.homogeneity_degree();
    let deg_verdict = match degree {
        Ok(Degree::Homogeneous(d)) if d % 2 == 0 && d >= 4 => verdict(
            DEGREE,
            true,
            format!("homogeneous of degree {d} = 2k, k = {}", d / 2),
        ),
        Ok(Degree::Homogeneous(d)) => verdict(
            DEGREE,
            false,
            format!("homogeneous of degree {d}; need 2k with k >= 2"),
        ),
        Ok(Degree::Inhomogeneous) => verdict(DEGREE, false, String::from("not homogeneous")),
        Err(_) => verdict(DEGREE, false, String::from("zero polynomial")),
    };
    verdicts.push(deg_verdict);
    if !real {
        for name in [HESSIAN_NONZERO, OFF_HARMONIC_LINE, LEVI_FLAT] {
            verdicts.push(verdict(
                name,
                false,
                String::from("requires a real-valued polynomial"),
            ));
        }
        return HypothesisChecklist { verdicts };
    }
    let hess = complex_hessian(p).expect("real polynomial has a Hessian");
    let deg = p.max_degree().saturating_sub(2) as i32;
    let h_norm = frobenius(&hess.eval(x));
    let nonzero = h_norm > thr.nonvanishing * math::powi(x.norm(), deg);
    verdicts.push(verdict(
        HESSIAN_NONZERO,
        nonzero,
        format!("|H_P(x)| = {h_norm:e}"),
    ));
    let off_line = if x.norm_sqr() == 0.0 {
        verdict(OFF_HARMONIC_LINE, false, String::from("x = 0"))
    } else {
        match is_on_harmonic_line(p, x) {
            Ok(on) => verdict(
                OFF_HARMONIC_LINE,
                !on,
                String::from(if on {
                    "P is harmonic along the complex line through 0 and x"
                } else {
                    "H_P(s x) x is not identically zero"
                }),
            ),
            Err(e) => verdict(OFF_HARMONIC_LINE, false, format!("{e}")),
        }
    };
    verdicts.push(off_line);
    let det = hess.det();
    verdicts.push(verdict(
        LEVI_FLAT,
        det.is_zero(),
        if det.is_zero() {
            String::from("levi determinant is identically zero")
        } else {
            format!("levi determinant = {det}")
        },
    ));
    HypothesisChecklist { verdicts }
}

struct Harmonicity {
    p: NumericPoly,
    grad_z: NumericPoly,
    grad_w: NumericPoly,
    hessian: [[NumericPoly; 2]; 2],
}

impl Harmonicity {
    fn new(p: &WirtingerPoly) -> Result<Self> {
        let h = complex_hessian(p)?;
        Ok(Harmonicity {
            p: p.to_numeric(),
            grad_z: p.diff(Var::Z).to_numeric(),
            grad_w: p.diff(Var::W).to_numeric(),
            hessian: h.to_numeric(),
        })
    }

    fn value(&self, q: PointC2) -> f64 {
        self.p.eval(q).re
    }

    /// Real gradient of a real `P`: `(2 Re P_z, -2 Im P_z, 2 Re P_w, -2 Im P_w)`.
    fn gradient(&self, q: PointC2) -> Real4 {
        let pz = self.grad_z.eval(q);
        let pw = self.grad_w.eval(q);
        [2.0 * pz.re, -2.0 * pz.im, 2.0 * pw.re, -2.0 * pw.im]
    }

    /// `Σ P_{j k̄} v_j conj(v_k)`.
    fn levi_form(&self, q: PointC2, v: PointC2) -> Complex64 {
        let h = &self.hessian;
        let hv0 = h[0][0].eval(q) * v.z + h[0][1].eval(q) * v.w;
        let hv1 = h[1][0].eval(q) * v.z + h[1][1].eval(q) * v.w;
        v.z.conj() * hv0 + v.w.conj() * hv1
    }
}

/// Second difference of `P` along the flows of `X1` and `X2` at `q`, with the
/// first-order term from the curvature of the flow lines removed. For a
/// holomorphic-parametrised leaf this is `4 · levi_form(V, V)`; the result is
/// normalised by `|V|^2 · |P(q)| / |q|^2`.
fn stencil_residual(
    h: &Harmonicity,
    v: &VectorFieldC2,
    q: PointC2,
    cfg: &LeafChart,
) -> Result<f64> {
    let vq = v.eval(q);
    let speed = vq.norm();
    let step = 3e-4 * q.norm() / speed;
    let flow = cfg.flow_config();
    let mut sum = -4.0 * h.value(q);
    for coeffs in [(1.0, 0.0), (0.0, 1.0)] {
        for s in [step, -step] {
            sum += h.value(integrate_flow(v, coeffs, s, q, flow)?);
        }
    }
    let laplacian = sum / (step * step);
    let x1 = v.x1(q);
    let x2 = j4(&x1);
    let accel_1 = mat_vec(&v.jacobian_x1(q), &x1);
    let accel_2 = mat_vec(&v.jacobian_x2(q), &x2);
    let accel: Real4 = core::array::from_fn(|i| accel_1[i] + accel_2[i]);
    let drift = dot4(&h.gradient(q), &accel);
    let scale = speed * speed * (h.value(q).abs() / q.norm_sqr()).max(f64::MIN_POSITIVE);
    Ok((laplacian - drift).abs() / scale)
}

/// Levi form of `P` in the unit leaf direction `V(q)/|V(q)|` at leaf samples,
/// and the corrected second difference of `P` along the leaf flows.
pub fn leaf_harmonicity_check(
    p: &WirtingerPoly,
    v: &VectorFieldC2,
    chart: &LeafChart,
    cfg: &VerifyConfig,
) -> Result<Vec<ReportEntry>> {
    let h = Harmonicity::new(p)?;
    let mut sampler = Sampler::new(cfg.seed, 0x4A2D);
    let radius = cfg.sample_radius.min(chart.radius()) * chart.base().norm();
    let s_max = cfg.move_scale * cfg.sample_radius * chart.time_scale();
    let mut worst_levi = 0.0f64;
    let mut worst_stencil = 0.0f64;
    let mut skipped = 0;
    for _ in 0..cfg.samples {
        let q0 = sampler.in_ball(chart.base(), radius);
        let s1 = sampler.uniform(-s_max, s_max);
        let s2 = sampler.uniform(-s_max, s_max);
        let outcome = (|| -> Result<(f64, f64)> {
            let q = leaf_flow_map(v, q0, s1, s2, chart.flow_config())?;
            let vq = v.eval(q);
            let unit = PointC2::new(vq.z / vq.norm(), vq.w / vq.norm());
            Ok((
                h.levi_form(q, unit).norm(),
                stencil_residual(&h, v, q, chart)?,
            ))
        })();
        match outcome {
            Ok((levi, stencil)) => {
                worst_levi = worst_levi.max(levi);
                worst_stencil = worst_stencil.max(stencil);
            }
            Err(_) => skipped += 1,
        }
    }
    if cfg.samples > 0 && 2 * skipped > cfg.samples {
        return Err(Error::TooManySkipped {
            check: String::from("leaf_harmonicity"),
            skipped,
            total: cfg.samples,
        });
    }
    let ok = cfg.samples - skipped;
    Ok(alloc::vec![
        ReportEntry::at_most(
            "leaf_harmonicity_levi",
            worst_levi,
            LEVI_FORM_TOL,
            ok,
            skipped
        ),
        ReportEntry::at_most(
            "leaf_harmonicity_stencil",
            worst_stencil,
            STENCIL_TOL,
            ok,
            skipped
        ),
    ])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    /// Gauge degree; `None` means `deg P` for the polynomial pipeline.
    pub degree: Option<u32>,
    pub chart: ChartConfig,
    pub gauge: GaugeConfig,
    pub verify: VerifyConfig,
    /// Bound on `σ_min / σ_max` of `[X1 | X2 | [X1, X2]]`.
    pub involutivity_tol: f64,
    pub involutivity_samples: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            degree: None,
            chart: ChartConfig::default(),
            gauge: GaugeConfig::default(),
            verify: VerifyConfig::default(),
            involutivity_tol: 1e-10,
            involutivity_samples: 20,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PipelineOutcome {
    pub field: VectorFieldC2,
    pub gauge: GaugeFunction,
    pub report: VerificationReport,
}

/// Field checks, chart, and gauge for an explicit field, without verification.
pub fn build_field_gauge(
    v: &VectorFieldC2,
    x: PointC2,
    degree: u32,
    cfg: &PipelineConfig,
) -> Result<GaugeFunction> {
    let thr = &cfg.chart.thresholds;
    if v.degree() == 0 || !homogeneity_check_field(v) {
        return Err(Error::FieldNotHomogeneous(v.degree()));
    }
    if !v.is_nonvanishing_at(x, thr) {
        return Err(Error::RankDrop {
            norm: v.eval(x).norm(),
        });
    }
    let samples = sample_ring(x, cfg.verify.sample_radius, cfg.involutivity_samples);
    let inv = involutivity_check(v, &samples, cfg.involutivity_tol, thr)?;
    if !inv.pass {
        return Err(Error::NotInvolutive {
            residual: inv.worst_residual,
        });
    }
    let t = transversality_check(v, x, thr);
    if !t.pass {
        return Err(Error::NotTransversal { det: t.det_abs });
    }
    let chart = build_chart(v, x, &cfg.chart)?;
    GaugeFunction::new(
        chart,
        &GaugeConfig {
            degree,
            ..cfg.gauge
        },
    )
}

/// Direct path for an explicit field: checks, chart, gauge, verification.
pub fn run_field_pipeline(
    v: &VectorFieldC2,
    x: PointC2,
    degree: u32,
    cfg: &PipelineConfig,
) -> Result<PipelineOutcome> {
    let gauge = build_field_gauge(v, x, degree, cfg)?;
    let report = verify::full_suite(&gauge, &cfg.verify)?;
    Ok(PipelineOutcome {
        field: v.clone(),
        gauge,
        report,
    })
}

/// Field selected from `P` at `x` after all hypotheses pass, with `H_P · V ≡ 0` confirmed.
pub fn pipeline_field(p: &WirtingerPoly, x: PointC2, thr: &Thresholds) -> Result<VectorFieldC2> {
    let checklist = validate_hypotheses(p, x, thr);
    if let Some(f) = checklist.first_failure() {
        return Err(Error::Hypothesis(format!("{}: {}", f.name, f.detail)));
    }
    let v = select_field(p, x, thr)?;
    if !annihilation_check(p, &v)? {
        return Err(Error::Hypothesis(String::from(
            "H_P · V does not vanish identically",
        )));
    }
    Ok(v)
}

/// Polynomial path: hypotheses, field, gauge, verification suite, and leaf harmonicity.
pub fn run_pipeline(
    p: &WirtingerPoly,
    x: PointC2,
    cfg: &PipelineConfig,
) -> Result<PipelineOutcome> {
    let v = pipeline_field(p, x, &cfg.chart.thresholds)?;
    let degree = match cfg.degree {
        Some(n) => n,
        None => p.max_degree(),
    };
    let gauge = build_field_gauge(&v, x, degree, cfg)?;
    let mut entries = verify::suite_entries(&gauge, &cfg.verify)?;
    entries.extend(leaf_harmonicity_check(p, &v, gauge.chart(), &cfg.verify)?);
    let report = verify::assemble_report(entries)?;
    Ok(PipelineOutcome {
        field: v,
        gauge,
        report,
    })
}
