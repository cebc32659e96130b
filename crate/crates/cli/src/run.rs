//! Resolving settings and running the gauge construction for a fixture.

use leafgauge::corollary::{
    build_field_gauge, leaf_harmonicity_check, run_pipeline, PipelineConfig,
};
use leafgauge::fields::select_field;
use leafgauge::fields::VectorFieldC2;
use leafgauge::gauge::GaugeFunction;
use leafgauge::verify::{self, VerificationReport};
use leafgauge::wirtinger::WirtingerPoly;

use crate::fixture::{ConfigOverrides, Fixture};
use crate::report::{GaugeSummary, RunRecord};
use crate::CliError;

/// Command-line settings layered over a fixture.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub point: Option<[f64; 4]>,
    pub degree: Option<u32>,
    pub config: ConfigOverrides,
}

impl Overrides {
    pub fn is_empty(&self) -> bool {
        *self == Overrides::default()
    }
}

/// The fixture with flags applied and every setting written out explicitly,
/// so that the result alone reproduces the run.
pub fn resolve(fixture: &Fixture, flags: &Overrides) -> Result<Fixture, CliError> {
    let mut f = fixture.clone();
    if let Some(p) = flags.point {
        f.point = p;
    }
    f.n = flags.degree.or(f.n);
    if f.n == Some(0) {
        return Err(CliError::Input(String::from("degree must be positive")));
    }
    if f.n.is_none() {
        f.n = Some(match f.poly()? {
            Some(p) => p.max_degree(),
            None => PipelineConfig::default().gauge.degree,
        });
    }
    let d = PipelineConfig::default();
    let defaults = ConfigOverrides {
        seed: Some(d.verify.seed),
        samples: Some(d.verify.samples),
        tol_ode: Some(d.chart.flow.abs_tol),
        tol_root: Some(d.gauge.root_tol),
        chart_radius: Some(d.chart.radius),
        sample_radius: Some(d.verify.sample_radius),
        delta: Some(d.gauge.delta),
    };
    f.config = flags.config.over(fixture.config).over(defaults);
    Ok(f)
}

fn positive(name: &str, v: Option<f64>) -> Result<Option<f64>, CliError> {
    match v {
        Some(x) if !(x.is_finite() && x > 0.0) => {
            Err(CliError::Input(format!("{name} must be positive, got {x}")))
        }
        _ => Ok(v),
    }
}

pub fn pipeline_config(f: &Fixture) -> Result<PipelineConfig, CliError> {
    let mut cfg = PipelineConfig {
        degree: f.n,
        ..PipelineConfig::default()
    };
    let c = &f.config;
    if let Some(seed) = c.seed {
        cfg.verify.seed = seed;
    }
    if let Some(samples) = c.samples {
        cfg.verify.samples = samples;
    }
    if let Some(tol) = positive("tol_ode", c.tol_ode)? {
        cfg.chart.flow.abs_tol = tol;
        cfg.chart.flow.rel_tol = tol;
    }
    if let Some(tol) = positive("tol_root", c.tol_root)? {
        cfg.gauge.root_tol = tol;
    }
    if let Some(r) = positive("chart_radius", c.chart_radius)? {
        if r >= 1.0 {
            return Err(CliError::Input(format!(
                "chart_radius must be below 1, got {r}"
            )));
        }
        cfg.chart.radius = r;
    }
    if let Some(r) = positive("sample_radius", c.sample_radius)? {
        cfg.verify.sample_radius = r;
    }
    if let Some(delta) = positive("delta", c.delta)? {
        cfg.gauge.delta = delta;
    }
    Ok(cfg)
}

/// The field a fixture describes: the explicit one, or the one selected from the polynomial.
pub fn fixture_field(f: &Fixture) -> Result<VectorFieldC2, CliError> {
    if let Some(v) = f.vector_field()? {
        return Ok(v);
    }
    let p = f.poly()?.expect("validated fixture has a polynomial");
    Ok(select_field(
        &p,
        f.base_point(),
        &PipelineConfig::default().chart.thresholds,
    )?)
}

fn explicit_field_run(
    v: &VectorFieldC2,
    p: Option<&WirtingerPoly>,
    f: &Fixture,
    cfg: &PipelineConfig,
) -> Result<(GaugeFunction, VerificationReport), CliError> {
    let degree = f.n.expect("resolved fixture has a degree");
    let gauge = build_field_gauge(v, f.base_point(), degree, cfg)?;
    let mut entries = verify::suite_entries(&gauge, &cfg.verify)?;
    if let Some(p) = p {
        entries.extend(leaf_harmonicity_check(p, v, gauge.chart(), &cfg.verify)?);
    }
    Ok((gauge, verify::assemble_report(entries)?))
}

/// Builds and verifies the gauge for a fixture whose settings are already resolved.
pub fn run_resolved(f: &Fixture) -> Result<(GaugeFunction, RunRecord), CliError> {
    let cfg = pipeline_config(f)?;
    let p = f.poly()?;
    let (gauge, report) = match (f.vector_field()?, &p) {
        (Some(v), _) => explicit_field_run(&v, p.as_ref(), f, &cfg)?,
        (None, Some(p)) => {
            let out = run_pipeline(p, f.base_point(), &cfg)?;
            (out.gauge, out.report)
        }
        (None, None) => unreachable!("validated fixture has a polynomial or a field"),
    };
    let record = RunRecord {
        fixture: f.clone(),
        gauge: GaugeSummary::of(&gauge),
        report,
    };
    Ok((gauge, record))
}

pub fn run(fixture: &Fixture, flags: &Overrides) -> Result<(GaugeFunction, RunRecord), CliError> {
    run_resolved(&resolve(fixture, flags)?)
}
