//! Subcommand implementations. Each writes its normal output to `out` and
//! reports failure through [`CliError`], which determines the exit code.

use std::fs;
use std::io::Write;
use std::path::Path;

use leafgauge::corollary::validate_hypotheses;
use leafgauge::fields::{derive_candidate_fields, Thresholds, VectorFieldC2};
use leafgauge::flows::{square_grid, trace_leaf};
use leafgauge::wirtinger::levi_determinant;

use crate::fixture::{read_text, Fixture};
use crate::report::{grid_csv, leaf_csv, table, RunRecord};
use crate::run::{fixture_field, pipeline_config, resolve, run_resolved, Overrides};
use crate::CliError;

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Input(format!("writing output: {e}")))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn field_line(label: &str, v: &VectorFieldC2) -> String {
    format!(
        "{label} = ({}, {})  m = {}\n",
        v.comp_z(),
        v.comp_w(),
        v.degree()
    )
}

pub fn check_poly(path: &Path, flags: &Overrides, out: &mut dyn Write) -> Result<(), CliError> {
    let f = resolve(&Fixture::load(path)?, flags)?;
    let p = f
        .poly()?
        .ok_or_else(|| CliError::Input(String::from("fixture has no polynomial")))?;
    let x = f.base_point();
    let checklist = validate_hypotheses(&p, x, &Thresholds::default());
    let mut text = format!("polynomial: {p}\npoint: {:?}\n", f.point);
    for v in &checklist.verdicts {
        text += &format!(
            "{}: {} ({})\n",
            v.name,
            if v.pass { "pass" } else { "FAIL" },
            v.detail
        );
    }
    text += &match levi_determinant(&p) {
        Ok(d) if d.is_zero() => String::from("levi_det: ZERO\n"),
        Ok(d) => format!("levi_det: {d}\n"),
        Err(e) => format!("levi_det: n/a ({e})\n"),
    };
    emit(out, &text)?;
    match checklist.first_failure() {
        Some(v) => Err(CliError::Hypothesis(format!("{}: {}", v.name, v.detail))),
        None => Ok(()),
    }
}

pub fn derive_field(path: &Path, flags: &Overrides, out: &mut dyn Write) -> Result<(), CliError> {
    let f = resolve(&Fixture::load(path)?, flags)?;
    let p = f
        .poly()?
        .ok_or_else(|| CliError::Input(String::from("fixture has no polynomial")))?;
    let (v1, v2) = derive_candidate_fields(&p)?;
    let thr = Thresholds::default();
    let x = f.base_point();
    let selected = if v1.is_nonvanishing_at(x, &thr) {
        "V1"
    } else if v2.is_nonvanishing_at(x, &thr) {
        "V2"
    } else {
        "none"
    };
    emit(
        out,
        &format!(
            "{}{}selected at point: {selected}\n",
            field_line("V1", &v1),
            field_line("V2", &v2)
        ),
    )
}

#[derive(Debug, Clone, Default)]
pub struct BuildOptions {
    pub out: Option<std::path::PathBuf>,
    pub json: bool,
    pub grid_csv: Option<std::path::PathBuf>,
    pub grid_size: usize,
    pub grid_span: f64,
}

fn finish(record: &RunRecord, opts: &BuildOptions, out: &mut dyn Write) -> Result<(), CliError> {
    let json = record.to_json();
    if let Some(path) = &opts.out {
        write_file(path, &json)?;
    }
    emit(
        out,
        &if opts.json {
            json
        } else {
            table(&record.report)
        },
    )?;
    if record.report.pass {
        Ok(())
    } else {
        let names: Vec<&str> = record.report.failures().map(|e| e.name.as_str()).collect();
        Err(CliError::Failed(if names.is_empty() {
            record.report.note.clone().unwrap_or_default()
        } else {
            names.join(", ")
        }))
    }
}

pub fn build_gauge(
    path: &Path,
    flags: &Overrides,
    opts: &BuildOptions,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let f = resolve(&Fixture::load(path)?, flags)?;
    let (gauge, record) = run_resolved(&f)?;
    if let Some(csv) = &opts.grid_csv {
        if !(opts.grid_span > 0.0 && opts.grid_span < 1.0) {
            return Err(CliError::Input(format!(
                "grid span must be in (0, 1), got {}",
                opts.grid_span
            )));
        }
        write_file(
            csv,
            &grid_csv(&gauge.sample_grid(opts.grid_size, opts.grid_span)),
        )?;
    }
    finish(&record, opts, out)
}

/// Re-runs a fixture or a saved run record. A record is also compared
/// against its stored report unless settings were overridden.
pub fn verify(
    path: &Path,
    flags: &Overrides,
    opts: &BuildOptions,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let text = read_text(path)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let (fixture, saved) = if value.get("report").is_some() {
        let record: RunRecord = serde_json::from_value(value)
            .map_err(|e| CliError::Input(format!("run record: {e}")))?;
        (record.fixture, Some(record.report))
    } else {
        (Fixture::from_json(&text)?, None)
    };
    let f = resolve(&fixture, flags)?;
    let (_, record) = run_resolved(&f)?;
    finish(&record, opts, out)?;
    match saved {
        Some(old) if flags.is_empty() => {
            let same =
                serde_json::to_string(&old).ok() == serde_json::to_string(&record.report).ok();
            if same && opts.json {
                Ok(())
            } else if same {
                emit(out, "matches saved report\n")
            } else {
                Err(CliError::Failed(String::from(
                    "report differs from the saved report",
                )))
            }
        }
        _ => Ok(()),
    }
}

/// Parses `KxK` (or a bare `K`).
pub fn parse_grid(s: &str) -> Result<usize, String> {
    let (a, b) = s.split_once(['x', 'X']).unwrap_or((s, s));
    let (a, b): (usize, usize) = (
        a.trim().parse().map_err(|_| format!("bad grid {s:?}"))?,
        b.trim().parse().map_err(|_| format!("bad grid {s:?}"))?,
    );
    if a != b || a == 0 {
        return Err(format!("grid must be a non-empty square KxK, got {s:?}"));
    }
    Ok(a)
}

/// Samples the leaf through the base point on a `k × k` grid of flow times
/// `s1, s2 ∈ [-span, span] · |x| / |V(x)|`.
pub fn trace(
    path: &Path,
    flags: &Overrides,
    k: usize,
    span: f64,
    out_path: Option<&Path>,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    if !(span.is_finite() && span > 0.0) {
        return Err(CliError::Input(format!(
            "span must be positive, got {span}"
        )));
    }
    let f = resolve(&Fixture::load(path)?, flags)?;
    let cfg = pipeline_config(&f)?;
    let v = fixture_field(&f)?;
    let x = f.base_point();
    let speed = v.eval(x).norm();
    if !v.is_nonvanishing_at(x, &cfg.chart.thresholds) {
        return Err(leafgauge::Error::RankDrop { norm: speed }.into());
    }
    let grid = square_grid(k, span * x.norm() / speed);
    let points = trace_leaf(&v, x, &grid, &cfg.chart.flow)?;
    let csv = leaf_csv(&grid, &points);
    match out_path {
        Some(p) => write_file(p, &csv),
        None => emit(out, &csv),
    }
}
