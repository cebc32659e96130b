//! Output formats: aligned text tables, JSON run records, CSV dumps.

use std::fmt::Write as _;

use leafgauge::gauge::{GaugeFunction, GridSample};
use leafgauge::verify::{Bound, VerificationReport};
use leafgauge::PointC2;
use serde::{Deserialize, Serialize};

use crate::fixture::Fixture;

/// Chart and gauge parameters echoed alongside a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaugeSummary {
    pub base: [f64; 4],
    pub degree: u32,
    pub frame: [[f64; 4]; 4],
    pub chart_radius: f64,
    pub time_scale: f64,
    pub velocity: [f64; 2],
    pub delta: f64,
    pub root_tol: f64,
}

impl GaugeSummary {
    pub fn of(g: &GaugeFunction) -> GaugeSummary {
        let chart = g.chart();
        GaugeSummary {
            base: chart.base().to_real(),
            degree: g.degree(),
            frame: *chart.frame(),
            chart_radius: chart.radius(),
            time_scale: chart.time_scale(),
            velocity: g.velocity(),
            delta: g.delta(),
            root_tol: g.root_tol(),
        }
    }
}

/// Everything needed to reproduce a run: the fixture with all settings
/// resolved, the gauge parameters, and the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunRecord {
    pub fixture: Fixture,
    pub gauge: GaugeSummary,
    pub report: VerificationReport,
}

impl RunRecord {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("run record serializes");
        s.push('\n');
        s
    }
}

pub fn table(report: &VerificationReport) -> String {
    let header = ["check", "value", "bound", "samples", "skipped", "status"];
    let rows: Vec<[String; 6]> = report
        .entries
        .iter()
        .map(|e| {
            let op = match e.bound {
                Bound::AtMost => "<=",
                Bound::AtLeast => ">=",
            };
            [
                e.name.clone(),
                format!("{:.3e}", e.value),
                format!("{op} {:.1e}", e.tolerance),
                e.samples.to_string(),
                e.skipped.to_string(),
                String::from(if e.pass { "pass" } else { "FAIL" }),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &[&str]| {
        let mut l = String::new();
        for (i, (cell, w)) in cells.iter().zip(widths).enumerate() {
            if i > 0 {
                l.push_str("  ");
            }
            if i == 0 || i == cells.len() - 1 {
                let _ = write!(l, "{cell:<w$}");
            } else {
                let _ = write!(l, "{cell:>w$}");
            }
        }
        out.push_str(l.trim_end());
        out.push('\n');
    };
    line(&header);
    for row in &rows {
        line(&row.each_ref().map(String::as_str));
    }
    if let Some(note) = &report.note {
        let _ = writeln!(out, "note: {note}");
    }
    let _ = writeln!(
        out,
        "overall: {}",
        if report.pass { "pass" } else { "FAIL" }
    );
    out
}

fn point_cells(q: PointC2) -> String {
    let [a, b, c, d] = q.to_real();
    format!("{a:.17e},{b:.17e},{c:.17e},{d:.17e}")
}

pub fn grid_csv(samples: &[GridSample]) -> String {
    let mut out = String::from("re_z,im_z,re_w,im_w,T,g\n");
    for s in samples {
        let _ = writeln!(out, "{},{:.17e},{:.17e}", point_cells(s.point), s.t, s.g);
    }
    out
}

pub fn leaf_csv(grid: &[(f64, f64)], points: &[PointC2]) -> String {
    let mut out = String::from("s1,s2,re_z,im_z,re_w,im_w\n");
    for (&(s1, s2), &q) in grid.iter().zip(points) {
        let _ = writeln!(out, "{s1:.17e},{s2:.17e},{}", point_cells(q));
    }
    out
}
