//! Report serialization: deterministic CSV emission and a plain-text
//! gate summary.
//!
//! CSV is the artifact contract — any plotting tool can consume it —
//! so the bytes are pinned down: UTF-8, `.` decimal point, 17
//! significant digits (enough to reproduce every f64 exactly), LF line
//! endings, and a total row order (first column ascending, then curve
//! name).  Rerunning an emitter on the same data yields an identical
//! file.

use crate::diagnostics::ExperimentReport;
use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

fn push_row(out: &mut String, x: f64, name: &str, value: f64) {
    // {:.16e} = one leading digit + 16 fractional = 17 significant.
    let _ = writeln!(out, "{x:.16e},{name},{value:.16e}");
}

fn sorted_rows<'a>(rows: impl Iterator<Item = (f64, &'a str, f64)>) -> Vec<(f64, &'a str, f64)> {
    let mut rows: Vec<_> = rows.collect();
    rows.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(b.1)));
    rows
}

/// Render a report's series as `time,functional,value` CSV.
pub fn report_csv(report: &ExperimentReport) -> String {
    let mut out = String::from("time,functional,value\n");
    for (t, name, v) in sorted_rows(report.series().iter().map(|(t, n, v)| (*t, n.as_str(), *v))) {
        push_row(&mut out, t, name, v);
    }
    out
}

/// Render generic plot curves as `x,curve,value` CSV (profile dumps,
/// figure data, snapshot evolutions).
pub fn curves_csv<'a>(rows: impl IntoIterator<Item = (f64, &'a str, f64)>) -> String {
    let mut out = String::from("x,curve,value\n");
    for (x, name, v) in sorted_rows(rows.into_iter()) {
        push_row(&mut out, x, name, v);
    }
    out
}

/// Write pre-rendered text, mapping failures to an error naming the path.
pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)
                .map_err(|e| Error::Io(format!("creating {}: {e}", dir.display())))?;
        }
    }
    std::fs::write(path, text).map_err(|e| Error::Io(format!("writing {}: {e}", path.display())))
}

/// Multi-line human summary: fitted rates, warnings, and one PASS/FAIL
/// line per gate.
pub fn render_summary(report: &ExperimentReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} (m = {}, N = {})",
        report.scenario, report.params.m, report.params.dim
    );
    for (name, rate) in &report.fitted_rates {
        let _ = writeln!(
            out,
            "  rate {name}: t^-{:.4} (fit residual {:.2e})",
            rate.exponent, rate.residual
        );
    }
    for w in &report.warnings {
        let _ = writeln!(out, "  warning: {w}");
    }
    for g in &report.gates {
        let _ = writeln!(out, "  {}: {} -- {}", if g.pass { "PASS" } else { "FAIL" }, g.name, g.detail);
    }
    out
}
