use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use super::{ComparisonReport, ComputedRecord, TrajectoryError};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Everything written by [`emit_report`].
#[derive(Debug, Clone)]
pub struct Report<'a> {
    pub plugin_name: &'a str,
    pub joint_names: Vec<String>,
    pub records: &'a [ComputedRecord],
    pub comparison: Option<&'a ComparisonReport>,
    /// Configuration echo included in the summary.
    pub config: Value,
}

#[derive(Serialize)]
struct Summary<'a> {
    tool: &'static str,
    version: &'static str,
    plugin_name: &'a str,
    dof: usize,
    joints: &'a [String],
    sample_count: usize,
    metrics: Option<Metrics>,
    config: &'a Value,
}

#[derive(Serialize)]
struct Metrics {
    per_joint_rms: Vec<f64>,
    per_joint_max_abs: Vec<f64>,
    per_joint_mean: Vec<f64>,
}

/// Per-sample table: time, computed torques, measured torques and errors when
/// available, then the diagonal of `H`, `C·q̇`, `g` and `f`.
pub fn render_csv(report: &Report) -> Result<String, TrajectoryError> {
    let first = report.records.first().ok_or(TrajectoryError::Empty)?;
    let dof = first.torques.len();
    let columns = |prefix: &str| (0..dof).map(|j| format!("{prefix}{j}")).collect::<Vec<_>>();
    let mut header = vec!["t".to_string()];
    header.extend(columns("tau"));
    if report.comparison.is_some() {
        header.extend(columns("tau_measured"));
        header.extend(columns("error"));
    }
    for prefix in ["h", "c", "g", "f"] {
        header.extend(columns(prefix));
    }

    let mut out = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| TrajectoryError::Io {
        path: "report".into(),
        source: e.into(),
    };
    out.write_record(&header).map_err(csv_err)?;
    for (i, r) in report.records.iter().enumerate() {
        let mut row = vec![r.t.to_string()];
        row.extend(r.torques.iter().map(f64::to_string));
        if let Some(cmp) = report.comparison {
            let m = &cmp.measured[i];
            row.extend(m.iter().map(f64::to_string));
            row.extend((&r.torques - m).iter().map(f64::to_string));
        }
        for v in [&r.inertia_diagonal, &r.coriolis, &r.gravity, &r.friction] {
            row.extend(v.iter().map(f64::to_string));
        }
        out.write_record(&row).map_err(csv_err)?;
    }
    let bytes = out.into_inner().map_err(|e| TrajectoryError::Io {
        path: "report".into(),
        source: e.into_error(),
    })?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

/// JSON summary: tool version, metrics and the configuration echo.
pub fn render_summary(report: &Report) -> Result<String, TrajectoryError> {
    if report.records.is_empty() {
        return Err(TrajectoryError::Empty);
    }
    let summary = Summary {
        tool: "dynsolve",
        version: TOOL_VERSION,
        plugin_name: report.plugin_name,
        dof: report.records[0].torques.len(),
        joints: &report.joint_names,
        sample_count: report.records.len(),
        metrics: report.comparison.map(|c| Metrics {
            per_joint_rms: c.per_joint_rms.iter().copied().collect(),
            per_joint_max_abs: c.per_joint_max_abs.iter().copied().collect(),
            per_joint_mean: c.per_joint_mean.iter().copied().collect(),
        }),
        config: &report.config,
    };
    let mut text = serde_json::to_string_pretty(&summary).expect("summary is plain data");
    text.push('\n');
    Ok(text)
}

/// Writes `<out>.csv` and `<out>.json` and returns their paths. Nothing is
/// written when there are no records.
pub fn emit_report(report: &Report, out: &Path) -> Result<(PathBuf, PathBuf), TrajectoryError> {
    let csv = render_csv(report)?;
    let json = render_summary(report)?;
    let csv_path = out.with_extension("csv");
    let json_path = out.with_extension("json");
    for (path, text) in [(&csv_path, &csv), (&json_path, &json)] {
        std::fs::write(path, text).map_err(|source| TrajectoryError::Io {
            path: path.display().to_string(),
            source,
        })?;
    }
    Ok((csv_path, json_path))
}
