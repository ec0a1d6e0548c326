use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use super::ExperimentReport;
use crate::dynamics::TrajectoryRecord;
use crate::error::Result;

pub const REPORT_FILE: &str = "report.json";
pub const TRACE_FILE: &str = "energy_trace.csv";
pub const CHART_FILE: &str = "energy.svg";

/// Energy trace as CSV: `trial,update_index,neuron,energy`, one row per
/// update, trials numbered by position in `records`. Parallel steps have
/// `all` in the neuron column.
pub fn write_trace_csv<W: Write>(records: &[TrajectoryRecord], mut out: W) -> io::Result<()> {
    writeln!(out, "trial,update_index,neuron,energy")?;
    for (trial, record) in records.iter().enumerate() {
        for step in &record.steps {
            let neuron = step.neuron.map_or_else(|| "all".to_string(), |i| i.to_string());
            let energy = step.energy.map_or_else(String::new, |e| e.to_string());
            writeln!(out, "{trial},{},{neuron},{energy}", step.update)?;
        }
    }
    Ok(())
}

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// Line chart of energy against update index, one polyline per trial.
pub fn energy_chart_svg(report: &ExperimentReport) -> String {
    let (width, height, margin) = (720.0, 420.0, 60.0);
    let traces: Vec<Vec<f64>> = report
        .records
        .iter()
        .map(|r| r.energies().unwrap_or_default())
        .collect();
    let x_max = traces
        .iter()
        .map(|t| t.len().saturating_sub(1))
        .max()
        .unwrap_or(0)
        .max(1) as f64;
    let (mut lo, mut hi) = traces
        .iter()
        .flatten()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &e| {
            (lo.min(e), hi.max(e))
        });
    if !lo.is_finite() {
        (lo, hi) = (0.0, 0.0);
    }
    if hi - lo < 1e-12 {
        lo -= 1.0;
        hi += 1.0;
    }
    let px = |x: f64| margin + x / x_max * (width - 2.0 * margin);
    let py = |y: f64| height - margin - (y - lo) / (hi - lo) * (height - 2.0 * margin);

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{} energy, N = {}</text>"#,
        width / 2.0,
        report.config.activation.kind(),
        report.config.n
    );
    let (x0, y0, x1, y1) = (px(0.0), py(lo), px(x_max), py(hi));
    let _ = writeln!(
        svg,
        r#"<path d="M{x0:.1} {y1:.1} L{x0:.1} {y0:.1} L{x1:.1} {y0:.1}" fill="none" stroke="black"/>"#
    );
    for (value, y) in [(lo, y0), (hi, y1)] {
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="end">{value:.2}</text>"#,
            x0 - 6.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{x0:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="middle">0</text>"#,
        y0 + 16.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{x1:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="middle">{x_max}</text>"#,
        y0 + 16.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle">update</text>"#,
        width / 2.0,
        height - 18.0
    );
    for (i, trace) in traces.iter().enumerate() {
        let points: Vec<String> = trace
            .iter()
            .enumerate()
            .map(|(x, &e)| format!("{:.2},{:.2}", px(x as f64), py(e)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"><title>trial {i}</title></polyline>"#,
            points.join(" "),
            PALETTE[i % PALETTE.len()]
        );
    }
    svg.push_str("</svg>\n");
    svg
}

#[derive(Serialize)]
struct ReportFile<'a> {
    #[serde(flatten)]
    report: &'a ExperimentReport,
    trace_csv: &'a str,
    chart_svg: &'a str,
}

/// Writes `report.json`, `energy_trace.csv` and `energy.svg` into `dir`,
/// creating it if needed.
pub fn write_artifacts(report: &ExperimentReport, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let file = ReportFile {
        report,
        trace_csv: TRACE_FILE,
        chart_svg: CHART_FILE,
    };
    let mut json = serde_json::to_string_pretty(&file)?;
    json.push('\n');
    fs::write(dir.join(REPORT_FILE), json)?;

    let mut csv = Vec::new();
    write_trace_csv(&report.records, &mut csv)?;
    fs::write(dir.join(TRACE_FILE), csv)?;
    fs::write(dir.join(CHART_FILE), energy_chart_svg(report))?;
    Ok(())
}
