//! CSV, JSON and SVG renderings of an [`ExperimentReport`].

use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Map, Value};

use super::{ExperimentReport, GammaMode, ReportFormat};
use crate::error::{Error, Result};
use crate::format::{json17, sci17};

pub const CSV_HEADER: &str = "x,disc_re,disc_im,disc_abs,envelope";

pub fn render_csv(report: &ExperimentReport) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for ((&x, v), env) in report.grid.x_points.iter().zip(&report.grid.values).zip(report.rhs_envelope()) {
        let _ = writeln!(out, "{x},{},{},{},{}", sci17(v.re), sci17(v.im), sci17(v.norm()), sci17(env));
    }
    for (name, v) in &report.verdicts {
        let value = v.value.map_or(String::new(), sci17);
        let _ = writeln!(out, "# verdict,{name},{},{value}", if v.passed { "pass" } else { "fail" });
    }
    out
}

fn config_json(report: &ExperimentReport) -> Value {
    let c = &report.config;
    let gamma_mode = match &c.gamma_mode {
        GammaMode::Declared(g) => json!({"mode": "declared", "ordinates": g.iter().map(|&v| json17(v)).collect::<Vec<_>>()}),
        GammaMode::Scanned => json!({"mode": "scanned"}),
    };
    json!({
        "function_name": c.function_name,
        "D": report.d,
        "A": json17(c.a),
        "x_grid": c.x_grid,
        "T": json17(c.t),
        "gamma_mode": gamma_mode,
        "remark_mode": c.remark_mode,
        "scan_step": json17(c.scan_step),
    })
}

pub fn render_json(report: &ExperimentReport) -> String {
    let ordinates: Vec<Value> = report
        .gamma
        .ordinates()
        .iter()
        .map(|o| json!({"gamma": json17(o.gamma), "multiplicity": o.multiplicity}))
        .collect();
    let mut gamma = json!({
        "ordinates": ordinates,
        "total_multiplicity": report.gamma.total_multiplicity(),
    });
    if let Some(z) = &report.zero_report {
        gamma["scan"] = z.to_json();
    }
    let grid: Vec<Value> = report
        .grid
        .x_points
        .iter()
        .zip(&report.grid.values)
        .zip(report.rhs_envelope())
        .map(|((&x, v), env)| {
            json!({
                "x": x,
                "disc_re": json17(v.re),
                "disc_im": json17(v.im),
                "disc_abs": json17(v.norm()),
                "envelope": json17(env),
            })
        })
        .collect();
    let mut verdicts = Map::new();
    for (name, v) in &report.verdicts {
        verdicts.insert(
            name.clone(),
            json!({"passed": v.passed, "value": v.value.map_or(Value::Null, json17), "note": v.note}),
        );
    }
    let doc = json!({
        "config": config_json(report),
        "gamma": gamma,
        "grid": grid,
        "verdicts": verdicts,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
    s.push('\n');
    s
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;

/// Log–log plot of `|E(x)|/x` and `C·envelope(x)/x`; zero values are skipped.
pub fn render_svg(report: &ExperimentReport) -> String {
    let xs: Vec<f64> = report.grid.x_points.iter().map(|&x| x as f64).collect();
    let series = [
        ("|E(x)|/x", "#1f77b4", report.grid.values.iter().zip(&xs).map(|(v, x)| v.norm() / x).collect::<Vec<_>>()),
        ("C*envelope/x", "#d62728", report.rhs_envelope().iter().zip(&xs).map(|(e, x)| e / x).collect()),
    ];
    let logs: Vec<f64> = series.iter().flat_map(|s| s.2.iter()).filter(|v| **v > 0.0).map(|v| v.log10()).collect();
    let (mut y0, mut y1) = logs.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if !y0.is_finite() {
        (y0, y1) = (-1.0, 0.0);
    }
    if y1 - y0 < 1e-9 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let x0 = xs.first().map_or(0.0, |x| x.log10());
    let mut x1 = xs.last().map_or(1.0, |x| x.log10());
    if x1 - x0 < 1e-9 {
        x1 = x0 + 1.0;
    }
    let px = |lx: f64| MARGIN + (lx - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let py = |ly: f64| HEIGHT - MARGIN - (ly - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<path d="M{m} {m} V{b} H{r}" fill="none" stroke="black"/>"#,
        m = MARGIN,
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">log10 x ({x0:.2} to {x1:.2})</text>"#,
        WIDTH / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        out,
        r#"<text x="15" y="{}" font-size="12" transform="rotate(-90 15 {})" text-anchor="middle">log10 value ({y0:.2} to {y1:.2})</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    for (i, (label, color, ys)) in series.iter().enumerate() {
        let pts: Vec<String> = xs
            .iter()
            .zip(ys)
            .filter(|(_, y)| **y > 0.0)
            .map(|(x, y)| format!("{:.3},{:.3}", px(x.log10()), py(y.log10())))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline data-series="{label}" points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            pts.join(" ")
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-size="12" fill="{color}">{label}</text>"#,
            WIDTH - MARGIN - 110.0,
            MARGIN + 15.0 * i as f64
        );
    }
    out.push_str("</svg>\n");
    out
}

pub fn render(report: &ExperimentReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Csv => render_csv(report),
        ReportFormat::Json => render_json(report),
        ReportFormat::Svg => render_svg(report),
    }
}

pub fn emit_report(report: &ExperimentReport, format: ReportFormat, path: &Path) -> Result<()> {
    std::fs::write(path, render(report, format)).map_err(|source| Error::Io { path: path.to_path_buf(), source })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{run_experiment, ExperimentConfig};
    use crate::primes::FactorTable;

    fn report() -> ExperimentReport {
        let t = FactorTable::new(100_000).unwrap();
        let cfg = ExperimentConfig {
            function_name: "legendre_chi:5".into(),
            gamma_mode: GammaMode::Declared(vec![]),
            x_grid: vec![1000, 10_000, 100_000],
            ..ExperimentConfig::default()
        };
        run_experiment(&cfg, &t).unwrap()
    }

    #[test]
    fn formats() {
        let r = report();
        let csv = render_csv(&r);
        assert!(csv.starts_with("x,disc_re,disc_im,disc_abs,envelope\n1000,"));
        assert!(csv.contains("# verdict,class_check,pass"));
        let j: Value = serde_json::from_str(&render_json(&r)).unwrap();
        let keys: Vec<&String> = j.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["config", "gamma", "grid", "verdicts"]);
        assert_eq!(j["grid"].as_array().unwrap().len(), 3);
        let svg = render_svg(&r);
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.starts_with("<svg"));
        assert_eq!(render_json(&r), render_json(&report()));
    }

    #[test]
    fn write_and_fail() {
        let r = report();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.csv");
        emit_report(&r, ReportFormat::Csv, &p).unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), render_csv(&r));
        let bad = dir.path().join("missing").join("r.csv");
        match emit_report(&r, ReportFormat::Csv, &bad) {
            Err(Error::Io { path, .. }) => assert_eq!(path, bad),
            other => panic!("expected I/O error, got {other:?}"),
        }
    }
}
