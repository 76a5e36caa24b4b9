//! The end-to-end pipeline: class check, ordinates, discrepancy, envelope,
//! fitted constant and verdicts.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Serialize;

use super::catalog;
use crate::error::{Error, Result};
use crate::lseries::{zero_scan_with, ZeroReport, ZeroScanConfig};
use crate::multfun::{verify_class, ClassReport, OrdinateMultiset};
use crate::primes::FactorTable;
use crate::sums::{discrepancy_grid, SumGrid};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "mode", content = "ordinates")]
pub enum GammaMode {
    Declared(Vec<f64>),
    Scanned,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportFormat {
    Csv,
    Json,
    Svg,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            "svg" => Ok(Self::Svg),
            _ => Err(Error::MalformedParameter { name: "format".into(), value: s.into() }),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub function_name: String,
    /// Class parameter; `None` uses the function's declared value.
    pub d: Option<u32>,
    pub a: f64,
    pub x_grid: Vec<u64>,
    /// Height for the zero scan and the envelope's second term.
    pub t: f64,
    pub gamma_mode: GammaMode,
    /// Permits `A ≤ D + 1`, where no decay is expected.
    pub remark_mode: bool,
    pub scan_step: f64,
    /// Largest prime `p` and exponent used by the class check.
    pub class_p_max: u64,
    pub class_a_max: u32,
    /// Range of `n` for the `τ_D` comparisons in the class check.
    pub class_x: u64,
    pub output_path: Option<PathBuf>,
    pub format: ReportFormat,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            function_name: "moebius".into(),
            d: None,
            a: 3.0,
            x_grid: vec![10_000, 100_000, 1_000_000, 10_000_000],
            t: 50.0,
            gamma_mode: GammaMode::Scanned,
            remark_mode: false,
            scan_step: 0.01,
            class_p_max: 1000,
            class_a_max: 12,
            class_x: 100_000,
            output_path: None,
            format: ReportFormat::Json,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub passed: bool,
    pub value: Option<f64>,
    pub note: String,
}

impl Verdict {
    fn new(passed: bool, value: Option<f64>, note: impl Into<String>) -> Self {
        Self { passed, value, note: note.into() }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub d: u32,
    pub gamma: OrdinateMultiset,
    pub zero_report: Option<ZeroReport>,
    pub class: Option<ClassReport>,
    pub grid: SumGrid,
    /// Envelope shape per grid point, before the fitted constant.
    pub envelope_shape: Vec<f64>,
    pub fitted_c: f64,
    pub verdicts: BTreeMap<String, Verdict>,
}

impl ExperimentReport {
    /// `C · envelope(x)` per grid point.
    pub fn rhs_envelope(&self) -> Vec<f64> {
        self.envelope_shape.iter().map(|e| self.fitted_c * e).collect()
    }

    pub fn all_passed(&self) -> bool {
        self.verdicts.values().all(|v| v.passed)
    }
}

/// `x (log log x)^{D+m} / (log x)^{min(1, A−D−1)/2} + x (log T)^{D+m} / √T`.
pub fn envelope(x: f64, d: u32, m: u32, a: f64, t: f64) -> f64 {
    let e = (d + m) as i32;
    let lx = x.ln();
    x * lx.ln().powi(e) / lx.powf((a - d as f64 - 1.0).min(1.0) / 2.0) + x * t.ln().powi(e) / t.sqrt()
}

pub fn run_experiment(cfg: &ExperimentConfig, table: &FactorTable) -> Result<ExperimentReport> {
    let spec = catalog(&cfg.function_name)?;
    let d = cfg.d.unwrap_or(spec.declared_d());
    if !cfg.remark_mode && !(cfg.a > d as f64 + 1.0) {
        return Err(Error::InvalidArgument(format!(
            "A = {} must exceed D + 1 = {} outside remark mode",
            cfg.a,
            d + 1
        )));
    }
    if cfg.x_grid.is_empty() || cfg.x_grid[0] < 3 {
        return Err(Error::InvalidArgument("x grid must be non-empty and start at 3 or more".into()));
    }
    if !(cfg.t > 1.0) {
        return Err(Error::InvalidArgument(format!("T must exceed 1, got {}", cfg.t)));
    }
    let x_max = *cfg.x_grid.last().unwrap();
    let mut verdicts = BTreeMap::new();

    let class = match verify_class(&spec, d, cfg.class_p_max, cfg.class_a_max, cfg.class_x.min(x_max), table) {
        Ok(c) => {
            verdicts.insert(
                "class_check".into(),
                Verdict::new(c.pass, Some(c.lambda_ratio.ratio), format!("max |Λ_f|/Λ against D = {d}")),
            );
            Some(c)
        }
        Err(e) => {
            verdicts.insert("class_check".into(), Verdict::new(false, None, e.to_string()));
            None
        }
    };

    let (gamma, zero_report) = match &cfg.gamma_mode {
        GammaMode::Declared(g) => (OrdinateMultiset::from_ordinates(g), None),
        GammaMode::Scanned => {
            let scan = ZeroScanConfig {
                t_max: cfg.t,
                grid_step: cfg.scan_step,
                truncation: x_max,
                ..ZeroScanConfig::default()
            };
            let r = zero_scan_with(&spec, &scan, table)?;
            (r.ordinates.clone(), Some(r))
        }
    };
    let m = gamma.total_multiplicity();
    verdicts.insert(
        "zero_count".into(),
        Verdict::new(m <= d, Some(m as f64), format!("total multiplicity of Γ against D = {d}")),
    );

    let grid = discrepancy_grid(&spec, &gamma, &cfg.x_grid, table)?;
    let envelope_shape: Vec<f64> =
        cfg.x_grid.iter().map(|&x| envelope(x as f64, d, m, cfg.a, cfg.t)).collect();
    let fitted_c = grid
        .values
        .iter()
        .zip(&envelope_shape)
        .map(|(v, e)| v.norm() / e)
        .fold(0.0f64, f64::max);
    verdicts.insert(
        "fitted_constant".into(),
        Verdict::new(fitted_c.is_finite(), Some(fitted_c), "smallest C with |E(x)| ≤ C·envelope on the grid"),
    );

    let scaled: Vec<f64> = grid.values.iter().zip(&cfg.x_grid).map(|(v, &x)| v.norm() / x as f64).collect();
    let monotone = scaled.windows(2).all(|w| w[1] <= w[0]);
    verdicts.insert(
        "monotone_decay".into(),
        Verdict::new(monotone, None, "|E(x)|/x non-increasing along the grid"),
    );
    let (first, last) = (scaled[0], *scaled.last().unwrap());
    let trend = last <= 0.5 * first;
    verdicts.insert(
        "decay_trend".into(),
        Verdict::new(trend, Some(if first > 0.0 { last / first } else { 0.0 }), "|E|/x at the largest x at most half its value at the smallest x"),
    );
    if cfg.remark_mode {
        verdicts.insert(
            "remark_mode".into(),
            Verdict::new(true, Some(cfg.a - d as f64 - 1.0), "A − D − 1; decay is not expected when this is ≤ 0"),
        );
    }

    Ok(ExperimentReport {
        config: cfg.clone(),
        d,
        gamma,
        zero_report,
        class,
        grid,
        envelope_shape,
        fitted_c,
        verdicts,
    })
}
