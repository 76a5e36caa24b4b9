//! Zeros of `L(1 + it, f)` on a grid, refined and classified by the order
//! of vanishing seen from the right.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::BlockedSeries;
use crate::error::{check_range, Error, Result};
use crate::format::json17;
use crate::multfun::{eval_range, MultiplicativeSpec, OrdinateMultiset, ValueTable};
use crate::primes::FactorTable;

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroScanConfig {
    pub t_max: f64,
    pub grid_step: f64,
    pub truncation: u64,
    /// Grid minima must fall below this to be considered.
    pub threshold: f64,
    /// Values of `σ − 1` for the multiplicity fit.
    pub sigma_offsets: Vec<f64>,
    /// Largest allowed distance from the rounded slope.
    pub slope_tolerance: f64,
    /// A fit point is used only when its estimated truncation tail is at
    /// most this fraction of `|L|`.
    pub tail_ratio: f64,
}

impl Default for ZeroScanConfig {
    fn default() -> Self {
        Self {
            t_max: 5.0,
            grid_step: 0.01,
            truncation: 10_000_000,
            threshold: 0.05,
            sigma_offsets: vec![1e-1, 10f64.powf(-1.5), 1e-2],
            slope_tolerance: 0.25,
            tail_ratio: 0.2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroStatus {
    Accepted,
    /// Slope more than the tolerance away from an integer, or fewer than
    /// two fit points with a small enough truncation tail.
    Ambiguous,
    /// Slope rounds to zero: a dip, not a zero.
    Rejected,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroCandidate {
    pub gamma: f64,
    pub min_abs: f64,
    pub slope_fit: f64,
    pub multiplicity: u32,
    pub status: ZeroStatus,
    /// `(σ − 1, |L(σ + iγ)|)` at each fit point.
    pub residual_profile: Vec<(f64, f64)>,
    /// Estimated truncation tail `|Σ_{n≤X} f(n) n^{-iγ}| σ X^{-σ} / (σ − 1)` per fit point.
    pub tail_estimates: Vec<f64>,
    /// Number of fit points whose tail passed the reliability test.
    pub points_used: usize,
}

#[derive(Debug, Clone)]
pub struct ZeroReport {
    pub ordinates: OrdinateMultiset,
    pub candidates: Vec<ZeroCandidate>,
    pub t_scanned: f64,
    pub grid_step: f64,
    pub threshold: f64,
    pub truncation: u64,
    pub declared_d: u32,
}

impl ZeroReport {
    pub fn accepted(&self) -> impl Iterator<Item = &ZeroCandidate> {
        self.candidates.iter().filter(|c| c.status == ZeroStatus::Accepted)
    }

    /// Total multiplicity above the declared `D`, which cannot happen for a
    /// correctly declared class.
    pub fn exceeds_declared_d(&self) -> bool {
        self.ordinates.total_multiplicity() > self.declared_d
    }

    pub fn to_json(&self) -> Value {
        let cand = |c: &ZeroCandidate| {
            json!({
                "gamma": json17(c.gamma),
                "multiplicity": c.multiplicity,
                "slope_fit": json17(c.slope_fit),
                "min_abs": json17(c.min_abs),
                "residual_profile": c.residual_profile.iter()
                    .map(|&(d, v)| json!([json17(d), json17(v)]))
                    .collect::<Vec<_>>(),
                "tail_estimates": c.tail_estimates.iter().map(|&v| json17(v)).collect::<Vec<_>>(),
                "points_used": c.points_used,
            })
        };
        json!({
            "ordinates": self.accepted().map(cand).collect::<Vec<_>>(),
            "ambiguous": self.candidates.iter()
                .filter(|c| c.status == ZeroStatus::Ambiguous)
                .map(cand)
                .collect::<Vec<_>>(),
            "T": json17(self.t_scanned),
            "grid_step": json17(self.grid_step),
            "threshold": json17(self.threshold),
            "truncation": self.truncation,
            "exceeds_declared_d": self.exceeds_declared_d(),
        })
    }
}

/// [`zero_scan_with`] using the default threshold and fit points.
pub fn zero_scan(
    spec: &MultiplicativeSpec,
    t_max: f64,
    grid_step: f64,
    x: u64,
    table: &FactorTable,
) -> Result<ZeroReport> {
    let cfg = ZeroScanConfig { t_max, grid_step, truncation: x, ..ZeroScanConfig::default() };
    zero_scan_with(spec, &cfg, table)
}

pub fn zero_scan_with(spec: &MultiplicativeSpec, cfg: &ZeroScanConfig, table: &FactorTable) -> Result<ZeroReport> {
    if !(cfg.t_max > 0.0) {
        return Err(Error::InvalidArgument(format!("T must be positive, got {}", cfg.t_max)));
    }
    if !(cfg.grid_step > 0.0 && cfg.grid_step <= 0.05) {
        return Err(Error::InvalidArgument(format!("grid step must lie in (0, 0.05], got {}", cfg.grid_step)));
    }
    if cfg.sigma_offsets.len() < 2 || cfg.sigma_offsets.iter().any(|&d| !(d > 0.0)) {
        return Err(Error::InvalidArgument("need at least two positive σ − 1 offsets".into()));
    }
    check_range("X", cfg.truncation, table.limit())?;
    let vals = eval_range(spec, cfg.truncation, table)?;
    let candidates = scan_values(&vals, cfg);
    let mut ordinates = OrdinateMultiset::new();
    for c in candidates.iter().filter(|c| c.status == ZeroStatus::Accepted) {
        ordinates.insert(c.gamma, c.multiplicity);
    }
    Ok(ZeroReport {
        ordinates,
        candidates,
        t_scanned: cfg.t_max,
        grid_step: cfg.grid_step,
        threshold: cfg.threshold,
        truncation: cfg.truncation,
        declared_d: spec.declared_d(),
    })
}

fn golden_min(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..60 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Least-squares slope of `y` against `x`.
fn slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

fn scan_values(vals: &ValueTable, cfg: &ZeroScanConfig) -> Vec<ZeroCandidate> {
    let on_line = BlockedSeries::new(vals.values(), 1.0, cfg.t_max + cfg.grid_step);
    let steps = (2.0 * cfg.t_max / cfg.grid_step).round() as usize;
    let grid: Vec<f64> = (0..=steps).map(|j| -cfg.t_max + j as f64 * cfg.grid_step).collect();
    let abs: Vec<f64> = grid.par_iter().map(|&t| on_line.eval(t).norm()).collect();

    let mut minima: Vec<(f64, f64)> = Vec::new();
    for j in 0..abs.len() {
        let left = if j > 0 { abs[j - 1] } else { f64::INFINITY };
        let right = if j + 1 < abs.len() { abs[j + 1] } else { f64::INFINITY };
        if abs[j] < cfg.threshold && abs[j] <= left && abs[j] <= right {
            let lo = grid[j.saturating_sub(1)].max(-cfg.t_max);
            let hi = grid[(j + 1).min(grid.len() - 1)].min(cfg.t_max);
            let (g, v) = golden_min(|t| on_line.eval(t).norm(), lo, hi);
            let (g, v) = if v <= abs[j] { (g, v) } else { (grid[j], abs[j]) };
            match minima.last_mut() {
                Some(last) if (g - last.0).abs() <= 2.0 * cfg.grid_step => {
                    if v < last.1 {
                        *last = (g, v);
                    }
                }
                _ => minima.push((g, v)),
            }
        }
    }
    if minima.is_empty() {
        return Vec::new();
    }

    let t_reach = minima.iter().fold(1.0f64, |m, c| m.max(c.0.abs() + 1.0));
    let offsets = &cfg.sigma_offsets;
    let profiles: Vec<Vec<Complex64>> = offsets
        .iter()
        .map(|&d| {
            let series = BlockedSeries::new(vals.values(), 1.0 + d, t_reach);
            minima.iter().map(|&(g, _)| series.eval(g)).collect()
        })
        .collect();

    // partial sums of f(n) n^{-iγ}, which govern the tail of Σ f(n) n^{-σ-iγ}
    let unweighted = BlockedSeries::new(vals.values(), 0.0, t_reach);
    let x = vals.limit() as f64;
    minima
        .iter()
        .enumerate()
        .map(|(i, &(gamma, min_abs))| {
            let residual_profile: Vec<(f64, f64)> =
                offsets.iter().zip(&profiles).map(|(&d, p)| (d, p[i].norm())).collect();
            let s_x = unweighted.eval(gamma).norm();
            let tail_estimates: Vec<f64> =
                offsets.iter().map(|&d| s_x * (1.0 + d) * x.powf(-1.0 - d) / d).collect();
            let all: Vec<(f64, f64)> = residual_profile.iter().map(|&(d, v)| (d.ln(), v.ln())).collect();
            let used: Vec<(f64, f64)> = all
                .iter()
                .zip(residual_profile.iter().zip(&tail_estimates))
                .filter(|(_, (&(_, v), &tail))| tail <= cfg.tail_ratio * v)
                .map(|(p, _)| *p)
                .collect();
            let k = slope(if used.len() >= 2 { &used } else { &all });
            let rounded = k.round();
            let (status, multiplicity) = if used.len() < 2 {
                (ZeroStatus::Ambiguous, 0)
            } else if !k.is_finite() || rounded < 1.0 {
                (ZeroStatus::Rejected, 0)
            } else if (k - rounded).abs() > cfg.slope_tolerance {
                (ZeroStatus::Ambiguous, 0)
            } else {
                (ZeroStatus::Accepted, rounded as u32)
            };
            ZeroCandidate {
                gamma,
                min_abs,
                slope_fit: k,
                multiplicity,
                status,
                residual_profile,
                tail_estimates,
                points_used: used.len(),
            }
        })
        .collect()
}
