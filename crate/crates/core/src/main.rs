use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use smallsums::format::{json17, sci17};
use smallsums::harness::{
    catalog, kappa_counterexample, parse_flat_config, render, run_experiment, twisted_prime_sum_grid,
    ExperimentConfig, FlatConfig, GammaMode, ReportFormat, CATALOG_FORMS,
};
use smallsums::lseries::{evaluate_l, evaluate_l_on_line, zero_scan_with, ZeroScanConfig, ZeroStatus};
use smallsums::multfun::lambda_of;
use smallsums::primes::{FactorTable, DEFAULT_LIMIT};
use smallsums::sieveweights::{build_weights_with, primes_up_to, rough_count_bracket, sandwich_check};
use smallsums::{Complex64, Error, OrdinateMultiset, Result};

#[derive(Parser)]
#[command(name = "smallsums", version, about = "Multiplicative functions with small partial sums")]
struct Cli {
    /// Largest table size any command may build (accepts 1e7 style).
    #[arg(long, global = true, value_parser = parse_count)]
    limit: Option<u64>,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// csv, json or svg (svg only for `verify`).
    #[arg(long, global = true)]
    format: Option<String>,
    /// Flat `key = value` file supplying defaults for any option.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// L(s, f) at s = sigma + i t (partial summation on sigma = 1).
    Eval {
        function: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        sigma: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        t: Option<f64>,
        /// Truncation point.
        #[arg(long, value_parser = parse_count)]
        n: Option<u64>,
    },
    /// Λ_f on prime powers p^k with p ≤ p-max, k ≤ a-max.
    Lambda {
        function: Option<String>,
        #[arg(long, value_parser = parse_count)]
        p_max: Option<u64>,
        #[arg(long)]
        a_max: Option<u32>,
    },
    /// Zeros of L(1 + it, f) for |t| ≤ t-max.
    Zeros {
        function: Option<String>,
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long)]
        step: Option<f64>,
        #[arg(long, value_parser = parse_count)]
        x: Option<u64>,
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Full pipeline: class check, Γ, discrepancy, envelope and verdicts.
    Verify {
        function: Option<String>,
        #[arg(long)]
        d: Option<u32>,
        #[arg(long)]
        a: Option<f64>,
        /// Comma-separated ascending x values.
        #[arg(long)]
        x_grid: Option<String>,
        #[arg(long)]
        t: Option<f64>,
        /// `scanned`, or a comma-separated list of ordinates (`none` for empty).
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<String>,
        /// Allow A ≤ D + 1.
        #[arg(long)]
        remark: bool,
    },
    /// Build sieve weights and check the sandwich inequality up to n.
    SieveDemo {
        #[arg(long)]
        z: Option<f64>,
        #[arg(long)]
        u: Option<f64>,
        #[arg(long, value_parser = parse_count)]
        n: Option<u64>,
        #[arg(long)]
        beta: Option<f64>,
        /// Write the weight table instead of the summary.
        #[arg(long)]
        weights: bool,
    },
    /// Small demonstrations beside the main pipeline.
    Remark {
        #[command(subcommand)]
        which: RemarkCommand,
    },
    /// List the catalog grammar.
    Catalog,
}

#[derive(Subcommand)]
enum RemarkCommand {
    /// τ_{-κ} with empty Γ: |E(x)|/x stays near κ.
    Counterexample {
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long, value_parser = parse_count)]
        x: Option<u64>,
    },
    /// Σ_{p≤x} p^{iγ} log p against x^{1+iγ}/(1+iγ).
    TwistSum {
        /// Comma-separated γ values.
        #[arg(long, allow_hyphen_values = true)]
        gammas: Option<String>,
        #[arg(long)]
        x_grid: Option<String>,
    },
}

/// Integer counts, also written as `1e7` or `2.5e6`.
fn parse_count(s: &str) -> std::result::Result<u64, String> {
    let s = s.trim().replace('_', "");
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.fract() == 0.0 && v <= u64::MAX as f64 => Ok(v as u64),
        _ => Err(format!("`{s}` is not a non-negative integer")),
    }
}

fn parse_list<T>(raw: &str, name: &str, item: impl Fn(&str) -> Option<T>) -> Result<Vec<T>> {
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| item(s).ok_or_else(|| Error::MalformedParameter { name: name.into(), value: s.into() }))
        .collect()
}

fn count_list(raw: &str, name: &str) -> Result<Vec<u64>> {
    parse_list(raw, name, |s| parse_count(s).ok())
}

fn real_list(raw: &str, name: &str) -> Result<Vec<f64>> {
    parse_list(raw, name, |s| s.parse().ok())
}

/// Command-line value, else config value, else default.
struct Resolver {
    config: FlatConfig,
}

impl Resolver {
    fn num<T: std::str::FromStr>(&self, cli: Option<T>, key: &str, default: T) -> Result<T> {
        Ok(match cli {
            Some(v) => v,
            None => self.config.parse_value(key)?.unwrap_or(default),
        })
    }

    fn count(&self, cli: Option<u64>, key: &str, default: u64) -> Result<u64> {
        match (cli, self.config.get(key)) {
            (Some(v), _) => Ok(v),
            (None, Some(raw)) => {
                parse_count(raw).map_err(|_| Error::MalformedParameter { name: key.into(), value: raw.into() })
            }
            (None, None) => Ok(default),
        }
    }

    fn text(&self, cli: Option<String>, key: &str, default: &str) -> String {
        cli.or_else(|| self.config.get(key).map(str::to_string)).unwrap_or_else(|| default.to_string())
    }

    fn flag(&self, cli: bool, key: &str) -> Result<bool> {
        Ok(cli || self.config.parse_value::<bool>(key)?.unwrap_or(false))
    }
}

struct Output {
    text: String,
    all_passed: bool,
}

struct Finished {
    output: Output,
    path: Option<PathBuf>,
}

fn table_for(needed: u64, limit: u64) -> Result<FactorTable> {
    if needed > limit {
        return Err(Error::OutOfRange { what: "required table size", value: needed, limit });
    }
    FactorTable::new(needed.max(2))
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json");
    s.push('\n');
    s
}

fn complex_json(z: Complex64) -> Value {
    json!([json17(z.re), json17(z.im)])
}

fn run(cli: Cli) -> Result<Finished> {
    let config = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.clone(), source })?;
            parse_flat_config(&text)?
        }
        None => FlatConfig::default(),
    };
    let r = Resolver { config };
    if let Some(n) = match cli.threads {
        Some(n) => Some(n),
        None => r.config.parse_value::<usize>("threads")?,
    } {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| Error::InvalidArgument(format!("cannot configure {n} threads: {e}")))?;
    }
    let path = cli.out.clone().or_else(|| r.config.get("out").map(PathBuf::from));
    let output = dispatch(cli, &r)?;
    Ok(Finished { output, path })
}

fn dispatch(cli: Cli, r: &Resolver) -> Result<Output> {
    let limit = r.count(cli.limit, "limit", DEFAULT_LIMIT)?;
    let format_name = r.text(cli.format.clone(), "format", "json");
    let format: ReportFormat = format_name.parse()?;
    let not_svg = |cmd: &str| -> Result<()> {
        if format == ReportFormat::Svg {
            Err(Error::InvalidArgument(format!("svg output is only available for `verify`, not `{cmd}`")))
        } else {
            Ok(())
        }
    };

    match cli.command {
        Command::Catalog => {
            let mut text = String::new();
            for f in CATALOG_FORMS {
                let _ = writeln!(text, "{f}");
            }
            Ok(Output { text, all_passed: true })
        }
        Command::Eval { function, sigma, t, n } => {
            not_svg("eval")?;
            let spec = catalog(&r.text(function, "function", "moebius"))?;
            let sigma = r.num(sigma, "sigma", 2.0)?;
            let t = r.num(t, "t", 0.0)?;
            let n = r.count(n, "n", 1_000_000)?;
            let table = table_for(n, limit)?;
            let res = if sigma == 1.0 {
                evaluate_l_on_line(&spec, &OrdinateMultiset::new(), t, n, &table)?
            } else {
                evaluate_l(&spec, Complex64::new(sigma, t), n, &table)?
            };
            let text = match format {
                ReportFormat::Csv => format!(
                    "function,sigma,t,n,re,im,tail_bound,rigorous\n{},{},{},{n},{},{},{},{}\n",
                    spec.name(),
                    sci17(sigma),
                    sci17(t),
                    sci17(res.value.re),
                    sci17(res.value.im),
                    sci17(res.tail_bound),
                    res.rigorous
                ),
                _ => pretty(&json!({
                    "function": spec.name(),
                    "s": complex_json(Complex64::new(sigma, t)),
                    "value": complex_json(res.value),
                    "truncation": res.truncation,
                    "tail_bound": json17(res.tail_bound),
                    "rigorous": res.rigorous,
                })),
            };
            Ok(Output { text, all_passed: true })
        }
        Command::Lambda { function, p_max, a_max } => {
            not_svg("lambda")?;
            let spec = catalog(&r.text(function, "function", "moebius"))?;
            let p_max = r.count(p_max, "p_max", 100)?;
            let a_max = r.num(a_max, "a_max", 4)?;
            let map = lambda_of(&spec, p_max, a_max);
            let text = match format {
                ReportFormat::Csv => {
                    let mut s = String::from("p,k,re,im\n");
                    for ((p, k), v) in map.iter() {
                        let _ = writeln!(s, "{p},{k},{},{}", sci17(v.re), sci17(v.im));
                    }
                    s
                }
                _ => pretty(&json!({
                    "function": spec.name(),
                    "values": map.iter()
                        .map(|((p, k), v)| json!({"p": p, "k": k, "value": complex_json(v)}))
                        .collect::<Vec<_>>(),
                })),
            };
            Ok(Output { text, all_passed: true })
        }
        Command::Zeros { function, t_max, step, x, threshold } => {
            not_svg("zeros")?;
            let spec = catalog(&r.text(function, "function", "moebius"))?;
            let defaults = ZeroScanConfig::default();
            let cfg = ZeroScanConfig {
                t_max: r.num(t_max, "t_max", 50.0)?,
                grid_step: r.num(step, "step", defaults.grid_step)?,
                truncation: r.count(x, "x", defaults.truncation)?,
                threshold: r.num(threshold, "threshold", defaults.threshold)?,
                ..defaults
            };
            let table = table_for(cfg.truncation, limit)?;
            let rep = zero_scan_with(&spec, &cfg, &table)?;
            let text = match format {
                ReportFormat::Csv => {
                    let mut s = String::from("gamma,multiplicity,slope_fit,min_abs,status\n");
                    for c in &rep.candidates {
                        let status = match c.status {
                            ZeroStatus::Accepted => "accepted",
                            ZeroStatus::Ambiguous => "ambiguous",
                            ZeroStatus::Rejected => "rejected",
                        };
                        let _ = writeln!(
                            s,
                            "{},{},{},{},{status}",
                            sci17(c.gamma),
                            c.multiplicity,
                            sci17(c.slope_fit),
                            sci17(c.min_abs)
                        );
                    }
                    s
                }
                _ => pretty(&rep.to_json()),
            };
            Ok(Output { text, all_passed: !rep.exceeds_declared_d() })
        }
        Command::Verify { function, d, a, x_grid, t, gamma, remark } => {
            let defaults = ExperimentConfig::default();
            let x_grid = match r.text(x_grid, "x_grid", "") {
                s if s.is_empty() => defaults.x_grid.clone(),
                s => count_list(&s, "x_grid")?,
            };
            let gamma_mode = match r.text(gamma, "gamma", "scanned").as_str() {
                "scanned" | "scan" => GammaMode::Scanned,
                "none" | "empty" => GammaMode::Declared(Vec::new()),
                list => GammaMode::Declared(real_list(list, "gamma")?),
            };
            let d = match d {
                Some(v) => Some(v),
                None => r.config.parse_value("d")?,
            };
            let cfg = ExperimentConfig {
                function_name: r.text(function, "function", &defaults.function_name),
                d,
                a: r.num(a, "a", defaults.a)?,
                x_grid,
                t: r.num(t, "t", defaults.t)?,
                gamma_mode,
                remark_mode: r.flag(remark, "remark")?,
                output_path: cli.out.clone().or_else(|| r.config.get("out").map(PathBuf::from)),
                format,
                ..defaults
            };
            let table = table_for(cfg.x_grid.last().copied().unwrap_or(2), limit)?;
            let rep = run_experiment(&cfg, &table)?;
            Ok(Output { text: render(&rep, format), all_passed: rep.all_passed() })
        }
        Command::SieveDemo { z, u, n, beta, weights } => {
            not_svg("sieve-demo")?;
            let z = r.num(z, "z", 30.0)?;
            let u = r.num(u, "u", 3.0)?;
            let n = r.count(n, "n", 100_000)?;
            let beta = r.num(beta, "beta", smallsums::sieveweights::DEFAULT_BETA)?;
            let sys = build_weights_with(z, u, &primes_up_to(z), beta, smallsums::sieveweights::DEFAULT_SUPPORT_CAP)?;
            if r.flag(weights, "weights")? {
                return Ok(Output { text: sys.to_csv(), all_passed: true });
            }
            let table = table_for(n, limit)?;
            let sandwich = sandwich_check(&sys, n, &table)?;
            let bracket = rough_count_bracket(&sys, n);
            let passed = sandwich.passed() && bracket.holds();
            let text = match format {
                ReportFormat::Csv => format!(
                    "z,u,beta,support,n,violations,lower,count,upper\n{},{},{},{},{n},{},{},{},{}\n",
                    sci17(z),
                    sci17(u),
                    sci17(beta),
                    sys.weights().len(),
                    sandwich.violation_count,
                    bracket.lower,
                    bracket.count,
                    bracket.upper
                ),
                _ => pretty(&json!({
                    "z": json17(z),
                    "u": json17(u),
                    "beta": json17(beta),
                    "support": sys.weights().len(),
                    "n": n,
                    "violation_count": sandwich.violation_count,
                    "violations": sandwich.violations,
                    "rough_count": {"lower": bracket.lower, "count": bracket.count, "upper": bracket.upper},
                    "passed": passed,
                })),
            };
            Ok(Output { text, all_passed: passed })
        }
        Command::Remark { which } => {
            not_svg("remark")?;
            match which {
                RemarkCommand::Counterexample { kappa, x } => {
                    let kappa = r.num(kappa, "kappa", std::f64::consts::SQRT_2)?;
                    let x = r.count(x, "x", 10_000_000)?;
                    let table = table_for(x, limit)?;
                    let k = kappa_counterexample(kappa, x, &table)?;
                    // no decay: |E(x)|/x stays within 10% of κ
                    let reproduced = (k.scaled_discrepancy - kappa).abs() <= 0.1 * kappa;
                    let text = match format {
                        ReportFormat::Csv => format!(
                            "kappa,x,scaled_discrepancy,theta,target\n{},{x},{},{},{}\n",
                            sci17(kappa),
                            sci17(k.scaled_discrepancy),
                            sci17(k.theta),
                            sci17(k.target)
                        ),
                        _ => pretty(&json!({
                            "kappa": json17(kappa),
                            "x": x,
                            "scaled_discrepancy": json17(k.scaled_discrepancy),
                            "theta": json17(k.theta),
                            "target": json17(k.target),
                            "no_decay": reproduced,
                        })),
                    };
                    Ok(Output { text, all_passed: reproduced })
                }
                RemarkCommand::TwistSum { gammas, x_grid } => {
                    let gammas = real_list(&r.text(gammas, "gammas", "0,0.5,1,2,5"), "gammas")?;
                    let xs = count_list(&r.text(x_grid, "x_grid", "1e4,1e5,1e6,1e7"), "x_grid")?;
                    let table = table_for(xs.last().copied().unwrap_or(2), limit)?;
                    let rows = twisted_prime_sum_grid(&gammas, &xs, &table)?;
                    let c = rows.iter().map(|r| r.err_scale).fold(0.0f64, f64::max);
                    let text = match format {
                        ReportFormat::Csv => {
                            let mut s = String::from("gamma,x,lhs_re,lhs_im,main_re,main_im,err_scale\n");
                            for row in &rows {
                                let _ = writeln!(
                                    s,
                                    "{},{},{},{},{},{},{}",
                                    sci17(row.gamma),
                                    row.x,
                                    sci17(row.lhs.re),
                                    sci17(row.lhs.im),
                                    sci17(row.main.re),
                                    sci17(row.main.im),
                                    sci17(row.err_scale)
                                );
                            }
                            let _ = writeln!(s, "# fitted_constant,{}", sci17(c));
                            s
                        }
                        _ => pretty(&json!({
                            "rows": rows.iter().map(|row| json!({
                                "gamma": json17(row.gamma),
                                "x": row.x,
                                "lhs": complex_json(row.lhs),
                                "main": complex_json(row.main),
                                "err_scale": json17(row.err_scale),
                            })).collect::<Vec<_>>(),
                            "fitted_constant": json17(c),
                        })),
                    };
                    Ok(Output { text, all_passed: c.is_finite() })
                }
            }
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Finished { output, path }) => {
            let written = match &path {
                Some(p) => std::fs::write(p, &output.text).map_err(|source| Error::Io { path: p.clone(), source }),
                None => {
                    print!("{}", output.text);
                    Ok(())
                }
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
            if output.all_passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
