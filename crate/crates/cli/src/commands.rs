use std::f64::consts::SQRT_2;

use clap::{Args, ValueEnum};
use gmlab::exact_n2::{
    alpha_hat_cdf_n2, alpha_hat_density_n2, alpha_hat_n2_handle, alpha_hat_quantile_n2, inverse_alpha_hat_n2_handle,
};
use gmlab::exact_n3::{
    alpha_hat_n3_handle, t_cdf_exp_n3, t_cdf_gamma2_n3, t_cdf_numeric_n3, t_density_n3, t_n3_exp_handle,
    t_n3_gamma2_handle, t_stat_gamma_n3, ParentDensity,
};
use gmlab::montecarlo::{
    ks_one_sample, simulate_alpha_hat, simulate_t_n3, verify_exp_identity, EmpiricalDistribution, KSResult,
};
use gmlab::orders::{
    check_disp, check_st, check_star, linear_grid, log_grid, probability_grid, CheckTolerance, OrderCheckReport,
};
use gmlab::DistributionHandle;
use serde::Serialize;
use serde_json::json;

use crate::config::{params, Command, CommonArgs, Format, RunConfig};
use crate::output::{emit, json_bytes, xy_csv};
use crate::{CliError, Outcome};

/// `lo:hi:n`, `n` evenly spaced points including both ends.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    lo: f64,
    hi: f64,
    n: usize,
}

fn parse_grid(s: &str) -> Result<GridSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, n] = parts.as_slice() else {
        return Err(format!("expected lo:hi:n, got {s}"));
    };
    let lo: f64 = lo.parse().map_err(|_| format!("bad grid start {lo}"))?;
    let hi: f64 = hi.parse().map_err(|_| format!("bad grid end {hi}"))?;
    let n: usize = n.parse().map_err(|_| format!("bad grid size {n}"))?;
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) || n < 1 {
        return Err(format!("grid {s} is empty or inverted"));
    }
    Ok(GridSpec { lo, hi, n })
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    /// One of alpha-hat-n2:{pdf,cdf,quantile} or t-n3:{exp-cdf,gamma2-cdf,numeric-cdf,density}.
    pub target: String,
    /// Parent shape.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Evaluation point (a probability for quantiles); repeatable.
    #[arg(long = "at", allow_negative_numbers = true)]
    pub at: Vec<f64>,
    /// Evenly spaced points `lo:hi:n`.
    #[arg(long, value_parser = parse_grid)]
    pub grid: Option<GridSpec>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Serialize)]
struct Point {
    x: f64,
    value: f64,
}

pub fn eval(a: EvalArgs) -> Result<Outcome, CliError> {
    let cfg = RunConfig::new(Command::Eval, &a.target, params(&[("alpha", a.alpha)]), &a.common, Format::Csv)?;
    let mut xs = a.at.clone();
    if let Some(g) = a.grid {
        xs.extend(linear_grid(g.lo, g.hi, g.n));
    }
    if xs.is_empty() {
        return Err(CliError::Usage("eval needs --at or --grid".into()));
    }
    let rows = xs.iter().map(|&x| Ok((x, eval_one(&cfg, x)?))).collect::<Result<Vec<_>, CliError>>()?;
    let bytes = match cfg.format {
        Format::Csv => xy_csv(&rows),
        Format::Json => {
            let points: Vec<Point> = rows.iter().map(|&(x, value)| Point { x, value }).collect();
            json_bytes(&json!({ "command": "eval", "target": cfg.target, "params": cfg.params, "points": points }))
        }
    };
    emit(cfg.output_path.as_deref(), &bytes)?;
    Ok(Outcome::Ok)
}

fn eval_one(cfg: &RunConfig, x: f64) -> Result<f64, CliError> {
    Ok(match cfg.target.as_str() {
        "alpha-hat-n2:pdf" => alpha_hat_density_n2(cfg.param("alpha")?, x)?,
        "alpha-hat-n2:cdf" => alpha_hat_cdf_n2(cfg.param("alpha")?, x)?,
        "alpha-hat-n2:quantile" => alpha_hat_quantile_n2(cfg.param("alpha")?, x)?,
        "t-n3:exp-cdf" => t_cdf_exp_n3(x),
        "t-n3:gamma2-cdf" => t_cdf_gamma2_n3(x),
        "t-n3:numeric-cdf" => t_cdf_numeric_n3(cfg.param("alpha")?, x)?,
        "t-n3:density" => t_density_n3(&ParentDensity::gamma_shape(cfg.param("alpha")?)?, x)?,
        other => return Err(CliError::Usage(format!("unknown eval target {other}"))),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderName {
    St,
    Disp,
    Star,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pair {
    /// alpha_hat for n = 2 at --alpha1 and --alpha2.
    AlphaHatN2,
    /// 1/alpha_hat for n = 2, a Beta(1/2, alpha) law.
    InverseAlphaHatN2,
    /// alpha_hat for n = 3 from the tabulated law.
    AlphaHatN3,
    /// T for n = 3: exponential against gamma(2) parents.
    #[value(name = "t-n3-exp-vs-gamma2")]
    #[serde(rename = "t-n3-exp-vs-gamma2")]
    TN3ExpVsGamma2,
}

#[derive(Debug, Clone, Args)]
pub struct OrderArgs {
    #[arg(long, value_enum)]
    pub order: OrderName,
    #[arg(long, value_enum)]
    pub pair: Pair,
    #[arg(long)]
    pub alpha1: Option<f64>,
    #[arg(long)]
    pub alpha2: Option<f64>,
    #[command(flatten)]
    pub common: CommonArgs,
}

/// The two laws of a fixture pair and whether their support is bounded.
pub fn pair_handles(pair: Pair, cfg: &RunConfig) -> Result<(DistributionHandle, DistributionHandle, bool), CliError> {
    Ok(match pair {
        Pair::TN3ExpVsGamma2 => (t_n3_exp_handle(), t_n3_gamma2_handle(), false),
        Pair::AlphaHatN2 => {
            (alpha_hat_n2_handle(cfg.param("alpha1")?)?, alpha_hat_n2_handle(cfg.param("alpha2")?)?, false)
        }
        Pair::InverseAlphaHatN2 => (
            inverse_alpha_hat_n2_handle(cfg.param("alpha1")?)?,
            inverse_alpha_hat_n2_handle(cfg.param("alpha2")?)?,
            true,
        ),
        Pair::AlphaHatN3 => {
            (alpha_hat_n3_handle(cfg.param("alpha1")?)?, alpha_hat_n3_handle(cfg.param("alpha2")?)?, false)
        }
    })
}

/// Log-spaced grid across the central `(0.001, 0.999)` mass of both laws.
pub fn st_grid(x: &DistributionHandle, y: &DistributionHandle, n: usize) -> Vec<f64> {
    let lo = x.quantile(0.001).min(y.quantile(0.001));
    let hi = x.quantile(0.999).max(y.quantile(0.999));
    log_grid(lo, hi, n)
}

pub fn run_order(
    order: OrderName,
    x: &DistributionHandle,
    y: &DistributionHandle,
    bounded: bool,
    grid_size: usize,
    extra_points: &[f64],
    tol: CheckTolerance,
) -> OrderCheckReport {
    let pgrid = probability_grid(grid_size, bounded);
    match order {
        OrderName::St => check_st(x, y, &st_grid(x, y, grid_size), tol),
        OrderName::Disp => check_disp(x, y, &pgrid, tol),
        OrderName::Star => {
            let mut xgrid: Vec<f64> =
                pgrid.iter().map(|&p| x.quantile(p)).chain(extra_points.iter().copied()).collect();
            xgrid.sort_by(f64::total_cmp);
            xgrid.dedup();
            check_star(x, y, &xgrid, tol)
        }
    }
}

pub fn order_check(a: OrderArgs) -> Result<Outcome, CliError> {
    let target = a.pair.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let cfg = RunConfig::new(
        Command::OrderCheck,
        target,
        params(&[("alpha1", a.alpha1), ("alpha2", a.alpha2)]),
        &a.common,
        Format::Json,
    )?;
    if cfg.format != Format::Json {
        return Err(CliError::Usage("order-check writes JSON only".into()));
    }
    let (x, y, bounded) = pair_handles(a.pair, &cfg)?;
    // the published star-ratio abscissae
    let extra = if a.pair == Pair::TN3ExpVsGamma2 { vec![1.1, 6f64.sqrt() / 2.0, SQRT_2] } else { Vec::new() };
    let tol = CheckTolerance { abs: cfg.tol, ..CheckTolerance::default() };
    let report = run_order(a.order, &x, &y, bounded, cfg.grid_size, &extra, tol);
    if report.worst_margin.is_nan() {
        return Err(CliError::Numerical(format!("order check on {} produced NaN", cfg.target)));
    }
    let doc = json!({
        "command": "order-check",
        "pair": cfg.target,
        "params": cfg.params,
        "x": x.label(),
        "y": y.label(),
        "report": report,
    });
    emit(cfg.output_path.as_deref(), &json_bytes(&doc))?;
    Ok(if report.holds() { Outcome::Ok } else { Outcome::Violated })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum McTarget {
    AlphaHat,
    #[value(name = "t-n3")]
    TN3,
    ExpIdentity,
}

#[derive(Debug, Clone, Args)]
pub struct McArgs {
    #[arg(value_enum)]
    pub target: McTarget,
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    /// Parent scale (alpha-hat only; the estimate does not depend on it).
    #[arg(long, default_value_t = 1.0)]
    pub lambda: f64,
    /// Sample size (alpha-hat only).
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Serialize)]
struct KsSummary {
    statistic: f64,
    count_effective: f64,
    threshold_99: f64,
    below_threshold: bool,
}

impl From<KSResult> for KsSummary {
    fn from(k: KSResult) -> Self {
        Self {
            statistic: k.statistic,
            count_effective: k.count_effective,
            threshold_99: k.threshold_99,
            below_threshold: k.below_threshold(),
        }
    }
}

#[derive(Serialize)]
struct McSummary {
    command: &'static str,
    target: String,
    params: std::collections::BTreeMap<String, f64>,
    seed: u64,
    reps: usize,
    redraws: u64,
    /// Exact law the sample is compared with, if any.
    reference: Option<String>,
    ks: Option<KsSummary>,
    verdict: Option<&'static str>,
}

fn samples_bytes(emp: &EmpiricalDistribution, format: Format) -> Result<Vec<u8>, CliError> {
    Ok(match format {
        Format::Csv => {
            let mut buf = Vec::new();
            emp.write_csv(&mut buf)?;
            buf
        }
        Format::Json => json_bytes(&json!({
            "descriptor": emp.descriptor(),
            "seed": emp.seed(),
            "reps": emp.count(),
            "values": emp.samples(),
        })),
    })
}

pub fn mc(a: McArgs) -> Result<Outcome, CliError> {
    let target = a.target.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    let mut p = params(&[("alpha", Some(a.alpha))]);
    if a.target == McTarget::AlphaHat {
        p.insert("lambda".into(), a.lambda);
        p.insert("n".into(), a.n as f64);
    }
    let cfg = RunConfig::new(Command::Mc, target, p, &a.common, Format::Csv)?;
    let summary = match a.target {
        McTarget::ExpIdentity => {
            if cfg.output_path.is_some() {
                return Err(CliError::Usage("exp-identity reports a KS summary only; drop --output".into()));
            }
            let check = verify_exp_identity(a.alpha, cfg.reps, cfg.seed)?;
            McSummary {
                command: "mc",
                target: cfg.target.clone(),
                params: cfg.params.clone(),
                seed: cfg.seed,
                reps: cfg.reps,
                redraws: 0,
                reference: Some("two-sample: X1 replaced by X1 + Y, Y unit exponential".into()),
                ks: Some(check.ks.into()),
                verdict: Some(if check.accepted { "accepted" } else { "rejected" }),
            }
        }
        McTarget::AlphaHat | McTarget::TN3 => {
            let (emp, reference, ks) = if a.target == McTarget::AlphaHat {
                if a.n < 2 {
                    return Err(CliError::Usage("--n must be at least 2".into()));
                }
                let emp = simulate_alpha_hat(a.alpha, a.lambda, a.n, cfg.reps, cfg.seed)?;
                match a.n {
                    2 => {
                        let ks = ks_one_sample(&emp, |t| alpha_hat_cdf_n2(a.alpha, t).unwrap_or(f64::NAN));
                        (emp, Some("exact n = 2 CDF".to_string()), Some(ks))
                    }
                    3 => {
                        let table = t_stat_gamma_n3(a.alpha)?;
                        let ks = ks_one_sample(&emp, |t| table.alpha_hat_cdf(t));
                        (emp, Some("tabulated n = 3 CDF".to_string()), Some(ks))
                    }
                    _ => (emp, None, None),
                }
            } else {
                let emp = simulate_t_n3(a.alpha, cfg.reps, cfg.seed)?;
                let (name, ks) = if a.alpha == 1.0 {
                    ("exponential closed form", ks_one_sample(&emp, t_cdf_exp_n3))
                } else if a.alpha == 2.0 {
                    ("gamma(2) closed form", ks_one_sample(&emp, t_cdf_gamma2_n3))
                } else {
                    let table = t_stat_gamma_n3(a.alpha)?;
                    ("tabulated CDF", ks_one_sample(&emp, |t| table.cdf(t)))
                };
                (emp, Some(name.to_string()), Some(ks))
            };
            if let Some(path) = cfg.output_path.as_deref() {
                crate::output::write_atomic(path, &samples_bytes(&emp, cfg.format)?)?;
            }
            McSummary {
                command: "mc",
                target: cfg.target.clone(),
                params: cfg.params.clone(),
                seed: cfg.seed,
                reps: cfg.reps,
                redraws: emp.redraws(),
                reference,
                verdict: ks.map(|k| if k.below_threshold() { "accepted" } else { "rejected" }),
                ks: ks.map(Into::into),
            }
        }
    };
    emit(None, &json_bytes(&summary))?;
    Ok(Outcome::Ok)
}
