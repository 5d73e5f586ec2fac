//! `semg` — semantic information toolkit.
//!
//! Four subcommands: `measure` evaluates the scalar measures on a configured
//! instance; `rg-curve` sweeps the information rate-fidelity trade-off;
//! `gps` runs the prediction-aging scenario; `control` runs the
//! goal-constrained control sweep. Each writes an optional CSV and prints one
//! JSON run summary to stdout. Exit codes: 0 success, 1 invalid input,
//! 2 numerical failure (or non-convergence under `--strict`), 3 a built-in
//! reference check failed.

// `!(x > 0.0)` deliberately rejects NaN along with nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod summary;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use semg_core::{
    control_point, mutual_info_pair, normal_approx_point, point_mass_comparison, rg_curve,
    semantic_kl, shannon_kl, ControlProblem, GpsScenario, MmiOptions, PredictionVariant,
};
use summary::{config_digest, default_tolerances, Check, RunSummary};

#[derive(Parser)]
#[command(name = "semg", version, about = "Semantic information toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// JSON configuration file.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,

    /// CSV output path.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Exit with code 2 if any sweep point fails to converge.
    #[arg(long)]
    strict: bool,

    /// Disable the built-in reference checks.
    #[arg(long)]
    no_check: bool,

    /// Override a check tolerance, e.g. --tol-override gps.lifespan=5.
    #[arg(long = "tol-override", value_name = "KEY=VAL")]
    tol_override: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate semantic/Shannon KL information and the mutual-information
    /// breakdown for a configured instance (requires --config).
    Measure {
        #[command(flatten)]
        common: Common,
    },
    /// Sweep the rate-fidelity trade-off over a range of s values.
    RgCurve {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = -2.0, allow_hyphen_values = true)]
        s_min: f64,
        #[arg(long, default_value_t = 4.0, allow_hyphen_values = true)]
        s_max: f64,
        #[arg(long, default_value_t = 25)]
        steps: usize,
        /// Convergence tolerance of the alternating iteration.
        #[arg(long, default_value_t = 1e-10)]
        iter_tol: f64,
        #[arg(long, default_value_t = 100_000)]
        max_iter: usize,
    },
    /// Prediction-aging scenario: information vs delay, lifespan, relative age.
    Gps {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        variant: Option<GpsVariant>,
        #[arg(long)]
        dt_max: Option<f64>,
        #[arg(long)]
        step: Option<f64>,
    },
    /// Goal-constrained control sweep: softmax, normal-surrogate, and
    /// point-mass families.
    Control {
        #[command(flatten)]
        common: Common,
        /// Comma-separated tilt exponents, e.g. 1,20,40.
        #[arg(long, value_name = "LIST")]
        s_list: Option<String>,
        /// Grid point for the point-mass comparison.
        #[arg(long)]
        x_star: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GpsVariant {
    Inaccurate,
    Accurate,
    Fuzzy,
}

impl GpsVariant {
    fn to_core(self) -> PredictionVariant {
        match self {
            GpsVariant::Inaccurate => PredictionVariant::Inaccurate,
            GpsVariant::Accurate => PredictionVariant::MoreAccurate,
            GpsVariant::Fuzzy => PredictionVariant::Fuzzier,
        }
    }

    fn parse(name: &str) -> anyhow::Result<Self> {
        match name {
            "inaccurate" => Ok(GpsVariant::Inaccurate),
            "accurate" => Ok(GpsVariant::Accurate),
            "fuzzy" => Ok(GpsVariant::Fuzzy),
            other => Err(anyhow!(
                "unknown variant `{other}` (expected inaccurate, accurate, or fuzzy)"
            )),
        }
    }

    fn name(self) -> &'static str {
        match self {
            GpsVariant::Inaccurate => "inaccurate",
            GpsVariant::Accurate => "accurate",
            GpsVariant::Fuzzy => "fuzzy",
        }
    }
}

/// A failure with its process exit code: 1 invalid input, 2 numerical.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

trait IntoFailure<T> {
    fn or_usage(self) -> Result<T, Failure>;
    fn or_numerical(self) -> Result<T, Failure>;
}

impl<T, E: Into<anyhow::Error>> IntoFailure<T> for Result<T, E> {
    fn or_usage(self) -> Result<T, Failure> {
        self.map_err(|e| Failure {
            code: 1,
            error: e.into(),
        })
    }

    fn or_numerical(self) -> Result<T, Failure> {
        self.map_err(|e| Failure {
            code: 2,
            error: e.into(),
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Measure { common } => cmd_measure(&common),
        Command::RgCurve {
            common,
            s_min,
            s_max,
            steps,
            iter_tol,
            max_iter,
        } => cmd_rg_curve(&common, s_min, s_max, steps, iter_tol, max_iter),
        Command::Gps {
            common,
            variant,
            dt_max,
            step,
        } => cmd_gps(&common, variant, dt_max, step),
        Command::Control {
            common,
            s_list,
            x_star,
        } => cmd_control(&common, s_list.as_deref(), x_star),
    };
    match result {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {:#}", failure.error);
            ExitCode::from(failure.code)
        }
    }
}

fn read_config_text(common: &Common) -> Result<Option<String>, Failure> {
    match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))
                .or_usage()?;
            Ok(Some(text))
        }
        None => Ok(None),
    }
}

fn tolerances(common: &Common) -> Result<BTreeMap<&'static str, f64>, Failure> {
    let mut tols = default_tolerances();
    for raw in &common.tol_override {
        let (key, val) = raw
            .split_once('=')
            .ok_or_else(|| anyhow!("--tol-override wants KEY=VAL, got `{raw}`"))
            .or_usage()?;
        let value: f64 = val
            .parse()
            .with_context(|| format!("tolerance value in `{raw}`"))
            .or_usage()?;
        let slot = tols
            .iter_mut()
            .find(|(k, _)| **k == key)
            .map(|(_, v)| v)
            .ok_or_else(|| {
                anyhow!(
                    "unknown tolerance key `{key}` (known: {})",
                    default_tolerances()
                        .keys()
                        .cloned()
                        .collect::<Vec<_>>()
                        .join(", ")
                )
            })
            .or_usage()?;
        *slot = value;
    }
    Ok(tols)
}

fn write_csv(path: &Path, header: &str, rows: &[String]) -> Result<(), Failure> {
    let mut text = String::with_capacity(rows.len() * 48 + header.len() + 1);
    text.push_str(header);
    text.push('\n');
    for row in rows {
        text.push_str(row);
        text.push('\n');
    }
    std::fs::write(path, text)
        .with_context(|| format!("writing {}", path.display()))
        .or_usage()
}

fn fmt_opt(value: Option<f64>) -> String {
    value.map(|v| format!("{v:.6}")).unwrap_or_default()
}

fn emit(summary: &RunSummary) {
    println!(
        "{}",
        serde_json::to_string(summary).expect("summary serializes")
    );
}

fn exit_for_checks(summary: &RunSummary) -> ExitCode {
    if summary.checks_enabled && !summary.all_checks_pass {
        ExitCode::from(3)
    } else {
        ExitCode::SUCCESS
    }
}

fn cmd_measure(common: &Common) -> Result<ExitCode, Failure> {
    let started = Instant::now();
    let text = read_config_text(common)?
        .ok_or_else(|| anyhow!("measure requires --config"))
        .or_usage()?;
    let parsed: config::MeasureConfig = config::parse_config(&text).or_usage()?;
    let inputs = parsed.build().or_usage()?;
    let raw: serde_json::Value = serde_json::from_str(&text).or_usage()?;

    let mut summary = RunSummary::new("measure", config_digest(&raw));
    summary.checks_enabled = !common.no_check;

    let truth = inputs.sem.truth_fn(inputs.label);
    let logical = semg_core::logical_probability(truth, &inputs.prior).or_numerical()?;
    summary.headline_num("logical_probability", logical);

    let mut csv_rows = vec![format!("logical_probability,{logical:.6}")];
    if let Some(actual) = &inputs.actual {
        let sem_bits = semantic_kl(actual, truth, &inputs.prior).or_numerical()?;
        let sh_bits = shannon_kl(actual, &inputs.prior).or_numerical()?;
        summary.headline_num("semantic_kl_bits", sem_bits);
        summary.headline_num("shannon_kl_bits", sh_bits);
        csv_rows.push(format!("semantic_kl_bits,{sem_bits:.6}"));
        csv_rows.push(format!("shannon_kl_bits,{sh_bits:.6}"));
    }
    if let Some(channel) = &inputs.channel {
        let info = mutual_info_pair(&inputs.prior, channel, &inputs.sem).or_numerical()?;
        summary.headline_num("semantic_mutual_bits", info.semantic_mutual_bits);
        summary.headline_num("generalized_entropy_bits", info.generalized_entropy_bits);
        summary.headline_num("fuzzy_entropy_bits", info.fuzzy_entropy_bits);
        summary.headline_num("shannon_mutual_bits", info.shannon_mutual_bits);
        csv_rows.push(format!(
            "semantic_mutual_bits,{:.6}",
            info.semantic_mutual_bits
        ));
        csv_rows.push(format!(
            "generalized_entropy_bits,{:.6}",
            info.generalized_entropy_bits
        ));
        csv_rows.push(format!("fuzzy_entropy_bits,{:.6}", info.fuzzy_entropy_bits));
        csv_rows.push(format!(
            "shannon_mutual_bits,{:.6}",
            info.shannon_mutual_bits
        ));
    }
    if let Some(path) = &common.out {
        write_csv(path, "quantity,value", &csv_rows)?;
    }

    summary.finalize(started);
    emit(&summary);
    Ok(exit_for_checks(&summary))
}

fn cmd_rg_curve(
    common: &Common,
    s_min: f64,
    s_max: f64,
    steps: usize,
    iter_tol: f64,
    max_iter: usize,
) -> Result<ExitCode, Failure> {
    let started = Instant::now();
    if steps < 2 || !(s_max > s_min) {
        return Err(anyhow!(
            "need steps >= 2 and s_max > s_min (got {steps} over [{s_min}, {s_max}])"
        ))
        .or_usage();
    }
    let tols = tolerances(common)?;
    let (resolved, parsed): (serde_json::Value, config::RgConfig) = match read_config_text(common)?
    {
        Some(text) => {
            let value: serde_json::Value = serde_json::from_str(&text).or_usage()?;
            (value.clone(), config::parse_config(&text).or_usage()?)
        }
        None => {
            let value = config::RgConfig::default_json();
            let parsed = serde_json::from_value(value.clone()).or_usage()?;
            (value, parsed)
        }
    };
    let (source, sem) = parsed.build().or_usage()?;

    let mut effective = serde_json::Map::new();
    effective.insert("config".into(), resolved);
    effective.insert(
        "sweep".into(),
        serde_json::json!({"s_min": s_min, "s_max": s_max, "steps": steps}),
    );
    let mut summary = RunSummary::new("rg-curve", config_digest(&effective.into()));
    summary.checks_enabled = !common.no_check;

    let s_values: Vec<f64> = (0..steps)
        .map(|k| s_min + (s_max - s_min) * k as f64 / (steps - 1) as f64)
        .collect();
    let opts = MmiOptions {
        tolerance: iter_tol,
        max_iterations: max_iter,
    };
    let curve = rg_curve(&source, &sem, &s_values, &opts).or_numerical()?;

    let rows: Vec<String> = curve
        .points()
        .iter()
        .map(|p| {
            format!(
                "{:.6},{:.6},{:.6},{},{},{}",
                p.s,
                p.r_bits,
                p.g_bits,
                fmt_opt(p.efficiency),
                p.converged,
                p.iterations
            )
        })
        .collect();
    if let Some(path) = &common.out {
        write_csv(
            path,
            "s,R_bits,G_bits,efficiency,converged,iterations",
            &rows,
        )?;
    }

    let all_converged = curve.points().iter().all(|p| p.converged);
    summary.headline_raw("n_points", serde_json::json!(curve.points().len()));
    summary.headline_raw("all_converged", serde_json::json!(all_converged));
    if let Some(unit) = curve.points().iter().find(|p| (p.s - 1.0).abs() < 1e-12) {
        let gap = (unit.r_bits - unit.g_bits).abs();
        summary.headline_num("s1_gap_bits", gap);
        if summary.checks_enabled {
            summary.push_check(Check::new("rg.s1_gap", gap, 0.0, tols["rg.s1_gap"]));
        }
    }

    summary.finalize(started);
    emit(&summary);
    if common.strict && !all_converged {
        return Err(anyhow!("sweep contains non-converged points (--strict)")).or_numerical();
    }
    Ok(exit_for_checks(&summary))
}

fn cmd_gps(
    common: &Common,
    variant_flag: Option<GpsVariant>,
    dt_max_flag: Option<f64>,
    step_flag: Option<f64>,
) -> Result<ExitCode, Failure> {
    let started = Instant::now();
    let tols = tolerances(common)?;
    let file: config::GpsConfig = match read_config_text(common)? {
        Some(text) => config::parse_config(&text).or_usage()?,
        None => config::GpsConfig::default(),
    };
    let variant = match (variant_flag, &file.variant) {
        (Some(v), _) => v,
        (None, Some(name)) => GpsVariant::parse(name).or_usage()?,
        (None, None) => GpsVariant::Inaccurate,
    };
    let dt_max = dt_max_flag.or(file.dt_max).unwrap_or(178.0);
    let step = step_flag.or(file.step).unwrap_or(1.0);
    if !(dt_max > 0.0) || !(step > 0.0) {
        return Err(anyhow!("need dt_max > 0 and step > 0")).or_usage();
    }

    let resolved = serde_json::json!({
        "variant": variant.name(),
        "dt_max": dt_max,
        "step": step,
    });
    let mut summary = RunSummary::new("gps", config_digest(&resolved));
    summary.checks_enabled = !common.no_check;

    let scenario = GpsScenario::table_variant(variant.to_core());
    let initial = scenario.freshness_at(0.0).or_numerical()?;

    let mut rows = Vec::new();
    let mut k = 0u64;
    loop {
        let dt = k as f64 * step;
        if dt > dt_max + 1e-9 {
            break;
        }
        let point = scenario.freshness_at(dt).or_numerical()?;
        let age_pct = (1.0 - point.semantic_bits / initial.semantic_bits) * 100.0;
        rows.push(format!(
            "{dt:.6},{:.6},{:.6},{age_pct:.6}",
            point.shannon_bits, point.semantic_bits
        ));
        k += 1;
    }
    if let Some(path) = &common.out {
        write_csv(
            path,
            "dt,shannon_bits,semantic_bits,relative_age_pct",
            &rows,
        )?;
    }

    let lifespan = scenario.lifespan(dt_max, step).or_numerical()?;
    summary.headline_raw("variant", serde_json::json!(variant.name()));
    summary.headline_num("semantic_bits_at_0", initial.semantic_bits);
    summary.headline_num("shannon_bits_at_0", initial.shannon_bits);
    summary.headline_raw(
        "lifespan_s",
        match lifespan {
            Some(t) => serde_json::json!((t * 1e6).round() / 1e6),
            None => serde_json::Value::Null,
        },
    );
    if summary.checks_enabled && variant == GpsVariant::Inaccurate {
        let value = lifespan.unwrap_or(-1.0);
        summary.push_check(Check::new(
            "gps.lifespan",
            value,
            114.0,
            tols["gps.lifespan"],
        ));
    }

    summary.finalize(started);
    emit(&summary);
    Ok(exit_for_checks(&summary))
}

/// Reference trade-off table for the default control problem, keyed by s.
/// The s = 1 column is reproducible only at s = 1.1; at s = 1 exactly this
/// implementation yields R = G = 2.1302 bits (see the repository notes), so
/// the s = 1 checks fail by ~0.06 bits unless their tolerance is widened.
const CONTROL_TABLE: [(f64, [f64; 6]); 3] = [
    (1.0, [2.19, 2.19, 1.00, 2.08, 1.99, 0.95]),
    (20.0, [3.36, 2.58, 0.77, 3.13, 2.52, 0.80]),
    (40.0, [3.58, 2.59, 0.72, 3.38, 2.55, 0.76]),
];

fn cmd_control(
    common: &Common,
    s_list_flag: Option<&str>,
    x_star_flag: Option<f64>,
) -> Result<ExitCode, Failure> {
    let started = Instant::now();
    let tols = tolerances(common)?;
    let config_text = read_config_text(common)?;
    let file: config::ControlConfig = match &config_text {
        Some(text) => config::parse_config(text).or_usage()?,
        None => config::ControlConfig::default(),
    };

    let mut s_values: Vec<f64> = match (s_list_flag, &file.s_list) {
        (Some(raw), _) => raw
            .split(',')
            .map(|tok| {
                tok.trim()
                    .parse::<f64>()
                    .with_context(|| format!("s value `{tok}`"))
            })
            .collect::<anyhow::Result<Vec<_>>>()
            .or_usage()?,
        (None, Some(list)) => list.clone(),
        (None, None) => vec![1.0, 20.0, 40.0],
    };
    if s_values.is_empty() {
        return Err(anyhow!("s list is empty")).or_usage();
    }
    if s_values.iter().any(|s| !s.is_finite()) {
        return Err(anyhow!("s values must be finite")).or_usage();
    }
    s_values.sort_by(|a, b| a.partial_cmp(b).expect("finite s values"));
    s_values.dedup();

    let x_star = x_star_flag.or(file.x_star).unwrap_or(80.0);
    let default_problem = file.problem.is_none();
    let problem: ControlProblem = match &file.problem {
        Some(spec) => spec.build().or_usage()?,
        None => {
            let spec: config::ControlProblemSpec =
                serde_json::from_value(config::ControlProblemSpec::default_json()).or_usage()?;
            spec.build().or_usage()?
        }
    };

    let problem_json = match (&file.problem, &config_text) {
        (Some(_), Some(text)) => serde_json::from_str::<serde_json::Value>(text).or_usage()?,
        _ => config::ControlProblemSpec::default_json(),
    };
    let resolved = serde_json::json!({
        "problem": problem_json,
        "s_list": s_values,
        "x_star": x_star,
    });
    let mut summary = RunSummary::new("control", config_digest(&resolved));
    summary.checks_enabled = !common.no_check;

    let ceiling = problem.max_info_bits();
    summary.headline_num("max_info_bits", ceiling);

    let mut rows = Vec::new();
    let mut conservation_drift = 0.0f64;
    let mut table_rows: Vec<(f64, semg_core::ControlPoint, semg_core::ControlPoint)> = Vec::new();
    for &s in &s_values {
        let softmax = control_point(&problem, s).or_numerical()?;
        let normal = normal_approx_point(&problem, s).or_numerical()?;
        conservation_drift =
            conservation_drift.max((softmax.g_bits + softmax.dbar_bits - ceiling).abs());
        rows.push(format!(
            "{s:.6},softmax,{:.6},{:.6},{:.6},{}",
            softmax.r_bits,
            softmax.g_bits,
            softmax.dbar_bits,
            fmt_opt(softmax.efficiency)
        ));
        rows.push(format!(
            "{s:.6},normal,{:.6},{:.6},{:.6},{}",
            normal.r_bits,
            normal.g_bits,
            normal.dbar_bits,
            fmt_opt(normal.efficiency)
        ));
        table_rows.push((s, softmax, normal));
    }
    let pm = point_mass_comparison(&problem, x_star).or_numerical()?;
    let pm_dbar = ceiling - pm.semantic_bits;
    rows.push(format!(
        ",pointmass,{:.6},{:.6},{pm_dbar:.6},{:.6}",
        pm.shannon_bits, pm.semantic_bits, pm.efficiency
    ));
    if let Some(path) = &common.out {
        write_csv(path, "s,family,R_bits,G_bits,dbar_bits,efficiency", &rows)?;
    }

    for (s, softmax, normal) in &table_rows {
        let tag = format!("s{s}");
        summary.headline_num(&format!("softmax_r_{tag}"), softmax.r_bits);
        summary.headline_num(&format!("softmax_g_{tag}"), softmax.g_bits);
        summary.headline_num(&format!("normal_r_{tag}"), normal.r_bits);
        summary.headline_num(&format!("normal_g_{tag}"), normal.g_bits);
    }
    summary.headline_num("pointmass_semantic_bits", pm.semantic_bits);
    summary.headline_num("pointmass_shannon_bits", pm.shannon_bits);
    summary.headline_num("pointmass_efficiency", pm.efficiency);
    summary.headline_num("conservation_max_drift_bits", conservation_drift);

    if summary.checks_enabled {
        summary.push_check(Check::new(
            "control.conservation",
            conservation_drift,
            0.0,
            tols["control.conservation"],
        ));
        if default_problem {
            for (s, expected) in CONTROL_TABLE {
                let Some((_, softmax, normal)) =
                    table_rows.iter().find(|(v, _, _)| (*v - s).abs() < 1e-12)
                else {
                    continue;
                };
                let [r, g, eff, r1, g1, eff1] = expected;
                summary.push_check(Check::new(
                    format!("control.r@s{s}"),
                    softmax.r_bits,
                    r,
                    tols["control.r"],
                ));
                summary.push_check(Check::new(
                    format!("control.g@s{s}"),
                    softmax.g_bits,
                    g,
                    tols["control.g"],
                ));
                summary.push_check(Check::new(
                    format!("control.eff@s{s}"),
                    softmax.efficiency.unwrap_or(f64::MAX),
                    eff,
                    tols["control.eff"],
                ));
                summary.push_check(Check::new(
                    format!("control.r1@s{s}"),
                    normal.r_bits,
                    r1,
                    tols["control.r1"],
                ));
                summary.push_check(Check::new(
                    format!("control.g1@s{s}"),
                    normal.g_bits,
                    g1,
                    tols["control.g1"],
                ));
                summary.push_check(Check::new(
                    format!("control.eff1@s{s}"),
                    normal.efficiency.unwrap_or(f64::MAX),
                    eff1,
                    tols["control.eff1"],
                ));
            }
            if (x_star - 80.0).abs() < 1e-12 {
                summary.push_check(Check::new(
                    "control.pm_semantic",
                    pm.semantic_bits,
                    2.60,
                    tols["control.pm_semantic"],
                ));
                summary.push_check(Check::new(
                    "control.pm_shannon",
                    pm.shannon_bits,
                    11.14,
                    tols["control.pm_shannon"],
                ));
                summary.push_check(Check::new(
                    "control.pm_eff",
                    pm.efficiency,
                    0.23,
                    tols["control.pm_eff"],
                ));
            }
        }
    }

    summary.finalize(started);
    emit(&summary);
    Ok(exit_for_checks(&summary))
}
