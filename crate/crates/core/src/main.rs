//! Thin CLI over the library: parse arguments and files, call into
//! `commands`, print text or JSON. The examples/ directory shows the same
//! entry points used as a library.

use clap::{Parser, Subcommand, ValueEnum};
use logsing::commands::{cmd_fit, cmd_genus, cmd_milnor, cmd_predict, cmd_verify};
use logsing::family::{FamilySpec, Report};
use logsing::fit::{ExpansionModel, Exponent, FitResult};
use logsing::integrals::{IntegralSample, SampleGrid};
use logsing::milnor::Mu;
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "logsing",
    about = "Log singularity coefficients of degenerating families: exact predictions and numerical verification"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Worker threads for sample evaluation (default: all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Also write the structured result to this file
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print exact coefficients of a genus series (td, td-inv, or e)
    Genus {
        name: String,
        #[arg(long, default_value_t = 16)]
        order: usize,
    },
    /// Exact predicted log coefficient for a family spec
    Predict {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Numerical verification: sample, fit, compare against the prediction
    Verify {
        #[arg(long)]
        spec: PathBuf,
        /// Override the spec's sampling grid: rmin,rmax,count,angles
        #[arg(long)]
        grid: Option<String>,
        #[arg(long)]
        seed: Option<u64>,
        /// Override the pass threshold
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Milnor number of a germ given in surface syntax (e.g. "z0^3+z1^3")
    Milnor { germ: String },
    /// Fit a JSON file of samples in the expansion basis
    Fit {
        /// JSON list of {t_re, t_im, value, est_error}
        #[arg(long)]
        samples: PathBuf,
        #[arg(long, default_value_t = 3)]
        smooth_order: usize,
        /// Comma-separated singular exponents, e.g. "1/2,1/3"
        #[arg(long)]
        exponents: Option<String>,
        #[arg(long, default_value_t = 1)]
        max_log_power: usize,
    },
}

fn parse_grid(text: &str) -> Result<SampleGrid, String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 4 {
        return Err(format!("--grid expects rmin,rmax,count,angles, got {text:?}"));
    }
    Ok(SampleGrid {
        r_min: parts[0].parse().map_err(|e| format!("rmin: {e}"))?,
        r_max: parts[1].parse().map_err(|e| format!("rmax: {e}"))?,
        radii: parts[2].parse().map_err(|e| format!("count: {e}"))?,
        angles: parts[3].parse().map_err(|e| format!("angles: {e}"))?,
    })
}

fn parse_exponents(text: &str) -> Result<Vec<Exponent>, String> {
    text.split(',')
        .map(|s| {
            let s = s.trim();
            match s.split_once('/') {
                Some((p, q)) => Ok(Exponent::new(
                    p.parse().map_err(|e| format!("{s:?}: {e}"))?,
                    q.parse().map_err(|e| format!("{s:?}: {e}"))?,
                )),
                None => Ok(Exponent::from(
                    s.parse::<i64>().map_err(|e| format!("{s:?}: {e}"))?,
                )),
            }
        })
        .collect()
}

fn load_spec(path: &PathBuf) -> Result<FamilySpec, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    FamilySpec::from_json(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn report_text(report: &Report) -> String {
    let mut out = String::new();
    for m in &report.milnor_table {
        out.push_str(&format!("  germ {}: mu = {}\n", m.label, m.mu));
    }
    out.push_str(&format!("  milnor sum   = {}\n", report.milnor_sum));
    out.push_str(&format!("  predicted    = {}\n", report.predicted_coeff));
    if let Some(c) = &report.char_number_coeff {
        out.push_str(&format!(
            "  char numbers = {c} (cross-check {})\n",
            if report.cross_check == Some(true) {
                "ok"
            } else {
                "MISMATCH"
            }
        ));
    }
    if let Some(t) = report.verify_target {
        out.push_str(&format!("  fit target   = {t}\n"));
    }
    if let Some(f) = report.fitted_coeff {
        out.push_str(&format!("  fitted       = {f:.6}\n"));
    }
    if let Some(r) = report.relative_error {
        out.push_str(&format!("  rel. error   = {r:.3e}\n"));
    }
    for e in &report.diagnostics.errors {
        out.push_str(&format!("  error: {e}\n"));
    }
    if let Some(p) = report.passed {
        out.push_str(if p { "  PASS\n" } else { "  FAIL\n" });
    }
    out
}

fn fit_json(fit: &FitResult) -> serde_json::Value {
    json!({
        "log_coeff": fit.log_coeff,
        "constant": fit.constant,
        "smooth_coeffs": fit.smooth_coeffs,
        "term_coeffs": fit
            .term_coeffs
            .iter()
            .map(|(&(r, k), &c)| json!({"exponent": r.to_string(), "log_power": k, "coeff": c}))
            .collect::<Vec<_>>(),
        "residual_rms": fit.residual_rms,
        "condition_estimate": fit.condition_estimate,
    })
}

fn emit(cli: &Cli, structured: serde_json::Value, text: String) -> Result<(), String> {
    let body = match cli.format {
        Format::Json => format!("{:#}", structured),
        Format::Text => text,
    };
    print!("{body}");
    if !body.ends_with('\n') {
        println!();
    }
    if let Some(path) = &cli.output {
        std::fs::write(path, format!("{:#}\n", structured))
            .map_err(|e| format!("{}: {e}", path.display()))?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<bool, String> {
    match &cli.cmd {
        Cmd::Genus { name, order } => {
            let coeffs = cmd_genus(name, *order).map_err(|e| e.to_string())?;
            emit(cli, json!({"name": name, "coefficients": coeffs}), coeffs.join(", "))?;
            Ok(true)
        }
        Cmd::Predict { spec } => {
            let spec = load_spec(spec)?;
            let report = cmd_predict(&spec).map_err(|e| e.to_string())?;
            emit(
                cli,
                serde_json::to_value(&report).unwrap(),
                report_text(&report),
            )?;
            Ok(true)
        }
        Cmd::Verify {
            spec,
            grid,
            seed,
            tolerance,
        } => {
            let mut spec = load_spec(spec)?;
            if let Some(s) = seed {
                spec.seed = *s;
            }
            if let Some(t) = tolerance {
                spec.tolerance = Some(*t);
            }
            if let Some(g) = grid {
                let g = parse_grid(g)?;
                if let Some(v) = spec.verify.as_mut() {
                    v.grid = g;
                }
            }
            let report = cmd_verify(&spec).map_err(|e| e.to_string())?;
            emit(
                cli,
                serde_json::to_value(&report).unwrap(),
                report_text(&report),
            )?;
            Ok(report.passed != Some(false))
        }
        Cmd::Milnor { germ } => {
            let mu = cmd_milnor(germ).map_err(|e| e.to_string())?;
            let (text, value) = match mu {
                Mu::Finite(m) => (format!("mu = {m}"), json!({"mu": m})),
                Mu::Infinite => ("mu = infinity (non-isolated)".to_string(), json!({"mu": null})),
            };
            emit(cli, value, text)?;
            Ok(true)
        }
        Cmd::Fit {
            samples,
            smooth_order,
            exponents,
            max_log_power,
        } => {
            let text = std::fs::read_to_string(samples)
                .map_err(|e| format!("{}: {e}", samples.display()))?;
            let raw: Vec<IntegralSample> =
                serde_json::from_str(&text).map_err(|e| format!("{}: {e}", samples.display()))?;
            let model = match exponents {
                Some(list) => {
                    ExpansionModel::new(*smooth_order, &parse_exponents(list)?, *max_log_power)
                        .map_err(|e| e.to_string())?
                }
                None => ExpansionModel::smooth_only(*smooth_order),
            };
            let fit = cmd_fit(&raw, &model).map_err(|e| e.to_string())?;
            let text = format!(
                "log_coeff = {:.6}\nconstant = {:.6}\nresidual_rms = {:.3e}\ncondition = {:.3e}",
                fit.log_coeff, fit.constant, fit.residual_rms, fit.condition_estimate
            );
            emit(cli, fit_json(&fit), text)?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(k) = cli.threads {
        // ignore failure if a pool already exists (e.g. repeated init in tests)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
    }
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
