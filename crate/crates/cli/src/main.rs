//! `tto`: norms and lower bounds of truncated Toeplitz operators from the
//! command line.

mod input;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use tto_core::blaschke::BlaschkeProduct;
use tto_core::bounds::{
    accumulation_experiment, bound_report, extremal_constants, ReportOptions, SearchParams,
};
use tto_core::circle::{CircleGrid, TrigPolynomial};
use tto_core::format::{accumulation_csv, bound_report_csv_row, csv_number, BOUND_REPORT_HEADER};
use tto_core::model_space::{default_grid, ModelBasis};
use tto_core::operator::{assemble, operator_norm, SplitSymbol};
use tto_core::suites::{self, SuiteConfig};
use tto_core::DEFAULT_SEED;

// Relative slack when comparing `‖A_φ‖` against `‖φ‖_∞`.
const NORM_TOL: f64 = 1e-6;
const LARGE_FAMILY: usize = 64;

#[derive(Parser)]
#[command(
    name = "tto",
    version,
    about = "Truncated Toeplitz operators on model spaces of finite Blaschke products"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Quadrature nodes on the circle (power of two, at least 64).
    #[arg(long, global = true, value_parser = parse_grid)]
    grid: Option<usize>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Operator norm, sup norm of the symbol and their ratio.
    Norm(Inputs),
    /// Every lower bound next to the operator norm; exits 1 if the ordering fails.
    Bounds {
        #[command(flatten)]
        inputs: Inputs,
        /// Refinement levels of the interior anchor search.
        #[arg(long, default_value_t = SearchParams::default().depth)]
        depth: usize,
    },
    /// Norms on model spaces whose zeros accumulate at the whole circle.
    Accumulate {
        #[arg(long, default_value = "re_z")]
        phi: String,
        /// Comma-separated, strictly increasing family sizes.
        #[arg(long, default_value = "8,16,32,64")]
        sizes: String,
    },
    /// Best constants between the sup norm and the H² norm on K_Θ.
    Extremal {
        #[arg(long)]
        theta: String,
        /// Random restarts of the minimization.
        #[arg(long, default_value_t = 8)]
        trials: usize,
    },
    /// Runs the invariant suites at reduced trial counts.
    Selftest {
        /// Multiplies every trial count.
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        /// Also check the bound ordering for this Θ.
        #[arg(long)]
        theta: Option<String>,
    },
}

#[derive(Args)]
struct Inputs {
    /// Inline JSON, a JSON file, `z^n` or `random[:deg]`.
    #[arg(long)]
    theta: String,
    /// Inline JSON, a JSON file, or a preset: constant[:c], re_z, cos,
    /// shifted_cos, z^k, random[:deg].
    #[arg(long)]
    phi: String,
}

fn parse_grid(s: &str) -> std::result::Result<usize, String> {
    let n: usize = s.parse().map_err(|e| format!("{e}"))?;
    if n < 64 || !n.is_power_of_two() {
        return Err(format!("grid must be a power of two at least 64, got {n}"));
    }
    Ok(n)
}

/// What the process should report besides the written output.
enum Verdict {
    Ok,
    InvariantFailed(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Verdict::Ok) => ExitCode::SUCCESS,
        Ok(Verdict::InvariantFailed(why)) => {
            eprintln!("tto: invariant failed: {why}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("tto: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

/// Input problems exit with 2, numerical breakdowns with 1.
fn exit_code_for(e: &anyhow::Error) -> u8 {
    use tto_core::Error as E;
    match e.downcast_ref::<tto_core::Error>() {
        Some(E::Precision { .. } | E::NonConvergence { .. } | E::DegenerateAnchor(_)) => 1,
        _ => 2,
    }
}

fn run(cli: &Cli) -> Result<Verdict> {
    let c = &cli.common;
    match &cli.command {
        Command::Norm(inputs) => cmd_norm(c, inputs),
        Command::Bounds { inputs, depth } => cmd_bounds(c, inputs, *depth),
        Command::Accumulate { phi, sizes } => cmd_accumulate(c, phi, sizes),
        Command::Extremal { theta, trials } => cmd_extremal(c, theta, *trials),
        Command::Selftest { scale, theta } => cmd_selftest(c, *scale, theta.as_deref()),
    }
}

fn load_theta(arg: &str, seed: u64) -> Result<BlaschkeProduct> {
    let theta = input::theta(arg, seed)?;
    if theta.degree() == 0 {
        bail!("Θ is constant, so K_Θ = {{0}}; give a Blaschke product of degree at least 1");
    }
    Ok(theta)
}

fn basis_for(c: &Common, theta: &BlaschkeProduct, symbol_degree: usize) -> Result<ModelBasis> {
    let grid = match c.grid {
        Some(n) => CircleGrid::new(n)?,
        None => default_grid(theta, symbol_degree),
    };
    if 2 * (theta.degree() + symbol_degree) >= grid.size() {
        bail!(
            "grid {} cannot resolve Θ of degree {} with a symbol of degree {symbol_degree}",
            grid.size(),
            theta.degree()
        );
    }
    Ok(ModelBasis::malmquist(theta, grid)?)
}

fn emit(c: &Common, text: &str) -> Result<()> {
    match &c.out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(out.flush()?)
        }
    }
}

fn json_text(value: &impl Serialize) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

#[derive(Serialize)]
struct NormReport {
    theta: BlaschkeProduct,
    phi: TrigPolynomial,
    grid: usize,
    dim: usize,
    operator_norm: f64,
    symbol_sup_norm: f64,
    ratio: Option<f64>,
}

fn cmd_norm(c: &Common, inputs: &Inputs) -> Result<Verdict> {
    let theta = load_theta(&inputs.theta, c.seed)?;
    let phi = input::phi(&inputs.phi, c.seed)?;
    let basis = basis_for(c, &theta, phi.degree())?;
    let norm = operator_norm(&assemble(&basis, &phi.sample(basis.grid()))?)?;
    let sup = phi.sup_norm(4);
    let report = NormReport {
        grid: basis.grid().size(),
        dim: basis.dim(),
        operator_norm: norm,
        symbol_sup_norm: sup,
        ratio: (sup > 0.0).then(|| norm / sup),
        theta,
        phi,
    };
    let text = match c.format {
        Format::Json => json_text(&report)?,
        Format::Csv => format!(
            "degree,grid,operator_norm,symbol_sup_norm,ratio\n{},{},{},{},{}\n",
            report.dim,
            report.grid,
            csv_number(norm),
            csv_number(sup),
            report.ratio.map(csv_number).unwrap_or_default()
        ),
    };
    emit(c, &text)?;
    if norm > sup + NORM_TOL * (1.0 + sup) {
        return Ok(Verdict::InvariantFailed(format!(
            "‖A_φ‖ = {norm} exceeds ‖φ‖_∞ = {sup}"
        )));
    }
    Ok(Verdict::Ok)
}

fn cmd_bounds(c: &Common, inputs: &Inputs, depth: usize) -> Result<Verdict> {
    let theta = load_theta(&inputs.theta, c.seed)?;
    let phi = input::phi(&inputs.phi, c.seed)?;
    let basis = basis_for(c, &theta, phi.degree())?;
    let opts = ReportOptions {
        search: SearchParams {
            depth,
            ..SearchParams::default()
        },
        ..ReportOptions::default()
    };
    let report = bound_report(&basis, &SplitSymbol::from_trig(&phi), &opts)?;
    let text = match c.format {
        Format::Json => json_text(&json!({ "theta": theta, "phi": phi, "report": report }))?,
        Format::Csv => format!("{BOUND_REPORT_HEADER}\n{}\n", bound_report_csv_row(&report)),
    };
    emit(c, &text)?;
    for d in &report.diagnostics {
        eprintln!("tto: {d}");
    }
    if !report.ordering_ok {
        return Ok(Verdict::InvariantFailed(format!(
            "bound ordering violated by {:.3e}",
            report.worst_violation()
        )));
    }
    Ok(Verdict::Ok)
}

fn parse_sizes(s: &str) -> Result<Vec<usize>> {
    let sizes = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .with_context(|| format!("bad size {t:?}"))
        })
        .collect::<Result<Vec<_>>>()?;
    if sizes.is_empty() {
        bail!("--sizes needs at least one family size");
    }
    Ok(sizes)
}

fn cmd_accumulate(c: &Common, phi: &str, sizes: &str) -> Result<Verdict> {
    let sizes = parse_sizes(sizes)?;
    let phi = input::phi(phi, c.seed)?;
    if let Some(&m) = sizes.iter().find(|&&m| m > LARGE_FAMILY) {
        eprintln!(
            "tto: warning: m = {m} exceeds {LARGE_FAMILY}; grids grow like m² and this may be slow"
        );
    }
    if c.grid.is_some() {
        eprintln!("tto: warning: --grid is ignored; each family member picks its own grid");
    }
    let rows = accumulation_experiment(&phi, &sizes)?;
    let text = match c.format {
        Format::Json => json_text(&json!({ "phi": phi, "rows": rows }))?,
        Format::Csv => accumulation_csv(&rows),
    };
    emit(c, &text)?;
    if let Some(r) = rows
        .iter()
        .find(|r| r.gap < -NORM_TOL * (1.0 + r.symbol_sup_norm))
    {
        return Ok(Verdict::InvariantFailed(format!(
            "negative gap {} at m = {}",
            r.gap, r.m
        )));
    }
    Ok(Verdict::Ok)
}

fn cmd_extremal(c: &Common, theta: &str, trials: usize) -> Result<Verdict> {
    let theta = load_theta(theta, c.seed)?;
    let basis = basis_for(c, &theta, 0)?;
    let e = extremal_constants(&basis, trials, c.seed)?;
    let text = match c.format {
        Format::Json => json_text(&json!({ "theta": theta, "grid": basis.grid().size(), "constants": e }))?,
        Format::Csv => format!(
            "degree,c2,c2_anchor_re,c2_anchor_im,c1_estimate,c1_lower,c1_heuristic,restarts\n{},{},{},{},{},{},{},{}\n",
            basis.dim(),
            csv_number(e.c2),
            csv_number(e.c2_anchor[0]),
            csv_number(e.c2_anchor[1]),
            csv_number(e.c1_estimate),
            csv_number(e.c1_lower),
            e.c1_heuristic,
            e.restarts
        ),
    };
    emit(c, &text)?;
    if e.c1_estimate < e.c1_lower * (1.0 - NORM_TOL) {
        return Ok(Verdict::InvariantFailed(format!(
            "c1 estimate {} is below the certified lower bound {}",
            e.c1_estimate, e.c1_lower
        )));
    }
    if e.c1_estimate > e.c2 * (1.0 + NORM_TOL) {
        return Ok(Verdict::InvariantFailed(format!(
            "c1 estimate {} exceeds c2 {}",
            e.c1_estimate, e.c2
        )));
    }
    Ok(Verdict::Ok)
}

fn cmd_selftest(c: &Common, scale: f64, theta: Option<&str>) -> Result<Verdict> {
    if !(scale > 0.0 && scale.is_finite()) {
        bail!("--scale must be positive, got {scale}");
    }
    let extra = theta.map(|t| load_theta(t, c.seed)).transpose()?;
    let cfg = SuiteConfig {
        seed: c.seed,
        grid: c.grid,
    };
    let mut outcomes = suites::run_all(&cfg, scale);
    if let Some(theta) = extra {
        outcomes.push(suites::user_theta(
            &cfg,
            &theta,
            ((20.0 * scale).round() as usize).max(1),
        ));
    }
    for o in &outcomes {
        eprintln!("{o}");
    }
    let passed = outcomes.iter().all(|o| o.passed);
    let text = match c.format {
        Format::Json => json_text(
            &json!({ "seed": c.seed, "grid": c.grid, "passed": passed, "suites": outcomes }),
        )?,
        Format::Csv => {
            let mut s = String::from("suite,trials,max_residual,worst_ratio,failures,passed\n");
            for o in &outcomes {
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    o.name,
                    o.trials,
                    csv_number(o.max_residual),
                    csv_number(o.worst_ratio),
                    o.failures,
                    o.passed
                ));
            }
            s
        }
    };
    emit(c, &text)?;
    if !passed {
        let failed: Vec<&str> = outcomes
            .iter()
            .filter(|o| !o.passed)
            .map(|o| o.name.as_str())
            .collect();
        return Ok(Verdict::InvariantFailed(format!(
            "suites failed: {}",
            failed.join(", ")
        )));
    }
    Ok(Verdict::Ok)
}
