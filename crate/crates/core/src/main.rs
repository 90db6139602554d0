use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::json;

use polyherm::quadrature::{exactness_order, gram, identity_deviation, QuadRule2D};
use polyherm::spaces::{psi_exppoly, psi_mn_exppoly, psi_tilde_exppoly, QuadExponent, SParam};
use polyherm::verify::{
    emit_grid, parse_tolerance, run_report, write_grid, GridFunction, GridOptions, GridSpec, OutputFormat, Suite,
    SuiteConfig,
};
use polyherm::{Error, Result};

#[derive(Parser)]
#[command(name = "polyherm", version, about = "Numerical verification of Hermite bases, kernels and transforms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites and emit a JSON report.
    Verify(VerifyArgs),
    /// Tabulate a function on a rectangular grid as CSV.
    Grid(GridArgs),
    /// Gram matrix of a basis family in the weighted space.
    Gram(GramArgs),
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite to run (repeatable); all when omitted.
    #[arg(long = "suite")]
    suites: Vec<Suite>,
    /// Value of s in (0,1) (repeatable).
    #[arg(long = "s")]
    s_values: Vec<f64>,
    #[arg(long)]
    max_m: Option<usize>,
    #[arg(long)]
    max_n: Option<usize>,
    #[arg(long = "quad-1d")]
    quad_1d: Option<usize>,
    #[arg(long = "quad-2d")]
    quad_2d: Option<usize>,
    /// Tolerance override `name=value` (repeatable).
    #[arg(long = "tol")]
    tolerances: Vec<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Report path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value = "json")]
    format: OutputFormat,
}

#[derive(Args)]
struct GridArgs {
    /// psi, psi_mn, kernel_K, kernel_Kn, weight_omega, kernel_B or kernel_S.
    #[arg(long = "fn")]
    function: String,
    #[arg(long, default_value_t = 0.5)]
    s: f64,
    #[arg(long, default_value_t = 0)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    n: usize,
    #[arg(long = "w-re", default_value_t = 0.0, allow_negative_numbers = true)]
    w_re: f64,
    #[arg(long = "w-im", default_value_t = 0.0, allow_negative_numbers = true)]
    w_im: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    t: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    x: f64,
    /// `x0,y0,x1,y1,nx,ny`.
    #[arg(long, default_value = "-1,-1,1,1,3,3", allow_hyphen_values = true)]
    grid: GridSpec,
    /// CSV path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GramArgs {
    /// psi, psi_tilde or psi_mn; psi_tilde is paired with `e^{-nu|z|^2}`, the others with `omega_s`.
    #[arg(long, default_value = "psi")]
    basis: String,
    #[arg(long, default_value_t = 0.5)]
    s: f64,
    #[arg(long, default_value_t = 12)]
    max_m: usize,
    #[arg(long, default_value_t = 0)]
    max_n: usize,
    /// Rule order per axis; exact for the basis degree when omitted.
    #[arg(long = "quad-2d")]
    quad_2d: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let outcome = match cli.command {
        Command::Verify(a) => verify(a),
        Command::Grid(a) => grid(a),
        Command::Gram(a) => gram_cmd(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("polyherm: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verify(a: VerifyArgs) -> Result<bool> {
    let mut cfg = SuiteConfig::default();
    if !a.suites.is_empty() {
        cfg.suites = a.suites;
    }
    if !a.s_values.is_empty() {
        cfg.s_values = a.s_values;
    }
    cfg.max_m = a.max_m.unwrap_or(cfg.max_m);
    cfg.max_n = a.max_n.unwrap_or(cfg.max_n);
    cfg.quad_order_1d = a.quad_1d.unwrap_or(cfg.quad_order_1d);
    cfg.quad_order_2d = a.quad_2d.unwrap_or(cfg.quad_order_2d);
    cfg.seed = a.seed.unwrap_or(cfg.seed);
    for t in &a.tolerances {
        let (name, value) = parse_tolerance(t)?;
        cfg.tolerances.insert(name, value);
    }
    cfg.output_path = a.out.clone();
    cfg.output_format = a.format;

    let report = run_report(&cfg)?;
    for c in &report.checks {
        let status = match (c.exploratory, c.passed) {
            (true, _) => "INFO",
            (false, true) => "PASS",
            (false, false) => "FAIL",
        };
        let params = serde_json::to_string(&c.params).unwrap_or_default();
        eprintln!("{status} {} {params} err={:.3e} tol={:.1e}", c.name, c.max_abs_error, c.tolerance);
    }
    let mut text = report.to_json();
    text.push('\n');
    emit(&text, a.out.as_ref())?;
    Ok(report.passed)
}

fn grid(a: GridArgs) -> Result<bool> {
    let f: GridFunction = a.function.parse()?;
    let sp = SParam::new(a.s).map_err(|e| Error::Config(e.to_string()))?;
    let opts = GridOptions { m: a.m, n: a.n, w: Complex64::new(a.w_re, a.w_im), t: a.t, x: a.x };
    match &a.out {
        Some(p) => {
            emit_grid(f, &a.grid, &sp, &opts, p)?;
        }
        None => print!("{}", write_grid(f, &a.grid, &sp, &opts)?),
    }
    Ok(true)
}

fn gram_cmd(a: GramArgs) -> Result<bool> {
    let sp = SParam::new(a.s).map_err(|e| Error::Config(e.to_string()))?;
    let fs: Vec<_> = match a.basis.as_str() {
        "psi" => (0..=a.max_m).map(|m| psi_exppoly(m, &sp)).collect(),
        "psi_tilde" => (0..=a.max_m).map(|m| psi_tilde_exppoly(m, &sp)).collect(),
        "psi_mn" => (0..=a.max_n).flat_map(|n| (0..=a.max_m).map(move |m| (m, n))).map(|(m, n)| psi_mn_exppoly(m, n, &sp)).collect(),
        other => return Err(Error::Config(format!("unknown basis '{other}'"))),
    };
    let degree = a.max_m + if a.basis == "psi_mn" { a.max_n } else { 0 };
    let order = a.quad_2d.unwrap_or_else(|| exactness_order(2 * degree));
    let weight = if a.basis == "psi_tilde" { QuadExponent::gaussian(sp.nu()) } else { sp.omega_exponent() };
    let g = gram(&fs, weight, &QuadRule2D::square(order).map_err(|e| Error::Config(e.to_string()))?)?;
    let matrix: Vec<Vec<[f64; 2]>> =
        (0..g.nrows()).map(|i| (0..g.ncols()).map(|j| [g[(i, j)].re, g[(i, j)].im]).collect()).collect();
    let doc = json!({
        "basis": a.basis,
        "s": a.s,
        "max_m": a.max_m,
        "max_n": a.max_n,
        "rule_order": order,
        "identity_deviation": identity_deviation(&g),
        "matrix": matrix,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("gram serializes");
    text.push('\n');
    emit(&text, a.out.as_ref())?;
    Ok(true)
}
