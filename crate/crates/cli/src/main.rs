//! Command-line front end: resonance-rate sweeps, analytic-vs-numeric
//! validation, amplification-curve export, and single-point cavity tuning.
//!
//! Exit codes: 0 success, 2 configuration error, 3 no cavity length solves
//! the requested resonance, 4 integration failure under `--strict`.

mod config;
mod record;
mod run;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::SweepConfig;
use record::{rates_row, validate_row, RATES_HEADER, VALIDATE_HEADER};
use run::{figure_curve_csv, parse_mode_arg, run_figure, run_rates, run_tune, run_validate};

const EXIT_CONFIG: u8 = 2;
const EXIT_NO_SOLUTION: u8 = 3;
const EXIT_INTEGRATION: u8 = 4;

#[derive(Parser)]
#[command(
    name = "gwcavity",
    about = "Parametric particle creation in a driven cavity under a gravitational wave",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonSweepArgs {
    /// Sweep configuration file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output path.
    #[arg(long)]
    out: PathBuf,
    /// Worker threads for grid evaluation (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Override the long-wavelength validity threshold from the config.
    #[arg(long)]
    validity_threshold: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Analytic rate table over the configured grid, written as CSV.
    Rates {
        #[command(flatten)]
        common: CommonSweepArgs,
    },
    /// Analytic prediction and full numeric occupation side by side.
    Validate {
        #[command(flatten)]
        common: CommonSweepArgs,
        /// Override the relative ODE tolerance from the config.
        #[arg(long)]
        tol_rel: Option<f64>,
        /// Override the absolute ODE tolerance from the config.
        #[arg(long)]
        tol_abs: Option<f64>,
        /// Exit with code 4 if any row fails to integrate.
        #[arg(long)]
        strict: bool,
    },
    /// Amplification-rate curves chi/(eps kappa) vs Omega_c, one CSV per
    /// Omega_g value plus a dominance summary, written into a directory.
    Figure {
        #[command(flatten)]
        common: CommonSweepArgs,
    },
    /// Tune the cubic cavity length for one condition and print the record.
    Tune {
        /// Condition name (mechanical, gw-only, sideband-plus, sideband-minus,
        /// sum-plus, sum-gw-minus, sum-mech-minus).
        #[arg(long)]
        condition: String,
        /// Primary mode as "n_x,n_y,n_z".
        #[arg(long)]
        mode_k: String,
        /// Partner mode for sum conditions.
        #[arg(long)]
        mode_j: Option<String>,
        #[arg(long)]
        omega_c: f64,
        #[arg(long)]
        omega_g: f64,
        #[arg(long, default_value_t = 0.0)]
        epsilon: f64,
        #[arg(long, conflicts_with = "kappa")]
        h_plus: Option<f64>,
        /// Source constant; sets h_plus = kappa * Omega_g^2.
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long, default_value_t = gwcavity::DEFAULT_LONG_WAVELENGTH_THRESHOLD)]
        validity_threshold: f64,
        /// Write the JSON record here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Rates { common } => cmd_rates(&common),
        Command::Validate {
            common,
            tol_rel,
            tol_abs,
            strict,
        } => cmd_validate(&common, tol_rel, tol_abs, strict),
        Command::Figure { common } => cmd_figure(&common),
        Command::Tune {
            condition,
            mode_k,
            mode_j,
            omega_c,
            omega_g,
            epsilon,
            h_plus,
            kappa,
            validity_threshold,
            out,
        } => cmd_tune(
            condition,
            mode_k,
            mode_j,
            omega_c,
            omega_g,
            epsilon,
            h_plus,
            kappa,
            validity_threshold,
            out,
        ),
    }
}

fn load_config(path: &Path) -> Result<SweepConfig, ExitCode> {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", path.display());
            return Err(ExitCode::from(EXIT_CONFIG));
        }
    };
    SweepConfig::from_toml(&text).map_err(|e| {
        eprintln!("error: {e}");
        ExitCode::from(EXIT_CONFIG)
    })
}

fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match threads {
        Some(n) if n > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(f),
        _ => f(),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), ExitCode> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            if let Err(e) = std::fs::create_dir_all(parent) {
                eprintln!("error: cannot create {}: {e}", parent.display());
                return Err(ExitCode::FAILURE);
            }
        }
    }
    std::fs::write(path, contents).map_err(|e| {
        eprintln!("error: cannot write {}: {e}", path.display());
        ExitCode::FAILURE
    })
}

fn cmd_rates(common: &CommonSweepArgs) -> ExitCode {
    let config = match load_config(&common.config) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let threshold = common
        .validity_threshold
        .unwrap_or(config.validity_threshold);
    let records = with_pool(common.threads, || run_rates(&config, threshold));
    let mut out = String::from(RATES_HEADER);
    out.push('\n');
    for r in &records {
        out.push_str(&rates_row(r));
        out.push('\n');
    }
    if let Err(code) = write_file(&common.out, &out) {
        return code;
    }
    println!("wrote {} rows to {}", records.len(), common.out.display());
    ExitCode::SUCCESS
}

fn cmd_validate(
    common: &CommonSweepArgs,
    tol_rel: Option<f64>,
    tol_abs: Option<f64>,
    strict: bool,
) -> ExitCode {
    let config = match load_config(&common.config) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let threshold = common
        .validity_threshold
        .unwrap_or(config.validity_threshold);
    let mut opts = config.integration.clone();
    if let Some(r) = tol_rel {
        opts.rel_tol = r;
    }
    if let Some(a) = tol_abs {
        opts.abs_tol = a;
    }

    let rows = with_pool(common.threads, || run_validate(&config, threshold, &opts));
    let mut out = String::from(VALIDATE_HEADER);
    out.push('\n');
    let mut failures = 0usize;
    for (i, (rec, warnings)) in rows.iter().enumerate() {
        for w in warnings {
            eprintln!("warning[row {i}]: {w}");
        }
        if rec.status.starts_with("integration-failed") {
            failures += 1;
        }
        out.push_str(&validate_row(rec));
        out.push('\n');
    }
    if let Err(code) = write_file(&common.out, &out) {
        return code;
    }
    println!(
        "wrote {} rows to {} ({} integration failures)",
        rows.len(),
        common.out.display(),
        failures
    );
    if strict && failures > 0 {
        return ExitCode::from(EXIT_INTEGRATION);
    }
    ExitCode::SUCCESS
}

fn sanitize(v: f64) -> String {
    format!("{v}").replace('.', "p").replace('-', "m")
}

fn cmd_figure(common: &CommonSweepArgs) -> ExitCode {
    let config = match load_config(&common.config) {
        Ok(c) => c,
        Err(code) => return code,
    };
    let threshold = common
        .validity_threshold
        .unwrap_or(config.validity_threshold);
    let output = match with_pool(common.threads, || run_figure(&config, threshold)) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    if let Err(e) = std::fs::create_dir_all(&common.out) {
        eprintln!("error: cannot create {}: {e}", common.out.display());
        return ExitCode::FAILURE;
    }
    for curve in &output.curves {
        let name = format!("figure_omega_g_{}.csv", sanitize(curve.omega_g));
        if let Err(code) = write_file(&common.out.join(name), &figure_curve_csv(curve)) {
            return code;
        }
    }
    let summary = output.summary.join("\n") + "\n";
    if let Err(code) = write_file(&common.out.join("figure_summary.csv"), &summary) {
        return code;
    }
    println!(
        "wrote {} curve files and figure_summary.csv to {}",
        output.curves.len(),
        common.out.display()
    );
    ExitCode::SUCCESS
}

#[allow(clippy::too_many_arguments)]
fn cmd_tune(
    condition: String,
    mode_k: String,
    mode_j: Option<String>,
    omega_c: f64,
    omega_g: f64,
    epsilon: f64,
    h_plus: Option<f64>,
    kappa: Option<f64>,
    validity_threshold: f64,
    out: Option<PathBuf>,
) -> ExitCode {
    let (_, mode_k_triple) = match parse_mode_arg(&mode_k) {
        Ok(m) => m,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let mode_j_triple = match mode_j.as_deref().map(parse_mode_arg).transpose() {
        Ok(m) => m.map(|(_, t)| t),
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let cond = match config::parse_condition(&condition, mode_k_triple, mode_j_triple) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };

    let args = run::TuneArgs {
        cond,
        condition_name: condition,
        mode_k: mode_k_triple,
        mode_j: mode_j_triple,
        omega_c,
        omega_g,
        epsilon,
        h_plus,
        kappa,
        threshold: validity_threshold,
    };
    match run_tune(&args) {
        Ok(rec) => {
            let json = rec.to_json();
            match out {
                Some(path) => {
                    if let Err(code) = write_file(&path, &(json + "\n")) {
                        return code;
                    }
                    println!("wrote record to {}", path.display());
                }
                None => println!("{json}"),
            }
            ExitCode::SUCCESS
        }
        Err(gwcavity::ResonanceError::NoSolution(m)) => {
            eprintln!("error: no solution: {m}");
            ExitCode::from(EXIT_NO_SOLUTION)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_CONFIG)
        }
    }
}
