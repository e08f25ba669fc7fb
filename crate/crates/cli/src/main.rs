use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nsprox::criteria::{CriterionParams, DEFAULT_BAND_THRESHOLD};
use nsprox::io;
use nsprox::spectral::checkpoint;
use nsprox::verify;

/// Pseudo-spectral Navier-Stokes on the 3-torus with eigenfunction-proximity
/// diagnostics.
#[derive(Parser)]
#[command(name = "nsprox", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a configuration and write diagnostics.csv, summary.json and
    /// checkpoints (OUTPUT_DIR overrides the configured directory).
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Evaluate every criterion on one checkpoint and print a JSON report.
    Diagnose {
        #[arg(long)]
        field: PathBuf,
        /// Lebesgue exponent, 6/5 < q <= 3 (repeatable).
        #[arg(long = "q")]
        q: Vec<f64>,
        /// Sobolev order, 2 <= alpha <= 5/2 (repeatable).
        #[arg(long = "alpha")]
        alpha: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        viscosity: f64,
        #[arg(long, default_value_t = DEFAULT_BAND_THRESHOLD)]
        band_threshold: f64,
    },
    /// Generate initial data from a [grid] + [initial_data] description.
    GenIc {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the property suite; exit status is nonzero if any property fails.
    Verify {
        /// Only run properties whose name contains this string.
        #[arg(long)]
        filter: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config } => run(&config),
        Command::Diagnose {
            field,
            q,
            alpha,
            viscosity,
            band_threshold,
        } => diagnose(&field, &q, &alpha, viscosity, band_threshold),
        Command::GenIc { spec, out } => gen_ic(&spec, &out),
        Command::Verify { filter } => Ok(run_verify(filter.as_deref())),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn run(path: &Path) -> nsprox::Result<ExitCode> {
    let config = io::load_config(path)?;
    let dir = std::env::var_os("OUTPUT_DIR").map_or_else(|| config.output_dir.clone(), PathBuf::from);
    let out = io::run(&config, &dir)?;
    let s = &out.summary;
    println!(
        "{} records to t = {} in {} (config {})",
        s.records,
        s.final_time,
        dir.display(),
        &s.config_hash[..12]
    );
    println!(
        "max energy residual {:.3e}, growth identity residual {:.3e} (budget {:.3e})",
        s.metrics.max_energy_residual,
        s.metrics.max_growth_identity_residual,
        s.metrics.growth_identity_tolerance
    );
    for g in &s.growth {
        println!(
            "growth {:<14} c = {:.4e}  |grad u|^2 = {:.6e} <= {:.6e}  {}",
            g.label,
            g.c_assumed,
            g.grad_sq,
            g.rhs,
            if g.holds { "holds" } else { "VIOLATED" }
        );
    }
    if s.flags.under_resolved {
        eprintln!("warning: under-resolved (energy residual above threshold)");
    }
    if let Some(h) = &s.halted {
        eprintln!("error: run halted at t = {}: {}", h.t, h.reason);
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}

fn diagnose(
    field: &Path,
    qs: &[f64],
    alphas: &[f64],
    viscosity: f64,
    band_threshold: f64,
) -> nsprox::Result<ExitCode> {
    let u = checkpoint::load(field)?;
    let mut criteria = Vec::new();
    let default_q = [2.0, 3.0];
    let qs = if qs.is_empty() && alphas.is_empty() {
        &default_q[..]
    } else {
        qs
    };
    for &q in qs {
        criteria.push(CriterionParams::from_q(q)?);
    }
    for &a in alphas {
        criteria.push(CriterionParams::from_alpha(a)?);
    }
    let report = io::diagnose(&u, &criteria, viscosity, band_threshold)?;
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    Ok(if report.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn gen_ic(spec: &Path, out: &Path) -> nsprox::Result<ExitCode> {
    let spec = io::load_field_spec(spec)?;
    let u = io::gen_ic(&spec, out)?;
    println!(
        "wrote {} (n = {}, L = {}, energy = {:.6e})",
        out.display(),
        spec.n,
        spec.box_length,
        0.5 * nsprox::spectral::hs_norm(&u, 0.0)?.powi(2)
    );
    Ok(ExitCode::SUCCESS)
}

fn run_verify(filter: Option<&str>) -> ExitCode {
    let checks = verify::run_suite(filter, |c| {
        println!(
            "{} {:<36} margin {:+.3e}  ({:.2} s) {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.margin + 0.0,
            c.seconds,
            c.detail
        );
    });
    let failed = checks.iter().filter(|c| !c.pass).count();
    println!("{} properties, {} failed", checks.len(), failed);
    if failed == 0 && !checks.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
