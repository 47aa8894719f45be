use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::Deserialize;
use serde_json::json;

use bchq::bch::{bch_lie_components, MAX_DEFECT_DEGREE};
use bchq::bounds::derive_constants;
use bchq::numeric::{bch_inverse_solver, quasi_norm, random_matrix, DenseMatrix, QuasiNormSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::settings::{OutputFormat, Settings};

#[derive(Args)]
pub struct InverseArgs {
    /// JSON matrix file: {"dim": n, "entries": [row-major doubles]}.
    #[arg(long, value_name = "PATH")]
    matrix: PathBuf,

    /// Quasi-triangle constant of the active norm.
    #[arg(long, value_name = "R")]
    c_tri: f64,

    /// Bracket continuity constant of the active norm.
    #[arg(long, value_name = "R")]
    c_bracket: f64,

    /// Truncation degree of the iterated tail.
    #[arg(long, value_name = "N")]
    degree: Option<usize>,

    /// Stop when the quasi-norm of the update drops below this.
    #[arg(long, value_name = "R")]
    tol: Option<f64>,

    #[arg(long, value_name = "K")]
    max_iter: Option<usize>,

    /// Norm used by the iteration: op2, entrywise, weak-schatten.
    #[arg(long, value_name = "NORM", value_parser = ["op2", "entrywise", "weak-schatten"])]
    norm: Option<String>,

    /// Exponent for the entrywise / weak-Schatten norms.
    #[arg(long, value_name = "P")]
    p: Option<f64>,

    /// Start the iteration at -x plus a seeded perturbation of this norm
    /// fraction of |x|. The default start -x is already the exact fixed
    /// point, so its trace is a single trivial step.
    #[arg(long, value_name = "FRACTION")]
    perturb_start: Option<f64>,

    /// Seed of the starting perturbation.
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
}

#[derive(Deserialize)]
struct MatrixFile {
    dim: usize,
    entries: Vec<f64>,
}

pub fn run(args: &InverseArgs, settings: &Settings) -> Result<ExitCode> {
    let text = std::fs::read_to_string(&args.matrix)
        .with_context(|| format!("reading {}", args.matrix.display()))?;
    let file: MatrixFile = serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", args.matrix.display()))?;
    let x = DenseMatrix::from_entries(file.dim, file.entries)?;

    let spec = match args.norm.as_deref().unwrap_or("op2") {
        "op2" => QuasiNormSpec::Operator2Norm,
        "entrywise" => QuasiNormSpec::EntrywiseP { p: args.p.context("--p is required with --norm entrywise")? },
        "weak-schatten" => {
            QuasiNormSpec::WeakSchattenP { p: args.p.context("--p is required with --norm weak-schatten")? }
        }
        other => bail!("unknown norm {other:?}"),
    };
    let constants = derive_constants(args.c_tri, None, Some(args.c_bracket))?;
    let degree = args.degree.unwrap_or(12);
    if degree > MAX_DEFECT_DEGREE {
        bail!("--degree {degree} exceeds the certified projection range (max {MAX_DEFECT_DEGREE})");
    }
    let tol = args.tol.unwrap_or(settings.tol_numeric);
    let max_iter = args.max_iter.unwrap_or(500);
    let seed = args.seed.unwrap_or(settings.seed);

    let start = match args.perturb_start {
        None => None,
        Some(fraction) => {
            if fraction.is_nan() || fraction < 0.0 {
                bail!("--perturb-start must be nonnegative, got {fraction}");
            }
            let x_norm = quasi_norm(&x, &spec)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let raw = random_matrix(&mut rng, x.dim(), 1.0);
            let raw_norm = quasi_norm(&raw, &spec)?;
            if raw_norm <= f64::MIN_POSITIVE {
                bail!("degenerate seeded perturbation");
            }
            let delta = raw.scale(fraction * x_norm / raw_norm);
            Some(x.neg().add(&delta)?)
        }
    };

    let components = bch_lie_components(degree)?;
    let report = bch_inverse_solver(
        &x,
        &components,
        &constants,
        &spec,
        degree,
        tol,
        max_iter,
        start.as_ref(),
    )?;

    match settings.format {
        OutputFormat::Json => {
            let doc = json!({
                "seed": settings.seed,
                "degree": degree,
                "tol": tol,
                "norm": spec,
                "report": report,
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
        OutputFormat::Csv => {
            println!("name,value");
            println!("iterations,{}", report.iterations);
            println!("distance_to_neg_x,{}", report.distance_to_neg_x);
            println!("residual,{}", report.residual);
            println!("contraction_u,{}", report.contraction_u);
            println!("predicted_ratio,{}", report.predicted_ratio);
            for (i, u) in report.update_norms.iter().enumerate() {
                println!("update_{},{}", i + 1, u);
            }
        }
        OutputFormat::Human => {
            println!("inverse solve: degree {degree}, tol {tol:.1e}, {} iterations", report.iterations);
            if report.radius_warning {
                println!(
                    "warning: |x| lies between rho_inv and rho — convergence is not guaranteed by the closed forms"
                );
            }
            for (i, u) in report.update_norms.iter().enumerate() {
                println!("  update {:>3}: {u:.6e}", i + 1);
            }
            println!("  distance to -x           = {:.6e}", report.distance_to_neg_x);
            println!("  residual |Z_N(x, w)|     = {:.6e}", report.residual);
            println!("  u = 4*C_b*(1+2*C_tri)*|x| = {:.6}", report.contraction_u);
            println!("  predicted ratio u/(1-u)  = {:.6}", report.predicted_ratio);
            let observed = report.observed_ratios.iter().cloned().fold(0.0f64, f64::max);
            println!("  max observed ratio       = {observed:.6}");
            println!("fixed point w =");
            print!("{}", report.w);
        }
    }
    Ok(ExitCode::SUCCESS)
}
