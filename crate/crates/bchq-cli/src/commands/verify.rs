use std::process::ExitCode;

use anyhow::Result;
use clap::Args;
use serde_json::json;

use bchq::bch::bch_lie_components;
use bchq::verify::{all_passed, exact_checks, numeric_checks, NumericConfig};

use crate::settings::{check_degree, OutputFormat, Settings};

#[derive(Args)]
pub struct VerifyArgs {
    /// Degree of the exact-arithmetic certificates.
    #[arg(long, value_name = "N")]
    max_degree: Option<usize>,

    /// Seed of every numeric check (recorded in all reports).
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,

    /// Seeded pairs/triples per numeric suite.
    #[arg(long, value_name = "K")]
    pairs: Option<usize>,

    /// Samples per inequality sampler.
    #[arg(long, value_name = "K")]
    sampler_samples: Option<usize>,

    /// Random pairs for the p-subadditivity sweep.
    #[arg(long, value_name = "K")]
    subadditivity_pairs: Option<usize>,

    /// Run the exact certificates only.
    #[arg(long)]
    skip_numeric: bool,
}

pub fn run(args: &VerifyArgs, settings: &Settings) -> Result<ExitCode> {
    let max_degree = args.max_degree.unwrap_or(settings.max_degree);
    check_degree(max_degree)?;
    let seed = args.seed.unwrap_or(settings.seed);
    let lie_max = settings.lie_max.min(max_degree);

    let (mut checks, _rows) = exact_checks(max_degree, lie_max)?;

    let mut sampler_reports = Vec::new();
    if !args.skip_numeric {
        // the numeric criteria are pinned at truncation 12 regardless of the
        // exact-path degree
        let truncation = 12;
        let components = bch_lie_components(truncation)?;
        let config = NumericConfig {
            seed,
            truncation,
            pairs: args.pairs.unwrap_or(100),
            sampler_samples: args.sampler_samples.unwrap_or(1000),
            subadditivity_pairs: args.subadditivity_pairs.unwrap_or(10_000),
            tol: settings.tol_exact.max(1e-14),
            ..NumericConfig::default()
        };
        let run = numeric_checks(&config, &components)?;
        checks.extend(run.checks);
        sampler_reports = run.sampler_reports;
    }

    let passed = all_passed(&checks);
    match settings.format {
        OutputFormat::Json => {
            let doc = json!({
                "seed": seed,
                "max_degree": max_degree,
                "lie_max": lie_max,
                "checks": checks,
                "sampler_reports": sampler_reports,
                "all_passed": passed,
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
        _ => {
            for check in &checks {
                let tag = if check.informational {
                    "info"
                } else if check.passed {
                    " ok "
                } else {
                    "FAIL"
                };
                println!("[{tag}] {}: {}", check.name, check.detail);
            }
            println!();
            println!(
                "{} checks, {} informational, seed {seed}: {}",
                checks.len(),
                checks.iter().filter(|c| c.informational).count(),
                if passed { "all passed" } else { "FAILURES present" }
            );
        }
    }
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
