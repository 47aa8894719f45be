use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::Args;
use serde_json::json;

use bchq::bounds::{
    derive_constants, neumann_radius, radii, schatten_constants, ConstantSet, RadiusReport,
};

use crate::settings::{OutputFormat, Settings};

#[derive(Args)]
pub struct BoundsArgs {
    /// Quasi-triangle constant C_tri >= 1.
    #[arg(long, value_name = "R")]
    c_tri: Option<f64>,

    /// Submultiplicativity constant of the ambient associative algebra.
    #[arg(long, value_name = "R")]
    c_mult: Option<f64>,

    /// Bracket continuity constant (derived as 2*C_tri*C_mult when absent).
    #[arg(long, value_name = "R")]
    c_bracket: Option<f64>,

    /// Weak-Schatten exponent; implies C_tri = 2^(1/p - 1).
    #[arg(long, value_name = "P", conflicts_with = "c_tri")]
    schatten_p: Option<f64>,

    /// Ideal submultiplicativity constant for the weak-Schatten mode.
    #[arg(long, value_name = "R", requires = "schatten_p")]
    c_ideal: Option<f64>,
}

pub fn run(args: &BoundsArgs, settings: &Settings) -> Result<ExitCode> {
    let mut notes: Vec<String> = Vec::new();
    let constants = if let Some(p) = args.schatten_p {
        let c_ideal = args.c_ideal.unwrap_or(1.0);
        let c = schatten_constants(p, c_ideal)?;
        let r = radii(&c);
        notes.push(format!(
            "weak-Schatten chain: C_tri = 2^(1/p-1) = {:.6}, C_bracket = 2*C_tri*C_ideal = {:.6}, r_bch = 1/(4*C_bracket) = {:.6}",
            c.c_tri, c.c_bracket, r.r_bch
        ));
        if (p - 0.5).abs() < 1e-9 && (c_ideal - 1.0).abs() < 1e-9 {
            notes.push(
                "note: a published example quotes 1/32 as the guaranteed radius for p = 1/2 via a different chain; the closed forms here give 1/16"
                    .to_string(),
            );
        }
        c
    } else {
        let c_tri = args
            .c_tri
            .context("--c-tri is required unless --schatten-p is used")?;
        derive_constants(c_tri, args.c_mult, args.c_bracket)?
    };
    let report = radii(&constants);

    match settings.format {
        OutputFormat::Human => print_human(&constants, &report, &notes),
        OutputFormat::Csv => print_csv(&constants, &report),
        OutputFormat::Json => {
            let doc = json!({
                "seed": settings.seed,
                "constants": constants,
                "radii": report,
                "neumann_radius": neumann_radius(&constants),
                "notes": notes,
            });
            println!("{}", serde_json::to_string_pretty(&doc)?);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn print_human(c: &ConstantSet, r: &RadiusReport, notes: &[String]) {
    println!("constants");
    println!("  C_tri                                  = {:.12}", c.c_tri);
    match c.c_mult {
        Some(m) => println!("  C_mult                                 = {m:.12}"),
        None => println!("  C_mult                                 = (not given)"),
    }
    println!("  C_bracket                              = {:.12}", c.c_bracket);
    println!("  p        = 1/log2(2*C_tri)             = {:.12}", c.p);
    println!("  c1                                     = {:.12}", c.c1);
    println!("  c2       = 2^(1/p) = 2*C_tri           = {:.12}", c.c2);
    println!("  C_total  = C_tri*C_bracket             = {:.12}", c.c_total);
    println!("radii");
    println!("  r_bch    = 1/(4*C_bracket)             = {:.12}", r.r_bch);
    println!("  r_cons   = 1/(4*C_total)               = {:.12}", r.r_conservative);
    match r.r_assoc {
        Some(v) => println!("  r_assoc  = 1/(8*C_tri^2*C_mult)        = {v:.12}"),
        None => println!("  r_assoc  = 1/(8*C_tri^2*C_mult)        = (needs C_mult)"),
    }
    println!("  rho      = 1/(8*C_bracket)             = {:.12}", r.rho);
    println!("  rho0     = 1/(16*C_bracket)            = {:.12}", r.rho0);
    println!("  rho_inv  = 1/(8*C_bracket*(1+2*C_tri)^2) = {:.12}", r.rho_inv);
    println!("  L0 on B(0, rho0)                       = {:.12}", r.lipschitz_l0);
    println!("  neumann  = 2^(-1/p) = 1/c2             = {:.12}", neumann_radius(c));
    for note in notes {
        println!("{note}");
    }
}

fn print_csv(c: &ConstantSet, r: &RadiusReport) {
    println!("name,value");
    println!("c_tri,{}", c.c_tri);
    if let Some(m) = c.c_mult {
        println!("c_mult,{m}");
    }
    println!("c_bracket,{}", c.c_bracket);
    println!("p,{}", c.p);
    println!("c1,{}", c.c1);
    println!("c2,{}", c.c2);
    println!("c_total,{}", c.c_total);
    println!("r_bch,{}", r.r_bch);
    println!("r_conservative,{}", r.r_conservative);
    if let Some(v) = r.r_assoc {
        println!("r_assoc,{v}");
    }
    println!("rho,{}", r.rho);
    println!("rho0,{}", r.rho0);
    println!("rho_inv,{}", r.rho_inv);
    println!("lipschitz_l0,{}", r.lipschitz_l0);
    println!("neumann_radius,{}", neumann_radius(c));
}
