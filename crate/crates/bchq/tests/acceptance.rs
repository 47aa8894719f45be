//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Run with `cargo test -p bchq --test acceptance -- --nocapture` to see the
//! per-criterion lines and timings.
//!
//! Criterion 2 (reproduction of the previously published A-column) is
//! expected to fail on rows 4..20: the exact recomputation — certified here
//! by the Friedrichs primitivity oracle, by exact re-expansion of the Lyndon
//! projection, and cross-checked against two independent implementations —
//! disagrees with the published renderings beyond degree 3. The test asserts
//! the criterion as stated and reports every diverging row rather than
//! hiding the difference.

use std::sync::OnceLock;
use std::time::Instant;

use num::BigInt;

use bchq::bch::{
    bch_lie_components, catalan, catalan_convolution_holds, coefficient_table, expand_tree,
    lie_project, matches_reference, BchExpansion, LieCombination, REFERENCE_A_DEC4,
    REFERENCE_B_DEC, REFERENCE_CATALAN_DEC4,
};
use bchq::bounds::{derive_constants, radii};
use bchq::decimal::render_fixed4;
use bchq::series::rational;
use bchq::verify::{
    associativity_suite, builtin_fit_values, group_law_suite, inverse_solver_suite, sampler_suite,
    subadditivity_suite, ASSOCIATIVITY_MIN_FACTOR, CONTRACTION_RATIO_SLACK, GROUP_LAW_RESIDUAL_MAX,
    INVERSE_DISTANCE_MAX, SAMPLER_RATIO_TOL,
};
use bchq::words::{BracketTree, Letter};
use bchq::Word;

const SEED: u64 = 42;
const DIM: usize = 4;
const TRUNCATION: usize = 12;

fn components() -> &'static [LieCombination] {
    static COMPONENTS: OnceLock<Vec<LieCombination>> = OnceLock::new();
    COMPONENTS.get_or_init(|| bch_lie_components(TRUNCATION).expect("certified projection"))
}

fn leaf(l: Letter) -> BracketTree {
    BracketTree::Leaf(l)
}

fn node(a: BracketTree, b: BracketTree) -> BracketTree {
    BracketTree::Node(Box::new(a), Box::new(b))
}

#[test]
fn criterion_01_low_degree_exact() {
    let start = Instant::now();
    let exp = BchExpansion::compute(3).unwrap();

    let z1 = exp.homogeneous_series(1).unwrap();
    assert_eq!(z1.coefficient(&Word::parse("X").unwrap()), rational(1, 1));
    assert_eq!(z1.coefficient(&Word::parse("Y").unwrap()), rational(1, 1));
    assert_eq!(z1.term_count(), 2);

    let z2 = exp.homogeneous_series(2).unwrap();
    assert_eq!(z2.coefficient(&Word::parse("XY").unwrap()), rational(1, 2));
    assert_eq!(z2.coefficient(&Word::parse("YX").unwrap()), rational(-1, 2));
    assert_eq!(z2.term_count(), 2);

    // Z_3 re-expands to (1/12)[X,[X,Y]] - (1/12)[Y,[X,Y]]
    let t_xxy = node(leaf(Letter::X), node(leaf(Letter::X), leaf(Letter::Y)));
    let t_yxy = node(leaf(Letter::Y), node(leaf(Letter::X), leaf(Letter::Y)));
    let manual = expand_tree(&t_xxy, 3)
        .unwrap()
        .scale(&rational(1, 12))
        .add(&expand_tree(&t_yxy, 3).unwrap().scale(&rational(-1, 12)))
        .unwrap();
    assert_eq!(manual, exp.homogeneous_series(3).unwrap());

    // exact A and B values at degrees 1..3
    let expected_a = [rational(2, 1), rational(1, 1), rational(2, 3)];
    let expected_b = [rational(2, 1), rational(1, 2), rational(1, 6)];
    for n in 1..=3 {
        assert_eq!(exp.associative_sum(n).unwrap(), expected_a[n - 1], "A_{n}");
        let b = lie_project(&exp.homogeneous_series(n).unwrap()).unwrap().sum();
        assert_eq!(b, expected_b[n - 1], "B_{n}");
    }

    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("criterion 01 PASS - Z_1, Z_2, Z_3 exact with A = (2, 1, 2/3), B = (2, 1/2, 1/6) in {elapsed:?}");
}

#[test]
fn criterion_02_table_reproduction() {
    let start = Instant::now();
    let rows = coefficient_table(20, 12).unwrap();
    let elapsed = start.elapsed();

    // B certification for degrees 1..12: the primitivity defect vanished and
    // the projection re-expanded exactly inside coefficient_table; re-run the
    // defect oracle here so the certificate is visible in this test.
    let exp = BchExpansion::compute(12).unwrap();
    for n in 1..=12 {
        let defect = exp.primitivity_defect(n).unwrap();
        assert!(num::Zero::is_zero(&defect), "defect at degree {n}");
        assert!(rows[n - 1].b.is_some(), "certified B_{n} present");
    }
    println!(
        "criterion 02 [partial] - B_1..B_12 certified (primitivity defect 0, exact re-expansion); runtime {elapsed:?} (target < 5 min)"
    );
    assert!(elapsed.as_secs_f64() < 300.0, "took {elapsed:?}");

    // published-B comparison is a report, not an assertion
    let b_reports: Vec<String> = rows
        .iter()
        .filter_map(|row| {
            row.b.as_ref().and_then(|b| {
                (!matches_reference(REFERENCE_B_DEC[row.degree - 1], b)).then(|| {
                    format!(
                        "n={}: computed {} vs published {}",
                        row.degree,
                        row.b_dec().unwrap_or_default(),
                        REFERENCE_B_DEC[row.degree - 1]
                    )
                })
            })
        })
        .collect();
    println!(
        "criterion 02 [report] - published-B discrepancies (reported, not failed): {}",
        if b_reports.is_empty() { "none".to_string() } else { b_reports.join("; ") }
    );

    // A-column reproduction, rendering-exact on every row
    let mismatches: Vec<String> = rows
        .iter()
        .filter(|row| row.a_dec() != REFERENCE_A_DEC4[row.degree - 1])
        .map(|row| {
            format!(
                "n={}: computed {} ({}) vs published {}",
                row.degree,
                row.a_dec(),
                row.a_exact(),
                REFERENCE_A_DEC4[row.degree - 1]
            )
        })
        .collect();
    if mismatches.is_empty() {
        println!("criterion 02 PASS - A_1..A_20 match the published renderings");
    } else {
        println!(
            "criterion 02 FAIL - the exact A_n (certified by the primitivity and re-expansion oracles and two independent recomputations) diverges from the published renderings on {} of 20 rows:",
            mismatches.len()
        );
        for m in &mismatches {
            println!("  {m}");
        }
    }
    assert!(
        mismatches.is_empty(),
        "published A-column does not match the exact recomputation: {}",
        mismatches.join("; ")
    );
}

#[test]
fn criterion_03_catalan_suite() {
    let start = Instant::now();
    for n in 2..=64u64 {
        assert!(catalan_convolution_holds(n), "convolution at {n}");
    }
    // spot exact values
    assert_eq!(catalan(4), BigInt::from(14));
    assert_eq!(catalan(7), BigInt::from(429));
    // the bound column matches the published renderings on all 20 rows
    for n in 1..=20usize {
        let rendered = render_fixed4(&bchq::bch::catalan_bound(n).unwrap());
        assert_eq!(rendered, REFERENCE_CATALAN_DEC4[n - 1], "row {n}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("criterion 03 PASS - Catalan convolution (n = 2..64) and all 20 bound renderings in {elapsed:?}");
}

#[test]
fn criterion_04_majorant() {
    let exp = BchExpansion::compute(12).unwrap();
    for n in 2..=12 {
        let b = lie_project(&exp.homogeneous_series(n).unwrap()).unwrap().sum();
        let bound = bchq::Rational::from_integer(catalan(n as u64 - 1));
        assert!(b <= bound, "degree {n}: {b} > {bound}");
    }
    println!("criterion 04 PASS - lie sums below C_(n-1) for n = 2..12 (exact comparison)");
}

#[test]
fn criterion_05_constants() {
    let start = Instant::now();
    let c = derive_constants(1.0, Some(1.0), None).unwrap();
    let r = radii(&c);
    let tol = 1e-12;
    assert!((c.c_bracket - 2.0).abs() < tol);
    assert!((c.p - 1.0).abs() < tol);
    assert!((c.c2 - 2.0).abs() < tol);
    assert!((r.r_bch - 0.125).abs() < tol);
    assert!((r.rho_inv - 1.0 / 144.0).abs() < tol);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0);
    println!("criterion 05 PASS - Banach specialization: C_b = 2, r = 1/8, rho_inv = 1/144, p = 1, c2 = 2 (tol 1e-12)");
}

#[test]
fn criterion_06_group_law() {
    let start = Instant::now();
    let suite = group_law_suite(components(), SEED, 100, DIM, TRUNCATION).unwrap();
    let elapsed = start.elapsed();
    assert!(
        suite.max_residual < GROUP_LAW_RESIDUAL_MAX,
        "max residual {}",
        suite.max_residual
    );
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!(
        "criterion 06 PASS - 100 seeded 4x4 pairs, |x|+|y| <= 0.1/(4*C_b) with measured C_b = {:.3}: max residual {:.3e} < 1e-10 in {elapsed:?}",
        suite.measured_c_bracket, suite.max_residual
    );
}

#[test]
fn criterion_07_associativity_decay() {
    let suite = associativity_suite(components(), SEED, 100, DIM, 8, 10).unwrap();
    assert!(
        suite.min_factor >= ASSOCIATIVITY_MIN_FACTOR,
        "worst factor {}",
        suite.min_factor
    );
    println!(
        "criterion 07 PASS - 100 seeded triples in B(0, rho/4 = {:.4}): associativity residual drops by at least {:.1}x from N=8 to N=10 (need >= 4)",
        suite.ball, suite.min_factor
    );
}

#[test]
fn criterion_08_inverse_solver() {
    let start = Instant::now();
    let suite = inverse_solver_suite(components(), SEED, 100, DIM, TRUNCATION, 1e-12).unwrap();
    let elapsed = start.elapsed();
    assert!(
        suite.max_distance < INVERSE_DISTANCE_MAX,
        "worst distance {}",
        suite.max_distance
    );
    assert!(
        suite.ratios_within_bound,
        "contraction ratio exceeded u/(1-u) + {CONTRACTION_RATIO_SLACK}: observed {} vs allowed {}",
        suite.worst_observed_ratio,
        suite.worst_allowed_ratio
    );
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!(
        "criterion 08 PASS - 100 admissible inputs converge to -x within 1e-10 (worst {:.2e}); contraction within u/(1-u) + {CONTRACTION_RATIO_SLACK} (tightest {:.4} vs {:.4}) in {elapsed:?}",
        suite.max_distance, suite.worst_observed_ratio, suite.worst_allowed_ratio
    );
}

#[test]
fn criterion_09_inequality_samplers() {
    let start = Instant::now();
    let reports = sampler_suite(components(), SEED, 1000, DIM).unwrap();
    let elapsed = start.elapsed();
    assert_eq!(reports.len(), 6);
    for report in &reports {
        assert!(
            report.max_ratio <= 1.0 + SAMPLER_RATIO_TOL,
            "{}: max ratio {}",
            report.inequality,
            report.max_ratio
        );
    }
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:?}");
    let summary: Vec<String> = reports
        .iter()
        .map(|r| format!("{} {:.4}", r.inequality, r.max_ratio))
        .collect();
    println!(
        "criterion 09 PASS - six samplers x 1000 samples, all ratios <= 1 + 1e-9 ({}) in {elapsed:?}",
        summary.join(", ")
    );
}

#[test]
fn criterion_10_p_subadditivity() {
    let suite = subadditivity_suite(SEED, 10_000, DIM, &[0.3, 0.5, 0.8, 1.0]).unwrap();
    assert!(suite.all_hold);
    println!(
        "criterion 10 PASS - p-triangle inequality over {} comparisons at p in {:?} (tol 1e-12)",
        suite.checked, suite.exponents
    );
}

#[test]
fn criterion_11_fit() {
    // exact-model recovery
    let synthetic: Vec<(u32, f64)> = (5..=20)
        .map(|n| (n, 7.0 * f64::from(n).powf(-1.5) * 0.3f64.powi(n as i32)))
        .collect();
    let fit = bchq::analysis::fit_geometric(&synthetic, -1.5, 5, 20, 1000, SEED).unwrap();
    assert!((fit.rate - 0.3).abs() < 1e-9, "rate {}", fit.rate);
    assert!(fit.r_squared > 1.0 - 1e-12);

    // regression on the recomputed associative column through the rendering
    // rule; pass = the fit executes with a nonempty interval and the
    // published target band is reported alongside
    let rows = coefficient_table(20, 0).unwrap();
    let values = builtin_fit_values(&rows, false).unwrap();
    let fit = bchq::analysis::fit_geometric(&values, -1.5, 5, 20, 1000, SEED).unwrap();
    assert!(fit.rate > 0.0);
    assert!(fit.rate_ci.0 <= fit.rate && fit.rate <= fit.rate_ci.1);
    assert!(fit.rate_ci.0 < fit.rate_ci.1);
    println!(
        "criterion 11 PASS - synthetic rate 0.3 recovered to 1e-9 with R^2 = 1; recomputed A-column fit: rate {:.4}, 95% CI [{:.4}, {:.4}], published comparison target 0.36 +/- 0.02",
        fit.rate, fit.rate_ci.0, fit.rate_ci.1
    );
}

#[test]
fn criterion_12_exclusions() {
    // Not reproducible at desk scale and excluded from pass/fail by design:
    // the published 0.29 +/- 0.01 decay claim for the Lie column (it is
    // inconsistent with the published column's own per-degree halving),
    // completeness of the infinite-dimensional quasi-metric, and sharpness
    // of the 1/4 constant. The property suites above cover their testable
    // consequences.
    println!(
        "criterion 12 SKIP (excluded) - published Lie-column decay claim, d_p-completeness, and sharpness of 1/4 are documented exclusions"
    );
}
