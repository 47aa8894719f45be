//! Verification suites shared by `bchq verify` and the acceptance tests:
//! exact-arithmetic certificates of the expansion and seeded numeric checks
//! of the group law, associativity decay, inverse solver, inequality
//! samplers, and p-subadditivity.
//!
//! Thresholds are pinned here as constants so every consumer checks the same
//! numbers.

use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bch::{
    catalan, catalan_generating_check, coefficient_table,
    dynkin_recursion_agrees, matches_reference, BchExpansion, LieCombination, CoefficientRow,
    MAX_DEFECT_DEGREE, REFERENCE_A_DEC4, REFERENCE_B_DEC,
};
use crate::bounds::{derive_constants, radii};
use crate::error::{Error, Result};
use crate::numeric::{
    bch_inverse_solver, group_law_check, measure_constants, pnorm_subadditivity_check, quasi_norm,
    random_matrix, run_inequality_sampler, DenseMatrix, InequalityKind, MeasuredConstants,
    QuasiNormSpec, SampleFamily, SamplerConfig, SamplerReport,
};
use crate::series::rational;
use crate::words::{lyndon_words, witt_dimension};

/// Residual ceiling of the truncated group law on the sampled domain.
pub const GROUP_LAW_RESIDUAL_MAX: f64 = 1e-10;
/// Required associativity-residual improvement between truncations 8 and 10.
pub const ASSOCIATIVITY_MIN_FACTOR: f64 = 4.0;
/// Convergence ceiling for the inverse solver's distance to -x.
pub const INVERSE_DISTANCE_MAX: f64 = 1e-10;
/// Slack added to the predicted contraction factor u/(1-u).
pub const CONTRACTION_RATIO_SLACK: f64 = 0.05;
/// Inequality samplers must stay below 1 + this tolerance.
pub const SAMPLER_RATIO_TOL: f64 = 1e-9;
/// Fraction of the measured convergence radius used by the group-law domain.
pub const GROUP_LAW_DOMAIN_FRACTION: f64 = 0.1;

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    /// Informational entries report values without contributing to the
    /// pass/fail outcome.
    pub informational: bool,
    pub detail: String,
}

impl CheckResult {
    fn check(name: &str, passed: bool, detail: String) -> CheckResult {
        CheckResult { name: name.to_string(), passed, informational: false, detail }
    }

    fn info(name: &str, detail: String) -> CheckResult {
        CheckResult { name: name.to_string(), passed: true, informational: true, detail }
    }
}

/// Exit outcome of a check list: pass iff every non-informational entry
/// passed.
pub fn all_passed(checks: &[CheckResult]) -> bool {
    checks.iter().all(|c| c.informational || c.passed)
}

/// Exact-arithmetic certificates: Lyndon/Witt counts, primitivity,
/// projection and re-expansion, majorants, symmetry, Catalan identities,
/// and the published-table comparison (informational).
pub fn exact_checks(max_degree: usize, lie_max: usize) -> Result<(Vec<CheckResult>, Vec<CoefficientRow>)> {
    let lie_max = lie_max.min(max_degree).min(MAX_DEFECT_DEGREE);
    let mut checks = Vec::new();
    let exp = BchExpansion::compute(max_degree)?;

    // Lyndon enumeration against the Witt formula.
    let mut counts_ok = true;
    for n in 1..=max_degree {
        if lyndon_words(n)?.len() as u64 != witt_dimension(n)? {
            counts_ok = false;
        }
    }
    checks.push(CheckResult::check(
        "lyndon-witt-counts",
        counts_ok,
        format!("|lyndon_words(n)| = witt(n) for n = 1..={max_degree}"),
    ));

    // Friedrichs primitivity of every component in the certified range.
    let mut defect_ok = true;
    let mut worst = String::new();
    for n in 1..=lie_max {
        let defect = exp.primitivity_defect(n)?;
        if !defect.is_zero() {
            defect_ok = false;
            worst = format!("degree {n}: defect {defect}");
        }
    }
    checks.push(CheckResult::check(
        "primitivity-defects",
        defect_ok,
        if defect_ok {
            format!("unshuffle-coproduct defect of Z_n is exactly 0 for n = 1..={lie_max}")
        } else {
            worst
        },
    ));

    // Certified projection (includes exact re-expansion) and the table.
    let rows = coefficient_table(max_degree, lie_max)?;
    checks.push(CheckResult::check(
        "lyndon-projection-reexpansion",
        true,
        format!("projection re-expands to Z_n exactly for n = 1..={lie_max}"),
    ));

    // B_n <= A_n, observed.
    let b_le_a = rows
        .iter()
        .filter_map(|r| r.b.as_ref().map(|b| b <= &r.a))
        .all(|ok| ok);
    checks.push(CheckResult::check(
        "lie-sum-below-associative-sum",
        b_le_a,
        format!("B_n <= A_n for n = 1..={lie_max} (empirical, not assumed)"),
    ));

    // Catalan majorant on the Lie sums, degrees 2..=lie_max.
    let mut majorant_ok = true;
    for row in rows.iter().skip(1) {
        if let Some(b) = &row.b {
            let bound = num::BigRational::from_integer(catalan(row.degree as u64 - 1));
            if b > &bound {
                majorant_ok = false;
            }
        }
    }
    checks.push(CheckResult::check(
        "catalan-majorant",
        majorant_ok,
        format!("lie_sum(n) <= C_(n-1) for n = 2..={lie_max}"),
    ));
    checks.push(CheckResult::info(
        "catalan-majorant-degree-1",
        format!(
            "degree 1 convention mismatch: lie_sum = {} vs C_0 = 1 (leaf base case); reported, not failed",
            rows[0].b.as_ref().map(crate::decimal::render_exact).unwrap_or_default()
        ),
    ));

    // Swap symmetry and the commutative image, full range.
    let mut symmetry_ok = true;
    let mut signed_ok = true;
    for n in 1..=max_degree {
        if !exp.swap_symmetry_holds(n)? {
            symmetry_ok = false;
        }
        if n >= 2 && !exp.signed_sum(n)?.is_zero() {
            signed_ok = false;
        }
    }
    checks.push(CheckResult::check(
        "swap-symmetry",
        symmetry_ok,
        format!("coefficient symmetry under letter swap with sign (-1)^(n+1), n = 1..={max_degree}"),
    ));
    checks.push(CheckResult::check(
        "commutative-image",
        signed_ok,
        format!("signed coefficient sums vanish for n = 2..={max_degree}"),
    ));

    // Catalan convolution, exact big integers.
    let convolution_ok = (2..=64).all(catalan_convolution_holds_u64);
    checks.push(CheckResult::check(
        "catalan-convolution",
        convolution_ok,
        "sum C_(k-1) C_(n-k-1) = C_(n-1) for n = 2..=64".to_string(),
    ));

    // Generating-function partial sums at t = 1/5.
    let gf = catalan_generating_check(&rational(1, 5), 60);
    let gf_ok = gf.gap < 1e-6 && gf.gap < 0.8f64.powi(60);
    checks.push(CheckResult::check(
        "catalan-generating-function",
        gf_ok,
        format!(
            "60-term partial sum {:.9} vs closed form {:.9}, gap {:.3e}",
            gf.partial_sum, gf.closed_form, gf.gap
        ),
    ));

    // The displayed two-term recursion (informational: it cancels to zero).
    let rec_max = max_degree.min(8);
    let mut disagreements = Vec::new();
    for n in 2..=rec_max {
        if !dynkin_recursion_agrees(&exp, n)? {
            disagreements.push(n.to_string());
        }
    }
    checks.push(CheckResult::info(
        "two-term-recursion",
        if disagreements.is_empty() {
            format!("the displayed two-term recursion reproduces Z_n for n = 2..={rec_max}")
        } else {
            format!(
                "the displayed two-term recursion cancels to zero and disagrees with Z_n at degrees {}; reported, not asserted",
                disagreements.join(", ")
            )
        },
    ));

    // Published-table comparison (informational; the exact values are the
    // authority, disagreements are listed, never hidden).
    let mut a_mismatch = Vec::new();
    let mut b_mismatch = Vec::new();
    for row in &rows {
        let n = row.degree;
        if n <= REFERENCE_A_DEC4.len() && !matches_reference(REFERENCE_A_DEC4[n - 1], &row.a) {
            a_mismatch.push(format!("n={n}: computed {} vs published {}", row.a_dec(), REFERENCE_A_DEC4[n - 1]));
        }
        if let Some(b) = &row.b {
            if n <= REFERENCE_B_DEC.len() && !matches_reference(REFERENCE_B_DEC[n - 1], b) {
                b_mismatch.push(format!(
                    "n={n}: computed {} vs published {}",
                    row.b_dec().unwrap_or_default(),
                    REFERENCE_B_DEC[n - 1]
                ));
            }
        }
    }
    checks.push(CheckResult::info(
        "published-a-column",
        if a_mismatch.is_empty() {
            "computed A_n matches the published renderings on every row".to_string()
        } else {
            format!("computed A_n disagrees with the published column: {}", a_mismatch.join("; "))
        },
    ));
    checks.push(CheckResult::info(
        "published-b-column",
        if b_mismatch.is_empty() {
            "computed B_n matches the published renderings on every row".to_string()
        } else {
            format!("computed B_n disagrees with the published column: {}", b_mismatch.join("; "))
        },
    ));

    Ok((checks, rows))
}

fn catalan_convolution_holds_u64(n: u64) -> bool {
    crate::bch::catalan_convolution_holds(n)
}

/// Measured bracket constant on the default operator-norm family, plus the
/// radii the numeric domains are drawn from.
#[derive(Clone, Debug, Serialize)]
pub struct MeasuredDomain {
    pub constants: MeasuredConstants,
    pub r_bch: f64,
    pub rho: f64,
    pub rho_inv: f64,
}

pub fn measured_domain(seed: u64, dim: usize) -> Result<MeasuredDomain> {
    let family = SampleFamily { dim, scale: 1.0, seed };
    let constants = measure_constants(&family, &QuasiNormSpec::Operator2Norm, 200)?;
    let c_b = constants.c_bracket;
    if c_b <= f64::MIN_POSITIVE {
        return Err(Error::InvalidArgument(
            "measured bracket constant is zero on the sample family".into(),
        ));
    }
    Ok(MeasuredDomain {
        r_bch: 1.0 / (4.0 * c_b),
        rho: 1.0 / (8.0 * c_b),
        rho_inv: 1.0 / (8.0 * c_b * 9.0),
        constants,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupLawSuite {
    pub pairs: usize,
    pub seed: u64,
    pub truncation: usize,
    pub max_residual: f64,
    pub measured_c_bracket: f64,
    pub domain: f64,
}

/// Seeded pairs with |x| + |y| inside GROUP_LAW_DOMAIN_FRACTION of the
/// measured radius; reports the worst residual |exp(Z_N) - exp(x)exp(y)|.
pub fn group_law_suite(
    components: &[LieCombination],
    seed: u64,
    pairs: usize,
    dim: usize,
    truncation: usize,
) -> Result<GroupLawSuite> {
    let spec = QuasiNormSpec::Operator2Norm;
    let domain = measured_domain(seed, dim)?;
    let budget = GROUP_LAW_DOMAIN_FRACTION * domain.r_bch;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_residual: f64 = 0.0;
    let mut produced = 0usize;
    while produced < pairs {
        let total = rng.random_range(0.2..=1.0) * budget;
        let split = rng.random_range(0.2..=0.8);
        let Some(x) = scale_to(&random_matrix(&mut rng, dim, 1.0), &spec, total * split)? else {
            continue;
        };
        let Some(y) =
            scale_to(&random_matrix(&mut rng, dim, 1.0), &spec, total * (1.0 - split))?
        else {
            continue;
        };
        produced += 1;
        let report = group_law_check(&x, &y, truncation, &spec, components)?;
        max_residual = max_residual.max(report.residual);
    }
    Ok(GroupLawSuite {
        pairs,
        seed,
        truncation,
        max_residual,
        measured_c_bracket: domain.constants.c_bracket,
        domain: budget,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct AssociativitySuite {
    pub triples: usize,
    pub seed: u64,
    pub truncation_low: usize,
    pub truncation_high: usize,
    pub min_factor: f64,
    pub max_residual_high: f64,
    pub ball: f64,
}

/// Residual |Z_N(Z_N(x,y),z) - Z_N(x,Z_N(y,z))| at two truncations on
/// seeded triples in B(0, rho/4); reports the worst improvement factor.
pub fn associativity_suite(
    components: &[LieCombination],
    seed: u64,
    triples: usize,
    dim: usize,
    truncation_low: usize,
    truncation_high: usize,
) -> Result<AssociativitySuite> {
    let spec = QuasiNormSpec::Operator2Norm;
    let domain = measured_domain(seed, dim)?;
    let ball = domain.rho / 4.0;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut min_factor = f64::INFINITY;
    let mut max_residual_high: f64 = 0.0;
    let mut produced = 0usize;
    while produced < triples {
        let mut sample = Vec::with_capacity(3);
        for _ in 0..3 {
            let target = rng.random_range(0.2..=1.0) * ball;
            if let Some(m) = scale_to(&random_matrix(&mut rng, dim, 1.0), &spec, target)? {
                sample.push(m);
            }
        }
        if sample.len() != 3 {
            continue;
        }
        produced += 1;
        let (x, y, z) = (&sample[0], &sample[1], &sample[2]);
        let res_low = associativity_residual(x, y, z, truncation_low, &spec, components)?;
        let res_high = associativity_residual(x, y, z, truncation_high, &spec, components)?;
        max_residual_high = max_residual_high.max(res_high);
        let factor = if res_high > 0.0 { res_low / res_high } else { f64::INFINITY };
        min_factor = min_factor.min(factor);
    }
    Ok(AssociativitySuite {
        triples,
        seed,
        truncation_low,
        truncation_high,
        min_factor,
        max_residual_high,
        ball,
    })
}

/// The associativity defect of the truncated operation is pure truncation
/// error of order (|x|+|y|+|z|)^(N+1); on the stated ball it falls below the
/// f64 rounding floor (~1e-17) already at N = 8, so the compositions are
/// evaluated in compensated double-double arithmetic (~32 digits) and only
/// the final difference is read back into doubles.
fn associativity_residual(
    x: &DenseMatrix,
    y: &DenseMatrix,
    z: &DenseMatrix,
    n: usize,
    spec: &QuasiNormSpec,
    components: &[LieCombination],
) -> Result<f64> {
    let xd = dd::DdMatrix::from_dense(x);
    let yd = dd::DdMatrix::from_dense(y);
    let zd = dd::DdMatrix::from_dense(z);
    let coords = dd::DdComponents::new(components, n);
    let xy = coords.evaluate(&xd, &yd)?;
    let yz = coords.evaluate(&yd, &zd)?;
    let left = coords.evaluate(&xy, &zd)?;
    let right = coords.evaluate(&xd, &yz)?;
    quasi_norm(&left.sub(&right).to_dense(), spec)
}

/// Double-double ("compensated") arithmetic for the associativity residual.
mod dd {
    use std::collections::HashMap;

    use num::ToPrimitive;

    use crate::bch::LieCombination;
    use crate::error::Result;
    use crate::numeric::DenseMatrix;
    use crate::words::{standard_factorization, Letter, Word};

    /// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
    #[derive(Clone, Copy, Debug, Default)]
    pub struct Dd {
        hi: f64,
        lo: f64,
    }

    fn two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        let bb = s - a;
        (s, (a - (s - bb)) + (b - bb))
    }

    fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
        let s = a + b;
        (s, b - (s - a))
    }

    fn two_prod(a: f64, b: f64) -> (f64, f64) {
        let p = a * b;
        (p, a.mul_add(b, -p))
    }

    impl Dd {
        pub fn from_f64(v: f64) -> Dd {
            Dd { hi: v, lo: 0.0 }
        }

        pub fn from_rational(r: &crate::series::Rational) -> Dd {
            use num::Zero;
            let hi = r.to_f64().unwrap_or(0.0);
            let exact_hi =
                crate::series::Rational::from_float(hi).unwrap_or_else(crate::series::Rational::zero);
            let lo = (r - exact_hi).to_f64().unwrap_or(0.0);
            Dd { hi, lo }
        }

        pub fn to_f64(self) -> f64 {
            self.hi + self.lo
        }

        pub fn add(self, other: Dd) -> Dd {
            let (s, e) = two_sum(self.hi, other.hi);
            let e = e + self.lo + other.lo;
            let (hi, lo) = quick_two_sum(s, e);
            Dd { hi, lo }
        }

        pub fn sub(self, other: Dd) -> Dd {
            self.add(Dd { hi: -other.hi, lo: -other.lo })
        }

        pub fn mul(self, other: Dd) -> Dd {
            let (p, e) = two_prod(self.hi, other.hi);
            let e = e + self.hi * other.lo + self.lo * other.hi;
            let (hi, lo) = quick_two_sum(p, e);
            Dd { hi, lo }
        }
    }

    #[derive(Clone)]
    pub struct DdMatrix {
        dim: usize,
        entries: Vec<Dd>,
    }

    impl DdMatrix {
        pub fn zeros(dim: usize) -> DdMatrix {
            DdMatrix { dim, entries: vec![Dd::default(); dim * dim] }
        }

        pub fn from_dense(m: &DenseMatrix) -> DdMatrix {
            DdMatrix {
                dim: m.dim(),
                entries: m.entries().iter().map(|&v| Dd::from_f64(v)).collect(),
            }
        }

        pub fn to_dense(&self) -> DenseMatrix {
            DenseMatrix::from_entries(self.dim, self.entries.iter().map(|d| d.to_f64()).collect())
                .expect("double-double entries stay finite at desk scale")
        }

        pub fn add_scaled(&mut self, other: &DdMatrix, k: Dd) {
            for (a, b) in self.entries.iter_mut().zip(&other.entries) {
                *a = a.add(b.mul(k));
            }
        }

        pub fn sub(&self, other: &DdMatrix) -> DdMatrix {
            DdMatrix {
                dim: self.dim,
                entries: self
                    .entries
                    .iter()
                    .zip(&other.entries)
                    .map(|(a, b)| a.sub(*b))
                    .collect(),
            }
        }

        fn matmul(&self, other: &DdMatrix) -> DdMatrix {
            let n = self.dim;
            let mut out = DdMatrix::zeros(n);
            for i in 0..n {
                for k in 0..n {
                    let aik = self.entries[i * n + k];
                    for j in 0..n {
                        let prod = aik.mul(other.entries[k * n + j]);
                        let cell = &mut out.entries[i * n + j];
                        *cell = cell.add(prod);
                    }
                }
            }
            out
        }

        fn commutator(&self, other: &DdMatrix) -> DdMatrix {
            self.matmul(other).sub(&other.matmul(self))
        }
    }

    /// Lyndon coordinates converted to double-double once per suite.
    pub struct DdComponents {
        truncation: usize,
        coords: Vec<Vec<(Word, Dd)>>,
    }

    impl DdComponents {
        pub fn new(components: &[LieCombination], truncation: usize) -> DdComponents {
            let coords = components
                .iter()
                .take(truncation)
                .map(|c| {
                    c.coords()
                        .map(|(w, r)| (*w, Dd::from_rational(r)))
                        .collect()
                })
                .collect();
            DdComponents { truncation, coords }
        }

        pub fn evaluate(&self, x: &DdMatrix, y: &DdMatrix) -> Result<DdMatrix> {
            let mut memo: HashMap<Word, DdMatrix> = HashMap::new();
            let mut acc = DdMatrix::zeros(x.dim);
            for degree in &self.coords[..self.truncation] {
                for (w, k) in degree {
                    let value = eval_word(w, x, y, &mut memo)?;
                    acc.add_scaled(&value, *k);
                }
            }
            Ok(acc)
        }
    }

    fn eval_word(
        w: &Word,
        x: &DdMatrix,
        y: &DdMatrix,
        memo: &mut HashMap<Word, DdMatrix>,
    ) -> Result<DdMatrix> {
        if let Some(v) = memo.get(w) {
            return Ok(v.clone());
        }
        let value = if w.len() == 1 {
            match w.letter(0) {
                Letter::X => x.clone(),
                Letter::Y => y.clone(),
            }
        } else {
            let (u, v) = standard_factorization(w)?;
            let left = eval_word(&u, x, y, memo)?;
            let right = eval_word(&v, x, y, memo)?;
            left.commutator(&right)
        };
        memo.insert(*w, value.clone());
        Ok(value)
    }

}

#[derive(Clone, Debug, Serialize)]
pub struct InverseSuite {
    pub samples: usize,
    pub seed: u64,
    pub truncation: usize,
    pub max_distance: f64,
    /// Every sample's contraction stayed below its own u/(1-u) + slack.
    pub ratios_within_bound: bool,
    /// Observed and allowed contraction of the sample with the least margin.
    pub worst_observed_ratio: f64,
    pub worst_allowed_ratio: f64,
    pub max_iterations: usize,
    pub rho_inv: f64,
}

/// Seeded admissible inputs |x| < rho_inv (measured constants); checks the
/// fixed point lands at -x and the per-sample contraction stays below
/// u/(1-u) + slack.
pub fn inverse_solver_suite(
    components: &[LieCombination],
    seed: u64,
    samples: usize,
    dim: usize,
    truncation: usize,
    tol: f64,
) -> Result<InverseSuite> {
    let spec = QuasiNormSpec::Operator2Norm;
    let domain = measured_domain(seed, dim)?;
    let constants = derive_constants(1.0, None, Some(domain.constants.c_bracket))?;
    let rho_inv = radii(&constants).rho_inv;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_distance: f64 = 0.0;
    let mut ratios_within_bound = true;
    let mut worst_margin = f64::INFINITY;
    let mut worst_observed_ratio = 0.0;
    let mut worst_allowed_ratio = 0.0;
    let mut max_iterations = 0usize;
    let mut produced = 0usize;
    while produced < samples {
        let target = rng.random_range(0.1..=0.9) * rho_inv;
        let Some(x) = scale_to(&random_matrix(&mut rng, dim, 1.0), &spec, target)? else {
            continue;
        };
        // start away from the exact fixed point -x (but inside the proof's
        // invariance ball of radius |x| around it) so the contraction is
        // actually exercised
        let offset = rng.random_range(0.2..=0.9) * target;
        let Some(delta) = scale_to(&random_matrix(&mut rng, dim, 1.0), &spec, offset)? else {
            continue;
        };
        let start = x.neg().add(&delta)?;
        produced += 1;
        let report = bch_inverse_solver(
            &x,
            components,
            &constants,
            &spec,
            truncation,
            tol,
            500,
            Some(&start),
        )?;
        max_distance = max_distance.max(report.distance_to_neg_x);
        max_iterations = max_iterations.max(report.iterations);
        let allowed = report.predicted_ratio + CONTRACTION_RATIO_SLACK;
        // ratios taken while updates stay clearly above the stopping noise
        let observed = report
            .update_norms
            .windows(2)
            .filter(|w| w[0] > 10.0 * tol)
            .map(|w| w[1] / w[0])
            .fold(0.0f64, f64::max);
        if observed > allowed {
            ratios_within_bound = false;
        }
        if allowed - observed < worst_margin {
            worst_margin = allowed - observed;
            worst_observed_ratio = observed;
            worst_allowed_ratio = allowed;
        }
    }
    Ok(InverseSuite {
        samples,
        seed,
        truncation,
        max_distance,
        ratios_within_bound,
        worst_observed_ratio,
        worst_allowed_ratio,
        max_iterations,
        rho_inv,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct SubadditivitySuite {
    pub pairs: usize,
    pub seed: u64,
    pub exponents: Vec<f64>,
    pub all_hold: bool,
    pub checked: usize,
}

pub fn subadditivity_suite(
    seed: u64,
    pairs: usize,
    dim: usize,
    exponents: &[f64],
) -> Result<SubadditivitySuite> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all_hold = true;
    let mut checked = 0usize;
    for _ in 0..pairs {
        let a = random_matrix(&mut rng, dim, 1.0);
        let b = random_matrix(&mut rng, dim, 1.0);
        for &p in exponents {
            checked += 1;
            if !pnorm_subadditivity_check(&a, &b, p)? {
                all_hold = false;
            }
        }
    }
    Ok(SubadditivitySuite {
        pairs,
        seed,
        exponents: exponents.to_vec(),
        all_hold,
        checked,
    })
}

/// Runs samplers (a)-(f) with the given sample count and seed.
pub fn sampler_suite(
    components: &[LieCombination],
    seed: u64,
    samples: usize,
    dim: usize,
) -> Result<Vec<SamplerReport>> {
    let kinds = [
        InequalityKind::ZnBound,
        InequalityKind::BchLipschitz,
        InequalityKind::BracketContinuity,
        InequalityKind::TranslationLipschitz,
        InequalityKind::SpectralRadius,
        InequalityKind::PowerBound,
    ];
    kinds
        .iter()
        .map(|kind| {
            let mut config = SamplerConfig::new(*kind, samples, seed);
            config.dim = dim;
            run_inequality_sampler(&config, components)
        })
        .collect()
}

/// Configuration of the numeric half of `verify`.
#[derive(Clone, Debug, Serialize)]
pub struct NumericConfig {
    pub seed: u64,
    pub dim: usize,
    pub truncation: usize,
    pub pairs: usize,
    pub sampler_samples: usize,
    pub subadditivity_pairs: usize,
    pub tol: f64,
}

impl Default for NumericConfig {
    fn default() -> Self {
        NumericConfig {
            seed: 42,
            dim: 4,
            truncation: 12,
            pairs: 100,
            sampler_samples: 1000,
            subadditivity_pairs: 10_000,
            tol: 1e-12,
        }
    }
}

/// Outcome of the numeric half of `verify`: the check list plus the full
/// sampler reports (seed, max ratio, and the witness attaining it).
pub struct NumericRun {
    pub checks: Vec<CheckResult>,
    pub sampler_reports: Vec<SamplerReport>,
}

/// The numeric check list; `components` must cover `config.truncation`.
pub fn numeric_checks(
    config: &NumericConfig,
    components: &[LieCombination],
) -> Result<NumericRun> {
    let mut checks = Vec::new();

    let glaw = group_law_suite(components, config.seed, config.pairs, config.dim, config.truncation)?;
    checks.push(CheckResult::check(
        "group-law-residual",
        glaw.max_residual < GROUP_LAW_RESIDUAL_MAX,
        format!(
            "{} pairs, |x|+|y| <= {:.4} (measured C_b = {:.3}): max residual {:.3e} (bound {GROUP_LAW_RESIDUAL_MAX:.0e})",
            glaw.pairs, glaw.domain, glaw.measured_c_bracket, glaw.max_residual
        ),
    ));

    let assoc = associativity_suite(components, config.seed, config.pairs, config.dim, 8, 10)?;
    checks.push(CheckResult::check(
        "associativity-decay",
        assoc.min_factor >= ASSOCIATIVITY_MIN_FACTOR,
        format!(
            "{} triples in B(0, {:.4}): worst residual factor {:.1} from N=8 to N=10 (need >= {ASSOCIATIVITY_MIN_FACTOR})",
            assoc.triples, assoc.ball, assoc.min_factor
        ),
    ));

    let inverse = inverse_solver_suite(
        components,
        config.seed,
        config.pairs,
        config.dim,
        config.truncation,
        config.tol,
    )?;
    let inverse_ok = inverse.max_distance < INVERSE_DISTANCE_MAX && inverse.ratios_within_bound;
    checks.push(CheckResult::check(
        "inverse-solver",
        inverse_ok,
        format!(
            "{} admissible inputs (|x| < {:.5}): worst |w + x| = {:.3e}, tightest contraction {:.4} vs allowed {:.4}, max {} iterations",
            inverse.samples,
            inverse.rho_inv,
            inverse.max_distance,
            inverse.worst_observed_ratio,
            inverse.worst_allowed_ratio,
            inverse.max_iterations
        ),
    ));

    let sampler_reports = sampler_suite(components, config.seed, config.sampler_samples, config.dim)?;
    for report in &sampler_reports {
        checks.push(CheckResult::check(
            &format!("inequality-{}", report.inequality),
            report.max_ratio <= 1.0 + SAMPLER_RATIO_TOL,
            format!(
                "{} samples, seed {}: max lhs/rhs = {:.6}",
                report.samples, report.seed, report.max_ratio
            ),
        ));
    }

    let ps = [0.3, 0.5, 0.8, 1.0];
    let subadd = subadditivity_suite(config.seed, config.subadditivity_pairs, config.dim, &ps)?;
    checks.push(CheckResult::check(
        "p-subadditivity",
        subadd.all_hold,
        format!(
            "{} pairs at p in {:?}: {} comparisons, all within the 1e-12 tolerance",
            subadd.pairs, subadd.exponents, subadd.checked
        ),
    ));

    Ok(NumericRun { checks, sampler_reports })
}

fn scale_to(m: &DenseMatrix, spec: &QuasiNormSpec, target: f64) -> Result<Option<DenseMatrix>> {
    let n = quasi_norm(m, spec)?;
    if n <= f64::MIN_POSITIVE {
        return Ok(None);
    }
    Ok(Some(m.scale(target / n)))
}

/// Convenience wrapper: fits the recomputed A_n column through the decimal
/// rendering rule, as `fit --builtin a` does.
pub fn builtin_fit_values(rows: &[CoefficientRow], column_b: bool) -> Result<Vec<(u32, f64)>> {
    let mut out = Vec::new();
    for row in rows {
        let rendered = if column_b {
            match row.b_dec() {
                Some(s) => s,
                None => continue,
            }
        } else {
            row.a_dec()
        };
        let parsed: f64 = rendered
            .parse()
            .map_err(|_| Error::Internal(format!("unparseable rendering {rendered:?}")))?;
        out.push((row.degree as u32, parsed));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_checks_pass_at_desk_scale() {
        let (checks, rows) = exact_checks(8, 8).unwrap();
        assert!(all_passed(&checks), "{checks:#?}");
        assert_eq!(rows.len(), 8);
        // the published-table comparison is informational and reports the
        // known divergence from degree 4 on
        let info = checks.iter().find(|c| c.name == "published-a-column").unwrap();
        assert!(info.informational);
        assert!(info.detail.contains("n=4"));
    }

    #[test]
    fn numeric_checks_pass_with_small_counts() {
        let components = crate::bch::bch_lie_components(12).unwrap();
        let config = NumericConfig {
            pairs: 10,
            sampler_samples: 40,
            subadditivity_pairs: 200,
            ..NumericConfig::default()
        };
        let run = numeric_checks(&config, &components).unwrap();
        assert!(all_passed(&run.checks), "{:#?}", run.checks);
        assert_eq!(run.sampler_reports.len(), 6);
        assert!(run.sampler_reports.iter().all(|r| r.witness.is_some()));
    }
}
