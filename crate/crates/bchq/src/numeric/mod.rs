//! Desk-scale numeric validation: small dense matrices with quasi-norms,
//! truncated exponential/logarithm/Neumann series, evaluation of the
//! exponential-coordinate group law through the Lyndon basis, the
//! contraction-mapping inverse solver, and seeded samplers for the explicit
//! inequalities.
//!
//! Sampling is reproducible: every report records the seed it was produced
//! from, and reruns with the same seed are bit-identical.

mod svd;

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bch::LieCombination;
use crate::bounds::{derive_constants, radii, ConstantSet};
use crate::error::{Error, Result};
use crate::words::{standard_factorization, Word};

pub use svd::singular_values;

/// Square matrix of doubles, row-major. Construction rejects non-finite
/// entries; arithmetic checks dimensions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DenseMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> DenseMatrix {
        DenseMatrix { dim, entries: vec![0.0; dim * dim] }
    }

    pub fn identity(dim: usize) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(dim);
        for i in 0..dim {
            m.entries[i * dim + i] = 1.0;
        }
        m
    }

    pub fn from_entries(dim: usize, entries: Vec<f64>) -> Result<DenseMatrix> {
        if entries.len() != dim * dim {
            return Err(Error::InvalidArgument(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        if entries.iter().any(|e| !e.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(DenseMatrix { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.dim + j] = v;
    }

    fn check_dim(&self, other: &DenseMatrix) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(self.dim, other.dim));
        }
        Ok(())
    }

    pub fn add(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.check_dim(other)?;
        Ok(DenseMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.check_dim(other)?;
        Ok(DenseMatrix {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn neg(&self) -> DenseMatrix {
        self.scale(-1.0)
    }

    pub fn scale(&self, k: f64) -> DenseMatrix {
        DenseMatrix {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a * k).collect(),
        }
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = self.entries[i * n + k];
                if aik == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += aik * other.entries[k * n + j];
                }
            }
        }
        Ok(DenseMatrix { dim: n, entries: out })
    }

    pub fn commutator(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.matmul(other)?.sub(&other.matmul(self)?)
    }

    /// Sum of absolute entries; a true submultiplicative norm, used as the
    /// stopping gauge of the series evaluations.
    pub fn abs_sum(&self) -> f64 {
        self.entries.iter().map(|e| e.abs()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, e| m.max(e.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|e| e.is_finite())
    }
}

impl fmt::Display for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.dim {
            write!(f, "[")?;
            for j in 0..self.dim {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:+.6e}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// The quasi-norm attached to the validation matrices.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum QuasiNormSpec {
    /// (sum |m_ij|^p)^(1/p); exactly p-subadditive, submultiplicative with
    /// constant 1 for p <= 1.
    EntrywiseP { p: f64 },
    /// sup_k k^(1/p) s_k over decreasing singular values.
    WeakSchattenP { p: f64 },
    /// Largest singular value; a true norm (c_tri = 1).
    Operator2Norm,
}

impl QuasiNormSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            QuasiNormSpec::EntrywiseP { p } | QuasiNormSpec::WeakSchattenP { p } => {
                if !p.is_finite() || *p <= 0.0 || *p > 1.0 {
                    return Err(Error::InvalidArgument(format!(
                        "quasi-norm exponent must lie in (0, 1], got {p}"
                    )));
                }
            }
            QuasiNormSpec::Operator2Norm => {}
        }
        Ok(())
    }

    /// The Aoki-Rolewicz exponent of the matching quasi-triangle constant
    /// 2^(1/p - 1); for the operator norm this is 1.
    pub fn ar_exponent(&self) -> f64 {
        match self {
            QuasiNormSpec::EntrywiseP { p } | QuasiNormSpec::WeakSchattenP { p } => *p,
            QuasiNormSpec::Operator2Norm => 1.0,
        }
    }

    /// Closed-form constants of the norm. Entrywise: c_tri = 2^(1/p-1)
    /// exactly and c_mult = 1 exactly; operator norm: the Banach case.
    /// Weak-Schatten: the 2^(1/p-1) triangle constant with the ideal
    /// constant conventionally set to 1 (measure on a concrete family for
    /// honest values).
    pub fn theoretical_constants(&self) -> Result<ConstantSet> {
        self.validate()?;
        match self {
            QuasiNormSpec::EntrywiseP { p } | QuasiNormSpec::WeakSchattenP { p } => {
                derive_constants(2f64.powf(1.0 / p - 1.0), Some(1.0), None)
            }
            QuasiNormSpec::Operator2Norm => derive_constants(1.0, Some(1.0), None),
        }
    }

    pub fn label(&self) -> String {
        match self {
            QuasiNormSpec::EntrywiseP { p } => format!("entrywise p={p}"),
            QuasiNormSpec::WeakSchattenP { p } => format!("weak-Schatten p={p}"),
            QuasiNormSpec::Operator2Norm => "operator 2-norm".to_string(),
        }
    }
}

/// Evaluates the quasi-norm of `m` under `spec`.
pub fn quasi_norm(m: &DenseMatrix, spec: &QuasiNormSpec) -> Result<f64> {
    spec.validate()?;
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let value = match spec {
        QuasiNormSpec::EntrywiseP { p } => m
            .entries()
            .iter()
            .map(|e| e.abs().powf(*p))
            .sum::<f64>()
            .powf(1.0 / p),
        QuasiNormSpec::WeakSchattenP { p } => {
            let sv = singular_values(m.dim(), m.entries());
            sv.iter()
                .enumerate()
                .map(|(k, s)| ((k + 1) as f64).powf(1.0 / p) * s)
                .fold(0.0, f64::max)
        }
        QuasiNormSpec::Operator2Norm => singular_values(m.dim(), m.entries())
            .first()
            .copied()
            .unwrap_or(0.0),
    };
    if !value.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(value)
}

/// p-triangle inequality of the entrywise p-norm:
/// |a+b|_p^p <= |a|_p^p + |b|_p^p + 1e-12.
pub fn pnorm_subadditivity_check(a: &DenseMatrix, b: &DenseMatrix, p: f64) -> Result<bool> {
    a.check_dim(b)?;
    if !(0.0..=1.0).contains(&p) || p == 0.0 {
        return Err(Error::InvalidArgument(format!(
            "p-subadditivity requires p in (0, 1], got {p}"
        )));
    }
    let pth = |m: &DenseMatrix| m.entries().iter().map(|e| e.abs().powf(p)).sum::<f64>();
    let sum = a.add(b)?;
    Ok(pth(&sum) <= pth(a) + pth(b) + 1e-12)
}

const EXP_ITERATION_CAP: usize = 500;
const LOG_ITERATION_CAP: usize = 20_000;
const NEUMANN_ITERATION_CAP: usize = 20_000;

/// Partial sums of exp(x) = sum x^k / k! until the l1 mass of the increment
/// drops below `tol`.
pub fn matrix_exp_series(x: &DenseMatrix, tol: f64) -> Result<DenseMatrix> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let mut sum = DenseMatrix::identity(x.dim());
    let mut term = DenseMatrix::identity(x.dim());
    for k in 1..=EXP_ITERATION_CAP {
        term = term.matmul(x)?.scale(1.0 / k as f64);
        sum = sum.add(&term)?;
        if term.abs_sum() < tol {
            return Ok(sum);
        }
    }
    Err(Error::IterationLimit { limit: EXP_ITERATION_CAP, last_residual: term_residual(&term) })
}

/// Alternating series log(m) = sum (-1)^(k+1) (m - 1)^k / k. Requires the
/// l1 mass of m - 1 below 1, the convergence radius of the series.
pub fn matrix_log_series(m: &DenseMatrix, tol: f64) -> Result<DenseMatrix> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let u = m.sub(&DenseMatrix::identity(m.dim()))?;
    let r = u.abs_sum();
    if r >= 1.0 {
        return Err(Error::Domain {
            inequality: "|m - 1| < 1 (entrywise l1)".into(),
            lhs: r,
            rhs: 1.0,
        });
    }
    let mut sum = u.clone();
    let mut power = u.clone();
    for k in 2..=LOG_ITERATION_CAP {
        power = power.matmul(&u)?;
        let term = power.scale(if k % 2 == 0 { -1.0 / k as f64 } else { 1.0 / k as f64 });
        sum = sum.add(&term)?;
        if term.abs_sum() < tol {
            return Ok(sum);
        }
    }
    Err(Error::IterationLimit { limit: LOG_ITERATION_CAP, last_residual: r })
}

/// Neumann series for (1 - t)^(-1), guarded by the sufficient radius
/// |t| < 2^(-1/p) of the active quasi-norm.
pub fn neumann_inverse(t: &DenseMatrix, spec: &QuasiNormSpec, tol: f64) -> Result<DenseMatrix> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let norm = quasi_norm(t, spec)?;
    let radius = 2f64.powf(-1.0 / spec.ar_exponent());
    if norm >= radius {
        return Err(Error::Domain {
            inequality: "|T| < 2^(-1/p)".into(),
            lhs: norm,
            rhs: radius,
        });
    }
    let mut sum = DenseMatrix::identity(t.dim());
    let mut term = DenseMatrix::identity(t.dim());
    for _ in 1..=NEUMANN_ITERATION_CAP {
        term = term.matmul(t)?;
        sum = sum.add(&term)?;
        if term.abs_sum() < tol {
            return Ok(sum);
        }
    }
    Err(Error::IterationLimit { limit: NEUMANN_ITERATION_CAP, last_residual: term_residual(&term) })
}

fn term_residual(term: &DenseMatrix) -> f64 {
    term.abs_sum()
}

use crate::series::rational_to_f64;

fn check_components(components: &[LieCombination], n: usize) -> Result<()> {
    if n == 0 || n > components.len() {
        return Err(Error::DegreeRange { degree: n, max: components.len() });
    }
    for (i, c) in components.iter().enumerate().take(n) {
        if c.degree() != i + 1 {
            return Err(Error::InvalidArgument(format!(
                "component {i} carries degree {}, expected {}",
                c.degree(),
                i + 1
            )));
        }
    }
    Ok(())
}

/// Evaluates the bracketed Lyndon words of `degrees` on the pair (x, y) and
/// accumulates them with the given coordinates. Bracket values are memoized
/// per word; an optional observer sees every commutator as it is formed (the
/// samplers use it to measure bracket ratios on exactly the events the
/// estimate chains over).
fn eval_components<F>(
    x: &DenseMatrix,
    y: &DenseMatrix,
    components: &[LieCombination],
    degrees: std::ops::RangeInclusive<usize>,
    mut observer: F,
) -> Result<DenseMatrix>
where
    F: FnMut(&DenseMatrix, &DenseMatrix, &DenseMatrix),
{
    x.check_dim(y)?;
    let mut memo: HashMap<Word, DenseMatrix> = HashMap::new();
    let mut acc = DenseMatrix::zeros(x.dim());
    for n in degrees {
        let component = &components[n - 1];
        for (w, coeff) in component.coords() {
            let value = eval_word(w, x, y, &mut memo, &mut observer)?;
            acc = acc.add(&value.scale(rational_to_f64(coeff)))?;
        }
    }
    Ok(acc)
}

fn eval_word<F>(
    w: &Word,
    x: &DenseMatrix,
    y: &DenseMatrix,
    memo: &mut HashMap<Word, DenseMatrix>,
    observer: &mut F,
) -> Result<DenseMatrix>
where
    F: FnMut(&DenseMatrix, &DenseMatrix, &DenseMatrix),
{
    if let Some(v) = memo.get(w) {
        return Ok(v.clone());
    }
    let value = if w.len() == 1 {
        match w.letter(0) {
            crate::words::Letter::X => x.clone(),
            crate::words::Letter::Y => y.clone(),
        }
    } else {
        let (u, v) = standard_factorization(w)?;
        let left = eval_word(&u, x, y, memo, observer)?;
        let right = eval_word(&v, x, y, memo, observer)?;
        let bracket = left.commutator(&right)?;
        observer(&left, &right, &bracket);
        bracket
    };
    memo.insert(*w, value.clone());
    Ok(value)
}

/// Truncated group-law evaluation: substitutes (x, y) into the Lyndon-basis
/// form of each homogeneous component and sums degrees 1..=n.
pub fn bch_evaluate(
    x: &DenseMatrix,
    y: &DenseMatrix,
    n: usize,
    components: &[LieCombination],
) -> Result<DenseMatrix> {
    check_components(components, n)?;
    eval_components(x, y, components, 1..=n, |_, _, _| {})
}

/// Degrees 2..=n only; the tail the inverse solver iterates on.
fn bch_evaluate_tail(
    x: &DenseMatrix,
    y: &DenseMatrix,
    n: usize,
    components: &[LieCombination],
) -> Result<DenseMatrix> {
    check_components(components, n)?;
    if n < 2 {
        return Ok(DenseMatrix::zeros(x.dim()));
    }
    eval_components(x, y, components, 2..=n, |_, _, _| {})
}

/// Group-law residual report: the quasi-norm of
/// exp(Z_N(x, y)) - exp(x) exp(y).
#[derive(Clone, Debug, Serialize)]
pub struct GroupLawReport {
    pub residual: f64,
    pub truncation_degree: usize,
    /// Whether |x| + |y| sits inside the closed-form radius 1/(4 C_b) of the
    /// norm's theoretical constants.
    pub radius_check: bool,
    pub norm_sum: f64,
    pub radius: f64,
}

pub fn group_law_check(
    x: &DenseMatrix,
    y: &DenseMatrix,
    n: usize,
    spec: &QuasiNormSpec,
    components: &[LieCombination],
) -> Result<GroupLawReport> {
    const EXP_TOL: f64 = 1e-15;
    let z = bch_evaluate(x, y, n, components)?;
    let lhs = matrix_exp_series(&z, EXP_TOL)?;
    let rhs = matrix_exp_series(x, EXP_TOL)?.matmul(&matrix_exp_series(y, EXP_TOL)?)?;
    let residual = quasi_norm(&lhs.sub(&rhs)?, spec)?;
    let norm_sum = quasi_norm(x, spec)? + quasi_norm(y, spec)?;
    let radius = radii(&spec.theoretical_constants()?).r_bch;
    Ok(GroupLawReport {
        residual,
        truncation_degree: n,
        radius_check: norm_sum < radius,
        norm_sum,
        radius,
    })
}

/// Fixed-point inverse solve: iterates w <- -x - sum_{k=2}^{N} Z_k(x, w)
/// until the quasi-norm of the update drops below `tol`.
///
/// The default start w0 = -x is already the exact fixed point (every tail
/// term Z_k(x, -x) vanishes identically, and bit-exactly in floating point),
/// so with it the solve finishes in one step with a trivial trace. Pass a
/// different `start` inside the invariance ball around -x to observe the
/// contraction.
#[derive(Clone, Debug, Serialize)]
pub struct InverseSolveReport {
    pub w: DenseMatrix,
    pub iterations: usize,
    /// Quasi-norm of each update w_{k+1} - w_k.
    pub update_norms: Vec<f64>,
    /// Ratios of successive update norms (the observed contraction).
    pub observed_ratios: Vec<f64>,
    /// Distance of the fixed point to -x (the exact inverse).
    pub distance_to_neg_x: f64,
    /// Quasi-norm of Z_N(x, w) at the fixed point.
    pub residual: f64,
    /// u = 4 C_b (1 + 2 C_tri) |x|.
    pub contraction_u: f64,
    /// Predicted contraction factor u/(1-u).
    pub predicted_ratio: f64,
    /// Set when |x| lies between rho_inv and rho: existence is no longer
    /// guaranteed by the closed forms, but the iteration may still converge.
    pub radius_warning: bool,
}

#[allow(clippy::too_many_arguments)]
pub fn bch_inverse_solver(
    x: &DenseMatrix,
    components: &[LieCombination],
    constants: &ConstantSet,
    spec: &QuasiNormSpec,
    n: usize,
    tol: f64,
    max_iter: usize,
    start: Option<&DenseMatrix>,
) -> Result<InverseSolveReport> {
    check_components(components, n)?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let r = radii(constants);
    let x_norm = quasi_norm(x, spec)?;
    if x_norm >= r.rho {
        return Err(Error::Domain {
            inequality: "|x| < rho = 1/(8*C_b)".into(),
            lhs: x_norm,
            rhs: r.rho,
        });
    }
    let radius_warning = x_norm > r.rho_inv;
    let u = 4.0 * constants.c_bracket * (1.0 + 2.0 * constants.c_tri) * x_norm;
    let predicted_ratio = if u < 1.0 { u / (1.0 - u) } else { f64::INFINITY };

    let mut w = match start {
        Some(w0) => {
            x.check_dim(w0)?;
            w0.clone()
        }
        None => x.neg(),
    };
    let mut update_norms = Vec::new();
    if x_norm == 0.0 && start.is_none() {
        return Ok(InverseSolveReport {
            w,
            iterations: 0,
            update_norms,
            observed_ratios: Vec::new(),
            distance_to_neg_x: 0.0,
            residual: 0.0,
            contraction_u: u,
            predicted_ratio,
            radius_warning,
        });
    }

    for iteration in 1..=max_iter {
        let tail = bch_evaluate_tail(x, &w, n, components)?;
        let next = x.neg().sub(&tail)?;
        let update = quasi_norm(&next.sub(&w)?, spec)?;
        update_norms.push(update);
        w = next;
        if update < tol {
            let observed_ratios = update_norms
                .windows(2)
                .filter(|pair| pair[0] > 0.0)
                .map(|pair| pair[1] / pair[0])
                .collect();
            let residual = quasi_norm(&bch_evaluate(x, &w, n, components)?, spec)?;
            return Ok(InverseSolveReport {
                distance_to_neg_x: quasi_norm(&w.add(x)?, spec)?,
                w,
                iterations: iteration,
                update_norms,
                observed_ratios,
                residual,
                contraction_u: u,
                predicted_ratio,
                radius_warning,
            });
        }
    }
    Err(Error::IterationLimit {
        limit: max_iter,
        last_residual: update_norms.last().copied().unwrap_or(f64::NAN),
    })
}

/// Reproducible family of uniform random matrices with entries in
/// [-scale, scale].
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SampleFamily {
    pub dim: usize,
    pub scale: f64,
    pub seed: u64,
}

pub fn random_matrix(rng: &mut ChaCha8Rng, dim: usize, scale: f64) -> DenseMatrix {
    let entries = (0..dim * dim)
        .map(|_| rng.random_range(-scale..=scale))
        .collect();
    DenseMatrix { dim, entries }
}

/// Rescales `m` so its quasi-norm equals `target`.
fn scaled_to_norm(
    m: &DenseMatrix,
    spec: &QuasiNormSpec,
    target: f64,
) -> Result<Option<DenseMatrix>> {
    let norm = quasi_norm(m, spec)?;
    if norm <= f64::MIN_POSITIVE {
        return Ok(None);
    }
    Ok(Some(m.scale(target / norm)))
}

/// Draws a triple scaled into the given quasi-norm ball, retrying on
/// degenerate (zero-norm) draws.
fn scaled_triple(
    rng: &mut ChaCha8Rng,
    dim: usize,
    spec: &QuasiNormSpec,
    ball: f64,
) -> Result<Option<(DenseMatrix, DenseMatrix, DenseMatrix)>> {
    let mut out = Vec::with_capacity(3);
    for _ in 0..3 {
        let raw = random_matrix(rng, dim, 1.0);
        let target = rng.random_range(0.2..=1.0) * ball;
        match scaled_to_norm(&raw, spec, target)? {
            Some(s) => out.push(s),
            None => return Ok(None),
        }
    }
    let z = out.pop().unwrap();
    let y = out.pop().unwrap();
    let x = out.pop().unwrap();
    Ok(Some((x, y, z)))
}

/// Empirical maxima of the defining ratios over a sample family. These are
/// lower bounds for the true constants of the norm and are reported as such.
#[derive(Clone, Debug, Serialize)]
pub struct MeasuredConstants {
    pub c_tri: f64,
    pub c_mult: f64,
    pub c_bracket: f64,
    pub samples: usize,
    pub skipped: usize,
    pub seed: u64,
}

pub fn measure_constants(
    family: &SampleFamily,
    spec: &QuasiNormSpec,
    samples: usize,
) -> Result<MeasuredConstants> {
    if samples < 2 {
        return Err(Error::InvalidArgument(format!(
            "constant measurement needs at least 2 samples, got {samples}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(family.seed);
    let mut c_tri: f64 = 0.0;
    let mut c_mult: f64 = 0.0;
    let mut c_bracket: f64 = 0.0;
    let mut skipped = 0usize;
    for _ in 0..samples {
        let a = random_matrix(&mut rng, family.dim, family.scale);
        let b = random_matrix(&mut rng, family.dim, family.scale);
        let na = quasi_norm(&a, spec)?;
        let nb = quasi_norm(&b, spec)?;
        if na <= f64::MIN_POSITIVE || nb <= f64::MIN_POSITIVE {
            skipped += 1;
            continue;
        }
        c_tri = c_tri.max(quasi_norm(&a.add(&b)?, spec)? / (na + nb));
        c_mult = c_mult.max(quasi_norm(&a.matmul(&b)?, spec)? / (na * nb));
        c_bracket = c_bracket.max(quasi_norm(&a.commutator(&b)?, spec)? / (na * nb));
    }
    if skipped == samples {
        return Err(Error::InvalidArgument(
            "every sample in the family was degenerate (zero norm)".into(),
        ));
    }
    Ok(MeasuredConstants {
        c_tri,
        c_mult,
        c_bracket,
        samples,
        skipped,
        seed: family.seed,
    })
}

/// The explicit inequalities the sampler can exercise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InequalityKind {
    /// (a) |Z_n(x,y)| <= 4^(n-1) C_b^(n-1) (|x|+|y|)^n with measured C_b.
    ZnBound,
    /// (b) |Z(x,y) - Z(x,z)| <= 2 |y-z| on B(0, rho0).
    BchLipschitz,
    /// (c) bracket continuity on bounded sets.
    BracketContinuity,
    /// (d) d_p(x*y, x*z) <= 2^p d_p(y, z) on B(0, rho/2).
    TranslationLipschitz,
    /// (e) rho(ad_x) <= C_b |x| via power iteration.
    SpectralRadius,
    /// (f) |x^n| <= C_m^(n-1) |x|^n with measured C_m.
    PowerBound,
    /// Reporting-only: bi-Lipschitz distortion of exp on a small ball
    /// (measured upper/lower constants; no closed form is asserted).
    ExpBiLipschitz,
}

impl InequalityKind {
    pub fn parse(name: &str) -> Result<InequalityKind> {
        Ok(match name {
            "a" | "zn-bound" => InequalityKind::ZnBound,
            "b" | "bch-lipschitz" => InequalityKind::BchLipschitz,
            "c" | "bracket-continuity" => InequalityKind::BracketContinuity,
            "d" | "translation-lipschitz" => InequalityKind::TranslationLipschitz,
            "e" | "spectral-radius" => InequalityKind::SpectralRadius,
            "f" | "power-bound" => InequalityKind::PowerBound,
            "g" | "exp-bilipschitz" => InequalityKind::ExpBiLipschitz,
            other => {
                return Err(Error::InvalidArgument(format!(
                    "unknown inequality {other:?} (expected a-g or a kebab-case name)"
                )))
            }
        })
    }

    pub fn label(&self) -> &'static str {
        match self {
            InequalityKind::ZnBound => "zn-bound",
            InequalityKind::BchLipschitz => "bch-lipschitz",
            InequalityKind::BracketContinuity => "bracket-continuity",
            InequalityKind::TranslationLipschitz => "translation-lipschitz",
            InequalityKind::SpectralRadius => "spectral-radius",
            InequalityKind::PowerBound => "power-bound",
            InequalityKind::ExpBiLipschitz => "exp-bilipschitz",
        }
    }

    /// The norm each check defaults to. The additive chains in (a), (b), (c)
    /// and (e) are stated for a true norm, so they default to the operator
    /// norm; (d) is only interesting for p < 1.
    pub fn default_spec(&self) -> QuasiNormSpec {
        match self {
            InequalityKind::TranslationLipschitz => QuasiNormSpec::EntrywiseP { p: 0.5 },
            InequalityKind::ExpBiLipschitz => QuasiNormSpec::EntrywiseP { p: 0.5 },
            _ => QuasiNormSpec::Operator2Norm,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SamplerConfig {
    pub inequality: InequalityKind,
    pub samples: usize,
    pub seed: u64,
    pub dim: usize,
    /// Homogeneous degree for the component bound (a).
    pub degree: usize,
    /// Truncation used wherever the full group law is evaluated.
    pub truncation: usize,
    pub spec: QuasiNormSpec,
}

impl SamplerConfig {
    pub fn new(inequality: InequalityKind, samples: usize, seed: u64) -> SamplerConfig {
        SamplerConfig {
            inequality,
            samples,
            seed,
            dim: 4,
            degree: 3,
            truncation: 12,
            spec: inequality.default_spec(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SamplerWitness {
    pub lhs: f64,
    pub rhs: f64,
    pub matrices: Vec<DenseMatrix>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SamplerReport {
    pub inequality: String,
    pub samples: usize,
    pub seed: u64,
    /// Maximum observed lhs/rhs. For (a)-(f) the inequality holds when this
    /// does not exceed 1; for the bi-Lipschitz report it is the measured
    /// distortion (upper/lower) and carries no pass threshold.
    pub max_ratio: f64,
    pub measured_c_tri: Option<f64>,
    pub measured_c_mult: Option<f64>,
    pub measured_c_bracket: Option<f64>,
    pub notes: Vec<String>,
    pub witness: Option<SamplerWitness>,
}

struct RatioTracker {
    max_ratio: f64,
    witness: Option<SamplerWitness>,
}

impl RatioTracker {
    fn new() -> RatioTracker {
        RatioTracker { max_ratio: 0.0, witness: None }
    }

    fn observe(&mut self, lhs: f64, rhs: f64, matrices: &[&DenseMatrix]) {
        if rhs <= f64::MIN_POSITIVE {
            return;
        }
        let ratio = lhs / rhs;
        if ratio > self.max_ratio || self.witness.is_none() {
            self.max_ratio = self.max_ratio.max(ratio);
            self.witness = Some(SamplerWitness {
                lhs,
                rhs,
                matrices: matrices.iter().map(|m| (*m).clone()).collect(),
            });
        }
    }
}

/// Runs the configured inequality over seeded samples and reports the worst
/// observed lhs/rhs together with the witness attaining it.
pub fn run_inequality_sampler(
    config: &SamplerConfig,
    components: &[LieCombination],
) -> Result<SamplerReport> {
    config.spec.validate()?;
    if config.samples == 0 {
        return Err(Error::InvalidArgument("sample count must be positive".into()));
    }
    match config.inequality {
        InequalityKind::ZnBound => sample_zn_bound(config, components),
        InequalityKind::BchLipschitz => sample_bch_lipschitz(config, components),
        InequalityKind::BracketContinuity => sample_bracket_continuity(config),
        InequalityKind::TranslationLipschitz => sample_translation_lipschitz(config, components),
        InequalityKind::SpectralRadius => sample_spectral_radius(config),
        InequalityKind::PowerBound => sample_power_bound(config),
        InequalityKind::ExpBiLipschitz => sample_exp_bilipschitz(config),
    }
}

fn sample_zn_bound(config: &SamplerConfig, components: &[LieCombination]) -> Result<SamplerReport> {
    let n = config.degree;
    check_components(components, n)?;
    let spec = &config.spec;

    // Pass 1: measure C_b over exactly the commutator events the tree
    // estimate chains over (every internal node of every bracketed Lyndon
    // word of degree <= n on the sampled pairs).
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut c_b: f64 = 0.0;
    let mut norm_errors = Ok(());
    for _ in 0..config.samples {
        let x = random_matrix(&mut rng, config.dim, 1.0);
        let y = random_matrix(&mut rng, config.dim, 1.0);
        eval_components(&x, &y, components, 1..=n, |a, b, bracket| {
            let observe = || -> Result<f64> {
                let na = quasi_norm(a, spec)?;
                let nb = quasi_norm(b, spec)?;
                if na <= f64::MIN_POSITIVE || nb <= f64::MIN_POSITIVE {
                    return Ok(0.0);
                }
                Ok(quasi_norm(bracket, spec)? / (na * nb))
            };
            match observe() {
                Ok(r) => c_b = c_b.max(r),
                Err(e) => {
                    if norm_errors.is_ok() {
                        norm_errors = Err(e);
                    }
                }
            }
        })?;
    }
    norm_errors?;
    if c_b <= f64::MIN_POSITIVE {
        return Err(Error::InvalidArgument(
            "bracket constant measured as zero on the sample family".into(),
        ));
    }

    // Pass 2: identical stream, check the component bound.
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut tracker = RatioTracker::new();
    for _ in 0..config.samples {
        let x = random_matrix(&mut rng, config.dim, 1.0);
        let y = random_matrix(&mut rng, config.dim, 1.0);
        let zn = eval_components(&x, &y, components, n..=n, |_, _, _| {})?;
        let lhs = quasi_norm(&zn, spec)?;
        let r = quasi_norm(&x, spec)? + quasi_norm(&y, spec)?;
        let rhs = 4f64.powi(n as i32 - 1) * c_b.powi(n as i32 - 1) * r.powi(n as i32);
        tracker.observe(lhs, rhs, &[&x, &y]);
    }
    Ok(SamplerReport {
        inequality: config.inequality.label().to_string(),
        samples: config.samples,
        seed: config.seed,
        max_ratio: tracker.max_ratio,
        measured_c_tri: None,
        measured_c_mult: None,
        measured_c_bracket: Some(c_b),
        notes: vec![format!("component degree n = {n}; C_b measured on the family")],
        witness: tracker.witness,
    })
}

fn sample_bch_lipschitz(
    config: &SamplerConfig,
    components: &[LieCombination],
) -> Result<SamplerReport> {
    let spec = &config.spec;
    let constants = spec.theoretical_constants()?;
    let rho0 = radii(&constants).rho0;
    let n = config.truncation;
    check_components(components, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut tracker = RatioTracker::new();
    let mut produced = 0usize;
    while produced < config.samples {
        let Some((x, y, z)) = scaled_triple(&mut rng, config.dim, spec, rho0)? else {
            continue;
        };
        let dyz = quasi_norm(&y.sub(&z)?, spec)?;
        if dyz < 1e-13 {
            continue;
        }
        produced += 1;
        let zy = bch_evaluate(&x, &y, n, components)?;
        let zz = bch_evaluate(&x, &z, n, components)?;
        let lhs = quasi_norm(&zy.sub(&zz)?, spec)?;
        tracker.observe(lhs, 2.0 * dyz, &[&x, &y, &z]);
    }
    Ok(SamplerReport {
        inequality: config.inequality.label().to_string(),
        samples: config.samples,
        seed: config.seed,
        max_ratio: tracker.max_ratio,
        measured_c_tri: None,
        measured_c_mult: None,
        measured_c_bracket: None,
        notes: vec![format!(
            "domain B(0, rho0) with rho0 = {rho0:.6} from the closed-form constants; truncation N = {n}"
        )],
        witness: tracker.witness,
    })
}

fn sample_bracket_continuity(config: &SamplerConfig) -> Result<SamplerReport> {
    let spec = &config.spec;

    // Pass 1: measure the triangle and bracket ratios on the decomposition
    // [x,y]-[x',y'] = [x-x', y] + [x', y-y'] actually used by the bound.
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut c_tri: f64 = 0.0;
    let mut c_b: f64 = 0.0;
    for _ in 0..config.samples {
        let x = random_matrix(&mut rng, config.dim, 1.0);
        let x2 = random_matrix(&mut rng, config.dim, 1.0);
        let y = random_matrix(&mut rng, config.dim, 1.0);
        let y2 = random_matrix(&mut rng, config.dim, 1.0);
        let dx = x.sub(&x2)?;
        let dy = y.sub(&y2)?;
        let t1 = dx.commutator(&y)?;
        let t2 = x2.commutator(&dy)?;
        let (n1, n2) = (quasi_norm(&t1, spec)?, quasi_norm(&t2, spec)?);
        if n1 + n2 > f64::MIN_POSITIVE {
            c_tri = c_tri.max(quasi_norm(&t1.add(&t2)?, spec)? / (n1 + n2));
        }
        for (a, b) in [(&dx, &y), (&x2, &dy)] {
            let (na, nb) = (quasi_norm(a, spec)?, quasi_norm(b, spec)?);
            if na * nb > f64::MIN_POSITIVE {
                c_b = c_b.max(quasi_norm(&a.commutator(b)?, spec)? / (na * nb));
            }
        }
    }
    if c_tri <= f64::MIN_POSITIVE || c_b <= f64::MIN_POSITIVE {
        return Err(Error::InvalidArgument(
            "degenerate sample family for the bracket-continuity measurement".into(),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut tracker = RatioTracker::new();
    for _ in 0..config.samples {
        let x = random_matrix(&mut rng, config.dim, 1.0);
        let x2 = random_matrix(&mut rng, config.dim, 1.0);
        let y = random_matrix(&mut rng, config.dim, 1.0);
        let y2 = random_matrix(&mut rng, config.dim, 1.0);
        let lhs = quasi_norm(&x.commutator(&y)?.sub(&x2.commutator(&y2)?)?, spec)?;
        let rhs = c_tri
            * c_b
            * (quasi_norm(&x.sub(&x2)?, spec)?
                * (quasi_norm(&y, spec)? + quasi_norm(&y2, spec)?)
                + quasi_norm(&y.sub(&y2)?, spec)?
                    * (quasi_norm(&x, spec)? + quasi_norm(&x2, spec)?));
        tracker.observe(lhs, rhs, &[&x, &y, &x2, &y2]);
    }
    Ok(SamplerReport {
        inequality: config.inequality.label().to_string(),
        samples: config.samples,
        seed: config.seed,
        max_ratio: tracker.max_ratio,
        measured_c_tri: Some(c_tri),
        measured_c_mult: None,
        measured_c_bracket: Some(c_b),
        notes: vec!["constants measured on the decomposition events of the bound".into()],
        witness: tracker.witness,
    })
}

fn sample_translation_lipschitz(
    config: &SamplerConfig,
    components: &[LieCombination],
) -> Result<SamplerReport> {
    let spec = &config.spec;
    let p = spec.ar_exponent();
    let constants = spec.theoretical_constants()?;
    let rho = radii(&constants).rho;
    let n = config.truncation;
    check_components(components, n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut tracker = RatioTracker::new();
    let mut produced = 0usize;
    while produced < config.samples {
        let Some((x, y, z)) = scaled_triple(&mut rng, config.dim, spec, rho / 2.0)? else {
            continue;
        };
        let dyz = quasi_norm(&y.sub(&z)?, spec)?;
        if dyz < 1e-13 {
            continue;
        }
        produced += 1;
        let zy = bch_evaluate(&x, &y, n, components)?;
        let zz = bch_evaluate(&x, &z, n, components)?;
        let lhs = quasi_norm(&zy.sub(&zz)?, spec)?.powf(p);
        let rhs = 2f64.powf(p) * dyz.powf(p);
        tracker.observe(lhs, rhs, &[&x, &y, &z]);
    }
    Ok(SamplerReport {
        inequality: config.inequality.label().to_string(),
        samples: config.samples,
        seed: config.seed,
        max_ratio: tracker.max_ratio,
        measured_c_tri: None,
        measured_c_mult: None,
        measured_c_bracket: None,
        notes: vec![format!(
            "quasi-metric d_p with p = {p}; domain B(0, rho/2), rho = {rho:.6}; truncation N = {n}"
        )],
        witness: tracker.witness,
    })
}

fn sample_spectral_radius(config: &SamplerConfig) -> Result<SamplerReport> {
    let spec = &config.spec;
    const POWER_STEPS: usize = 48;
    const BURN_IN: usize = 8;

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut tracker = RatioTracker::new();
    let mut c_b: f64 = 0.0;
    let mut skipped = 0usize;
    for _ in 0..config.samples {
        let x = random_matrix(&mut rng, config.dim, 1.0);
        let x_norm = quasi_norm(&x, spec)?;
        let mut y = random_matrix(&mut rng, config.dim, 1.0);
        if x_norm <= f64::MIN_POSITIVE {
            skipped += 1;
            continue;
        }
        // Power iteration on ad_x; every (x, y_k) pair feeds the C_b
        // measurement, so each growth factor is bounded by c_b * |x| by
        // construction and the geometric mean below inherits the bound.
        let mut log_sum = 0.0;
        let mut steps = 0usize;
        let mut degenerate = false;
        for step in 0..POWER_STEPS {
            let ny = quasi_norm(&y, spec)?;
            if ny <= f64::MIN_POSITIVE {
                degenerate = true;
                break;
            }
            let bracket = x.commutator(&y)?;
            let nb = quasi_norm(&bracket, spec)?;
            c_b = c_b.max(nb / (x_norm * ny));
            if nb <= f64::MIN_POSITIVE {
                degenerate = true;
                break;
            }
            if step >= BURN_IN {
                log_sum += (nb / ny).ln();
                steps += 1;
            }
            y = bracket.scale(1.0 / nb);
        }
        if degenerate || steps == 0 {
            skipped += 1;
            continue;
        }
        let spectral_estimate = (log_sum / steps as f64).exp();
        tracker.observe(spectral_estimate, c_b * x_norm, &[&x]);
    }
    if c_b <= f64::MIN_POSITIVE {
        return Err(Error::InvalidArgument(
            "degenerate sample family for the spectral-radius measurement".into(),
        ));
    }
    Ok(SamplerReport {
        inequality: config.inequality.label().to_string(),
        samples: config.samples - skipped,
        seed: config.seed,
        max_ratio: tracker.max_ratio,
        measured_c_tri: None,
        measured_c_mult: None,
        measured_c_bracket: Some(c_b),
        notes: vec![format!(
            "rho(ad_x) estimated by {POWER_STEPS}-step power iteration ({BURN_IN} burn-in)"
        )],
        witness: tracker.witness,
    })
}

fn sample_power_bound(config: &SamplerConfig) -> Result<SamplerReport> {
    let spec = &config.spec;
    const MAX_POWER: usize = 6;

    // Pass 1: measure C_m over the multiplication events x^k * x.
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut c_m: f64 = 0.0;
    for _ in 0..config.samples {
        let x = random_matrix(&mut rng, config.dim, 1.0);
        let x_norm = quasi_norm(&x, spec)?;
        if x_norm <= f64::MIN_POSITIVE {
            continue;
        }
        let mut power = x.clone();
        for _ in 1..MAX_POWER {
            let norm_k = quasi_norm(&power, spec)?;
            let next = power.matmul(&x)?;
            let norm_next = quasi_norm(&next, spec)?;
            if norm_k > f64::MIN_POSITIVE {
                c_m = c_m.max(norm_next / (norm_k * x_norm));
            }
            power = next;
        }
    }
    if c_m <= f64::MIN_POSITIVE {
        return Err(Error::InvalidArgument(
            "degenerate sample family for the power-bound measurement".into(),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut tracker = RatioTracker::new();
    for _ in 0..config.samples {
        let x = random_matrix(&mut rng, config.dim, 1.0);
        let x_norm = quasi_norm(&x, spec)?;
        if x_norm <= f64::MIN_POSITIVE {
            continue;
        }
        let mut power = x.clone();
        for k in 2..=MAX_POWER {
            power = power.matmul(&x)?;
            let lhs = quasi_norm(&power, spec)?;
            let rhs = c_m.powi(k as i32 - 1) * x_norm.powi(k as i32);
            tracker.observe(lhs, rhs, &[&x]);
        }
    }
    Ok(SamplerReport {
        inequality: config.inequality.label().to_string(),
        samples: config.samples,
        seed: config.seed,
        max_ratio: tracker.max_ratio,
        measured_c_tri: None,
        measured_c_mult: Some(c_m),
        measured_c_bracket: None,
        notes: vec![format!("powers up to {MAX_POWER}; C_m measured on the family")],
        witness: tracker.witness,
    })
}

fn sample_exp_bilipschitz(config: &SamplerConfig) -> Result<SamplerReport> {
    let spec = &config.spec;
    let p = spec.ar_exponent();
    let ball = 0.1;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut upper: f64 = 0.0;
    let mut lower = f64::INFINITY;
    let mut produced = 0usize;
    let mut witness: Option<SamplerWitness> = None;
    while produced < config.samples {
        let x = scaled_to_norm(
            &random_matrix(&mut rng, config.dim, 1.0),
            spec,
            rng.random_range(0.1..=1.0) * ball,
        )?;
        let y = scaled_to_norm(
            &random_matrix(&mut rng, config.dim, 1.0),
            spec,
            rng.random_range(0.1..=1.0) * ball,
        )?;
        let (Some(x), Some(y)) = (x, y) else { continue };
        let d = quasi_norm(&x.sub(&y)?, spec)?.powf(p);
        if d < 1e-13 {
            continue;
        }
        produced += 1;
        let ex = matrix_exp_series(&x, 1e-15)?;
        let ey = matrix_exp_series(&y, 1e-15)?;
        let de = quasi_norm(&ex.sub(&ey)?, spec)?.powf(p);
        let ratio = de / d;
        if ratio > upper {
            upper = ratio;
            witness = Some(SamplerWitness { lhs: de, rhs: d, matrices: vec![x.clone(), y.clone()] });
        }
        lower = lower.min(ratio);
    }
    Ok(SamplerReport {
        inequality: config.inequality.label().to_string(),
        samples: config.samples,
        seed: config.seed,
        max_ratio: if lower > 0.0 { upper / lower } else { f64::INFINITY },
        measured_c_tri: None,
        measured_c_mult: None,
        measured_c_bracket: None,
        notes: vec![format!(
            "measured d_p distortion of exp on B(0, {ball}): upper C(r) = {upper:.6}, lower c(r) = {lower:.6}; max_ratio is their quotient (no closed form asserted)"
        )],
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bch::bch_lie_components;

    fn mat(dim: usize, entries: &[f64]) -> DenseMatrix {
        DenseMatrix::from_entries(dim, entries.to_vec()).unwrap()
    }

    #[test]
    fn quasi_norm_examples() {
        let zero = DenseMatrix::zeros(3);
        for spec in [
            QuasiNormSpec::EntrywiseP { p: 0.5 },
            QuasiNormSpec::WeakSchattenP { p: 0.5 },
            QuasiNormSpec::Operator2Norm,
        ] {
            assert_eq!(quasi_norm(&zero, &spec).unwrap(), 0.0);
        }
        // identity 3x3 under entrywise p = 1/2: (3 * 1)^2 = 9
        let id = DenseMatrix::identity(3);
        let n = quasi_norm(&id, &QuasiNormSpec::EntrywiseP { p: 0.5 }).unwrap();
        assert!((n - 9.0).abs() < 1e-10);
        // diag(2, 1) under weak-Schatten p = 1/2: max(1^2*2, 2^2*1) = 4
        let d = mat(2, &[2.0, 0.0, 0.0, 1.0]);
        let n = quasi_norm(&d, &QuasiNormSpec::WeakSchattenP { p: 0.5 }).unwrap();
        assert!((n - 4.0).abs() < 1e-10);
        let n = quasi_norm(&d, &QuasiNormSpec::Operator2Norm).unwrap();
        assert!((n - 2.0).abs() < 1e-10);
        assert!(quasi_norm(&d, &QuasiNormSpec::EntrywiseP { p: 0.0 }).is_err());
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(DenseMatrix::from_entries(2, vec![1.0; 3]).is_err());
        assert!(matches!(
            DenseMatrix::from_entries(1, vec![f64::NAN]),
            Err(Error::NonFinite)
        ));
        assert!(mat(2, &[0.0; 4]).matmul(&DenseMatrix::zeros(3)).is_err());
    }

    #[test]
    fn subadditivity_trivial_cases() {
        let a = mat(2, &[1.0, -2.0, 0.5, 3.0]);
        let zero = DenseMatrix::zeros(2);
        assert!(pnorm_subadditivity_check(&a, &zero, 0.5).unwrap());
        assert!(pnorm_subadditivity_check(&a, &a, 0.5).unwrap());
        assert!(pnorm_subadditivity_check(&a, &a, 2.0).is_err());
    }

    #[test]
    fn exp_series_examples() {
        let id = matrix_exp_series(&DenseMatrix::zeros(2), 1e-14).unwrap();
        assert_eq!(id, DenseMatrix::identity(2));
        // nilpotent: exp(x) = 1 + x exactly
        let x = mat(2, &[0.0, 0.7, 0.0, 0.0]);
        let e = matrix_exp_series(&x, 1e-14).unwrap();
        assert_eq!(e, DenseMatrix::identity(2).add(&x).unwrap());
        // diagonal
        let d = mat(2, &[0.3, 0.0, 0.0, -0.2]);
        let e = matrix_exp_series(&d, 1e-14).unwrap();
        assert!((e.get(0, 0) - 0.3f64.exp()).abs() < 1e-12);
        assert!((e.get(1, 1) - (-0.2f64).exp()).abs() < 1e-12);
        assert!(e.get(0, 1).abs() < 1e-15);
    }

    #[test]
    fn exp_log_round_trip_across_dims() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let tol = 1e-13;
        for dim in 2..=6 {
            // keep |x|_l1 <= 0.5 so exp(x) - 1 stays inside the log radius
            let scale = 0.5 / (dim * dim) as f64;
            for _ in 0..5 {
                let x = random_matrix(&mut rng, dim, scale);
                let back =
                    matrix_log_series(&matrix_exp_series(&x, tol).unwrap(), tol).unwrap();
                let gap = back.sub(&x).unwrap().abs_sum();
                assert!(gap < 10.0 * tol, "dim {dim}: gap {gap}");
            }
        }
    }

    #[test]
    fn log_series_examples() {
        let zero = matrix_log_series(&DenseMatrix::identity(3), 1e-14).unwrap();
        assert!(zero.abs_sum() < 1e-15);
        // I + nilpotent
        let n = mat(2, &[0.0, 0.4, 0.0, 0.0]);
        let l = matrix_log_series(&DenseMatrix::identity(2).add(&n).unwrap(), 1e-14).unwrap();
        assert!((l.sub(&n).unwrap()).abs_sum() < 1e-15);
        // round trip
        let x = mat(2, &[0.05, -0.03, 0.02, 0.04]);
        let back = matrix_log_series(&matrix_exp_series(&x, 1e-14).unwrap(), 1e-14).unwrap();
        assert!(back.sub(&x).unwrap().abs_sum() < 1e-13);
        // radius guard
        let far = mat(1, &[3.0]);
        assert!(matches!(matrix_log_series(&far, 1e-12), Err(Error::Domain { .. })));
    }

    #[test]
    fn neumann_examples() {
        let spec = QuasiNormSpec::Operator2Norm;
        let inv = neumann_inverse(&DenseMatrix::zeros(2), &spec, 1e-14).unwrap();
        assert_eq!(inv, DenseMatrix::identity(2));
        // scalar geometric series
        let t = mat(1, &[0.25]);
        let inv = neumann_inverse(&t, &spec, 1e-14).unwrap();
        assert!((inv.get(0, 0) - 4.0 / 3.0).abs() < 1e-12);
        // residual check |(1 - t) inv - 1| small
        let t = mat(2, &[0.1, 0.05, -0.04, 0.08]);
        let inv = neumann_inverse(&t, &spec, 1e-13).unwrap();
        let resid = DenseMatrix::identity(2)
            .sub(&t)
            .unwrap()
            .matmul(&inv)
            .unwrap()
            .sub(&DenseMatrix::identity(2))
            .unwrap();
        assert!(resid.abs_sum() < 1e-11);
        // radius guard: |T| = 0.6 >= 1/2
        let big = mat(1, &[0.6]);
        assert!(matches!(neumann_inverse(&big, &spec, 1e-12), Err(Error::Domain { .. })));
    }

    #[test]
    fn bch_evaluate_degenerate_cases() {
        let components = bch_lie_components(6).unwrap();
        // commuting pair: Z reduces to x + y at any truncation
        let x = mat(2, &[0.3, 0.0, 0.0, -0.1]);
        let y = mat(2, &[-0.2, 0.0, 0.0, 0.25]);
        let z = bch_evaluate(&x, &y, 6, &components).unwrap();
        assert!(z.sub(&x.add(&y).unwrap()).unwrap().abs_sum() < 1e-14);
        // y = 0: Z(x, 0) = x exactly
        let z = bch_evaluate(&x, &DenseMatrix::zeros(2), 6, &components).unwrap();
        assert!(z.sub(&x).unwrap().abs_sum() < 1e-15);
        assert!(bch_evaluate(&x, &y, 7, &components).is_err());
    }

    #[test]
    fn group_law_residual_decays_with_truncation() {
        let components = bch_lie_components(10).unwrap();
        let spec = QuasiNormSpec::Operator2Norm;
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let x = scaled_to_norm(&random_matrix(&mut rng, 3, 1.0), &spec, 0.02)
            .unwrap()
            .unwrap();
        let y = scaled_to_norm(&random_matrix(&mut rng, 3, 1.0), &spec, 0.02)
            .unwrap()
            .unwrap();
        let r6 = group_law_check(&x, &y, 6, &spec, &components).unwrap();
        let r8 = group_law_check(&x, &y, 8, &spec, &components).unwrap();
        assert!(r6.radius_check);
        assert!(r8.residual < r6.residual);
        assert!(r8.residual < 1e-10, "residual {}", r8.residual);
        // exact additivity for commuting matrices at N = 1
        let a = mat(2, &[0.05, 0.0, 0.0, 0.02]);
        let b = mat(2, &[0.01, 0.0, 0.0, -0.03]);
        let r = group_law_check(&a, &b, 1, &spec, &components).unwrap();
        assert!(r.residual < 1e-12, "residual {}", r.residual);
    }

    #[test]
    fn group_law_residual_ratio_follows_the_tail_estimate() {
        // residual(N+2)/residual(N) <= r^2 * 16 * C_b^2 * 1.5 inside half
        // the radius (C_b = 2 for the operator norm, so r = 1/16)
        let components = bch_lie_components(10).unwrap();
        let spec = QuasiNormSpec::Operator2Norm;
        let c_b = 2.0;
        let half_radius = 0.5 / (4.0 * c_b);
        let bound = half_radius * half_radius * 16.0 * c_b * c_b * 1.5;
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..5 {
            let split = rng.random_range(0.3..0.7);
            let x = scaled_to_norm(&random_matrix(&mut rng, 4, 1.0), &spec, half_radius * split)
                .unwrap()
                .unwrap();
            let y = scaled_to_norm(
                &random_matrix(&mut rng, 4, 1.0),
                &spec,
                half_radius * (1.0 - split),
            )
            .unwrap()
            .unwrap();
            // the denominator residual must sit well above rounding noise
            for n in [2usize, 4] {
                let low = group_law_check(&x, &y, n, &spec, &components).unwrap();
                let high = group_law_check(&x, &y, n + 2, &spec, &components).unwrap();
                assert!(low.residual > 1e-12, "N={n} residual too small to resolve");
                let ratio = high.residual / low.residual;
                assert!(ratio <= bound, "N={n}: ratio {ratio} vs bound {bound}");
            }
        }
    }

    #[test]
    fn inverse_solver_finds_neg_x() {
        let components = bch_lie_components(10).unwrap();
        let spec = QuasiNormSpec::Operator2Norm;
        let constants = spec.theoretical_constants().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let x = scaled_to_norm(&random_matrix(&mut rng, 4, 1.0), &spec, 0.005)
            .unwrap()
            .unwrap();
        // default start -x is the exact fixed point: one trivial step
        let report =
            bch_inverse_solver(&x, &components, &constants, &spec, 10, 1e-12, 200, None).unwrap();
        assert!(report.distance_to_neg_x < 1e-10, "{}", report.distance_to_neg_x);
        assert!(report.residual < 1e-11);
        assert!(!report.radius_warning);
        assert_eq!(report.iterations, 1);
        // a perturbed start inside the ball contracts onto -x
        let perturbation = scaled_to_norm(&random_matrix(&mut rng, 4, 1.0), &spec, 0.004)
            .unwrap()
            .unwrap();
        let start = x.neg().add(&perturbation).unwrap();
        let report =
            bch_inverse_solver(&x, &components, &constants, &spec, 10, 1e-12, 200, Some(&start))
                .unwrap();
        assert!(report.iterations > 1);
        assert!(report.distance_to_neg_x < 1e-10, "{}", report.distance_to_neg_x);
        let worst = report.observed_ratios.iter().cloned().fold(0.0f64, f64::max);
        assert!(worst <= report.predicted_ratio + 0.05, "{worst}");
        // x = 0 converges immediately
        let zero = DenseMatrix::zeros(3);
        let report =
            bch_inverse_solver(&zero, &components, &constants, &spec, 10, 1e-12, 10, None).unwrap();
        assert_eq!(report.iterations, 0);
        assert_eq!(report.w, DenseMatrix::zeros(3));
        // out-of-domain input is rejected with the violated inequality
        let big = scaled_to_norm(&random_matrix(&mut rng, 3, 1.0), &spec, 1.0)
            .unwrap()
            .unwrap();
        assert!(matches!(
            bch_inverse_solver(&big, &components, &constants, &spec, 10, 1e-12, 10, None),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn measured_constants_bounded_for_true_norms() {
        let family = SampleFamily { dim: 4, scale: 1.0, seed: 3 };
        let spec = QuasiNormSpec::Operator2Norm;
        let m = measure_constants(&family, &spec, 200).unwrap();
        assert!(m.c_tri <= 1.0 + 1e-12, "c_tri {}", m.c_tri);
        assert!(m.c_mult <= 1.0 + 1e-12, "c_mult {}", m.c_mult);
        assert!(m.c_bracket <= 2.0 + 1e-12, "c_bracket {}", m.c_bracket);
        // entrywise p = 1/2 triangle constant is below 2^(1/p - 1) = 2,
        // attained by disjoint-support pairs
        let spec = QuasiNormSpec::EntrywiseP { p: 0.5 };
        let m = measure_constants(&family, &spec, 200).unwrap();
        assert!(m.c_tri <= 2.0 + 1e-12);
        let a = mat(2, &[1.0, 0.0, 0.0, 0.0]);
        let b = mat(2, &[0.0, 0.0, 0.0, 1.0]);
        let joint = quasi_norm(&a.add(&b).unwrap(), &spec).unwrap();
        let parts = quasi_norm(&a, &spec).unwrap() + quasi_norm(&b, &spec).unwrap();
        assert!((joint / parts - 2.0).abs() < 1e-12);
        assert!(measure_constants(&family, &spec, 1).is_err());
    }

    #[test]
    fn samplers_run_and_hold() {
        let components = bch_lie_components(12).unwrap();
        for kind in [
            InequalityKind::ZnBound,
            InequalityKind::BchLipschitz,
            InequalityKind::BracketContinuity,
            InequalityKind::TranslationLipschitz,
            InequalityKind::SpectralRadius,
            InequalityKind::PowerBound,
        ] {
            let config = SamplerConfig::new(kind, 60, 17);
            let report = run_inequality_sampler(&config, &components).unwrap();
            assert!(
                report.max_ratio <= 1.0 + 1e-9,
                "{}: ratio {}",
                report.inequality,
                report.max_ratio
            );
            assert!(report.witness.is_some());
        }
        let config = SamplerConfig::new(InequalityKind::ExpBiLipschitz, 40, 17);
        let report = run_inequality_sampler(&config, &components).unwrap();
        assert!(report.max_ratio >= 1.0);
    }

    #[test]
    fn weak_schatten_signed_permutation_invariance() {
        let spec = QuasiNormSpec::WeakSchattenP { p: 0.5 };
        let m = mat(3, &[0.4, -1.2, 0.3, 2.0, 0.1, -0.7, 0.05, 0.6, -0.9]);
        // signed permutation: rows swapped with a sign flip
        let u = mat(3, &[0.0, 1.0, 0.0, -1.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        let v = mat(3, &[0.0, 0.0, -1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0]);
        let transformed = u.matmul(&m).unwrap().matmul(&v).unwrap();
        let a = quasi_norm(&m, &spec).unwrap();
        let b = quasi_norm(&transformed, &spec).unwrap();
        assert!((a - b).abs() < 1e-9 * a.max(1.0), "{a} vs {b}");
    }

    #[test]
    fn inequality_names_parse() {
        assert_eq!(InequalityKind::parse("a").unwrap(), InequalityKind::ZnBound);
        assert_eq!(
            InequalityKind::parse("translation-lipschitz").unwrap(),
            InequalityKind::TranslationLipschitz
        );
        assert!(InequalityKind::parse("nope").is_err());
    }
}
