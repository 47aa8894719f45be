//! The Baker-Campbell-Hausdorff expansion Z = log(e^X e^Y) in Q<X,Y>, its
//! associative and Lie-projected coefficient sums, and the Catalan majorants.
//!
//! The expansion is computed exactly. Internally each homogeneous slice of
//! degree n is a dense array of integer numerators over the common
//! denominator n! * lcm(1..n): every coefficient of u^k (u = e^X e^Y - 1)
//! times n! is an integer because products of factorials divide n!, and the
//! lcm factor absorbs the 1/k of the logarithm. That keeps the degree-20 run
//! in machine integers (checked i128) instead of allocating 10^8 big
//! rationals. The public series route (`FreeSeries::exp`/`log`/`mul`) is kept
//! as an independent cross-check at low degree.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num::bigint::BigInt;
use num::{BigRational, One, Signed, ToPrimitive, Zero};

use crate::decimal::{render_decimal, render_exact, render_fixed4};
use crate::error::{Error, Result};
use crate::series::{FreeSeries, Rational};
use crate::words::{lyndon_words, standard_factorization, BracketTree, Word};

/// Default hard cap on the expansion degree; the full reference table stops
/// here. Overridable upward by callers (the CLI honours BCH_MAX_DEGREE_CAP).
pub const DEFAULT_DEGREE_CAP: usize = 20;

/// Absolute ceiling of the scaled-integer pipeline. Above this the dense
/// slices outgrow memory (2^n entries per degree) and the i128 numerators
/// approach their range.
pub const MAX_SUPPORTED_DEGREE: usize = 24;

/// Ceiling for the dense Friedrichs oracle (2^n subset splits per word).
pub const MAX_DEFECT_DEGREE: usize = 16;

/// The BCH expansion truncated at `max_degree`, one exact homogeneous slice
/// per degree.
pub struct BchExpansion {
    max_degree: usize,
    /// denoms[n] = n! * lcm(1..n); slices[n][bits] / denoms[n] is the
    /// coefficient of the word with packed `bits` of length n.
    denoms: Vec<i128>,
    slices: Vec<Vec<i128>>,
}

impl BchExpansion {
    pub fn compute(max_degree: usize) -> Result<BchExpansion> {
        if max_degree == 0 || max_degree > MAX_SUPPORTED_DEGREE {
            return Err(Error::DegreeRange { degree: max_degree, max: MAX_SUPPORTED_DEGREE });
        }
        let d = max_degree;
        let mut fact = vec![1i128; d + 1];
        for n in 1..=d {
            fact[n] = fact[n - 1] * n as i128;
        }
        let mut lcms = vec![1i128; d + 1];
        for n in 1..=d {
            lcms[n] = lcms[n - 1] / gcd(lcms[n - 1], n as i128) * n as i128;
        }
        let denoms: Vec<i128> = (0..=d).map(|n| fact[n] * lcms[n]).collect();
        let mut binom = vec![vec![0i128; d + 1]; d + 1];
        for n in 0..=d {
            binom[n][0] = 1;
            for k in 1..=n {
                binom[n][k] = binom[n - 1][k - 1] + if k < n { binom[n - 1][k] } else { 0 };
            }
        }
        // lcm_ratio[a][b] = lcm(1..a+b) / lcm(1..a), always integral
        let mut lcm_ratio = vec![vec![0i128; d + 1]; d + 1];
        for a in 0..=d {
            for b in 0..=(d - a) {
                debug_assert!(lcms[a + b] % lcms[a] == 0);
                lcm_ratio[a][b] = lcms[a + b] / lcms[a];
            }
        }
        // scale factor for appending the block X^i Y^j to a degree-a word:
        // denoms[a+i+j] / (denoms[a] * i! * j!)
        let mult = |a: usize, i: usize, j: usize| -> i128 {
            let b = i + j;
            binom[a + b][b] * binom[b][i] * lcm_ratio[a][b]
        };

        let slice_len = |n: usize| 1usize << n;
        let mut z: Vec<Vec<i128>> = (0..=d)
            .map(|n| if n == 0 { Vec::new() } else { vec![0i128; slice_len(n)] })
            .collect();

        // p = u = e^X e^Y - 1: only blocks X^i Y^j, packed bits (1<<j)-1
        let mut p: Vec<Vec<i128>> = (0..=d)
            .map(|n| if n == 0 { Vec::new() } else { vec![0i128; slice_len(n)] })
            .collect();
        for n in 1..=d {
            for j in 0..=n {
                let i = n - j;
                p[n][((1u64 << j) - 1) as usize] = denoms[n] / (fact[i] * fact[j]);
            }
            z[n].copy_from_slice(&p[n]);
        }

        for k in 2..=d {
            let prev_min = k - 1;
            let mut np: Vec<Vec<i128>> = (0..=d)
                .map(|n| if n < k { Vec::new() } else { vec![0i128; slice_len(n)] })
                .collect();
            #[allow(clippy::needless_range_loop)] // n indexes p and np together
            for n in k..=d {
                for m in 0..slice_len(n) {
                    let mut acc: i128 = 0;
                    // trailing Y-run of the word: suffixes Y^j, j = 1..=t
                    let t = (m as u64).trailing_ones() as usize;
                    for j in 1..=t {
                        let a = n - j;
                        if a < prev_min {
                            break;
                        }
                        let c = p[a][m >> j];
                        if c != 0 {
                            acc = add_term(acc, c, mult(a, 0, j))?;
                        }
                    }
                    // suffixes X^i Y^t with the full Y-run, i = 1..=run of X
                    let rest = m >> t;
                    let x_run = if rest == 0 {
                        n - t
                    } else {
                        (rest as u64).trailing_zeros() as usize
                    };
                    for i in 1..=x_run {
                        let b = t + i;
                        if n < prev_min + b {
                            break;
                        }
                        let a = n - b;
                        let c = p[a][m >> b];
                        if c != 0 {
                            acc = add_term(acc, c, mult(a, i, t))?;
                        }
                    }
                    np[n][m] = acc;
                }
            }
            p = np;
            // z_n += (-1)^(k+1) u^k / k; k divides the slice scaling because
            // k | lcm(1..n) and n! clears the factorial denominators.
            let sign: i128 = if k % 2 == 1 { 1 } else { -1 };
            for n in k..=d {
                for m in 0..slice_len(n) {
                    let v = p[n][m];
                    if v != 0 {
                        debug_assert!(v % k as i128 == 0);
                        z[n][m] += sign * (v / k as i128);
                    }
                }
            }
        }

        Ok(BchExpansion { max_degree: d, denoms, slices: z })
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.max_degree {
            return Err(Error::DegreeRange { degree: n, max: self.max_degree });
        }
        Ok(())
    }

    /// A_n: sum of absolute values of all word coefficients of Z_n.
    pub fn associative_sum(&self, n: usize) -> Result<Rational> {
        self.check_degree(n)?;
        let total: i128 = self.slices[n].iter().map(|v| v.abs()).sum();
        Ok(BigRational::new(BigInt::from(total), BigInt::from(self.denoms[n])))
    }

    /// Signed coefficient sum of Z_n; the commutative image of Z is X + Y, so
    /// this vanishes for every n >= 2.
    pub fn signed_sum(&self, n: usize) -> Result<Rational> {
        self.check_degree(n)?;
        let total: i128 = self.slices[n].iter().sum();
        Ok(BigRational::new(BigInt::from(total), BigInt::from(self.denoms[n])))
    }

    /// The homogeneous component Z_n as an exact sparse series (truncation n).
    pub fn homogeneous_series(&self, n: usize) -> Result<FreeSeries> {
        self.check_degree(n)?;
        let denom = BigInt::from(self.denoms[n]);
        FreeSeries::from_terms(
            n,
            self.slices[n].iter().enumerate().filter(|(_, v)| **v != 0).map(|(m, v)| {
                (
                    Word::from_index(n, m as u64),
                    BigRational::new(BigInt::from(*v), denom.clone()),
                )
            }),
        )
    }

    /// The full truncated series, degree-1 part X + Y.
    pub fn to_series(&self) -> FreeSeries {
        let mut terms = Vec::new();
        for n in 1..=self.max_degree {
            let denom = BigInt::from(self.denoms[n]);
            for (m, v) in self.slices[n].iter().enumerate() {
                if *v != 0 {
                    terms.push((
                        Word::from_index(n, m as u64),
                        BigRational::new(BigInt::from(*v), denom.clone()),
                    ));
                }
            }
        }
        FreeSeries::from_terms(self.max_degree, terms)
            .expect("slice words are within the truncation degree")
    }

    /// Friedrichs primitivity oracle on the degree-n slice: l1 mass of
    /// Δ(Z_n) - Z_n⊗1 - 1⊗Z_n under the unshuffle coproduct. Exactly zero
    /// when Z_n is a Lie element. Runs on dense integer pair-tables; this
    /// route shares nothing with the Lyndon projection it certifies.
    pub fn primitivity_defect(&self, n: usize) -> Result<Rational> {
        self.check_degree(n)?;
        if n > MAX_DEFECT_DEGREE {
            return Err(Error::DegreeRange { degree: n, max: MAX_DEFECT_DEGREE });
        }
        let size = 1usize << n;
        // pair (u, v) with |u| = ku indexed as (u_bits << (n - ku)) | v_bits
        let mut tables: Vec<Vec<i128>> = (0..=n).map(|_| vec![0i128; size]).collect();
        for (m, c) in self.slices[n].iter().enumerate() {
            if *c == 0 {
                continue;
            }
            for mask in 1..(size - 1) {
                let mut left = 0usize;
                let mut right = 0usize;
                let mut left_len = 0usize;
                for b in (0..n).rev() {
                    let bit = (m >> b) & 1;
                    if (mask >> b) & 1 == 1 {
                        left = (left << 1) | bit;
                        left_len += 1;
                    } else {
                        right = (right << 1) | bit;
                    }
                }
                tables[left_len][(left << (n - left_len)) | right] += c;
            }
        }
        let mut total: i128 = 0;
        for table in &tables {
            for v in table {
                total += v.abs();
            }
        }
        Ok(BigRational::new(BigInt::from(total), BigInt::from(self.denoms[n])))
    }

    /// Coefficient of `w` in the expansion, exact.
    pub fn coefficient(&self, w: &Word) -> Result<Rational> {
        let n = w.len();
        self.check_degree(n)?;
        Ok(BigRational::new(
            BigInt::from(self.slices[n][w.bits() as usize]),
            BigInt::from(self.denoms[n]),
        ))
    }

    /// Swap symmetry of log(e^X e^Y): exchanging the letters of every word of
    /// Z_n multiplies its coefficient by (-1)^(n+1). Follows from
    /// Z(-Y,-X) = -Z(X,Y); checked exactly on the slice.
    pub fn swap_symmetry_holds(&self, n: usize) -> Result<bool> {
        self.check_degree(n)?;
        let mask = (1usize << n) - 1;
        let sign: i128 = if n % 2 == 1 { 1 } else { -1 };
        Ok(self.slices[n]
            .iter()
            .enumerate()
            .all(|(m, v)| self.slices[n][(!m) & mask] == sign * *v))
    }
}

fn add_term(acc: i128, c: i128, mult: i128) -> Result<i128> {
    c.checked_mul(mult)
        .and_then(|t| acc.checked_add(t))
        .ok_or_else(|| Error::Internal("i128 overflow in the expansion pipeline".into()))
}

fn gcd(mut a: i128, mut b: i128) -> i128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// log(e^X e^Y) truncated at `max_degree` as an exact sparse series.
pub fn bch_series(max_degree: usize) -> Result<FreeSeries> {
    Ok(BchExpansion::compute(max_degree)?.to_series())
}

/// A_n of an arbitrary homogeneous series: the l1 mass of its coefficients.
pub fn associative_sum(z_n: &FreeSeries) -> Result<Rational> {
    match z_n.homogeneous_degree() {
        None if z_n.is_zero() => Ok(Rational::zero()),
        None => Err(Error::InvalidArgument(
            "associative sum requires a homogeneous series".into(),
        )),
        Some(_) => Ok(z_n.l1_norm()),
    }
}

/// A Lie element written in the Lyndon basis of its degree: a sparse map
/// from Lyndon words to exact coordinates.
///
/// Coordinates depend on the basis convention (Lyndon words bracketed by
/// right standard factorization); l1 sums of coordinates are not basis
/// independent.
#[derive(Clone, PartialEq, Eq)]
pub struct LieCombination {
    degree: usize,
    coords: BTreeMap<Word, Rational>,
}

impl LieCombination {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coords(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.coords.iter()
    }

    pub fn coordinate(&self, w: &Word) -> Rational {
        self.coords.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// B_n: sum of absolute values of the basis coordinates.
    pub fn sum(&self) -> Rational {
        let mut total = Rational::zero();
        for c in self.coords.values() {
            total += c.abs();
        }
        total
    }

    /// Re-expands the combination through commutators back into the free
    /// associative algebra. Exact; used as the projection certificate.
    pub fn expand(&self) -> Result<FreeSeries> {
        let mut cache = ExpansionCache::default();
        let mut out = FreeSeries::zero(self.degree);
        for (w, c) in &self.coords {
            let expansion = cache.expansion(w)?;
            let as_series = FreeSeries::from_terms(
                self.degree,
                expansion
                    .iter()
                    .map(|(word, ic)| (*word, BigRational::from_integer(ic.clone()) * c)),
            )?;
            out = out.add(&as_series)?;
        }
        Ok(out)
    }
}

impl fmt::Debug for LieCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LieCombination(degree {}; ", self.degree)?;
        for (i, (w, c)) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{w} -> {c}")?;
        }
        write!(f, ")")
    }
}

/// Integer commutator expansions of bracketed Lyndon words, memoized across
/// the shared Lyndon subfactors.
#[derive(Default)]
struct ExpansionCache {
    map: HashMap<Word, BTreeMap<Word, BigInt>>,
}

impl ExpansionCache {
    fn expansion(&mut self, w: &Word) -> Result<BTreeMap<Word, BigInt>> {
        if let Some(e) = self.map.get(w) {
            return Ok(e.clone());
        }
        let result = if w.len() == 1 {
            let mut m = BTreeMap::new();
            m.insert(*w, BigInt::one());
            m
        } else {
            let (u, v) = standard_factorization(w)?;
            let eu = self.expansion(&u)?;
            let ev = self.expansion(&v)?;
            let mut m: BTreeMap<Word, BigInt> = BTreeMap::new();
            for (wu, cu) in &eu {
                for (wv, cv) in &ev {
                    let prod = cu * cv;
                    *m.entry(wu.concat(wv)?).or_insert_with(BigInt::zero) += &prod;
                    *m.entry(wv.concat(wu)?).or_insert_with(BigInt::zero) -= &prod;
                }
            }
            m.retain(|_, c| !c.is_zero());
            m
        };
        self.map.insert(*w, result.clone());
        Ok(result)
    }
}

/// Expansion of an arbitrary bracketing tree into the associative algebra,
/// truncated at `max_degree`.
pub fn expand_tree(t: &BracketTree, max_degree: usize) -> Result<FreeSeries> {
    match t {
        BracketTree::Leaf(l) => Ok(FreeSeries::generator(*l, max_degree)),
        BracketTree::Node(a, b) => {
            expand_tree(a, max_degree)?.commutator(&expand_tree(b, max_degree)?)
        }
    }
}

/// Projects a homogeneous Lie element onto the Lyndon basis of its degree by
/// triangular elimination: the expansion of a bracketed Lyndon word is that
/// word plus lexicographically larger words of the same length, so peeling
/// coefficients in increasing word order is exact and unique. A nonzero
/// residual after elimination means the input was not a Lie element.
pub fn lie_project(z_n: &FreeSeries) -> Result<LieCombination> {
    let n = match z_n.homogeneous_degree() {
        Some(n) => n,
        None if z_n.is_zero() => {
            return Ok(LieCombination { degree: z_n.max_degree(), coords: BTreeMap::new() })
        }
        None => {
            return Err(Error::InvalidArgument(
                "Lie projection requires a homogeneous series".into(),
            ))
        }
    };
    let mut residual: BTreeMap<Word, Rational> =
        z_n.terms().map(|(w, c)| (*w, c.clone())).collect();
    let mut coords = BTreeMap::new();
    let mut cache = ExpansionCache::default();
    for l in lyndon_words(n)? {
        let beta = match residual.get(&l) {
            Some(c) => c.clone(),
            None => continue,
        };
        let expansion = cache.expansion(&l)?;
        debug_assert!(expansion.get(&l).map(|c| c.is_one()).unwrap_or(false));
        for (w, ic) in &expansion {
            let delta = BigRational::from_integer(ic.clone()) * &beta;
            let entry = residual.entry(*w).or_insert_with(Rational::zero);
            *entry -= delta;
            if entry.is_zero() {
                residual.remove(w);
            }
        }
        coords.insert(l, beta);
    }
    if !residual.is_empty() {
        let mass: Rational = residual.values().map(|c| c.abs()).sum();
        return Err(Error::NotLieElement {
            certificate: "projection residual",
            value: render_exact(&mass),
        });
    }
    Ok(LieCombination { degree: n, coords })
}

/// Z_n in Lyndon coordinates for every n = 1..=max_degree, certified degree
/// by degree with the Friedrichs oracle and by exact re-expansion.
pub fn bch_lie_components(max_degree: usize) -> Result<Vec<LieCombination>> {
    let exp = BchExpansion::compute(max_degree)?;
    (1..=max_degree).map(|n| certified_projection(&exp, n)).collect()
}

fn certified_projection(exp: &BchExpansion, n: usize) -> Result<LieCombination> {
    let defect = exp.primitivity_defect(n)?;
    if !defect.is_zero() {
        return Err(Error::NotLieElement {
            certificate: "primitivity defect",
            value: render_exact(&defect),
        });
    }
    let z_n = exp.homogeneous_series(n)?;
    let combination = lie_project(&z_n)?;
    if combination.expand()? != z_n {
        return Err(Error::Internal(format!(
            "re-expansion of the degree-{n} Lyndon projection does not reproduce Z_{n}"
        )));
    }
    Ok(combination)
}

/// Catalan number C_n = binom(2n, n) / (n + 1), exact.
pub fn catalan(n: u64) -> BigInt {
    let mut b = BigInt::one();
    for k in 0..n {
        b = b * BigInt::from(2 * n - k) / BigInt::from(k + 1);
    }
    b / BigInt::from(n + 1)
}

/// The worst-case combinatorial bound column: 4^(n-1) / n, exact.
pub fn catalan_bound(n: usize) -> Result<Rational> {
    if n == 0 {
        return Err(Error::InvalidArgument("the bound 4^(n-1)/n needs n >= 1".into()));
    }
    Ok(BigRational::new(
        BigInt::from(4u32).pow((n - 1) as u32),
        BigInt::from(n as u64),
    ))
}

/// Shifted Catalan convolution: sum_{k=1}^{n-1} C_{k-1} C_{n-k-1} = C_{n-1}.
pub fn catalan_convolution_holds(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut sum = BigInt::zero();
    for k in 1..n {
        sum += catalan(k - 1) * catalan(n - k - 1);
    }
    sum == catalan(n - 1)
}

/// Partial sums of the Catalan generating function sum C_{n-1} t^n against
/// its closed form (1 - sqrt(1 - 4t)) / 2.
pub struct GeneratingFunctionCheck {
    pub partial_sum: f64,
    pub closed_form: f64,
    pub gap: f64,
}

pub fn catalan_generating_check(t: &Rational, terms: usize) -> GeneratingFunctionCheck {
    let mut sum = Rational::zero();
    let mut power = t.clone();
    for n in 1..=terms {
        sum += BigRational::from_integer(catalan(n as u64 - 1)) * &power;
        power *= t;
    }
    let partial = sum.to_f64().unwrap_or(f64::NAN);
    let tf = t.to_f64().unwrap_or(f64::NAN);
    let closed = (1.0 - (1.0 - 4.0 * tf).sqrt()) / 2.0;
    GeneratingFunctionCheck { partial_sum: partial, closed_form: closed, gap: (partial - closed).abs() }
}

/// Comparison of the Lie-projected l1 sum against the Catalan majorant
/// C_{n-1} that bounds the l1 coefficient mass of the degree-n commutator
/// representation.
pub struct DynkinBoundCheck {
    pub degree: usize,
    pub lie_sum: Rational,
    pub catalan: BigInt,
    pub holds: bool,
}

/// At n = 1 this reports lie_sum = 2 against C_0 = 1 and `holds = false`:
/// the majorant's base case counts x and y as one leaf-tree each, while the
/// l1 sum of Z_1 = X + Y is 2. The mismatch is a convention artifact of the
/// degree-1 base case; the bound is meaningful from degree 2 on.
pub fn dynkin_bound_check(exp: &BchExpansion, n: usize) -> Result<DynkinBoundCheck> {
    let combination = certified_projection(exp, n)?;
    let lie_sum = combination.sum();
    let bound = catalan(n as u64 - 1);
    let holds = lie_sum <= BigRational::from_integer(bound.clone());
    Ok(DynkinBoundCheck { degree: n, lie_sum, catalan: bound, holds })
}

/// Evaluates the displayed two-term recursion
/// R_n = (1/n) sum_k (ad_{Z_k} Z_{n-k} - ad_{Z_{n-k}} Z_k)
/// from the true lower-degree components and reports whether it reproduces
/// Z_n. The summand is antisymmetric under k <-> n-k, so R_n = 0 for every
/// n >= 2 and the recursion disagrees with the expansion everywhere past
/// degree 1; this function exists to report that honestly.
pub fn dynkin_recursion_agrees(exp: &BchExpansion, n: usize) -> Result<bool> {
    if n < 2 || n > exp.max_degree() {
        return Err(Error::DegreeRange { degree: n, max: exp.max_degree() });
    }
    let mut acc = FreeSeries::zero(n);
    for k in 1..n {
        let zk = exp.homogeneous_series(k)?.with_truncation(n);
        let znk = exp.homogeneous_series(n - k)?.with_truncation(n);
        let fwd = zk.commutator(&znk)?;
        let bwd = znk.commutator(&zk)?;
        acc = acc.add(&fwd.sub(&bwd)?)?;
    }
    let r_n = acc.scale(&BigRational::new(BigInt::one(), BigInt::from(n as u64)));
    Ok(r_n == exp.homogeneous_series(n)?.with_truncation(n))
}

/// One row of the coefficient table: exact A_n, certified B_n (when the
/// degree is within the projection range), and the Catalan bound 4^(n-1)/n.
pub struct CoefficientRow {
    pub degree: usize,
    pub a: Rational,
    pub b: Option<Rational>,
    pub catalan_bound: Rational,
}

impl CoefficientRow {
    pub fn a_exact(&self) -> String {
        render_exact(&self.a)
    }

    pub fn a_dec(&self) -> String {
        render_fixed4(&self.a)
    }

    pub fn b_exact(&self) -> Option<String> {
        self.b.as_ref().map(render_exact)
    }

    pub fn b_dec(&self) -> Option<String> {
        self.b.as_ref().map(render_decimal)
    }

    pub fn catalan_dec(&self) -> String {
        render_fixed4(&self.catalan_bound)
    }
}

/// Computes rows 1..=max_degree. Lie projection runs for degrees up to
/// `lie_max` (the certified range); beyond that B_n is absent because the
/// triangular solve over tens of thousands of Lyndon words with
/// half-million-term expansions is not desk-scale.
///
/// Every projected degree is certified twice before its B value is accepted:
/// the Friedrichs primitivity defect must vanish and the re-expansion of the
/// projection must reproduce Z_n exactly.
pub fn coefficient_table(max_degree: usize, lie_max: usize) -> Result<Vec<CoefficientRow>> {
    let exp = BchExpansion::compute(max_degree)?;
    let mut rows = Vec::with_capacity(max_degree);
    for n in 1..=max_degree {
        let a = exp.associative_sum(n)?;
        let b = if n <= lie_max {
            Some(certified_projection(&exp, n)?.sum())
        } else {
            None
        };
        rows.push(CoefficientRow { degree: n, a, b, catalan_bound: catalan_bound(n)? });
    }
    Ok(rows)
}

/// Previously published 4-decimal renderings of the A_n column, kept for
/// regression comparison. The exact recomputation certified by this crate
/// diverges from rows 4 on; `cmd table` prints both values whenever they
/// disagree rather than hiding the difference.
pub const REFERENCE_A_DEC4: [&str; 20] = [
    "2.0000", "1.0000", "0.6667", "0.4167", "0.2756", "0.1924", "0.1367", "0.0992", "0.0724",
    "0.0534", "0.0397", "0.0297", "0.0224", "0.0170", "0.0129", "0.0099", "0.0076", "0.0058",
    "0.0045", "0.0035",
];

/// Previously published B_n column (fixed four decimals through degree 10,
/// two-significant-digit scientific notation after). The published sequence
/// halves once per degree, which its own source flags as an artifact; the
/// certified projection disagrees from degree 4 on and both values are
/// reported side by side.
pub const REFERENCE_B_DEC: [&str; 20] = [
    "2.0000", "0.5000", "0.1667", "0.0833", "0.0417", "0.0208", "0.0104", "0.0052", "0.0026",
    "0.0013", "6.7e-4", "3.3e-4", "1.6e-4", "8.1e-5", "4.0e-5", "2.0e-5", "1.0e-5", "5.0e-6",
    "2.4e-6", "1.2e-6",
];

/// Published renderings of the Catalan bound column 4^(n-1)/n.
pub const REFERENCE_CATALAN_DEC4: [&str; 20] = [
    "1.0000",
    "2.0000",
    "5.3333",
    "16.0000",
    "51.2000",
    "170.6667",
    "585.1429",
    "2048.0000",
    "7281.7778",
    "26214.4000",
    "95325.0909",
    "349525.3333",
    "1290555.0769",
    "4793490.2857",
    "17895697.0667",
    "67108864.0000",
    "252645135.0588",
    "954437176.8889",
    "3616814565.0526",
    "13743895347.2000",
];

/// Whether the recomputed value agrees with a published rendering to the
/// precision that rendering carries (half a unit in its last digit).
pub fn matches_reference(rendered_reference: &str, value: &Rational) -> bool {
    let reference: f64 = match rendered_reference.parse() {
        Ok(v) => v,
        Err(_) => return false,
    };
    let precision = if let Some(epos) = rendered_reference.find('e') {
        // k significant decimals in the mantissa
        let mantissa = &rendered_reference[..epos];
        let exp: i32 = rendered_reference[epos + 1..].parse().unwrap_or(0);
        let decimals = mantissa.split('.').nth(1).map_or(0, str::len) as i32;
        0.5 * 10f64.powi(exp - decimals)
    } else {
        let decimals = rendered_reference.split('.').nth(1).map_or(0, str::len) as i32;
        0.5 * 10f64.powi(-decimals)
    };
    let v = value.to_f64().unwrap_or(f64::NAN);
    (v - reference).abs() <= precision
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rational;
    use crate::words::Letter::{X, Y};

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    /// Frozen exact values computed by two independent routes (a dictionary
    /// construction over `fractions` and a noncommutative-symbol expansion);
    /// the in-repo certificates are the generic-series cross-check below, the
    /// primitivity oracle, and the re-expansion identity.
    const EXPECTED_A: [(i64, i64); 12] = [
        (2, 1),
        (1, 1),
        (2, 3),
        (1, 4),
        (11, 45),
        (41, 360),
        (31, 315),
        (199, 4032),
        (1253, 32400),
        (11899, 604800),
        (520517, 29937600),
        (429791, 47900160),
    ];

    const EXPECTED_B: [(i64, i64); 12] = [
        (2, 1),
        (1, 2),
        (1, 6),
        (1, 24),
        (1, 40),
        (7, 720),
        (193, 30240),
        (349, 120960),
        (773, 302400),
        (239, 172800),
        (148483, 79833600),
        (487189, 479001600),
    ];

    #[test]
    fn low_degree_components_are_classical() {
        let exp = BchExpansion::compute(3).unwrap();
        let z1 = exp.homogeneous_series(1).unwrap();
        assert_eq!(z1.coefficient(&w("X")), rational(1, 1));
        assert_eq!(z1.coefficient(&w("Y")), rational(1, 1));
        assert_eq!(z1.term_count(), 2);

        let z2 = exp.homogeneous_series(2).unwrap();
        assert_eq!(z2.coefficient(&w("XY")), rational(1, 2));
        assert_eq!(z2.coefficient(&w("YX")), rational(-1, 2));
        assert_eq!(z2.term_count(), 2);

        let z3 = exp.homogeneous_series(3).unwrap();
        assert_eq!(z3.coefficient(&w("XXY")), rational(1, 12));
        assert_eq!(z3.coefficient(&w("XYX")), rational(-1, 6));
        assert_eq!(z3.coefficient(&w("YXY")), rational(-1, 6));
        assert_eq!(z3.coefficient(&w("YYX")), rational(1, 12));
    }

    #[test]
    fn pipeline_matches_generic_series_route() {
        // Independent route: the public exp/log/mul over big rationals.
        let d = 8;
        let x = FreeSeries::generator(X, d);
        let y = FreeSeries::generator(Y, d);
        let generic = x.exp().unwrap().mul(&y.exp().unwrap()).unwrap().log().unwrap();
        assert_eq!(bch_series(d).unwrap(), generic);
    }

    #[test]
    fn coefficient_sums_match_frozen_oracle_values() {
        let exp = BchExpansion::compute(12).unwrap();
        for (i, (num, den)) in EXPECTED_A.iter().enumerate() {
            let n = i + 1;
            assert_eq!(exp.associative_sum(n).unwrap(), rational(*num, *den), "A_{n}");
        }
        for (i, (num, den)) in EXPECTED_B.iter().enumerate() {
            let n = i + 1;
            let proj = lie_project(&exp.homogeneous_series(n).unwrap()).unwrap();
            assert_eq!(proj.sum(), rational(*num, *den), "B_{n}");
        }
    }

    #[test]
    fn signed_sums_vanish_beyond_degree_one() {
        // Z maps to X + Y under the commutative quotient.
        let exp = BchExpansion::compute(12).unwrap();
        for n in 2..=12 {
            assert!(exp.signed_sum(n).unwrap().is_zero(), "degree {n}");
        }
    }

    #[test]
    fn swap_symmetry_holds_throughout() {
        let exp = BchExpansion::compute(12).unwrap();
        for n in 1..=12 {
            assert!(exp.swap_symmetry_holds(n).unwrap(), "degree {n}");
        }
    }

    #[test]
    fn primitivity_oracle_agrees_with_generic_route() {
        let exp = BchExpansion::compute(8).unwrap();
        for n in 1..=8 {
            let fast = exp.primitivity_defect(n).unwrap();
            let generic = exp.homogeneous_series(n).unwrap().primitivity_defect().unwrap();
            assert_eq!(fast, generic, "degree {n}");
            assert!(fast.is_zero(), "degree {n}");
        }
    }

    #[test]
    fn projection_examples() {
        let exp = BchExpansion::compute(3).unwrap();
        let p1 = lie_project(&exp.homogeneous_series(1).unwrap()).unwrap();
        assert_eq!(p1.coordinate(&w("X")), rational(1, 1));
        assert_eq!(p1.coordinate(&w("Y")), rational(1, 1));

        let p2 = lie_project(&exp.homogeneous_series(2).unwrap()).unwrap();
        assert_eq!(p2.coordinate(&w("XY")), rational(1, 2));
        assert_eq!(p2.len(), 1);

        let p3 = lie_project(&exp.homogeneous_series(3).unwrap()).unwrap();
        assert_eq!(p3.coordinate(&w("XXY")), rational(1, 12));
        assert_eq!(p3.coordinate(&w("XYY")), rational(1, 12));
        assert_eq!(p3.len(), 2);
        assert_eq!(p3.sum(), rational(1, 6));
    }

    #[test]
    fn projection_rejects_non_lie_input() {
        let not_lie = FreeSeries::from_terms(2, [(w("XY"), rational(1, 1))]).unwrap();
        assert!(matches!(lie_project(&not_lie), Err(Error::NotLieElement { .. })));
    }

    #[test]
    fn reexpansion_reproduces_components() {
        let exp = BchExpansion::compute(10).unwrap();
        for n in 1..=10 {
            let zn = exp.homogeneous_series(n).unwrap();
            let proj = lie_project(&zn).unwrap();
            assert_eq!(proj.expand().unwrap(), zn, "degree {n}");
        }
    }

    #[test]
    fn catalan_values() {
        let c: Vec<u64> = (0..10).map(|n| catalan(n).to_u64().unwrap()).collect();
        assert_eq!(c, [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862]);
        assert_eq!(catalan_bound(10).unwrap(), rational(262144, 10));
    }

    #[test]
    fn catalan_convolution() {
        assert!(catalan_convolution_holds(2));
        assert!(catalan_convolution_holds(5));
        for n in 2..=64 {
            assert!(catalan_convolution_holds(n), "n = {n}");
        }
        assert!(!catalan_convolution_holds(1));
    }

    #[test]
    fn generating_function_partial_sums() {
        let t = rational(1, 5);
        let check = catalan_generating_check(&t, 60);
        assert!(check.gap < 1e-6, "gap {}", check.gap);
        assert!(check.gap < (0.8f64).powi(60), "gap {}", check.gap);
    }

    #[test]
    fn dynkin_bound_examples() {
        let exp = BchExpansion::compute(8).unwrap();
        let d1 = dynkin_bound_check(&exp, 1).unwrap();
        assert_eq!(d1.lie_sum, rational(2, 1));
        assert_eq!(d1.catalan, BigInt::from(1));
        assert!(!d1.holds);

        let d3 = dynkin_bound_check(&exp, 3).unwrap();
        assert_eq!(d3.lie_sum, rational(1, 6));
        assert_eq!(d3.catalan, BigInt::from(2));
        assert!(d3.holds);

        let d8 = dynkin_bound_check(&exp, 8).unwrap();
        assert_eq!(d8.catalan, BigInt::from(429));
        assert!(d8.holds);
    }

    #[test]
    fn displayed_recursion_disagrees_past_degree_one() {
        let exp = BchExpansion::compute(6).unwrap();
        for n in 2..=6 {
            assert!(!dynkin_recursion_agrees(&exp, n).unwrap(), "degree {n}");
        }
    }

    #[test]
    fn table_rows_and_reference_comparison() {
        let rows = coefficient_table(6, 6).unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[1].a_dec(), "1.0000");
        assert_eq!(rows[2].b_dec().unwrap(), "0.1667");
        assert_eq!(rows[2].catalan_dec(), "5.3333");
        // rows 1..3 agree with the published table, row 4 does not
        assert!(matches_reference(REFERENCE_A_DEC4[2], &rows[2].a));
        assert!(!matches_reference(REFERENCE_A_DEC4[3], &rows[3].a));
        assert!(matches_reference(REFERENCE_B_DEC[2], rows[2].b.as_ref().unwrap()));
        assert!(!matches_reference(REFERENCE_B_DEC[3], rows[3].b.as_ref().unwrap()));
    }

    #[test]
    fn degree_cap_is_enforced() {
        assert!(matches!(
            BchExpansion::compute(MAX_SUPPORTED_DEGREE + 1),
            Err(Error::DegreeRange { .. })
        ));
        assert!(BchExpansion::compute(0).is_err());
    }
}
