//! Degree-truncated formal series in two noncommuting variables with exact
//! rational coefficients.
//!
//! Every series carries its truncation degree and every product enforces it,
//! so degree overflow cannot happen silently. Coefficients are arbitrary-
//! precision rationals in lowest terms; the sparse map never stores a zero.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::{BigRational, One, Signed, Zero};

use crate::error::{Error, Result};
use crate::words::{Letter, Word};

/// Exact coefficient type: arbitrary-precision rational, always reduced,
/// positive denominator.
pub type Rational = BigRational;

pub fn rational(numer: i64, denom: i64) -> Rational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Nearest double of an exact rational (NaN only for absurd magnitudes).
pub fn rational_to_f64(r: &Rational) -> f64 {
    use num::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Words of length beyond this are rejected by the primitivity oracle
/// (the subset enumeration is 2^len per word).
const MAX_COPRODUCT_LEN: usize = 24;

#[derive(Clone, PartialEq, Eq)]
pub struct FreeSeries {
    max_degree: usize,
    terms: BTreeMap<Word, Rational>,
}

impl FreeSeries {
    pub fn zero(max_degree: usize) -> FreeSeries {
        FreeSeries { max_degree, terms: BTreeMap::new() }
    }

    pub fn one(max_degree: usize) -> FreeSeries {
        let mut s = FreeSeries::zero(max_degree);
        s.terms.insert(Word::empty(), Rational::one());
        s
    }

    pub fn generator(l: Letter, max_degree: usize) -> FreeSeries {
        let mut s = FreeSeries::zero(max_degree);
        if max_degree >= 1 {
            s.terms.insert(Word::single(l), Rational::one());
        }
        s
    }

    pub fn from_terms<I>(max_degree: usize, terms: I) -> Result<FreeSeries>
    where
        I: IntoIterator<Item = (Word, Rational)>,
    {
        let mut s = FreeSeries::zero(max_degree);
        for (w, c) in terms {
            if w.len() > max_degree {
                return Err(Error::DegreeRange { degree: w.len(), max: max_degree });
            }
            s.add_term(w, c);
        }
        Ok(s)
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &Word) -> Rational {
        self.terms.get(w).cloned().unwrap_or_else(Rational::zero)
    }

    fn add_term(&mut self, w: Word, c: Rational) {
        if c.is_zero() || w.len() > self.max_degree {
            return;
        }
        let entry = self.terms.entry(w).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&w);
        }
    }

    fn check_same_truncation(&self, other: &FreeSeries) -> Result<()> {
        if self.max_degree != other.max_degree {
            return Err(Error::TruncationMismatch {
                left: self.max_degree,
                right: other.max_degree,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &FreeSeries) -> Result<FreeSeries> {
        self.check_same_truncation(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(*w, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &FreeSeries) -> Result<FreeSeries> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> FreeSeries {
        FreeSeries {
            max_degree: self.max_degree,
            terms: self.terms.iter().map(|(w, c)| (*w, -c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> FreeSeries {
        if k.is_zero() {
            return FreeSeries::zero(self.max_degree);
        }
        FreeSeries {
            max_degree: self.max_degree,
            terms: self.terms.iter().map(|(w, c)| (*w, c * k)).collect(),
        }
    }

    /// Concatenation product truncated at the carried degree.
    pub fn mul(&self, other: &FreeSeries) -> Result<FreeSeries> {
        self.check_same_truncation(other)?;
        let mut out = FreeSeries::zero(self.max_degree);
        for (wa, ca) in &self.terms {
            if wa.len() > self.max_degree {
                continue;
            }
            for (wb, cb) in &other.terms {
                if wa.len() + wb.len() > self.max_degree {
                    break; // BTreeMap iterates by (len, bits), so lengths ascend
                }
                out.add_term(wa.concat(wb)?, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &FreeSeries) -> Result<FreeSeries> {
        self.mul(other)?.sub(&other.mul(self)?)
    }

    /// exp(a) = sum a^k / k!, requires zero constant term. Evaluated by
    /// Horner nesting so only max_degree products are taken.
    pub fn exp(&self) -> Result<FreeSeries> {
        if !self.coefficient(&Word::empty()).is_zero() {
            return Err(Error::InvalidArgument(
                "series exponential requires a zero constant term".into(),
            ));
        }
        let one = FreeSeries::one(self.max_degree);
        let mut acc = one.clone();
        for k in (1..=self.max_degree).rev() {
            let scaled = self.mul(&acc)?.scale(&BigRational::new(
                BigInt::one(),
                BigInt::from(k as i64),
            ));
            acc = one.add(&scaled)?;
        }
        Ok(acc)
    }

    /// log(a) for a with constant term exactly 1, as the alternating series
    /// in (a - 1), Horner-nested.
    pub fn log(&self) -> Result<FreeSeries> {
        if self.coefficient(&Word::empty()) != Rational::one() {
            return Err(Error::InvalidArgument(
                "series logarithm requires constant term exactly 1".into(),
            ));
        }
        let u = self.sub(&FreeSeries::one(self.max_degree))?;
        if self.max_degree == 0 {
            return Ok(FreeSeries::zero(0));
        }
        let mut acc = FreeSeries::one(self.max_degree)
            .scale(&BigRational::new(BigInt::one(), BigInt::from(self.max_degree as i64)));
        for k in (1..self.max_degree).rev() {
            let constant = FreeSeries::one(self.max_degree)
                .scale(&BigRational::new(BigInt::one(), BigInt::from(k as i64)));
            acc = constant.sub(&u.mul(&acc)?)?;
        }
        u.mul(&acc)
    }

    /// The same series carried at a different truncation degree; terms beyond
    /// the new degree are dropped.
    pub fn with_truncation(&self, max_degree: usize) -> FreeSeries {
        FreeSeries {
            max_degree,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() <= max_degree)
                .map(|(w, c)| (*w, c.clone()))
                .collect(),
        }
    }

    /// Restriction to words of length exactly `n` (same truncation carried).
    pub fn homogeneous_component(&self, n: usize) -> Result<FreeSeries> {
        if n > self.max_degree {
            return Err(Error::DegreeRange { degree: n, max: self.max_degree });
        }
        Ok(FreeSeries {
            max_degree: self.max_degree,
            terms: self
                .terms
                .iter()
                .filter(|(w, _)| w.len() == n)
                .map(|(w, c)| (*w, c.clone()))
                .collect(),
        })
    }

    pub fn is_homogeneous(&self, n: usize) -> bool {
        self.terms.keys().all(|w| w.len() == n)
    }

    /// Lowest degree with a nonzero homogeneous component, if any.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let first = self.terms.keys().next()?.len();
        self.is_homogeneous(first).then_some(first)
    }

    pub fn l1_norm(&self) -> Rational {
        let mut sum = Rational::zero();
        for c in self.terms.values() {
            sum += c.abs();
        }
        sum
    }

    /// Friedrichs primitivity oracle. Computes the unshuffle coproduct defect
    /// Δ(a) - a⊗1 - 1⊗a on a sparse pair-of-words map and returns the l1 mass
    /// of the result, which is zero exactly when `a` is a Lie element.
    pub fn primitivity_defect(&self) -> Result<Rational> {
        if !self.coefficient(&Word::empty()).is_zero() {
            return Err(Error::InvalidArgument(
                "primitivity oracle requires a zero constant term".into(),
            ));
        }
        let mut pairs: BTreeMap<(Word, Word), Rational> = BTreeMap::new();
        for (w, c) in &self.terms {
            let n = w.len();
            if n > MAX_COPRODUCT_LEN {
                return Err(Error::InvalidArgument(format!(
                    "primitivity oracle supports words up to length {MAX_COPRODUCT_LEN}, got {n}"
                )));
            }
            // Middle coproduct terms only: the full-subset and empty-subset
            // splits are exactly a⊗1 and 1⊗a, which the defect subtracts.
            for mask in 1..((1u64 << n) - 1) {
                let mut left = 0u64;
                let mut right = 0u64;
                let mut left_len = 0usize;
                for i in 0..n {
                    let bit = (w.bits() >> (n - 1 - i)) & 1;
                    if (mask >> (n - 1 - i)) & 1 == 1 {
                        left = (left << 1) | bit;
                        left_len += 1;
                    } else {
                        right = (right << 1) | bit;
                    }
                }
                let key = (
                    Word::from_index(left_len, left),
                    Word::from_index(n - left_len, right),
                );
                let entry = pairs.entry(key).or_insert_with(Rational::zero);
                *entry += c;
                if entry.is_zero() {
                    pairs.remove(&key);
                }
            }
        }
        let mut defect = Rational::zero();
        for c in pairs.values() {
            defect += c.abs();
        }
        Ok(defect)
    }
}

impl fmt::Display for FreeSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if w.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "{c}*{w}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FreeSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FreeSeries(deg<={}; {})", self.max_degree, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Letter::{X, Y};

    fn x(d: usize) -> FreeSeries {
        FreeSeries::generator(X, d)
    }

    fn y(d: usize) -> FreeSeries {
        FreeSeries::generator(Y, d)
    }

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn add_cancels_to_canonical_form() {
        let a = FreeSeries::from_terms(4, [(w("XY"), rational(1, 2))]).unwrap();
        let b = FreeSeries::from_terms(4, [(w("XY"), rational(-1, 2))]).unwrap();
        let sum = a.add(&b).unwrap();
        assert!(sum.is_zero());
        assert_eq!(sum.term_count(), 0);

        let two_x = x(4).add(&y(4)).unwrap().add(&x(4)).unwrap();
        assert_eq!(two_x.coefficient(&w("X")), rational(2, 1));
        assert_eq!(two_x.coefficient(&w("Y")), rational(1, 1));
    }

    #[test]
    fn add_rejects_mismatched_truncation() {
        assert!(matches!(
            x(3).add(&x(4)),
            Err(Error::TruncationMismatch { left: 3, right: 4 })
        ));
    }

    #[test]
    fn mul_examples() {
        let xy = x(4).mul(&y(4)).unwrap();
        assert_eq!(xy.coefficient(&w("XY")), rational(1, 1));
        assert_eq!(xy.term_count(), 1);

        let s = x(4).add(&y(4)).unwrap();
        let sq = s.mul(&s).unwrap();
        for word in ["XX", "XY", "YX", "YY"] {
            assert_eq!(sq.coefficient(&w(word)), rational(1, 1), "{word}");
        }

        let a = FreeSeries::one(4).add(&x(4)).unwrap();
        let b = FreeSeries::one(4).add(&y(4)).unwrap();
        let prod = a.mul(&b).unwrap();
        assert_eq!(prod.coefficient(&Word::empty()), rational(1, 1));
        assert_eq!(prod.coefficient(&w("X")), rational(1, 1));
        assert_eq!(prod.coefficient(&w("Y")), rational(1, 1));
        assert_eq!(prod.coefficient(&w("XY")), rational(1, 1));
        assert_eq!(prod.term_count(), 4);
    }

    #[test]
    fn mul_truncates_at_max_degree() {
        let s = x(2).mul(&x(2)).unwrap().mul(&x(2)).unwrap();
        assert!(s.is_zero());
    }

    #[test]
    fn exp_examples() {
        assert_eq!(FreeSeries::zero(3).exp().unwrap(), FreeSeries::one(3));
        let ex = x(2).exp().unwrap();
        assert_eq!(ex.coefficient(&Word::empty()), rational(1, 1));
        assert_eq!(ex.coefficient(&w("X")), rational(1, 1));
        assert_eq!(ex.coefficient(&w("XX")), rational(1, 2));
        let exy = x(2).add(&y(2)).unwrap().exp().unwrap();
        assert_eq!(exy.coefficient(&w("XY")), rational(1, 2));
        assert!(x(2).add(&FreeSeries::one(2)).unwrap().exp().is_err());
    }

    #[test]
    fn log_examples() {
        assert!(FreeSeries::one(5).log().unwrap().is_zero());
        assert!(x(5).log().is_err());
        // round trip at full truncation
        for d in 1..=6 {
            let e = x(d).exp().unwrap();
            assert_eq!(e.log().unwrap(), x(d), "degree {d}");
        }
        // degree-2 coefficients of log(e^X e^Y)
        let z = x(6)
            .exp()
            .unwrap()
            .mul(&y(6).exp().unwrap())
            .unwrap()
            .log()
            .unwrap();
        assert_eq!(z.coefficient(&w("XY")), rational(1, 2));
        assert_eq!(z.coefficient(&w("YX")), rational(-1, 2));
    }

    #[test]
    fn homogeneous_components() {
        let s = FreeSeries::from_terms(
            4,
            [
                (w("X"), rational(1, 1)),
                (w("Y"), rational(1, 1)),
                (w("XY"), rational(1, 2)),
            ],
        )
        .unwrap();
        let c1 = s.homogeneous_component(1).unwrap();
        assert_eq!(c1.term_count(), 2);
        let c2 = s.homogeneous_component(2).unwrap();
        assert_eq!(c2.coefficient(&w("XY")), rational(1, 2));
        assert_eq!(c2.term_count(), 1);
        assert!(s.homogeneous_component(3).unwrap().is_zero());
        assert!(s.homogeneous_component(5).is_err());
    }

    #[test]
    fn primitivity_defect_examples() {
        // letters are primitive
        assert_eq!(x(3).primitivity_defect().unwrap(), rational(0, 1));
        // the word XY has defect X⊗Y + Y⊗X, total l1 mass 2
        let xy = FreeSeries::from_terms(2, [(w("XY"), rational(1, 1))]).unwrap();
        assert_eq!(xy.primitivity_defect().unwrap(), rational(2, 1));
        // commutators are primitive
        let comm = FreeSeries::from_terms(
            2,
            [(w("XY"), rational(1, 2)), (w("YX"), rational(-1, 2))],
        )
        .unwrap();
        assert_eq!(comm.primitivity_defect().unwrap(), rational(0, 1));
        // nonzero constant term rejected
        assert!(FreeSeries::one(2).primitivity_defect().is_err());
    }
}
