//! Lyndon-word combinatorics on the two-letter alphabet {X, Y}.
//!
//! Words are packed one bit per letter (X = 0, Y = 1, first letter in the
//! highest bit), which keeps full enumerations up to degree 20 cheap. The
//! total order is length first, then lexicographic with X < Y; on equal
//! lengths this coincides with the numeric order of the packed bits.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Longest representable word; packed into a `u64`.
pub const MAX_WORD_LEN: usize = 63;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Letter {
    X,
    Y,
}

impl Letter {
    fn bit(self) -> u64 {
        match self {
            Letter::X => 0,
            Letter::Y => 1,
        }
    }

    fn from_bit(b: u64) -> Letter {
        if b == 0 {
            Letter::X
        } else {
            Letter::Y
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::X => write!(f, "X"),
            Letter::Y => write!(f, "Y"),
        }
    }
}

/// A finite word over {X, Y}. The empty word is permitted and unique.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Word {
    len: u8,
    bits: u64,
}

impl Word {
    pub fn empty() -> Word {
        Word { len: 0, bits: 0 }
    }

    pub fn single(l: Letter) -> Word {
        Word { len: 1, bits: l.bit() }
    }

    /// Builds the word of length `len` whose packed bits are `bits`
    /// (first letter = most significant of the low `len` bits).
    pub fn from_index(len: usize, bits: u64) -> Word {
        assert!(len <= MAX_WORD_LEN);
        debug_assert!(len == MAX_WORD_LEN || bits < (1u64 << len));
        Word { len: len as u8, bits }
    }

    pub fn from_letters(letters: &[Letter]) -> Result<Word> {
        if letters.len() > MAX_WORD_LEN {
            return Err(Error::InvalidArgument(format!(
                "word length {} exceeds maximum {MAX_WORD_LEN}",
                letters.len()
            )));
        }
        let mut bits = 0u64;
        for l in letters {
            bits = (bits << 1) | l.bit();
        }
        Ok(Word { len: letters.len() as u8, bits })
    }

    pub fn parse(s: &str) -> Result<Word> {
        let mut letters = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                'X' => letters.push(Letter::X),
                'Y' => letters.push(Letter::Y),
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "unexpected character {c:?} in word (expected X or Y)"
                    )))
                }
            }
        }
        Word::from_letters(&letters)
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Packed bit representation (first letter = most significant bit).
    pub fn bits(&self) -> u64 {
        self.bits
    }

    /// Letter at position `i`, counted from the left starting at 0.
    pub fn letter(&self, i: usize) -> Letter {
        debug_assert!(i < self.len());
        Letter::from_bit((self.bits >> (self.len() - 1 - i)) & 1)
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.len()).map(move |i| self.letter(i))
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        let len = self.len() + other.len();
        if len > MAX_WORD_LEN {
            return Err(Error::InvalidArgument(format!(
                "concatenated length {len} exceeds maximum {MAX_WORD_LEN}"
            )));
        }
        Ok(Word {
            len: len as u8,
            bits: (self.bits << other.len()) | other.bits,
        })
    }

    /// Suffix starting at position `i` (so `suffix(0)` is the word itself).
    pub fn suffix(&self, i: usize) -> Word {
        debug_assert!(i <= self.len());
        let len = self.len() - i;
        Word {
            len: len as u8,
            bits: self.bits & low_mask(len),
        }
    }

    /// Prefix consisting of the first `i` letters.
    pub fn prefix(&self, i: usize) -> Word {
        debug_assert!(i <= self.len());
        Word {
            len: i as u8,
            bits: self.bits >> (self.len() - i),
        }
    }

    /// The word with X and Y exchanged.
    pub fn swap_letters(&self) -> Word {
        Word {
            len: self.len,
            bits: self.bits ^ low_mask(self.len()),
        }
    }

    /// Pure lexicographic comparison (a proper prefix precedes its extensions),
    /// independent of the length-first total order implemented by `Ord`.
    pub fn lex_cmp(&self, other: &Word) -> Ordering {
        let common = self.len().min(other.len());
        for i in 0..common {
            match (self.letter(i).bit()).cmp(&other.letter(i).bit()) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.len().cmp(&other.len())
    }

    /// Lyndon property: strictly smaller (lexicographically) than every
    /// proper suffix.
    pub fn is_lyndon(&self) -> bool {
        if self.is_empty() {
            return false;
        }
        (1..self.len()).all(|i| self.lex_cmp(&self.suffix(i)) == Ordering::Less)
    }
}

fn low_mask(len: usize) -> u64 {
    if len == 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        // Length first, then lexicographic; bits compare lexicographically
        // on equal lengths because the first letter sits in the top bit.
        self.len.cmp(&other.len).then(self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "ε");
        }
        for l in self.letters() {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Full binary bracketing tree; the foliage of the bracketing of a Lyndon
/// word reproduces that word.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum BracketTree {
    Leaf(Letter),
    Node(Box<BracketTree>, Box<BracketTree>),
}

impl BracketTree {
    pub fn degree(&self) -> usize {
        match self {
            BracketTree::Leaf(_) => 1,
            BracketTree::Node(l, r) => l.degree() + r.degree(),
        }
    }

    /// Left-to-right sequence of leaves.
    pub fn foliage(&self) -> Word {
        fn collect(t: &BracketTree, out: &mut Vec<Letter>) {
            match t {
                BracketTree::Leaf(l) => out.push(*l),
                BracketTree::Node(a, b) => {
                    collect(a, out);
                    collect(b, out);
                }
            }
        }
        let mut letters = Vec::with_capacity(self.degree());
        collect(self, &mut letters);
        Word::from_letters(&letters).expect("foliage length bounded by tree degree")
    }
}

impl fmt::Display for BracketTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BracketTree::Leaf(l) => write!(f, "{l}"),
            BracketTree::Node(a, b) => write!(f, "[{a},{b}]"),
        }
    }
}

/// All Lyndon words of length exactly `n`, lexicographically sorted,
/// generated by Duval's algorithm.
pub fn lyndon_words(n: usize) -> Result<Vec<Word>> {
    if n == 0 || n > MAX_WORD_LEN {
        return Err(Error::DegreeRange { degree: n, max: MAX_WORD_LEN });
    }
    let mut out = Vec::new();
    let mut w: Vec<u8> = vec![0];
    loop {
        if w.len() == n {
            let letters: Vec<Letter> = w.iter().map(|&b| Letter::from_bit(b as u64)).collect();
            out.push(Word::from_letters(&letters)?);
        }
        let period = w.len();
        while w.len() < n {
            w.push(w[w.len() % period]);
        }
        while w.last() == Some(&1) {
            w.pop();
        }
        if w.is_empty() {
            break;
        }
        *w.last_mut().unwrap() = 1;
    }
    Ok(out)
}

/// Standard factorization w = uv of a Lyndon word of length >= 2, with v the
/// longest proper Lyndon suffix. Both factors are Lyndon and u < v.
pub fn standard_factorization(w: &Word) -> Result<(Word, Word)> {
    if w.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "standard factorization needs length >= 2, got {:?}",
            w
        )));
    }
    if !w.is_lyndon() {
        return Err(Error::InvalidArgument(format!("{w} is not a Lyndon word")));
    }
    for i in 1..w.len() {
        let v = w.suffix(i);
        if v.is_lyndon() {
            return Ok((w.prefix(i), v));
        }
    }
    // the length-1 suffix is always Lyndon
    unreachable!("every word has a Lyndon suffix");
}

/// Right-standard bracketing of a Lyndon word: a leaf for single letters,
/// otherwise the node on the bracketings of the standard factorization.
pub fn lyndon_bracketing(w: &Word) -> Result<BracketTree> {
    if !w.is_lyndon() {
        return Err(Error::InvalidArgument(format!("{w} is not a Lyndon word")));
    }
    if w.len() == 1 {
        return Ok(BracketTree::Leaf(w.letter(0)));
    }
    let (u, v) = standard_factorization(w)?;
    Ok(BracketTree::Node(
        Box::new(lyndon_bracketing(&u)?),
        Box::new(lyndon_bracketing(&v)?),
    ))
}

/// Dimension of the degree-n component of the free Lie algebra on two
/// generators: (1/n) * sum over d | n of mu(d) * 2^(n/d).
pub fn witt_dimension(n: usize) -> Result<u64> {
    if n == 0 || n > MAX_WORD_LEN {
        return Err(Error::DegreeRange { degree: n, max: MAX_WORD_LEN });
    }
    let mut sum: i128 = 0;
    for d in 1..=n {
        if n.is_multiple_of(d) {
            sum += i128::from(mobius(d as u64)) * (1i128 << (n / d));
        }
    }
    debug_assert!(sum > 0 && sum % n as i128 == 0);
    Ok((sum / n as i128) as u64)
}

fn mobius(mut n: u64) -> i8 {
    let mut primes = 0u32;
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            primes += 1;
        }
        p += 1;
    }
    if n > 1 {
        primes += 1;
    }
    if primes.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    /// Brute-force oracle: enumerate all 2^n words and test the Lyndon
    /// property by direct suffix comparison.
    fn lyndon_brute(n: usize) -> Vec<Word> {
        (0..(1u64 << n))
            .map(|bits| Word::from_index(n, bits))
            .filter(|w| w.is_lyndon())
            .collect()
    }

    /// Suffix-enumeration oracle for the standard factorization: the longest
    /// proper suffix that is itself Lyndon.
    fn factorization_brute(word: &Word) -> (Word, Word) {
        for i in 1..word.len() {
            if word.suffix(i).is_lyndon() {
                return (word.prefix(i), word.suffix(i));
            }
        }
        unreachable!()
    }

    #[test]
    fn word_order_is_length_then_lex() {
        let mut v = [w("YX"), w("X"), w("Y"), w("XY"), w("XXX")];
        v.sort();
        let printed: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        assert_eq!(printed, ["X", "Y", "XY", "YX", "XXX"]);
    }

    #[test]
    fn lyndon_words_small_degrees() {
        let l1: Vec<String> = lyndon_words(1).unwrap().iter().map(|x| x.to_string()).collect();
        assert_eq!(l1, ["X", "Y"]);
        let l2: Vec<String> = lyndon_words(2).unwrap().iter().map(|x| x.to_string()).collect();
        assert_eq!(l2, ["XY"]);
        let l5 = lyndon_words(5).unwrap();
        assert_eq!(l5.len(), 6);
        let printed: Vec<String> = l5.iter().map(|x| x.to_string()).collect();
        assert_eq!(printed, ["XXXXY", "XXXYY", "XXYXY", "XXYYY", "XYXYY", "XYYYY"]);
    }

    #[test]
    fn lyndon_words_match_brute_force_and_witt() {
        for n in 1..=12 {
            let duval = lyndon_words(n).unwrap();
            assert_eq!(duval, lyndon_brute(n), "degree {n}");
            assert_eq!(duval.len() as u64, witt_dimension(n).unwrap(), "degree {n}");
            for word in &duval {
                assert!(word.is_lyndon());
            }
            let mut sorted = duval.clone();
            sorted.sort();
            assert_eq!(sorted, duval, "lex order at degree {n}");
        }
    }

    #[test]
    fn witt_dimensions() {
        assert_eq!(witt_dimension(1).unwrap(), 2);
        assert_eq!(witt_dimension(2).unwrap(), 1);
        assert_eq!(witt_dimension(6).unwrap(), 9);
        assert_eq!(witt_dimension(12).unwrap(), 335);
        assert_eq!(witt_dimension(20).unwrap(), 52377);
        assert!(witt_dimension(0).is_err());
    }

    #[test]
    fn standard_factorization_examples() {
        assert_eq!(standard_factorization(&w("XXY")).unwrap(), (w("X"), w("XY")));
        assert_eq!(standard_factorization(&w("XY")).unwrap(), (w("X"), w("Y")));
        assert_eq!(standard_factorization(&w("XYY")).unwrap(), (w("XY"), w("Y")));
        assert_eq!(standard_factorization(&w("XXYXY")).unwrap(), (w("XXY"), w("XY")));
    }

    #[test]
    fn standard_factorization_rejects_bad_input() {
        assert!(standard_factorization(&w("X")).is_err());
        assert!(standard_factorization(&w("YX")).is_err());
        assert!(lyndon_bracketing(&w("YX")).is_err());
    }

    #[test]
    fn standard_factorization_matches_suffix_enumeration() {
        for n in 2..=12 {
            for word in lyndon_words(n).unwrap() {
                let (u, v) = standard_factorization(&word).unwrap();
                assert_eq!((u, v), factorization_brute(&word), "{word}");
                assert!(u.is_lyndon() && v.is_lyndon());
                assert_eq!(u.lex_cmp(&v), Ordering::Less);
                assert_eq!(u.concat(&v).unwrap(), word);
            }
        }
    }

    #[test]
    fn bracketing_examples_and_foliage() {
        assert_eq!(lyndon_bracketing(&w("X")).unwrap(), BracketTree::Leaf(Letter::X));
        assert_eq!(lyndon_bracketing(&w("XXY")).unwrap().to_string(), "[X,[X,Y]]");
        assert_eq!(lyndon_bracketing(&w("XYY")).unwrap().to_string(), "[[X,Y],Y]");
        for n in 1..=12 {
            for word in lyndon_words(n).unwrap() {
                assert_eq!(lyndon_bracketing(&word).unwrap().foliage(), word);
            }
        }
    }

    #[test]
    fn swap_and_slices() {
        assert_eq!(w("XXY").swap_letters(), w("YYX"));
        assert_eq!(w("XYXYY").suffix(2), w("XYY"));
        assert_eq!(w("XYXYY").prefix(2), w("XY"));
        assert_eq!(w("XY").concat(&w("Y")).unwrap(), w("XYY"));
        assert_eq!(Word::empty().to_string(), "ε");
    }
}
