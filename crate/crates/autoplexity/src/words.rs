//! Finite words over small alphabets and their power structure.
//!
//! Letters are small integers `0..σ`; textual I/O uses the digit
//! characters `'0'`, `'1'`, `'2'`, …. All predicates are direct
//! `O(n²)` period scans: words stay short enough that no suffix
//! structure machinery is warranted.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("letter {letter} is not below the alphabet size {sigma}")]
    LetterOutOfRange { letter: u8, sigma: u8 },
    #[error("invalid character {0:?} in word (expected digits)")]
    InvalidCharacter(char),
    #[error("operation requires a binary alphabet, got sigma = {0}")]
    NotBinary(u8),
    #[error("inputs do not satisfy ab = ba\u{302}")]
    NotConjugable,
}

/// A finite word over the alphabet `{0, …, σ−1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<u8>,
    sigma: u8,
}

impl Word {
    /// Builds a word, checking every letter against the alphabet size.
    pub fn new(letters: Vec<u8>, sigma: u8) -> Result<Self, WordError> {
        if let Some(&letter) = letters.iter().find(|&&l| l >= sigma) {
            return Err(WordError::LetterOutOfRange { letter, sigma });
        }
        Ok(Word { letters, sigma })
    }

    /// The empty word over a binary alphabet.
    pub fn empty() -> Self {
        Word { letters: Vec::new(), sigma: 2 }
    }

    /// Parses a digit string, inferring `σ = max(max letter + 1, 2)`.
    pub fn parse(text: &str) -> Result<Self, WordError> {
        let mut letters = Vec::with_capacity(text.len());
        for c in text.chars() {
            let d = c.to_digit(10).ok_or(WordError::InvalidCharacter(c))? as u8;
            letters.push(d);
        }
        let sigma = letters.iter().copied().max().map_or(2, |m| (m + 1).max(2));
        Word::new(letters, sigma)
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn sigma(&self) -> u8 {
        self.sigma
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The word read backwards, over the same alphabet.
    pub fn reversed(&self) -> Self {
        let mut letters = self.letters.clone();
        letters.reverse();
        Word { letters, sigma: self.sigma }
    }

    /// Letterwise complement `a ↦ σ−1−a`.
    pub fn complemented(&self) -> Self {
        let letters = self.letters.iter().map(|&a| self.sigma - 1 - a).collect();
        Word { letters, sigma: self.sigma }
    }

    /// Contiguous subword `[start, end)`.
    pub fn slice(&self, start: usize, end: usize) -> Self {
        Word { letters: self.letters[start..end].to_vec(), sigma: self.sigma }
    }

    pub fn concat(&self, other: &Word) -> Self {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters, sigma: self.sigma.max(other.sigma) }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &a in &self.letters {
            write!(f, "{}", a)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word(\"{}\", sigma={})", self, self.sigma)
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Word::parse(s)
    }
}

/// Largest power exponent found in a word, with one witness occurrence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerReport {
    /// The maximal `k` such that some nonempty `u` has `u^k` as a subword.
    pub max_exponent: u32,
    /// `(start index, period length, exponent)` of a maximal power, absent
    /// for the empty word.
    pub witness: Option<(usize, usize, u32)>,
}

/// Set of total lengths `|xx|` of square subwords.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquareCensus {
    pub lengths: BTreeSet<usize>,
}

/// True iff `w` contains no subword `uu` with `u` nonempty.
///
/// Period scan: a square of period `p` exists iff some stretch of at
/// least `p` consecutive positions `j` satisfies `w[j] = w[j−p]`.
pub fn is_square_free(w: &Word) -> bool {
    let x = w.letters();
    let n = x.len();
    for p in 1..=n / 2 {
        let mut run = 0usize;
        for j in p..n {
            if x[j] == x[j - p] {
                run += 1;
                if run >= p {
                    return false;
                }
            } else {
                run = 0;
            }
        }
    }
    true
}

/// True iff `w` contains no weak cube `uu·first(u)`.
///
/// A weak cube of period `p` is a periodic stretch of length `2p+1`,
/// i.e. a run of `p+1` matching positions at distance `p`.
pub fn is_strongly_cube_free(w: &Word) -> bool {
    let x = w.letters();
    let n = x.len();
    for p in 1..=n / 2 {
        let mut run = 0usize;
        for j in p..n {
            if x[j] == x[j - p] {
                run += 1;
                if run > p {
                    return false;
                }
            } else {
                run = 0;
            }
        }
    }
    true
}

/// True iff every square subword of the binary word `w` is one of
/// `00`, `11`, `0101`.
pub fn is_almost_square_free(w: &Word) -> Result<bool, WordError> {
    if w.sigma() != 2 {
        return Err(WordError::NotBinary(w.sigma()));
    }
    let x = w.letters();
    let n = x.len();
    for start in 0..n {
        for p in 1..=(n - start) / 2 {
            if x[start..start + p] != x[start + p..start + 2 * p] {
                continue;
            }
            let allowed = match p {
                1 => true,                                 // 00 or 11
                2 => x[start] == 0 && x[start + 1] == 1,   // exactly 0101
                _ => false,
            };
            if !allowed {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Exponent of the highest power occurring in `w` (1 for any nonempty
/// word; 0 with no witness for the empty word).
pub fn max_power_index(w: &Word) -> PowerReport {
    let x = w.letters();
    let n = x.len();
    if n == 0 {
        return PowerReport { max_exponent: 0, witness: None };
    }
    let mut best = PowerReport { max_exponent: 1, witness: Some((0, 1, 1)) };
    for p in 1..=n / 2 {
        let mut run = 0usize;
        for j in p..n {
            if x[j] == x[j - p] {
                run += 1;
            } else {
                run = 0;
            }
            // A run of r matches at distance p makes a periodic stretch of
            // length r + p ending at j, hence a ((r + p) / p)-th power.
            let k = ((run + p) / p) as u32;
            if k > best.max_exponent {
                let power_len = (k as usize) * p;
                best = PowerReport { max_exponent: k, witness: Some((j + 1 - power_len, p, k)) };
            }
        }
    }
    best
}

/// All total lengths `|xx|` of square subwords of `w`.
pub fn square_lengths(w: &Word) -> SquareCensus {
    let x = w.letters();
    let n = x.len();
    let mut lengths = BTreeSet::new();
    for p in 1..=n / 2 {
        let mut run = 0usize;
        for j in p..n {
            if x[j] == x[j - p] {
                run += 1;
                if run >= p {
                    lengths.insert(2 * p);
                    break;
                }
            } else {
                run = 0;
            }
        }
    }
    SquareCensus { lengths }
}

/// Bit `b` of the Thue word: the parity of the binary digit sum of `b`.
pub fn thue_bit(b: u64) -> u8 {
    (b.count_ones() & 1) as u8
}

/// The length-`m` prefix `t_0 … t_{m−1}` of the Thue word.
pub fn thue_prefix(m: usize) -> Word {
    let letters = (0..m as u64).map(thue_bit).collect();
    Word { letters, sigma: 2 }
}

/// First `m` letters of the ternary square-free stream: the number of 1s
/// between consecutive 0s of the Thue word.
///
/// Every emitted prefix is square-free; this is asserted on the full
/// output (square-freeness is inherited by prefixes).
pub fn ternary_square_free_prefix(m: usize) -> Word {
    let mut letters = Vec::with_capacity(m);
    let mut ones = 0u8;
    let mut b = 1u64; // gaps start after the zero at position 0
    while letters.len() < m {
        if thue_bit(b) == 1 {
            ones += 1;
        } else {
            letters.push(ones);
            ones = 0;
        }
        b += 1;
    }
    let word = Word { letters, sigma: 3 };
    assert!(
        is_square_free(&word),
        "ternary stream produced a square at length {}",
        word.len()
    );
    word
}

/// Generates exactly the length-`target_len` words over `sigma` letters
/// satisfying `predicate`.
///
/// With `hereditary = true` the generation is a prefix-pruned depth-first
/// walk: a failing prefix is never extended, which is only sound when
/// violations persist under extension. With `hereditary = false` all
/// `sigma^target_len` words are generated and filtered.
pub fn enumerate_words<F>(predicate: F, sigma: u8, target_len: usize, hereditary: bool) -> Vec<Word>
where
    F: Fn(&Word) -> bool,
{
    let mut out = Vec::new();
    let mut current = Word { letters: Vec::with_capacity(target_len), sigma };
    fn walk<F: Fn(&Word) -> bool>(
        current: &mut Word,
        sigma: u8,
        target_len: usize,
        hereditary: bool,
        predicate: &F,
        out: &mut Vec<Word>,
    ) {
        if current.len() == target_len {
            if hereditary || predicate(current) {
                out.push(current.clone());
            }
            return;
        }
        for a in 0..sigma {
            current.letters.push(a);
            if !hereditary || predicate(current) {
                walk(current, sigma, target_len, hereditary, predicate, out);
            }
            current.letters.pop();
        }
    }
    if hereditary && !predicate(&current) {
        return out;
    }
    walk(&mut current, sigma, target_len, hereditary, &predicate, &mut out);
    out
}

/// Result of the Lyndon–Schützenberger decomposition for `ab = ba\u{302}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LsDecomposition {
    /// `a = a\u{302} = root^a_exp` and `b = root^b_exp`.
    Power { root: Word, a_exp: usize, b_exp: usize },
    /// `a = left·right` and `a\u{302} = right·left`; when `|a| ≥ |b|`,
    /// `left = b` so that `a = b·u` and `a\u{302} = u·b` with `u = right`.
    Shift { left: Word, right: Word },
}

/// Decomposes words satisfying `ab = ba\u{302}`.
pub fn ls_decompose(a: &Word, b: &Word, a_hat: &Word) -> Result<LsDecomposition, WordError> {
    if a.concat(b) != b.concat(a_hat) {
        return Err(WordError::NotConjugable);
    }
    if a == a_hat {
        // ab = ba forces a and b to be powers of a common root.
        let root = common_root(a, b);
        let a_exp = if root.is_empty() { 0 } else { a.len() / root.len() };
        let b_exp = if root.is_empty() { 0 } else { b.len() / root.len() };
        return Ok(LsDecomposition::Power { root, a_exp, b_exp });
    }
    if a.len() >= b.len() {
        let u = a.slice(b.len(), a.len());
        debug_assert_eq!(&b.concat(&u), a);
        debug_assert_eq!(&u.concat(b), a_hat);
        return Ok(LsDecomposition::Shift { left: b.clone(), right: u });
    }
    // |a| < |b| and a ≠ a\u{302}: peel the prefix a off b and recurse on the
    // shorter instance a·rest = rest·a\u{302}.
    let rest = b.slice(a.len(), b.len());
    match ls_decompose(a, &rest, a_hat)? {
        LsDecomposition::Power { root, a_exp, b_exp } => {
            // a = a\u{302} after all (possible when the recursion equalizes);
            // then b = a·rest is also a power of the same root.
            Ok(LsDecomposition::Power { root, a_exp, b_exp: a_exp + b_exp })
        }
        LsDecomposition::Shift { left, right } => Ok(LsDecomposition::Shift { left, right }),
    }
}

/// Shortest `c` with `a` and `b` both powers of `c`, given `ab = ba`.
fn common_root(a: &Word, b: &Word) -> Word {
    if a.is_empty() {
        return primitive_root(b);
    }
    if b.is_empty() {
        return primitive_root(a);
    }
    let g = gcd(a.len(), b.len());
    for d in 1..=g {
        if !g.is_multiple_of(d) {
            continue;
        }
        let c = a.slice(0, d);
        if is_power_of(a, &c) && is_power_of(b, &c) {
            return c;
        }
    }
    unreachable!("commuting nonempty words always share a root")
}

fn primitive_root(w: &Word) -> Word {
    if w.is_empty() {
        return w.clone();
    }
    for d in 1..=w.len() {
        if w.len().is_multiple_of(d) {
            let c = w.slice(0, d);
            if is_power_of(w, &c) {
                return c;
            }
        }
    }
    unreachable!()
}

fn is_power_of(w: &Word, c: &Word) -> bool {
    !c.is_empty()
        && w.len().is_multiple_of(c.len())
        && w.letters().chunks(c.len()).all(|chunk| chunk == c.letters())
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
