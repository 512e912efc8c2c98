//! Words over the positive integers, their type vectors, and the word-level
//! maps used by the chain and the multi-line queue arguments.
//!
//! Letters are 1-based. Positions are 0-based internally; the cyclic left
//! neighbour of position 0 is position `n - 1`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub type Letter = u8;

/// A nonempty finite word with letters `>= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::EmptyWord);
        }
        if letters.contains(&0) {
            return Err(Error::BadLetter("0".into()));
        }
        Ok(Word(letters))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<Letter> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Largest letter.
    pub fn max_letter(&self) -> Letter {
        self.0.iter().copied().max().unwrap_or(0)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// Left rotation by `k`: position `k` becomes the first letter.
    pub fn rotate(&self, k: usize) -> Word {
        let mut letters = self.0.clone();
        letters.rotate_left(k % self.len());
        Word(letters)
    }

    /// True when the letters are weakly increasing.
    pub fn is_sorted(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    pub(crate) fn from_letters_unchecked(letters: Vec<Letter>) -> Self {
        debug_assert!(!letters.is_empty() && !letters.contains(&0));
        Word(letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&l| l <= 9) {
            for l in &self.0 {
                write!(f, "{l}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
            f.write_str(&parts.join(","))
        }
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Accepts digit strings (`"1423"`) or comma-separated integers (`"10,2,3"`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let letters = if s.contains(',') {
            s.split(',')
                .map(|p| {
                    let p = p.trim();
                    p.parse::<Letter>()
                        .map_err(|_| Error::BadLetter(p.to_string()))
                })
                .collect::<Result<Vec<_>>>()?
        } else {
            s.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as Letter)
                        .ok_or_else(|| Error::BadLetter(c.to_string()))
                })
                .collect::<Result<Vec<_>>>()?
        };
        Word::new(letters)
    }
}

/// Occurrence counts `(m_1, ..., m_r)`.
///
/// Strict vectors have every entry positive. Relaxed vectors may end in zeros
/// (they arise from the `βα -> αα` queue bijection); the flag is always set
/// explicitly by the constructor used, never inferred.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeVector {
    counts: Vec<usize>,
    relaxed: bool,
}

impl TypeVector {
    pub fn new(counts: Vec<usize>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::BadType("no entries".into()));
        }
        if counts.contains(&0) {
            return Err(Error::BadType(format!(
                "zero entry in strict type {}",
                join(&counts)
            )));
        }
        Ok(TypeVector {
            counts,
            relaxed: false,
        })
    }

    /// A type vector whose trailing entries may be zero.
    pub fn relaxed(counts: Vec<usize>) -> Result<Self> {
        if counts.first().is_none_or(|&c| c == 0) {
            return Err(Error::BadType("first entry must be positive".into()));
        }
        let first_zero = counts.iter().position(|&c| c == 0).unwrap_or(counts.len());
        if counts[first_zero..].iter().any(|&c| c != 0) {
            return Err(Error::BadType(format!(
                "interior zero in {}",
                join(&counts)
            )));
        }
        Ok(TypeVector {
            counts,
            relaxed: true,
        })
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn is_relaxed(&self) -> bool {
        self.relaxed
    }

    /// Number of classes `r`.
    pub fn r(&self) -> usize {
        self.counts.len()
    }

    /// Word length `n = m_1 + ... + m_r`.
    pub fn n(&self) -> usize {
        self.counts.iter().sum()
    }

    /// `m_1 + ... + m_i` for `i = 1..=r`.
    pub fn partial_sums(&self) -> Vec<usize> {
        self.counts
            .iter()
            .scan(0, |acc, &c| {
                *acc += c;
                Some(*acc)
            })
            .collect()
    }

    /// Drops trailing zeros, yielding a strict vector.
    pub fn to_strict(&self) -> TypeVector {
        let keep = self.counts.iter().rposition(|&c| c != 0).map_or(0, |p| p + 1);
        TypeVector {
            counts: self.counts[..keep].to_vec(),
            relaxed: false,
        }
    }

    /// Type of `merge_top(w)` for `w` of this type: the last two entries added.
    pub fn merged(&self) -> Result<TypeVector> {
        if self.r() < 2 {
            return Err(Error::NothingToMerge);
        }
        let mut counts = self.counts.clone();
        let top = counts.pop().unwrap();
        *counts.last_mut().unwrap() += top;
        Ok(TypeVector {
            counts,
            relaxed: self.relaxed,
        })
    }

    pub fn reversed(&self) -> TypeVector {
        let mut counts = self.counts.clone();
        counts.reverse();
        TypeVector {
            counts,
            relaxed: self.relaxed,
        }
    }
}

impl fmt::Display for TypeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&join(&self.counts))
    }
}

impl FromStr for TypeVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let counts = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|_| Error::BadType(format!("cannot parse {p:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        TypeVector::new(counts)
    }
}

fn join(counts: &[usize]) -> String {
    counts
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// Letter multiplicities of `w`, indexed from letter 1 to the largest letter.
pub fn letter_counts(w: &Word) -> Vec<usize> {
    let mut counts = vec![0usize; w.max_letter() as usize];
    for &l in w.letters() {
        counts[l as usize - 1] += 1;
    }
    counts
}

/// The strict type of `w`. Words that skip a letter below their maximum have
/// no type.
pub fn type_of(w: &Word) -> Result<TypeVector> {
    let counts = letter_counts(w);
    if let Some(missing) = counts.iter().position(|&c| c == 0) {
        return Err(Error::GappedWord {
            word: w.to_string(),
            missing: missing + 1,
        });
    }
    TypeVector::new(counts)
}

/// `1^{m_1} 2^{m_2} ... r^{m_r}`.
pub fn sorted_word(m: &TypeVector) -> Result<Word> {
    if m.is_relaxed() && m.counts().contains(&0) {
        return Err(Error::BadType(format!("zero entry in {m}")));
    }
    let letters = m
        .counts()
        .iter()
        .enumerate()
        .flat_map(|(i, &c)| std::iter::repeat_n((i + 1) as Letter, c))
        .collect();
    Word::new(letters)
}

/// All `n` rotations of `w`, starting with `w` itself.
pub fn cyclic_shifts(w: &Word) -> Vec<Word> {
    (0..w.len()).map(|k| w.rotate(k)).collect()
}

/// Lexicographically least rotation; the representative of a cyclic class.
pub fn canonical_rotation(w: &Word) -> Word {
    cyclic_shifts(w).into_iter().min().expect("nonempty word")
}

/// Replaces every occurrence of the largest letter `r` by `r - 1`.
///
/// With `relaxed == false` the word must have a strict type; with
/// `relaxed == true` only `r >= 2` is required.
pub fn merge_top(w: &Word, relaxed: bool) -> Result<Word> {
    if !relaxed {
        type_of(w)?;
    }
    let r = w.max_letter();
    if r < 2 {
        return Err(Error::NothingToMerge);
    }
    Ok(Word::from_letters_unchecked(
        w.letters()
            .iter()
            .map(|&l| if l == r { r - 1 } else { l })
            .collect(),
    ))
}

/// Replace each letter `i` by `r + 1 - i` and reverse.
pub fn reverse_complement(w: &Word, r: usize) -> Result<Word> {
    if let Some(&bad) = w.letters().iter().find(|&&l| l as usize > r) {
        return Err(Error::LetterOutOfRange {
            letter: bad as usize,
            r,
        });
    }
    Ok(Word::from_letters_unchecked(
        w.letters()
            .iter()
            .rev()
            .map(|&l| (r + 1 - l as usize) as Letter)
            .collect(),
    ))
}

/// Rearranges `letters` into the next lexicographic permutation; false when
/// `letters` was the last one.
pub(crate) fn next_permutation<T: Ord>(letters: &mut [T]) -> bool {
    let Some(i) = letters.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = letters.iter().rposition(|x| *x > letters[i]).unwrap();
    letters.swap(i, j);
    letters[i + 1..].reverse();
    true
}

/// Every word of type `m`, in lexicographic order.
pub fn words_of_type(m: &TypeVector) -> Vec<Word> {
    let Ok(first) = sorted_word(&m.to_strict()) else {
        return Vec::new();
    };
    let mut letters = first.into_letters();
    let mut out = vec![Word::from_letters_unchecked(letters.clone())];
    while next_permutation(&mut letters) {
        out.push(Word::from_letters_unchecked(letters.clone()));
    }
    out
}

/// All strict type vectors with `m_1 + ... + m_r = n`, in lexicographic order
/// of their entries.
pub fn strict_types(n: usize) -> Vec<TypeVector> {
    fn rec(left: usize, prefix: &mut Vec<usize>, out: &mut Vec<TypeVector>) {
        if left == 0 {
            out.push(TypeVector::new(prefix.clone()).unwrap());
            return;
        }
        for first in 1..=left {
            prefix.push(first);
            rec(left - first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, &mut Vec::new(), &mut out);
    }
    out
}

/// Strict types of every length `1..=nmax`.
pub fn strict_types_up_to(nmax: usize) -> Vec<TypeVector> {
    (1..=nmax).flat_map(strict_types).collect()
}

/// The two-letter words of the given length with exactly `b` heavy letters,
/// where the light letter is `r - 1` and the heavy letter is `r`.
///
/// Yielded in lexicographic order; the last word is the sorted one.
pub fn enumerate_suffixes(
    length: usize,
    b: usize,
    r: usize,
) -> Result<impl Iterator<Item = Word>> {
    if length == 0 || b > length {
        return Err(Error::SuffixOutOfRange { length, b });
    }
    if r < 2 || r > Letter::MAX as usize {
        return Err(Error::LetterOutOfRange { letter: r, r: 2 });
    }
    let (alpha, beta) = ((r - 1) as Letter, r as Letter);
    let letters: Vec<Letter> = std::iter::repeat_n(alpha, length - b)
        .chain(std::iter::repeat_n(beta, b))
        .collect();
    let mut next = Some(letters);
    Ok(std::iter::from_fn(move || {
        let current = next.take()?;
        let mut following = current.clone();
        if next_permutation(&mut following) {
            next = Some(following);
        }
        Some(Word::from_letters_unchecked(current))
    }))
}

/// The sorted two-letter suffix `α^{length-b} β^b`.
pub fn sorted_suffix(length: usize, b: usize, r: usize) -> Result<Word> {
    if length == 0 || b > length {
        return Err(Error::SuffixOutOfRange { length, b });
    }
    let (alpha, beta) = ((r - 1) as Letter, r as Letter);
    Ok(Word::from_letters_unchecked(
        std::iter::repeat_n(alpha, length - b)
            .chain(std::iter::repeat_n(beta, b))
            .collect(),
    ))
}

/// Turns every heavy letter outside the trailing run into a light one.
///
/// Returns the collapsed word together with the length of the trailing heavy
/// run, so the first component is always the sorted suffix with that many
/// heavy letters.
pub fn collapse_nontrailing(v: &Word, r: usize) -> Result<(Word, usize)> {
    let (alpha, beta) = ((r - 1) as Letter, r as Letter);
    if r < 2 || v.letters().iter().any(|&l| l != alpha && l != beta) {
        return Err(Error::NotASuffix(v.to_string()));
    }
    let trailing = v.letters().iter().rev().take_while(|&&l| l == beta).count();
    let collapsed = sorted_suffix(v.len(), trailing, r)?;
    Ok((collapsed, trailing))
}
