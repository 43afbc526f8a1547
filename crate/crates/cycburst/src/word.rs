//! Words over `Z_q`, parameter bundles, and word-set file I/O.
//!
//! Positions are 1-based in every public signature, in documentation, and in
//! the CLI (position 1 is the leftmost character of the text form); storage is
//! a 0-based `Vec<u8>`. The text form of a word writes each symbol as a
//! base-q digit `0-9a-z`, so the alphabet size is capped at 36.

use std::cmp::Ordering;
use std::fmt;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Largest supported alphabet (one base-36 digit per symbol in text form).
pub const MAX_Q: u8 = 36;

/// Parameter bundle for the cyclic burst-substitution channel: word length
/// `n`, alphabet size `q`, maximal burst length `b`, number of bursts `t`,
/// and the reconstruction trade-off parameters `s` (degree exponent) and `h`
/// (list exponent).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Params {
    pub n: usize,
    pub q: u8,
    pub b: usize,
    pub t: usize,
    pub s: usize,
    pub h: usize,
}

impl Params {
    /// Creates a parameter bundle, checking the basic domain constraints
    /// `n >= 1`, `2 <= q <= 36`, `b >= 1`.
    ///
    /// The enumeration regime `n >= 2tb` is checked separately by
    /// [`Params::check_enumeration_regime`] since some operations
    /// (distances, majority voting) are meaningful outside it.
    pub fn new(n: usize, q: u8, b: usize, t: usize, s: usize, h: usize) -> Result<Self> {
        validate_alphabet(q)?;
        if n == 0 {
            return Err(Error::InvalidParams("word length n must be >= 1".into()));
        }
        if b == 0 {
            return Err(Error::InvalidParams("burst length b must be >= 1".into()));
        }
        Ok(Params { n, q, b, t, s, h })
    }

    /// Checks the enumeration regime `n >= 2tb` required by ball enumeration
    /// and the counting bounds.
    pub fn check_enumeration_regime(&self) -> Result<()> {
        check_enumeration_regime(self.n, self.b, self.t)
    }
}

pub(crate) fn validate_alphabet(q: u8) -> Result<()> {
    if !(2..=MAX_Q).contains(&q) {
        return Err(Error::InvalidParams(format!(
            "alphabet size q must be in 2..=36, got {q}"
        )));
    }
    Ok(())
}

pub(crate) fn check_enumeration_regime(n: usize, b: usize, t: usize) -> Result<()> {
    if n < 2 * t * b {
        return Err(Error::InvalidParams(format!(
            "enumeration regime requires n >= 2*t*b (n={n}, t={t}, b={b})"
        )));
    }
    Ok(())
}

/// A word of fixed length over `Z_q`. Symbols are always `< q`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    q: u8,
    symbols: Vec<u8>,
}

impl Word {
    /// Creates a word after checking every symbol lies in `0..q`.
    pub fn new(symbols: Vec<u8>, q: u8) -> Result<Self> {
        validate_alphabet(q)?;
        if symbols.is_empty() {
            return Err(Error::InvalidParams("words must have length >= 1".into()));
        }
        if let Some(&bad) = symbols.iter().find(|&&s| s >= q) {
            return Err(Error::InvalidParams(format!(
                "symbol {bad} out of range for alphabet size {q}"
            )));
        }
        Ok(Word { q, symbols })
    }

    /// The all-zero word of length `n`.
    pub fn zero(n: usize, q: u8) -> Result<Self> {
        Word::new(vec![0; n], q)
    }

    /// Parses the text form: one base-q digit (`0-9a-z`, case-insensitive)
    /// per position, position 1 first.
    pub fn from_text(text: &str, q: u8) -> Result<Self> {
        validate_alphabet(q)?;
        let mut symbols = Vec::with_capacity(text.len());
        for (i, c) in text.chars().enumerate() {
            let v = c
                .to_digit(36)
                .ok_or_else(|| Error::Parse(format!("invalid symbol '{c}' at position {}", i + 1)))?;
            if v >= u32::from(q) {
                return Err(Error::Parse(format!(
                    "symbol '{c}' at position {} is >= alphabet size {q}",
                    i + 1
                )));
            }
            symbols.push(v as u8);
        }
        Word::new(symbols, q)
    }

    /// Word length `n`.
    pub fn n(&self) -> usize {
        self.symbols.len()
    }

    /// Alphabet size `q`.
    pub fn q(&self) -> u8 {
        self.q
    }

    /// Underlying symbols, 0-based.
    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    /// Symbol at 1-based position `pos`.
    ///
    /// # Panics
    ///
    /// Panics if `pos` is 0 or exceeds the word length.
    pub fn symbol(&self, pos: usize) -> u8 {
        assert!(
            (1..=self.n()).contains(&pos),
            "position {pos} out of range 1..={}",
            self.n()
        );
        self.symbols[pos - 1]
    }

    /// Returns a copy with the symbol at 1-based position `pos` replaced.
    ///
    /// # Panics
    ///
    /// Panics if `pos` is out of range or `value >= q`.
    pub fn with_symbol(&self, pos: usize, value: u8) -> Word {
        assert!((1..=self.n()).contains(&pos), "position out of range");
        assert!(value < self.q, "symbol out of range");
        let mut w = self.clone();
        w.symbols[pos - 1] = value;
        w
    }

    /// The support: 1-based positions of nonzero symbols, ascending.
    ///
    /// # Examples
    ///
    /// ```
    /// use cycburst::Word;
    /// let w = Word::from_text("01011", 2).unwrap();
    /// assert_eq!(w.support(), vec![2, 4, 5]);
    /// let v = Word::from_text("20100", 3).unwrap();
    /// assert_eq!(v.support(), vec![1, 3]);
    /// ```
    pub fn support(&self) -> Vec<usize> {
        self.symbols
            .iter()
            .enumerate()
            .filter(|(_, &s)| s != 0)
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// Hamming weight (number of nonzero symbols).
    pub fn hamming_weight(&self) -> usize {
        self.symbols.iter().filter(|&&s| s != 0).count()
    }

    /// Componentwise sum mod q.
    pub fn add(&self, other: &Word) -> Result<Word> {
        self.check_compatible(other)?;
        let symbols = self
            .symbols
            .iter()
            .zip(&other.symbols)
            .map(|(&a, &b)| (a + b) % self.q)
            .collect();
        Ok(Word {
            q: self.q,
            symbols,
        })
    }

    /// Componentwise difference mod q.
    pub fn sub(&self, other: &Word) -> Result<Word> {
        self.check_compatible(other)?;
        let symbols = self
            .symbols
            .iter()
            .zip(&other.symbols)
            .map(|(&a, &b)| (a + self.q - b) % self.q)
            .collect();
        Ok(Word {
            q: self.q,
            symbols,
        })
    }

    /// Errors unless the two words share length and alphabet.
    pub fn check_compatible(&self, other: &Word) -> Result<()> {
        if self.n() != other.n() {
            return Err(Error::Mismatch(format!(
                "word lengths differ: {} vs {}",
                self.n(),
                other.n()
            )));
        }
        if self.q != other.q {
            return Err(Error::Mismatch(format!(
                "alphabet sizes differ: {} vs {}",
                self.q, other.q
            )));
        }
        Ok(())
    }

}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.symbols {
            let c = char::from_digit(u32::from(s), 36).expect("symbol < 36");
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self}, q={})", self.q)
    }
}

/// An ordered set of distinct words sharing length and alphabet.
///
/// The file form is a header line `n=<n> q=<q>` followed by one word per
/// line in text form; members are kept sorted, so serialization is
/// canonical.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordSet {
    n: usize,
    q: u8,
    words: Vec<Word>,
}

impl WordSet {
    /// Creates an empty set for the given length and alphabet.
    pub fn empty(n: usize, q: u8) -> Result<Self> {
        validate_alphabet(q)?;
        if n == 0 {
            return Err(Error::InvalidParams("word length n must be >= 1".into()));
        }
        Ok(WordSet {
            n,
            q,
            words: Vec::new(),
        })
    }

    /// Builds a set from arbitrary words, sorting and deduplicating.
    /// All words must share length and alphabet.
    pub fn from_words(mut words: Vec<Word>) -> Result<Self> {
        let first = words
            .first()
            .ok_or_else(|| Error::InvalidParams("cannot infer (n, q) from an empty list".into()))?;
        let (n, q) = (first.n(), first.q());
        for w in &words {
            first.check_compatible(w)?;
        }
        words.sort_unstable();
        words.dedup();
        Ok(WordSet { n, q, words })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Membership test (binary search over the sorted members).
    pub fn contains(&self, w: &Word) -> bool {
        self.words.binary_search(w).is_ok()
    }

    /// Inserts a word, keeping the set sorted; returns false if already
    /// present.
    pub fn insert(&mut self, w: Word) -> Result<bool> {
        if w.n() != self.n || w.q() != self.q {
            return Err(Error::Mismatch(format!(
                "word (n={}, q={}) does not fit set (n={}, q={})",
                w.n(),
                w.q(),
                self.n,
                self.q
            )));
        }
        match self.words.binary_search(&w) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.words.insert(pos, w);
                Ok(true)
            }
        }
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Word> {
        self.words.iter()
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    /// Set intersection (members present in both).
    pub fn intersection(&self, other: &WordSet) -> Result<WordSet> {
        if self.n != other.n || self.q != other.q {
            return Err(Error::Mismatch(format!(
                "sets have different shapes: (n={}, q={}) vs (n={}, q={})",
                self.n, self.q, other.n, other.q
            )));
        }
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        let words = small
            .words
            .iter()
            .filter(|w| large.contains(w))
            .cloned()
            .collect();
        Ok(WordSet {
            n: self.n,
            q: self.q,
            words,
        })
    }

    /// Writes the canonical file form.
    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "n={} q={}", self.n, self.q)?;
        for w in &self.words {
            writeln!(out, "{w}")?;
        }
        Ok(())
    }

    /// Reads the file form produced by [`WordSet::write_to`].
    pub fn read_from<R: Read>(input: R) -> Result<Self> {
        let mut lines = BufReader::new(input).lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty word-set file".into()))??;
        let (n, q) = parse_nq_header(&header)?;
        let mut set = WordSet::empty(n, q)?;
        for line in lines {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let w = Word::from_text(line, q)?;
            if w.n() != n {
                return Err(Error::Parse(format!(
                    "word '{line}' has length {} but header says n={n}",
                    w.n()
                )));
            }
            set.insert(w)?;
        }
        Ok(set)
    }

    /// Convenience wrapper writing to a filesystem path.
    pub fn save(&self, path: &Path) -> Result<()> {
        let f = std::fs::File::create(path)?;
        self.write_to(std::io::BufWriter::new(f))
    }

    /// Convenience wrapper reading from a filesystem path.
    pub fn load(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        Self::read_from(f)
    }
}

impl<'a> IntoIterator for &'a WordSet {
    type Item = &'a Word;
    type IntoIter = std::slice::Iter<'a, Word>;
    fn into_iter(self) -> Self::IntoIter {
        self.words.iter()
    }
}

pub(crate) fn parse_nq_header(header: &str) -> Result<(usize, u8)> {
    let mut n = None;
    let mut q = None;
    for tok in header.split_whitespace() {
        if let Some(v) = tok.strip_prefix("n=") {
            n = Some(v.parse::<usize>().map_err(|_| {
                Error::Parse(format!("bad n value '{v}' in header '{header}'"))
            })?);
        } else if let Some(v) = tok.strip_prefix("q=") {
            q = Some(v.parse::<u8>().map_err(|_| {
                Error::Parse(format!("bad q value '{v}' in header '{header}'"))
            })?);
        }
    }
    match (n, q) {
        (Some(n), Some(q)) => {
            validate_alphabet(q)?;
            Ok((n, q))
        }
        _ => Err(Error::Parse(format!(
            "header '{header}' must contain n=<len> and q=<alphabet>"
        ))),
    }
}

/// Enumerates all `q^n` words in lexicographic order (position 1 most
/// significant). Intended for small domains; errors if `q^n > cap`.
pub fn all_words(n: usize, q: u8, cap: u64) -> Result<Vec<Word>> {
    validate_alphabet(q)?;
    let total = (0..n).try_fold(1u64, |acc, _| acc.checked_mul(u64::from(q)));
    let total = match total {
        Some(t) if t <= cap => t,
        _ => {
            return Err(Error::Infeasible(format!(
                "domain size q^n with q={q}, n={n} exceeds cap {cap}"
            )))
        }
    };
    let mut out = Vec::with_capacity(total as usize);
    let mut current = vec![0u8; n];
    loop {
        out.push(Word {
            q,
            symbols: current.clone(),
        });
        // increment as a base-q counter, least significant at the end so the
        // output is lexicographic in text order
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if current[i] + 1 < q {
                current[i] += 1;
                break;
            }
            current[i] = 0;
        }
    }
}

/// Total order used for greedy constructions: lexicographic on symbols.
pub fn lex_cmp(a: &Word, b: &Word) -> Ordering {
    a.symbols().cmp(b.symbols())
}
