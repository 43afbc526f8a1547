//! The cyclic burst-substitution metric and burst decompositions.
//!
//! A burst of length at most `b` is a substitution error whose support fits
//! in a cyclic interval of `b` positions. The burst distance `d_b(x, y)` is
//! the least number of such bursts whose sum turns `x` into `y`;
//! equivalently, the least number of cyclic length-`b` intervals that
//! jointly cover the support of `x - y`. The burst weight `wt_b(w)` is
//! `d_b(w, 0)`.
//!
//! Two independent implementations are provided:
//!
//! * [`burst_distance`] — the release algorithm: the leftmost support
//!   element `p1` must be covered by an interval ending within `b - 1`
//!   positions of it, so only support elements in the cyclic window
//!   `[p1 - b + 1, p1]` can start an optimal cover; for each such start the
//!   remaining support is covered greedily, always restarting at the
//!   numerically smallest uncovered element.
//! * [`burst_distance_oracle`] — a cross-check: for every support element
//!   `s`, cover greedily clockwise starting at `s` (each next interval
//!   starts at the clockwise-next uncovered element) and take the best
//!   start. Bit-parallel for `n <= 64`.
//!
//! Both are functions of the difference `x - y` alone, so agreement on all
//! difference words implies agreement on all pairs.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::interval::{intervals_disjoint, CyclicInterval};
use crate::word::Word;

/// A single burst: a cyclic interval together with the substituted values
/// along it. The first and last values are nonzero, so the interval is the
/// minimal one containing the burst's support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BurstError {
    interval: CyclicInterval,
    values: Vec<u8>,
}

impl BurstError {
    /// Creates a burst, checking that the value list matches the interval
    /// length and that both endpoints are nonzero.
    pub fn new(interval: CyclicInterval, values: Vec<u8>) -> Result<Self> {
        if values.len() != interval.len() {
            return Err(Error::InvalidParams(format!(
                "burst carries {} values for an interval of length {}",
                values.len(),
                interval.len()
            )));
        }
        if values.first() == Some(&0) || values.last() == Some(&0) {
            return Err(Error::InvalidParams(
                "burst endpoints must be nonzero (the interval is minimal)".into(),
            ));
        }
        Ok(BurstError { interval, values })
    }

    pub fn interval(&self) -> &CyclicInterval {
        &self.interval
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    /// Checks the burst fits a word of length `n` over `Z_q` with maximal
    /// burst length `b`.
    pub fn validate(&self, n: usize, q: u8, b: usize) -> Result<()> {
        self.interval.validate(n)?;
        if self.interval.len() > b {
            return Err(Error::InvalidParams(format!(
                "burst length {} exceeds b={b}",
                self.interval.len()
            )));
        }
        if let Some(&bad) = self.values.iter().find(|&&v| v >= q) {
            return Err(Error::InvalidParams(format!(
                "burst value {bad} out of range for alphabet size {q}"
            )));
        }
        Ok(())
    }
}

/// A multiset of pairwise-disjoint bursts; its weight is the burst count.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ErrorPattern {
    bursts: Vec<BurstError>,
}

impl ErrorPattern {
    pub fn new(bursts: Vec<BurstError>) -> Self {
        ErrorPattern { bursts }
    }

    pub fn bursts(&self) -> &[BurstError] {
        &self.bursts
    }

    /// Number of bursts.
    pub fn weight(&self) -> usize {
        self.bursts.len()
    }

    /// Checks every burst and pairwise disjointness of their intervals.
    pub fn validate(&self, n: usize, q: u8, b: usize) -> Result<()> {
        for burst in &self.bursts {
            burst.validate(n, q, b)?;
        }
        for (i, x) in self.bursts.iter().enumerate() {
            for y in &self.bursts[i + 1..] {
                if !intervals_disjoint(x.interval(), y.interval(), n)? {
                    return Err(Error::InvalidParams(format!(
                        "bursts at {} and {} overlap",
                        x.interval(),
                        y.interval()
                    )));
                }
            }
        }
        Ok(())
    }

    /// The error word: the pattern applied to the all-zero word.
    pub fn to_word(&self, n: usize, q: u8) -> Result<Word> {
        self.apply(&Word::zero(n, q)?)
    }

    /// Adds the pattern to `x` (componentwise, mod q).
    pub fn apply(&self, x: &Word) -> Result<Word> {
        let n = x.n();
        let q = x.q();
        let mut symbols = x.symbols().to_vec();
        for burst in &self.bursts {
            burst.validate(n, q, n)?; // length checked against b separately
            for (k, pos) in burst.interval().positions(n).enumerate() {
                symbols[pos - 1] = (symbols[pos - 1] + burst.values[k]) % q;
            }
        }
        Word::new(symbols, q)
    }
}

/// 0-based support of `x - y` (positions where the words differ).
fn diff_support(x: &Word, y: &Word) -> Vec<usize> {
    x.symbols()
        .iter()
        .zip(y.symbols())
        .enumerate()
        .filter(|(_, (a, b))| a != b)
        .map(|(i, _)| i)
        .collect()
}

fn check_distance_args(x: &Word, y: &Word, b: usize) -> Result<()> {
    x.check_compatible(y)?;
    if b == 0 {
        return Err(Error::InvalidParams("burst length b must be >= 1".into()));
    }
    Ok(())
}

/// The burst distance `d_b(x, y)`: the least number of cyclic intervals of
/// length at most `b` covering the support of `x - y`.
///
/// # Examples
///
/// ```
/// use cycburst::{burst_distance, Word};
/// let x = Word::from_text("01011", 2).unwrap();
/// let zero = Word::zero(5, 2).unwrap();
/// assert_eq!(burst_distance(&x, &zero, 2).unwrap(), 2);
///
/// // the wrap-around interval [6, 1] covers both ends in one burst
/// let x = Word::from_text("100001", 2).unwrap();
/// let zero = Word::zero(6, 2).unwrap();
/// assert_eq!(burst_distance(&x, &zero, 2).unwrap(), 1);
/// ```
pub fn burst_distance(x: &Word, y: &Word, b: usize) -> Result<usize> {
    check_distance_args(x, y, b)?;
    let n = x.n();
    let supp = diff_support(x, y);
    if supp.is_empty() {
        return Ok(0);
    }
    if b >= n {
        return Ok(1);
    }
    // Only support elements in the cyclic window [p1 - b + 1, p1] can start
    // an interval covering the minimum p1: that's p1 itself plus the tail
    // elements within b - 1 positions counter-clockwise of it.
    let p1 = supp[0];
    let starts: Vec<usize> = supp
        .iter()
        .copied()
        .filter(|&p| p == p1 || p >= p1 + n + 1 - b)
        .collect();
    let mut best = usize::MAX;
    for &start in &starts {
        let mut covered = vec![false; supp.len()];
        let mut remaining = supp.len();
        let mut cur = start;
        let mut count = 0usize;
        loop {
            // remove everything the interval [cur, cur + b - 1] covers
            for (i, &u) in supp.iter().enumerate() {
                if !covered[i] && (u + n - cur) % n < b {
                    covered[i] = true;
                    remaining -= 1;
                }
            }
            count += 1;
            if remaining == 0 {
                break;
            }
            // restart at the numerically smallest uncovered element
            let next = covered.iter().position(|&c| !c).expect("remaining > 0");
            cur = supp[next];
        }
        best = best.min(count);
    }
    Ok(best)
}

/// Burst weight `wt_b(w) = d_b(w, 0)`.
pub fn burst_weight(w: &Word, b: usize) -> Result<usize> {
    burst_distance(w, &Word::zero(w.n(), w.q())?, b)
}

/// Whether `d_b(x, y) <= r`, with a cheap rejection first: a difference of
/// burst weight at most `r` has support size at most `r*b`, so larger
/// supports are refused without running the cover search. Intended for hot
/// filtering loops.
pub fn within_burst_distance(x: &Word, y: &Word, b: usize, r: usize) -> Result<bool> {
    check_distance_args(x, y, b)?;
    let cap = r.saturating_mul(b);
    let mut count = 0usize;
    for (a, c) in x.symbols().iter().zip(y.symbols()) {
        if a != c {
            count += 1;
            if count > cap {
                return Ok(false);
            }
        }
    }
    if count == 0 {
        return Ok(true);
    }
    Ok(burst_distance(x, y, b)? <= r)
}

/// Independent brute-force evaluation of `d_b(x, y)`: the best clockwise
/// greedy cover over all support-element starts. Bit-parallel for
/// `n <= 64`, with a set-based fallback above that.
pub fn burst_distance_oracle(x: &Word, y: &Word, b: usize) -> Result<usize> {
    check_distance_args(x, y, b)?;
    let n = x.n();
    let supp = diff_support(x, y);
    if supp.is_empty() {
        return Ok(0);
    }
    if b >= n {
        return Ok(1);
    }
    if n <= 64 {
        Ok(oracle_bits(&supp, n, b))
    } else {
        Ok(oracle_sets(&supp, n, b))
    }
}

fn oracle_bits(supp: &[usize], n: usize, b: usize) -> usize {
    let full: u64 = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mask0: u64 = supp.iter().fold(0, |m, &p| m | (1u64 << p));
    // bits [start, start + b - 1] mod n; b < n here, so both shifts are < 64
    let interval = |start: usize| -> u64 {
        if start + b <= n {
            ((1u64 << b) - 1) << start
        } else {
            let head = n - start;
            ((((1u64 << head) - 1) << start) | ((1u64 << (start + b - n)) - 1)) & full
        }
    };
    let mut best = usize::MAX;
    let mut starts = mask0;
    while starts != 0 {
        let s = starts.trailing_zeros() as usize;
        starts &= starts - 1;
        let mut m = mask0;
        let mut cur = s;
        let mut count = 0usize;
        loop {
            m &= !interval(cur);
            count += 1;
            if m == 0 {
                break;
            }
            // clockwise-next set bit at or after (cur + b) mod n
            let j = (cur + b) % n;
            let rotated = if j == 0 {
                m
            } else {
                ((m >> j) | (m << (n - j))) & full
            };
            cur = (j + rotated.trailing_zeros() as usize) % n;
        }
        best = best.min(count);
    }
    best
}

fn oracle_sets(supp: &[usize], n: usize, b: usize) -> usize {
    let all: BTreeSet<usize> = supp.iter().copied().collect();
    let mut best = usize::MAX;
    for &s in supp {
        let mut uncovered = all.clone();
        let mut cur = s;
        let mut count = 0usize;
        loop {
            let drop: Vec<usize> = uncovered
                .iter()
                .copied()
                .filter(|&u| (u + n - cur) % n < b)
                .collect();
            for u in drop {
                uncovered.remove(&u);
            }
            count += 1;
            if uncovered.is_empty() {
                break;
            }
            let j = (cur + b) % n;
            cur = *uncovered
                .range(j..)
                .next()
                .or_else(|| uncovered.iter().next())
                .expect("uncovered nonempty");
        }
        best = best.min(count);
    }
    best
}

/// Decomposes `w` into `wt_b(w)` pairwise-disjoint bursts of length at most
/// `b` whose sum is `w`. Every word decomposes; the zero word gives the
/// empty pattern.
///
/// # Examples
///
/// ```
/// use cycburst::{decompose_disjoint, Word};
/// let w = Word::from_text("01011", 2).unwrap();
/// let pat = decompose_disjoint(&w, 2).unwrap();
/// assert_eq!(pat.weight(), 2);
/// assert_eq!(pat.to_word(5, 2).unwrap(), w);
///
/// // a single wrap-around burst on positions 6 and 1
/// let w = Word::from_text("100001", 2).unwrap();
/// let pat = decompose_disjoint(&w, 2).unwrap();
/// assert_eq!(pat.weight(), 1);
/// assert_eq!(pat.bursts()[0].interval().start(), 6);
/// ```
pub fn decompose_disjoint(w: &Word, b: usize) -> Result<ErrorPattern> {
    if b == 0 {
        return Err(Error::InvalidParams("burst length b must be >= 1".into()));
    }
    let n = w.n();
    let supp0: Vec<usize> = w.support().iter().map(|p| p - 1).collect();
    if supp0.is_empty() {
        return Ok(ErrorPattern::default());
    }
    if b >= n {
        // one burst on the minimal plain interval containing the support
        let first = supp0[0] + 1;
        let last = supp0[supp0.len() - 1] + 1;
        let interval = CyclicInterval::from_endpoints(first, last, n)?;
        let values: Vec<u8> = interval.positions(n).map(|p| w.symbol(p)).collect();
        let burst = BurstError::new(interval, values)?;
        return Ok(ErrorPattern::new(vec![burst]));
    }

    // find the start whose clockwise greedy cover is optimal
    let (mut best_start, mut best_count) = (supp0[0], usize::MAX);
    for &s in &supp0 {
        let c = greedy_count(&supp0, n, b, s);
        if c < best_count {
            best_count = c;
            best_start = s;
        }
    }

    // replay the greedy cover from the best start, shrinking each interval
    // to the minimal one containing the support it newly covers
    let all: BTreeSet<usize> = supp0.iter().copied().collect();
    let mut uncovered = all;
    let mut cur = best_start;
    let mut bursts = Vec::with_capacity(best_count);
    loop {
        let grabbed: Vec<usize> = uncovered
            .iter()
            .copied()
            .filter(|&u| (u + n - cur) % n < b)
            .collect();
        for &u in &grabbed {
            uncovered.remove(&u);
        }
        // minimal interval: from cur to the farthest grabbed element clockwise
        let far = grabbed
            .iter()
            .map(|&u| (u + n - cur) % n)
            .max()
            .expect("interval covers its own start");
        let start = cur + 1;
        let end = (cur + far) % n + 1;
        let interval = CyclicInterval::from_endpoints(start, end, n)?;
        let values: Vec<u8> = interval.positions(n).map(|p| w.symbol(p)).collect();
        bursts.push(BurstError::new(interval, values)?);
        if uncovered.is_empty() {
            break;
        }
        let j = (cur + b) % n;
        cur = *uncovered
            .range(j..)
            .next()
            .or_else(|| uncovered.iter().next())
            .expect("uncovered nonempty");
    }
    bursts.sort_by_key(|burst| burst.interval().start());
    let pattern = ErrorPattern::new(bursts);
    debug_assert_eq!(pattern.weight(), best_count);
    debug_assert!(pattern.validate(n, w.q(), b).is_ok());
    Ok(pattern)
}

fn greedy_count(supp: &[usize], n: usize, b: usize, start: usize) -> usize {
    let all: BTreeSet<usize> = supp.iter().copied().collect();
    let mut uncovered = all;
    let mut cur = start;
    let mut count = 0usize;
    loop {
        let drop: Vec<usize> = uncovered
            .iter()
            .copied()
            .filter(|&u| (u + n - cur) % n < b)
            .collect();
        for u in drop {
            uncovered.remove(&u);
        }
        count += 1;
        if uncovered.is_empty() {
            return count;
        }
        let j = (cur + b) % n;
        cur = *uncovered
            .range(j..)
            .next()
            .or_else(|| uncovered.iter().next())
            .expect("uncovered nonempty");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::all_words;

    fn w(text: &str, q: u8) -> Word {
        Word::from_text(text, q).unwrap()
    }

    #[test]
    fn distance_worked_examples() {
        let zero5 = Word::zero(5, 2).unwrap();
        assert_eq!(burst_distance(&w("01011", 2), &zero5, 2).unwrap(), 2);
        let zero6 = Word::zero(6, 2).unwrap();
        assert_eq!(burst_distance(&w("100001", 2), &zero6, 2).unwrap(), 1);
        assert_eq!(burst_distance(&zero6, &zero6, 2).unwrap(), 0);
        assert_eq!(burst_distance(&w("100001", 2), &zero6, 1).unwrap(), 2);
    }

    #[test]
    fn oracle_matches_on_worked_examples() {
        let zero5 = Word::zero(5, 2).unwrap();
        assert_eq!(burst_distance_oracle(&w("01011", 2), &zero5, 2).unwrap(), 2);
        let zero6 = Word::zero(6, 2).unwrap();
        assert_eq!(burst_distance_oracle(&w("100001", 2), &zero6, 2).unwrap(), 1);
    }

    #[test]
    fn distance_rejects_mismatches() {
        let x = w("0101", 2);
        let y = w("010", 2);
        assert!(burst_distance(&x, &y, 2).is_err());
        let z = w("0101", 3);
        assert!(burst_distance(&x, &z, 2).is_err());
        assert!(burst_distance(&x, &x, 0).is_err());
    }

    #[test]
    fn unit_bursts_recover_hamming_distance() {
        for x in all_words(6, 2, 1 << 20).unwrap() {
            for y in all_words(6, 2, 1 << 20).unwrap() {
                let dh = x
                    .symbols()
                    .iter()
                    .zip(y.symbols())
                    .filter(|(a, b)| a != b)
                    .count();
                assert_eq!(burst_distance(&x, &y, 1).unwrap(), dh);
                assert_eq!(burst_distance_oracle(&x, &y, 1).unwrap(), dh);
            }
        }
    }

    #[test]
    fn wider_bursts_never_increase_distance() {
        let zero = Word::zero(8, 2).unwrap();
        for x in all_words(8, 2, 1 << 20).unwrap() {
            let mut prev = usize::MAX;
            for b in 1..=4 {
                let d = burst_distance(&x, &zero, b).unwrap();
                assert!(d <= prev, "d_{b}({x}) = {d} > d_{}({x}) = {prev}", b - 1);
                prev = d;
            }
        }
    }

    #[test]
    fn both_algorithms_agree_exhaustively_small() {
        for q in [2u8, 3] {
            for n in 1..=6 {
                let zero = Word::zero(n, q).unwrap();
                for x in all_words(n, q, 1 << 20).unwrap() {
                    for b in 1..=3 {
                        assert_eq!(
                            burst_distance(&x, &zero, b).unwrap(),
                            burst_distance_oracle(&x, &zero, b).unwrap(),
                            "x={x} q={q} b={b}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn set_fallback_agrees_with_bit_path() {
        // n > 64 exercises the set-based oracle; compare against the release
        // algorithm on structured wrap-heavy inputs
        let n = 70;
        let mut symbols = vec![0u8; n];
        symbols[0] = 1;
        symbols[1] = 1;
        symbols[69] = 1;
        symbols[35] = 1;
        let x = Word::new(symbols, 2).unwrap();
        let zero = Word::zero(n, 2).unwrap();
        for b in 1..=5 {
            assert_eq!(
                burst_distance(&x, &zero, b).unwrap(),
                burst_distance_oracle(&x, &zero, b).unwrap(),
                "b={b}"
            );
        }
    }

    #[test]
    fn decompose_worked_examples() {
        let pat = decompose_disjoint(&w("01011", 2), 2).unwrap();
        assert_eq!(pat.weight(), 2);
        let ivs: Vec<(usize, usize)> = pat
            .bursts()
            .iter()
            .map(|bu| (bu.interval().start(), bu.interval().len()))
            .collect();
        assert_eq!(ivs, vec![(2, 1), (4, 2)]);
        assert!(pat.validate(5, 2, 2).is_ok());

        let pat = decompose_disjoint(&w("100001", 2), 2).unwrap();
        assert_eq!(pat.weight(), 1);
        assert_eq!(pat.bursts()[0].interval().start(), 6);
        assert_eq!(pat.bursts()[0].interval().len(), 2);
        assert_eq!(pat.bursts()[0].values(), &[1, 1]);
    }

    #[test]
    fn decompose_round_trips_and_counts() {
        for q in [2u8, 3] {
            for n in 2..=7 {
                for x in all_words(n, q, 1 << 20).unwrap() {
                    for b in 1..=3 {
                        let pat = decompose_disjoint(&x, b).unwrap();
                        assert!(pat.validate(n, q, b).is_ok(), "x={x} b={b}");
                        assert_eq!(pat.to_word(n, q).unwrap(), x, "x={x} b={b}");
                        assert_eq!(
                            pat.weight(),
                            burst_weight(&x, b).unwrap(),
                            "x={x} b={b}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn pattern_validation_rejects_overlap() {
        let a = BurstError::new(CyclicInterval::from_endpoints(1, 2, 6).unwrap(), vec![1, 1])
            .unwrap();
        let c = BurstError::new(CyclicInterval::from_endpoints(2, 3, 6).unwrap(), vec![1, 1])
            .unwrap();
        let pat = ErrorPattern::new(vec![a, c]);
        assert!(pat.validate(6, 2, 2).is_err());
    }

    #[test]
    fn burst_endpoints_must_be_nonzero() {
        let iv = CyclicInterval::from_endpoints(1, 3, 6).unwrap();
        assert!(BurstError::new(iv, vec![0, 1, 1]).is_err());
        assert!(BurstError::new(iv, vec![1, 0, 1]).is_ok());
        assert!(BurstError::new(iv, vec![1, 1, 0]).is_err());
    }
}
