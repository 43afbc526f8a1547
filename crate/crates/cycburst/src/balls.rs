//! Error balls of the burst metric: enumeration, counting bounds,
//! intersections, reconstruction degree, diameter, and the shifting
//! compression.
//!
//! `Ball_{t,b}(x)` is the set of words at burst distance at most `t` from
//! `x`. Enumeration requires the regime `n >= 2tb`, where every member is
//! reached by placing at most `t` pairwise-disjoint cyclic intervals of
//! length at most `b` (starts strictly increasing; only the last interval
//! may wrap, and it must not reach the first), assigning nonzero values to
//! interval endpoints and arbitrary values inside, then deduplicating.
//!
//! The exact size is sandwiched between closed forms: for `n >= 2tb`,
//!
//! ```text
//! (1 - 1/q)^t (q^b - 1)^t C(n - (2b-2)t, t)
//!     <= |Ball_{t,b}(0)|
//!     <= (t + 1) (q^b - 1)^t C(n, t)
//! ```
//!
//! and the single-burst size is exactly `1 + n(q-1)q^{b-1}` for `n >= 2b`.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::error::{Error, Result};
use crate::metric::{burst_distance, within_burst_distance};
use crate::word::{all_words, check_enumeration_regime, validate_alphabet, Word, WordSet};

/// Binomial coefficient with the `k > n` convention of 0.
pub(crate) fn binom(n: usize, k: usize) -> BigUint {
    if k > n {
        BigUint::zero()
    } else {
        num_integer::binomial(BigUint::from(n), BigUint::from(k))
    }
}

pub(crate) fn big_pow(base: usize, exp: usize) -> BigUint {
    BigUint::from(base).pow(exp as u32)
}

/// A radius-`t` ball in the burst metric, with its members enumerated.
#[derive(Debug, Clone)]
pub struct Ball {
    center: Word,
    t: usize,
    b: usize,
    members: WordSet,
}

impl Ball {
    /// Enumerates the ball around `center`. Requires `n >= 2tb`.
    pub fn new(center: &Word, t: usize, b: usize) -> Result<Self> {
        let members = enumerate_ball(center, t, b)?;
        Ok(Ball {
            center: center.clone(),
            t,
            b,
            members,
        })
    }

    pub fn center(&self) -> &Word {
        &self.center
    }

    pub fn radius(&self) -> usize {
        self.t
    }

    pub fn burst_len(&self) -> usize {
        self.b
    }

    pub fn members(&self) -> &WordSet {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        false // a ball always contains its center
    }
}

fn check_ball_args(n: usize, b: usize, t: usize) -> Result<()> {
    if b == 0 {
        return Err(Error::InvalidParams("burst length b must be >= 1".into()));
    }
    check_enumeration_regime(n, b, t)
}

/// Visits every candidate member of `Ball_{t,b}(center)` (with duplicates):
/// all placements of `k <= t` disjoint intervals with values, added to the
/// center. The callback receives the symbol array of the candidate.
fn for_each_ball_candidate<F: FnMut(&[u8])>(center: &Word, t: usize, b: usize, f: &mut F) {
    let n = center.n();
    let q = center.q();
    let cs = center.symbols();
    let mut out = cs.to_vec();
    f(&out); // k = 0
    let mut intervals: Vec<(usize, usize)> = Vec::with_capacity(t);
    let mut err = vec![0u8; n];
    for k in 1..=t {
        place_intervals(cs, q, n, b, k, 0, None, &mut intervals, &mut err, &mut out, f);
    }
}

/// Recursively chooses `remaining` more interval placements (0-based starts,
/// strictly increasing; only the last may wrap, staying clear of the first),
/// then enumerates value assignments.
#[allow(clippy::too_many_arguments)]
fn place_intervals<F: FnMut(&[u8])>(
    center: &[u8],
    q: u8,
    n: usize,
    b: usize,
    remaining: usize,
    lo: usize,
    first_start: Option<usize>,
    intervals: &mut Vec<(usize, usize)>,
    err: &mut [u8],
    out: &mut [u8],
    f: &mut F,
) {
    for s in lo..n {
        for len in 1..=b {
            if remaining > 1 {
                if s + len > n {
                    break; // only the final interval may wrap
                }
                intervals.push((s, len));
                place_intervals(
                    center,
                    q,
                    n,
                    b,
                    remaining - 1,
                    s + len,
                    Some(first_start.unwrap_or(s)),
                    intervals,
                    err,
                    out,
                    f,
                );
                intervals.pop();
            } else {
                let fs = first_start.unwrap_or(s);
                if s + len > fs + n {
                    break; // wrapping into the first interval
                }
                intervals.push((s, len));
                assign_values(center, q, n, intervals, err, out, f);
                intervals.pop();
            }
        }
    }
}

/// Enumerates value assignments for a fixed placement: endpoints nonzero,
/// interior arbitrary; emits `center + error` for each.
fn assign_values<F: FnMut(&[u8])>(
    center: &[u8],
    q: u8,
    n: usize,
    intervals: &[(usize, usize)],
    err: &mut [u8],
    out: &mut [u8],
    f: &mut F,
) {
    let mut slots: Vec<(usize, bool)> = Vec::new();
    for &(s, len) in intervals {
        for j in 0..len {
            let endpoint = j == 0 || j == len - 1;
            slots.push(((s + j) % n, endpoint));
        }
    }
    fill_slots(center, q, n, &slots, 0, err, out, f);
    for &(pos, _) in &slots {
        err[pos] = 0;
    }
}

#[allow(clippy::too_many_arguments)]
fn fill_slots<F: FnMut(&[u8])>(
    center: &[u8],
    q: u8,
    n: usize,
    slots: &[(usize, bool)],
    i: usize,
    err: &mut [u8],
    out: &mut [u8],
    f: &mut F,
) {
    if i == slots.len() {
        for p in 0..n {
            out[p] = (center[p] + err[p]) % q;
        }
        f(out);
        return;
    }
    let (pos, endpoint) = slots[i];
    let lo = if endpoint { 1 } else { 0 };
    for v in lo..q {
        err[pos] = v;
        fill_slots(center, q, n, slots, i + 1, err, out, f);
    }
    err[pos] = 0;
}

/// Whether a packed `u128` key exists for length-`n` words over `Z_q`.
fn packable(n: usize, q: u8) -> bool {
    let mut acc: u128 = 1;
    for _ in 0..n {
        match acc.checked_mul(u128::from(q)) {
            Some(v) => acc = v,
            None => return false,
        }
    }
    true
}

fn pack_symbols(symbols: &[u8], q: u8) -> u128 {
    let mut acc: u128 = 0;
    for &s in symbols.iter().rev() {
        acc = acc * u128::from(q) + u128::from(s);
    }
    acc
}

/// Enumerates `Ball_{t,b}(center)` exactly. Requires `n >= 2tb`.
///
/// # Examples
///
/// ```
/// use cycburst::{balls::enumerate_ball, Word};
/// let zero = Word::zero(5, 2).unwrap();
/// assert_eq!(enumerate_ball(&zero, 1, 2).unwrap().len(), 11);
/// assert_eq!(enumerate_ball(&zero, 0, 2).unwrap().len(), 1);
/// ```
pub fn enumerate_ball(center: &Word, t: usize, b: usize) -> Result<WordSet> {
    check_ball_args(center.n(), b, t)?;
    let n = center.n();
    let q = center.q();
    let mut words: Vec<Word> = Vec::new();
    if packable(n, q) {
        let mut seen: HashSet<u128> = HashSet::new();
        for_each_ball_candidate(center, t, b, &mut |sym| {
            if seen.insert(pack_symbols(sym, q)) {
                words.push(Word::new(sym.to_vec(), q).expect("symbols in range"));
            }
        });
    } else {
        let mut seen: HashSet<Word> = HashSet::new();
        for_each_ball_candidate(center, t, b, &mut |sym| {
            let w = Word::new(sym.to_vec(), q).expect("symbols in range");
            if seen.insert(w.clone()) {
                words.push(w);
            }
        });
    }
    WordSet::from_words(words)
}

/// Counts `|Ball_{t,b}(center)|` without materializing the members.
fn count_ball(center: &Word, t: usize, b: usize) -> Result<u64> {
    check_ball_args(center.n(), b, t)?;
    let q = center.q();
    if packable(center.n(), q) {
        let mut seen: HashSet<u128> = HashSet::new();
        for_each_ball_candidate(center, t, b, &mut |sym| {
            seen.insert(pack_symbols(sym, q));
        });
        Ok(seen.len() as u64)
    } else {
        let mut seen: HashSet<Word> = HashSet::new();
        for_each_ball_candidate(center, t, b, &mut |sym| {
            seen.insert(Word::new(sym.to_vec(), q).expect("symbols in range"));
        });
        Ok(seen.len() as u64)
    }
}

/// Exact ball size when it is computable within `cap` members: `Ok(None)`
/// when `n < 2tb` (no disjoint decomposition, so no enumeration) or when
/// the closed-form upper bound exceeds `cap`; errors only on invalid
/// alphabet or `b = 0`.
pub(crate) fn try_ball_size_exact(
    n: usize,
    q: u8,
    b: usize,
    t: usize,
    cap: u64,
) -> Result<Option<u64>> {
    validate_alphabet(q)?;
    if b == 0 {
        return Err(Error::InvalidParams("burst length b must be >= 1".into()));
    }
    if n < 2 * t * b || n == 0 {
        return Ok(None);
    }
    if ball_upper_bound(n, q, b, t) > BigUint::from(cap) {
        return Ok(None);
    }
    count_ball(&Word::zero(n, q)?, t, b).map(Some)
}

/// Closed-form upper bound `(t+1)(q^b - 1)^t C(n, t)` on the ball size,
/// valid in the regime `n >= 2tb`.
pub fn ball_upper_bound(n: usize, q: u8, b: usize, t: usize) -> BigUint {
    let burst_values = big_pow(q as usize, b) - BigUint::one();
    BigUint::from(t + 1) * burst_values.pow(t as u32) * binom(n, t)
}

/// Closed-form lower bound: the least integer at least
/// `(1 - 1/q)^t (q^b - 1)^t C(n - (2b-2)t, t)`, valid for `n >= 2tb`.
pub fn ball_lower_bound(n: usize, q: u8, b: usize, t: usize) -> BigUint {
    let (num, den) = ball_lower_bound_fraction(n, q, b, t);
    if num.is_zero() {
        BigUint::zero()
    } else {
        num.div_ceil(&den)
    }
}

/// The lower bound as an exact fraction `(numerator, q^t)`.
fn ball_lower_bound_fraction(n: usize, q: u8, b: usize, t: usize) -> (BigUint, BigUint) {
    let shrunk = n.checked_sub((2 * b - 2) * t);
    let choose = match shrunk {
        Some(m) => binom(m, t),
        None => BigUint::zero(),
    };
    let burst_values = big_pow(q as usize, b) - BigUint::one();
    let num = big_pow(q as usize - 1, t) * burst_values.pow(t as u32) * choose;
    (num, big_pow(q as usize, t))
}

/// Exact single-burst ball size `1 + n(q-1)q^{b-1}`, valid for `n >= 2b`.
pub fn single_burst_ball_size(n: usize, q: u8, b: usize) -> BigUint {
    BigUint::one() + BigUint::from(n) * BigUint::from(q as usize - 1) * big_pow(q as usize, b - 1)
}

/// An exact ball size together with its closed-form sandwich bounds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallSize {
    /// Integer ceiling of the closed-form lower bound.
    pub lower: BigUint,
    /// Exact size from deduplicated enumeration.
    pub exact: u64,
    /// Closed-form upper bound.
    pub upper: BigUint,
}

/// Default ceiling on the enumeration size [`ball_size`] will attempt.
pub const BALL_ENUMERATION_CAP: u64 = 1 << 26;

/// Computes `|Ball_{t,b}(0)|` exactly by enumeration, together with the
/// sandwich bounds, asserting `lower <= exact <= upper` with exact integer
/// arithmetic. Requires `n >= 2tb`; errors as infeasible when the upper
/// bound exceeds [`BALL_ENUMERATION_CAP`].
///
/// # Examples
///
/// ```
/// use cycburst::balls::ball_size;
/// assert_eq!(ball_size(8, 2, 1, 1).unwrap().exact, 9);
/// assert_eq!(ball_size(10, 3, 2, 1).unwrap().exact, 61);
/// ```
pub fn ball_size(n: usize, q: u8, b: usize, t: usize) -> Result<BallSize> {
    validate_alphabet(q)?;
    check_ball_args(n, b, t)?;
    let upper = ball_upper_bound(n, q, b, t);
    if upper > BigUint::from(BALL_ENUMERATION_CAP) {
        return Err(Error::Infeasible(format!(
            "ball enumeration for n={n} q={q} b={b} t={t} could reach {upper} members \
             (cap {BALL_ENUMERATION_CAP})"
        )));
    }
    let exact = count_ball(&Word::zero(n, q)?, t, b)?;
    let (lower_num, lower_den) = ball_lower_bound_fraction(n, q, b, t);
    assert!(
        lower_num <= BigUint::from(exact) * &lower_den,
        "lower bound exceeds exact ball size at n={n} q={q} b={b} t={t}"
    );
    assert!(
        BigUint::from(exact) <= upper,
        "exact ball size exceeds upper bound at n={n} q={q} b={b} t={t}"
    );
    Ok(BallSize {
        lower: ball_lower_bound(n, q, b, t),
        exact,
        upper,
    })
}

/// The exact intersection `Ball_{t,b}(x) ∩ Ball_{t,b}(y)`, by enumerating
/// one ball and filtering by distance to the other center. Requires
/// `n >= 2tb`.
///
/// # Examples
///
/// ```
/// use cycburst::{balls::ball_intersection, Word};
/// let x = Word::zero(6, 2).unwrap();
/// let y = Word::from_text("110000", 2).unwrap();
/// let common = ball_intersection(&x, &y, 1, 1).unwrap();
/// let members: Vec<String> = common.iter().map(|w| w.to_string()).collect();
/// assert_eq!(members, vec!["010000", "100000"]);
/// ```
pub fn ball_intersection(x: &Word, y: &Word, t: usize, b: usize) -> Result<WordSet> {
    x.check_compatible(y)?;
    check_ball_args(x.n(), b, t)?;
    if x == y {
        return enumerate_ball(x, t, b);
    }
    if burst_distance(x, y, b)? > 2 * t {
        return WordSet::empty(x.n(), x.q());
    }
    let ball_x = enumerate_ball(x, t, b)?;
    let words: Vec<Word> = ball_x
        .iter()
        .filter(|w| within_burst_distance(w, y, b, t).expect("compatible words"))
        .cloned()
        .collect();
    if words.is_empty() {
        WordSet::empty(x.n(), x.q())
    } else {
        WordSet::from_words(words)
    }
}

/// Exact size of the intersection of two radius-`t` Hamming balls (the
/// `b = 1` burst metric) whose centers are at Hamming distance `d`:
///
/// ```text
/// sum_{i=0}^{t-ceil(d/2)} C(n-d, i)(q-1)^i
///     sum_{k,l >= d-t+i, k+l <= ...} C(d, k) C(d-k, l) (q-2)^{d-k-l}
/// ```
///
/// with both inner indices ranging up to `t - i`; terms with `k > d` or
/// `l > d - k` vanish, and `0^0 = 1` covers `q = 2`. Returns 0 when
/// `d > 2t`.
///
/// # Examples
///
/// ```
/// use cycburst::balls::hamming_ball_intersection_size;
/// use num_bigint::BigUint;
/// assert_eq!(
///     hamming_ball_intersection_size(6, 2, 1, 2).unwrap(),
///     BigUint::from(2u32)
/// );
/// assert_eq!(
///     hamming_ball_intersection_size(6, 2, 1, 3).unwrap(),
///     BigUint::from(0u32)
/// );
/// ```
pub fn hamming_ball_intersection_size(n: usize, q: u8, t: usize, d: usize) -> Result<BigUint> {
    validate_alphabet(q)?;
    if d > n {
        return Err(Error::InvalidParams(format!(
            "centers at Hamming distance {d} need length >= {d}, got n={n}"
        )));
    }
    if d > 2 * t {
        return Ok(BigUint::zero());
    }
    let qm1 = q as usize - 1;
    let qm2 = q as usize - 2;
    let mut total = BigUint::zero();
    let i_max = t - d.div_ceil(2);
    for i in 0..=i_max {
        let mut inner = BigUint::zero();
        let lo = (d + i).saturating_sub(t);
        let hi = t - i;
        for k in lo..=hi {
            if k > d {
                continue;
            }
            for l in lo..=hi {
                if l > d - k {
                    continue;
                }
                inner += binom(d, k) * binom(d - k, l) * big_pow(qm2, d - k - l);
            }
        }
        total += binom(n - d, i) * big_pow(qm1, i) * inner;
    }
    Ok(total)
}

enum BallKeys {
    Packed(Vec<u128>),
    Plain(Vec<Word>),
}

impl BallKeys {
    fn build(center: &Word, t: usize, b: usize) -> Result<Self> {
        let set = enumerate_ball(center, t, b)?;
        if packable(center.n(), center.q()) {
            let q = center.q();
            let mut keys: Vec<u128> = set.iter().map(|w| pack_symbols(w.symbols(), q)).collect();
            keys.sort_unstable();
            Ok(BallKeys::Packed(keys))
        } else {
            Ok(BallKeys::Plain(set.words().to_vec()))
        }
    }

    fn intersection_count(&self, other: &Self) -> usize {
        match (self, other) {
            (BallKeys::Packed(a), BallKeys::Packed(b)) => merge_count(a, b),
            (BallKeys::Plain(a), BallKeys::Plain(b)) => merge_count(a, b),
            _ => unreachable!("balls over the same (n, q) pack identically"),
        }
    }
}

fn merge_count<T: Ord>(a: &[T], b: &[T]) -> usize {
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// The reconstruction degree of a code and the codeword pair achieving it.
#[derive(Debug, Clone)]
pub struct DegreeReport {
    /// `max_{u != v} |Ball(u) ∩ Ball(v)| + 1`: the number of distinct reads
    /// guaranteeing unambiguous reconstruction.
    pub degree: u64,
    /// A pair attaining the maximal intersection (`None` when `|C| <= 1`).
    pub witness: Option<(Word, Word)>,
}

/// Computes the reconstruction degree `N(C)`: one more than the largest
/// pairwise intersection of radius-`t` balls around distinct codewords.
/// A code with at most one codeword has degree 1 (a single read decides).
///
/// # Examples
///
/// ```
/// use cycburst::{balls::reconstruction_degree, Word};
/// let code = vec![
///     Word::zero(6, 2).unwrap(),
///     Word::from_text("110000", 2).unwrap(),
/// ];
/// assert_eq!(reconstruction_degree(&code, 1, 1).unwrap().degree, 3);
/// ```
pub fn reconstruction_degree(code: &[Word], t: usize, b: usize) -> Result<DegreeReport> {
    if code.len() <= 1 {
        return Ok(DegreeReport {
            degree: 1,
            witness: None,
        });
    }
    for w in &code[1..] {
        code[0].check_compatible(w)?;
    }
    check_ball_args(code[0].n(), b, t)?;
    let balls: Vec<BallKeys> = code
        .iter()
        .map(|c| BallKeys::build(c, t, b))
        .collect::<Result<_>>()?;
    let mut best = 0usize;
    let mut witness = (code[0].clone(), code[1].clone());
    for i in 0..code.len() {
        for j in i + 1..code.len() {
            let common = balls[i].intersection_count(&balls[j]);
            if common > best {
                best = common;
                witness = (code[i].clone(), code[j].clone());
            }
        }
    }
    Ok(DegreeReport {
        degree: best as u64 + 1,
        witness: Some(witness),
    })
}

fn big_factorial(k: usize) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

/// Upper bound on the reconstruction degree of a `(t-s-1, b)`-burst-correcting
/// code, returned as an exact fraction `(numerator, denominator)`:
///
/// ```text
/// N(C) <= (t+1)^2 t^{t-s} 2^{t-s+1} b^{2(t-s)} q^{bt} n^s / s!
/// ```
///
/// Valid for `0 <= s <= t-1` in the regime `n >= 2tb`; only the `n^s` factor
/// grows with the length. Returning a fraction lets callers compare without
/// rounding: the bound holds iff `measured * denominator <= numerator`
/// (see [`degree_bound_holds`]).
///
/// # Examples
///
/// ```
/// use cycburst::balls::degree_upper_bound;
/// use num_bigint::BigUint;
/// // t=2, s=1: (t+1)^2 * t * 2^2 * b^2 * q^{2b} * n / 1!
/// let (num, den) = degree_upper_bound(8, 2, 1, 2, 1).unwrap();
/// assert_eq!(num, BigUint::from(9u32 * 2 * 4 * 1 * 4 * 8));
/// assert_eq!(den, BigUint::from(1u32));
/// ```
pub fn degree_upper_bound(
    n: usize,
    q: u8,
    b: usize,
    t: usize,
    s: usize,
) -> Result<(BigUint, BigUint)> {
    validate_alphabet(q)?;
    check_ball_args(n, b, t)?;
    if t == 0 || s >= t {
        return Err(Error::InvalidParams(format!(
            "degree bound needs 0 <= s <= t-1, got t={t} s={s}"
        )));
    }
    let e = t - s;
    let numerator = big_pow(t + 1, 2)
        * big_pow(t, e)
        * big_pow(2, e + 1)
        * big_pow(b, 2 * e)
        * big_pow(q as usize, b * t)
        * big_pow(n, s);
    Ok((numerator, big_factorial(s)))
}

/// Whether a measured reconstruction degree satisfies [`degree_upper_bound`],
/// compared exactly in integers. The comparison is only meaningful when the
/// code is in fact `(t-s-1, b)`-burst-correcting (pairwise burst distance at
/// least `2(t-s-1) + 1`); the caller is responsible for that hypothesis.
pub fn degree_bound_holds(
    measured: u64,
    n: usize,
    q: u8,
    b: usize,
    t: usize,
    s: usize,
) -> Result<bool> {
    let (num, den) = degree_upper_bound(n, q, b, t, s)?;
    Ok(BigUint::from(measured) * den <= num)
}

/// The diameter of a word set under `d_b`: the largest pairwise distance.
/// Errors on sets with fewer than two members.
pub fn diameter(set: &WordSet, b: usize) -> Result<usize> {
    if set.len() < 2 {
        return Err(Error::InvalidParams(
            "diameter needs at least two words".into(),
        ));
    }
    let words = set.words();
    let mut best = 0;
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            best = best.max(burst_distance(&words[i], &words[j], b)?);
        }
    }
    Ok(best)
}

/// One shifting step `S_{i,a}`: every member with symbol `a` at position `i`
/// is replaced by its zeroed-at-`i` version unless that word is already in
/// the set. Membership is tested against the original set, so the map is a
/// bijection on it and the cardinality is preserved.
///
/// # Examples
///
/// ```
/// use cycburst::{balls::shift, Word, WordSet};
/// let set = WordSet::from_words(vec![
///     Word::from_text("11", 2).unwrap(),
///     Word::from_text("01", 2).unwrap(),
/// ])
/// .unwrap();
/// // zeroing position 1 of "11" gives "01", already present: unchanged
/// assert_eq!(shift(&set, 1, 1).unwrap(), set);
/// ```
pub fn shift(set: &WordSet, i: usize, a: u8) -> Result<WordSet> {
    let (n, q) = (set.n(), set.q());
    if !(1..=n).contains(&i) {
        return Err(Error::InvalidParams(format!(
            "shift position {i} out of range 1..={n}"
        )));
    }
    if a == 0 || a >= q {
        return Err(Error::InvalidParams(format!(
            "shift symbol must satisfy 1 <= a < q, got a={a}, q={q}"
        )));
    }
    if set.is_empty() {
        return WordSet::empty(n, q);
    }
    let words: Vec<Word> = set
        .iter()
        .map(|x| {
            if x.symbol(i) == a {
                let zeroed = x.with_symbol(i, 0);
                if !set.contains(&zeroed) {
                    return zeroed;
                }
            }
            x.clone()
        })
        .collect();
    let shifted = WordSet::from_words(words)?;
    debug_assert_eq!(shifted.len(), set.len(), "shifting is a bijection");
    Ok(shifted)
}

/// Repeatedly applies all shifts `S_{i,a}` (positions ascending, symbols
/// ascending) until a full sweep changes nothing. Terminates because every
/// effective shift strictly lowers the total Hamming weight of the set.
pub fn shift_to_fixed_point(set: &WordSet) -> Result<WordSet> {
    let (n, q) = (set.n(), set.q());
    let mut cur = set.clone();
    loop {
        let mut changed = false;
        for i in 1..=n {
            for a in 1..q {
                let next = shift(&cur, i, a)?;
                if next != cur {
                    cur = next;
                    changed = true;
                }
            }
        }
        if !changed {
            return Ok(cur);
        }
    }
}

/// Whether every shift `S_{i,a}` leaves the set unchanged.
pub fn is_shift_fixed_point(set: &WordSet) -> Result<bool> {
    for i in 1..=set.n() {
        for a in 1..set.q() {
            if &shift(set, i, a)? != set {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Outcome of a diametric search: the largest set of diameter at most `2d`
/// the search found, compared against `|Ball_{d,b}(0)|`.
#[derive(Debug, Clone)]
pub struct DiametricReport {
    pub n: usize,
    pub q: u8,
    pub b: usize,
    pub d: usize,
    /// `|Ball_{d,b}(0)|` — the conjectured maximum for large `n`.
    pub ball_size: u64,
    /// Largest cardinality the search achieved.
    pub max_found: usize,
    /// Whether the search beat the ball (possible at small `n`; reported,
    /// never an error).
    pub exceeded: bool,
    /// A set attaining `max_found`.
    pub witness: WordSet,
    pub restarts: usize,
}

/// Searches for large sets of diameter at most `2d` under `d_b` and
/// compares against the radius-`d` ball: seeded random-restart greedy
/// growth over the whole domain, plus a shift-compress-and-regrow pass per
/// restart, starting from the ball itself as a baseline. The search is an
/// experiment, not a proof: `exceeded = true` is an honest report that a
/// larger set exists at this small `n`.
pub fn diametric_bound_check(
    n: usize,
    q: u8,
    b: usize,
    d: usize,
    restarts: usize,
    seed: u64,
) -> Result<DiametricReport> {
    validate_alphabet(q)?;
    check_ball_args(n, b, d)?;
    let ball = enumerate_ball(&Word::zero(n, q)?, d, b)?;
    let domain = all_words(n, q, 1 << 22)?;
    let mut best = ball.clone();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..domain.len()).collect();
    for _ in 0..restarts {
        order.shuffle(&mut rng);
        let grown = grow_bounded_diameter(&domain, &order, Vec::new(), b, 2 * d)?;
        if grown.len() > best.len() {
            best = WordSet::from_words(grown.clone())?;
        }
        // compress by shifting (diameter never increases), then regrow
        if grown.len() >= 2 {
            let compressed = shift_to_fixed_point(&WordSet::from_words(grown)?)?;
            let regrown =
                grow_bounded_diameter(&domain, &order, compressed.words().to_vec(), b, 2 * d)?;
            if regrown.len() > best.len() {
                best = WordSet::from_words(regrown)?;
            }
        }
    }
    let max_found = best.len();
    let ball_size = ball.len() as u64;
    Ok(DiametricReport {
        n,
        q,
        b,
        d,
        ball_size,
        max_found,
        exceeded: (max_found as u64) > ball_size,
        witness: best,
        restarts,
    })
}

fn grow_bounded_diameter(
    domain: &[Word],
    order: &[usize],
    start: Vec<Word>,
    b: usize,
    max_diameter: usize,
) -> Result<Vec<Word>> {
    let mut grown = start;
    for &idx in order {
        let cand = &domain[idx];
        if grown.iter().any(|w| w == cand) {
            continue;
        }
        let fits = grown
            .iter()
            .all(|w| within_burst_distance(w, cand, b, max_diameter).expect("compatible words"));
        if fits {
            grown.push(cand.clone());
        }
    }
    Ok(grown)
}
