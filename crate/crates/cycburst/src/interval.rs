//! Cyclic intervals of coordinates.
//!
//! A cyclic interval `[i, j]` over `[1, n]` runs clockwise from `i` to `j`
//! and wraps past `n` when `i > j`: `[i, j] = [i, n] ∪ [1, j]`. Its length is
//! `j - i + 1` without wrap and `n + j - i + 1` with wrap. Intervals are
//! stored as a 1-based start plus a length so the wrap case needs no special
//! representation.

use std::fmt;

use crate::error::{Error, Result};

/// A cyclic interval: `len` consecutive positions clockwise from `start`
/// (1-based). The ambient length `n` is supplied per call, so an interval
/// value can be reused across word lengths in which it fits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclicInterval {
    start: usize,
    len: usize,
}

impl CyclicInterval {
    /// Creates the interval of `len` positions clockwise from `start`.
    ///
    /// # Panics
    ///
    /// Panics if `start == 0` or `len == 0`; validity against a concrete `n`
    /// is checked by [`CyclicInterval::validate`].
    pub fn new(start: usize, len: usize) -> Self {
        assert!(start >= 1, "start is 1-based");
        assert!(len >= 1, "intervals are nonempty");
        CyclicInterval { start, len }
    }

    /// Builds `[i, j]` over `[1, n]`, wrapping when `i > j`.
    ///
    /// # Examples
    ///
    /// ```
    /// use cycburst::CyclicInterval;
    /// let plain = CyclicInterval::from_endpoints(2, 5, 8).unwrap();
    /// assert_eq!(plain.len(), 4);
    /// let wrap = CyclicInterval::from_endpoints(6, 1, 6).unwrap();
    /// assert_eq!(wrap.len(), 2); // positions 6 and 1
    /// ```
    pub fn from_endpoints(i: usize, j: usize, n: usize) -> Result<Self> {
        if i < 1 || j < 1 || i > n || j > n {
            return Err(Error::InvalidParams(format!(
                "endpoints [{i}, {j}] out of range 1..={n}"
            )));
        }
        let len = if i <= j { j - i + 1 } else { n + j - i + 1 };
        Ok(CyclicInterval { start: i, len })
    }

    /// 1-based start position.
    pub fn start(&self) -> usize {
        self.start
    }

    /// Number of positions covered.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false // intervals are nonempty by construction
    }

    /// 1-based inclusive end position over `[1, n]`.
    pub fn end(&self, n: usize) -> usize {
        (self.start - 1 + self.len - 1) % n + 1
    }

    /// Errors unless the interval fits in `[1, n]` (start in range,
    /// length at most `n`).
    pub fn validate(&self, n: usize) -> Result<()> {
        if self.start > n {
            return Err(Error::InvalidParams(format!(
                "interval start {} exceeds n={n}",
                self.start
            )));
        }
        if self.len > n {
            return Err(Error::InvalidParams(format!(
                "interval length {} exceeds n={n}",
                self.len
            )));
        }
        Ok(())
    }

    /// Whether the 1-based position lies in the interval.
    pub fn contains(&self, pos: usize, n: usize) -> bool {
        debug_assert!((1..=n).contains(&pos));
        (pos + n - self.start) % n < self.len
    }

    /// Iterates the covered positions clockwise (1-based).
    pub fn positions(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        let start = self.start;
        (0..self.len).map(move |k| (start - 1 + k) % n + 1)
    }

    /// The `(k, b)`-extension: `k*b` extra positions on each side,
    /// truncated to the whole circle when it would cover everything.
    pub fn extension(&self, k: usize, b: usize, n: usize) -> CyclicInterval {
        let grow = k * b;
        let len = (self.len + 2 * grow).min(n);
        if len == n {
            return CyclicInterval { start: 1, len: n };
        }
        // len < n here, so grow < n/2 and the subtraction stays positive
        let start = (self.start - 1 + n - grow) % n + 1;
        CyclicInterval { start, len }
    }
}

impl fmt::Display for CyclicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}+{}]", self.start, self.len)
    }
}

/// The cyclic gap between two intervals over `[1, n]`: the smaller of the
/// two runs of positions strictly between them. Negative exactly when the
/// intervals intersect (the value is then minus the number of shared
/// positions).
///
/// # Examples
///
/// ```
/// use cycburst::{interval_gap, CyclicInterval};
/// let a = CyclicInterval::from_endpoints(2, 2, 5).unwrap();
/// let b = CyclicInterval::from_endpoints(4, 5, 5).unwrap();
/// assert_eq!(interval_gap(&a, &b, 5).unwrap(), 1);
///
/// let a = CyclicInterval::from_endpoints(1, 2, 6).unwrap();
/// let b = CyclicInterval::from_endpoints(2, 3, 6).unwrap();
/// assert!(interval_gap(&a, &b, 6).unwrap() < 0);
///
/// let a = CyclicInterval::from_endpoints(1, 1, 6).unwrap();
/// let b = CyclicInterval::from_endpoints(3, 3, 6).unwrap();
/// assert_eq!(interval_gap(&a, &b, 6).unwrap(), 1);
/// ```
pub fn interval_gap(a: &CyclicInterval, b: &CyclicInterval, n: usize) -> Result<i64> {
    a.validate(n)?;
    b.validate(n)?;
    let overlap = (1..=n)
        .filter(|&p| a.contains(p, n) && b.contains(p, n))
        .count();
    if overlap > 0 {
        return Ok(-(overlap as i64));
    }
    // positions strictly between a's end and b's start, clockwise, and the
    // mirror run; the gap is the smaller of the two
    let fwd = (b.start() + n - a.end(n) - 1) % n;
    let bwd = (a.start() + n - b.end(n) - 1) % n;
    Ok(fwd.min(bwd) as i64)
}

/// Whether two intervals share no position.
pub fn intervals_disjoint(a: &CyclicInterval, b: &CyclicInterval, n: usize) -> Result<bool> {
    Ok(interval_gap(a, b, n)? >= 0)
}
