//! Reconstruction from multiple reads: exact unique reconstruction by
//! ball intersection, the majority-with-threshold vote, and the
//! star-completion list-reconstruction algorithm built on top of it.
//!
//! The list algorithm votes coordinatewise with a threshold chosen so
//! that, when the reads really come from one codeword's ball, only a
//! constant number of positions stay undecided (`⋆`). Each way of filling
//! the `⋆` positions is handed to a list decoder of radius `t−s+h` (here:
//! a linear scan of the explicit code), and the union is filtered down to
//! codewords whose radius-`t` ball contains every read. The output is
//! therefore always a subset of the true list
//! `C ∩ ⋂_i Ball_{t,b}(y_i)`, and equals it once `n` clears the
//! correctness threshold.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigUint;

use crate::codes::Code;
use crate::error::{Error, Result};
use crate::metric::within_burst_distance;
use crate::word::{Word, WordSet};

/// A majority vote outcome: one symbol per position, or `⋆` where no
/// symbol's count cleared the threshold.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MajWord {
    q: u8,
    symbols: Vec<Option<u8>>,
}

impl MajWord {
    pub fn n(&self) -> usize {
        self.symbols.len()
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn symbols(&self) -> &[Option<u8>] {
        &self.symbols
    }

    /// 1-based positions left undecided.
    pub fn stars(&self) -> Vec<usize> {
        self.symbols
            .iter()
            .enumerate()
            .filter_map(|(i, s)| s.is_none().then_some(i + 1))
            .collect()
    }

    pub fn star_count(&self) -> usize {
        self.symbols.iter().filter(|s| s.is_none()).count()
    }

    /// The underlying word when every position is decided.
    pub fn to_word(&self) -> Option<Word> {
        let symbols: Option<Vec<u8>> = self.symbols.iter().copied().collect();
        symbols.map(|s| Word::new(s, self.q).expect("symbols in range"))
    }
}

impl fmt::Display for MajWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.symbols {
            match s {
                Some(v) => {
                    let c = char::from_digit(u32::from(*v), 36).expect("symbol < 36");
                    write!(f, "{c}")?;
                }
                None => write!(f, "*")?,
            }
        }
        Ok(())
    }
}

/// Coordinatewise majority with threshold `τ = tau_num / tau_den`:
/// position `j` gets the most frequent symbol when its count `m`
/// satisfies `m > (N + τ)/2`, and `⋆` otherwise. The comparison is exact
/// (`2·m·tau_den > N·tau_den + tau_num`), so the strict inequality at the
/// boundary is bit-exact. Since `τ >= 0`, a winner above threshold is
/// automatically unique.
pub fn majority_threshold(reads: &[Word], tau_num: u64, tau_den: u64) -> Result<MajWord> {
    if reads.is_empty() {
        return Err(Error::InvalidParams("majority needs at least one read".into()));
    }
    if tau_den == 0 {
        return Err(Error::InvalidParams("threshold denominator must be nonzero".into()));
    }
    let n = reads[0].n();
    let q = reads[0].q();
    for r in reads {
        reads[0].check_compatible(r)?;
    }
    let n_reads = reads.len() as u128;
    let num = u128::from(tau_num);
    let den = u128::from(tau_den);
    let mut symbols = Vec::with_capacity(n);
    let mut counts = vec![0u64; q as usize];
    for j in 1..=n {
        counts.iter_mut().for_each(|c| *c = 0);
        for r in reads {
            counts[r.symbol(j) as usize] += 1;
        }
        let (winner, m) = counts
            .iter()
            .enumerate()
            .max_by_key(|&(_, &c)| c)
            .expect("alphabet nonempty");
        // m > (N + τ)/2  ⟺  2·m·den > N·den + num
        if 2 * u128::from(*m) * den > n_reads * den + num {
            symbols.push(Some(winner as u8));
        } else {
            symbols.push(None);
        }
    }
    Ok(MajWord { q, symbols })
}

/// The list decoder's voting threshold, as an exact rational:
/// `τ = (1 − 2/D)·N` with `D = (t−s+h+1)·b + 1`, returned as
/// `((D−2)·N, D)`.
pub fn algorithm_tau(t: usize, s: usize, h: usize, b: usize, n_reads: usize) -> (u64, u64) {
    let d = ((t - s + h + 1) * b + 1) as u64;
    ((d - 2) * n_reads as u64, d)
}

/// List decoding by linear scan: all codewords within burst distance
/// `radius` of `u`. Cost `O(|C|·n)`.
pub fn list_decode_bruteforce(code: &Code, u: &Word, radius: usize) -> Result<WordSet> {
    if u.n() != code.n() || u.q() != code.q() {
        return Err(Error::Mismatch(
            "word shape does not match the code".into(),
        ));
    }
    let mut found = Vec::new();
    for c in code.words().iter() {
        if within_burst_distance(c, u, code.b(), radius)? {
            found.push(c.clone());
        }
    }
    if found.is_empty() {
        WordSet::empty(code.n(), code.q())
    } else {
        WordSet::from_words(found)
    }
}

/// Outcome of [`unique_reconstruct`]: either exactly one codeword is
/// consistent with every read, or the full consistent set is reported.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UniqueOutcome {
    Unique(Word),
    Ambiguous(WordSet),
}

fn check_reads(code: &Code, reads: &[Word]) -> Result<()> {
    if reads.is_empty() {
        return Err(Error::InvalidParams("need at least one read".into()));
    }
    for r in reads {
        if r.n() != code.n() || r.q() != code.q() {
            return Err(Error::Mismatch("read shape does not match the code".into()));
        }
    }
    let mut sorted: Vec<&Word> = reads.iter().collect();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidParams(
            "reads must be pairwise distinct".into(),
        ));
    }
    Ok(())
}

/// The codewords consistent with every read: `C ∩ ⋂_i Ball_{t,b}(y_i)`,
/// by scanning the code.
fn consistent_codewords(code: &Code, reads: &[Word], t: usize, b: usize) -> Result<Vec<Word>> {
    let mut found = Vec::new();
    'next: for c in code.words().iter() {
        for y in reads {
            if !within_burst_distance(c, y, b, t)? {
                continue 'next;
            }
        }
        found.push(c.clone());
    }
    Ok(found)
}

/// The exact answer set `C ∩ ⋂_i Ball_{t,b}(y_i)` by brute-force scan of
/// the code — the ground truth that [`list_reconstruct`] must reproduce.
/// The set may be empty.
pub fn consistent_set(code: &Code, reads: &[Word], t: usize, b: usize) -> Result<WordSet> {
    check_reads(code, reads)?;
    let found = consistent_codewords(code, reads, t, b)?;
    if found.is_empty() {
        WordSet::empty(code.n(), code.q())
    } else {
        WordSet::from_words(found)
    }
}

/// Unique reconstruction: intersect the radius-`t` balls of all reads
/// with the code. A singleton is returned as such; two or more survivors
/// produce an [`UniqueOutcome::Ambiguous`] report carrying the full set;
/// an empty intersection means the reads are inconsistent with the code
/// and is an error.
pub fn unique_reconstruct(
    code: &Code,
    reads: &[Word],
    t: usize,
    b: usize,
) -> Result<UniqueOutcome> {
    check_reads(code, reads)?;
    let found = consistent_codewords(code, reads, t, b)?;
    match found.len() {
        0 => Err(Error::InconsistentReads),
        1 => Ok(UniqueOutcome::Unique(found.into_iter().next().unwrap())),
        _ => Ok(UniqueOutcome::Ambiguous(WordSet::from_words(found)?)),
    }
}

/// Counters describing one list-reconstruction run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ListStats {
    pub reads: usize,
    /// Threshold numerator (`τ = tau_num / tau_den`).
    pub tau_num: u64,
    pub tau_den: u64,
    /// Undecided positions after the vote.
    pub stars: usize,
    /// Completions enumerated, `q^stars`.
    pub candidates: u64,
    /// List-decoder invocations (one per completion).
    pub decoder_calls: u64,
}

/// The reconstructed list plus its run statistics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListResult {
    pub codewords: WordSet,
    pub stats: ListStats,
}

/// Default ceiling on `q^stars`, expressed in bits.
pub const STAR_CAP_BITS: u32 = 24;

/// The bound on the number of `⋆` positions when the reads genuinely come
/// from one codeword's radius-`t` ball: `b·t·((t−s+h+1)·b + 1)`.
pub fn star_count_bound(t: usize, s: usize, h: usize, b: usize) -> usize {
    b * t * ((t - s + h + 1) * b + 1)
}

/// Exact evaluation of the list-size bound `t · q^{b(h+10t)} · n^h`.
/// Requires `t >= s >= h >= 1`.
pub fn list_size_bound(n: usize, q: u8, b: usize, t: usize, s: usize, h: usize) -> Result<BigUint> {
    if !(t >= s && s >= h && h >= 1) {
        return Err(Error::InvalidParams(format!(
            "list-size bound needs t >= s >= h >= 1 (got t={t}, s={s}, h={h})"
        )));
    }
    Ok(BigUint::from(t)
        * BigUint::from(q as usize).pow((b * (h + 10 * t)) as u32)
        * BigUint::from(n).pow(h as u32))
}

/// List reconstruction with the default candidate cap of
/// [`STAR_CAP_BITS`] bits; see [`list_reconstruct_with_cap`].
pub fn list_reconstruct(
    code: &Code,
    reads: &[Word],
    t: usize,
    b: usize,
    s: usize,
    h: usize,
) -> Result<ListResult> {
    list_reconstruct_with_cap(code, reads, t, b, s, h, STAR_CAP_BITS)
}

/// Majority-with-threshold list reconstruction.
///
/// Requires `t >= s >= h` and a code whose minimum distance certifies it
/// `(t−s−1, b)`-burst-correcting (no constraint beyond distinctness when
/// `t−s−1 <= 0`). With `h = 0` unique reconstruction applies, so the full
/// consistent set is computed directly by scanning the code. Otherwise:
/// vote with `τ = (1 − 2/D)·N`, `D = (t−s+h+1)b+1`; enumerate every
/// completion of the undecided positions (failing loudly when `q^stars`
/// exceeds `cap_bits` bits — malformed reads can inflate the star count,
/// whose in-model bound is [`star_count_bound`]); list-decode each
/// completion at radius `t−s+h`; keep the union's codewords whose
/// radius-`t` ball contains every read.
///
/// The output is always a subset of `C ∩ ⋂_i Ball_{t,b}(y_i)`.
pub fn list_reconstruct_with_cap(
    code: &Code,
    reads: &[Word],
    t: usize,
    b: usize,
    s: usize,
    h: usize,
    cap_bits: u32,
) -> Result<ListResult> {
    if !(t >= s && s >= h) {
        return Err(Error::InvalidParams(format!(
            "need t >= s >= h (got t={t}, s={s}, h={h})"
        )));
    }
    check_reads(code, reads)?;
    // precondition: the code corrects t−s−1 bursts (min distance 2(t−s−1)+1)
    if t > s + 1 {
        let needed = t - s - 1;
        let words = code.words().words();
        for i in 0..words.len() {
            for j in i + 1..words.len() {
                if within_burst_distance(&words[i], &words[j], b, 2 * needed)? {
                    return Err(Error::InvalidParams(format!(
                        "code is not ({needed},{b})-burst-correcting: {} and {} are too close",
                        words[i], words[j]
                    )));
                }
            }
        }
    }
    let n_reads = reads.len();
    let (tau_num, tau_den) = algorithm_tau(t, s, h, b, n_reads);
    if h == 0 {
        // one read per ball-size step suffices for unique reconstruction;
        // the consistent set is exactly the target intersection
        let found = consistent_codewords(code, reads, t, b)?;
        let codewords = if found.is_empty() {
            WordSet::empty(code.n(), code.q())?
        } else {
            WordSet::from_words(found)?
        };
        return Ok(ListResult {
            codewords,
            stats: ListStats {
                reads: n_reads,
                tau_num,
                tau_den,
                stars: 0,
                candidates: 0,
                decoder_calls: 0,
            },
        });
    }
    if cap_bits > 40 {
        return Err(Error::InvalidParams(
            "candidate cap above 40 bits is never tractable".into(),
        ));
    }
    let z = majority_threshold(reads, tau_num, tau_den)?;
    let stars = z.stars();
    let q = code.q();
    let candidates = (q as u128)
        .checked_pow(stars.len() as u32)
        .filter(|&c| c <= 1u128 << cap_bits);
    let Some(candidates) = candidates else {
        return Err(Error::StarOverflow {
            stars: stars.len(),
            cap_bits,
            theoretical: star_count_bound(t, s, h, b),
        });
    };
    let candidates = candidates as u64;
    let radius = t - s + h;
    // positions decided by the vote are shared by every completion, so a
    // codeword differing from the vote in more than radius·b of them can
    // never be list-decoded: filter those out once, not per completion
    let mut survivors: Vec<&Word> = Vec::new();
    for c in code.words().iter() {
        let mut base_mismatch = 0usize;
        for (j, sym) in z.symbols().iter().enumerate() {
            if let Some(v) = sym {
                if c.symbol(j + 1) != *v {
                    base_mismatch += 1;
                }
            }
        }
        if base_mismatch <= radius * b {
            survivors.push(c);
        }
    }
    let mut union: HashSet<Word> = HashSet::new();
    let mut decoder_calls = 0u64;
    let mut fill = vec![0u8; stars.len()];
    let mut candidate = match z.to_word() {
        Some(w) => w,
        None => {
            let mut w = Word::zero(code.n(), q)?;
            for (j, sym) in z.symbols().iter().enumerate() {
                if let Some(v) = sym {
                    w = w.with_symbol(j + 1, *v);
                }
            }
            w
        }
    };
    loop {
        for (k, &pos) in stars.iter().enumerate() {
            candidate = candidate.with_symbol(pos, fill[k]);
        }
        decoder_calls += 1;
        for c in &survivors {
            if union.contains(*c) {
                continue;
            }
            if within_burst_distance(c, &candidate, b, radius)? {
                union.insert((*c).clone());
            }
        }
        // odometer over the star positions
        let mut k = 0;
        loop {
            if k == fill.len() {
                break;
            }
            fill[k] += 1;
            if fill[k] < q {
                break;
            }
            fill[k] = 0;
            k += 1;
        }
        if k == fill.len() {
            break;
        }
    }
    debug_assert_eq!(decoder_calls, candidates);
    let mut kept = Vec::new();
    'next: for c in union {
        for y in reads {
            if !within_burst_distance(&c, y, b, t)? {
                continue 'next;
            }
        }
        kept.push(c);
    }
    let codewords = if kept.is_empty() {
        WordSet::empty(code.n(), code.q())?
    } else {
        WordSet::from_words(kept)?
    };
    Ok(ListResult {
        codewords,
        stats: ListStats {
            reads: n_reads,
            tau_num,
            tau_den,
            stars: stars.len(),
            candidates,
            decoder_calls,
        },
    })
}
