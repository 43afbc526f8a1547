//! Seeded simulator of the cyclic multiple-burst substitution channel:
//! sample error patterns, produce sets of distinct reads from a codeword's
//! ball, and classify read-count growth orders.
//!
//! The channel itself is adversarial — any output in `Ball_{t,b}(x)` is
//! legal — so the simulator offers two modes: a random mode for Monte Carlo
//! experiments (burst count uniform on `[0, t]`, interval placements by
//! rejection, endpoint values uniform nonzero; *not* uniform over the ball,
//! by design) and an adversarial mode that draws reads from the
//! intersection of two codewords' balls, the worst case reconstruction
//! bounds speak about.
//!
//! All randomness comes from ChaCha12 ([`crate::RNG_ALGORITHM`]); one
//! generator per task, derived by seed-plus-stream splitting, keeps
//! parallel experiments reproducible.

use std::collections::HashSet;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::balls::{ball_intersection, ball_upper_bound, enumerate_ball, try_ball_size_exact};
use crate::error::{Error, Result};
use crate::interval::{intervals_disjoint, CyclicInterval};
use crate::metric::{within_burst_distance, BurstError, ErrorPattern};
use crate::word::{check_enumeration_regime, validate_alphabet, Word};

/// Channel parameters plus the seed that makes a simulation reproducible.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChannelSpec {
    n: usize,
    q: u8,
    b: usize,
    t: usize,
    seed: u64,
}

impl ChannelSpec {
    /// Creates a channel description; requires the disjoint-decomposition
    /// regime `n >= 2tb`.
    pub fn new(n: usize, q: u8, b: usize, t: usize, seed: u64) -> Result<Self> {
        validate_alphabet(q)?;
        if b == 0 {
            return Err(Error::InvalidParams("burst length b must be >= 1".into()));
        }
        check_enumeration_regime(n, b, t)?;
        Ok(ChannelSpec { n, q, b, t, seed })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The generator for task number `stream` under this spec's seed.
    pub fn rng(&self, stream: u64) -> ChaCha12Rng {
        task_rng(self.seed, stream)
    }
}

/// A ChaCha12 generator for one task: same seed, per-task stream. Streams
/// are independent, so parallel tasks stay reproducible regardless of
/// scheduling.
pub fn task_rng(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Retry budget for one rejection-sampled error pattern.
const SAMPLE_RETRIES: usize = 200;

/// Samples one error pattern: burst count `k` uniform on `[0, t]`, then `k`
/// pairwise-disjoint cyclic intervals by rejection (uniform starts, uniform
/// lengths in `[1, b]`), endpoint values uniform nonzero, interior values
/// uniform. The distribution is *not* uniform over the ball. Rejection
/// failure after a bounded number of retries (possible when `n` is close to
/// `2tb`) is an explicit error, never a hang.
pub fn sample_error(spec: &ChannelSpec, rng: &mut impl Rng) -> Result<ErrorPattern> {
    let k = rng.gen_range(0..=spec.t);
    if k == 0 {
        return Ok(ErrorPattern::default());
    }
    'attempt: for _ in 0..SAMPLE_RETRIES {
        let mut intervals: Vec<CyclicInterval> = Vec::with_capacity(k);
        for _ in 0..k {
            let start = rng.gen_range(1..=spec.n);
            let len = rng.gen_range(1..=spec.b);
            let cand = CyclicInterval::new(start, len);
            for prev in &intervals {
                if !intervals_disjoint(prev, &cand, spec.n)? {
                    continue 'attempt;
                }
            }
            intervals.push(cand);
        }
        let mut bursts = Vec::with_capacity(k);
        for iv in intervals {
            let len = iv.len();
            let values: Vec<u8> = (0..len)
                .map(|j| {
                    if j == 0 || j == len - 1 {
                        rng.gen_range(1..spec.q)
                    } else {
                        rng.gen_range(0..spec.q)
                    }
                })
                .collect();
            bursts.push(BurstError::new(iv, values)?);
        }
        let pattern = ErrorPattern::new(bursts);
        debug_assert!(pattern.validate(spec.n, spec.q, spec.b).is_ok());
        return Ok(pattern);
    }
    Err(Error::SamplingExhausted(format!(
        "could not place {k} disjoint bursts of length <= {} on a cycle of length {} \
         in {SAMPLE_RETRIES} attempts",
        spec.b, spec.n
    )))
}

/// A set of distinct channel outputs, with the channel parameters that
/// produced it. The file form is a header `n=<n> q=<q> b=<b> t=<t> N=<N>
/// seed=<seed>` followed by one read per line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReadSet {
    spec: ChannelSpec,
    reads: Vec<Word>,
}

impl ReadSet {
    /// Wraps explicit reads, checking distinctness and shape.
    pub fn new(spec: ChannelSpec, mut reads: Vec<Word>) -> Result<Self> {
        for r in &reads {
            if r.n() != spec.n || r.q() != spec.q {
                return Err(Error::Mismatch(format!(
                    "read (n={}, q={}) does not match channel (n={}, q={})",
                    r.n(),
                    r.q(),
                    spec.n,
                    spec.q
                )));
            }
        }
        reads.sort_unstable();
        let before = reads.len();
        reads.dedup();
        if reads.len() != before {
            return Err(Error::InvalidParams("reads must be pairwise distinct".into()));
        }
        Ok(ReadSet { spec, reads })
    }

    pub fn spec(&self) -> &ChannelSpec {
        &self.spec
    }

    pub fn reads(&self) -> &[Word] {
        &self.reads
    }

    pub fn len(&self) -> usize {
        self.reads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reads.is_empty()
    }

    /// Checks every read lies in `Ball_{t,b}(source)`.
    pub fn validate_within_ball(&self, source: &Word) -> Result<()> {
        for r in &self.reads {
            if !within_burst_distance(source, r, self.spec.b, self.spec.t)? {
                return Err(Error::InvalidParams(format!(
                    "read {r} is farther than t={} bursts from the source",
                    self.spec.t
                )));
            }
        }
        Ok(())
    }

    /// Writes the canonical file form.
    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(
            out,
            "n={} q={} b={} t={} N={} seed={}",
            self.spec.n,
            self.spec.q,
            self.spec.b,
            self.spec.t,
            self.reads.len(),
            self.spec.seed
        )?;
        for r in &self.reads {
            writeln!(out, "{r}")?;
        }
        Ok(())
    }

    /// Reads the file form produced by [`ReadSet::write_to`].
    pub fn read_from<R: Read>(input: R) -> Result<Self> {
        let mut lines = BufReader::new(input).lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty read-set file".into()))??;
        let fields = parse_header_fields(&header, &["n", "q", "b", "t", "N", "seed"])?;
        let spec = ChannelSpec::new(
            fields[0] as usize,
            u8::try_from(fields[1])
                .map_err(|_| Error::Parse(format!("q={} out of range", fields[1])))?,
            fields[2] as usize,
            fields[3] as usize,
            fields[5],
        )?;
        let expect = fields[4] as usize;
        let mut reads = Vec::new();
        for line in lines {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            reads.push(Word::from_text(line, spec.q)?);
        }
        if reads.len() != expect {
            return Err(Error::Parse(format!(
                "header says N={expect} but file has {} reads",
                reads.len()
            )));
        }
        ReadSet::new(spec, reads)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let f = std::fs::File::create(path)?;
        self.write_to(std::io::BufWriter::new(f))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let f = std::fs::File::open(path)?;
        Self::read_from(f)
    }
}

pub(crate) fn parse_header_fields(header: &str, keys: &[&str]) -> Result<Vec<u64>> {
    let mut values = vec![None; keys.len()];
    for tok in header.split_whitespace() {
        if let Some((k, v)) = tok.split_once('=') {
            if let Some(i) = keys.iter().position(|&key| key == k) {
                values[i] = Some(v.parse::<u64>().map_err(|_| {
                    Error::Parse(format!("bad {k} value '{v}' in header '{header}'"))
                })?);
            }
        }
    }
    values
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| Error::Parse(format!("header '{header}' is missing {}=", keys[i])))
        })
        .collect()
}

/// Ball sizes up to this many members are enumerated exactly for
/// feasibility checks and the exhaustive fallback.
const READ_FEASIBILITY_CAP: u64 = 1 << 20;

/// Produces `n_reads` distinct reads of `x` through the channel: rejection
/// sampling without replacement, falling back to a seeded sample of the
/// fully enumerated ball when rejection stalls and the ball is small
/// enough. Requesting more reads than the ball holds is an error naming
/// the ball size.
pub fn generate_reads(x: &Word, spec: &ChannelSpec, n_reads: usize) -> Result<ReadSet> {
    if x.n() != spec.n || x.q() != spec.q {
        return Err(Error::Mismatch(format!(
            "source (n={}, q={}) does not match channel (n={}, q={})",
            x.n(),
            x.q(),
            spec.n,
            spec.q
        )));
    }
    if n_reads == 0 {
        return ReadSet::new(*spec, Vec::new());
    }
    let exact_size = try_ball_size_exact(spec.n, spec.q, spec.b, spec.t, READ_FEASIBILITY_CAP)?;
    if let Some(size) = exact_size {
        if (n_reads as u64) > size {
            return Err(Error::InvalidParams(format!(
                "requested {n_reads} distinct reads but |Ball_{{t={},b={}}}| = {size}",
                spec.t, spec.b
            )));
        }
    }
    let mut rng = spec.rng(0);
    let mut seen: HashSet<Word> = HashSet::with_capacity(n_reads);
    let mut reads: Vec<Word> = Vec::with_capacity(n_reads);
    let attempts = 50 * n_reads + 1000;
    for _ in 0..attempts {
        let pattern = sample_error(spec, &mut rng)?;
        let read = pattern.apply(x)?;
        if seen.insert(read.clone()) {
            reads.push(read);
            if reads.len() == n_reads {
                return ReadSet::new(*spec, reads);
            }
        }
    }
    // rejection stalled: enumerate if we can, otherwise give up loudly
    if exact_size.is_some() {
        let ball = enumerate_ball(x, spec.t, spec.b)?;
        let mut members: Vec<Word> = ball.words().to_vec();
        debug_assert!(n_reads <= members.len());
        members.shuffle(&mut rng);
        members.truncate(n_reads);
        return ReadSet::new(*spec, members);
    }
    Err(Error::SamplingExhausted(format!(
        "collected only {} of {n_reads} distinct reads in {attempts} attempts and the \
         ball is too large to enumerate (upper bound {})",
        reads.len(),
        ball_upper_bound(spec.n, spec.q, spec.b, spec.t)
    )))
}

/// Adversarial read generation: `n_reads` distinct words drawn (seeded,
/// without replacement) from `Ball_{t,b}(x) ∩ Ball_{t,b}(y)` — the
/// confusable region between two codewords. Errors when the intersection
/// is smaller than the request, naming both sizes.
pub fn generate_reads_adversarial(
    x: &Word,
    y: &Word,
    spec: &ChannelSpec,
    n_reads: usize,
) -> Result<ReadSet> {
    if x.n() != spec.n || x.q() != spec.q {
        return Err(Error::Mismatch(
            "source words do not match the channel shape".into(),
        ));
    }
    let common = ball_intersection(x, y, spec.t, spec.b)?;
    if common.len() < n_reads {
        return Err(Error::Infeasible(format!(
            "adversarial mode needs {n_reads} reads but the ball intersection holds only {}",
            common.len()
        )));
    }
    let mut members: Vec<Word> = common.words().to_vec();
    let mut rng = spec.rng(1);
    members.shuffle(&mut rng);
    members.truncate(n_reads);
    ReadSet::new(*spec, members)
}

/// Classifies the growth order of a read-count function from samples
/// `(n, N(n))`: returns `Some(-1)` when every `N(n) == 1`; otherwise the
/// smallest `s <= t` such that
///
/// * `|Ball_{s,b}(0)| < N(n)` at every supplied `n`, and
/// * the ratios `N(n) / |Ball_{s+1,b}(0)|` are strictly decreasing, and
/// * with at least 3 samples spanning `n_last >= 2 * n_first`, the last
///   ratio is at most 3/4 of the first (the finite-sample stand-in for
///   "decreasing toward 0"; the threshold is 3/4 because the boundary
///   family `N = |Ball_s| + 1` approaches halving from above at finite n).
///
/// Returns `Ok(None)` when no order can be certified. All comparisons are
/// exact integer cross-multiplications. Candidate orders whose
/// `(s+1)`-ball is not enumerable at the supplied lengths are skipped.
pub fn b_order(samples: &[(usize, u64)], q: u8, b: usize, t: usize) -> Result<Option<i64>> {
    validate_alphabet(q)?;
    if b == 0 {
        return Err(Error::InvalidParams("burst length b must be >= 1".into()));
    }
    if samples.is_empty() {
        return Err(Error::InvalidParams("need at least one (n, N) sample".into()));
    }
    for pair in samples.windows(2) {
        if pair[1].0 <= pair[0].0 {
            return Err(Error::InvalidParams(
                "sample lengths must be strictly increasing".into(),
            ));
        }
    }
    if samples.iter().all(|&(_, count)| count == 1) {
        return Ok(Some(-1));
    }
    let n_first = samples[0].0;
    let n_last = samples[samples.len() - 1].0;
    if samples.len() < 3 || n_last < 2 * n_first {
        // not enough evidence to certify a decay rate
        return Ok(None);
    }
    'candidate: for s in 0..=t {
        let mut inner = Vec::with_capacity(samples.len());
        let mut outer = Vec::with_capacity(samples.len());
        for &(n, count) in samples {
            let small = match try_ball_size_exact(n, q, b, s, READ_FEASIBILITY_CAP)? {
                Some(v) => v,
                None => continue 'candidate,
            };
            let big = match try_ball_size_exact(n, q, b, s + 1, READ_FEASIBILITY_CAP)? {
                Some(v) => v,
                None => continue 'candidate,
            };
            if small >= count {
                continue 'candidate;
            }
            inner.push(count);
            outer.push(big);
        }
        // ratios inner[i]/outer[i] strictly decreasing
        for i in 0..samples.len() - 1 {
            let lhs = u128::from(inner[i + 1]) * u128::from(outer[i]);
            let rhs = u128::from(inner[i]) * u128::from(outer[i + 1]);
            if lhs >= rhs {
                continue 'candidate;
            }
        }
        // last ratio <= (3/4) * first ratio
        let last = samples.len() - 1;
        let lhs = 4u128 * u128::from(inner[last]) * u128::from(outer[0]);
        let rhs = 3u128 * u128::from(inner[0]) * u128::from(outer[last]);
        if lhs > rhs {
            continue 'candidate;
        }
        return Ok(Some(s as i64));
    }
    Ok(None)
}
