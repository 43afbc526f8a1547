//! Burst-correcting code constructions and bound calculators: greedy
//! sphere-exclusion (the Gilbert–Varshamov argument made constructive),
//! a constant-burst-weight construction from hypergraph matchings, and
//! the Johnson-type counting bound those codes are measured against.
//!
//! A code is `(t,b)`-burst-correcting exactly when its minimum pairwise
//! burst distance is at least `2t + 1`; [`check_burst_code`] verifies
//! that directly, and every constructor's output passes it.

use std::collections::HashSet;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

use crate::balls::{ball_upper_bound, try_ball_size_exact};
use crate::error::{Error, Result};
use crate::interval::CyclicInterval;
use crate::metric::{burst_distance, within_burst_distance};
use crate::word::{all_words, validate_alphabet, Word, WordSet};

/// A code with its claimed correction radius and construction provenance.
///
/// The file form is a header `n=<n> q=<q> b=<b> designed_t=<t>
/// method=<method> seed=<seed|none>` followed by one codeword per line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Code {
    n: usize,
    q: u8,
    b: usize,
    designed_t: usize,
    words: WordSet,
    method: String,
    seed: Option<u64>,
}

impl Code {
    /// Wraps a word set as a code claiming to correct `designed_t` bursts
    /// of length at most `b`. The claim is *not* checked here; use
    /// [`check_burst_code`].
    pub fn new(
        b: usize,
        designed_t: usize,
        words: WordSet,
        method: impl Into<String>,
        seed: Option<u64>,
    ) -> Result<Self> {
        if b == 0 {
            return Err(Error::InvalidParams("burst length b must be >= 1".into()));
        }
        let method = method.into();
        if method.is_empty() || method.split_whitespace().count() != 1 {
            return Err(Error::InvalidParams(
                "method must be a single whitespace-free token".into(),
            ));
        }
        Ok(Code {
            n: words.n(),
            q: words.q(),
            b,
            designed_t,
            words,
            method,
            seed,
        })
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

    pub fn designed_t(&self) -> usize {
        self.designed_t
    }

    pub fn words(&self) -> &WordSet {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn method(&self) -> &str {
        &self.method
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// Writes the canonical file form.
    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        let seed = match self.seed {
            Some(s) => s.to_string(),
            None => "none".to_string(),
        };
        writeln!(
            out,
            "n={} q={} b={} designed_t={} method={} seed={seed}",
            self.n, self.q, self.b, self.designed_t, self.method
        )?;
        for w in self.words.iter() {
            writeln!(out, "{w}")?;
        }
        Ok(())
    }

    /// Reads the file form produced by [`Code::write_to`].
    pub fn read_from<R: Read>(input: R) -> Result<Self> {
        let mut lines = BufReader::new(input).lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty code file".into()))??;
        let mut n = None;
        let mut q = None;
        let mut b = None;
        let mut designed_t = None;
        let mut method = None;
        let mut seed = None;
        for tok in header.split_whitespace() {
            let (key, value) = tok
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad header token '{tok}'")))?;
            let numeric = || {
                value
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad {key} value '{value}'")))
            };
            match key {
                "n" => n = Some(numeric()? as usize),
                "q" => q = Some(numeric()? as u8),
                "b" => b = Some(numeric()? as usize),
                "designed_t" => designed_t = Some(numeric()? as usize),
                "method" => method = Some(value.to_string()),
                "seed" => {
                    seed = Some(if value == "none" {
                        None
                    } else {
                        Some(numeric()?)
                    })
                }
                _ => return Err(Error::Parse(format!("unknown header key '{key}'"))),
            }
        }
        let missing = |what: &str| Error::Parse(format!("code header is missing {what}="));
        let n = n.ok_or_else(|| missing("n"))?;
        let q = q.ok_or_else(|| missing("q"))?;
        let b = b.ok_or_else(|| missing("b"))?;
        let designed_t = designed_t.ok_or_else(|| missing("designed_t"))?;
        let method = method.ok_or_else(|| missing("method"))?;
        let seed = seed.ok_or_else(|| missing("seed"))?;
        validate_alphabet(q)?;
        let mut words = Vec::new();
        for line in lines {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let w = Word::from_text(line, q)?;
            if w.n() != n {
                return Err(Error::Parse(format!(
                    "codeword {w} has length {} but header says n={n}",
                    w.n()
                )));
            }
            words.push(w);
        }
        Code::new(b, designed_t, WordSet::from_words(words)?, method, seed)
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

/// Verdict of [`check_burst_code`]: either the minimum-distance claim
/// holds, or a violating pair is produced together with its distance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeCheck {
    pub ok: bool,
    pub witness: Option<(Word, Word)>,
    pub witness_distance: Option<usize>,
}

/// Checks that every pair of codewords is at burst distance at least
/// `2·designed_t + 1`; the first violating pair found (in sorted order) is
/// returned as a witness.
pub fn check_burst_code(code: &Code) -> Result<CodeCheck> {
    let need_beyond = 2 * code.designed_t;
    let words = code.words.words();
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            if within_burst_distance(&words[i], &words[j], code.b, need_beyond)? {
                let d = burst_distance(&words[i], &words[j], code.b)?;
                return Ok(CodeCheck {
                    ok: false,
                    witness: Some((words[i].clone(), words[j].clone())),
                    witness_distance: Some(d),
                });
            }
        }
    }
    Ok(CodeCheck {
        ok: true,
        witness: None,
        witness_distance: None,
    })
}

/// Minimum pairwise burst distance, or `None` for codes with fewer than
/// two words. A full scan — use [`check_burst_code`] when only the
/// threshold matters.
pub fn min_pairwise_distance(code: &Code) -> Result<Option<usize>> {
    let words = code.words.words();
    let mut min = None;
    for i in 0..words.len() {
        for j in i + 1..words.len() {
            let d = burst_distance(&words[i], &words[j], code.b)?;
            min = Some(min.map_or(d, |m: usize| m.min(d)));
        }
    }
    Ok(min)
}

/// Candidate order for the greedy sphere-exclusion construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GvOrdering {
    /// Scan all of `Σ_q^n` lexicographically; requires `q^n` enumerable.
    Lexicographic,
    /// Stream `budget` seeded-random candidates; may stop short of maximal.
    Seeded { seed: u64, budget: u64 },
}

/// Largest `q^n` the lexicographic ordering will enumerate.
pub const GV_LEX_CAP: u64 = 1 << 24;

/// Result of [`construct_gv`], with the counting floor the greedy argument
/// guarantees and whether a random-mode budget ran out.
#[derive(Debug, Clone)]
pub struct GvOutcome {
    pub code: Code,
    pub candidates_scanned: u64,
    /// True when a [`GvOrdering::Seeded`] budget was exhausted, so the code
    /// is best-so-far rather than maximal over the stream.
    pub budget_exhausted: bool,
    /// `⌈q^n / |Ball_{2t,b}(0)|⌉` when that ball is enumerable: every word
    /// is within `2t` bursts of a kept word, so the kept words number at
    /// least this many. `None` when `n < 4tb` or the ball is too large.
    pub gv_floor: Option<u64>,
}

/// Greedy sphere-exclusion construction: scan candidates in the given
/// order, keeping each word whose burst distance to all kept words is at
/// least `2·designed_t + 1`. Lexicographic order scans the whole space, so
/// the output is maximal and meets the counting floor; seeded-random order
/// scans `budget` candidates and flags when the budget ends the scan.
pub fn construct_gv(
    n: usize,
    q: u8,
    b: usize,
    designed_t: usize,
    ordering: GvOrdering,
) -> Result<GvOutcome> {
    validate_alphabet(q)?;
    if n == 0 || b == 0 {
        return Err(Error::InvalidParams("need n >= 1 and b >= 1".into()));
    }
    let gv_floor = match try_ball_size_exact(n, q, b, 2 * designed_t, GV_LEX_CAP)? {
        Some(ball) => {
            let space = (q as u64)
                .checked_pow(n as u32)
                .filter(|&s| s <= GV_LEX_CAP);
            space.map(|s| s.div_ceil(ball))
        }
        None => None,
    };
    let need_beyond = 2 * designed_t;
    let mut kept: Vec<Word> = Vec::new();
    let mut scanned: u64 = 0;
    let mut budget_exhausted = false;
    let keep_if_far = |cand: Word, kept: &mut Vec<Word>| -> Result<()> {
        for c in kept.iter() {
            if within_burst_distance(c, &cand, b, need_beyond)? {
                return Ok(());
            }
        }
        kept.push(cand);
        Ok(())
    };
    let (method, seed) = match ordering {
        GvOrdering::Lexicographic => {
            let space = (q as u64).checked_pow(n as u32);
            if !space.is_some_and(|s| s <= GV_LEX_CAP) {
                return Err(Error::Infeasible(format!(
                    "lexicographic scan needs q^n <= {GV_LEX_CAP}; n={n}, q={q} is too large \
                     (use seeded-random ordering)"
                )));
            }
            for cand in all_words(n, q, GV_LEX_CAP)? {
                scanned += 1;
                keep_if_far(cand, &mut kept)?;
            }
            ("gv-lex", None)
        }
        GvOrdering::Seeded { seed, budget } => {
            let mut rng = crate::channel::task_rng(seed, 0);
            for _ in 0..budget {
                let symbols: Vec<u8> = (0..n).map(|_| rng.gen_range(0..q)).collect();
                scanned += 1;
                keep_if_far(Word::new(symbols, q)?, &mut kept)?;
            }
            budget_exhausted = true;
            ("gv-random", Some(seed))
        }
    };
    if let Some(floor) = gv_floor {
        if matches!(ordering, GvOrdering::Lexicographic) {
            assert!(
                kept.len() as u64 >= floor,
                "sphere-exclusion kept {} words, below the counting floor {floor}",
                kept.len()
            );
        }
    }
    let code = Code::new(b, designed_t, WordSet::from_words(kept)?, method, seed)?;
    Ok(GvOutcome {
        code,
        candidates_scanned: scanned,
        budget_exhausted,
        gv_floor,
    })
}

/// The start sets of the constant-burst-weight construction: `w`-subsets
/// of `[1, n]` whose consecutive members are at least `3b` apart
/// cyclically (including the wrap from the last start back to the first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSet {
    n: usize,
    b: usize,
    w: usize,
    edges: Vec<Vec<usize>>,
}

impl EdgeSet {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn b(&self) -> usize {
        self.b
    }

    pub fn w(&self) -> usize {
        self.w
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Enumerates, in lexicographic order, every `w`-subset
/// `i_1 < i_2 < … < i_w` of `[1, n]` with `i_{j+1} >= i_j + 3b` and the
/// cyclic wrap `i_1 + n >= i_w + 3b`. Requires `n >= 3bw` (below that the
/// set is empty).
pub fn enumerate_edges(n: usize, b: usize, w: usize) -> Result<EdgeSet> {
    if b == 0 || w == 0 {
        return Err(Error::InvalidParams("need b >= 1 and w >= 1".into()));
    }
    if n < 3 * b * w {
        return Err(Error::InvalidParams(format!(
            "start spacing needs n >= 3bw (n={n}, b={b}, w={w})"
        )));
    }
    let spacing = 3 * b;
    let mut edges = Vec::new();
    let mut prefix = Vec::with_capacity(w);
    fn extend(
        n: usize,
        w: usize,
        spacing: usize,
        prefix: &mut Vec<usize>,
        edges: &mut Vec<Vec<usize>>,
    ) {
        if prefix.len() == w {
            // cyclic wrap: last start must clear the first by 3b
            if prefix[0] + n >= prefix[w - 1] + spacing {
                edges.push(prefix.clone());
            }
            return;
        }
        let lo = match prefix.last() {
            Some(&last) => last + spacing,
            None => 1,
        };
        for i in lo..=n {
            prefix.push(i);
            extend(n, w, spacing, prefix, edges);
            prefix.pop();
        }
    }
    extend(n, w, spacing, &mut prefix, &mut edges);
    Ok(EdgeSet { n, b, w, edges })
}

/// The codeword for one edge: zero everywhere except an all-one run of
/// length `b` starting (cyclically) at each chosen start.
pub fn matching_codeword(n: usize, q: u8, b: usize, edge: &[usize]) -> Result<Word> {
    let mut word = Word::zero(n, q)?;
    for &start in edge {
        for pos in CyclicInterval::new(start, b).positions(n) {
            word = word.with_symbol(pos, 1);
        }
    }
    Ok(word)
}

/// Greedy maximal matching: edges conflict when they share a
/// `(w−r)`-subset of starts, so matched edges pairwise share at most
/// `w−r−1` starts. Edges are taken in the enumeration (lexicographic)
/// order; returns indices into `edges.edges()`.
pub fn greedy_matching(edges: &EdgeSet, r: usize) -> Result<Vec<usize>> {
    if r > edges.w {
        return Err(Error::InvalidParams(format!(
            "correction radius r={r} exceeds weight w={}",
            edges.w
        )));
    }
    let t = edges.w - r;
    let mut used: HashSet<Vec<usize>> = HashSet::new();
    let mut chosen = Vec::new();
    for (idx, edge) in edges.edges.iter().enumerate() {
        let subs = combinations(edge, t);
        if subs.iter().any(|s| used.contains(s)) {
            continue;
        }
        used.extend(subs);
        chosen.push(idx);
    }
    Ok(chosen)
}

/// All `k`-subsets of `items`, in lexicographic order; `[[]]` for `k = 0`.
fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if items.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(items: &[usize], k: usize, from: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in from..items.len() {
            current.push(items[i]);
            rec(items, k, i + 1, current, out);
            current.pop();
        }
    }
    rec(items, k, 0, &mut current, &mut out);
    out
}

/// Result of [`construct_matching_code`]: the code plus the sizes that the
/// counting bounds talk about.
#[derive(Debug, Clone)]
pub struct MatchingOutcome {
    pub code: Code,
    /// The matched edges, in the order they were taken.
    pub chosen_edges: Vec<Vec<usize>>,
    /// Number of admissible edges before matching.
    pub edges_total: usize,
}

/// Constant-burst-weight construction: enumerate the admissible start
/// sets, take a greedy maximal matching (pairwise at most `w−r−1` shared
/// starts), and emit one codeword per matched edge. Every output word
/// lies in `Ball_{w,b}(0)` and pairwise burst distances are exactly
/// `2w − 2·|shared starts| >= 2r + 2`, so the code corrects `r` bursts.
/// `w = r` degenerates to a single codeword (any two edges conflict on
/// the empty subset).
pub fn construct_matching_code(
    n: usize,
    q: u8,
    b: usize,
    w: usize,
    r: usize,
) -> Result<MatchingOutcome> {
    validate_alphabet(q)?;
    if r > w {
        return Err(Error::InvalidParams(format!(
            "need w >= r (got w={w}, r={r})"
        )));
    }
    let edges = enumerate_edges(n, b, w)?;
    let chosen = greedy_matching(&edges, r)?;
    let mut words = Vec::with_capacity(chosen.len());
    let mut chosen_edges = Vec::with_capacity(chosen.len());
    for &idx in &chosen {
        words.push(matching_codeword(n, q, b, &edges.edges[idx])?);
        chosen_edges.push(edges.edges[idx].clone());
    }
    let code = Code::new(b, r, WordSet::from_words(words)?, "matching", None)?;
    Ok(MatchingOutcome {
        code,
        chosen_edges,
        edges_total: edges.len(),
    })
}

/// The counting bound `(w+1)(q^b − 1)^{w−r} n^{w−r}` on the size of any
/// code of burst weight at most `w` correcting `r` bursts of length at
/// most `b`. Requires `w >= r`.
pub fn johnson_upper_bound(n: usize, q: u8, b: usize, w: usize, r: usize) -> Result<BigUint> {
    validate_alphabet(q)?;
    if b == 0 {
        return Err(Error::InvalidParams("burst length b must be >= 1".into()));
    }
    if r > w {
        return Err(Error::InvalidParams(format!(
            "need w >= r (got w={w}, r={r})"
        )));
    }
    let burst_values = BigUint::from(q as usize).pow(b as u32) - BigUint::one();
    Ok(BigUint::from(w + 1)
        * burst_values.pow((w - r) as u32)
        * BigUint::from(n).pow((w - r) as u32))
}

/// Size, redundancy, and rate of a code, with the redundancy window the
/// counting arguments point at — evaluated without their additive
/// constants, so for orientation only, never for assertion.
#[derive(Debug, Clone, PartialEq)]
pub struct RedundancyReport {
    pub n: usize,
    pub size: u64,
    /// `n − log_q |C|`.
    pub redundancy: f64,
    /// `log_q |C| / n`.
    pub rate: f64,
    /// `t · log_q n`, the constant-free lower end of the window.
    pub window_lo: f64,
    /// `2t · log_q n`, the constant-free upper end of the window.
    pub window_hi: f64,
    /// Always true: the window drops additive constants, so it must not
    /// be asserted against.
    pub window_non_assertable: bool,
}

/// Computes the [`RedundancyReport`] for a nonempty code.
pub fn redundancy_report(code: &Code) -> RedundancyReport {
    let size = code.len() as u64;
    let log_q = |x: f64| x.ln() / f64::from(code.q()).ln();
    let dims = log_q(size as f64);
    let t = code.designed_t() as f64;
    RedundancyReport {
        n: code.n(),
        size,
        redundancy: code.n() as f64 - dims,
        rate: dims / code.n() as f64,
        window_lo: t * log_q(code.n() as f64),
        window_hi: 2.0 * t * log_q(code.n() as f64),
        window_non_assertable: true,
    }
}

/// A quick consistency bound: any `(r,b)`-burst-correcting code inside
/// `Ball_{w,b}(0)` is counted by [`johnson_upper_bound`], and for `r = 0`
/// the whole ball qualifies, so the bound must dominate the ball size.
pub fn johnson_dominates_ball(n: usize, q: u8, b: usize, w: usize) -> Result<bool> {
    let bound = johnson_upper_bound(n, q, b, w, 0)?;
    // compare against the closed-form upper bound when enumeration is out
    // of reach; both sides bound the ball from above, but the Johnson form
    // must dominate the exact size whenever we can compute it
    match try_ball_size_exact(n, q, b, w, GV_LEX_CAP)? {
        Some(exact) => Ok(bound >= BigUint::from(exact)),
        None => Ok(bound >= ball_upper_bound(n, q, b, w)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::balls::{ball_size, enumerate_ball, reconstruction_degree};
    use crate::metric::burst_weight;

    fn w(text: &str, q: u8) -> Word {
        Word::from_text(text, q).unwrap()
    }

    fn code_of(words: &[&str], q: u8, b: usize, designed_t: usize) -> Code {
        let words: Vec<Word> = words.iter().map(|s| w(s, q)).collect();
        Code::new(b, designed_t, WordSet::from_words(words).unwrap(), "explicit", None).unwrap()
    }

    #[test]
    fn singleton_code_is_trivially_ok() {
        let c = code_of(&["000000"], 2, 2, 3);
        assert!(check_burst_code(&c).unwrap().ok);
        assert_eq!(min_pairwise_distance(&c).unwrap(), None);
    }

    #[test]
    fn all_ones_versus_zero_corrects_one_double_burst() {
        let c = code_of(&["000000", "111111"], 2, 2, 1);
        let check = check_burst_code(&c).unwrap();
        assert!(check.ok);
        assert_eq!(min_pairwise_distance(&c).unwrap(), Some(3));
    }

    #[test]
    fn close_pair_is_witnessed() {
        let c = code_of(&["000000", "110000"], 2, 2, 1);
        let check = check_burst_code(&c).unwrap();
        assert!(!check.ok);
        assert_eq!(check.witness_distance, Some(1));
        let (a, bb) = check.witness.unwrap();
        assert_eq!((a, bb), (w("000000", 2), w("110000", 2)));
    }

    #[test]
    fn gv_with_zero_radius_keeps_the_whole_space() {
        let out = construct_gv(3, 2, 1, 0, GvOrdering::Lexicographic).unwrap();
        assert_eq!(out.code.len(), 8);
        assert_eq!(out.gv_floor, Some(8));
        assert!(!out.budget_exhausted);
    }

    #[test]
    fn gv_lexicographic_meets_the_counting_floor() {
        // ball of radius 2t = 2 at n=8, b=1 holds 37 words, so at least
        // ceil(256/37) = 7 must survive sphere exclusion
        let out = construct_gv(8, 2, 1, 1, GvOrdering::Lexicographic).unwrap();
        assert_eq!(out.gv_floor, Some(7));
        assert!(out.code.len() as u64 >= 7, "got {}", out.code.len());
        assert!(check_burst_code(&out.code).unwrap().ok);
        assert_eq!(out.candidates_scanned, 256);

        let out = construct_gv(10, 2, 2, 1, GvOrdering::Lexicographic).unwrap();
        let ball = ball_size(10, 2, 2, 2).unwrap().exact;
        assert_eq!(out.gv_floor, Some(1024u64.div_ceil(ball)));
        assert!(out.code.len() as u64 >= out.gv_floor.unwrap());
        assert!(check_burst_code(&out.code).unwrap().ok);
    }

    #[test]
    fn gv_random_mode_flags_its_budget() {
        let out = construct_gv(
            10,
            2,
            2,
            1,
            GvOrdering::Seeded { seed: 5, budget: 64 },
        )
        .unwrap();
        assert!(out.budget_exhausted);
        assert_eq!(out.candidates_scanned, 64);
        assert!(!out.code.is_empty());
        assert!(check_burst_code(&out.code).unwrap().ok);
        // determinism
        let again = construct_gv(10, 2, 2, 1, GvOrdering::Seeded { seed: 5, budget: 64 }).unwrap();
        assert_eq!(out.code, again.code);
    }

    #[test]
    fn gv_lexicographic_refuses_oversized_spaces() {
        assert!(construct_gv(40, 2, 1, 1, GvOrdering::Lexicographic).is_err());
    }

    #[test]
    fn burst_correcting_code_has_degree_one() {
        let out = construct_gv(8, 2, 1, 1, GvOrdering::Lexicographic).unwrap();
        let degree = reconstruction_degree(out.code.words().words(), 1, 1).unwrap();
        assert_eq!(degree.degree, 1);
    }

    #[test]
    fn edge_spacing_holds_cyclically() {
        let edges = enumerate_edges(12, 1, 3).unwrap();
        assert!(!edges.is_empty());
        for e in edges.edges() {
            for j in 0..e.len() - 1 {
                assert!(e[j + 1] >= e[j] + 3);
            }
            assert!(e[0] + 12 >= e[e.len() - 1] + 3);
        }
        // n = 3bw exactly: only the evenly spaced orbits survive
        let tight = enumerate_edges(6, 1, 2).unwrap();
        assert_eq!(
            tight.edges(),
            &[vec![1, 4], vec![2, 5], vec![3, 6]],
            "spacing 3 on a 6-cycle leaves the three diameters"
        );
        assert!(enumerate_edges(5, 1, 2).is_err());
    }

    #[test]
    fn matching_distance_identity_exhaustive() {
        // every admissible pair of edges, several (n, b, w, q) cells
        for &(n, b, wgt, q) in &[(20, 1, 2, 2), (20, 2, 2, 2), (20, 3, 2, 2), (12, 1, 3, 2), (20, 2, 3, 2), (15, 2, 2, 3)] {
            let edges = enumerate_edges(n, b, wgt).unwrap();
            let words: Vec<Word> = edges
                .edges()
                .iter()
                .map(|e| matching_codeword(n, q, b, e).unwrap())
                .collect();
            for (i, ei) in edges.edges().iter().enumerate() {
                assert_eq!(burst_weight(&words[i], b).unwrap(), wgt);
                for (j, ej) in edges.edges().iter().enumerate().skip(i + 1) {
                    let shared = ei.iter().filter(|x| ej.contains(x)).count();
                    assert_eq!(
                        burst_distance(&words[i], &words[j], b).unwrap(),
                        2 * wgt - 2 * shared,
                        "distance identity failed at n={n} b={b} w={wgt} q={q} edges {ei:?} {ej:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn matching_code_corrects_r_bursts() {
        let out = construct_matching_code(24, 2, 1, 2, 1).unwrap();
        assert!(out.code.len() >= 24 / 3, "greedy matching too small: {}", out.code.len());
        assert!(out.code.len() as u64 <= 3 * 24, "johnson: {}", out.code.len());
        let johnson = johnson_upper_bound(24, 2, 1, 2, 1).unwrap();
        assert!(BigUint::from(out.code.len()) <= johnson);
        assert_eq!(min_pairwise_distance(&out.code).unwrap(), Some(4));
        assert!(check_burst_code(&out.code).unwrap().ok);
        for cw in out.code.words().iter() {
            assert!(burst_weight(cw, 1).unwrap() <= 2);
        }
    }

    #[test]
    fn matching_with_w_equal_r_degenerates_to_one_codeword() {
        let out = construct_matching_code(12, 2, 1, 2, 2).unwrap();
        assert_eq!(out.code.len(), 1);
        assert!(out.edges_total > 1);
    }

    #[test]
    fn johnson_bound_values() {
        assert_eq!(johnson_upper_bound(24, 2, 1, 2, 1).unwrap(), BigUint::from(3u32 * 24));
        assert_eq!(
            johnson_upper_bound(10, 2, 2, 3, 1).unwrap(),
            BigUint::from(4u32 * 9 * 100)
        );
        assert_eq!(johnson_upper_bound(10, 2, 2, 3, 3).unwrap(), BigUint::from(4u32));
        assert!(johnson_upper_bound(10, 2, 2, 1, 3).is_err());
    }

    #[test]
    fn johnson_bound_dominates_the_ball_at_r_zero() {
        for &(n, q, b, wgt) in &[(8, 2, 1, 2), (8, 2, 2, 2), (10, 3, 1, 2), (12, 2, 2, 3)] {
            assert!(johnson_dominates_ball(n, q, b, wgt).unwrap());
        }
    }

    /// Exact maximum clique by branch and bound; fine for tens of vertices.
    fn largest_clique(adj: &[Vec<bool>]) -> usize {
        fn grow(adj: &[Vec<bool>], cand: &[usize], size: usize, best: &mut usize) {
            if size > *best {
                *best = size;
            }
            if size + cand.len() <= *best {
                return;
            }
            for (k, &v) in cand.iter().enumerate() {
                let next: Vec<usize> =
                    cand[k + 1..].iter().copied().filter(|&u| adj[v][u]).collect();
                grow(adj, &next, size + 1, best);
            }
        }
        let mut best = 0;
        let all: Vec<usize> = (0..adj.len()).collect();
        grow(adj, &all, 0, &mut best);
        best
    }

    #[test]
    fn johnson_at_w_equal_r_checked_exhaustively() {
        // the largest code of burst weight <= w and distance >= 2w+1 has
        // at most w+1 words; find the true maximum by clique search
        for &(n, q, b, wgt) in &[(10, 2, 1, 1), (10, 2, 1, 2), (8, 2, 2, 1)] {
            let ball = enumerate_ball(&Word::zero(n, q).unwrap(), wgt, b).unwrap();
            let members = ball.words();
            let adj: Vec<Vec<bool>> = members
                .iter()
                .map(|x| {
                    members
                        .iter()
                        .map(|y| burst_distance(x, y, b).unwrap() >= 2 * wgt + 1)
                        .collect()
                })
                .collect();
            let best = largest_clique(&adj);
            let bound = johnson_upper_bound(n, q, b, wgt, wgt).unwrap();
            assert!(
                BigUint::from(best) <= bound,
                "clique of {best} exceeds bound {bound} at n={n} q={q} b={b} w={wgt}"
            );
        }
    }

    #[test]
    fn redundancy_of_the_full_space_is_zero() {
        let out = construct_gv(3, 2, 1, 0, GvOrdering::Lexicographic).unwrap();
        let rep = redundancy_report(&out.code);
        assert!(rep.redundancy.abs() < 1e-9);
        assert!((rep.rate - 1.0).abs() < 1e-9);
        assert!(rep.window_non_assertable);
    }

    #[test]
    fn redundancy_tracks_the_size() {
        let out = construct_gv(8, 2, 1, 1, GvOrdering::Lexicographic).unwrap();
        let rep = redundancy_report(&out.code);
        let expect = 8.0 - (out.code.len() as f64).log2();
        assert!((rep.redundancy - expect).abs() < 1e-9);
        assert!(rep.redundancy <= 8.0 - 7f64.log2() + 1e-9);
        assert!(rep.window_lo <= rep.window_hi);
    }

    #[test]
    fn code_file_round_trip() {
        let out = construct_matching_code(12, 2, 1, 2, 1).unwrap();
        let mut buf = Vec::new();
        out.code.write_to(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(
            text.starts_with("n=12 q=2 b=1 designed_t=1 method=matching seed=none\n"),
            "{text}"
        );
        let back = Code::read_from(&buf[..]).unwrap();
        assert_eq!(back, out.code);

        let gv = construct_gv(6, 2, 1, 1, GvOrdering::Seeded { seed: 9, budget: 40 })
            .unwrap()
            .code;
        let mut buf = Vec::new();
        gv.write_to(&mut buf).unwrap();
        let back = Code::read_from(&buf[..]).unwrap();
        assert_eq!(back, gv);
        assert_eq!(back.seed(), Some(9));
    }
}
