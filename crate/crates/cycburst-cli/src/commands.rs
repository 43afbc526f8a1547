//! The eleven subcommands: argument records, execution, and table
//! assembly. Every command returns its artifact plus the canonical config
//! that seeds the metadata block, and reports whether all inequality flag
//! columns came out true (a false flag maps to exit code 2).

use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use cycburst::balls::{
    ball_intersection, ball_lower_bound, ball_size, ball_upper_bound, degree_bound_holds,
    diameter, diametric_bound_check, is_shift_fixed_point, reconstruction_degree, shift,
    shift_to_fixed_point,
};
use cycburst::{
    burst_distance, check_burst_code, consistent_set, construct_gv, construct_matching_code,
    decompose_disjoint, generate_reads, generate_reads_adversarial, johnson_upper_bound,
    list_reconstruct_with_cap, list_size_bound, min_pairwise_distance, task_rng,
    within_burst_distance, ChannelSpec, Code, Error, GvOrdering, ReadSet, UniqueOutcome, Word,
    WordSet, GV_LEX_CAP, STAR_CAP_BITS,
};

use crate::table::{config_hash, Artifact, Checkpoint, Format, Table};

/// Global options shared by every command.
pub struct Ctx {
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

/// What a command hands back to `main` for rendering and exit-code
/// selection.
pub struct CommandOutput {
    pub artifact: Artifact,
    /// Canonical config echoed into the artifact metadata.
    pub config: Value,
    /// False when any inequality flag column is false (exit code 2).
    pub flags_ok: bool,
    /// True for commands whose `--out` receives a word/code file: their
    /// summary table always goes to stdout.
    pub artifact_to_stdout: bool,
}

impl CommandOutput {
    fn table(table: Table, config: Value, flags_ok: bool) -> CommandOutput {
        CommandOutput {
            artifact: Artifact::Table(table),
            config,
            flags_ok,
            artifact_to_stdout: false,
        }
    }
}

#[derive(Subcommand)]
pub enum Command {
    /// Burst distance between two words, with a disjoint-burst decomposition.
    Distance(DistanceArgs),
    /// Exact ball sizes with sandwich bounds over a parameter sweep.
    Ballsize(BallsizeArgs),
    /// Intersection of two error balls and the empty-iff-far test.
    Intersect(IntersectArgs),
    /// Build a burst-correcting code (greedy sphere exclusion or matching).
    Construct(ConstructArgs),
    /// Verify a code file's minimum-distance claim.
    Check(CheckArgs),
    /// Reconstruction degree of a code, optionally against the counting bound.
    Degree(DegreeArgs),
    /// Apply the shifting compression to a word-set file.
    Shift(ShiftArgs),
    /// Search for diameter-bounded sets larger than the error ball.
    Diametric(DiametricArgs),
    /// Monte Carlo reconstruction trials over a noisy channel.
    Simulate(SimulateArgs),
    /// Reconstruct one read set against a code (single-run JSON result).
    Reconstruct(ReconstructArgs),
    /// Degree/list-size trade-off sweep against the read-budget identity.
    Tradeoff(TradeoffArgs),
}

pub fn dispatch(command: Command, ctx: &Ctx) -> Result<CommandOutput> {
    match command {
        Command::Distance(a) => cmd_distance(a, ctx),
        Command::Ballsize(a) => cmd_ballsize(a, ctx),
        Command::Intersect(a) => cmd_intersect(a, ctx),
        Command::Construct(a) => cmd_construct(a, ctx),
        Command::Check(a) => cmd_check(a, ctx),
        Command::Degree(a) => cmd_degree(a, ctx),
        Command::Shift(a) => cmd_shift(a, ctx),
        Command::Diametric(a) => cmd_diametric(a, ctx),
        Command::Simulate(a) => cmd_simulate(a, ctx),
        Command::Reconstruct(a) => cmd_reconstruct(a, ctx),
        Command::Tradeoff(a) => cmd_tradeoff(a, ctx),
    }
}

/// Parses a sweep list: comma-separated entries, each a number or an
/// inclusive range `lo..hi` (e.g. `6..14`, `6,8,10`, `6..10,12`).
fn parse_list(text: &str) -> Result<Vec<usize>> {
    let mut values = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if part.is_empty() {
            bail!("empty entry in list '{text}'");
        }
        if let Some((lo, hi)) = part.split_once("..") {
            let lo: usize = lo.trim().parse().context("bad range start")?;
            let hi: usize = hi.trim().parse().context("bad range end")?;
            if lo > hi {
                bail!("range '{part}' runs backwards");
            }
            values.extend(lo..=hi);
        } else {
            values.push(part.parse().with_context(|| format!("bad entry '{part}'"))?);
        }
    }
    Ok(values)
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn big(x: &BigUint) -> Value {
    Value::String(x.to_string())
}

// ---------------------------------------------------------------- distance

#[derive(Args)]
pub struct DistanceArgs {
    /// First word, one base-q digit per position.
    x: String,
    /// Second word.
    y: String,
    /// Alphabet size.
    #[arg(long)]
    q: u8,
    /// Maximal burst length.
    #[arg(long)]
    b: usize,
}

fn cmd_distance(args: DistanceArgs, _ctx: &Ctx) -> Result<CommandOutput> {
    let x = Word::from_text(&args.x, args.q)?;
    let y = Word::from_text(&args.y, args.q)?;
    let d = burst_distance(&x, &y, args.b)?;
    let pattern = decompose_disjoint(&x.sub(&y)?, args.b)?;
    let decomposition = pattern
        .bursts()
        .iter()
        .map(|burst| burst.interval().to_string())
        .collect::<Vec<_>>()
        .join(" ");
    let config = json!({
        "command": "distance", "x": args.x, "y": args.y, "q": args.q, "b": args.b,
    });
    let mut table = Table::new(vec!["n", "q", "b", "x", "y", "distance", "decomposition"]);
    table.push(vec![
        json!(x.n()),
        json!(args.q),
        json!(args.b),
        json!(x.to_string()),
        json!(y.to_string()),
        json!(d),
        json!(decomposition),
    ]);
    Ok(CommandOutput::table(table, config, true))
}

// ---------------------------------------------------------------- ballsize

#[derive(Args)]
pub struct BallsizeArgs {
    /// Word lengths to sweep (list or range, e.g. `6..14`).
    #[arg(long)]
    n: String,
    /// Alphabet sizes to sweep.
    #[arg(long, default_value = "2")]
    q: String,
    /// Maximal burst lengths to sweep.
    #[arg(long, default_value = "1")]
    b: String,
    /// Burst-count radii to sweep.
    #[arg(long, default_value = "1")]
    t: String,
}

fn cmd_ballsize(args: BallsizeArgs, ctx: &Ctx) -> Result<CommandOutput> {
    let ns = parse_list(&args.n)?;
    let qs = parse_list(&args.q)?;
    let bs = parse_list(&args.b)?;
    let ts = parse_list(&args.t)?;
    let config = json!({
        "command": "ballsize", "n": ns, "q": qs, "b": bs, "t": ts, "seed": ctx.seed,
    });

    let mut cells = Vec::new();
    for &n in &ns {
        for &q in &qs {
            for &b in &bs {
                for &t in &ts {
                    cells.push((n, q, b, t));
                }
            }
        }
    }
    let keys: Vec<String> = cells
        .iter()
        .map(|(n, q, b, t)| format!("n={n},q={q},b={b},t={t}"))
        .collect();

    let mut checkpoint = Checkpoint::open(ctx.out.as_deref(), &config_hash(&config))?;
    let rows = crate::table::run_cells(&keys, &mut checkpoint, |index, _| {
        let (n, q, b, t) = cells[index];
        let q8 = u8::try_from(q).unwrap_or(0);
        let row = match ball_size(n, q8, b, t) {
            Ok(size) => {
                let ok = size.lower <= BigUint::from(size.exact)
                    && BigUint::from(size.exact) <= size.upper;
                vec![
                    json!(n),
                    json!(q),
                    json!(b),
                    json!(t),
                    big(&size.lower),
                    json!(size.exact),
                    big(&size.upper),
                    json!(ok),
                    json!("ok"),
                    json!(""),
                ]
            }
            Err(Error::Infeasible(msg)) => vec![
                json!(n),
                json!(q),
                json!(b),
                json!(t),
                big(&ball_lower_bound(n, q8, b, t)),
                Value::Null,
                big(&ball_upper_bound(n, q8, b, t)),
                Value::Null,
                json!("skipped"),
                json!(msg),
            ],
            Err(e) => vec![
                json!(n),
                json!(q),
                json!(b),
                json!(t),
                Value::Null,
                Value::Null,
                Value::Null,
                Value::Null,
                json!("skipped"),
                json!(e.to_string()),
            ],
        };
        Ok(row)
    })?;

    let flags_ok = rows.iter().all(|r| r[7] != Value::Bool(false));
    let mut table = Table::new(vec![
        "n",
        "q",
        "b",
        "t",
        "lower",
        "exact",
        "upper",
        "sandwich_ok",
        "status",
        "note",
    ]);
    for row in rows {
        table.push(row);
    }
    if let Some(cp) = checkpoint {
        cp.finish()?;
    }
    Ok(CommandOutput::table(table, config, flags_ok))
}

// --------------------------------------------------------------- intersect

#[derive(Args)]
pub struct IntersectArgs {
    /// First center word.
    x: String,
    /// Second center word.
    y: String,
    /// Alphabet size.
    #[arg(long)]
    q: u8,
    /// Maximal burst length.
    #[arg(long)]
    b: usize,
    /// Ball radius (burst count).
    #[arg(long)]
    t: usize,
}

fn cmd_intersect(args: IntersectArgs, _ctx: &Ctx) -> Result<CommandOutput> {
    let x = Word::from_text(&args.x, args.q)?;
    let y = Word::from_text(&args.y, args.q)?;
    let d = burst_distance(&x, &y, args.b)?;
    let common = ball_intersection(&x, &y, args.t, args.b)?;
    let far = d >= 2 * args.t + 1;
    let ok = common.is_empty() == far;
    let config = json!({
        "command": "intersect", "x": args.x, "y": args.y,
        "q": args.q, "b": args.b, "t": args.t,
    });
    let mut table = Table::new(vec![
        "n",
        "q",
        "b",
        "t",
        "x",
        "y",
        "distance",
        "intersection_size",
        "far",
        "empty_iff_far_ok",
    ]);
    table.push(vec![
        json!(x.n()),
        json!(args.q),
        json!(args.b),
        json!(args.t),
        json!(x.to_string()),
        json!(y.to_string()),
        json!(d),
        json!(common.len()),
        json!(far),
        json!(ok),
    ]);
    Ok(CommandOutput::table(table, config, ok))
}

// --------------------------------------------------------------- construct

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Greedy sphere exclusion over candidate words.
    Gv,
    /// Constant-burst-weight matching construction.
    Matching,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Ordering {
    /// Scan the whole space lexicographically (maximal code, floor holds).
    Lex,
    /// Stream seeded-random candidates under a budget.
    Random,
}

#[derive(Args)]
pub struct ConstructArgs {
    /// Construction method.
    #[arg(long, value_enum)]
    method: Method,
    /// Word length.
    #[arg(long)]
    n: usize,
    /// Alphabet size.
    #[arg(long)]
    q: u8,
    /// Maximal burst length.
    #[arg(long)]
    b: usize,
    /// Designed burst-correction radius (gv).
    #[arg(long, required_if_eq("method", "gv"))]
    t: Option<usize>,
    /// Candidate ordering (gv).
    #[arg(long, value_enum, default_value_t = Ordering::Lex)]
    ordering: Ordering,
    /// Candidate budget for random ordering (gv).
    #[arg(long, default_value_t = 100_000)]
    budget: u64,
    /// Burst weight of every codeword (matching).
    #[arg(long, required_if_eq("method", "matching"))]
    w: Option<usize>,
    /// Designed burst-correction radius (matching).
    #[arg(long, required_if_eq("method", "matching"))]
    r: Option<usize>,
}

fn cmd_construct(args: ConstructArgs, ctx: &Ctx) -> Result<CommandOutput> {
    let (table, config, flags_ok, code) = match args.method {
        Method::Gv => {
            let t = args.t.expect("clap enforces --t for gv");
            let ordering = match args.ordering {
                Ordering::Lex => GvOrdering::Lexicographic,
                Ordering::Random => GvOrdering::Seeded {
                    seed: ctx.seed,
                    budget: args.budget,
                },
            };
            let outcome = construct_gv(args.n, args.q, args.b, t, ordering)?;
            let size = outcome.code.len() as u64;
            // the coverage floor is only guaranteed for a maximal code,
            // i.e. a full lexicographic scan
            let floor_ok = match (args.ordering, outcome.gv_floor) {
                (Ordering::Lex, Some(floor)) => json!(size >= floor),
                _ => Value::Null,
            };
            let config = json!({
                "command": "construct", "method": "gv",
                "n": args.n, "q": args.q, "b": args.b, "t": t,
                "ordering": match args.ordering { Ordering::Lex => "lex", Ordering::Random => "random" },
                "budget": args.budget, "seed": ctx.seed,
                "out": ctx.out.as_ref().map(|p| p.display().to_string()),
            });
            let mut table = Table::new(vec![
                "method",
                "n",
                "q",
                "b",
                "designed_t",
                "size",
                "candidates_scanned",
                "budget_exhausted",
                "gv_floor",
                "floor_ok",
            ]);
            let flags_ok = floor_ok != Value::Bool(false);
            table.push(vec![
                json!(outcome.code.method()),
                json!(args.n),
                json!(args.q),
                json!(args.b),
                json!(t),
                json!(size),
                json!(outcome.candidates_scanned),
                json!(outcome.budget_exhausted),
                outcome.gv_floor.map_or(Value::Null, |f| json!(f)),
                floor_ok,
            ]);
            (table, config, flags_ok, outcome.code)
        }
        Method::Matching => {
            let w = args.w.expect("clap enforces --w for matching");
            let r = args.r.expect("clap enforces --r for matching");
            let outcome = construct_matching_code(args.n, args.q, args.b, w, r)?;
            let bound = johnson_upper_bound(args.n, args.q, args.b, w, r)?;
            let size = outcome.code.len() as u64;
            let ok = BigUint::from(size) <= bound;
            let config = json!({
                "command": "construct", "method": "matching",
                "n": args.n, "q": args.q, "b": args.b, "w": w, "r": r,
                "out": ctx.out.as_ref().map(|p| p.display().to_string()),
            });
            let mut table = Table::new(vec![
                "method",
                "n",
                "q",
                "b",
                "w",
                "r",
                "size",
                "edges_total",
                "johnson_bound",
                "johnson_ok",
            ]);
            table.push(vec![
                json!(outcome.code.method()),
                json!(args.n),
                json!(args.q),
                json!(args.b),
                json!(w),
                json!(r),
                json!(size),
                json!(outcome.edges_total),
                big(&bound),
                json!(ok),
            ]);
            (table, config, ok, outcome.code)
        }
    };
    if let Some(path) = ctx.out.as_deref() {
        code.save(path)?;
    }
    Ok(CommandOutput {
        artifact: Artifact::Table(table),
        config,
        flags_ok,
        artifact_to_stdout: true,
    })
}

// ------------------------------------------------------------------- check

#[derive(Args)]
pub struct CheckArgs {
    /// Code file to verify.
    code: PathBuf,
}

fn cmd_check(args: CheckArgs, _ctx: &Ctx) -> Result<CommandOutput> {
    let code = Code::load(&args.code)?;
    let verdict = check_burst_code(&code)?;
    let min_d = min_pairwise_distance(&code)?;
    let config = json!({
        "command": "check", "code": args.code.display().to_string(),
    });
    let mut table = Table::new(vec![
        "n",
        "q",
        "b",
        "designed_t",
        "size",
        "ok",
        "witness_x",
        "witness_y",
        "witness_distance",
        "min_distance",
    ]);
    let (wx, wy) = match &verdict.witness {
        Some((x, y)) => (json!(x.to_string()), json!(y.to_string())),
        None => (Value::Null, Value::Null),
    };
    table.push(vec![
        json!(code.n()),
        json!(code.q()),
        json!(code.b()),
        json!(code.designed_t()),
        json!(code.len()),
        json!(verdict.ok),
        wx,
        wy,
        verdict.witness_distance.map_or(Value::Null, |d| json!(d)),
        min_d.map_or(Value::Null, |d| json!(d)),
    ]);
    Ok(CommandOutput::table(table, config, verdict.ok))
}

// ------------------------------------------------------------------ degree

#[derive(Args)]
pub struct DegreeArgs {
    /// Code file to measure.
    code: PathBuf,
    /// Channel burst count the degree is measured at.
    #[arg(long)]
    t: usize,
    /// Compare against the counting bound for this read-order exponent
    /// (requires the code to correct `t-s-1` bursts).
    #[arg(long)]
    s: Option<usize>,
}

fn cmd_degree(args: DegreeArgs, _ctx: &Ctx) -> Result<CommandOutput> {
    let code = Code::load(&args.code)?;
    let report = reconstruction_degree(code.words().words(), args.t, code.b())?;
    let bound_ok = match args.s {
        Some(s) => {
            if s >= args.t {
                bail!(Error::InvalidParams(format!(
                    "degree bound needs s <= t-1, got t={} s={s}",
                    args.t
                )));
            }
            // the bound's hypothesis: pairwise distance at least 2(t-s-1)+1
            if args.t > s + 1 {
                let needed = args.t - s - 1;
                let words = code.words().words();
                for i in 0..words.len() {
                    for j in i + 1..words.len() {
                        if within_burst_distance(&words[i], &words[j], code.b(), 2 * needed)? {
                            bail!(Error::InvalidParams(format!(
                                "code does not correct {needed} bursts, so the bound at s={s} \
                                 does not apply: {} and {} are too close",
                                words[i], words[j]
                            )));
                        }
                    }
                }
            }
            json!(degree_bound_holds(
                report.degree,
                code.n(),
                code.q(),
                code.b(),
                args.t,
                s
            )?)
        }
        None => Value::Null,
    };
    let config = json!({
        "command": "degree", "code": args.code.display().to_string(),
        "t": args.t, "s": args.s,
    });
    let mut table = Table::new(vec![
        "n",
        "q",
        "b",
        "designed_t",
        "size",
        "t",
        "s",
        "degree",
        "bound_ok",
        "witness_x",
        "witness_y",
    ]);
    let (wx, wy) = match &report.witness {
        Some((x, y)) => (json!(x.to_string()), json!(y.to_string())),
        None => (Value::Null, Value::Null),
    };
    let flags_ok = bound_ok != Value::Bool(false);
    table.push(vec![
        json!(code.n()),
        json!(code.q()),
        json!(code.b()),
        json!(code.designed_t()),
        json!(code.len()),
        json!(args.t),
        args.s.map_or(Value::Null, |s| json!(s)),
        json!(report.degree),
        bound_ok,
        wx,
        wy,
    ]);
    Ok(CommandOutput::table(table, config, flags_ok))
}

// ------------------------------------------------------------------- shift

#[derive(Args)]
pub struct ShiftArgs {
    /// Word-set file to compress.
    set: PathBuf,
    /// Maximal burst length for the diameter columns.
    #[arg(long)]
    b: usize,
    /// Position of a single shifting step (1-based; with --a).
    #[arg(long, requires = "a", conflicts_with = "fixpoint")]
    i: Option<usize>,
    /// Symbol of a single shifting step (with --i).
    #[arg(long, requires = "i")]
    a: Option<u8>,
    /// Sweep all (position, symbol) steps to a fixed point.
    #[arg(long, conflicts_with = "i")]
    fixpoint: bool,
}

fn cmd_shift(args: ShiftArgs, ctx: &Ctx) -> Result<CommandOutput> {
    let set = WordSet::load(&args.set)?;
    let (op, result) = match (args.i, args.a, args.fixpoint) {
        (Some(i), Some(a), false) => ("step", shift(&set, i, a)?),
        (None, None, true) => ("fixpoint", shift_to_fixed_point(&set)?),
        _ => bail!(Error::InvalidParams(
            "pass either --i and --a for one step, or --fixpoint".into()
        )),
    };
    let diam = |s: &WordSet| -> Result<Value> {
        Ok(if s.len() < 2 {
            Value::Null
        } else {
            json!(diameter(s, args.b)?)
        })
    };
    let diameter_before = diam(&set)?;
    let diameter_after = diam(&result)?;
    let diameter_ok = match (diameter_before.as_u64(), diameter_after.as_u64()) {
        (Some(before), Some(after)) => json!(after <= before),
        _ => Value::Null,
    };
    let size_ok = set.len() == result.len();
    let fixed = is_shift_fixed_point(&result)?;
    if let Some(path) = ctx.out.as_deref() {
        result.save(path)?;
    }
    let config = json!({
        "command": "shift", "set": args.set.display().to_string(), "b": args.b,
        "i": args.i, "a": args.a, "fixpoint": args.fixpoint,
        "out": ctx.out.as_ref().map(|p| p.display().to_string()),
    });
    let mut table = Table::new(vec![
        "n",
        "q",
        "b",
        "op",
        "i",
        "a",
        "size_before",
        "size_after",
        "size_ok",
        "diameter_before",
        "diameter_after",
        "diameter_ok",
        "fixed_point",
    ]);
    let flags_ok = size_ok && diameter_ok != Value::Bool(false);
    table.push(vec![
        json!(set.n()),
        json!(set.q()),
        json!(args.b),
        json!(op),
        args.i.map_or(Value::Null, |i| json!(i)),
        args.a.map_or(Value::Null, |a| json!(a)),
        json!(set.len()),
        json!(result.len()),
        json!(size_ok),
        diameter_before,
        diameter_after,
        diameter_ok,
        json!(fixed),
    ]);
    Ok(CommandOutput {
        artifact: Artifact::Table(table),
        config,
        flags_ok,
        artifact_to_stdout: true,
    })
}

// --------------------------------------------------------------- diametric

#[derive(Args)]
pub struct DiametricArgs {
    /// Word length.
    #[arg(long)]
    n: usize,
    /// Alphabet size.
    #[arg(long)]
    q: u8,
    /// Maximal burst length.
    #[arg(long)]
    b: usize,
    /// Half the diameter budget (sets are compared to `Ball_d`).
    #[arg(long)]
    d: usize,
    /// Random restarts of the greedy growth.
    #[arg(long, default_value_t = 20)]
    restarts: usize,
}

fn cmd_diametric(args: DiametricArgs, ctx: &Ctx) -> Result<CommandOutput> {
    let report = diametric_bound_check(args.n, args.q, args.b, args.d, args.restarts, ctx.seed)?;
    if let Some(path) = ctx.out.as_deref() {
        report.witness.save(path)?;
    }
    let config = json!({
        "command": "diametric", "n": args.n, "q": args.q, "b": args.b, "d": args.d,
        "restarts": args.restarts, "seed": ctx.seed,
        "out": ctx.out.as_ref().map(|p| p.display().to_string()),
    });
    let mut table = Table::new(vec![
        "n",
        "q",
        "b",
        "d",
        "restarts",
        "ball_size",
        "max_found",
        "exceeded",
    ]);
    // `exceeded` is a search finding at small n, reported rather than
    // asserted, so it never fails the run
    table.push(vec![
        json!(report.n),
        json!(report.q),
        json!(report.b),
        json!(report.d),
        json!(report.restarts),
        json!(report.ball_size),
        json!(report.max_found),
        json!(report.exceeded),
    ]);
    Ok(CommandOutput {
        artifact: Artifact::Table(table),
        config,
        flags_ok: true,
        artifact_to_stdout: true,
    })
}

// ---------------------------------------------------------------- simulate

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimMode {
    /// Success means the decoder returns exactly the transmitted word.
    Unique,
    /// Success means the transmitted word appears in the reconstructed list.
    List,
}

#[derive(Args)]
pub struct SimulateArgs {
    /// Code file the transmitter draws from.
    #[arg(long)]
    code: PathBuf,
    /// Channel burst count per transmission.
    #[arg(long)]
    t: usize,
    /// Read counts to sweep (list or range, e.g. `2,4,8`).
    #[arg(long)]
    reads: String,
    /// Trials per read count.
    #[arg(long, default_value_t = 100)]
    trials: u64,
    /// Decoding mode.
    #[arg(long, value_enum, default_value_t = SimMode::Unique)]
    mode: SimMode,
    /// Read-order exponent for list mode.
    #[arg(long, default_value_t = 0)]
    s: usize,
    /// Extra-uncertainty exponent for list mode.
    #[arg(long, default_value_t = 0)]
    h: usize,
    /// Candidate cap for list mode, in bits.
    #[arg(long, default_value_t = STAR_CAP_BITS)]
    cap_bits: u32,
    /// Draw reads adversarially from the intersection of the two balls
    /// realizing the reconstruction degree, instead of from the channel.
    #[arg(long)]
    adversarial: bool,
}

#[derive(Default, Clone, Copy)]
struct TrialAcc {
    successes: u64,
    ambiguous: u64,
    list_size_sum: u64,
    stars_sum: u64,
    max_stars: u64,
    violations: u64,
}

impl TrialAcc {
    fn merge(self, other: TrialAcc) -> TrialAcc {
        TrialAcc {
            successes: self.successes + other.successes,
            ambiguous: self.ambiguous + other.ambiguous,
            list_size_sum: self.list_size_sum + other.list_size_sum,
            stars_sum: self.stars_sum + other.stars_sum,
            max_stars: self.max_stars.max(other.max_stars),
            violations: self.violations + other.violations,
        }
    }
}

/// Draws the transmitted word and its read set for one trial. All
/// randomness comes from the trial seed, so results are independent of
/// thread scheduling.
fn trial_reads(
    code: &Code,
    t: usize,
    n_reads: usize,
    trial_seed: u64,
    adversary: Option<&(Word, Word)>,
) -> Result<(Word, ReadSet)> {
    let mut rng = task_rng(trial_seed, 0);
    let x = match adversary {
        Some((x, _)) => x.clone(),
        None => {
            let idx = rng.gen_range(0..code.len());
            code.words().words()[idx].clone()
        }
    };
    let spec = ChannelSpec::new(code.n(), code.q(), code.b(), t, rng.gen())?;
    let reads = match adversary {
        Some((x, y)) => generate_reads_adversarial(x, y, &spec, n_reads)?,
        None => generate_reads(&x, &spec, n_reads)?,
    };
    Ok((x, reads))
}

fn cmd_simulate(args: SimulateArgs, ctx: &Ctx) -> Result<CommandOutput> {
    let code = Code::load(&args.code)?;
    if code.is_empty() {
        bail!(Error::InvalidParams("the code file holds no words".into()));
    }
    let read_counts = parse_list(&args.reads)?;
    let mode_name = match args.mode {
        SimMode::Unique => "unique",
        SimMode::List => "list",
    };
    let config = json!({
        "command": "simulate", "code": args.code.display().to_string(),
        "t": args.t, "reads": read_counts, "trials": args.trials,
        "mode": mode_name, "s": args.s, "h": args.h, "cap_bits": args.cap_bits,
        "adversarial": args.adversarial, "seed": ctx.seed,
    });

    let adversary = if args.adversarial {
        let report = reconstruction_degree(code.words().words(), args.t, code.b())?;
        let pair = report.witness.ok_or_else(|| {
            Error::InvalidParams("adversarial mode needs a code with at least two words".into())
        })?;
        Some(pair)
    } else {
        None
    };

    let keys: Vec<String> = read_counts.iter().map(|n| format!("reads={n}")).collect();
    let mut checkpoint = Checkpoint::open(ctx.out.as_deref(), &config_hash(&config))?;
    let rows = crate::table::run_cells(&keys, &mut checkpoint, |index, _| {
        let n_reads = read_counts[index];
        let mut seed_rng = task_rng(ctx.seed, index as u64);
        let trial_seeds: Vec<u64> = (0..args.trials).map(|_| seed_rng.gen()).collect();
        let accs: Result<Vec<TrialAcc>> = trial_seeds
            .par_iter()
            .map(|&trial_seed| -> Result<TrialAcc> {
                let (x, reads) =
                    trial_reads(&code, args.t, n_reads, trial_seed, adversary.as_ref())?;
                let mut acc = TrialAcc::default();
                match args.mode {
                    SimMode::Unique => {
                        match cycburst::unique_reconstruct(
                            &code,
                            reads.reads(),
                            args.t,
                            code.b(),
                        )? {
                            UniqueOutcome::Unique(w) => {
                                if w == x {
                                    acc.successes = 1;
                                }
                            }
                            UniqueOutcome::Ambiguous(_) => acc.ambiguous = 1,
                        }
                    }
                    SimMode::List => {
                        let result = list_reconstruct_with_cap(
                            &code,
                            reads.reads(),
                            args.t,
                            code.b(),
                            args.s,
                            args.h,
                            args.cap_bits,
                        )?;
                        if result.codewords.contains(&x) {
                            acc.successes = 1;
                        }
                        acc.list_size_sum = result.codewords.len() as u64;
                        acc.stars_sum = result.stats.stars as u64;
                        acc.max_stars = result.stats.stars as u64;
                        let truth = consistent_set(&code, reads.reads(), args.t, code.b())?;
                        acc.violations = result
                            .codewords
                            .iter()
                            .filter(|w| !truth.contains(w))
                            .count() as u64;
                    }
                }
                Ok(acc)
            })
            .collect();
        let acc = accs?
            .into_iter()
            .fold(TrialAcc::default(), TrialAcc::merge);
        let trials = args.trials;
        let rate = acc.successes as f64 / trials.max(1) as f64;
        let row = match args.mode {
            SimMode::Unique => vec![
                json!(n_reads),
                json!(trials),
                json!(acc.successes),
                num(rate),
                json!(acc.ambiguous),
                Value::Null,
                Value::Null,
                Value::Null,
                Value::Null,
                Value::Null,
            ],
            SimMode::List => vec![
                json!(n_reads),
                json!(trials),
                json!(acc.successes),
                num(rate),
                Value::Null,
                num(acc.list_size_sum as f64 / trials.max(1) as f64),
                num(acc.stars_sum as f64 / trials.max(1) as f64),
                json!(acc.max_stars),
                json!(acc.violations),
                json!(acc.violations == 0),
            ],
        };
        Ok(row)
    })?;

    let flags_ok = rows.iter().all(|r| r[9] != Value::Bool(false));
    let mut table = Table::new(vec![
        "reads",
        "trials",
        "successes",
        "success_rate",
        "ambiguous",
        "mean_list_size",
        "mean_stars",
        "max_stars",
        "soundness_violations",
        "sound",
    ]);
    for row in rows {
        table.push(row);
    }
    if let Some(cp) = checkpoint {
        cp.finish()?;
    }
    Ok(CommandOutput::table(table, config, flags_ok))
}

// ------------------------------------------------------------- reconstruct

#[derive(Args)]
pub struct ReconstructArgs {
    /// Code file to decode against.
    #[arg(long)]
    code: PathBuf,
    /// Read-set file (header carries the channel parameters).
    #[arg(long, conflicts_with = "gen_reads")]
    reads: Option<PathBuf>,
    /// Generate this many reads through the channel instead.
    #[arg(long, requires = "t")]
    gen_reads: Option<usize>,
    /// Channel burst count when generating reads.
    #[arg(long)]
    t: Option<usize>,
    /// Transmitted word when generating reads (default: a random codeword).
    #[arg(long, requires = "gen_reads")]
    word: Option<String>,
    /// Read-order exponent.
    #[arg(long, default_value_t = 0)]
    s: usize,
    /// Extra-uncertainty exponent.
    #[arg(long, default_value_t = 0)]
    h: usize,
    /// Candidate cap in bits.
    #[arg(long, default_value_t = STAR_CAP_BITS)]
    cap_bits: u32,
    /// Also save the read set (useful with --gen-reads).
    #[arg(long)]
    save_reads: Option<PathBuf>,
}

fn cmd_reconstruct(args: ReconstructArgs, ctx: &Ctx) -> Result<CommandOutput> {
    let code = Code::load(&args.code)?;
    let (read_set, source) = match (&args.reads, args.gen_reads) {
        (Some(path), None) => (ReadSet::load(path)?, None),
        (None, Some(n_reads)) => {
            let t = args.t.expect("clap enforces --t with --gen-reads");
            let x = match &args.word {
                Some(text) => Word::from_text(text, code.q())?,
                None => {
                    if code.is_empty() {
                        bail!(Error::InvalidParams("the code file holds no words".into()));
                    }
                    let mut rng = task_rng(ctx.seed, 1);
                    let idx = rng.gen_range(0..code.len());
                    code.words().words()[idx].clone()
                }
            };
            let spec = ChannelSpec::new(code.n(), code.q(), code.b(), t, ctx.seed)?;
            (generate_reads(&x, &spec, n_reads)?, Some(x))
        }
        _ => bail!(Error::InvalidParams(
            "pass exactly one of --reads or --gen-reads".into()
        )),
    };
    let spec = *read_set.spec();
    if spec.n() != code.n() || spec.q() != code.q() {
        bail!(Error::Mismatch(format!(
            "read set shape (n={}, q={}) does not match the code (n={}, q={})",
            spec.n(),
            spec.q(),
            code.n(),
            code.q()
        )));
    }
    if let Some(path) = &args.save_reads {
        read_set.save(path)?;
    }
    let result = list_reconstruct_with_cap(
        &code,
        read_set.reads(),
        spec.t(),
        spec.b(),
        args.s,
        args.h,
        args.cap_bits,
    )?;
    // the decoded list must sit inside the brute-force consistent set
    let truth = consistent_set(&code, read_set.reads(), spec.t(), spec.b())?;
    let sound = result.codewords.iter().all(|w| truth.contains(w));
    let (tau_num, tau_den) = (result.stats.tau_num, result.stats.tau_den);
    let config = json!({
        "command": "reconstruct", "code": args.code.display().to_string(),
        "reads": args.reads.as_ref().map(|p| p.display().to_string()),
        "gen_reads": args.gen_reads, "word": args.word, "t": args.t,
        "s": args.s, "h": args.h, "cap_bits": args.cap_bits, "seed": ctx.seed,
    });
    let doc = json!({
        "params": {
            "n": spec.n(), "q": spec.q(), "b": spec.b(), "t": spec.t(),
            "s": args.s, "h": args.h,
        },
        "source": source.map(|w| w.to_string()),
        "reads": read_set.reads().iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        "list": result.codewords.iter().map(|w| w.to_string()).collect::<Vec<_>>(),
        "stats": {
            "reads": result.stats.reads,
            "tau": format!("{tau_num}/{tau_den}"),
            "tau_num": tau_num,
            "tau_den": tau_den,
            "stars": result.stats.stars,
            "candidates": result.stats.candidates,
            "decoder_calls": result.stats.decoder_calls,
            "consistent_total": truth.len(),
            "sound": sound,
        },
    });
    Ok(CommandOutput {
        artifact: Artifact::Json(doc),
        config,
        flags_ok: sound,
        artifact_to_stdout: false,
    })
}

// ---------------------------------------------------------------- tradeoff

#[derive(Args)]
pub struct TradeoffArgs {
    /// Word length.
    #[arg(long)]
    n: usize,
    /// Alphabet size.
    #[arg(long)]
    q: u8,
    /// Maximal burst length.
    #[arg(long)]
    b: usize,
    /// Channel burst count.
    #[arg(long)]
    t: usize,
    /// Code correction radii to sweep (default `0..t`).
    #[arg(long)]
    eps: Option<String>,
    /// Extra-uncertainty exponents to sweep (default: all `0..=s` per row).
    #[arg(long)]
    h: Option<String>,
    /// List-decoding trials per cell.
    #[arg(long, default_value_t = 20)]
    trials: u64,
    /// Keep at most this many codewords per constructed code (0 = all).
    #[arg(long, default_value_t = 128)]
    max_code: u64,
}

/// Greedy-constructed code for one correction radius, truncated to the
/// measurement budget. Truncation keeps the distance property, and the
/// counting bounds apply to every code with that property, so measured
/// values stay comparable against them.
fn tradeoff_code(n: usize, q: u8, b: usize, eps: usize, max_code: u64) -> Result<Code> {
    let outcome = construct_gv(n, q, b, eps, GvOrdering::Lexicographic)?;
    if max_code == 0 || outcome.code.len() as u64 <= max_code {
        return Ok(outcome.code);
    }
    let words: Vec<Word> = outcome
        .code
        .words()
        .words()
        .iter()
        .take(max_code as usize)
        .cloned()
        .collect();
    Ok(Code::new(
        b,
        eps,
        WordSet::from_words(words)?,
        "gv-lex",
        None,
    )?)
}

fn cmd_tradeoff(args: TradeoffArgs, ctx: &Ctx) -> Result<CommandOutput> {
    let t = args.t;
    if t == 0 {
        bail!(Error::InvalidParams(
            "the trade-off needs a channel with t >= 1".into()
        ));
    }
    let eps_list = match &args.eps {
        Some(text) => parse_list(text)?,
        None => (0..=t).collect(),
    };
    if let Some(&bad) = eps_list.iter().find(|&&e| e > t) {
        bail!(Error::InvalidParams(format!(
            "eps={bad} exceeds the channel burst count t={t}"
        )));
    }
    let h_filter = match &args.h {
        Some(text) => Some(parse_list(text)?),
        None => None,
    };
    let space = (args.q as u64).checked_pow(args.n as u32);
    if space.is_none_or(|s| s > GV_LEX_CAP) {
        bail!(Error::Infeasible(format!(
            "the trade-off sweep constructs codes by scanning all q^n words; \
             {}^{} exceeds the cap {GV_LEX_CAP}",
            args.q, args.n
        )));
    }

    // cells in deterministic order: every eps, then its admissible h values
    let mut cells: Vec<(usize, Option<usize>)> = Vec::new();
    for &eps in &eps_list {
        if eps == t {
            cells.push((eps, None));
            continue;
        }
        let s = t - 1 - eps;
        let hs: Vec<usize> = match &h_filter {
            Some(list) => list.iter().copied().filter(|&h| h <= s).collect(),
            None => (0..=s).collect(),
        };
        if hs.is_empty() {
            cells.push((eps, None));
        } else {
            cells.extend(hs.into_iter().map(|h| (eps, Some(h))));
        }
    }
    let keys: Vec<String> = cells
        .iter()
        .map(|(eps, h)| match h {
            Some(h) => format!("eps={eps},h={h}"),
            None => format!("eps={eps},h=-"),
        })
        .collect();

    let config = json!({
        "command": "tradeoff", "n": args.n, "q": args.q, "b": args.b, "t": t,
        "eps": eps_list, "h": args.h, "trials": args.trials,
        "max_code": args.max_code, "seed": ctx.seed,
    });

    let ln_n = (args.n as f64).ln();
    let log_n = |v: u64| -> Option<f64> {
        (v >= 1).then(|| (v as f64).ln() / ln_n)
    };

    let mut codes: BTreeMap<usize, Code> = BTreeMap::new();
    let mut degrees: BTreeMap<usize, u64> = BTreeMap::new();
    let mut checkpoint = Checkpoint::open(ctx.out.as_deref(), &config_hash(&config))?;
    let rows = crate::table::run_cells(&keys, &mut checkpoint, |index, _| {
        let (eps, h) = cells[index];
        if !codes.contains_key(&eps) {
            codes.insert(eps, tradeoff_code(args.n, args.q, args.b, eps, args.max_code)?);
        }
        let code = &codes[&eps];
        if !degrees.contains_key(&eps) {
            let report = reconstruction_degree(code.words().words(), t, args.b)?;
            degrees.insert(eps, report.degree);
        }
        let degree = degrees[&eps];
        let rho = log_n(degree);

        // degree flag: counting bound for eps <= t-1, exact disjointness
        // (degree 1) for the error-correcting regime eps = t
        let (s_col, degree_ok) = if eps == t {
            (Value::Null, json!(degree == 1))
        } else {
            let s = t - 1 - eps;
            (
                json!(s),
                json!(degree_bound_holds(degree, args.n, args.q, args.b, t, s)?),
            )
        };

        let mut row = vec![
            json!(args.n),
            json!(args.q),
            json!(args.b),
            json!(t),
            json!(eps),
            s_col,
            h.map_or(Value::Null, |h| json!(h)),
            json!(code.len()),
            json!(degree),
            rho.map_or(Value::Null, num),
            degree_ok.clone(),
        ];

        match h {
            None => {
                // degree-only row: no list measurement applies
                row.extend([
                    Value::Null,
                    Value::Null,
                    Value::Null,
                    Value::Null,
                    Value::Null,
                    Value::Null,
                    Value::Null,
                    num((t - 1) as f64),
                    json!(if eps == t { "degree-only" } else { "no-admissible-h" }),
                ]);
            }
            Some(h) => {
                let s = t - 1 - eps;
                let n_reads = ball_size(args.n, args.q, args.b, s - h)?.exact as usize + 1;
                let mut seed_rng = task_rng(ctx.seed, index as u64);
                let trial_seeds: Vec<u64> =
                    (0..args.trials).map(|_| seed_rng.gen()).collect();
                let outcomes: Result<Vec<(u64, u64)>> = trial_seeds
                    .par_iter()
                    .map(|&trial_seed| -> Result<(u64, u64)> {
                        let (_, reads) = trial_reads(code, t, n_reads, trial_seed, None)?;
                        let result = list_reconstruct_with_cap(
                            code,
                            reads.reads(),
                            t,
                            args.b,
                            s,
                            h,
                            STAR_CAP_BITS,
                        )?;
                        let len = result.codewords.len() as u64;
                        Ok((len, len))
                    })
                    .collect();
                let (max_list, list_sum) = outcomes?
                    .into_iter()
                    .fold((0u64, 0u64), |(mx, sum), (a, b)| (mx.max(a), sum + b));
                let lambda = log_n(max_list);
                let list_ok = if h >= 1 {
                    json!(BigUint::from(max_list)
                        <= list_size_bound(args.n, args.q, args.b, t, s, h)?)
                } else {
                    Value::Null
                };
                let budget = match (rho, lambda) {
                    (Some(r), Some(l)) => num(eps as f64 + r + l),
                    _ => Value::Null,
                };
                row.extend([
                    json!(n_reads),
                    json!(args.trials),
                    json!(max_list),
                    num(list_sum as f64 / args.trials.max(1) as f64),
                    lambda.map_or(Value::Null, num),
                    list_ok,
                    budget,
                    num((t - 1) as f64),
                    json!("ok"),
                ]);
            }
        }
        Ok(row)
    })?;

    let flags_ok = rows
        .iter()
        .all(|r| r[10] != Value::Bool(false) && r[16] != Value::Bool(false));
    let mut table = Table::new(vec![
        "n",
        "q",
        "b",
        "t",
        "eps",
        "s",
        "h",
        "code_size",
        "degree",
        "rho",
        "degree_bound_ok",
        "reads",
        "trials",
        "max_list",
        "mean_list",
        "lambda",
        "list_bound_ok",
        "budget_sum",
        "budget_target",
        "status",
    ]);
    for row in rows {
        table.push(row);
    }
    if let Some(cp) = checkpoint {
        cp.finish()?;
    }
    Ok(CommandOutput::table(table, config, flags_ok))
}
