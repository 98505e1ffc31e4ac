//! Benchmark and verification harness behind the `parlis-bench` binary.
//!
//! Every run produces one CSV row per (algorithm, repetition) with the
//! columns in [`HEADER`]. Dataset generation and verification are outside
//! the timed region.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use parlis::baselines::{brute_lis, brute_wlis, seq_avl, seq_bs, ORACLE_CAP};
use parlis::counters::Counters;
use parlis::dataset::{self, Dataset};
use parlis::lis::{lis_ranks, reconstruct_lis};
use parlis::par;
use parlis::wlis::{reconstruct_wlis, wlis, Backend};

pub const HEADER: [&str; 11] =
    ["algo", "n", "k", "pattern", "seed", "threads", "rep", "millis", "rounds", "visits", "verify"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Algo {
    Lis,
    WlisRt,
    WlisRveb,
    SeqBs,
    SeqAvl,
    Brute,
}

impl Algo {
    pub fn weighted(self) -> bool {
        matches!(self, Algo::WlisRt | Algo::WlisRveb | Algo::SeqAvl)
    }

    pub fn name(self) -> &'static str {
        match self {
            Algo::Lis => "lis",
            Algo::WlisRt => "wlis-rt",
            Algo::WlisRveb => "wlis-rveb",
            Algo::SeqBs => "seq-bs",
            Algo::SeqAvl => "seq-avl",
            Algo::Brute => "brute",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PatternArg {
    Range,
    Line,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "parlis-bench", about = "Time and cross-check the LIS and weighted LIS engines")]
pub struct Args {
    /// Algorithm to run; repeat for several.
    #[arg(long = "algo", value_enum, required = true)]
    pub algo: Vec<Algo>,
    #[arg(long, value_enum, default_value = "range", conflicts_with = "input")]
    pub pattern: PatternArg,
    #[arg(long, default_value_t = 100_000, conflicts_with = "input")]
    pub n: usize,
    /// Range pattern: values are uniform in [1, kprime].
    #[arg(long, default_value_t = 1000, conflicts_with = "input")]
    pub kprime: i64,
    /// Line pattern slope.
    #[arg(long, default_value_t = 1, conflicts_with = "input")]
    pub t: i64,
    /// Line pattern noise width.
    #[arg(long, default_value_t = 1000, conflicts_with = "input")]
    pub sigma: i64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Weight range `lo:hi` for weighted algorithms (default -1000:1000).
    #[arg(long, value_parser = parse_weights, allow_hyphen_values = true)]
    pub weights: Option<(i64, i64)>,
    /// Load the dataset from a file instead of generating it.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Save the dataset used for the run.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Worker threads (default: hardware parallelism).
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub reps: usize,
    /// Cross-check outputs across algorithms and against brute force when
    /// n is small enough.
    #[arg(long)]
    pub verify: bool,
    /// Write CSV here instead of standard output.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Print the work counters of each row to the diagnostic stream.
    #[arg(long)]
    pub counters: bool,
}

fn parse_weights(s: &str) -> Result<(i64, i64), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected lo:hi")?;
    let lo: i64 = lo.trim().parse().map_err(|_| format!("bad lower weight `{lo}`"))?;
    let hi: i64 = hi.trim().parse().map_err(|_| format!("bad upper weight `{hi}`"))?;
    if lo > hi {
        return Err(format!("empty weight range {lo}:{hi}"));
    }
    Ok((lo, hi))
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] parlis::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("verification failed: {0}")]
    Verify(String),
}

/// One timed execution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub algo: Algo,
    pub n: usize,
    /// LIS length for unweighted algorithms, best total weight otherwise.
    pub k: i64,
    pub pattern: &'static str,
    pub seed: u64,
    pub threads: usize,
    pub rep: usize,
    pub millis: u128,
    pub counters: Option<Counters>,
    pub verify: Option<bool>,
}

impl Row {
    fn record(&self) -> Vec<String> {
        let opt = |v: Option<u64>| v.map_or(String::new(), |v| v.to_string());
        let c = self.counters.as_ref();
        vec![
            self.algo.name().to_string(),
            self.n.to_string(),
            self.k.to_string(),
            self.pattern.to_string(),
            self.seed.to_string(),
            self.threads.to_string(),
            self.rep.to_string(),
            self.millis.to_string(),
            opt(c.map(|c| c.rounds)),
            opt(c.map(|c| c.tournament_visits + c.veb_visits)),
            match self.verify {
                None => String::new(),
                Some(true) => "ok".into(),
                Some(false) => "fail".into(),
            },
        ]
    }
}

enum Output {
    Ranks(Vec<u32>),
    Dp(Vec<i64>),
}

struct Run {
    k: i64,
    counters: Option<Counters>,
    out: Output,
    witness_ok: bool,
}

fn execute(algo: Algo, d: &Dataset) -> Result<Run, BenchError> {
    let v = &d.values;
    let w = || d.weights.as_deref().expect("weighted algorithms run on weighted datasets");
    Ok(match algo {
        Algo::Lis => {
            let r = lis_ranks(v)?;
            let wit = reconstruct_lis(v, &r);
            let witness_ok = wit.len() == r.k && wit.windows(2).all(|p| p[0] < p[1] && v[p[0]] < v[p[1]]);
            Run { k: r.k as i64, counters: Some(r.counters), out: Output::Ranks(r.ranks), witness_ok }
        }
        Algo::WlisRt | Algo::WlisRveb => {
            let b = if algo == Algo::WlisRt { Backend::RangeTree } else { Backend::RangeVeb };
            let r = wlis(v, w(), b)?;
            let wit = reconstruct_wlis(&r);
            let witness_ok = wit.windows(2).all(|p| p[0] < p[1] && v[p[0]] < v[p[1]])
                && wit.iter().map(|&i| w()[i]).sum::<i64>() == r.best.score;
            Run { k: r.best.score, counters: Some(r.counters), out: Output::Dp(r.dp), witness_ok }
        }
        Algo::SeqBs => {
            let (ranks, k) = seq_bs(v);
            Run { k: k as i64, counters: None, out: Output::Ranks(ranks), witness_ok: true }
        }
        Algo::SeqAvl => {
            let dp = seq_avl(v, w())?;
            Run { k: dp.iter().copied().max().unwrap_or(0), counters: None, out: Output::Dp(dp), witness_ok: true }
        }
        Algo::Brute => {
            let ranks = brute_lis(v)?;
            let k = ranks.iter().copied().max().unwrap_or(0) as i64;
            Run { k, counters: None, out: Output::Ranks(ranks), witness_ok: true }
        }
    })
}

fn load(args: &Args) -> Result<Dataset, BenchError> {
    let weighted = args.algo.iter().any(|a| a.weighted());
    if args.weights.is_some() && !weighted {
        return Err(BenchError::Usage("--weights needs a weighted algorithm (wlis-rt, wlis-rveb, seq-avl)".into()));
    }
    let mut d = match &args.input {
        Some(p) => dataset::read_dataset(p)?,
        None => match args.pattern {
            PatternArg::Range => dataset::gen_range(args.n, args.kprime, args.seed)?,
            PatternArg::Line => dataset::gen_line(args.n, args.t, args.sigma, args.seed)?,
        },
    };
    if weighted && (d.weights.is_none() || args.weights.is_some()) {
        let (lo, hi) = args.weights.unwrap_or((-1000, 1000));
        let w = dataset::gen_weights(d.n(), lo, hi, dataset::weight_seed(d.seed))?;
        d = d.with_weights(w)?;
    }
    if args.algo.contains(&Algo::Brute) && d.n() > ORACLE_CAP {
        return Err(BenchError::Usage(format!("brute force is capped at n = {ORACLE_CAP}, got {}", d.n())));
    }
    Ok(d)
}

/// Reference answers: the sequential baselines, or brute force when the
/// input is small enough.
struct Reference {
    ranks: Vec<u32>,
    dp: Option<Vec<i64>>,
}

impl Reference {
    fn new(d: &Dataset) -> Result<Self, BenchError> {
        let small = d.n() <= ORACLE_CAP;
        let ranks = if small { brute_lis(&d.values)? } else { seq_bs(&d.values).0 };
        let dp = match &d.weights {
            Some(w) if small => {
                let dp = brute_wlis(&d.values, w)?;
                if seq_avl(&d.values, w)? != dp {
                    return Err(BenchError::Verify("seq-avl differs from brute force".into()));
                }
                Some(dp)
            }
            Some(w) => Some(seq_avl(&d.values, w)?),
            None => None,
        };
        if small && seq_bs(&d.values).0 != ranks {
            return Err(BenchError::Verify("seq-bs differs from brute force".into()));
        }
        Ok(Reference { ranks, dp })
    }

    fn check(&self, run: &Run) -> bool {
        run.witness_ok
            && match &run.out {
                Output::Ranks(r) => *r == self.ranks,
                Output::Dp(dp) => Some(dp) == self.dp.as_ref(),
            }
    }
}

/// Runs the benchmark matrix, writing CSV to `out` and diagnostics to
/// `diag`. Returns every row produced.
pub fn run(args: &Args, out: &mut dyn Write, diag: &mut dyn Write) -> Result<Vec<Row>, BenchError> {
    if args.reps == 0 {
        return Err(BenchError::Usage("--reps must be at least 1".into()));
    }
    let threads = args.threads.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |p| p.get()));
    if threads == 0 {
        return Err(BenchError::Usage("--threads must be at least 1".into()));
    }
    let d = load(args)?;
    if let Some(p) = &args.output {
        dataset::write_dataset(&d, p)?;
    }
    let reference = if args.verify { Some(Reference::new(&d)?) } else { None };

    let mut algos: Vec<Algo> = Vec::new();
    for &a in &args.algo {
        if !algos.contains(&a) {
            algos.push(a);
        }
    }
    let mut rows = Vec::new();
    let mut csv = csv::Writer::from_writer(out);
    csv.write_record(HEADER)?;
    for &algo in &algos {
        for rep in 0..args.reps {
            let (millis, result) = par::with_threads(threads, || {
                let t = Instant::now();
                let r = execute(algo, &d);
                (t.elapsed().as_millis(), r)
            });
            let result = result?;
            let row = Row {
                algo,
                n: d.n(),
                k: result.k,
                pattern: d.pattern.name(),
                seed: d.seed,
                threads,
                rep,
                millis,
                counters: result.counters.clone(),
                verify: reference.as_ref().map(|r| r.check(&result)),
            };
            csv.write_record(row.record())?;
            if args.counters {
                if let Some(c) = &row.counters {
                    let table: BTreeMap<String, u64> = c.table();
                    let cells: Vec<String> = table.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    writeln!(diag, "{} rep {rep}: {}", algo.name(), cells.join(" "))?;
                }
            }
            rows.push(row);
        }
    }
    csv.flush()?;
    if args.verify {
        let bad: Vec<&str> = rows.iter().filter(|r| r.verify == Some(false)).map(|r| r.algo.name()).collect();
        if !bad.is_empty() {
            writeln!(diag, "verify=fail")?;
            return Err(BenchError::Verify(format!("mismatching algorithms: {}", bad.join(", "))));
        }
        writeln!(diag, "verify=ok")?;
    }
    Ok(rows)
}

/// Entry point shared by the binary and tests; returns the exit code.
pub fn main_with<I, T>(argv: I, out: &mut dyn Write, diag: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args = match Args::try_parse_from(argv) {
        Ok(a) => a,
        Err(e) => {
            let _ = write!(diag, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = match &args.csv {
        Some(p) => std::fs::File::create(p).map_err(BenchError::from).and_then(|mut f| run(&args, &mut f, diag)),
        None => run(&args, out, diag),
    };
    match result {
        Ok(_) => 0,
        Err(e) => {
            let _ = writeln!(diag, "error: {e}");
            1
        }
    }
}
