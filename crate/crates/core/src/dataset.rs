//! Deterministic input generators and the plain-text dataset format.
//!
//! Random draws come from SplitMix64 used as a counter-based generator: the
//! `i`-th draw of a stream seeded with `s` is `mix64(s + (i + 1) * GOLDEN)`,
//! which is exactly the `i`-th output of the reference sequential SplitMix64
//! (Vigna, `splitmix64.c`). Any index can be computed independently, so
//! parallel generation produces the same bytes for every worker count.
//!
//! A draw is mapped to `[lo, hi]` by the multiply-shift reduction
//! `lo + (draw * span) >> 64`, with bias below `span / 2^64`.
//!
//! File format: a header line `n=<count> weighted=<0|1>` followed by `n`
//! lines holding `value` or `value<TAB>weight` as decimal integers.

use std::fmt::Write as _;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::{Error, Result};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// Largest value a generator may emit; `i64::MAX` is reserved as +infinity
/// by the tournament tree.
pub const MAX_VALUE: i64 = i64::MAX - 1;

#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Counter-based SplitMix64 stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SplitMix64 {
    seed: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { seed }
    }

    /// The `i`-th 64-bit output (0-based).
    #[inline]
    pub fn at(&self, i: u64) -> u64 {
        mix64(self.seed.wrapping_add(i.wrapping_add(1).wrapping_mul(GOLDEN)))
    }

    /// The `i`-th draw reduced to the inclusive range `[lo, hi]`.
    #[inline]
    pub fn uniform_at(&self, i: u64, lo: i64, hi: i64) -> i64 {
        debug_assert!(lo <= hi);
        let span = (hi as i128 - lo as i128 + 1) as u128;
        let off = (self.at(i) as u128 * span) >> 64;
        (lo as i128 + off as i128) as i64
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pattern {
    Range { k_prime: i64 },
    Line { t: i64, sigma: i64 },
    File,
}

impl Pattern {
    pub fn name(&self) -> &'static str {
        match self {
            Pattern::Range { .. } => "range",
            Pattern::Line { .. } => "line",
            Pattern::File => "file",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dataset {
    pub values: Vec<i64>,
    pub weights: Option<Vec<i64>>,
    pub seed: u64,
    pub pattern: Pattern,
}

impl Dataset {
    /// Wraps an explicit sequence (pattern `file`, seed 0).
    pub fn from_values(values: Vec<i64>, weights: Option<Vec<i64>>) -> Result<Self> {
        let d = Dataset { values, weights, seed: 0, pattern: Pattern::File };
        d.validate()?;
        Ok(d)
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn is_weighted(&self) -> bool {
        self.weights.is_some()
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(w) = &self.weights {
            if w.len() != self.values.len() {
                return Err(Error::LengthMismatch { what: "weights", expected: self.values.len(), got: w.len() });
            }
        }
        if let Some(i) = self.values.iter().position(|&v| v > MAX_VALUE) {
            return Err(Error::SentinelValue { index: i, value: self.values[i] });
        }
        Ok(())
    }

    pub fn with_weights(mut self, weights: Vec<i64>) -> Result<Self> {
        self.weights = Some(weights);
        self.validate()?;
        Ok(self)
    }
}

fn indexed(n: usize, f: impl Fn(usize) -> i64 + Sync + Send) -> Vec<i64> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        (0..n).into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..n).map(f).collect()
    }
}

/// `n` values drawn uniformly from `[1, k_prime]`.
pub fn gen_range(n: usize, k_prime: i64, seed: u64) -> Result<Dataset> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if !(1..=MAX_VALUE).contains(&k_prime) {
        return Err(Error::InvalidParameter(format!("k' must lie in [1, {MAX_VALUE}], got {k_prime}")));
    }
    let rng = SplitMix64::new(seed);
    let values = indexed(n, |i| rng.uniform_at(i as u64, 1, k_prime));
    Ok(Dataset { values, weights: None, seed, pattern: Pattern::Range { k_prime } })
}

/// `values[i-1] = t*i + s_i` for `i = 1..=n` with `s_i` uniform in `[0, sigma]`.
pub fn gen_line(n: usize, t: i64, sigma: i64, seed: u64) -> Result<Dataset> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    if t < 0 || sigma < 0 {
        return Err(Error::InvalidParameter("slope and noise width must be non-negative".into()));
    }
    let top = (t as i128) * (n as i128) + sigma as i128;
    if top > MAX_VALUE as i128 {
        return Err(Error::Overflow(format!("t*n + sigma = {top} exceeds the value range")));
    }
    let rng = SplitMix64::new(seed);
    let values = indexed(n, |i| t * (i as i64 + 1) + if sigma == 0 { 0 } else { rng.uniform_at(i as u64, 0, sigma) });
    Ok(Dataset { values, weights: None, seed, pattern: Pattern::Line { t, sigma } })
}

/// `n` weights drawn uniformly from `[lo, hi]`.
pub fn gen_weights(n: usize, lo: i64, hi: i64, seed: u64) -> Result<Vec<i64>> {
    if lo > hi {
        return Err(Error::InvalidParameter(format!("weight range {lo}:{hi} is empty")));
    }
    let rng = SplitMix64::new(seed);
    Ok(indexed(n, |i| rng.uniform_at(i as u64, lo, hi)))
}

/// Seed of the weight stream paired with a value stream seeded by `seed`.
pub fn weight_seed(seed: u64) -> u64 {
    mix64(seed ^ 0x5745_4947_4854_5300)
}

/// LIS length of `values`, measured with the binary-search baseline.
pub fn measured_rank(values: &[i64]) -> usize {
    crate::baselines::seq_bs(values).1
}

/// Finds a noise width `sigma` for which `gen_line(n, 1, sigma, seed)` has
/// LIS length as close to `target_k` as bisection over `sigma` gets.
/// The achieved rank is measured, not predicted; returns `(sigma, k)`.
pub fn calibrate_line_sigma(n: usize, target_k: usize, seed: u64) -> Result<(i64, usize)> {
    if target_k == 0 || target_k > n {
        return Err(Error::InvalidParameter(format!("target rank {target_k} outside [1, {n}]")));
    }
    let rank_for = |sigma: i64| -> Result<usize> { Ok(measured_rank(&gen_line(n, 1, sigma, seed)?.values)) };
    // Rank shrinks (noisily) as sigma grows; bracket then bisect.
    let cap = MAX_VALUE - n as i64;
    let (mut lo, mut hi) = (0i64, 1i64);
    let mut hi_rank = rank_for(hi)?;
    while hi_rank > target_k && hi < cap {
        lo = hi;
        hi = hi.saturating_mul(4).min(cap);
        hi_rank = rank_for(hi)?;
    }
    let mut best = (hi, hi_rank);
    let score = |k: usize| (k as i64 - target_k as i64).abs();
    let lo_rank = rank_for(lo)?;
    if score(lo_rank) < score(best.1) {
        best = (lo, lo_rank);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        let k = rank_for(mid)?;
        if score(k) < score(best.1) {
            best = (mid, k);
        }
        if k > target_k {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(best)
}

pub fn write_dataset_to(d: &Dataset, mut out: impl Write) -> Result<()> {
    d.validate()?;
    let mut buf = String::with_capacity(d.n() * 12 + 32);
    writeln!(buf, "n={} weighted={}", d.n(), d.weights.is_some() as u8).unwrap();
    match &d.weights {
        Some(w) => {
            for (v, w) in d.values.iter().zip(w) {
                writeln!(buf, "{v}\t{w}").unwrap();
            }
        }
        None => {
            for v in &d.values {
                writeln!(buf, "{v}").unwrap();
            }
        }
    }
    out.write_all(buf.as_bytes())?;
    Ok(())
}

pub fn write_dataset(d: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let f = std::fs::File::create(path)?;
    write_dataset_to(d, std::io::BufWriter::new(f))
}

fn format_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Format { line, msg: msg.into() }
}

fn parse_header(line: &str) -> Result<(usize, bool)> {
    let mut n = None;
    let mut weighted = None;
    for tok in line.split_whitespace() {
        match tok.split_once('=') {
            Some(("n", v)) => n = Some(v.parse::<usize>().map_err(|_| format_err(1, "bad count"))?),
            Some(("weighted", "0")) => weighted = Some(false),
            Some(("weighted", "1")) => weighted = Some(true),
            _ => return Err(format_err(1, format!("unexpected header token `{tok}`"))),
        }
    }
    let n = n.ok_or_else(|| format_err(1, "missing n="))?;
    let weighted = weighted.ok_or_else(|| format_err(1, "missing weighted="))?;
    if n == 0 {
        return Err(format_err(1, "n must be at least 1"));
    }
    Ok((n, weighted))
}

pub fn read_dataset_from(input: impl BufRead) -> Result<Dataset> {
    let mut lines = input.lines();
    let header = lines.next().ok_or_else(|| format_err(1, "missing header"))??;
    let (n, weighted) = parse_header(header.trim_end())?;
    let mut values = Vec::with_capacity(n);
    let mut weights = weighted.then(|| Vec::with_capacity(n));
    for (k, line) in lines.enumerate() {
        let line = line?;
        let lineno = k + 2;
        if line.trim().is_empty() {
            continue;
        }
        if values.len() == n {
            return Err(format_err(lineno, format!("more than {n} data rows")));
        }
        let mut cols = line.trim_end().split('\t');
        let v =
            cols.next().and_then(|c| c.trim().parse::<i64>().ok()).ok_or_else(|| format_err(lineno, "bad value"))?;
        match (&mut weights, cols.next()) {
            (Some(ws), Some(c)) => ws.push(c.trim().parse::<i64>().map_err(|_| format_err(lineno, "bad weight"))?),
            (Some(_), None) => return Err(format_err(lineno, "missing weight column")),
            (None, Some(_)) => return Err(format_err(lineno, "unexpected weight column")),
            (None, None) => {}
        }
        if cols.next().is_some() {
            return Err(format_err(lineno, "too many columns"));
        }
        values.push(v);
    }
    if values.len() != n {
        return Err(Error::LengthMismatch { what: "data rows", expected: n, got: values.len() });
    }
    Dataset::from_values(values, weights)
}

pub fn read_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    let f = std::fs::File::open(path)?;
    read_dataset_from(BufReader::new(f))
}
