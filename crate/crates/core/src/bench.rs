//! Rank-scaling benchmark on `C_4^n` and the analytic operation-count model.
//!
//! Each measured instance is the full decision for `x = (1, ..., 1)` and
//! `y = (3, ..., 3)`: building the group from its moduli, building both
//! elements and deciding equivalence. Timings use a monotonic clock, a
//! warm-up phase, and batches long enough to swamp timer resolution.

use std::io::{self, Write};
use std::time::{Duration, Instant};

use crate::equivalence::{are_automorphic_with, Method};
use crate::error::Result;
use crate::group::make_group;
use crate::snf::{quotient_matrix, smith_normal_form_with_stats, SnfStats};

/// Exponent of classical-to-Strassen matrix multiplication used for the
/// SNF operation model.
pub const STRASSEN_EXPONENT: f64 = 2.8074;

/// Ranks `{3 + 10k : 0 <= k <= 16} ∪ {2^k : 1 <= k <= 9}`, ascending.
pub fn default_ranks() -> Vec<usize> {
    let mut ranks: Vec<usize> = (0..=16)
        .map(|k| 3 + 10 * k)
        .chain((1..=9).map(|k| 1 << k))
        .collect();
    ranks.sort_unstable();
    ranks.dedup();
    ranks
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub ranks: Vec<usize>,
    pub methods: Vec<Method>,
    pub trials: usize,
    pub warmup: Duration,
    /// Minimum wall time of one timed batch.
    pub batch_time: Duration,
    /// SNF is cubic; ranks above this are skipped for it.
    pub snf_max_rank: usize,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            ranks: default_ranks(),
            methods: Method::ALL.to_vec(),
            trials: 7,
            warmup: Duration::from_millis(20),
            batch_time: Duration::from_millis(5),
            snf_max_rank: 128,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub rank: usize,
    pub method: Method,
    pub mean_ms: f64,
    pub stddev_ms: f64,
    pub median_ms: f64,
}

/// One `isAutoImage`-style decision on `C_4^rank`.
pub fn decide_c4_instance(rank: usize, method: Method) -> Result<bool> {
    let moduli = vec![4u32; rank];
    let g = make_group(&moduli)?;
    let x = g.element(&vec![1u32; rank])?;
    let y = g.element(&vec![3u32; rank])?;
    are_automorphic_with(&g, &x, &y, method)
}

/// Per-call milliseconds of `f`, one sample per trial.
pub fn time_samples<F: FnMut()>(mut f: F, trials: usize, warmup: Duration, batch_time: Duration) -> Vec<f64> {
    let start = Instant::now();
    let mut calls = 0u64;
    while calls == 0 || start.elapsed() < warmup {
        f();
        calls += 1;
    }
    let per_call = start.elapsed().as_secs_f64() / calls as f64;
    let batch = ((batch_time.as_secs_f64() / per_call.max(1e-9)).ceil() as u64).max(1);
    (0..trials.max(1))
        .map(|_| {
            let t = Instant::now();
            for _ in 0..batch {
                f();
            }
            t.elapsed().as_secs_f64() * 1e3 / batch as f64
        })
        .collect()
}

fn summarize(samples: &[f64]) -> (f64, f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = if samples.len() > 1 {
        samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let mid = sorted.len() / 2;
    let median = if sorted.len().is_multiple_of(2) {
        (sorted[mid - 1] + sorted[mid]) / 2.0
    } else {
        sorted[mid]
    };
    (mean, var.sqrt(), median)
}

pub fn run_bench(config: &BenchConfig) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for &rank in &config.ranks {
        for &method in &config.methods {
            if method == Method::Snf && rank > config.snf_max_rank {
                continue;
            }
            assert!(
                decide_c4_instance(rank, method)?,
                "C4^{rank} instance must be equivalent"
            );
            let samples = time_samples(
                || {
                    std::hint::black_box(decide_c4_instance(std::hint::black_box(rank), method).ok());
                },
                config.trials,
                config.warmup,
                config.batch_time,
            );
            let (mean_ms, stddev_ms, median_ms) = summarize(&samples);
            rows.push(BenchRow {
                rank,
                method,
                mean_ms,
                stddev_ms,
                median_ms,
            });
        }
    }
    Ok(rows)
}

/// Entry growth of the SNF elimination on the `C_4^rank` instance for `x`.
pub fn snf_entry_growth(rank: usize) -> Result<SnfStats> {
    let g = make_group(&vec![4u32; rank])?;
    let x = g.element(&vec![1u32; rank])?;
    Ok(smith_normal_form_with_stats(&quotient_matrix(&g, &x)?).1)
}

pub const CSV_HEADER: &str = "rank,method,mean_ms,stddev_ms";

pub fn write_csv<W: Write>(rows: &[BenchRow], out: &mut W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(out, "{},{},{:.6},{:.6}", r.rank, r.method, r.mean_ms, r.stddev_ms)?;
    }
    Ok(())
}

/// `y = coefficient * x^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerFit {
    pub coefficient: f64,
    pub exponent: f64,
}

/// Least squares on `(ln x, ln y)`. Needs two distinct positive `x`.
pub fn fit_power_law(points: &[(f64, f64)]) -> Option<PowerFit> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let n = logs.len() as f64;
    if logs.len() < 2 {
        return None;
    }
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let exponent = sxy / sxx;
    Some(PowerFit {
        coefficient: (my - exponent * mx).exp(),
        exponent,
    })
}

/// Fits median runtime against rank for one method.
pub fn fit_rows(rows: &[BenchRow], method: Method) -> Option<PowerFit> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.method == method)
        .map(|r| (r.rank as f64, r.median_ms))
        .collect();
    fit_power_law(&pts)
}

/// Operation count of the splitting algorithm at exponent `10^20`:
/// factoring cost, then valuations and sweep, then the sort.
pub fn model_fast_ops(rank: f64) -> f64 {
    2.0e7 + 4.0 * rank * 67.0 + 67.0 * rank * rank.log2()
}

pub fn model_snf_ops(rank: f64) -> f64 {
    rank.powf(STRASSEN_EXPONENT)
}

/// Smallest integer rank at which the splitting model is cheaper than the
/// SNF model.
pub fn model_crossover() -> usize {
    let cheaper = |n: usize| model_fast_ops(n as f64) < model_snf_ops(n as f64);
    let (mut lo, mut hi) = (1usize, 2usize);
    while !cheaper(hi) {
        lo = hi;
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if cheaper(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

pub const MODEL_CSV_HEADER: &str = "rank,fast_ops,snf_ops";

pub fn write_model_csv<W: Write>(ranks: &[usize], out: &mut W) -> io::Result<()> {
    writeln!(out, "{MODEL_CSV_HEADER}")?;
    for &n in ranks {
        writeln!(
            out,
            "{},{:.1},{:.1}",
            n,
            model_fast_ops(n as f64),
            model_snf_ops(n as f64)
        )?;
    }
    Ok(())
}
