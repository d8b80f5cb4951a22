//! The descent-statistics experiment: sample seeded random tables over a
//! range of domain sizes, code them, and measure how many descents the
//! iterate evaluation needs once past its plateau.

use std::io::Write;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::codec::{build_code, IndexMode};
use crate::decompose::{descent_bound, DecompositionStrategy};
use crate::error::Result;
use crate::generators::{derive_seed, random_function, random_permutation};

/// Default experiment seed; the documented baseline for reproducing the
/// shipped statistics.
pub const DEFAULT_SEED: u64 = 0xC0FFEE;

/// Aggregate descent statistics for one domain size.
#[derive(Debug, Clone, PartialEq)]
pub struct DescentStats {
    pub n: usize,
    pub samples: usize,
    pub seed: u64,
    /// Maximum plateau descent count over all samples and all points.
    pub max_descents: usize,
    /// Mean over samples of the per-table mean over points.
    pub avg_descents: f64,
    pub log2n: f64,
    /// `log2n / avg_descents`; infinite when no sample ever descends.
    pub ratio: f64,
    /// The worst-case bound `⌊(√(1+8n)−3)/2⌋`.
    pub bound: usize,
    pub elapsed: Duration,
}

/// Per-sample detail row for the optional detail output.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleDetail {
    pub n: usize,
    pub sample: usize,
    pub max_descents: usize,
    pub avg_descents: f64,
}

/// Runs the experiment for every `n = 2^exp_min … 2^exp_max`.
///
/// Each sample draws its table from a stream derived from
/// `(seed, n, sample index)`, codes it under `strategy`, and records the
/// plateau descent count of every point (measured at `m = 2n`, safely past
/// the plateau). `OrderedCycle` draws permutations instead of general
/// tables. Samples are independent and run in parallel on the current rayon
/// pool; aggregation order is fixed by sample index, so the output is a
/// deterministic function of the arguments.
pub fn run_experiment(
    exp_min: u32,
    exp_max: u32,
    samples: usize,
    seed: u64,
    strategy: DecompositionStrategy,
) -> Vec<DescentStats> {
    run_experiment_detailed(exp_min, exp_max, samples, seed, strategy).0
}

/// [`run_experiment`] additionally returning one detail row per sample.
pub fn run_experiment_detailed(
    exp_min: u32,
    exp_max: u32,
    samples: usize,
    seed: u64,
    strategy: DecompositionStrategy,
) -> (Vec<DescentStats>, Vec<SampleDetail>) {
    assert!((1..=62).contains(&exp_min), "exp_min must be in 1..=62");
    assert!(exp_min <= exp_max && exp_max <= 62, "need exp_min <= exp_max <= 62");
    assert!(samples >= 1, "need at least one sample");

    let mut stats = Vec::new();
    let mut details = Vec::new();
    for exp in exp_min..=exp_max {
        let n = 1usize << exp;
        let started = Instant::now();
        let per_sample: Vec<(usize, u64)> = (0..samples)
            .into_par_iter()
            .map(|s| sample_descents(n, seed, s, strategy))
            .collect();

        let mut max_descents = 0usize;
        let mut total: u64 = 0;
        for (s, &(sample_max, sample_sum)) in per_sample.iter().enumerate() {
            max_descents = max_descents.max(sample_max);
            total += sample_sum;
            details.push(SampleDetail {
                n,
                sample: s,
                max_descents: sample_max,
                avg_descents: sample_sum as f64 / n as f64,
            });
        }
        let avg_descents = total as f64 / (samples as f64 * n as f64);
        let log2n = exp as f64;
        stats.push(DescentStats {
            n,
            samples,
            seed,
            max_descents,
            avg_descents,
            log2n,
            ratio: log2n / avg_descents,
            bound: descent_bound(n),
            elapsed: started.elapsed(),
        });
    }
    (stats, details)
}

/// Max and sum of the plateau descent counts over all points of one sampled
/// table.
fn sample_descents(
    n: usize,
    seed: u64,
    sample: usize,
    strategy: DecompositionStrategy,
) -> (usize, u64) {
    let stream = derive_seed(seed, n as u64, sample as u64);
    let table = match strategy {
        DecompositionStrategy::OrderedCycle => random_permutation(n, stream).into_table(),
        _ => random_function(n, stream),
    };
    let code = build_code(&table, strategy, IndexMode::Dense)
        .expect("sampled tables satisfy the strategy's preconditions");
    let m = 2 * n as u64;
    let mut max = 0usize;
    let mut sum = 0u64;
    for x in 0..n {
        let d = code
            .iterate(x, m)
            .expect("x ranges over the domain")
            .descents;
        max = max.max(d);
        sum += d as u64;
    }
    (max, sum)
}

/// Writes the statistics as CSV: a fixed header, one row per domain size,
/// fractions with six decimal digits, `\n` line endings. Identical inputs
/// produce identical bytes apart from the `elapsed_ms` column.
pub fn emit_csv<W: Write>(stats: &[DescentStats], mut w: W) -> Result<()> {
    writeln!(
        w,
        "n,samples,seed,max_descents,avg_descents,log2n,ratio,bound,elapsed_ms"
    )?;
    for s in stats {
        writeln!(
            w,
            "{},{},{},{},{:.6},{:.6},{:.6},{},{}",
            s.n,
            s.samples,
            s.seed,
            s.max_descents,
            s.avg_descents,
            s.log2n,
            s.ratio,
            s.bound,
            s.elapsed.as_millis()
        )?;
    }
    Ok(())
}

/// Writes the per-sample detail rows as CSV.
pub fn emit_detail_csv<W: Write>(details: &[SampleDetail], mut w: W) -> Result<()> {
    writeln!(w, "n,sample,max_descents,avg_descents")?;
    for d in details {
        writeln!(
            w,
            "{},{},{},{:.6}",
            d.n, d.sample, d.max_descents, d.avg_descents
        )?;
    }
    Ok(())
}
