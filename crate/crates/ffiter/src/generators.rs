//! Deterministic instance generators: seeded uniform tables and the
//! adversarial families used by the descent experiments.

use crate::table::{as_permutation, FunctionTable, PermutationWitness};

/// SplitMix64 pseudorandom generator (Steele, Lea & Flood), the generator
/// behind `java.util.SplittableRandom`.
///
/// The constants are fixed by the algorithm, so a given seed produces the
/// same stream on every platform and in every build, which is what makes
/// every seeded experiment in this crate reproducible bit for bit.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix(self.state)
    }

    /// Uniform value in `[0, bound)` by threshold rejection, so the result
    /// is exactly uniform for every bound.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        assert!(bound >= 1, "bound must be positive");
        // 2^64 mod bound, computed without 128-bit arithmetic
        let rem = ((u64::MAX % bound) + 1) % bound;
        loop {
            let v = self.next_u64();
            if rem == 0 || v <= u64::MAX - rem {
                return v % bound;
            }
        }
    }
}

/// Derives an independent stream seed for experiment sample `(n, stream)`.
pub fn derive_seed(seed: u64, n: u64, stream: u64) -> u64 {
    mix(mix(mix(seed) ^ n) ^ stream)
}

/// A uniform random function on `[0, n)`: every entry drawn independently.
/// Identical output for identical `(n, seed)` on every platform.
pub fn random_function(n: usize, seed: u64) -> FunctionTable {
    assert!(n >= 1);
    let mut rng = SplitMix64::new(seed);
    let values = (0..n).map(|_| rng.next_below(n as u64) as usize).collect();
    FunctionTable::new(n, values).expect("sampled entries lie in [0, n)")
}

/// A uniform random permutation of `[0, n)` via an unbiased Fisher–Yates
/// shuffle over the same generator.
pub fn random_permutation(n: usize, seed: u64) -> PermutationWitness {
    assert!(n >= 1);
    let mut rng = SplitMix64::new(seed);
    let mut values: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.next_below(i as u64 + 1) as usize;
        values.swap(i, j);
    }
    let table = FunctionTable::new(n, values).expect("shuffle preserves the domain");
    as_permutation(&table).expect("a shuffle of the identity is a bijection")
}

/// The descending chain `f(k) = max(0, k−1)`: the worst case for the ordered
/// strategy (every orbit is a singleton).
pub fn chain_function(n: usize) -> FunctionTable {
    assert!(n >= 1);
    let values = (0..n).map(|k| k.saturating_sub(1)).collect();
    FunctionTable::new(n, values).expect("chain entries lie in [0, n)")
}

/// The ascending chain `g(k) = min(k+1, n−1)`: a single orbit, no descents.
pub fn anti_chain_function(n: usize) -> FunctionTable {
    assert!(n >= 1);
    let values = (0..n).map(|k| (k + 1).min(n - 1)).collect();
    FunctionTable::new(n, values).expect("anti-chain entries lie in [0, n)")
}

/// The staircase family: the function whose greedy decomposition meets the
/// descent bound exactly.
#[derive(Debug, Clone)]
pub struct Staircase {
    pub table: FunctionTable,
    /// The descent bound `⌊(√(1+8n)−3)/2⌋` this instance attains.
    pub depth: usize,
    /// Size of the staircase core `(depth+1)(depth+2)/2 ≤ n`.
    pub core_size: usize,
}

/// Builds the staircase function on `n` points.
///
/// The core consists of consecutive components of sizes `d+1, d, …, 1`:
/// within a component each element maps to its successor, the last element
/// of the first component maps to itself, and the last element of every
/// later component maps to the last element of the previous one. Points
/// beyond the core extend the first component as a chain feeding vertex 0.
pub fn staircase_function(n: usize) -> Staircase {
    assert!(n >= 1);
    let depth = crate::decompose::descent_bound(n);
    let core_size = (depth + 1) * (depth + 2) / 2;
    debug_assert!(core_size <= n);
    // successor everywhere, then patch the component ends and the tail of
    // the extension chain
    let mut values: Vec<usize> = (1..=n).collect();
    let mut start = 0;
    let mut prev_last = 0;
    for j in 0..=depth {
        let size = depth + 1 - j;
        let last = start + size - 1;
        values[last] = if j == 0 { last } else { prev_last };
        prev_last = last;
        start += size;
    }
    if n > core_size {
        values[n - 1] = 0;
    }
    Staircase {
        table: FunctionTable::new(n, values).expect("staircase entries lie in [0, n)"),
        depth,
        core_size,
    }
}
