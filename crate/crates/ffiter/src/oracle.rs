//! Brute-force ground truth for iteration and descent counts.
//!
//! Everything here replays raw structures directly and shares no logic with
//! the codec, so the equivalence tests actually compare two independent
//! routes. Performance is a non-goal; O(n) per query is fine.

use std::collections::HashMap;

use crate::decompose::OrbitDecomposition;
use crate::error::{Error, Result};
use crate::table::FunctionTable;

/// Applies the table literally, `m` times. The most naive route possible;
/// only sensible for small `m`.
pub fn naive_iterate(t: &FunctionTable, x: usize, m: u64) -> Result<usize> {
    if x >= t.n() {
        return Err(Error::XOutOfRange { x, n: t.n() });
    }
    let mut cur = x;
    for _ in 0..m {
        cur = t.apply(cur);
    }
    Ok(cur)
}

/// Computes `f^m(x)` by walking until either `m` steps elapse or the walk
/// revisits a vertex, then reads the answer off the recorded tail and cycle.
/// Time and memory O(min(m, n)).
pub fn oracle_iterate(t: &FunctionTable, x: usize, m: u64) -> Result<usize> {
    if x >= t.n() {
        return Err(Error::XOutOfRange { x, n: t.n() });
    }
    let mut first_visit: HashMap<usize, u64> = HashMap::new();
    let mut seq = Vec::new();
    let mut cur = x;
    let mut step = 0u64;
    loop {
        if step == m {
            return Ok(cur);
        }
        if let Some(&tail) = first_visit.get(&cur) {
            let cycle = step - tail;
            let idx = tail + (m - tail) % cycle;
            return Ok(seq[idx as usize]);
        }
        first_visit.insert(cur, step);
        seq.push(cur);
        cur = t.apply(cur);
        step += 1;
    }
}

/// Counts descents by pure replay of the decomposition structure: starting
/// from `x`'s component, follow the auxiliary chain while it points below
/// its own component, without any codec logic. This is the plateau value of
/// the codec's descent count for `m ≥ n`.
pub fn oracle_descents(d: &OrbitDecomposition, x: usize) -> usize {
    let pos = d
        .concat()
        .iter()
        .position(|&v| v == x)
        .expect("x must be a vertex of the decomposition");
    let mut i = component_by_scan(d.starts(), pos);
    let mut count = 0;
    while d.aux()[i] < d.starts()[i] {
        count += 1;
        i = component_by_scan(d.starts(), d.aux()[i]);
    }
    count
}

fn component_by_scan(starts: &[usize], pos: usize) -> usize {
    // deliberately linear: the oracle shares nothing with the codec's search
    let mut i = 0;
    while starts[i + 1] <= pos {
        i += 1;
    }
    i
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decompose::{
        greedy_orbit_decomposition, ordered_orbit_decomposition, DecompositionStrategy,
    };
    use crate::generators::{chain_function, random_function, staircase_function};

    fn example_table() -> FunctionTable {
        FunctionTable::from_values(vec![5, 6, 3, 5, 2, 2, 1]).unwrap()
    }

    #[test]
    fn oracle_iterate_closes_the_two_cycle() {
        let t = example_table();
        assert_eq!(oracle_iterate(&t, 6, 10).unwrap(), 6);
        assert_eq!(oracle_iterate(&t, 6, 11).unwrap(), 1);
        assert_eq!(oracle_iterate(&t, 0, 4).unwrap(), 5);
    }

    #[test]
    fn oracle_iterate_m_zero_is_identity() {
        let t = example_table();
        for x in 0..t.n() {
            assert_eq!(oracle_iterate(&t, x, 0).unwrap(), x);
        }
    }

    #[test]
    fn oracle_iterate_chain_falls_to_the_fixed_point() {
        let t = chain_function(10);
        assert_eq!(oracle_iterate(&t, 9, 100).unwrap(), 0);
        assert_eq!(oracle_iterate(&t, 9, 5).unwrap(), 4);
    }

    #[test]
    fn oracle_iterate_rejects_out_of_range() {
        let t = chain_function(3);
        assert!(matches!(
            oracle_iterate(&t, 3, 1),
            Err(Error::XOutOfRange { x: 3, n: 3 })
        ));
    }

    #[test]
    fn oracle_agrees_with_the_naive_loop() {
        for seed in 0..20 {
            let n = 1 + (seed as usize * 7) % 32;
            let t = random_function(n, seed);
            for x in 0..n {
                for m in 0..=(3 * n as u64) {
                    assert_eq!(
                        oracle_iterate(&t, x, m).unwrap(),
                        naive_iterate(&t, x, m).unwrap(),
                        "n={n} seed={seed} x={x} m={m}"
                    );
                }
            }
        }
    }

    #[test]
    fn descents_on_the_staircase() {
        let s = staircase_function(10);
        let d = greedy_orbit_decomposition(&s.table);
        assert_eq!(oracle_descents(&d, 9), 3);
        assert_eq!(oracle_descents(&d, 0), 0);
    }

    #[test]
    fn descents_zero_on_rho_members() {
        let d = ordered_orbit_decomposition(&example_table());
        for x in [0, 5, 2, 3, 1, 6] {
            assert_eq!(oracle_descents(&d, x), 0);
        }
        assert_eq!(oracle_descents(&d, 4), 1);
    }

    #[test]
    fn descents_of_the_ordered_chain_peak_at_n_minus_one() {
        let t = chain_function(10);
        let d = ordered_orbit_decomposition(&t);
        assert_eq!(oracle_descents(&d, 9), 9);

        let g = greedy_orbit_decomposition(&t);
        for x in 0..10 {
            assert_eq!(oracle_descents(&g, x), 0);
        }
    }

    #[test]
    fn codec_descents_plateau_at_oracle_descents() {
        for seed in 0..10 {
            let n = 2 + (seed as usize * 13) % 48;
            let t = random_function(n, 1000 + seed);
            for strategy in [
                DecompositionStrategy::OrderedOrbit,
                DecompositionStrategy::GreedyOrbit,
            ] {
                let d = crate::decompose::decompose(&t, strategy).unwrap();
                let code = crate::codec::build_code(&t, strategy, crate::codec::IndexMode::Dense)
                    .unwrap();
                for x in 0..n {
                    let plateau = oracle_descents(&d, x);
                    let evald = code.iterate(x, 2 * n as u64).unwrap();
                    assert_eq!(evald.descents, plateau, "n={n} seed={seed} x={x}");
                }
            }
        }
    }
}
