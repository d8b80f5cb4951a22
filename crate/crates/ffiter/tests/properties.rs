//! Property tests: every structural invariant of the decompositions and the
//! codec, checked against brute-force replays on small random instances.

use proptest::prelude::*;

use ffiter::codec::{build_code, CodeKind, IndexMode};
use ffiter::decompose::{
    decompose, descent_bound, greedy_orbit_decomposition, greedy_orbit_decomposition_reference,
    orbit_lengths, orbit_of, ordered_cycle_decomposition, ordered_orbit_decomposition,
    DecompositionStrategy, OrbitDecomposition,
};
use ffiter::generators::random_permutation;
use ffiter::oracle::{naive_iterate, oracle_descents, oracle_iterate};
use ffiter::table::{as_permutation, FunctionTable};
use ffiter::{io, Error};

fn arb_table(max_n: usize) -> impl Strategy<Value = FunctionTable> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(0..n, n)
            .prop_map(move |values| FunctionTable::new(n, values).unwrap())
    })
}

fn arb_permutation(max_n: usize) -> impl Strategy<Value = FunctionTable> {
    ((1..=max_n), any::<u64>())
        .prop_map(|(n, seed)| random_permutation(n, seed).into_table())
}

/// Checks that a decomposition is structurally sound for `t`: components
/// partition the domain, each component replays `f` in concat order, and
/// the aux entry is the landing position of the component's last element.
fn check_decomposition(t: &FunctionTable, d: &OrbitDecomposition) {
    let n = t.n();
    assert_eq!(d.n(), n);

    // partition: sorting the concatenation yields the identity
    let mut sorted = d.concat().to_vec();
    sorted.sort_unstable();
    assert!(sorted.into_iter().eq(0..n));

    // starts bracket the structure
    assert_eq!(d.starts()[0], 0);
    assert_eq!(*d.starts().last().unwrap(), n);
    assert!(d.starts().windows(2).all(|w| w[0] < w[1]));
    assert_eq!(d.structure().len(), d.num_components());
    assert_eq!(d.aux().len(), d.num_components());

    for i in 0..d.num_components() {
        let (s, e) = (d.starts()[i], d.starts()[i + 1]);
        // components are tours of f: replay visits concat positions in order
        for k in s..e - 1 {
            assert_eq!(t.apply(d.concat()[k]), d.concat()[k + 1]);
        }
        // the aux entry is where the last element's image sits
        let last = d.concat()[e - 1];
        assert_eq!(d.concat()[d.aux()[i]], t.apply(last));
        // descents never point forward
        assert!(d.aux()[i] < e);
        // ρ classification agrees with replaying f for the component size
        let landed = naive_iterate(t, d.concat()[s], (e - s) as u64).unwrap();
        let landed_pos = d.concat().iter().position(|&v| v == landed).unwrap();
        assert_eq!(d.is_rho(i), (s..e).contains(&landed_pos));
    }

    // the first component of a total function is always a ρ-orbit
    assert!(d.is_rho(0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn decompositions_are_sound(t in arb_table(48)) {
        check_decomposition(&t, &ordered_orbit_decomposition(&t));
        check_decomposition(&t, &greedy_orbit_decomposition(&t));
    }

    #[test]
    fn cycle_decomposition_is_sound_and_all_rho(t in arb_permutation(48)) {
        let p = as_permutation(&t).unwrap();
        let d = ordered_cycle_decomposition(&p);
        check_decomposition(&t, &d);
        for i in 0..d.num_components() {
            prop_assert_eq!(d.aux()[i], d.starts()[i]);
        }
    }

    #[test]
    fn ordered_orbit_of_a_permutation_is_its_cycle_decomposition(t in arb_permutation(48)) {
        let p = as_permutation(&t).unwrap();
        prop_assert_eq!(
            ordered_orbit_decomposition(&t),
            ordered_cycle_decomposition(&p)
        );
    }

    #[test]
    fn greedy_structure_is_non_increasing(t in arb_table(64)) {
        let d = greedy_orbit_decomposition(&t);
        prop_assert!(d.structure().windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn incremental_greedy_matches_full_recompute(t in arb_table(96)) {
        prop_assert_eq!(
            greedy_orbit_decomposition(&t),
            greedy_orbit_decomposition_reference(&t)
        );
    }

    #[test]
    fn orbit_lengths_match_replay_after_every_removal(t in arb_table(48)) {
        // replay the greedy loop, cross-checking the length map against
        // per-vertex orbit walks at every step
        let n = t.n();
        let mut live = vec![true; n];
        loop {
            let ol = orbit_lengths(&t, &live);
            let mut best: Option<(usize, usize)> = None;
            for v in 0..n {
                if !live[v] {
                    prop_assert_eq!(ol.length_of(v), None);
                    continue;
                }
                let orbit = orbit_of(&t, v, &live);
                prop_assert_eq!(ol.length_of(v), Some(orbit.vertices.len()));
                // the local length recurrences
                let succ = t.apply(*orbit.vertices.last().unwrap());
                if orbit.vertices.len() == 1 {
                    prop_assert!(live[succ] == orbit.is_rho);
                }
                let keep = match best {
                    Some((len, start)) => {
                        let cand = orbit.vertices.len();
                        cand > len || (cand == len && v < start)
                    }
                    None => true,
                };
                if keep {
                    best = Some((orbit.vertices.len(), v));
                }
            }
            let Some((_, start)) = best else { break };
            for v in orbit_of(&t, start, &live).vertices {
                live[v] = false;
            }
        }
    }

    #[test]
    fn iterate_matches_both_oracles(t in arb_table(40), xs in proptest::collection::vec(any::<prop::sample::Index>(), 4)) {
        let n = t.n();
        for strategy in [DecompositionStrategy::OrderedOrbit, DecompositionStrategy::GreedyOrbit] {
            for mode in [IndexMode::Dense, IndexMode::BinarySearch] {
                let code = build_code(&t, strategy, mode).unwrap();
                for ix in &xs {
                    let x = ix.index(n);
                    for m in [0, 1, 2, n as u64, 2 * n as u64, 3 * n as u64, u64::MAX / 7] {
                        let got = code.iterate(x, m).unwrap().value;
                        prop_assert_eq!(got, oracle_iterate(&t, x, m).unwrap());
                        if m <= 3 * n as u64 {
                            prop_assert_eq!(got, naive_iterate(&t, x, m).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn index_modes_evaluate_identically(t in arb_table(40)) {
        let n = t.n();
        let dense = build_code(&t, DecompositionStrategy::GreedyOrbit, IndexMode::Dense).unwrap();
        let bsearch = build_code(&t, DecompositionStrategy::GreedyOrbit, IndexMode::BinarySearch).unwrap();
        for x in 0..n {
            for m in [0u64, 1, 3, n as u64, 5 * n as u64] {
                let a = dense.iterate(x, m).unwrap();
                let b = bsearch.iterate(x, m).unwrap();
                prop_assert_eq!(a.value, b.value);
                prop_assert_eq!(a.descents, b.descents);
            }
            prop_assert_eq!(dense.component_of(x), bsearch.component_of(x));
        }
    }

    #[test]
    fn iterates_compose_additively(t in arb_table(40), a in 0u64..200, b in 0u64..200, ix in any::<prop::sample::Index>()) {
        let code = build_code(&t, DecompositionStrategy::GreedyOrbit, IndexMode::Dense).unwrap();
        let x = ix.index(t.n());
        let mid = code.iterate(x, a).unwrap().value;
        prop_assert_eq!(
            code.iterate(x, a + b).unwrap().value,
            code.iterate(mid, b).unwrap().value
        );
    }

    #[test]
    fn permutation_codes_never_descend(t in arb_permutation(40), ix in any::<prop::sample::Index>()) {
        let code = build_code(&t, DecompositionStrategy::OrderedCycle, IndexMode::Dense).unwrap();
        prop_assert_eq!(code.kind(), CodeKind::Permutation);
        let x = ix.index(t.n());
        for m in [0u64, 1, 17, 1 << 30, u64::MAX] {
            let r = code.iterate(x, m).unwrap();
            prop_assert_eq!(r.descents, 0);
            prop_assert_eq!(r.table_reads, 5);
            prop_assert!(r.arith_ops <= 5);
        }
        // the generic π loop also never takes the descent branch
        let r = code.pi_iterate(ix.index(t.n()), 1 << 40).unwrap();
        prop_assert_eq!(r.descents, 0);
    }

    #[test]
    fn descents_are_monotone_and_plateau(t in arb_table(24), ix in any::<prop::sample::Index>()) {
        let n = t.n();
        let code = build_code(&t, DecompositionStrategy::OrderedOrbit, IndexMode::Dense).unwrap();
        let d = ordered_orbit_decomposition(&t);
        let x = ix.index(n);
        let mut prev = 0;
        let plateau = oracle_descents(&d, x);
        for m in 0..=(3 * n as u64) {
            let now = code.iterate(x, m).unwrap().descents;
            prop_assert!(now >= prev, "descents dropped from {} to {} at m={}", prev, now, m);
            if m >= n as u64 {
                prop_assert_eq!(now, plateau);
            }
            prev = now;
        }
    }

    #[test]
    fn greedy_descents_respect_the_bound(t in arb_table(128)) {
        let n = t.n();
        let d = greedy_orbit_decomposition(&t);
        let bound = descent_bound(n);
        for x in 0..n {
            prop_assert!(oracle_descents(&d, x) <= bound);
        }
    }

    #[test]
    fn code_files_round_trip(t in arb_table(64)) {
        for strategy in [DecompositionStrategy::OrderedOrbit, DecompositionStrategy::GreedyOrbit] {
            let code = build_code(&t, strategy, IndexMode::Dense).unwrap();
            let mut buf = Vec::new();
            io::write_code(&code, &mut buf).unwrap();
            let back = io::read_code(buf.as_slice()).unwrap();
            prop_assert_eq!(back.sigma(), code.sigma());
            prop_assert_eq!(back.starts(), code.starts());
            prop_assert_eq!(back.aux(), code.aux());
            prop_assert_eq!(back.kind(), code.kind());
            let mut again = Vec::new();
            io::write_code(&back, &mut again).unwrap();
            prop_assert_eq!(buf, again);
        }
    }

    #[test]
    fn table_files_round_trip(t in arb_table(64)) {
        let mut buf = Vec::new();
        io::write_table(&t, &mut buf).unwrap();
        let back = io::read_table(buf.as_slice()).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn decoded_table_inverts_build(t in arb_table(64)) {
        for strategy in [DecompositionStrategy::OrderedOrbit, DecompositionStrategy::GreedyOrbit] {
            let code = build_code(&t, strategy, IndexMode::Dense).unwrap();
            prop_assert_eq!(&code.decoded_table(), &t);
        }
    }

    #[test]
    fn walks_revisit_within_n_steps(t in arb_table(64), ix in any::<prop::sample::Index>()) {
        // pigeonhole: some vertex repeats within n steps of any start
        let n = t.n();
        let mut seen = vec![false; n];
        let mut cur = ix.index(n);
        let mut revisited = false;
        for _ in 0..=n {
            if seen[cur] {
                revisited = true;
                break;
            }
            seen[cur] = true;
            cur = t.apply(cur);
        }
        prop_assert!(revisited);
    }
}

#[test]
fn decompose_dispatch_matches_named_operations() {
    let t = FunctionTable::from_values(vec![5, 6, 3, 5, 2, 2, 1]).unwrap();
    assert_eq!(
        decompose(&t, DecompositionStrategy::OrderedOrbit).unwrap(),
        ordered_orbit_decomposition(&t)
    );
    assert_eq!(
        decompose(&t, DecompositionStrategy::GreedyOrbit).unwrap(),
        greedy_orbit_decomposition(&t)
    );
    assert!(matches!(
        decompose(&t, DecompositionStrategy::OrderedCycle),
        Err(Error::NotInjective { .. })
    ));
}
