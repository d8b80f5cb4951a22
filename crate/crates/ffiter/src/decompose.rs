//! Orbit and cycle decompositions of functional graphs.
//!
//! A decomposition splits the domain into an ordered list of components
//! `C₀ … C_{ℓ−1}`, each a maximal simple tour in the subgraph induced on the
//! vertices not yet used. The concatenation of the components, the component
//! sizes, and the auxiliary sequence (where the image of each component's
//! last vertex lands) are everything the codec needs.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::Result;
use crate::table::{as_permutation, FunctionTable, PermutationWitness};

/// How to split the functional graph into components.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecompositionStrategy {
    /// Cycles in order of least element; requires a permutation.
    OrderedCycle,
    /// Orbit of the least unused vertex, repeatedly.
    OrderedOrbit,
    /// Largest orbit first, ties broken by least starting vertex.
    GreedyOrbit,
}

/// One maximal simple tour together with its stop reason.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    pub vertices: Vec<usize>,
    /// True when the successor of the last vertex lies inside the tour
    /// (the walk ended in a cycle), false when the successor was dead.
    pub is_rho: bool,
}

/// An ordered list of components covering the whole domain.
///
/// `concat` is `C₀C₁…C_{ℓ−1}` as one sequence (a permutation of `[0, n)`),
/// `structure` holds the component sizes, `starts` the cumulative offsets
/// with `starts[0] = 0` and `starts[ℓ] = n` (component `i` occupies
/// positions `[starts[i], starts[i+1])`), and `aux[i]` is the position in
/// `concat` of the image of the last vertex of component `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitDecomposition {
    concat: Vec<usize>,
    structure: Vec<usize>,
    starts: Vec<usize>,
    aux: Vec<usize>,
}

impl OrbitDecomposition {
    pub fn n(&self) -> usize {
        self.concat.len()
    }

    /// Number of components ℓ.
    pub fn num_components(&self) -> usize {
        self.structure.len()
    }

    pub fn concat(&self) -> &[usize] {
        &self.concat
    }

    pub fn structure(&self) -> &[usize] {
        &self.structure
    }

    pub fn starts(&self) -> &[usize] {
        &self.starts
    }

    pub fn aux(&self) -> &[usize] {
        &self.aux
    }

    pub fn component(&self, i: usize) -> &[usize] {
        &self.concat[self.starts[i]..self.starts[i + 1]]
    }

    /// A component is a ρ-orbit exactly when its auxiliary position does not
    /// descend below the component's own start.
    pub fn is_rho(&self, i: usize) -> bool {
        self.aux[i] >= self.starts[i]
    }

    /// Index of the component containing concat position `p`.
    pub fn component_of_position(&self, p: usize) -> usize {
        debug_assert!(p < self.n());
        self.starts.partition_point(|&s| s <= p) - 1
    }

    /// Per-component descent depth: 0 for ρ-orbits, one more than the depth
    /// of the descent target otherwise.
    pub fn descent_depths(&self) -> Vec<usize> {
        descent_depths(&self.starts, &self.aux)
    }
}

/// Descent depth per component from a `starts`/`aux` pair.
///
/// Descents only ever target earlier components, so a left-to-right pass
/// resolves every chain.
pub fn descent_depths(starts: &[usize], aux: &[usize]) -> Vec<usize> {
    let ell = aux.len();
    let mut depth = vec![0usize; ell];
    for i in 0..ell {
        if aux[i] < starts[i] {
            let target = starts.partition_point(|&s| s <= aux[i]) - 1;
            debug_assert!(target < i);
            depth[i] = 1 + depth[target];
        }
    }
    depth
}

/// The largest number of descents a greedy decomposition can require on `n`
/// points: the greatest `d` with `(d+1)(d+2)/2 ≤ n`.
pub fn descent_bound(n: usize) -> usize {
    let n = n as u128;
    let mut d = 0u128;
    while (d + 2) * (d + 3) <= 2 * n {
        d += 1;
    }
    d as usize
}

/// The maximal simple tour from `v` in the subgraph induced on `live`.
///
/// Extends while the successor is live and not yet in the tour; reports
/// whether the stop was a revisit (ρ-orbit) or a dead successor.
pub fn orbit_of(t: &FunctionTable, v: usize, live: &[bool]) -> Orbit {
    debug_assert!(live[v], "orbit_of requires a live starting vertex");
    let mut in_tour = vec![false; t.n()];
    let mut vertices = vec![v];
    in_tour[v] = true;
    loop {
        let succ = t.apply(*vertices.last().unwrap());
        if !live[succ] {
            return Orbit {
                vertices,
                is_rho: false,
            };
        }
        if in_tour[succ] {
            return Orbit {
                vertices,
                is_rho: true,
            };
        }
        in_tour[succ] = true;
        vertices.push(succ);
    }
}

/// Orbit lengths of every live vertex in the induced subgraph.
#[derive(Debug, Clone)]
pub struct OrbitLengths {
    live: Vec<bool>,
    lengths: Vec<usize>,
}

impl OrbitLengths {
    /// Length of `v`'s orbit, or `None` if `v` is not live.
    pub fn length_of(&self, v: usize) -> Option<usize> {
        self.live.get(v).copied().unwrap_or(false).then(|| self.lengths[v])
    }

    pub fn live(&self) -> &[bool] {
        &self.live
    }
}

/// Computes the orbit length of every live vertex in one forward sweep.
///
/// Cycle members get the cycle length, tree vertices one more than their
/// successor (or 1 when the successor is dead). Iterative throughout, so
/// million-vertex chains cannot overflow the call stack.
pub fn orbit_lengths(t: &FunctionTable, live: &[bool]) -> OrbitLengths {
    let n = t.n();
    assert_eq!(live.len(), n, "live mask length must equal the domain size");
    let mut lengths = vec![0usize; n];
    let mut path = Vec::new();
    let mut path_pos = vec![usize::MAX; n];
    for v in 0..n {
        if live[v] {
            fill_lengths_from(t.values(), live, &mut lengths, &mut path, &mut path_pos, v);
        }
    }
    OrbitLengths {
        live: live.to_vec(),
        lengths,
    }
}

/// Walks forward from `start` assigning orbit lengths to every vertex with a
/// still-unknown length (`len[v] == 0`) along the way.
///
/// `path_pos` must be all-`usize::MAX` and `path` empty on entry; both are
/// restored before returning.
fn fill_lengths_from(
    values: &[usize],
    live: &[bool],
    len: &mut [usize],
    path: &mut Vec<usize>,
    path_pos: &mut [usize],
    start: usize,
) {
    debug_assert!(path.is_empty());
    if !live[start] || len[start] != 0 {
        return;
    }
    let mut cur = start;
    let base = loop {
        if !live[cur] {
            break 0;
        }
        if len[cur] != 0 {
            break len[cur];
        }
        if path_pos[cur] != usize::MAX {
            // The walk closed a cycle: everything from the first visit of
            // `cur` onwards is the cycle, and each member's orbit is exactly
            // that cycle.
            let cycle_start = path_pos[cur];
            let cycle_len = path.len() - cycle_start;
            for &u in &path[cycle_start..] {
                len[u] = cycle_len;
                path_pos[u] = usize::MAX;
            }
            path.truncate(cycle_start);
            break cycle_len;
        }
        path_pos[cur] = path.len();
        path.push(cur);
        cur = values[cur];
    };
    let mut l = base;
    while let Some(u) = path.pop() {
        path_pos[u] = usize::MAX;
        l += 1;
        len[u] = l;
    }
}

/// Shared component accumulator: append-only concatenation with position
/// tracking, so the stop reason and the auxiliary position of a walk are
/// read off the same array.
struct Builder {
    concat: Vec<usize>,
    pos: Vec<usize>,
    structure: Vec<usize>,
    starts: Vec<usize>,
    aux: Vec<usize>,
}

impl Builder {
    fn new(n: usize) -> Self {
        Builder {
            concat: Vec::with_capacity(n),
            pos: vec![usize::MAX; n],
            structure: Vec::new(),
            starts: vec![0],
            aux: Vec::new(),
        }
    }

    fn used(&self, v: usize) -> bool {
        self.pos[v] != usize::MAX
    }

    /// Walks the maximal simple tour from `v` among unused vertices and seals
    /// it as the next component. Positions are final once assigned, so the
    /// auxiliary entry is read directly off `pos`.
    fn extract_orbit(&mut self, values: &[usize], v: usize) -> usize {
        debug_assert!(!self.used(v));
        let component_start = self.concat.len();
        let mut cur = v;
        loop {
            self.pos[cur] = self.concat.len();
            self.concat.push(cur);
            let succ = values[cur];
            if self.pos[succ] != usize::MAX {
                self.aux.push(self.pos[succ]);
                break;
            }
            cur = succ;
        }
        let size = self.concat.len() - component_start;
        self.structure.push(size);
        self.starts.push(self.concat.len());
        size
    }

    fn finish(self, n: usize) -> OrbitDecomposition {
        debug_assert_eq!(self.concat.len(), n);
        OrbitDecomposition {
            concat: self.concat,
            structure: self.structure,
            starts: self.starts,
            aux: self.aux,
        }
    }
}

/// Ordered cycle decomposition of a permutation: cycles in order of least
/// element. Linear time.
pub fn ordered_cycle_decomposition(p: &PermutationWitness) -> OrbitDecomposition {
    let n = p.n();
    let values = p.table().values();
    let mut concat = Vec::with_capacity(n);
    let mut visited = vec![false; n];
    let mut structure = Vec::new();
    let mut starts = vec![0];
    let mut aux = Vec::new();
    for v in 0..n {
        if visited[v] {
            continue;
        }
        // v is the least element of its cycle: everything smaller is visited.
        let cycle_start = concat.len();
        let mut cur = v;
        loop {
            visited[cur] = true;
            concat.push(cur);
            cur = values[cur];
            if cur == v {
                break;
            }
        }
        structure.push(concat.len() - cycle_start);
        starts.push(concat.len());
        // the last element maps back to the cycle's first position
        aux.push(cycle_start);
    }
    OrbitDecomposition {
        concat,
        structure,
        starts,
        aux,
    }
}

/// Ordered orbit decomposition: the orbit of the least unused vertex,
/// repeatedly, in the subgraph induced on unused vertices. Linear time.
pub fn ordered_orbit_decomposition(t: &FunctionTable) -> OrbitDecomposition {
    let n = t.n();
    let values = t.values();
    let mut b = Builder::new(n);
    let mut next_unused = 0;
    while b.concat.len() < n {
        while b.used(next_unused) {
            next_unused += 1;
        }
        b.extract_orbit(values, next_unused);
    }
    b.finish(n)
}

/// Greedy orbit decomposition: repeatedly remove a maximal-length orbit,
/// ties broken by least starting vertex.
///
/// Orbit lengths are maintained incrementally: removing a component only
/// invalidates the live vertices whose forward path met it, found by reverse
/// reachability over predecessor lists, and only those are recomputed. The
/// output is identical to [`greedy_orbit_decomposition_reference`].
pub fn greedy_orbit_decomposition(t: &FunctionTable) -> OrbitDecomposition {
    let n = t.n();
    let values = t.values();

    // predecessor lists in CSR form
    let mut pred_off = vec![0usize; n + 1];
    for &y in values {
        pred_off[y + 1] += 1;
    }
    for i in 0..n {
        pred_off[i + 1] += pred_off[i];
    }
    let mut pred = vec![0usize; n];
    let mut cursor = pred_off.clone();
    for (x, &y) in values.iter().enumerate() {
        pred[cursor[y]] = x;
        cursor[y] += 1;
    }

    let mut live = vec![true; n];
    let mut len = vec![0usize; n];
    let mut path = Vec::new();
    let mut path_pos = vec![usize::MAX; n];
    for v in 0..n {
        fill_lengths_from(values, &live, &mut len, &mut path, &mut path_pos, v);
    }

    // max length first, least vertex among equals; stale entries are skipped
    // on pop (lengths only ever shrink)
    let mut heap: BinaryHeap<(usize, Reverse<usize>)> =
        (0..n).map(|v| (len[v], Reverse(v))).collect();

    let mut b = Builder::new(n);
    let mut queue: Vec<usize> = Vec::new();
    let mut invalidated: Vec<usize> = Vec::new();
    while b.concat.len() < n {
        let v = loop {
            let (l, Reverse(v)) = heap.pop().expect("live vertices remain");
            if live[v] && len[v] == l {
                break v;
            }
        };

        let component_start = b.concat.len();
        let size = b.extract_orbit(values, v);
        debug_assert_eq!(size, len[v], "maintained length must match the tour");
        let removed = &b.concat[component_start..];
        for &u in removed {
            live[u] = false;
        }

        // invalidate live ancestors of the removed component
        queue.clear();
        queue.extend_from_slice(removed);
        invalidated.clear();
        while let Some(u) = queue.pop() {
            for &w in &pred[pred_off[u]..pred_off[u + 1]] {
                if live[w] && len[w] != 0 {
                    len[w] = 0;
                    invalidated.push(w);
                    queue.push(w);
                }
            }
        }
        for &w in &invalidated {
            fill_lengths_from(values, &live, &mut len, &mut path, &mut path_pos, w);
        }
        for &w in &invalidated {
            heap.push((len[w], Reverse(w)));
        }
    }
    b.finish(n)
}

/// Reference greedy decomposition that recomputes every orbit length from
/// scratch after each removal. Quadratic; kept for cross-checking the
/// incremental version.
pub fn greedy_orbit_decomposition_reference(t: &FunctionTable) -> OrbitDecomposition {
    let n = t.n();
    let values = t.values();
    let mut live = vec![true; n];
    let mut b = Builder::new(n);
    let mut path = Vec::new();
    let mut path_pos = vec![usize::MAX; n];
    while b.concat.len() < n {
        let mut len = vec![0usize; n];
        for v in 0..n {
            if live[v] {
                fill_lengths_from(values, &live, &mut len, &mut path, &mut path_pos, v);
            }
        }
        let best = (0..n)
            .filter(|&v| live[v])
            .max_by_key(|&v| (len[v], Reverse(v)))
            .expect("live vertices remain");
        let component_start = b.concat.len();
        b.extract_orbit(values, best);
        for &u in &b.concat[component_start..] {
            live[u] = false;
        }
    }
    b.finish(n)
}

/// Dispatches to the decomposition named by `strategy`.
///
/// `OrderedCycle` certifies bijectivity first and propagates the failure.
pub fn decompose(t: &FunctionTable, strategy: DecompositionStrategy) -> Result<OrbitDecomposition> {
    match strategy {
        DecompositionStrategy::OrderedCycle => {
            Ok(ordered_cycle_decomposition(&as_permutation(t)?))
        }
        DecompositionStrategy::OrderedOrbit => Ok(ordered_orbit_decomposition(t)),
        DecompositionStrategy::GreedyOrbit => Ok(greedy_orbit_decomposition(t)),
    }
}
