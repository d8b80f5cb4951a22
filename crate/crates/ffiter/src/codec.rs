//! The fast-forward code: a conjugated layout of a lookup table in which the
//! m-th iterate is evaluated in a handful of table reads.
//!
//! A code stores the conjugating permutation σ (the concatenated component
//! layout), its inverse, the component start offsets, and the auxiliary
//! sequence. Writing π for the canonical function whose components are the
//! consecutive blocks `[starts[i], starts[i+1])`, the original table
//! satisfies `f = σ∘π∘σ⁻¹`, so `f^m(x) = σ(π^m(σ⁻¹(x)))` and iterating π is
//! block arithmetic plus an occasional descent into an earlier block.

use crate::decompose::{decompose, descent_depths, DecompositionStrategy};
use crate::error::{Error, Result};
use crate::table::FunctionTable;

/// How the code answers "which component contains position x".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexMode {
    /// A dense length-n table: one read per query.
    Dense,
    /// Binary search over the component starts: ⌈log₂ℓ⌉ reads per query,
    /// no length-n index table.
    BinarySearch,
}

/// Whether the code certifies that every component is a cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodeKind {
    /// Every component is a ρ-orbit starting at its own first position;
    /// evaluation never descends.
    Permutation,
    General,
}

#[derive(Debug, Clone)]
enum ComponentIndex {
    Dense(Vec<usize>),
    BinarySearch,
}

/// One evaluated iterate together with its instrumentation.
///
/// `table_reads` counts indexed accesses into the stored tables (σ, σ⁻¹,
/// starts, aux, the dense component index, and the precomputed cycle-length
/// table when present; each binary-search probe counts one read).
/// `arith_ops` counts additions, subtractions, and modular reductions;
/// comparisons are free.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalResult {
    pub value: usize,
    pub descents: usize,
    pub table_reads: usize,
    pub arith_ops: usize,
}

/// The deployable artifact: σ, σ⁻¹, component starts, auxiliary sequence,
/// and a component-index strategy. Immutable after construction; evaluation
/// is reentrant and all instrumentation lives in the per-call [`EvalResult`].
#[derive(Debug, Clone)]
pub struct FastForwardCode {
    sigma: Vec<usize>,
    sigma_inv: Vec<usize>,
    starts: Vec<usize>,
    aux: Vec<usize>,
    index: ComponentIndex,
    kind: CodeKind,
    /// `starts[i+1] − aux[i]` per component: the ρ-cycle length. Present for
    /// permutation codes and hot-built codes, where it replaces one
    /// subtraction per evaluation with one read.
    span: Option<Vec<u64>>,
}

/// Builds the fast-forward code of `t` under the given decomposition
/// strategy and component-index mode.
///
/// `OrderedCycle` requires a bijective table and certifies the resulting
/// code as a permutation code. Preprocessing is a small constant multiple of
/// n for the ordered strategies.
pub fn build_code(
    t: &FunctionTable,
    strategy: DecompositionStrategy,
    mode: IndexMode,
) -> Result<FastForwardCode> {
    build_code_impl(t, strategy, mode, false)
}

/// Like [`build_code`], additionally precomputing the cycle-length table for
/// general codes ("hot" mode).
pub fn build_code_hot(
    t: &FunctionTable,
    strategy: DecompositionStrategy,
    mode: IndexMode,
) -> Result<FastForwardCode> {
    build_code_impl(t, strategy, mode, true)
}

fn build_code_impl(
    t: &FunctionTable,
    strategy: DecompositionStrategy,
    mode: IndexMode,
    hot: bool,
) -> Result<FastForwardCode> {
    let d = decompose(t, strategy)?;
    let kind = match strategy {
        DecompositionStrategy::OrderedCycle => CodeKind::Permutation,
        _ => CodeKind::General,
    };
    let sigma = d.concat().to_vec();
    let n = sigma.len();
    let mut sigma_inv = vec![0usize; n];
    for (x, &b) in sigma.iter().enumerate() {
        sigma_inv[b] = x;
    }
    let starts = d.starts().to_vec();
    let aux = d.aux().to_vec();
    let index = build_index(&starts, n, mode);
    let span = (hot || kind == CodeKind::Permutation).then(|| compute_spans(&starts, &aux));
    Ok(FastForwardCode {
        sigma,
        sigma_inv,
        starts,
        aux,
        index,
        kind,
        span,
    })
}

fn build_index(starts: &[usize], n: usize, mode: IndexMode) -> ComponentIndex {
    match mode {
        IndexMode::Dense => {
            let mut ix = vec![0usize; n];
            for i in 0..starts.len() - 1 {
                for slot in &mut ix[starts[i]..starts[i + 1]] {
                    *slot = i;
                }
            }
            ComponentIndex::Dense(ix)
        }
        IndexMode::BinarySearch => ComponentIndex::BinarySearch,
    }
}

fn compute_spans(starts: &[usize], aux: &[usize]) -> Vec<u64> {
    // only meaningful on ρ components; descent components never read it
    aux.iter()
        .enumerate()
        .map(|(i, &p)| (starts[i + 1].max(p) - p) as u64)
        .collect()
}

impl FastForwardCode {
    /// Validates raw tables (as deserialized from a code file) into a code.
    ///
    /// Checks every structural invariant and reports the first failure.
    pub fn from_code_parts(
        sigma: Vec<usize>,
        starts: Vec<usize>,
        aux: Vec<usize>,
        kind: CodeKind,
        mode: IndexMode,
    ) -> Result<FastForwardCode> {
        let n = sigma.len();
        if n == 0 {
            return Err(Error::InvariantViolation("domain must not be empty"));
        }
        let mut sigma_inv = vec![usize::MAX; n];
        for (x, &b) in sigma.iter().enumerate() {
            if b >= n || sigma_inv[b] != usize::MAX {
                return Err(Error::InvariantViolation("sigma is not a bijection"));
            }
            sigma_inv[b] = x;
        }
        if starts.len() < 2 || aux.len() != starts.len() - 1 {
            return Err(Error::InvariantViolation(
                "auxiliary sequence length must match the component count",
            ));
        }
        if starts[0] != 0 {
            return Err(Error::InvariantViolation("starts must begin at 0"));
        }
        if *starts.last().unwrap() != n {
            return Err(Error::InvariantViolation(
                "starts must end at the domain size",
            ));
        }
        if !starts.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvariantViolation("starts must be strictly increasing"));
        }
        for (i, &p) in aux.iter().enumerate() {
            if p >= starts[i + 1] {
                return Err(Error::InvariantViolation(
                    "auxiliary entry must precede the end of its component",
                ));
            }
            if kind == CodeKind::Permutation && p != starts[i] {
                return Err(Error::InvariantViolation(
                    "permutation code requires every component to be a cycle",
                ));
            }
        }
        let index = build_index(&starts, n, mode);
        let span = (kind == CodeKind::Permutation).then(|| compute_spans(&starts, &aux));
        Ok(FastForwardCode {
            sigma,
            sigma_inv,
            starts,
            aux,
            index,
            kind,
            span,
        })
    }

    pub fn n(&self) -> usize {
        self.sigma.len()
    }

    /// Number of components ℓ.
    pub fn num_components(&self) -> usize {
        self.aux.len()
    }

    pub fn kind(&self) -> CodeKind {
        self.kind
    }

    pub fn index_mode(&self) -> IndexMode {
        match self.index {
            ComponentIndex::Dense(_) => IndexMode::Dense,
            ComponentIndex::BinarySearch => IndexMode::BinarySearch,
        }
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn sigma_inv(&self) -> &[usize] {
        &self.sigma_inv
    }

    pub fn starts(&self) -> &[usize] {
        &self.starts
    }

    pub fn aux(&self) -> &[usize] {
        &self.aux
    }

    /// Rebuilds the component index in the requested mode.
    pub fn with_index_mode(mut self, mode: IndexMode) -> FastForwardCode {
        self.index = build_index(&self.starts, self.n(), mode);
        self
    }

    /// Index of the component containing position `y`.
    pub fn component_of(&self, y: usize) -> usize {
        assert!(y < self.n(), "position {y} outside [0, {})", self.n());
        let mut reads = 0;
        self.component_index(y, &mut reads)
    }

    fn component_index(&self, y: usize, reads: &mut usize) -> usize {
        match &self.index {
            ComponentIndex::Dense(ix) => {
                *reads += 1;
                ix[y]
            }
            ComponentIndex::BinarySearch => {
                // first i with starts[i+1] > y; each probe reads one entry
                let mut lo = 0usize;
                let mut hi = self.num_components();
                while lo < hi {
                    let mid = lo + (hi - lo) / 2;
                    *reads += 1;
                    if self.starts[mid + 1] <= y {
                        lo = mid + 1;
                    } else {
                        hi = mid;
                    }
                }
                lo
            }
        }
    }

    /// Evaluates `π^m(x)` for the canonical fast-forward function π of this
    /// code, counting descents.
    ///
    /// Iterative, never recursive: the descent chain of the ordered strategy
    /// can be as long as n−1.
    pub fn pi_iterate(&self, x: usize, m: u64) -> Result<EvalResult> {
        self.pi_iterate_with_trace(x, m, |_, _| {})
    }

    /// [`Self::pi_iterate`] with a callback invoked on every descent with
    /// the component index being left and the remaining iterate count.
    pub fn pi_iterate_with_trace(
        &self,
        x: usize,
        m: u64,
        mut trace: impl FnMut(usize, u64),
    ) -> Result<EvalResult> {
        if x >= self.n() {
            return Err(Error::XOutOfRange { x, n: self.n() });
        }
        let mut res = EvalResult {
            value: 0,
            descents: 0,
            table_reads: 0,
            arith_ops: 0,
        };
        res.value = self.pi_loop(x, m, &mut res, &mut trace);
        Ok(res)
    }

    fn pi_loop(
        &self,
        mut x: usize,
        mut m: u64,
        res: &mut EvalResult,
        trace: &mut impl FnMut(usize, u64),
    ) -> usize {
        loop {
            let i = self.component_index(x, &mut res.table_reads);
            let end = self.starts[i + 1];
            res.table_reads += 1;
            let to_exit = (end - x) as u64;
            res.arith_ops += 1;
            if m < to_exit {
                // still strictly inside the component: walk forward
                res.arith_ops += 1;
                return x + m as usize;
            }
            let r = m - to_exit;
            res.arith_ops += 1;
            let p = self.aux[i];
            res.table_reads += 1;
            let s = self.starts[i];
            res.table_reads += 1;
            if p >= s {
                // ρ-orbit: the remaining r steps wrap on the cycle [p, end)
                let cycle = match &self.span {
                    Some(span) => {
                        res.table_reads += 1;
                        span[i]
                    }
                    None => {
                        res.arith_ops += 1;
                        (end - p) as u64
                    }
                };
                let off = r % cycle;
                res.arith_ops += 1;
                res.arith_ops += 1;
                return p + off as usize;
            }
            trace(i, r);
            res.descents += 1;
            x = p;
            m = r;
        }
    }

    /// Evaluates `f^m(x)` for the original table via `σ∘π^m∘σ⁻¹`.
    ///
    /// Permutation codes with a dense index take the five-read path: σ⁻¹,
    /// the component index, the cycle start, the cycle length, σ — and at
    /// most five arithmetic operations, with zero descents.
    pub fn iterate(&self, x: usize, m: u64) -> Result<EvalResult> {
        self.iterate_with_trace(x, m, |_, _| {})
    }

    /// [`Self::iterate`] with the descent callback of
    /// [`Self::pi_iterate_with_trace`].
    pub fn iterate_with_trace(
        &self,
        x: usize,
        m: u64,
        mut trace: impl FnMut(usize, u64),
    ) -> Result<EvalResult> {
        if x >= self.n() {
            return Err(Error::XOutOfRange { x, n: self.n() });
        }
        if self.kind == CodeKind::Permutation {
            if let ComponentIndex::Dense(ix) = &self.index {
                let span = self.span.as_ref().expect("permutation codes carry spans");
                let y = self.sigma_inv[x];
                let i = ix[y];
                let s = self.starts[i];
                let cycle = span[i];
                // offset on the cycle; m is reduced first so the sum cannot wrap
                let off = ((y - s) as u64 + m % cycle) % cycle;
                let value = self.sigma[s + off as usize];
                return Ok(EvalResult {
                    value,
                    descents: 0,
                    table_reads: 5,
                    arith_ops: 5, // sub, mod, add, mod, add
                });
            }
        }
        let mut res = EvalResult {
            value: 0,
            descents: 0,
            table_reads: 1,
            arith_ops: 0,
        };
        let y = self.sigma_inv[x];
        let v = self.pi_loop(y, m, &mut res, &mut trace);
        res.value = self.sigma[v];
        res.table_reads += 1;
        Ok(res)
    }

    /// The canonical fast-forward function π as a plain table: positions
    /// advance by one inside each component and the last position of each
    /// component follows the auxiliary sequence.
    pub fn canonical_table(&self) -> FunctionTable {
        let mut values: Vec<usize> = (1..=self.n()).collect();
        for i in 0..self.num_components() {
            values[self.starts[i + 1] - 1] = self.aux[i];
        }
        FunctionTable::from_values(values).expect("canonical table is total by construction")
    }

    /// Reconstructs the original table: `f(x) = σ(π(σ⁻¹(x)))`.
    pub fn decoded_table(&self) -> FunctionTable {
        let pi = self.canonical_table();
        let values = (0..self.n())
            .map(|x| self.sigma[pi.apply(self.sigma_inv[x])])
            .collect();
        FunctionTable::from_values(values).expect("conjugation preserves totality")
    }

    /// Per-component descent depth (0 for ρ-orbits).
    pub fn descent_depths(&self) -> Vec<usize> {
        descent_depths(&self.starts, &self.aux)
    }
}
