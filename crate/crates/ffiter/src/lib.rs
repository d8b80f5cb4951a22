//! Fast-forward re-encoding of lookup tables.
//!
//! Given the lookup table of a function `f` on `{0, …, n−1}`, this crate
//! precomputes a conjugated layout — a permutation σ, its inverse, component
//! offsets, and an auxiliary sequence — from which the m-th iterate `f^m(x)`
//! is evaluated in time proportional to a small number of *descents*,
//! independent of `m`: zero for permutations, and at most
//! `⌊(√(1+8n)−3)/2⌋` for arbitrary functions under the greedy layout. The
//! storage cost is a small constant factor over the table itself.
//!
//! ```
//! use ffiter::{build_code, DecompositionStrategy, FunctionTable, IndexMode};
//!
//! let f = FunctionTable::from_values(vec![5, 6, 3, 5, 2, 2, 1])?;
//! let code = build_code(&f, DecompositionStrategy::GreedyOrbit, IndexMode::Dense)?;
//! let r = code.iterate(0, 1_000_000_000_000)?;
//! assert_eq!(r.value, 5);
//! # Ok::<(), ffiter::Error>(())
//! ```

pub mod codec;
pub mod decompose;
pub mod error;
pub mod experiment;
pub mod generators;
pub mod io;
pub mod oracle;
pub mod table;

pub use codec::{build_code, build_code_hot, CodeKind, EvalResult, FastForwardCode, IndexMode};
pub use decompose::{
    decompose, descent_bound, greedy_orbit_decomposition, ordered_cycle_decomposition,
    ordered_orbit_decomposition, DecompositionStrategy, Orbit, OrbitDecomposition,
};
pub use error::{Error, Result};
pub use table::{as_permutation, FunctionTable, PermutationWitness};
