//! Lookup tables for total functions on `{0, …, n−1}` and permutation witnesses.

use crate::error::{Error, Result};

/// A total function on `{0, …, n−1}` stored as a lookup table.
///
/// Entry `x` holds `f(x)`. The table doubles as the functional graph of `f`:
/// vertices are the domain points, and each vertex has the single out-edge
/// `x → f(x)`. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionTable {
    values: Vec<usize>,
}

impl FunctionTable {
    /// Validates `values` as a function table on a domain of size `n`.
    ///
    /// Rejects `n = 0`, a length mismatch, and any entry outside `[0, n)`
    /// (reporting the first offending index).
    pub fn new(n: usize, values: Vec<usize>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyDomain);
        }
        if values.len() != n {
            return Err(Error::LengthMismatch {
                expected: n,
                actual: values.len(),
            });
        }
        for (index, &value) in values.iter().enumerate() {
            if value >= n {
                return Err(Error::OutOfRange { index, value, n });
            }
        }
        Ok(Self { values })
    }

    /// Like [`FunctionTable::new`] with the domain size taken from the vector length.
    pub fn from_values(values: Vec<usize>) -> Result<Self> {
        let n = values.len();
        Self::new(n, values)
    }

    /// Domain size `n`.
    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// The raw table.
    pub fn values(&self) -> &[usize] {
        &self.values
    }

    /// Applies the function once. `x` must be in `[0, n)`.
    pub fn apply(&self, x: usize) -> usize {
        self.values[x]
    }
}

/// A [`FunctionTable`] certified bijective, carrying its inverse table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationWitness {
    table: FunctionTable,
    inverse: Vec<usize>,
}

impl PermutationWitness {
    pub fn table(&self) -> &FunctionTable {
        &self.table
    }

    pub fn into_table(self) -> FunctionTable {
        self.table
    }

    /// The inverse table: `inverse[table[x]] = x`.
    pub fn inverse(&self) -> &[usize] {
        &self.inverse
    }

    pub fn n(&self) -> usize {
        self.table.n()
    }
}

/// Certifies that `t` is a permutation and computes its inverse.
///
/// Fails with the first value reached from two distinct preimages.
pub fn as_permutation(t: &FunctionTable) -> Result<PermutationWitness> {
    let n = t.n();
    let mut inverse = vec![usize::MAX; n];
    for (x, &y) in t.values().iter().enumerate() {
        if inverse[y] != usize::MAX {
            return Err(Error::NotInjective {
                value: y,
                first: inverse[y],
                second: x,
            });
        }
        inverse[y] = x;
    }
    // injective and length-preserving on a finite set, hence bijective
    Ok(PermutationWitness {
        table: t.clone(),
        inverse,
    })
}
