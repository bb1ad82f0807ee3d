//! Execution strategy for the data-parallel sweeps.
//!
//! With the `parallel` feature (on by default) [`Execution::Parallel`] fans
//! work out over the rayon pool. Without it, both strategies run the same
//! sequential loop. Results always come back in index order, so callers get
//! identical output regardless of the strategy.

use std::ops::Range;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Execution {
    #[default]
    Parallel,
    Sequential,
}

impl Execution {
    /// Whether this build can actually run work concurrently.
    pub fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }

    /// Maps `f` over `range`, returning results in index order.
    pub fn map<U, F>(self, range: Range<usize>, f: F) -> Vec<U>
    where
        U: Send,
        F: Fn(usize) -> U + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                range.into_par_iter().map(f).collect()
            }
            _ => range.map(f).collect(),
        }
    }

    /// Maps `f` over a slice, returning results in slice order.
    pub fn map_slice<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        self.map(0..items.len(), |i| f(&items[i]))
    }
}

/// Pairwise (cascade) summation. The reduction tree depends only on the
/// number of terms, never on thread scheduling.
pub fn pairwise_sum<T, F>(terms: &[T], zero: &T, add: &F) -> T
where
    T: Clone,
    F: Fn(&T, &T) -> T,
{
    match terms.len() {
        0 => zero.clone(),
        1 => terms[0].clone(),
        n => {
            let (l, r) = terms.split_at(n / 2);
            add(&pairwise_sum(l, zero, add), &pairwise_sum(r, zero, add))
        }
    }
}
