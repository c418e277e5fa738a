//! Execution mode for the data-parallel kernels.
//!
//! Every kernel that loops over points or ordered pairs goes through
//! [`map_range`], so the same code path runs sequentially or on the rayon
//! pool. Results are collected by index, which makes the parallel output
//! identical to the sequential one.

/// How a kernel distributes its outer loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Uses the global rayon pool; identical to `Sequential` when the crate
    /// is built without the `parallel` feature.
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Evaluates `f(i)` for `i in 0..len` and returns the results in index order.
pub fn map_range<T, F>(exec: Execution, len: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if exec == Execution::Parallel {
            use rayon::prelude::*;
            return (0..len).into_par_iter().map(f).collect();
        }
    }
    let _ = exec;
    (0..len).map(f).collect()
}

/// Evaluates `f(i)` over `0..len` and returns the smallest index whose result
/// is `Some`, together with that result.
pub fn find_first<T, F>(exec: Execution, len: usize, f: F) -> Option<(usize, T)>
where
    T: Send,
    F: Fn(usize) -> Option<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if exec == Execution::Parallel {
            use rayon::prelude::*;
            return (0..len).into_par_iter().filter_map(|i| f(i).map(|v| (i, v))).min_by_key(|(i, _)| *i);
        }
    }
    let _ = exec;
    (0..len).find_map(|i| f(i).map(|v| (i, v)))
}
