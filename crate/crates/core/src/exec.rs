//! Execution helpers for data-parallel loops.
//!
//! With the `parallel` feature (default), indexed maps run on the rayon
//! thread pool; results are collected in index order and reduced
//! sequentially, so output is bit-identical to the sequential build
//! regardless of thread count. Without the feature the sequential path
//! is used directly.

/// Sequential indexed map.
pub fn map_indexed_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T + Sync + Send,
    T: Send,
{
    (0..n).map(f).collect()
}

/// Rayon-backed indexed map; collect preserves index order.
#[cfg(feature = "parallel")]
pub fn map_indexed_par<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T + Sync + Send,
    T: Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

/// Indexed map using the configured execution strategy.
pub fn map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T + Sync + Send,
    T: Send,
{
    #[cfg(feature = "parallel")]
    {
        map_indexed_par(n, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_indexed_seq(n, f)
    }
}
