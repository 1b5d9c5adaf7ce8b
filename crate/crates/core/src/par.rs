//! Order-preserving data-parallel helpers.
//!
//! With the `parallel` feature (default) these run on the rayon global pool;
//! without it, or with [`Parallelism::Serial`], they are plain iterator loops.
//! Results always come back in input order, so every downstream reduction is
//! identical between the two modes.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parallelism {
    Serial,
    #[default]
    Parallel,
}

impl Parallelism {
    /// Whether work will actually be spread over threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Parallelism::Parallel
    }
}

pub fn map<'a, T, U, F>(mode: Parallelism, items: &'a [T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&'a T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        return items.par_iter().map(f).collect();
    }
    let _ = mode;
    items.iter().map(f).collect()
}

/// Like [`map`] but stops at an error. When several items fail, the error
/// reported is the one with the lowest index in both modes.
pub fn try_map<'a, T, U, E, F>(mode: Parallelism, items: &'a [T], f: F) -> Result<Vec<U>, E>
where
    T: Sync,
    U: Send,
    E: Send,
    F: Fn(&'a T) -> Result<U, E> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        let results: Vec<Result<U, E>> = items.par_iter().map(f).collect();
        return results.into_iter().collect();
    }
    let _ = mode;
    items.iter().map(f).collect()
}
