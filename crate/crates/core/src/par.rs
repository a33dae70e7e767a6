//! Grid drivers that fan out over rayon when the `parallel` feature is on and
//! fall back to plain iterators otherwise.
//!
//! Every grid evaluation in the crate goes through [`Exec`], so the same code
//! path can be benchmarked sequentially and in parallel.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Uses rayon when compiled with `parallel`, otherwise identical to
    /// `Sequential`.
    #[default]
    Parallel,
}

impl Exec {
    /// True when this strategy actually runs on the rayon pool.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Order-preserving map.
    pub fn map<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Order-preserving fallible map; the first error in index order wins.
    pub fn try_map<T, U, E, F>(self, items: &[T], f: F) -> Result<Vec<U>, E>
    where
        T: Sync,
        U: Send,
        E: Send,
        F: Fn(&T) -> Result<U, E> + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Exec::Parallel {
            let results: Vec<Result<U, E>> = items.par_iter().map(f).collect();
            return results.into_iter().collect();
        }
        items.iter().map(f).collect()
    }
}
