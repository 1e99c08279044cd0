//! Execution mode for data-parallel loops.
//!
//! Every parallel site maps over a slice and collects results in input
//! order, so sequential and parallel runs produce identical output.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    /// Uses rayon when the `parallel` feature is enabled, otherwise
    /// falls back to sequential.
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }

    /// Map `f` over `items`, preserving order.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            return items.par_iter().map(f).collect();
        }
        items.iter().map(f).collect()
    }

    /// Map `f` over fixed-size chunks of `items`, preserving chunk order.
    /// Chunk boundaries depend only on `chunk_size`, never on thread count.
    pub fn map_chunks<T, R, F>(self, items: &[T], chunk_size: usize, f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&[T]) -> R + Sync + Send,
    {
        let chunk_size = chunk_size.max(1);
        #[cfg(feature = "parallel")]
        if self == Execution::Parallel {
            return items.par_chunks(chunk_size).map(f).collect();
        }
        items.chunks(chunk_size).map(f).collect()
    }
}
