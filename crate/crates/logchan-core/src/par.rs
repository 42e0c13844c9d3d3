//! Deterministic chunked map.
//!
//! Work is split into a caller-fixed number of chunks. Chunk results are
//! returned in chunk order no matter how many workers ran them, so any
//! reduction the caller performs over the returned vector is bit-stable.

use alloc::vec::Vec;

/// Worker count used when the caller passes zero.
pub const DEFAULT_WORKERS: usize = 1;

/// Evaluate `f(0..chunks)` and return results in index order.
pub fn map_chunks<T, F>(chunks: usize, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if workers > 1 && chunks > 1 {
            use rayon::prelude::*;
            if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
                return pool.install(|| (0..chunks).into_par_iter().map(&f).collect());
            }
        }
    }
    let _ = workers;
    (0..chunks).map(f).collect()
}
