//! Worker pool for row-parallel scans.

use rayon::prelude::*;
use rayon::ThreadPool;
use turan_core::scan::RowMap;

/// Environment variable that overrides the default worker count.
pub const THREADS_ENV: &str = "TURAN_THREADS";

/// Row mapper backed by a rayon pool; results keep row order.
pub struct Pool {
    pool: ThreadPool,
}

impl Pool {
    /// `threads = None` takes `TURAN_THREADS`, then the hardware parallelism.
    pub fn new(threads: Option<usize>) -> Result<Pool, rayon::ThreadPoolBuildError> {
        let n = threads
            .or_else(|| std::env::var(THREADS_ENV).ok().and_then(|s| s.trim().parse().ok()))
            .unwrap_or(0);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(n).build()?;
        Ok(Pool { pool })
    }

    pub fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl RowMap for Pool {
    fn map_rows<T: Send>(&self, rows: usize, f: &(dyn Fn(usize) -> T + Sync)) -> Vec<T> {
        self.pool.install(|| (0..rows).into_par_iter().map(f).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keeps_row_order() {
        let p = Pool::new(Some(3)).unwrap();
        assert_eq!(p.threads(), 3);
        let v = p.map_rows(100, &|i| i * i);
        assert_eq!(v, (0..100).map(|i| i * i).collect::<Vec<_>>());
    }
}
