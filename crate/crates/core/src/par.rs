//! Order-preserving data-parallel map. With the `parallel` feature off, or
//! with a single thread requested, everything runs on the caller's thread.

/// Applies `f` to every item and returns results in input order.
/// `threads = None` uses the global pool, `Some(n)` a dedicated pool of `n`.
pub fn map_ordered<T, R, F>(items: &[T], threads: Option<usize>, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    if threads == Some(1) || items.len() < 2 {
        return items.iter().map(f).collect();
    }
    imp::map(items, threads, f)
}

#[cfg(feature = "parallel")]
mod imp {
    use rayon::prelude::*;

    pub fn map<T, R, F>(items: &[T], threads: Option<usize>, f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match threads {
            None => items.par_iter().map(f).collect(),
            Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
                Ok(pool) => pool.install(|| items.par_iter().map(&f).collect()),
                Err(_) => items.iter().map(f).collect(),
            },
        }
    }
}

#[cfg(not(feature = "parallel"))]
mod imp {
    pub fn map<T, R, F>(items: &[T], _threads: Option<usize>, f: F) -> Vec<R>
    where
        F: Fn(&T) -> R,
    {
        items.iter().map(f).collect()
    }
}

/// Whether this build can actually run work in parallel.
pub fn enabled() -> bool {
    cfg!(feature = "parallel")
}
