//! Data-parallel helpers. With the `parallel` feature (on by default)
//! independent work items are mapped through rayon; without it the same
//! code runs sequentially. Results are always merged in input order, so
//! output never depends on the thread count.

/// Maps `f` over the items, in parallel when the `parallel` feature is
/// enabled, preserving input order in the output.
#[cfg(feature = "parallel")]
pub fn map_collect<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

/// Sequential fallback of [`map_collect`].
#[cfg(not(feature = "parallel"))]
pub fn map_collect<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}

/// Runs `f` inside a thread pool of the given size. With `threads = None`
/// (or without the `parallel` feature) the ambient pool is used.
#[cfg(feature = "parallel")]
pub fn run_with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match threads {
        Some(n) if n > 0 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .expect("building a local thread pool");
            pool.install(f)
        }
        _ => f(),
    }
}

/// Sequential fallback of [`run_with_threads`]; the thread count is
/// ignored because there is only one code path.
#[cfg(not(feature = "parallel"))]
pub fn run_with_threads<R>(_threads: Option<usize>, f: impl FnOnce() -> R) -> R {
    f()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_collect_preserves_order() {
        let items: Vec<usize> = (0..100).collect();
        let out = map_collect(items, |x| x * x);
        assert_eq!(out, (0..100).map(|x| x * x).collect::<Vec<_>>());
    }

    #[test]
    fn run_with_threads_returns_result() {
        let v = run_with_threads(Some(2), || map_collect(vec![1, 2, 3], |x| x + 1));
        assert_eq!(v, vec![2, 3, 4]);
    }
}
