//! Thin switch between rayon and plain iterators.
//!
//! Work runs sequentially when the `parallel` feature is off or the current
//! rayon pool has a single thread, so results never depend on the pool size.

#[cfg(feature = "parallel")]
pub fn enabled() -> bool {
    rayon::current_num_threads() > 1
}

#[cfg(not(feature = "parallel"))]
pub fn enabled() -> bool {
    false
}

/// Order-preserving map over a slice.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if enabled() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

/// Order-preserving map over `0..n`.
pub fn map_range<R, F>(n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if enabled() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().map(f).collect();
    }
    (0..n).map(f).collect()
}

/// First `Some` by index, as a sequential scan would find it.
pub fn find_first<T, R, F>(items: &[T], f: F) -> Option<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if enabled() {
        use rayon::prelude::*;
        return items.par_iter().find_map_first(f);
    }
    items.iter().find_map(f)
}

/// First `Some` over `0..n` by index.
pub fn find_first_range<R, F>(n: usize, f: F) -> Option<R>
where
    R: Send,
    F: Fn(usize) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if enabled() {
        use rayon::prelude::*;
        return (0..n).into_par_iter().find_map_first(f);
    }
    (0..n).find_map(f)
}

/// Like [`find_first`], but `f` also receives a probe that turns true once
/// an item with a smaller index has produced a result, so long-running work
/// on later items can give up early.
pub fn find_first_cancellable<T, R, F>(items: &[T], f: F) -> Option<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T, &(dyn Fn() -> bool + Sync)) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if enabled() {
        use rayon::prelude::*;
        use std::sync::atomic::{AtomicUsize, Ordering};
        let best = AtomicUsize::new(usize::MAX);
        return items
            .par_iter()
            .enumerate()
            .filter_map(|(i, x)| {
                let stop = || best.load(Ordering::Relaxed) < i;
                if stop() {
                    return None;
                }
                let r = f(x, &stop)?;
                best.fetch_min(i, Ordering::Relaxed);
                Some((i, r))
            })
            .min_by_key(|(i, _)| *i)
            .map(|(_, r)| r);
    }
    items.iter().find_map(|x| f(x, &|| false))
}

pub fn join<A, B, RA, RB>(a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA + Send,
    B: FnOnce() -> RB + Send,
    RA: Send,
    RB: Send,
{
    #[cfg(feature = "parallel")]
    if enabled() {
        return rayon::join(a, b);
    }
    (a(), b())
}
