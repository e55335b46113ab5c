//! Execution helpers: data parallel with rayon under the `parallel`
//! feature, plain iterators otherwise.
//!
//! Results are independent of the execution mode: mapped collections keep
//! their input order and predicate sweeps only report a yes/no verdict (or
//! the minimum failing witness), so callers observe identical output either
//! way. The `*_seq` variants are always compiled; the benchmarks use them
//! to compare the two paths inside a single build.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Maps `f` over `items`, preserving order.
pub fn map_collect<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_collect_seq(items, f)
    }
}

/// Sequential twin of [`map_collect`].
pub fn map_collect_seq<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Whether `pred` holds for every item.
pub fn all<T, F>(items: &[T], pred: F) -> bool
where
    T: Sync,
    F: Fn(&T) -> bool + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().all(pred)
    }
    #[cfg(not(feature = "parallel"))]
    {
        all_seq(items, pred)
    }
}

/// Sequential twin of [`all`].
pub fn all_seq<T, F>(items: &[T], pred: F) -> bool
where
    F: Fn(&T) -> bool,
{
    items.iter().all(pred)
}

/// First item (in input order) for which `f` returns `Some`.
///
/// Under rayon this uses `find_map_first`, which still returns the
/// positionally first hit, so the answer is deterministic.
pub fn find_map<T, U, F>(items: &[T], f: F) -> Option<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Option<U> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().find_map_first(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        find_map_seq(items, f)
    }
}

/// Sequential twin of [`find_map`].
pub fn find_map_seq<T, U, F>(items: &[T], f: F) -> Option<U>
where
    F: Fn(&T) -> Option<U>,
{
    items.iter().find_map(f)
}
