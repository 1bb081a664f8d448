//! Dispatch for the bulk loops: rayon when the `parallel` feature is on
//! and the caller asks for it, plain iteration otherwise. Both paths map
//! in order, so results never depend on scheduling.

#[cfg(feature = "parallel")]
pub(crate) fn map_items<T, R, F>(parallel: bool, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    if parallel {
        items.par_iter().map(f).collect()
    } else {
        items.iter().map(f).collect()
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_items<T, R, F>(_parallel: bool, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    items.iter().map(f).collect()
}
