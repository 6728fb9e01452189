//! Data-parallel helpers. With the `parallel` feature these run on rayon's
//! global pool; without it they are plain sequential loops. Output order is
//! the input order either way.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[cfg(feature = "parallel")]
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

/// Flattening variant of [`map`].
#[cfg(feature = "parallel")]
pub fn flat_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Vec<U> + Sync + Send,
{
    items.par_iter().flat_map_iter(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn flat_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> Vec<U>,
{
    items.iter().flat_map(f).collect()
}

pub fn is_parallel() -> bool {
    cfg!(feature = "parallel")
}
