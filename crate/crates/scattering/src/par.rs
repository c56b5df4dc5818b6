//! Data-parallel map with a sequential fallback.
//!
//! With the default `parallel` feature, [`map`] fans independent jobs out
//! over a rayon pool; without it, [`map`] is an ordinary sequential loop.
//! [`map_sequential`] is always sequential and exists so benchmarks can
//! compare the two on the same build.

/// Applies `f` to every item, in parallel when the `parallel` feature is
/// enabled. Output order matches input order either way.
#[cfg(feature = "parallel")]
pub fn map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.into_par_iter().map(f).collect()
}

/// Applies `f` to every item sequentially (the `parallel` feature is off).
#[cfg(not(feature = "parallel"))]
pub fn map<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    items.into_iter().map(f).collect()
}

/// Applies `f` to every item sequentially regardless of features.
pub fn map_sequential<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn map_preserves_order() {
        let out = map((0..100).collect(), |x: i32| x * x);
        let expected: Vec<i32> = (0..100).map(|x| x * x).collect();
        assert_eq!(out, expected);
        assert_eq!(map_sequential((0..100).collect(), |x: i32| x * x), expected);
    }
}
