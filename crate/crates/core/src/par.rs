//! Execution strategy for the batch kernels.
//!
//! Every batch entry point takes a [`Strategy`]. `Parallel` runs on the
//! rayon pool when the `parallel` feature is enabled and silently degrades
//! to the sequential path otherwise, so results never depend on the build.

use num_traits::Zero;

use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    Parallel,
}

impl Default for Strategy {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Strategy::Parallel
        } else {
            Strategy::Sequential
        }
    }
}

impl Strategy {
    /// Whether this strategy actually fans out in the current build.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Strategy::Parallel
    }
}

/// Order-preserving map.
pub fn map<T, U, F>(strategy: Strategy, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = strategy;
    items.iter().map(f).collect()
}

/// Order-preserving flat map.
pub fn flat_map<T, U, F>(strategy: Strategy, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Vec<U> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().flat_map_iter(f).collect();
    }
    let _ = strategy;
    items.iter().flat_map(f).collect()
}

/// Exact sum of `f` over `items`; exact arithmetic makes the result
/// independent of the reduction order.
pub fn sum<T, F>(strategy: Strategy, items: &[T], f: F) -> Rational
where
    T: Sync,
    F: Fn(&T) -> Rational + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if strategy.is_parallel() {
        use rayon::prelude::*;
        return items
            .par_iter()
            .fold(Rational::zero, |acc, t| acc + f(t))
            .reduce(Rational::zero, |a, b| a + b);
    }
    let _ = strategy;
    items.iter().fold(Rational::zero(), |acc, t| acc + f(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn strategies_agree() {
        let items: Vec<i64> = (1..200).collect();
        let f = |k: &i64| rat(1, *k);
        assert_eq!(
            sum(Strategy::Sequential, &items, f),
            sum(Strategy::Parallel, &items, f)
        );
        let sq = |k: &i64| k * k;
        assert_eq!(
            map(Strategy::Sequential, &items, sq),
            map(Strategy::Parallel, &items, sq)
        );
    }
}
