//! Data-parallel sweeps with a sequential fallback.
//!
//! With the `parallel` feature enabled the default strategy fans work out over
//! the rayon pool. Results always come back in input order and every reduction
//! in the crate runs sequentially over the collected vector, so numerical
//! output does not depend on the strategy or the thread count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel,
}

impl Default for Strategy {
    fn default() -> Self {
        #[cfg(feature = "parallel")]
        return Strategy::Parallel;
        #[cfg(not(feature = "parallel"))]
        Strategy::Sequential
    }
}

pub fn map<T, R, F>(strategy: Strategy, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match strategy {
        Strategy::Sequential => items.iter().map(f).collect(),
        #[cfg(feature = "parallel")]
        Strategy::Parallel => items.par_iter().map(f).collect(),
    }
}

pub fn map_range<R, F>(strategy: Strategy, n: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    match strategy {
        Strategy::Sequential => (0..n).map(f).collect(),
        #[cfg(feature = "parallel")]
        Strategy::Parallel => (0..n).into_par_iter().map(f).collect(),
    }
}

/// Left-to-right sum, the fixed reduction order used for every quadrature.
pub fn ordered_sum<I, T>(values: I) -> T
where
    I: IntoIterator<Item = T>,
    T: std::ops::Add<Output = T> + Default,
{
    values.into_iter().fold(T::default(), |acc, v| acc + v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let items: Vec<f64> = (0..1000).map(|i| i as f64 * 0.37).collect();
        let seq = map(Strategy::Sequential, &items, |x| x.sin());
        let def = map(Strategy::default(), &items, |x| x.sin());
        assert_eq!(seq, def);
        assert_eq!(
            ordered_sum(map_range(Strategy::default(), 64, |i| i as f64)),
            2016.0
        );
    }
}
