//! Execution policy for the data-parallel loops (point evaluation tables,
//! server packets, game trials).

/// How a batch of independent jobs is executed.
///
/// `Parallel` uses the rayon pool when the `parallel` feature is enabled
/// and silently degrades to `Sequential` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    /// Maps `f` over `items`, preserving order.
    pub fn map<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }

    /// Maps `f` over `0..n`, preserving order.
    pub fn map_range<U, F>(self, n: usize, f: F) -> Vec<U>
    where
        U: Send,
        F: Fn(usize) -> U + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                (0..n).into_par_iter().map(f).collect()
            }
            _ => (0..n).map(f).collect(),
        }
    }

    /// Map-reduce with an associative `combine`; `None` on empty input.
    pub fn map_reduce<T, U, F, R>(self, items: &[T], f: F, combine: R) -> Option<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
        R: Fn(U, U) -> U + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel => {
                use rayon::prelude::*;
                items.par_iter().map(f).reduce_with(combine)
            }
            _ => items.iter().map(f).reduce(combine),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn policies_agree() {
        let xs: Vec<u64> = (0..1000).collect();
        for exec in [Exec::Sequential, Exec::Parallel] {
            assert_eq!(exec.map(&xs, |x| x * 2)[999], 1998);
            assert_eq!(exec.map_range(10, |i| i * i)[3], 9);
            assert_eq!(exec.map_reduce(&xs, |&x| x, |a, b| a + b), Some(499500));
        }
        assert_eq!(
            Exec::Sequential.map_reduce(&[] as &[u64], |&x| x, |a, b| a + b),
            None
        );
    }
}
