// SPDX-License-Identifier: Apache-2.0

//! Execution strategy for the data-parallel inner loops.
//!
//! With the `parallel` feature (on by default) batch loops run on the rayon
//! global pool. Without it every strategy runs sequentially. Either way the
//! output order is the input order, so results are identical.

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
    Parallel,
}

impl Default for Execution {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Execution::Parallel
        } else {
            Execution::Sequential
        }
    }
}

impl Execution {
    /// Maps `f` over `items`, preserving order.
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel if items.len() > 1 => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }

    /// Concatenates the per-item outputs of `f`, preserving order.
    pub fn flat_map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> Vec<R> + Sync + Send,
    {
        self.map(items, f).into_iter().flatten().collect()
    }

    /// First item (in input order) for which `f` returns `Some`.
    pub fn find_map_first<T, R, F>(self, items: &[T], f: F) -> Option<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> Option<R> + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel if items.len() > 1 => {
                use rayon::prelude::*;
                items.par_iter().find_map_first(f)
            }
            _ => items.iter().find_map(f),
        }
    }

    /// True when `f` holds for every item.
    pub fn all<T, F>(self, items: &[T], f: F) -> bool
    where
        T: Sync,
        F: Fn(&T) -> bool + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel if items.len() > 1 => {
                use rayon::prelude::*;
                items.par_iter().all(f)
            }
            _ => items.iter().all(f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strategies_agree() {
        let xs: Vec<u32> = (0..100).collect();
        for exec in [Execution::Sequential, Execution::Parallel] {
            assert_eq!(exec.map(&xs, |x| x * 2), xs.iter().map(|x| x * 2).collect::<Vec<_>>());
            assert_eq!(exec.find_map_first(&xs, |&x| (x > 40 && x % 7 == 0).then_some(x)), Some(42));
            assert!(exec.all(&xs, |&x| x < 100));
            assert_eq!(exec.flat_map(&xs[..3], |&x| vec![x; x as usize]), vec![1, 2, 2]);
        }
    }
}
