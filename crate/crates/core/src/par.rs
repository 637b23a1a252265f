//! Execution strategy for independent work items.
//!
//! With the `parallel` feature (default) `Exec::Parallel` fans out over rayon's
//! global pool; without it both variants run sequentially. Results always come
//! back in input order, so callers merge deterministically.

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    #[default]
    Parallel,
    Sequential,
}

impl Exec {
    /// True when this build can actually run in parallel.
    pub fn available() -> bool {
        cfg!(feature = "parallel")
    }
}

pub fn map<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            items.par_iter().map(f).collect()
        }
        _ => items.iter().map(f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let xs: Vec<u64> = (0..100).collect();
        let a = map(Exec::Parallel, &xs, |x| x * x);
        let b = map(Exec::Sequential, &xs, |x| x * x);
        assert_eq!(a, b);
    }
}
