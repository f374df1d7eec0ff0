//! Choice between the rayon pool and a plain sequential loop.

/// How data-parallel loops are executed. Without the `parallel` feature both
/// variants run sequentially.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map_vec<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Maps `f` over `lo..hi`, preserving order.
pub fn map_range<R, F>(exec: Execution, lo: usize, hi: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (lo..hi).into_par_iter().map(f).collect();
    }
    let _ = exec;
    (lo..hi).map(f).collect()
}

/// First `Some` in index order over `lo..hi`.
pub fn find_map_first<R, F>(exec: Execution, lo: usize, hi: usize, f: F) -> Option<R>
where
    R: Send,
    F: Fn(usize) -> Option<R> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (lo..hi).into_par_iter().find_map_first(f);
    }
    let _ = exec;
    (lo..hi).find_map(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_agree() {
        for exec in [Execution::Sequential, Execution::Parallel] {
            assert_eq!(map_range(exec, 0, 5, |i| i * i), vec![0, 1, 4, 9, 16]);
            assert_eq!(map_vec(exec, &[1, 2, 3], |x| x + 1), vec![2, 3, 4]);
            assert_eq!(
                find_map_first(exec, 0, 1000, |i| (i % 7 == 6 && i > 10).then_some(i)),
                Some(13)
            );
        }
    }
}
