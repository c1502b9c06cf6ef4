//! Order-preserving data-parallel helpers with a sequential fallback.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ExecMode {
    #[default]
    Parallel,
    Sequential,
}

impl ExecMode {
    /// The mode actually used: without the `parallel` feature everything is
    /// sequential.
    pub fn effective(self) -> ExecMode {
        if cfg!(feature = "parallel") {
            self
        } else {
            ExecMode::Sequential
        }
    }
}

/// `items.iter().flat_map(f)`, evaluated in parallel when asked. The output
/// order is the sequential order in both modes.
pub fn flat_map<T, U, F>(mode: ExecMode, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Vec<U> + Sync + Send,
{
    match mode.effective() {
        ExecMode::Sequential => items.iter().flat_map(f).collect(),
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => {
            let chunks: Vec<Vec<U>> = items.par_iter().map(f).collect();
            chunks.into_iter().flatten().collect()
        }
        #[cfg(not(feature = "parallel"))]
        ExecMode::Parallel => unreachable!("effective() never yields Parallel without the feature"),
    }
}

pub fn filter_map<T, U, F>(mode: ExecMode, items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> Option<U> + Sync + Send,
{
    flat_map(mode, items, |t| f(t).into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_agree_on_order() {
        let items: Vec<u32> = (0..500).collect();
        let f = |x: &u32| (0..x % 4).map(|i| x * 10 + i).collect::<Vec<_>>();
        assert_eq!(flat_map(ExecMode::Parallel, &items, f), flat_map(ExecMode::Sequential, &items, f));
    }
}
