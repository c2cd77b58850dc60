//! Parallel search for the lexicographically smallest failing tuple.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use rayon::ThreadPool;

use crate::linalg::{self, Vector};

pub const ARITY4_ENV: &str = "HOMCOLOR_MAX_ARITY4_DIM";
pub const DEFAULT_MAX_ARITY4_DIM: usize = 12;

/// Knobs shared by all checkers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOptions {
    /// Worker threads; `None` uses the global rayon pool.
    pub workers: Option<usize>,
    /// Largest slot dimension for which arity-4 checks run.
    pub max_arity4_dim: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        let cap = std::env::var(ARITY4_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .unwrap_or(DEFAULT_MAX_ARITY4_DIM);
        CheckOptions {
            workers: None,
            max_arity4_dim: cap,
        }
    }
}

impl CheckOptions {
    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers.max(1));
        self
    }

    pub fn with_max_arity4_dim(mut self, cap: usize) -> Self {
        self.max_arity4_dim = cap;
        self
    }

    pub(crate) fn arity_cap_reason(&self, dims: &[usize]) -> Option<String> {
        let largest = dims.iter().copied().max().unwrap_or(0);
        (dims.len() >= 4 && largest > self.max_arity4_dim).then(|| {
            format!(
                "slot dimension {largest} exceeds the arity-4 cap {} (raise it with {ARITY4_ENV})",
                self.max_arity4_dim
            )
        })
    }
}

fn pool(workers: usize) -> Arc<ThreadPool> {
    static POOLS: OnceLock<Mutex<HashMap<usize, Arc<ThreadPool>>>> = OnceLock::new();
    let mut pools = POOLS.get_or_init(Default::default).lock().expect("pool cache");
    pools
        .entry(workers)
        .or_insert_with(|| {
            Arc::new(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(workers)
                    .build()
                    .expect("thread pool"),
            )
        })
        .clone()
}

fn decode(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut t = vec![0; dims.len()];
    for (slot, d) in t.iter_mut().zip(dims).rev() {
        *slot = idx % d;
        idx /= d;
    }
    t
}

/// Evaluates `eval` on every tuple of `dims` and returns the first tuple in
/// lexicographic order whose value is nonzero. The answer does not depend on
/// the number of workers.
pub fn first_failure<F>(dims: &[usize], opts: &CheckOptions, eval: F) -> Option<(Vec<usize>, Vector)>
where
    F: Fn(&[usize]) -> Vector + Sync,
{
    let total: usize = dims.iter().product();
    if total == 0 {
        return None;
    }
    let job = || {
        (0..total).into_par_iter().with_min_len(4).find_map_first(|idx| {
            let t = decode(idx, dims);
            let d = eval(&t);
            (!linalg::is_zero(&d)).then_some((t, d))
        })
    };
    match opts.workers {
        Some(w) => pool(w).install(job),
        None => job(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decode_is_lexicographic() {
        assert_eq!(decode(0, &[2, 3]), vec![0, 0]);
        assert_eq!(decode(1, &[2, 3]), vec![0, 1]);
        assert_eq!(decode(3, &[2, 3]), vec![1, 0]);
    }
}
