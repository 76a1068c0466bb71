use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

use crate::branch::BranchStats;
use crate::error::{Error, Result};

type Branch<T> = Result<(Option<T>, BranchStats)>;

/// Runs subtrees `0..count` and returns the hit from the smallest successful
/// subtree, with the statistics a sequential left-to-right run would report.
/// Subtrees beyond the best hit found so far are skipped.
pub(crate) fn first_success<T, F>(count: usize, jobs: usize, run: F) -> Branch<T>
where
    T: Send,
    F: Fn(usize) -> Branch<T> + Sync + Send,
{
    let mut stats = BranchStats::default();
    if jobs <= 1 || count <= 1 {
        for i in 0..count {
            let (found, s) = run(i)?;
            stats.absorb(&s);
            if found.is_some() {
                return Ok((found, stats));
            }
        }
        return Ok((None, stats));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    let best = AtomicUsize::new(usize::MAX);
    let results: Vec<Option<Branch<T>>> = pool.install(|| {
        (0..count)
            .into_par_iter()
            .map(|i| {
                if i > best.load(Ordering::SeqCst) {
                    return None;
                }
                let r = run(i);
                if matches!(r, Ok((Some(_), _))) {
                    best.fetch_min(i, Ordering::SeqCst);
                }
                Some(r)
            })
            .collect()
    });
    for r in results {
        let Some(r) = r else { break };
        let (found, s) = r?;
        stats.absorb(&s);
        if found.is_some() {
            return Ok((found, stats));
        }
    }
    Ok((None, stats))
}
