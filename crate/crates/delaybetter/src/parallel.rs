//! Multi-threaded FES engine.
//!
//! Orderings are independent, so workers pull indices from a shared counter.
//! The witness is always the one from the lowest successful index, which is
//! exactly what the sequential engine returns; only the work counters can
//! differ between runs.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use std::thread;

use delaybetter_core::model::Instance;
use delaybetter_core::solvers::{
    run_engine, solve_using, Algorithm, FesSearch, OrderingOutcome, SolveError, SolverConfig, Solved,
};

/// Runs the FES engine on `jobs` threads.
pub fn solve_db_fes_parallel(instance: &Instance, config: &SolverConfig, jobs: usize) -> Result<Solved, SolveError> {
    let search = FesSearch::new(instance, config)?;
    let total = search.ordering_count();
    let next = AtomicU64::new(0);
    let best = AtomicU64::new(u64::MAX);
    let done: Mutex<Vec<(u64, OrderingOutcome)>> = Mutex::new(Vec::new());
    thread::scope(|s| {
        for _ in 0..jobs.max(1) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= total || i > best.load(Ordering::Relaxed) {
                    break;
                }
                let o = search.run_ordering(i);
                if o.labels.is_some() {
                    best.fetch_min(i, Ordering::Relaxed);
                }
                done.lock().unwrap().push((i, o));
            });
        }
    });
    let mut done = done.into_inner().unwrap();
    done.sort_by_key(|(i, _)| *i);
    Ok(search.finish(done.into_iter().map(|(_, o)| o)))
}

/// The dispatcher, with the FES engine running on `jobs` threads.
pub fn solve_parallel(
    instance: &Instance,
    algo: Option<Algorithm>,
    config: &SolverConfig,
    jobs: usize,
) -> Result<Solved, SolveError> {
    solve_using(instance, algo, config, |a, i, c| {
        if a == Algorithm::Fes && jobs > 1 {
            solve_db_fes_parallel(i, c, jobs)
        } else {
            run_engine(a, i, c)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use delaybetter_core::model::{Demand, TemporalGraph};
    use delaybetter_core::solvers::solve_db_fes;

    #[test]
    fn matches_the_sequential_engine() {
        let g = TemporalGraph::new(
            false,
            &["a", "b", "c", "d"],
            &[("a", "b", 1), ("b", "c", 1), ("c", "d", 1), ("d", "a", 1), ("a", "c", 1), ("b", "d", 2)],
        )
        .unwrap();
        let i = Instance::delay_better(g, vec![Demand::new(0, 2, 2), Demand::new(1, 3, 3)]).unwrap();
        let cfg = SolverConfig::default();
        let seq = solve_db_fes(&i, &cfg).unwrap();
        for jobs in [1, 2, 4] {
            assert_eq!(solve_db_fes_parallel(&i, &cfg, jobs).unwrap().result, seq.result);
        }
    }
}
