use crate::model::{Instance, ProblemKind, SolveResult};
use crate::pathdb::solve_path_db;
use crate::reach::compress_lifetime;

use super::forest::split_forest;
use super::{
    solve_brute_force, solve_db_fes, solve_db_single_source, solve_db_tree, solve_route_search, Algorithm,
    SolveError, SolverConfig, Solved,
};

/// Runs one engine directly, with no compression or fallback.
pub fn run_engine(algo: Algorithm, instance: &Instance, config: &SolverConfig) -> Result<Solved, SolveError> {
    match algo {
        Algorithm::PathDb => solve_path_db(instance),
        Algorithm::Tree => solve_db_tree(instance),
        Algorithm::SingleSource => solve_db_single_source(instance),
        Algorithm::Fes => solve_db_fes(instance, config),
        Algorithm::BruteForce => solve_brute_force(instance, None, config),
        Algorithm::RouteSearch => solve_route_search(instance, config),
    }
}

/// Engines worth trying on `instance`, cheapest first.
pub fn candidates(instance: &Instance) -> alloc::vec::Vec<Algorithm> {
    if instance.kind() == ProblemKind::PathDelayBetter {
        return alloc::vec![Algorithm::PathDb];
    }
    let mut out = alloc::vec::Vec::new();
    if split_forest(instance.graph()).1.is_empty() {
        out.push(Algorithm::Tree);
    }
    let demands = instance.demands();
    if instance.kind() == ProblemKind::DelayBetter && demands.iter().all(|d| d.source == demands[0].source) {
        out.push(Algorithm::SingleSource);
    }
    out.extend([Algorithm::Fes, Algorithm::BruteForce, Algorithm::RouteSearch]);
    out
}

/// Solves with the engine picked by instance shape.
pub fn solve(instance: &Instance, config: &SolverConfig) -> Result<Solved, SolveError> {
    solve_with(instance, None, config)
}

/// Compresses the lifetime, runs `algo` (or every applicable engine in turn
/// until one fits its budget), and lifts the answer back.
pub fn solve_with(instance: &Instance, algo: Option<Algorithm>, config: &SolverConfig) -> Result<Solved, SolveError> {
    solve_using(instance, algo, config, run_engine)
}

/// Like [`solve_with`], but each engine invocation goes through `engine`,
/// which lets callers substitute their own implementation of an engine.
pub fn solve_using<F>(
    instance: &Instance,
    algo: Option<Algorithm>,
    config: &SolverConfig,
    mut engine: F,
) -> Result<Solved, SolveError>
where
    F: FnMut(Algorithm, &Instance, &SolverConfig) -> Result<Solved, SolveError>,
{
    let compression = compress_lifetime(instance);
    let small = &compression.instance;
    let solved = match algo {
        Some(a) => engine(a, small, config)?,
        None => {
            let mut found = None;
            for a in candidates(small) {
                match engine(a, small, config) {
                    Ok(s) => {
                        found = Some(s);
                        break;
                    }
                    Err(SolveError::BudgetExceeded { .. }) => continue,
                    Err(e) => return Err(e),
                }
            }
            found.ok_or(SolveError::Undecided)?
        }
    };
    let result = match solved.result {
        SolveResult::Yes { witness, .. } => {
            SolveResult::certified(instance, compression.lift(instance, &witness))
        }
        no => no,
    };
    Ok(Solved { result, ..solved })
}
