//! Decision procedures for DelayBetter and δ-DelayBetter.
//!
//! | engine | applies to |
//! |---|---|
//! | [`solve_db_tree`] | forest footprints (DB, δ-DB) |
//! | [`solve_db_single_source`] | DB with one common source |
//! | [`solve_db_fes`] | anything; cost grows with ρ and the demand count |
//! | [`solve_brute_force`] | anything small; exhaustive over labels |
//! | [`solve_route_search`] | anything; exhaustive over simple routes |
//!
//! [`solve`] picks an engine by instance shape.

use core::fmt;

use crate::model::ProblemKind;

mod brute;
mod dispatch;
mod fes;
pub mod forest;
mod routes;
mod single_source;
mod tree;

pub use brute::solve_brute_force;
pub use dispatch::{candidates, run_engine, solve, solve_using, solve_with};
pub use fes::{compute_fes, fes_branch_bound, solve_db_fes, FeedbackEdgeSet, FesSearch, OrderingOutcome};
pub use routes::solve_route_search;
pub use single_source::solve_db_single_source;
pub use tree::solve_db_tree;

use crate::model::SolveResult;

/// Engine identifiers, as accepted by `--algo`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    PathDb,
    Tree,
    SingleSource,
    Fes,
    BruteForce,
    RouteSearch,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::PathDb,
        Algorithm::Tree,
        Algorithm::SingleSource,
        Algorithm::Fes,
        Algorithm::BruteForce,
        Algorithm::RouteSearch,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::PathDb => "pathdb",
            Algorithm::Tree => "tree",
            Algorithm::SingleSource => "single-source",
            Algorithm::Fes => "fes",
            Algorithm::BruteForce => "brute",
            Algorithm::RouteSearch => "routes",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.name() == name)
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Search budgets. Exceeding one is reported as an error.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    /// Upper bound on the FES engine's `ρ! · k^(ρ·|D|)` branch count.
    pub branch_budget: u64,
    /// Upper bound on nodes visited by the exhaustive searches.
    pub state_budget: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            branch_budget: 10_000_000,
            state_budget: 100_000_000,
        }
    }
}

/// Work counters reported by an engine.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Complete branches (route combinations) evaluated.
    pub branches: u64,
    /// Search nodes visited, including partial ones.
    pub states: u64,
}

impl SearchStats {
    pub fn add(&mut self, other: SearchStats) {
        self.branches += other.branches;
        self.states += other.states;
    }
}

/// An answer together with the engine that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solved {
    pub result: SolveResult,
    pub algorithm: Algorithm,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("NOT_A_TREE: the footprint contains a cycle")]
    NotATree,
    #[error("MIXED_SOURCES: demands do not share one source")]
    MixedSources,
    #[error("BUDGET_EXCEEDED: {algorithm} needs more than {budget} {what}")]
    BudgetExceeded {
        algorithm: Algorithm,
        what: &'static str,
        budget: u64,
    },
    #[error("UNSUPPORTED: {algorithm} does not solve {kind} instances")]
    Unsupported {
        algorithm: Algorithm,
        kind: ProblemKind,
    },
    #[error("UNDECIDED: every applicable engine ran out of budget")]
    Undecided,
}

impl SolveError {
    /// Stable upper-case code for reports.
    pub fn code(&self) -> &'static str {
        match self {
            SolveError::NotATree => "NOT_A_TREE",
            SolveError::MixedSources => "MIXED_SOURCES",
            SolveError::BudgetExceeded { .. } => "BUDGET_EXCEEDED",
            SolveError::Unsupported { .. } => "UNSUPPORTED",
            SolveError::Undecided => "UNDECIDED",
        }
    }
}
