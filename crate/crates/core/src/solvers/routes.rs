//! Exhaustive search over static routes.
//!
//! A delaying satisfies a demand only along some simple footprint path, so
//! it suffices to pick one simple route per demand and solve the resulting
//! Path-DB instance. Routes are enumerated per demand, pruned by the
//! earliest time the route alone could reach each vertex. This scales with
//! the number of plausible routes rather than with the lifetime, which
//! makes it the engine of choice for large, shallow instances such as the
//! outputs of the reductions.

use alloc::vec;
use alloc::vec::Vec;

use crate::model::{Delaying, EdgeId, Instance, NoReason, ProblemKind, SolveResult, Time, VertexId};
use crate::pathdb::minimal_labels_capped;

use super::{Algorithm, SearchStats, SolveError, SolverConfig, Solved};

struct Budget {
    used: u64,
    limit: u64,
}

impl Budget {
    fn tick(&mut self) -> Result<(), SolveError> {
        self.used += 1;
        if self.used > self.limit {
            Err(SolveError::BudgetExceeded {
                algorithm: Algorithm::RouteSearch,
                what: "states",
                budget: self.limit,
            })
        } else {
            Ok(())
        }
    }
}

struct RouteEnum<'a> {
    instance: &'a Instance,
    target: VertexId,
    deadline: Time,
    on_path: Vec<bool>,
    edges: Vec<EdgeId>,
    out: Vec<Vec<EdgeId>>,
}

impl RouteEnum<'_> {
    fn walk(&mut self, x: VertexId, a: Time, budget: &mut Budget) -> Result<(), SolveError> {
        budget.tick()?;
        if x == self.target {
            self.out.push(self.edges.clone());
            return Ok(());
        }
        let graph = self.instance.graph();
        for &(e, y) in graph.out_edges(x) {
            if self.on_path[y] {
                continue;
            }
            let l = graph.edge(e).time;
            let t = l.max(a + 1);
            let capped = self.instance.delta().is_some_and(|d| t > l.saturating_add(d));
            if t > self.deadline || capped {
                continue;
            }
            self.on_path[y] = true;
            self.edges.push(e);
            self.walk(y, t, budget)?;
            self.edges.pop();
            self.on_path[y] = false;
        }
        Ok(())
    }
}

/// All simple routes a demand could use on its own, in DFS order.
fn plausible_routes(
    instance: &Instance,
    source: VertexId,
    target: VertexId,
    deadline: Time,
    budget: &mut Budget,
) -> Result<Vec<Vec<EdgeId>>, SolveError> {
    let mut on_path = vec![false; instance.graph().vertex_count()];
    on_path[source] = true;
    let mut en = RouteEnum {
        instance,
        target,
        deadline,
        on_path,
        edges: Vec::new(),
        out: Vec::new(),
    };
    en.walk(source, 0, budget)?;
    Ok(en.out)
}

/// Decides DB or δ-DB by choosing one simple route per demand.
pub fn solve_route_search(instance: &Instance, config: &SolverConfig) -> Result<Solved, SolveError> {
    if instance.kind() == ProblemKind::PathDelayBetter {
        return Err(SolveError::Unsupported {
            algorithm: Algorithm::RouteSearch,
            kind: instance.kind(),
        });
    }
    let mut budget = Budget {
        used: 0,
        limit: config.state_budget,
    };
    let demands = instance.demands();
    let mut options = Vec::with_capacity(demands.len());
    for d in demands {
        let routes = plausible_routes(instance, d.source, d.target, d.deadline, &mut budget)?;
        if routes.is_empty() {
            let stats = SearchStats {
                branches: 0,
                states: budget.used,
            };
            return Ok(Solved {
                result: SolveResult::No(NoReason::DeadlineUnsatisfiable),
                algorithm: Algorithm::RouteSearch,
                stats,
            });
        }
        options.push((routes, d.deadline));
    }
    // Most constrained demands first.
    let mut order: Vec<usize> = (0..options.len()).collect();
    order.sort_by_key(|&i| options[i].0.len());

    let mut picked: Vec<(&[EdgeId], Time)> = Vec::with_capacity(order.len());
    let mut branches = 0;
    let labels = if order.is_empty() {
        Some(instance.graph().labels())
    } else {
        descend(instance, &options, &order, &mut picked, &mut budget, &mut branches)?
    };
    let stats = SearchStats {
        branches,
        states: budget.used,
    };
    let result = match labels {
        Some(l) => SolveResult::certified(instance, Delaying::new(l)),
        None => SolveResult::No(NoReason::DeadlineUnsatisfiable),
    };
    Ok(Solved {
        result,
        algorithm: Algorithm::RouteSearch,
        stats,
    })
}

fn descend<'r>(
    instance: &Instance,
    options: &'r [(Vec<Vec<EdgeId>>, Time)],
    order: &[usize],
    picked: &mut Vec<(&'r [EdgeId], Time)>,
    budget: &mut Budget,
    branches: &mut u64,
) -> Result<Option<Vec<Time>>, SolveError> {
    budget.tick()?;
    let depth = picked.len();
    let (routes, deadline) = &options[order[depth]];
    for r in routes {
        picked.push((r.as_slice(), *deadline));
        let labels = minimal_labels_capped(instance.graph(), picked.iter().copied(), instance.delta());
        let found = match labels {
            Ok(l) if depth + 1 == order.len() => {
                *branches += 1;
                Some(l)
            }
            Ok(_) => descend(instance, options, order, picked, budget, branches)?,
            Err(_) => None,
        };
        picked.pop();
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Demand, TemporalGraph};

    #[test]
    fn picks_a_compatible_pair() {
        // a-b-d serves the first demand without touching b-c.
        let g = TemporalGraph::new(
            true,
            &["a", "b", "c", "d"],
            &[("a", "b", 1), ("b", "c", 1), ("c", "d", 1), ("b", "d", 1)],
        )
        .unwrap();
        let i = Instance::delay_better(g, vec![Demand::new(0, 3, 2), Demand::new(1, 2, 1)]).unwrap();
        let s = solve_route_search(&i, &SolverConfig::default()).unwrap();
        assert!(s.result.is_yes());
    }

    #[test]
    fn no_when_nothing_fits() {
        let g = TemporalGraph::new(true, &["a", "b", "c"], &[("a", "b", 2), ("b", "c", 1)]).unwrap();
        let i = Instance::delta_delay_better(g, vec![Demand::new(0, 2, 9)], 1).unwrap();
        let s = solve_route_search(&i, &SolverConfig::default()).unwrap();
        assert!(!s.result.is_yes());
    }

    #[test]
    fn empty_demand_set() {
        let g = TemporalGraph::new(true, &["a", "b"], &[("a", "b", 2)]).unwrap();
        let i = Instance::delay_better(g, vec![]).unwrap();
        assert!(solve_route_search(&i, &SolverConfig::default()).unwrap().result.is_yes());
    }
}
