//! Exact Pareto fronts by exhaustive tour enumeration on tiny instances.

use super::front::{ParetoFront, Solution};
use super::grid::{bfs, UNREACHABLE};
use super::Path;
use crate::citymap::{CityMap, Coord};
use crate::error::{Error, Result};
use crate::fairness::{FairnessSpec, Scorer};
use std::collections::HashMap;

pub const ORACLE_MAX_SIDE: usize = 5;
pub const ORACLE_MAX_BUDGET: usize = 12;

/// Exact front over every closed tour from base with at most `budget`
/// moves. Refuses maps wider or taller than 5 cells or budgets above 12.
///
/// Depth-first search visits neighbours in coordinate order, so tours are
/// produced in lexicographic order. A search state is the current cell,
/// the set of visited cells and (for location specs) the region visit
/// counts; a state reached again with at least as many moves is pruned,
/// since it admits the same completions at no lower cost.
pub fn oracle_pareto(
    map: &CityMap,
    spec: &FairnessSpec,
    budget: usize,
    sensor_radius: usize,
) -> Result<ParetoFront<f64>> {
    if map.width() > ORACLE_MAX_SIDE || map.height() > ORACLE_MAX_SIDE || budget > ORACLE_MAX_BUDGET {
        return Err(Error::OracleGuard {
            width: map.width(),
            height: map.height(),
            budget,
        });
    }
    let scorer = Scorer::new(map, spec, sensor_radius)?;
    let mut search = Search {
        map,
        budget,
        to_base: bfs(map, map.base(), |_| true),
        track_regions: spec.is_location_based(),
        best_moves: HashMap::new(),
        closed: HashMap::new(),
        steps: vec![map.base()],
        visited: 1u32 << map.index(map.base()),
        visits: vec![0u8; map.region_count()],
    };
    search.dfs();

    let candidates = search
        .closed
        .into_values()
        .map(|steps| {
            let objectives = scorer.score(&steps);
            Solution {
                efficiency: objectives.efficiency,
                unfairness: objectives.unfairness,
                path: Path::new(steps),
            }
        })
        .collect();
    Ok(ParetoFront::from_candidates(candidates))
}

type StateKey = (u8, u32, Vec<u8>);

struct Search<'a> {
    map: &'a CityMap,
    budget: usize,
    to_base: Vec<u32>,
    track_regions: bool,
    best_moves: HashMap<StateKey, usize>,
    // (visited set, region visits) -> first (shortest, then lexicographic)
    // closed tour with that outcome.
    closed: HashMap<(u32, Vec<u8>), Vec<Coord>>,
    steps: Vec<Coord>,
    visited: u32,
    // Region visits counted over all steps but the current one.
    visits: Vec<u8>,
}

impl Search<'_> {
    fn dfs(&mut self) {
        let cur = *self.steps.last().expect("non-empty");
        let moves = self.steps.len() - 1;
        let key: StateKey = (self.map.index(cur) as u8, self.visited, self.visits.clone());
        match self.best_moves.get(&key) {
            Some(&m) if m <= moves => return,
            _ => {
                self.best_moves.insert(key, moves);
            }
        }

        if cur == self.map.base() {
            let outcome = (self.visited, self.closed_visits());
            match self.closed.get(&outcome) {
                Some(existing) if Path::new(existing.clone()).tie_cmp(&Path::new(self.steps.clone())).is_le() => {}
                _ => {
                    self.closed.insert(outcome, self.steps.clone());
                }
            }
        }

        let mut next: Vec<Coord> = self
            .map
            .neighbors(cur)
            .filter(|&n| self.map.is_traversable(n))
            .collect();
        next.sort_unstable();
        for n in next {
            let d = self.to_base[self.map.index(n)];
            if d == UNREACHABLE || moves + 1 + d as usize > self.budget {
                continue;
            }
            let region = if self.track_regions { self.map.region_of(cur) } else { None };
            if let Some(r) = region {
                self.visits[r] += 1;
            }
            let before = self.visited;
            self.visited |= 1 << self.map.index(n);
            self.steps.push(n);
            self.dfs();
            self.steps.pop();
            self.visited = before;
            if let Some(r) = region {
                self.visits[r] -= 1;
            }
        }
    }

    // Visits as counted for a closed tour: every position but the final
    // return; the base-only tour counts its single position.
    fn closed_visits(&self) -> Vec<u8> {
        if !self.track_regions {
            return Vec::new();
        }
        let mut v = self.visits.clone();
        if self.steps.len() == 1 {
            if let Some(r) = self.map.region_of(self.steps[0]) {
                v[r] += 1;
            }
        }
        v
    }
}
