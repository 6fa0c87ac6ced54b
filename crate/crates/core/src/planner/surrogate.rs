//! Cumulative-cost baseline for distribution-based specs.
//!
//! Each cell gets a fixed reward `pop(c) − weight · pop(c) · ‖share(c) − target‖₁`
//! and a tour is scored by summing rewards over the cells it senses (each
//! once). That sum is what a per-state-cost planner can optimize; the
//! returned solution is then audited with the true, non-additive
//! unfairness.
//!
//! Search: greedy best-ratio insertion of target cells (reward gained per
//! extra move) under the budget, with 2-opt on the target sequence after
//! every insertion to free up moves.

use super::front::Solution;
use super::grid::Reach;
use super::{Path, PlannerParams};
use crate::citymap::{CityMap, Coord};
use crate::error::{Error, Result};
use crate::fairness::{covered_cells, FairnessSpec, Scorer};

/// Plan with the additive surrogate and report true objectives.
pub fn surrogate_plan(
    map: &CityMap,
    spec: &FairnessSpec,
    params: &PlannerParams,
    weight: f64,
) -> Result<Solution<f64>> {
    if !spec.is_distribution_based() {
        return Err(Error::UnsupportedSpec(spec.kind_name()));
    }
    if !(weight >= 0.0 && weight.is_finite()) {
        return Err(Error::Validation(format!("weight must be finite and non-negative, got {weight}")));
    }
    let scorer = Scorer::new(map, spec, params.sensor_radius)?;
    let reach = Reach::new(map, params.budget);
    let rewards = cell_rewards(map, scorer.attribute(), scorer.target(), weight);
    let steps = Greedy::new(&reach, &rewards, params.sensor_radius).build();
    let objectives = scorer.score(&steps);
    Ok(Solution {
        efficiency: objectives.efficiency,
        unfairness: objectives.unfairness,
        path: Path::new(steps),
    })
}

/// Per-cell surrogate reward, indexed row-major.
pub fn cell_rewards(map: &CityMap, attribute: usize, target: &[f64], weight: f64) -> Vec<f64> {
    map.cells()
        .iter()
        .map(|cell| {
            let counts = &cell.counts[attribute];
            let pop: u64 = counts.iter().sum();
            if pop == 0 || !cell.traversable {
                return 0.0;
            }
            let pop = pop as f64;
            let l1: f64 = counts
                .iter()
                .zip(target)
                .map(|(&n, &t)| (n as f64 / pop - t).abs())
                .sum();
            pop - weight * pop * l1
        })
        .collect()
}

struct Greedy<'r, 'm> {
    reach: &'r Reach<'m>,
    rewards: &'r [f64],
    radius: usize,
}

impl<'r, 'm> Greedy<'r, 'm> {
    fn new(reach: &'r Reach<'m>, rewards: &'r [f64], radius: usize) -> Self {
        Greedy { reach, rewards, radius }
    }

    fn route_len(&self, nodes: &[Coord]) -> u32 {
        let base = self.reach.map().base();
        let mut cur = base;
        let mut len = 0;
        for &n in nodes.iter().chain(std::iter::once(&base)) {
            len += self.reach.dist(cur, n);
            cur = n;
        }
        len
    }

    fn expand(&self, nodes: &[Coord]) -> Vec<Coord> {
        let base = self.reach.map().base();
        let mut steps = vec![base];
        for &n in nodes {
            self.reach.walk_to(&mut steps, n);
        }
        self.reach.walk_to(&mut steps, base);
        steps
    }

    fn build(&self) -> Vec<Coord> {
        let map = self.reach.map();
        let base = map.base();
        let budget = self.reach.budget() as u32;
        let mut nodes: Vec<Coord> = Vec::new();
        let mut len = 0u32;
        let mut covered = vec![false; map.len()];
        for i in covered_cells(map, &[base], self.radius) {
            covered[i] = true;
        }

        loop {
            let mut best: Option<(f64, u32, usize, Coord)> = None;
            for &c in self.reach.cells() {
                let gain: f64 = covered_cells(map, &[c], self.radius)
                    .into_iter()
                    .filter(|&i| !covered[i])
                    .map(|i| self.rewards[i])
                    .sum();
                if gain <= 0.0 {
                    continue;
                }
                for pos in 0..=nodes.len() {
                    let prev = if pos == 0 { base } else { nodes[pos - 1] };
                    let next = nodes.get(pos).copied().unwrap_or(base);
                    let delta = self.reach.dist(prev, c) + self.reach.dist(c, next) - self.reach.dist(prev, next);
                    if len + delta > budget {
                        continue;
                    }
                    let score = gain / delta.max(1) as f64;
                    let better = match best {
                        None => true,
                        Some((s, d, _, _)) => score > s || (score == s && delta < d),
                    };
                    if better {
                        best = Some((score, delta, pos, c));
                    }
                }
            }
            let Some((_, _, pos, c)) = best else { break };
            nodes.insert(pos, c);
            self.two_opt(&mut nodes);
            len = self.route_len(&nodes);
            for i in covered_cells(map, &self.expand(&nodes), self.radius) {
                covered[i] = true;
            }
        }
        self.expand(&nodes)
    }

    fn two_opt(&self, nodes: &mut [Coord]) {
        let mut len = self.route_len(nodes);
        let mut improved = true;
        while improved {
            improved = false;
            for i in 0..nodes.len() {
                for j in i + 1..nodes.len() {
                    nodes[i..=j].reverse();
                    let candidate = self.route_len(nodes);
                    if candidate < len {
                        len = candidate;
                        improved = true;
                    } else {
                        nodes[i..=j].reverse();
                    }
                }
            }
        }
    }
}
