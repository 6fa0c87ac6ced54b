//! NSGA-II over waypoint genomes.
//!
//! Each generation breeds `population_size` offspring by binary tournament
//! (rank, then crowding distance), one-point crossover on waypoint lists and
//! a single mutation (perturb, insert or delete one waypoint, equally
//! likely). Parents and offspring are merged, sorted into non-dominated
//! fronts and truncated elitistically. Every evaluated tour also feeds an
//! archive, which is the returned front.

use super::decode::{plan_pins, Decoder};
use super::front::{Objectives, ParetoFront, Solution};
use super::grid::Reach;
use super::{Path, PlannerParams};
use crate::citymap::{CityMap, Coord};
use crate::error::Result;
use crate::fairness::{FairnessSpec, Scorer};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::cmp::Ordering;
use std::collections::HashSet;

pub type Front = ParetoFront<f64>;

#[derive(Debug, Clone)]
struct Individual {
    genome: Vec<Coord>,
    steps: Vec<Coord>,
    objectives: Objectives<f64>,
}

/// Compute an efficiency/unfairness Pareto front.
pub fn evolve_pareto(map: &CityMap, spec: &FairnessSpec, params: &PlannerParams) -> Result<Front> {
    run(map, spec, params, &[], &Front::default())
}

/// Re-plan through pinned waypoints, starting from a previous front.
///
/// The previous front's tours seed both the initial population and the
/// archive; every returned tour passes through all `waypoints`.
pub fn refine(
    map: &CityMap,
    spec: &FairnessSpec,
    params: &PlannerParams,
    waypoints: &[Coord],
    previous: &Front,
) -> Result<Front> {
    run(map, spec, params, waypoints, previous)
}

fn run(
    map: &CityMap,
    spec: &FairnessSpec,
    params: &PlannerParams,
    waypoints: &[Coord],
    previous: &Front,
) -> Result<Front> {
    params.validate()?;
    let scorer = Scorer::new(map, spec, params.sensor_radius)?;
    let reach = Reach::new(map, params.budget);
    let pins = plan_pins(&reach, waypoints)?;
    let decoder = Decoder::new(&reach, pins);
    Nsga::new(&scorer, &decoder, params).run(previous)
}

struct Nsga<'s, 'd, 'r, 'm> {
    scorer: &'s Scorer<'m>,
    decoder: &'d Decoder<'r, 'm>,
    params: &'s PlannerParams,
    max_genes: usize,
    jitter: i64,
}

impl<'s, 'd, 'r, 'm> Nsga<'s, 'd, 'r, 'm> {
    fn new(scorer: &'s Scorer<'m>, decoder: &'d Decoder<'r, 'm>, params: &'s PlannerParams) -> Self {
        Nsga {
            scorer,
            decoder,
            params,
            max_genes: params.budget.max(1),
            jitter: (params.budget / 8).clamp(1, 4) as i64,
        }
    }

    fn evaluate(&self, genomes: Vec<Vec<Coord>>) -> Vec<Individual> {
        genomes
            .into_par_iter()
            .map(|genome| {
                let steps = self.decoder.decode(&genome);
                let objectives = self.scorer.score(&steps);
                Individual {
                    genome,
                    steps,
                    objectives,
                }
            })
            .collect()
    }

    fn run(&self, previous: &Front) -> Result<Front> {
        let n = self.params.population_size;
        let mut rng = ChaCha8Rng::seed_from_u64(self.params.seed);
        let cells = self.decoder.reach().cells();

        let mut genomes: Vec<Vec<Coord>> = previous
            .solutions()
            .iter()
            .take(n / 2)
            .map(|s| s.path.corner_points())
            .collect();
        // The empty genome is the base-only tour.
        genomes.push(Vec::new());
        let init_max = (self.params.budget / 2).clamp(1, 8);
        while genomes.len() < n {
            let len = rng.random_range(1..=init_max);
            genomes.push((0..len).map(|_| *cells.choose(&mut rng).expect("base is reachable")).collect());
        }

        let mut population = self.evaluate(genomes);
        let mut archive = ParetoFront::merge(
            // Re-score seeds: their stored values may come from another
            // radius or spec.
            self.evaluate(previous.solutions().iter().map(|s| s.path.corner_points()).collect())
                .into_iter()
                .filter(|ind| self.decoder.pinned().iter().all(|p| ind.steps.contains(p)))
                .map(to_solution)
                .collect(),
            population.iter().cloned().map(to_solution).collect(),
        );

        let (mut rank, mut crowding) = rank_and_crowd(&population);
        for _ in 0..self.params.generations {
            let mut children = Vec::with_capacity(n);
            while children.len() < n {
                let a = &population[tournament(&rank, &crowding, &mut rng)].genome;
                let b = &population[tournament(&rank, &crowding, &mut rng)].genome;
                let (mut c1, mut c2) = if rng.random_bool(self.params.crossover_rate) {
                    crossover(a, b, &mut rng)
                } else {
                    (a.clone(), b.clone())
                };
                for child in [&mut c1, &mut c2] {
                    if rng.random_bool(self.params.mutation_rate) {
                        self.mutate(child, &mut rng);
                    }
                    child.truncate(self.max_genes);
                }
                children.push(c1);
                children.push(c2);
            }
            let offspring = self.evaluate(children);
            archive = ParetoFront::merge(
                archive.into_solutions(),
                offspring.iter().cloned().map(to_solution).collect(),
            );
            population.extend(offspring);
            population = survivors(population, n);
            (rank, crowding) = rank_and_crowd(&population);
        }
        Ok(archive)
    }

    fn mutate(&self, genome: &mut Vec<Coord>, rng: &mut ChaCha8Rng) {
        let cells = self.decoder.reach().cells();
        match rng.random_range(0..3) {
            0 if !genome.is_empty() => {
                let i = rng.random_range(0..genome.len());
                if let Some(c) = self.nearby(genome[i], rng) {
                    genome[i] = c;
                }
            }
            1 | 0 => {
                let at = rng.random_range(0..=genome.len());
                let c = match genome.get(at.saturating_sub(1)) {
                    Some(&anchor) if rng.random_bool(0.5) => self.nearby(anchor, rng),
                    _ => None,
                }
                .unwrap_or_else(|| *cells.choose(rng).expect("base is reachable"));
                genome.insert(at, c);
            }
            _ => {
                if !genome.is_empty() {
                    let i = rng.random_range(0..genome.len());
                    genome.remove(i);
                }
            }
        }
    }

    /// A reachable cell a few steps from `c`, if one is found quickly.
    fn nearby(&self, c: Coord, rng: &mut ChaCha8Rng) -> Option<Coord> {
        let reach = self.decoder.reach();
        let jitter = if rng.random_bool(0.5) { 1 } else { self.jitter };
        for _ in 0..8 {
            let dx = rng.random_range(-jitter..=jitter);
            let dy = rng.random_range(-jitter..=jitter);
            let (x, y) = (c.x as i64 + dx, c.y as i64 + dy);
            if x < 0 || y < 0 || (dx == 0 && dy == 0) {
                continue;
            }
            let cand = Coord::new(x as usize, y as usize);
            if reach.contains(cand) {
                return Some(cand);
            }
        }
        None
    }
}

fn to_solution(ind: Individual) -> Solution<f64> {
    Solution {
        efficiency: ind.objectives.efficiency,
        unfairness: ind.objectives.unfairness,
        path: Path::new(ind.steps),
    }
}

fn crossover(a: &[Coord], b: &[Coord], rng: &mut ChaCha8Rng) -> (Vec<Coord>, Vec<Coord>) {
    let i = rng.random_range(0..=a.len());
    let j = rng.random_range(0..=b.len());
    let c1 = a[..i].iter().chain(&b[j..]).copied().collect();
    let c2 = b[..j].iter().chain(&a[i..]).copied().collect();
    (c1, c2)
}

fn tournament(rank: &[usize], crowding: &[f64], rng: &mut ChaCha8Rng) -> usize {
    let i = rng.random_range(0..rank.len());
    let j = rng.random_range(0..rank.len());
    let better = rank[i]
        .cmp(&rank[j])
        .then_with(|| crowding[j].total_cmp(&crowding[i]));
    if better == Ordering::Greater {
        j
    } else {
        i
    }
}

/// Fast non-dominated sort. Individuals repeating an objective vector
/// already present in their front are demoted behind all distinct ones so
/// that clones do not crowd out diversity.
fn non_dominated_fronts(pop: &[Individual]) -> Vec<Vec<usize>> {
    let mut seen = HashSet::new();
    let (distinct, clones): (Vec<usize>, Vec<usize>) = (0..pop.len()).partition(|&i| {
        let o = pop[i].objectives;
        seen.insert((o.efficiency, o.unfairness.to_bits()))
    });

    let mut fronts = sort_fronts(pop, &distinct);
    if !clones.is_empty() {
        fronts.extend(sort_fronts(pop, &clones));
    }
    fronts
}

fn sort_fronts(pop: &[Individual], members: &[usize]) -> Vec<Vec<usize>> {
    let m = members.len();
    let mut dominated_by = vec![0usize; m];
    let mut dominates: Vec<Vec<usize>> = vec![Vec::new(); m];
    for a in 0..m {
        for b in (a + 1)..m {
            let (oa, ob) = (&pop[members[a]].objectives, &pop[members[b]].objectives);
            if oa.dominates(ob) {
                dominates[a].push(b);
                dominated_by[b] += 1;
            } else if ob.dominates(oa) {
                dominates[b].push(a);
                dominated_by[a] += 1;
            }
        }
    }
    let mut fronts = Vec::new();
    let mut current: Vec<usize> = (0..m).filter(|&a| dominated_by[a] == 0).collect();
    while !current.is_empty() {
        let mut next = Vec::new();
        for &a in &current {
            for &b in &dominates[a] {
                dominated_by[b] -= 1;
                if dominated_by[b] == 0 {
                    next.push(b);
                }
            }
        }
        fronts.push(current.iter().map(|&a| members[a]).collect());
        next.sort_unstable();
        current = next;
    }
    fronts
}

fn crowding_distance(pop: &[Individual], front: &[usize]) -> Vec<f64> {
    let k = front.len();
    let mut dist = vec![0.0; k];
    if k <= 2 {
        return vec![f64::INFINITY; k];
    }
    let objective = |i: usize, m: usize| -> f64 {
        let o = pop[front[i]].objectives;
        if m == 0 {
            o.efficiency as f64
        } else {
            o.unfairness
        }
    };
    for m in 0..2 {
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&a, &b| objective(a, m).total_cmp(&objective(b, m)).then(a.cmp(&b)));
        let (lo, hi) = (objective(order[0], m), objective(order[k - 1], m));
        dist[order[0]] = f64::INFINITY;
        dist[order[k - 1]] = f64::INFINITY;
        let range = hi - lo;
        if range <= 0.0 {
            continue;
        }
        for w in 1..k - 1 {
            dist[order[w]] += (objective(order[w + 1], m) - objective(order[w - 1], m)) / range;
        }
    }
    dist
}

fn rank_and_crowd(pop: &[Individual]) -> (Vec<usize>, Vec<f64>) {
    let mut rank = vec![0; pop.len()];
    let mut crowding = vec![0.0; pop.len()];
    for (r, front) in non_dominated_fronts(pop).iter().enumerate() {
        for (&i, d) in front.iter().zip(crowding_distance(pop, front)) {
            rank[i] = r;
            crowding[i] = d;
        }
    }
    (rank, crowding)
}

fn survivors(pop: Vec<Individual>, n: usize) -> Vec<Individual> {
    let mut chosen = Vec::with_capacity(n);
    for front in non_dominated_fronts(&pop) {
        if chosen.len() + front.len() <= n {
            chosen.extend(front);
        } else {
            let dist = crowding_distance(&pop, &front);
            let mut order: Vec<usize> = (0..front.len()).collect();
            order.sort_by(|&a, &b| dist[b].total_cmp(&dist[a]).then(a.cmp(&b)));
            chosen.extend(order.into_iter().take(n - chosen.len()).map(|k| front[k]));
        }
        if chosen.len() == n {
            break;
        }
    }
    let mut slots: Vec<Option<Individual>> = pop.into_iter().map(Some).collect();
    chosen.into_iter().map(|i| slots[i].take().expect("chosen once")).collect()
}
