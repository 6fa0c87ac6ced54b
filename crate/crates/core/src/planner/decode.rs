//! Waypoint genomes and their decoding into feasible closed tours.

use super::grid::{Reach, UNREACHABLE};
use crate::citymap::{CityMap, Coord};
use crate::error::{Error, Result};

/// Decodes waypoint lists into closed tours that respect the budget and
/// pass through every pinned waypoint.
///
/// The tour goes base → w1 → … → wk along shortest paths, then through the
/// remaining pinned waypoints in their fixed order, then home. Before each
/// leg the decoder checks that the waypoint can be reached while still
/// affording the pinned waypoints and the return; the first waypoint that
/// cannot is approached only as far as the budget allows, and the rest of
/// the genome is ignored.
pub(crate) struct Decoder<'r, 'm> {
    reach: &'r Reach<'m>,
    pinned: Vec<Coord>,
    // suffix[i]: moves from pinned[i] through the rest of the pins to base.
    suffix: Vec<u32>,
}

impl<'r, 'm> Decoder<'r, 'm> {
    pub fn new(reach: &'r Reach<'m>, pinned: Vec<Coord>) -> Self {
        let base = reach.map().base();
        let mut suffix = vec![0; pinned.len()];
        let mut next = base;
        for i in (0..pinned.len()).rev() {
            let rest = if i + 1 < pinned.len() { suffix[i + 1] } else { 0 };
            suffix[i] = reach.dist(pinned[i], next) + rest;
            next = pinned[i];
        }
        Decoder { reach, pinned, suffix }
    }

    pub fn reach(&self) -> &'r Reach<'m> {
        self.reach
    }

    pub fn pinned(&self) -> &[Coord] {
        &self.pinned
    }

    /// Moves still needed from `x` when pins `i..` remain.
    fn tail(&self, x: Coord, i: usize) -> u32 {
        match self.pinned.get(i) {
            Some(&p) => self.reach.dist(x, p) + self.suffix[i],
            None => self.reach.dist(x, self.reach.map().base()),
        }
    }

    fn advance(&self, c: Coord, i: usize) -> usize {
        if self.pinned.get(i) == Some(&c) {
            i + 1
        } else {
            i
        }
    }

    pub fn decode(&self, genome: &[Coord]) -> Vec<Coord> {
        let base = self.reach.map().base();
        let budget = self.reach.budget() as u32;
        let mut steps = vec![base];
        let mut cur = base;
        let mut pin = self.advance(base, 0);

        for &w in genome {
            if w == cur || !self.reach.contains(w) {
                continue;
            }
            let leg = self.reach.dist(cur, w);
            let used = (steps.len() - 1) as u32;
            if used + leg + self.tail(w, pin) <= budget {
                while cur != w {
                    cur = self.reach.next_step(cur, w);
                    steps.push(cur);
                    pin = self.advance(cur, pin);
                }
            } else {
                loop {
                    let next = self.reach.next_step(cur, w);
                    let next_pin = self.advance(next, pin);
                    let used = (steps.len() - 1) as u32;
                    if next == w || used + 1 + self.tail(next, next_pin) > budget {
                        break;
                    }
                    cur = next;
                    pin = next_pin;
                    steps.push(cur);
                }
                break;
            }
        }

        for &p in &self.pinned[pin..] {
            self.reach.walk_to(&mut steps, p);
        }
        self.reach.walk_to(&mut steps, base);
        steps
    }
}

/// Check that a closed tour within `budget` can pass through every
/// waypoint, without planning.
pub fn check_waypoints(map: &CityMap, budget: usize, waypoints: &[Coord]) -> Result<()> {
    plan_pins(&Reach::new(map, budget), waypoints).map(|_| ())
}

/// Order pinned waypoints for the shortest base-to-base route through all
/// of them and check it fits the budget. Pins on the base are dropped.
pub(crate) fn plan_pins(reach: &Reach<'_>, waypoints: &[Coord]) -> Result<Vec<Coord>> {
    let map = reach.map();
    let base = map.base();
    let offenders: Vec<String> = waypoints
        .iter()
        .filter(|&&w| !map.is_traversable(w) || !reach.contains(w))
        .map(|w| w.to_string())
        .collect();
    if !offenders.is_empty() {
        return Err(Error::Infeasible(format!(
            "waypoints not reachable within budget {}: {}",
            reach.budget(),
            offenders.join(", ")
        )));
    }

    let mut pins: Vec<Coord> = Vec::new();
    for &w in waypoints {
        if w != base && !pins.contains(&w) {
            pins.push(w);
        }
    }
    let route_len = |order: &[Coord]| -> u32 {
        let mut len = 0;
        let mut cur = base;
        for &p in order.iter().chain(std::iter::once(&base)) {
            len += reach.dist(cur, p);
            cur = p;
        }
        len
    };

    let best = if pins.len() <= 7 {
        let mut best = pins.clone();
        let mut best_len = route_len(&best);
        let mut order = pins.clone();
        permute(&mut order, 0, &mut |o: &[Coord]| {
            let len = route_len(o);
            if len < best_len {
                best_len = len;
                best = o.to_vec();
            }
        });
        best
    } else {
        // Nearest neighbour from the base.
        let mut left = pins.clone();
        let mut order = Vec::with_capacity(left.len());
        let mut cur = base;
        while !left.is_empty() {
            let (k, _) = left
                .iter()
                .enumerate()
                .min_by_key(|(_, &p)| (reach.dist(cur, p), p))
                .expect("non-empty");
            cur = left.remove(k);
            order.push(cur);
        }
        order
    };

    let len = route_len(&best);
    if len == UNREACHABLE || len as usize > reach.budget() {
        return Err(Error::Infeasible(format!(
            "visiting all waypoints needs {len} moves, budget is {}: {}",
            reach.budget(),
            pins.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(", ")
        )));
    }
    Ok(best)
}

fn permute(items: &mut Vec<Coord>, k: usize, visit: &mut impl FnMut(&[Coord])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}
