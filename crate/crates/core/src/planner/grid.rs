//! Shortest paths on the 4-connected grid, restricted to cells that some
//! budget-feasible closed tour can reach.
//!
//! Any closed tour through `c` has at least `2·d(base, c)` moves, so only
//! cells with `d(base, c) <= budget / 2` matter. Distance fields towards
//! each of those cells are computed lazily by BFS inside that set.

use crate::citymap::{CityMap, Coord};
use std::collections::VecDeque;
use std::sync::OnceLock;

pub(crate) const UNREACHABLE: u32 = u32::MAX;

pub(crate) struct Reach<'a> {
    map: &'a CityMap,
    budget: usize,
    cells: Vec<Coord>,
    // Map index -> position in `cells`, or UNREACHABLE.
    local: Vec<u32>,
    fields: Vec<OnceLock<Box<[u32]>>>,
}

impl<'a> Reach<'a> {
    pub fn new(map: &'a CityMap, budget: usize) -> Self {
        let radius = (budget / 2) as u32;
        let from_base = bfs(map, map.base(), |_| true);
        let cells: Vec<Coord> = (0..map.len())
            .filter(|&i| from_base[i] <= radius)
            .map(|i| map.coord(i))
            .collect();
        let mut local = vec![UNREACHABLE; map.len()];
        for (k, &c) in cells.iter().enumerate() {
            local[map.index(c)] = k as u32;
        }
        let fields = (0..cells.len()).map(|_| OnceLock::new()).collect();
        Reach {
            map,
            budget,
            cells,
            local,
            fields,
        }
    }

    pub fn map(&self) -> &'a CityMap {
        self.map
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    /// Reachable cells in row-major order (the base is always first among
    /// cells with its index and always present).
    pub fn cells(&self) -> &[Coord] {
        &self.cells
    }

    pub fn contains(&self, c: Coord) -> bool {
        self.map.in_bounds(c) && self.local[self.map.index(c)] != UNREACHABLE
    }

    fn field(&self, target: Coord) -> &[u32] {
        let k = self.local[self.map.index(target)] as usize;
        self.fields[k].get_or_init(|| {
            let full = bfs(self.map, target, |i| self.local[i] != UNREACHABLE);
            self.cells.iter().map(|&c| full[self.map.index(c)]).collect()
        })
    }

    /// Shortest distance between two reachable cells.
    pub fn dist(&self, from: Coord, to: Coord) -> u32 {
        self.field(to)[self.local[self.map.index(from)] as usize]
    }

    /// First move of a shortest path from `from` towards `to` (neighbour
    /// order breaks ties).
    pub fn next_step(&self, from: Coord, to: Coord) -> Coord {
        let field = self.field(to);
        let here = field[self.local[self.map.index(from)] as usize];
        self.map
            .neighbors(from)
            .find(|&n| {
                let k = self.local[self.map.index(n)];
                k != UNREACHABLE && field[k as usize] + 1 == here
            })
            .expect("reachable cells are connected inside the reachable set")
    }

    /// Append the shortest path from the last step to `to`.
    pub fn walk_to(&self, steps: &mut Vec<Coord>, to: Coord) {
        let mut cur = *steps.last().expect("non-empty tour");
        while cur != to {
            cur = self.next_step(cur, to);
            steps.push(cur);
        }
    }
}

/// BFS distances over traversable cells admitted by `allow` (row-major
/// index). Unreached cells get `UNREACHABLE`.
pub(crate) fn bfs(map: &CityMap, source: Coord, allow: impl Fn(usize) -> bool) -> Vec<u32> {
    let mut dist = vec![UNREACHABLE; map.len()];
    if !map.is_traversable(source) {
        return dist;
    }
    let mut queue = VecDeque::new();
    dist[map.index(source)] = 0;
    queue.push_back(source);
    while let Some(c) = queue.pop_front() {
        let d = dist[map.index(c)];
        for n in map.neighbors(c) {
            let i = map.index(n);
            if dist[i] == UNREACHABLE && map.cells()[i].traversable && allow(i) {
                dist[i] = d + 1;
                queue.push_back(n);
            }
        }
    }
    dist
}
