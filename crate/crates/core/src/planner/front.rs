//! Efficiency/unfairness objectives, dominance and Pareto fronts.
//!
//! Efficiency (people found) is maximized, unfairness is minimized.

use super::Path;
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Objectives<T> {
    pub efficiency: u64,
    pub unfairness: T,
}

impl<T: Scalar> Objectives<T> {
    pub fn new(efficiency: u64, unfairness: T) -> Self {
        Objectives { efficiency, unfairness }
    }

    /// At least as good in both objectives.
    pub fn weakly_dominates(&self, other: &Self) -> bool {
        self.efficiency >= other.efficiency && self.unfairness <= other.unfairness
    }

    /// At least as good in both and strictly better in one.
    pub fn dominates(&self, other: &Self) -> bool {
        self.weakly_dominates(other)
            && (self.efficiency > other.efficiency || self.unfairness < other.unfairness)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution<T> {
    pub efficiency: u64,
    pub unfairness: T,
    pub path: Path,
}

impl<T: Scalar> Solution<T> {
    pub fn objectives(&self) -> Objectives<T> {
        Objectives::new(self.efficiency, self.unfairness)
    }
}

/// Mutually non-dominated solutions sorted by increasing unfairness (and
/// therefore increasing efficiency).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParetoFront<T> {
    solutions: Vec<Solution<T>>,
}

impl<T: Scalar> Default for ParetoFront<T> {
    fn default() -> Self {
        ParetoFront { solutions: Vec::new() }
    }
}

impl<T: Scalar> ParetoFront<T> {
    /// Non-dominated subset of `candidates`. Identical objective vectors
    /// keep the shorter path, then the lexicographically smaller one.
    pub fn from_candidates(candidates: Vec<Solution<T>>) -> Self {
        Self::merge(Vec::new(), candidates)
    }

    /// Non-dominated subset of `incumbents ∪ newcomers`. On identical
    /// objectives an incumbent is only displaced by a strictly shorter path.
    pub fn merge(incumbents: Vec<Solution<T>>, newcomers: Vec<Solution<T>>) -> Self {
        let mut all: Vec<(u8, Solution<T>)> = incumbents
            .into_iter()
            .map(|s| (0, s))
            .chain(newcomers.into_iter().map(|s| (1, s)))
            .collect();
        all.sort_by(|(ra, a), (rb, b)| {
            b.efficiency
                .cmp(&a.efficiency)
                .then_with(|| cmp_scalar(a.unfairness, b.unfairness))
                .then_with(|| a.path.steps().len().cmp(&b.path.steps().len()))
                .then_with(|| ra.cmp(rb))
                .then_with(|| a.path.steps().cmp(b.path.steps()))
        });
        let mut kept: Vec<Solution<T>> = Vec::new();
        for (_, s) in all {
            let better = kept.last().is_none_or(|last| s.unfairness < last.unfairness);
            if better {
                kept.push(s);
            }
        }
        kept.reverse();
        ParetoFront { solutions: kept }
    }

    pub fn solutions(&self) -> &[Solution<T>] {
        &self.solutions
    }

    pub fn into_solutions(self) -> Vec<Solution<T>> {
        self.solutions
    }

    pub fn len(&self) -> usize {
        self.solutions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.solutions.is_empty()
    }

    /// Solution with the smallest unfairness.
    pub fn fairest(&self) -> Option<&Solution<T>> {
        self.solutions.first()
    }

    /// Solution with the largest efficiency.
    pub fn most_efficient(&self) -> Option<&Solution<T>> {
        self.solutions.last()
    }

    /// Whether some member weakly dominates `point`.
    pub fn covers(&self, point: &Objectives<T>) -> bool {
        self.solutions.iter().any(|s| s.objectives().weakly_dominates(point))
    }

    /// Members of `self` not weakly dominated by any member of `other`.
    pub fn violations_against(&self, other: &ParetoFront<T>) -> usize {
        self.solutions.iter().filter(|s| !other.covers(&s.objectives())).count()
    }
}

fn cmp_scalar<T: Scalar>(a: T, b: T) -> Ordering {
    a.partial_cmp(&b).unwrap_or(Ordering::Equal)
}

/// Two-dimensional hypervolume: area between the front and `reference`
/// (efficiency below, unfairness above). Points that are not better than
/// the reference in both objectives contribute nothing; an empty front has
/// hypervolume 0.
pub fn hypervolume<T: Scalar>(front: &ParetoFront<T>, reference: Objectives<T>) -> T {
    hypervolume_of(front.solutions().iter().map(Solution::objectives), reference)
}

pub fn hypervolume_of<T: Scalar>(points: impl IntoIterator<Item = Objectives<T>>, reference: Objectives<T>) -> T {
    let mut pts: Vec<Objectives<T>> = points
        .into_iter()
        .filter(|p| p.efficiency > reference.efficiency && p.unfairness < reference.unfairness)
        .collect();
    // Efficiency descending; each slab spans down to the next point's
    // efficiency, at the best unfairness seen so far.
    pts.sort_by(|a, b| b.efficiency.cmp(&a.efficiency).then_with(|| cmp_scalar(a.unfairness, b.unfairness)));
    let mut area = T::zero();
    let mut best = reference.unfairness;
    for (i, p) in pts.iter().enumerate() {
        if p.unfairness < best {
            best = p.unfairness;
        }
        let lower = pts.get(i + 1).map_or(reference.efficiency, |n| n.efficiency);
        let width = T::from_count(p.efficiency - lower);
        area = area + width * (reference.unfairness - best);
    }
    area
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::citymap::Coord;
    use proptest::prelude::*;

    fn sol(e: u64, u: f64, len: usize) -> Solution<f64> {
        Solution {
            efficiency: e,
            unfairness: u,
            path: Path::new(vec![Coord::new(0, 0); len]),
        }
    }

    #[test]
    fn single_rectangle() {
        let front = ParetoFront::from_candidates(vec![sol(4, 0.2, 1)]);
        let hv = hypervolume(&front, Objectives::new(0, 1.0));
        assert!((hv - 3.2).abs() < 1e-12);
        assert_eq!(hypervolume(&ParetoFront::<f64>::default(), Objectives::new(0, 1.0)), 0.0);
    }

    #[test]
    fn dominated_points_add_nothing() {
        let front = ParetoFront::from_candidates(vec![sol(4, 0.2, 1), sol(8, 0.5, 1)]);
        let reference = Objectives::new(0, 1.0);
        let base = hypervolume(&front, reference);
        assert!((base - (4.0 * 0.8 + 4.0 * 0.5)).abs() < 1e-12);
        let mut with = front.solutions().to_vec();
        with.push(sol(3, 0.6, 1));
        assert_eq!(hypervolume_of(with.iter().map(Solution::objectives), reference), base);
    }

    #[test]
    fn from_candidates_filters_and_sorts() {
        let front = ParetoFront::from_candidates(vec![
            sol(8, 0.5, 3),
            sol(4, 0.2, 3),
            sol(8, 0.5, 1),
            sol(6, 0.6, 1),
            sol(4, 0.3, 1),
        ]);
        let objs: Vec<_> = front.solutions().iter().map(|s| (s.efficiency, s.unfairness)).collect();
        assert_eq!(objs, vec![(4, 0.2), (8, 0.5)]);
        assert_eq!(front.solutions()[1].path.steps().len(), 1);
    }

    #[test]
    fn merge_prefers_incumbents_of_equal_length() {
        let inc = Solution {
            efficiency: 2,
            unfairness: 0.0,
            path: Path::new(vec![Coord::new(1, 1), Coord::new(1, 0), Coord::new(1, 1)]),
        };
        let new = Solution {
            efficiency: 2,
            unfairness: 0.0,
            path: Path::new(vec![Coord::new(1, 1), Coord::new(0, 1), Coord::new(1, 1)]),
        };
        let merged = ParetoFront::merge(vec![inc.clone()], vec![new.clone()]);
        assert_eq!(merged.solutions(), std::slice::from_ref(&inc));
        let fresh = ParetoFront::from_candidates(vec![inc, new.clone()]);
        assert_eq!(fresh.solutions(), &[new]);
    }

    proptest! {
        #[test]
        fn front_is_non_dominated_and_monotone(pts in prop::collection::vec((0u64..50, 0.0f64..1.0), 0..40)) {
            let front = ParetoFront::from_candidates(pts.iter().map(|&(e, u)| sol(e, u, 1)).collect());
            let s = front.solutions();
            for a in s {
                for b in s {
                    prop_assert!(!a.objectives().dominates(&b.objectives()));
                }
            }
            for w in s.windows(2) {
                prop_assert!(w[0].unfairness < w[1].unfairness);
            }
            // Every candidate is covered by the front.
            for &(e, u) in &pts {
                prop_assert!(front.covers(&Objectives::new(e, u)));
            }
            // Superset fronts never lose hypervolume.
            let reference = Objectives::new(0, 1.0);
            let sub = ParetoFront::from_candidates(pts.iter().take(pts.len() / 2).map(|&(e, u)| sol(e, u, 1)).collect());
            prop_assert!(hypervolume(&front, reference) + 1e-12 >= hypervolume(&sub, reference));
        }
    }
}
