use crate::citymap::{CityMap, Coord};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;

/// Closed tour of grid cells, serialized as `[[x, y], ...]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path {
    steps: Vec<Coord>,
}

impl Path {
    pub fn new(steps: Vec<Coord>) -> Self {
        Path { steps }
    }

    pub fn base_only(base: Coord) -> Self {
        Path { steps: vec![base] }
    }

    pub fn steps(&self) -> &[Coord] {
        &self.steps
    }

    pub fn into_steps(self) -> Vec<Coord> {
        self.steps
    }

    /// Number of moves (steps length minus one).
    pub fn moves(&self) -> usize {
        self.steps.len().saturating_sub(1)
    }

    /// Tie-break order between paths with identical objectives: shorter
    /// first, then lexicographic on coordinates.
    pub fn tie_cmp(&self, other: &Path) -> Ordering {
        self.steps
            .len()
            .cmp(&other.steps.len())
            .then_with(|| self.steps.cmp(&other.steps))
    }

    /// Closure at base, 4-adjacency and traversability.
    pub fn check_on(&self, map: &CityMap) -> Result<()> {
        let (first, last) = match (self.steps.first(), self.steps.last()) {
            (Some(f), Some(l)) => (*f, *l),
            _ => return Err(Error::InvalidPath("path is empty".into())),
        };
        if first != map.base() || last != map.base() {
            return Err(Error::InvalidPath(format!(
                "tour must start and end at base {}, got {first} .. {last}",
                map.base()
            )));
        }
        for (i, &c) in self.steps.iter().enumerate() {
            if !map.is_traversable(c) {
                return Err(Error::InvalidPath(format!(
                    "step {i} at {c} is out of bounds or blocked"
                )));
            }
        }
        for (i, w) in self.steps.windows(2).enumerate() {
            if !w[0].is_adjacent(w[1]) {
                return Err(Error::InvalidPath(format!(
                    "steps {i} and {} ({} -> {}) are not 4-adjacent",
                    i + 1,
                    w[0],
                    w[1]
                )));
            }
        }
        Ok(())
    }

    /// Full validity including the move budget.
    pub fn validate(&self, map: &CityMap, budget: usize) -> Result<()> {
        self.check_on(map)?;
        if self.moves() > budget {
            return Err(Error::InvalidPath(format!(
                "{} moves exceed budget {budget}",
                self.moves()
            )));
        }
        Ok(())
    }

    /// Direction-change points strictly between the two base visits. Each
    /// consecutive pair of these lies on a straight segment, so decoding
    /// them with shortest paths reproduces the tour.
    pub fn corner_points(&self) -> Vec<Coord> {
        let s = &self.steps;
        if s.len() < 3 {
            return Vec::new();
        }
        let dir = |a: Coord, b: Coord| (b.x as isize - a.x as isize, b.y as isize - a.y as isize);
        (1..s.len() - 1)
            .filter(|&i| dir(s[i - 1], s[i]) != dir(s[i], s[i + 1]))
            .map(|i| s[i])
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::citymap::{Attribute, Cell};

    fn open(w: usize, h: usize) -> CityMap {
        CityMap::new(
            w,
            h,
            vec![Cell { traversable: true, counts: vec![vec![1, 1]] }; w * h],
            Coord::new(0, 0),
            vec![Attribute::new("g", &["a", "b"])],
            None,
        )
        .unwrap()
    }

    fn p(v: &[(usize, usize)]) -> Path {
        Path::new(v.iter().map(|&(x, y)| Coord::new(x, y)).collect())
    }

    #[test]
    fn validity() {
        let map = open(3, 3);
        assert!(p(&[(0, 0)]).validate(&map, 0).is_ok());
        assert!(p(&[(0, 0), (1, 0), (0, 0)]).validate(&map, 2).is_ok());
        assert!(p(&[(0, 0), (1, 0), (0, 0)]).validate(&map, 1).is_err());
        assert!(p(&[(0, 0), (1, 1), (0, 0)]).validate(&map, 4).is_err());
        assert!(p(&[(0, 0), (1, 0)]).validate(&map, 4).is_err());
        assert!(p(&[]).validate(&map, 4).is_err());
    }

    #[test]
    fn corners() {
        let tour = p(&[(0, 0), (1, 0), (2, 0), (2, 1), (1, 1), (0, 1), (0, 0)]);
        assert_eq!(tour.corner_points(), vec![Coord::new(2, 0), Coord::new(2, 1), Coord::new(0, 1)]);
        let back = p(&[(0, 0), (1, 0), (0, 0)]);
        assert_eq!(back.corner_points(), vec![Coord::new(1, 0)]);
    }

    #[test]
    fn tie_order() {
        let a = p(&[(0, 0), (0, 1), (0, 0)]);
        let b = p(&[(0, 0), (1, 0), (0, 0)]);
        assert_eq!(a.tie_cmp(&b), Ordering::Less);
        assert_eq!(p(&[(0, 0)]).tie_cmp(&a), Ordering::Less);
    }
}
