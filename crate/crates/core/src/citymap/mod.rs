//! Demographic grid maps.
//!
//! A [`CityMap`] is a rectangular grid of cells. Each cell is either
//! traversable or blocked and carries integer head-counts for every
//! declared [`Attribute`] (one independent marginal per attribute, e.g. an
//! age split and a gender split of the same people). The robot's base
//! station sits on a traversable cell. Optional named regions partition a
//! subset of the cells and are the unit of location fairness.
//!
//! Maps are immutable once built; [`CityMap::new`] checks every invariant.

mod file;
pub mod synth;

pub use file::{load_city, save_city, CITY_FORMAT};
pub use synth::{generate_city, Blob, Footprint, Preset, SyntheticAttribute, SyntheticCategory, SyntheticCityParams};

use crate::error::{Error, Result};
use crate::fairness::GroupDistribution;
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Grid coordinate, serialized as `[x, y]`. Ordering is lexicographic on
/// `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "[usize; 2]", into = "[usize; 2]")]
pub struct Coord {
    pub x: usize,
    pub y: usize,
}

impl Coord {
    pub const fn new(x: usize, y: usize) -> Self {
        Coord { x, y }
    }

    pub fn manhattan(self, other: Coord) -> usize {
        self.x.abs_diff(other.x) + self.y.abs_diff(other.y)
    }

    pub fn is_adjacent(self, other: Coord) -> bool {
        self.manhattan(other) == 1
    }
}

impl From<[usize; 2]> for Coord {
    fn from([x, y]: [usize; 2]) -> Self {
        Coord { x, y }
    }
}

impl From<Coord> for [usize; 2] {
    fn from(c: Coord) -> Self {
        [c.x, c.y]
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A protected characteristic and its ordered categories.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attribute {
    pub name: String,
    pub categories: Vec<String>,
}

impl Attribute {
    pub fn new(name: impl Into<String>, categories: &[&str]) -> Self {
        Attribute {
            name: name.into(),
            categories: categories.iter().map(|c| c.to_string()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.categories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.categories.is_empty()
    }

    fn validate(&self) -> Result<()> {
        if self.name.is_empty() {
            return Err(Error::Validation("attribute with empty name".into()));
        }
        if self.categories.len() < 2 {
            return Err(Error::Validation(format!(
                "attribute `{}` needs at least two categories",
                self.name
            )));
        }
        let unique: BTreeSet<&str> = self.categories.iter().map(String::as_str).collect();
        if unique.len() != self.categories.len() {
            return Err(Error::Validation(format!(
                "attribute `{}` has duplicate category names",
                self.name
            )));
        }
        Ok(())
    }
}

/// One grid cell. `counts[a][k]` is the number of people of category `k` of
/// attribute `a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub traversable: bool,
    pub counts: Vec<Vec<u64>>,
}

impl Cell {
    pub fn total(&self, attribute: usize) -> u64 {
        self.counts[attribute].iter().sum()
    }
}

/// Validated demographic grid map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CityMap {
    width: usize,
    height: usize,
    cells: Vec<Cell>,
    base: Coord,
    attributes: Vec<Attribute>,
    regions: Option<BTreeMap<String, Vec<Coord>>>,
    // Region index (into the name-ordered region list) for each cell.
    region_of: Vec<Option<u32>>,
}

impl CityMap {
    pub fn new(
        width: usize,
        height: usize,
        cells: Vec<Cell>,
        base: Coord,
        attributes: Vec<Attribute>,
        regions: Option<BTreeMap<String, Vec<Coord>>>,
    ) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Validation("grid must be at least 1x1".into()));
        }
        if cells.len() != width * height {
            return Err(Error::Validation(format!(
                "expected {} cells for a {width}x{height} grid, got {}",
                width * height,
                cells.len()
            )));
        }
        let mut names = BTreeSet::new();
        for attribute in &attributes {
            attribute.validate()?;
            if !names.insert(attribute.name.as_str()) {
                return Err(Error::Validation(format!(
                    "attribute `{}` declared twice",
                    attribute.name
                )));
            }
        }
        for (i, cell) in cells.iter().enumerate() {
            if cell.counts.len() != attributes.len() {
                return Err(Error::Validation(format!(
                    "cell {i} has counts for {} attributes, expected {}",
                    cell.counts.len(),
                    attributes.len()
                )));
            }
            for (counts, attribute) in cell.counts.iter().zip(&attributes) {
                if counts.len() != attribute.len() {
                    return Err(Error::Validation(format!(
                        "cell {i} has {} counts for attribute `{}`, expected {}",
                        counts.len(),
                        attribute.name,
                        attribute.len()
                    )));
                }
            }
        }
        if base.x >= width || base.y >= height {
            return Err(Error::Validation(format!("base {base} is out of bounds")));
        }
        if !cells[base.y * width + base.x].traversable {
            return Err(Error::Validation(format!("base {base} is not traversable")));
        }

        let mut region_of = vec![None; width * height];
        if let Some(regions) = &regions {
            for (r, (name, members)) in regions.iter().enumerate() {
                for &c in members {
                    if c.x >= width || c.y >= height {
                        return Err(Error::Validation(format!(
                            "region `{name}` contains out-of-bounds cell {c}"
                        )));
                    }
                    let slot = &mut region_of[c.y * width + c.x];
                    if slot.is_some() {
                        return Err(Error::Validation(format!(
                            "cell {c} belongs to more than one region (second: `{name}`)"
                        )));
                    }
                    *slot = Some(r as u32);
                }
            }
        }

        Ok(CityMap {
            width,
            height,
            cells,
            base,
            attributes,
            regions,
            region_of,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn base(&self) -> Coord {
        self.base
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn regions(&self) -> Option<&BTreeMap<String, Vec<Coord>>> {
        self.regions.as_ref()
    }

    /// Region names in index order (sorted by name).
    pub fn region_names(&self) -> Vec<&str> {
        self.regions
            .iter()
            .flat_map(|r| r.keys().map(String::as_str))
            .collect()
    }

    pub fn region_count(&self) -> usize {
        self.regions.as_ref().map_or(0, BTreeMap::len)
    }

    pub fn region_of(&self, c: Coord) -> Option<usize> {
        self.region_of[self.index(c)].map(|r| r as usize)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn in_bounds(&self, c: Coord) -> bool {
        c.x < self.width && c.y < self.height
    }

    /// Row-major index of an in-bounds coordinate.
    pub fn index(&self, c: Coord) -> usize {
        debug_assert!(self.in_bounds(c));
        c.y * self.width + c.x
    }

    pub fn coord(&self, index: usize) -> Coord {
        Coord::new(index % self.width, index / self.width)
    }

    pub fn cell(&self, c: Coord) -> &Cell {
        &self.cells[self.index(c)]
    }

    pub fn is_traversable(&self, c: Coord) -> bool {
        self.in_bounds(c) && self.cells[self.index(c)].traversable
    }

    /// In-bounds 4-neighbours in a fixed order: left, right, up, down.
    pub fn neighbors(&self, c: Coord) -> impl Iterator<Item = Coord> + '_ {
        let left = c.x.checked_sub(1).map(|x| Coord::new(x, c.y));
        let right = (c.x + 1 < self.width).then(|| Coord::new(c.x + 1, c.y));
        let up = c.y.checked_sub(1).map(|y| Coord::new(c.x, y));
        let down = (c.y + 1 < self.height).then(|| Coord::new(c.x, c.y + 1));
        [left, right, up, down].into_iter().flatten()
    }

    pub fn attribute_index(&self, name: &str) -> Result<usize> {
        self.attributes
            .iter()
            .position(|a| a.name == name)
            .ok_or_else(|| Error::UnknownAttribute(name.to_string()))
    }

    /// Per-category totals of one attribute over the whole map.
    pub fn category_totals(&self, attribute: usize) -> Vec<u64> {
        let mut totals = vec![0u64; self.attributes[attribute].len()];
        for cell in &self.cells {
            for (t, &n) in totals.iter_mut().zip(&cell.counts[attribute]) {
                *t += n;
            }
        }
        totals
    }

    pub fn population(&self, attribute: usize) -> u64 {
        self.category_totals(attribute).iter().sum()
    }

    /// Counts of cells addressed by a set of row-major indices.
    pub(crate) fn counts_over(&self, attribute: usize, indices: &[usize]) -> Vec<u64> {
        let mut totals = vec![0u64; self.attributes[attribute].len()];
        for &i in indices {
            for (t, &n) in totals.iter_mut().zip(&self.cells[i].counts[attribute]) {
                *t += n;
            }
        }
        totals
    }
}

/// City-wide distribution of one attribute.
pub fn city_distribution<T: Scalar>(map: &CityMap, attribute: &str) -> Result<GroupDistribution<T>> {
    let a = map.attribute_index(attribute)?;
    Ok(GroupDistribution::from_counts(attribute, &map.category_totals(a)))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn one_by_one(counts: Vec<u64>) -> CityMap {
        CityMap::new(
            1,
            1,
            vec![Cell {
                traversable: true,
                counts: vec![counts],
            }],
            Coord::new(0, 0),
            vec![Attribute::new("age", &["young", "old"])],
            None,
        )
        .unwrap()
    }

    #[test]
    fn single_cell_distribution() {
        let map = one_by_one(vec![3, 1]);
        assert_eq!(map.population(0), 4);
        let d: GroupDistribution<f64> = city_distribution(&map, "age").unwrap();
        assert_eq!(d.mass(), &[0.75, 0.25]);
    }

    #[test]
    fn two_cells_are_symmetric() {
        let map = CityMap::new(
            2,
            1,
            vec![
                Cell { traversable: true, counts: vec![vec![1, 0]] },
                Cell { traversable: true, counts: vec![vec![0, 1]] },
            ],
            Coord::new(0, 0),
            vec![Attribute::new("age", &["young", "old"])],
            None,
        )
        .unwrap();
        let d: GroupDistribution<f64> = city_distribution(&map, "age").unwrap();
        assert_eq!(d.mass(), &[0.5, 0.5]);
    }

    #[test]
    fn empty_city_gives_zero_distribution() {
        let map = one_by_one(vec![0, 0]);
        let d: GroupDistribution<f64> = city_distribution(&map, "age").unwrap();
        assert!(d.is_zero());
    }

    #[test]
    fn unknown_attribute() {
        let map = one_by_one(vec![1, 1]);
        assert!(matches!(
            city_distribution::<f64>(&map, "gender"),
            Err(Error::UnknownAttribute(_))
        ));
    }

    #[test]
    fn rejects_blocked_base_and_overlapping_regions() {
        let cells = vec![
            Cell { traversable: false, counts: vec![vec![1, 1]] },
            Cell { traversable: true, counts: vec![vec![1, 1]] },
        ];
        let attrs = vec![Attribute::new("age", &["young", "old"])];
        let err = CityMap::new(2, 1, cells.clone(), Coord::new(0, 0), attrs.clone(), None);
        assert!(matches!(err, Err(Error::Validation(_))));

        let mut regions = BTreeMap::new();
        regions.insert("a".to_string(), vec![Coord::new(1, 0)]);
        regions.insert("b".to_string(), vec![Coord::new(1, 0)]);
        let err = CityMap::new(2, 1, cells, Coord::new(1, 0), attrs, Some(regions));
        assert!(matches!(err, Err(Error::Validation(_))));
    }

    #[test]
    fn neighbour_order_is_fixed() {
        let map = CityMap::new(
            3,
            3,
            vec![Cell { traversable: true, counts: vec![] }; 9],
            Coord::new(1, 1),
            vec![],
            None,
        )
        .unwrap();
        let n: Vec<_> = map.neighbors(Coord::new(1, 1)).collect();
        assert_eq!(
            n,
            vec![Coord::new(0, 1), Coord::new(2, 1), Coord::new(1, 0), Coord::new(1, 2)]
        );
        assert_eq!(map.neighbors(Coord::new(0, 0)).count(), 2);
    }
}
