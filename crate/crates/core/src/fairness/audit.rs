use super::distribution::{js_distance_slices, GroupDistribution};
use super::spec::FairnessSpec;
use crate::citymap::{CityMap, Coord};
use crate::error::Result;
use crate::planner::{Objectives, Path};
use serde::{Deserialize, Serialize};

/// What a path finds for one attribute.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathAudit {
    pub attribute: String,
    pub categories: Vec<String>,
    pub found_total: u64,
    pub found: Vec<u64>,
    pub path_distribution: GroupDistribution<f64>,
    pub city_distribution: GroupDistribution<f64>,
    /// Fraction of each group's city-wide population that was found.
    pub utility: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unfairness: Option<f64>,
}

/// Traversable cells within Chebyshev distance `radius` of any step, as
/// sorted, de-duplicated row-major indices.
pub fn covered_cells(map: &CityMap, steps: &[Coord], radius: usize) -> Vec<usize> {
    let mut covered = Vec::with_capacity(steps.len() * (2 * radius + 1).pow(2));
    for &s in steps {
        let (x0, x1) = (s.x.saturating_sub(radius), (s.x + radius).min(map.width() - 1));
        let (y0, y1) = (s.y.saturating_sub(radius), (s.y + radius).min(map.height() - 1));
        for y in y0..=y1 {
            for x in x0..=x1 {
                let c = Coord::new(x, y);
                if map.is_traversable(c) {
                    covered.push(map.index(c));
                }
            }
        }
    }
    covered.sort_unstable();
    covered.dedup();
    covered
}

/// Audit a path against one attribute. `unfairness` is left unset.
pub fn path_audit(map: &CityMap, path: &Path, attribute: &str, sensor_radius: usize) -> Result<PathAudit> {
    path.check_on(map)?;
    let a = map.attribute_index(attribute)?;
    let covered = covered_cells(map, path.steps(), sensor_radius);
    Ok(audit_covered(map, a, &covered))
}

fn audit_covered(map: &CityMap, a: usize, covered: &[usize]) -> PathAudit {
    let attribute = &map.attributes()[a];
    let found = map.counts_over(a, covered);
    let city_totals = map.category_totals(a);
    PathAudit {
        attribute: attribute.name.clone(),
        categories: attribute.categories.clone(),
        found_total: found.iter().sum(),
        path_distribution: GroupDistribution::from_counts(&attribute.name, &found),
        city_distribution: GroupDistribution::from_counts(&attribute.name, &city_totals),
        utility: utilities(&found, &city_totals),
        found,
        unfairness: None,
    }
}

fn utilities(found: &[u64], totals: &[u64]) -> Vec<f64> {
    found
        .iter()
        .zip(totals)
        .map(|(&f, &t)| if t > 0 { f as f64 / t as f64 } else { 0.0 })
        .collect()
}

/// Unfairness of a path under a specification (smaller is fairer).
pub fn unfairness(map: &CityMap, path: &Path, spec: &FairnessSpec, sensor_radius: usize) -> Result<f64> {
    path.check_on(map)?;
    Ok(Scorer::new(map, spec, sensor_radius)?.score(path.steps()).unfairness)
}

/// Precomputed evaluator for one (map, spec, sensor radius) triple. This is
/// the single code path behind [`unfairness`], the planners and the oracle,
/// so objective values agree bit-for-bit everywhere.
#[derive(Debug, Clone)]
pub struct Scorer<'a> {
    map: &'a CityMap,
    spec: &'a FairnessSpec,
    attribute: usize,
    radius: usize,
    city_totals: Vec<u64>,
    // Target mass for distribution- or location-based kinds.
    target: Vec<f64>,
}

impl<'a> Scorer<'a> {
    pub fn new(map: &'a CityMap, spec: &'a FairnessSpec, sensor_radius: usize) -> Result<Self> {
        spec.validate(map)?;
        let attribute = spec.audit_attribute(map)?;
        let city_totals = map.category_totals(attribute);
        let target = match spec {
            FairnessSpec::DemographicParity { .. } => {
                GroupDistribution::<f64>::from_counts("", &city_totals).mass().to_vec()
            }
            FairnessSpec::AffirmativeAction { target, .. } | FairnessSpec::LocationTarget { target, .. } => {
                target.clone()
            }
            FairnessSpec::RawlsianGroups { .. } | FairnessSpec::RawlsianLocations { .. } => Vec::new(),
        };
        Ok(Scorer {
            map,
            spec,
            attribute,
            radius: sensor_radius,
            city_totals,
            target,
        })
    }

    pub fn map(&self) -> &'a CityMap {
        self.map
    }

    pub fn spec(&self) -> &'a FairnessSpec {
        self.spec
    }

    pub fn attribute(&self) -> usize {
        self.attribute
    }

    pub fn sensor_radius(&self) -> usize {
        self.radius
    }

    /// Target distribution of a distribution-based spec.
    pub fn target(&self) -> &[f64] {
        &self.target
    }

    pub fn covered(&self, steps: &[Coord]) -> Vec<usize> {
        covered_cells(self.map, steps, self.radius)
    }

    pub fn score(&self, steps: &[Coord]) -> Objectives<f64> {
        self.score_covered(&self.covered(steps), steps)
    }

    /// Objectives from a precomputed covered set. `steps` is only consulted
    /// by the location kinds.
    pub fn score_covered(&self, covered: &[usize], steps: &[Coord]) -> Objectives<f64> {
        let found = self.map.counts_over(self.attribute, covered);
        let efficiency = found.iter().sum();
        let unfairness = match self.spec {
            FairnessSpec::DemographicParity { .. } | FairnessSpec::AffirmativeAction { .. } => {
                distance_or_max(&counts_mass(&found), &self.target)
            }
            FairnessSpec::RawlsianGroups { .. } => {
                let worst = found
                    .iter()
                    .zip(&self.city_totals)
                    .filter(|(_, &t)| t > 0)
                    .map(|(&f, &t)| f as f64 / t as f64)
                    .fold(f64::INFINITY, f64::min);
                if worst.is_finite() {
                    0.0 - worst
                } else {
                    0.0
                }
            }
            FairnessSpec::RawlsianLocations { .. } => {
                let least = region_visits(self.map, steps).into_iter().min().unwrap_or(0);
                0.0 - least as f64
            }
            FairnessSpec::LocationTarget { .. } => {
                distance_or_max(&counts_mass(&region_visits(self.map, steps)), &self.target)
            }
        };
        Objectives { efficiency, unfairness }
    }

    pub fn audit(&self, steps: &[Coord]) -> PathAudit {
        let covered = self.covered(steps);
        let mut audit = audit_covered(self.map, self.attribute, &covered);
        audit.unfairness = Some(self.score_covered(&covered, steps).unfairness);
        audit
    }
}

/// Visits per region, counting every position of the tour except the final
/// return to base (a base-only tour visits the base once).
pub fn region_visits(map: &CityMap, steps: &[Coord]) -> Vec<u64> {
    let mut visits = vec![0u64; map.region_count()];
    let counted = if steps.len() > 1 { &steps[..steps.len() - 1] } else { steps };
    for &c in counted {
        if let Some(r) = map.region_of(c) {
            visits[r] += 1;
        }
    }
    visits
}

fn counts_mass(counts: &[u64]) -> Vec<f64> {
    GroupDistribution::<f64>::from_counts("", counts).mass().to_vec()
}

// Empty populations get the maximal distance so degenerate candidates still
// rank below everything else.
fn distance_or_max(p: &[f64], q: &[f64]) -> f64 {
    js_distance_slices(p, q).unwrap_or(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::citymap::{Attribute, Cell};
    use std::collections::BTreeMap;

    fn strip(counts: &[[u64; 2]]) -> CityMap {
        CityMap::new(
            counts.len(),
            1,
            counts
                .iter()
                .map(|c| Cell {
                    traversable: true,
                    counts: vec![c.to_vec()],
                })
                .collect(),
            Coord::new(0, 0),
            vec![Attribute::new("age", &["young", "old"])],
            None,
        )
        .unwrap()
    }

    fn tour(xs: &[usize]) -> Path {
        Path::new(xs.iter().map(|&x| Coord::new(x, 0)).collect())
    }

    #[test]
    fn base_only_radius_zero() {
        let map = strip(&[[3, 1], [5, 5]]);
        let audit = path_audit(&map, &tour(&[0]), "age", 0).unwrap();
        assert_eq!(audit.found_total, 4);
        assert_eq!(audit.found, vec![3, 1]);
        assert_eq!(audit.path_distribution.mass(), &[0.75, 0.25]);
        assert_eq!(audit.utility, vec![3.0 / 8.0, 1.0 / 6.0]);
        assert_eq!(audit.unfairness, None);
    }

    #[test]
    fn revisits_count_once() {
        let map = strip(&[[3, 1], [5, 5], [0, 2]]);
        let once = path_audit(&map, &tour(&[0, 1, 0]), "age", 0).unwrap();
        let many = path_audit(&map, &tour(&[0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0]), "age", 0).unwrap();
        assert_eq!(once, many);
    }

    #[test]
    fn sensor_radius_covers_neighbours() {
        let map = strip(&[[3, 1], [5, 5], [0, 2]]);
        let audit = path_audit(&map, &tour(&[0]), "age", 1).unwrap();
        assert_eq!(audit.found_total, 14);
        let all = path_audit(&map, &tour(&[0]), "age", 2).unwrap();
        assert_eq!(all.utility, vec![1.0, 1.0]);
        assert_eq!(all.path_distribution, all.city_distribution);
    }

    #[test]
    fn invalid_path_is_rejected() {
        let map = strip(&[[3, 1], [5, 5], [0, 2]]);
        assert!(path_audit(&map, &tour(&[0, 2, 0]), "age", 0).is_err());
        assert!(path_audit(&map, &tour(&[1, 0]), "age", 0).is_err());
    }

    #[test]
    fn unfairness_per_kind() {
        let map = strip(&[[4, 0], [0, 4]]);
        let full = tour(&[0, 1, 0]);
        let dp = FairnessSpec::demographic_parity("age");
        assert_eq!(unfairness(&map, &full, &dp, 0).unwrap(), 0.0);

        // Only young people found: [1, 0] against a balanced target.
        let aa = FairnessSpec::affirmative_action("age", vec![0.5, 0.5]);
        assert!((unfairness(&map, &tour(&[0]), &aa, 0).unwrap() - 0.5579).abs() < 1e-3);
        // Disjoint supports.
        let aa = FairnessSpec::affirmative_action("age", vec![0.0, 1.0]);
        assert!((unfairness(&map, &tour(&[0]), &aa, 0).unwrap() - 1.0).abs() < 1e-12);

        let rawls = FairnessSpec::RawlsianGroups { attribute: "age".into() };
        assert_eq!(unfairness(&map, &tour(&[0]), &rawls, 0).unwrap(), 0.0);
        assert_eq!(unfairness(&map, &full, &rawls, 0).unwrap(), -1.0);
    }

    #[test]
    fn empty_population_path_is_maximally_unfair() {
        let map = strip(&[[0, 0], [2, 3]]);
        let dp = FairnessSpec::demographic_parity("age");
        assert_eq!(unfairness(&map, &tour(&[0]), &dp, 0).unwrap(), 1.0);
    }

    #[test]
    fn location_kinds() {
        let cells = vec![Cell { traversable: true, counts: vec![vec![1, 1]] }; 16];
        let mut regions = BTreeMap::new();
        regions.insert("east".to_string(), (0..4).flat_map(|y| [Coord::new(2, y), Coord::new(3, y)]).collect());
        regions.insert("west".to_string(), (0..4).flat_map(|y| [Coord::new(0, y), Coord::new(1, y)]).collect());
        let map = CityMap::new(
            4,
            4,
            cells,
            Coord::new(1, 0),
            vec![Attribute::new("age", &["young", "old"])],
            Some(regions),
        )
        .unwrap();
        // west, east, east, west, (west: final return not counted)
        let path = Path::new(vec![
            Coord::new(1, 0),
            Coord::new(2, 0),
            Coord::new(2, 1),
            Coord::new(1, 1),
            Coord::new(1, 0),
        ]);
        assert_eq!(region_visits(&map, path.steps()), vec![2, 2]);
        let target = FairnessSpec::LocationTarget { attribute: None, target: vec![0.5, 0.5] };
        assert_eq!(unfairness(&map, &path, &target, 0).unwrap(), 0.0);
        let rawls = FairnessSpec::RawlsianLocations { attribute: None };
        assert_eq!(unfairness(&map, &path, &rawls, 0).unwrap(), -2.0);
        let base_only = Path::base_only(map.base());
        assert_eq!(unfairness(&map, &base_only, &rawls, 0).unwrap(), 0.0);
    }
}
