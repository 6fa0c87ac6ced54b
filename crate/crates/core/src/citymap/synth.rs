//! Synthetic biased-city generator.
//!
//! Each category's people are spread over the grid by one or more blobs.
//! A Gaussian blob weights every traversable cell by
//! `exp(-d² / (2·spread²))` around its center; a uniform blob weights all
//! traversable cells equally. A blob's total is apportioned exactly: every
//! cell first receives the floor of its expected count, and the leftover
//! people go to cells drawn (seeded, without replacement) with probability
//! proportional to the fractional parts.

use super::{Attribute, Cell, CityMap, Coord};
use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Footprint {
    Gaussian { center: Coord, spread: f64 },
    Uniform,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Blob {
    pub footprint: Footprint,
    pub total: u64,
}

impl Blob {
    pub fn gaussian(center: Coord, spread: f64, total: u64) -> Self {
        Blob {
            footprint: Footprint::Gaussian { center, spread },
            total,
        }
    }

    pub fn uniform(total: u64) -> Self {
        Blob {
            footprint: Footprint::Uniform,
            total,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticCategory {
    pub name: String,
    pub blobs: Vec<Blob>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticAttribute {
    pub name: String,
    pub categories: Vec<SyntheticCategory>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticCityParams {
    pub width: usize,
    pub height: usize,
    pub base: Coord,
    pub attributes: Vec<SyntheticAttribute>,
    #[serde(default)]
    pub blocked: Vec<Coord>,
}

impl SyntheticCityParams {
    /// Configured head-count of every category of attribute `a`.
    pub fn category_totals(&self, a: usize) -> Vec<u64> {
        self.attributes[a]
            .categories
            .iter()
            .map(|c| c.blobs.iter().map(|b| b.total).sum())
            .collect()
    }

    /// A random two-category city with a few blobs per category and some
    /// blocked cells, for fuzzing and oracle comparisons. The base is never
    /// blocked.
    pub fn random(width: usize, height: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let base = Coord::new(rng.random_range(0..width), rng.random_range(0..height));
        let area = (width * height) as u64;
        let random_category = |name: &str, rng: &mut ChaCha8Rng| {
            let blobs = (0..rng.random_range(1..=3))
                .map(|_| {
                    let center = Coord::new(rng.random_range(0..width), rng.random_range(0..height));
                    let spread = rng.random_range(0.3..(width.max(height) as f64 / 2.0).max(0.5));
                    Blob::gaussian(center, spread, rng.random_range(area..=10 * area))
                })
                .collect();
            SyntheticCategory {
                name: name.to_string(),
                blobs,
            }
        };
        let categories = vec![random_category("a", &mut rng), random_category("b", &mut rng)];
        let blocked = (0..width * height)
            .map(|i| Coord::new(i % width, i / width))
            .filter(|&c| c != base && rng.random_bool(0.12))
            .collect();
        SyntheticCityParams {
            width,
            height,
            base,
            attributes: vec![SyntheticAttribute {
                name: "group".to_string(),
                categories,
            }],
            blocked,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.width < 2 || self.height < 2 {
            return Err(Error::Validation(format!(
                "synthetic grid must be at least 2x2, got {}x{}",
                self.width, self.height
            )));
        }
        let in_bounds = |c: Coord| c.x < self.width && c.y < self.height;
        if !in_bounds(self.base) {
            return Err(Error::Validation(format!("base {} is out of bounds", self.base)));
        }
        if self.blocked.contains(&self.base) {
            return Err(Error::Validation(format!("base {} is blocked", self.base)));
        }
        for c in &self.blocked {
            if !in_bounds(*c) {
                return Err(Error::Validation(format!("blocked cell {c} is out of bounds")));
            }
        }
        for attribute in &self.attributes {
            for category in &attribute.categories {
                for blob in &category.blobs {
                    if let Footprint::Gaussian { center, spread } = blob.footprint {
                        if !in_bounds(center) {
                            return Err(Error::Validation(format!(
                                "blob center {center} of `{}/{}` is out of bounds",
                                attribute.name, category.name
                            )));
                        }
                        if !(spread >= 0.0 && spread.is_finite()) {
                            return Err(Error::Validation(format!(
                                "blob spread {spread} of `{}/{}` must be finite and non-negative",
                                attribute.name, category.name
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// Built-in parameter sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// Young people packed around the base, older people scattered and
    /// concentrated towards the far corner.
    BiasedAge,
    /// Four ethnicity groups with distinct, partially overlapping clusters.
    BiasedEthnicity,
    /// Every cell holds the same mix of young and old people.
    Uniform,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::BiasedAge, Preset::BiasedEthnicity, Preset::Uniform];

    pub fn name(self) -> &'static str {
        match self {
            Preset::BiasedAge => "biased-age",
            Preset::BiasedEthnicity => "biased-ethnicity",
            Preset::Uniform => "uniform",
        }
    }

    pub fn params(self, width: usize, height: usize) -> SyntheticCityParams {
        let base = Coord::new(width / 2, height / 2);
        let far_corner = [
            Coord::new(0, 0),
            Coord::new(width.saturating_sub(1), 0),
            Coord::new(0, height.saturating_sub(1)),
            Coord::new(width.saturating_sub(1), height.saturating_sub(1)),
        ]
        .into_iter()
        .max_by_key(|c| (c.manhattan(base), std::cmp::Reverse(*c)))
        .unwrap_or(base);
        let scale = width.max(height) as f64;
        let area = (width * height) as u64;
        let category = |name: &str, blobs: Vec<Blob>| SyntheticCategory {
            name: name.to_string(),
            blobs,
        };

        let attributes = match self {
            // Coprime totals (7A+1, 5A-1 share no factor for the usual
            // sizes), so only the full city can match the city-wide ratio.
            Preset::BiasedAge => vec![SyntheticAttribute {
                name: "age".to_string(),
                categories: vec![
                    category(
                        "young",
                        vec![Blob::gaussian(base, scale / 6.0, 6 * area + 1), Blob::uniform(area)],
                    ),
                    category(
                        "old",
                        vec![
                            Blob::gaussian(far_corner, scale / 3.0, 3 * area),
                            Blob::uniform(2 * area - 1),
                        ],
                    ),
                ],
            }],
            Preset::BiasedEthnicity => {
                let quarter = |fx: usize, fy: usize| {
                    Coord::new((width * fx / 4).min(width - 1), (height * fy / 4).min(height - 1))
                };
                vec![SyntheticAttribute {
                    name: "ethnicity".to_string(),
                    categories: vec![
                        category(
                            "white",
                            vec![Blob::gaussian(base, scale / 3.0, 6 * area + 1), Blob::uniform(area)],
                        ),
                        category("asian", vec![Blob::gaussian(quarter(1, 1), scale / 8.0, 2 * area - 1)]),
                        category(
                            "black",
                            vec![
                                Blob::gaussian(quarter(3, 3), scale / 6.0, 2 * area),
                                Blob::uniform(area / 4),
                            ],
                        ),
                        category("mixed", vec![Blob::uniform(area + 3)]),
                    ],
                }]
            }
            Preset::Uniform => vec![SyntheticAttribute {
                name: "age".to_string(),
                categories: vec![
                    category("young", vec![Blob::uniform(12 * area)]),
                    category("old", vec![Blob::uniform(8 * area)]),
                ],
            }],
        };

        SyntheticCityParams {
            width,
            height,
            base,
            attributes,
            blocked: Vec::new(),
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Validation(format!("unknown preset `{s}`")))
    }
}

/// Generate a city from blob parameters. Deterministic for a fixed seed.
pub fn generate_city(params: &SyntheticCityParams, seed: u64) -> Result<CityMap> {
    params.validate()?;
    let (width, height) = (params.width, params.height);
    let mut traversable = vec![true; width * height];
    for c in &params.blocked {
        traversable[c.y * width + c.x] = false;
    }
    let open: Vec<usize> = (0..width * height).filter(|&i| traversable[i]).collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cells: Vec<Cell> = traversable
        .iter()
        .map(|&t| Cell {
            traversable: t,
            counts: params
                .attributes
                .iter()
                .map(|a| vec![0; a.categories.len()])
                .collect(),
        })
        .collect();

    for (a, attribute) in params.attributes.iter().enumerate() {
        for (k, category) in attribute.categories.iter().enumerate() {
            for blob in &category.blobs {
                let weights: Vec<f64> = open
                    .iter()
                    .map(|&i| {
                        let c = Coord::new(i % width, i / width);
                        blob_weight(&blob.footprint, c)
                    })
                    .collect();
                for (slot, n) in apportion(blob.total, &weights, &mut rng).into_iter().enumerate() {
                    cells[open[slot]].counts[a][k] += n;
                }
            }
        }
    }

    let attributes = params
        .attributes
        .iter()
        .map(|a| Attribute {
            name: a.name.clone(),
            categories: a.categories.iter().map(|c| c.name.clone()).collect(),
        })
        .collect();
    CityMap::new(width, height, cells, params.base, attributes, None)
}

fn blob_weight(footprint: &Footprint, c: Coord) -> f64 {
    match *footprint {
        Footprint::Uniform => 1.0,
        Footprint::Gaussian { center, spread } => {
            let dx = c.x as f64 - center.x as f64;
            let dy = c.y as f64 - center.y as f64;
            let d2 = dx * dx + dy * dy;
            if spread == 0.0 {
                if d2 == 0.0 {
                    1.0
                } else {
                    0.0
                }
            } else {
                (-d2 / (2.0 * spread * spread)).exp()
            }
        }
    }
}

/// Split `total` into integer parts proportional to `weights`, exactly.
fn apportion(total: u64, weights: &[f64], rng: &mut impl Rng) -> Vec<u64> {
    let mut parts = vec![0u64; weights.len()];
    let sum: f64 = weights.iter().sum();
    if total == 0 || weights.is_empty() {
        return parts;
    }
    if sum.is_nan() || sum <= 0.0 {
        // Blob falls entirely on blocked cells (point blob on an obstacle):
        // spread uniformly instead.
        return apportion(total, &vec![1.0; weights.len()], rng);
    }
    let mut assigned = 0u64;
    let mut fractions = Vec::with_capacity(weights.len());
    for (part, &w) in parts.iter_mut().zip(weights) {
        let expected = total as f64 * w / sum;
        let floor = expected.floor();
        *part = floor as u64;
        assigned += *part;
        fractions.push(expected - floor);
    }
    let remainder = total.saturating_sub(assigned) as usize;
    if remainder > 0 {
        // Weighted sampling without replacement (Efraimidis-Spirakis keys).
        let mut keys: Vec<(f64, usize)> = fractions
            .iter()
            .enumerate()
            .map(|(i, &f)| {
                let u: f64 = rng.random();
                let key = if f > 0.0 { u.powf(1.0 / f) } else { -1.0 + u * 1e-3 };
                (key, i)
            })
            .collect();
        keys.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        for &(_, i) in keys.iter().take(remainder) {
            parts[i] += 1;
        }
        // Rounding cannot leave more than one unit per cell, but guard the
        // degenerate case where floats undershoot by more.
        let short = remainder.saturating_sub(keys.len()) as u64;
        parts[0] += short;
    }
    parts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::citymap::city_distribution;
    use crate::fairness::{js_distance, GroupDistribution};

    fn window_distribution(map: &CityMap, a: usize, x0: usize, y0: usize) -> GroupDistribution<f64> {
        let idx: Vec<usize> = (y0..y0 + 5)
            .flat_map(|y| (x0..x0 + 5).map(move |x| (x, y)))
            .map(|(x, y)| map.index(Coord::new(x, y)))
            .collect();
        GroupDistribution::from_counts(&map.attributes()[a].name, &map.counts_over(a, &idx))
    }

    #[test]
    fn totals_match_configuration() {
        for preset in Preset::ALL {
            let params = preset.params(16, 16);
            let map = generate_city(&params, 11).unwrap();
            for a in 0..params.attributes.len() {
                assert_eq!(map.category_totals(a), params.category_totals(a), "{preset:?}");
            }
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let params = Preset::BiasedAge.params(16, 16);
        assert_eq!(generate_city(&params, 3).unwrap(), generate_city(&params, 3).unwrap());
    }

    #[test]
    fn biased_age_concentrates_young_near_base() {
        let params = Preset::BiasedAge.params(16, 16);
        let map = generate_city(&params, 1).unwrap();
        let city: GroupDistribution<f64> = city_distribution(&map, "age").unwrap();
        let base = map.base();
        let near = window_distribution(&map, 0, base.x - 2, base.y - 2);
        assert!(near.mass()[0] > city.mass()[0]);
    }

    #[test]
    fn uniform_windows_match_city() {
        let map = generate_city(&Preset::Uniform.params(16, 16), 5).unwrap();
        let city: GroupDistribution<f64> = city_distribution(&map, "age").unwrap();
        for y0 in 0..=11 {
            for x0 in 0..=11 {
                let w = window_distribution(&map, 0, x0, y0);
                assert!(js_distance(&w, &city).unwrap() <= 0.05);
            }
        }
    }

    #[test]
    fn rejects_bad_params() {
        let mut params = Preset::BiasedAge.params(16, 16);
        params.attributes[0].categories[0].blobs[0] = Blob::gaussian(Coord::new(16, 0), 1.0, 10);
        assert!(matches!(generate_city(&params, 0), Err(Error::Validation(_))));
        let params = Preset::Uniform.params(1, 4);
        assert!(matches!(generate_city(&params, 0), Err(Error::Validation(_))));
    }

    #[test]
    fn random_params_are_valid() {
        for seed in 0..20 {
            let map = generate_city(&SyntheticCityParams::random(4, 4, seed), seed).unwrap();
            assert!(map.is_traversable(map.base()));
        }
    }

    #[test]
    fn preset_names_parse() {
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
        assert!("nope".parse::<Preset>().is_err());
    }
}
