mod common;

use common::{found_counts, js_reference};
use fairnav_core::fairness::GroupDistribution;
use fairnav_core::{
    generate_city, js_distance, path_audit, unfairness, Attribute, Cell, CityMap, Coord, Distribution, FairnessSpec,
    Path, Preset,
};
use proptest::prelude::*;

fn dist(mass: Vec<f64>) -> Distribution {
    GroupDistribution::new("g", mass).unwrap()
}

fn simplex(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0u32..1000, len)
        .prop_filter("non-zero", |v| v.iter().any(|&x| x > 0))
        .prop_map(|v| {
            let s: u32 = v.iter().sum();
            v.into_iter().map(|x| x as f64 / s as f64).collect()
        })
}

#[test]
fn js_examples() {
    assert!((js_distance(&dist(vec![0.5, 0.5]), &dist(vec![1.0, 0.0])).unwrap() - 0.5579).abs() < 1e-4);
    assert!((js_distance(&dist(vec![1.0, 0.0]), &dist(vec![0.0, 1.0])).unwrap() - 1.0).abs() < 1e-12);
    assert_eq!(js_distance(&dist(vec![0.3, 0.7]), &dist(vec![0.3, 0.7])).unwrap(), 0.0);
}

#[test]
fn js_rejects_bad_inputs() {
    assert!(js_distance(&dist(vec![0.5, 0.5]), &dist(vec![0.2, 0.3, 0.5])).is_err());
    assert!(js_distance(&dist(vec![0.0, 0.0]), &dist(vec![0.5, 0.5])).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn js_matches_reference(p in simplex(4), q in simplex(4)) {
        let d = js_distance(&dist(p.clone()), &dist(q.clone())).unwrap();
        prop_assert!((d - js_reference(&p, &q)).abs() < 1e-9);
        prop_assert!((0.0..=1.0).contains(&d));
    }

    #[test]
    fn js_triangle(p in simplex(3), q in simplex(3), r in simplex(3)) {
        let d = |a: &Vec<f64>, b: &Vec<f64>| js_distance(&dist(a.clone()), &dist(b.clone())).unwrap();
        prop_assert!(d(&p, &r) <= d(&p, &q) + d(&q, &r) + 1e-9);
    }
}

fn scaled(map: &CityMap, k: u64) -> CityMap {
    let cells = map
        .cells()
        .iter()
        .map(|c| Cell {
            traversable: c.traversable,
            counts: c.counts.iter().map(|v| v.iter().map(|n| n * k).collect()).collect(),
        })
        .collect();
    CityMap::new(map.width(), map.height(), cells, map.base(), map.attributes().to_vec(), None).unwrap()
}

fn east_loop(map: &CityMap, reach: usize) -> Path {
    let b = map.base();
    let mut steps: Vec<Coord> = (0..=reach).map(|d| Coord::new(b.x + d, b.y)).collect();
    steps.extend((0..reach).rev().map(|d| Coord::new(b.x + d, b.y)));
    Path::new(steps)
}

#[test]
fn demographic_parity_is_scale_invariant() {
    let map = generate_city(&Preset::BiasedAge.params(8, 8), 2).unwrap();
    let spec = FairnessSpec::demographic_parity("age");
    let path = east_loop(&map, 3);
    let u1 = unfairness(&map, &path, &spec, 0).unwrap();
    for k in [2, 7, 100] {
        let uk = unfairness(&scaled(&map, k), &path, &spec, 0).unwrap();
        assert!((u1 - uk).abs() < 1e-12, "k={k}: {u1} vs {uk}");
    }
}

#[test]
fn rawlsian_groups_never_worsens_when_extending() {
    let map = generate_city(&Preset::BiasedAge.params(8, 8), 5).unwrap();
    let spec = FairnessSpec::RawlsianGroups { attribute: "age".into() };
    let mut last = f64::INFINITY;
    for reach in 0..4 {
        let u = unfairness(&map, &east_loop(&map, reach), &spec, 0).unwrap();
        assert!(u <= last + 1e-12);
        last = u;
    }
}

fn uniform_two_by_two() -> CityMap {
    let cells = (0..4)
        .map(|_| Cell {
            traversable: true,
            counts: vec![vec![1, 1]],
        })
        .collect();
    CityMap::new(2, 2, cells, Coord::new(0, 0), vec![Attribute::new("g", &["a", "b"])], None).unwrap()
}

#[test]
fn revisits_count_once() {
    let map = uniform_two_by_two();
    let there_and_back = Path::new(vec![Coord::new(0, 0), Coord::new(1, 0), Coord::new(0, 0)]);
    let twice = Path::new(vec![
        Coord::new(0, 0),
        Coord::new(1, 0),
        Coord::new(0, 0),
        Coord::new(1, 0),
        Coord::new(0, 0),
    ]);
    let a = path_audit(&map, &there_and_back, "g", 0).unwrap();
    let b = path_audit(&map, &twice, "g", 0).unwrap();
    assert_eq!(a.found_total, 4);
    assert_eq!(a.found, b.found);
}

#[test]
fn sensor_radius_widens_coverage() {
    let map = uniform_two_by_two();
    let audit = path_audit(&map, &Path::base_only(map.base()), "g", 1).unwrap();
    assert_eq!(audit.found_total, 8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn found_counts_are_distinct_people(seed in any::<u64>(), walk in prop::collection::vec(0usize..4, 0..12)) {
        let params = fairnav_core::citymap::SyntheticCityParams::random(5, 5, seed);
        let map = generate_city(&params, seed).unwrap();
        // random walk, then retrace it back to base
        let mut steps = vec![map.base()];
        for d in walk {
            let cur = *steps.last().unwrap();
            if let Some(n) = map.neighbors(cur).filter(|n| map.is_traversable(*n)).nth(d) {
                steps.push(n);
            }
        }
        let back: Vec<Coord> = steps.iter().rev().skip(1).copied().collect();
        steps.extend(back);
        let audit = path_audit(&map, &Path::new(steps.clone()), "group", 0).unwrap();
        let expected = found_counts(&map, 0, &steps);
        prop_assert_eq!(&audit.found, &expected);
        prop_assert!(audit.found_total <= map.population(0));
    }
}
