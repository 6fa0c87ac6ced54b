use fairnav_core::citymap::SyntheticCityParams;
use fairnav_core::{city_distribution, generate_city, load_city, save_city, Distribution, ErrorKind, Preset};
use proptest::prelude::*;

#[test]
fn round_trip_16x16() {
    for preset in [Preset::BiasedAge, Preset::BiasedEthnicity, Preset::Uniform] {
        let city = generate_city(&preset.params(16, 16), 3).unwrap();
        let bytes = save_city(&city);
        assert_eq!(load_city(&bytes).unwrap(), city);
        assert_eq!(save_city(&load_city(&bytes).unwrap()), bytes);
    }
}

#[test]
fn biased_age_distribution_matches_generator_totals() {
    let params = Preset::BiasedAge.params(16, 16);
    let city = generate_city(&params, 0).unwrap();
    let totals = params.category_totals(0);
    let sum: u64 = totals.iter().sum();
    let dist: Distribution = city_distribution(&city, "age").unwrap();
    for (m, t) in dist.mass().iter().zip(&totals) {
        assert!((m - *t as f64 / sum as f64).abs() < 1e-9);
    }
}

#[test]
fn parse_errors_name_the_field() {
    let city = generate_city(&Preset::Uniform.params(3, 3), 0).unwrap();
    let mut json: serde_json::Value = serde_json::from_slice(&save_city(&city)).unwrap();
    json["cells"][4]["traversable"] = serde_json::json!("yes");
    let err = load_city(&serde_json::to_vec(&json).unwrap()).unwrap_err();
    assert_eq!(err.kind(), ErrorKind::Validation);
    assert!(err.to_string().contains("cells[4].traversable"), "{err}");
}

#[test]
fn unknown_attribute_is_rejected() {
    let city = generate_city(&Preset::Uniform.params(3, 3), 0).unwrap();
    assert!(city_distribution::<f64>(&city, "income").is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distributions_sum_to_one(w in 2usize..9, h in 2usize..9, seed in any::<u64>()) {
        let city = generate_city(&SyntheticCityParams::random(w, h, seed), seed).unwrap();
        let dist: Distribution = city_distribution(&city, "group").unwrap();
        let sum: f64 = dist.mass().iter().sum();
        prop_assert!((sum - 1.0).abs() < 1e-9);
        prop_assert!(dist.mass().iter().all(|m| (0.0..=1.0).contains(m)));
    }

    #[test]
    fn generated_totals_are_exact(w in 2usize..9, h in 2usize..9, seed in any::<u64>()) {
        let params = SyntheticCityParams::random(w, h, seed);
        let city = generate_city(&params, seed).unwrap();
        prop_assert_eq!(city.category_totals(0), params.category_totals(0));
    }
}
