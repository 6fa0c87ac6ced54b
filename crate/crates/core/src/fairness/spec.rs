use crate::citymap::CityMap;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

const TARGET_TOLERANCE: f64 = 1e-9;

/// Distributive-justice specification. Every kind is oriented so that
/// smaller unfairness is better.
///
/// Wire form: `{"kind": ..., "attribute": ..., "target": [...]}`. The
/// location kinds take an optional `attribute` that only selects which
/// head-counts measure efficiency (default: the map's first attribute);
/// `location_target` weights follow the map's region names in sorted order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FairnessSpec {
    /// Path distribution should equal the city-wide distribution.
    DemographicParity { attribute: String },
    /// Path distribution should equal an explicit target.
    AffirmativeAction { attribute: String, target: Vec<f64> },
    /// Maximize the smallest per-group fraction of people found.
    RawlsianGroups { attribute: String },
    /// Maximize the visit count of the least-visited region.
    RawlsianLocations {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        attribute: Option<String>,
    },
    /// Region visit shares should equal an explicit target.
    LocationTarget {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        attribute: Option<String>,
        target: Vec<f64>,
    },
}

impl FairnessSpec {
    pub fn demographic_parity(attribute: impl Into<String>) -> Self {
        FairnessSpec::DemographicParity {
            attribute: attribute.into(),
        }
    }

    pub fn affirmative_action(attribute: impl Into<String>, target: Vec<f64>) -> Self {
        FairnessSpec::AffirmativeAction {
            attribute: attribute.into(),
            target,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            FairnessSpec::DemographicParity { .. } => "demographic_parity",
            FairnessSpec::AffirmativeAction { .. } => "affirmative_action",
            FairnessSpec::RawlsianGroups { .. } => "rawlsian_groups",
            FairnessSpec::RawlsianLocations { .. } => "rawlsian_locations",
            FairnessSpec::LocationTarget { .. } => "location_target",
        }
    }

    /// Whether unfairness is a distance between group distributions.
    pub fn is_distribution_based(&self) -> bool {
        matches!(
            self,
            FairnessSpec::DemographicParity { .. } | FairnessSpec::AffirmativeAction { .. }
        )
    }

    pub fn is_location_based(&self) -> bool {
        matches!(
            self,
            FairnessSpec::RawlsianLocations { .. } | FairnessSpec::LocationTarget { .. }
        )
    }

    pub fn attribute(&self) -> Option<&str> {
        match self {
            FairnessSpec::DemographicParity { attribute }
            | FairnessSpec::AffirmativeAction { attribute, .. }
            | FairnessSpec::RawlsianGroups { attribute } => Some(attribute),
            FairnessSpec::RawlsianLocations { attribute }
            | FairnessSpec::LocationTarget { attribute, .. } => attribute.as_deref(),
        }
    }

    /// Index of the attribute whose head-counts are audited and counted as
    /// efficiency.
    pub fn audit_attribute(&self, map: &CityMap) -> Result<usize> {
        match self.attribute() {
            Some(name) => map
                .attribute_index(name)
                .map_err(|_| Error::SpecMismatch(format!("attribute `{name}` not declared in city"))),
            None if !map.attributes().is_empty() => Ok(0),
            None => Err(Error::SpecMismatch("city declares no attributes".into())),
        }
    }

    /// Check the spec's own invariants and its compatibility with `map`.
    pub fn validate(&self, map: &CityMap) -> Result<()> {
        let attribute = self.audit_attribute(map)?;
        match self {
            FairnessSpec::AffirmativeAction { target, .. } => {
                check_target(target)?;
                let expected = map.attributes()[attribute].len();
                if target.len() != expected {
                    return Err(Error::SpecMismatch(format!(
                        "target has {} entries, attribute `{}` has {expected} categories",
                        target.len(),
                        map.attributes()[attribute].name
                    )));
                }
            }
            FairnessSpec::RawlsianLocations { .. } => {
                if map.region_count() == 0 {
                    return Err(Error::SpecMismatch("city declares no regions".into()));
                }
            }
            FairnessSpec::LocationTarget { target, .. } => {
                check_target(target)?;
                if map.region_count() == 0 {
                    return Err(Error::SpecMismatch("city declares no regions".into()));
                }
                if target.len() != map.region_count() {
                    return Err(Error::SpecMismatch(format!(
                        "target has {} entries, city has {} regions",
                        target.len(),
                        map.region_count()
                    )));
                }
            }
            FairnessSpec::DemographicParity { .. } | FairnessSpec::RawlsianGroups { .. } => {}
        }
        Ok(())
    }
}

fn check_target(target: &[f64]) -> Result<()> {
    if target.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err(Error::Validation("target weights must be finite and non-negative".into()));
    }
    let sum: f64 = target.iter().sum();
    if (sum - 1.0).abs() > TARGET_TOLERANCE {
        return Err(Error::Validation(format!("target weights sum to {sum}, expected 1")));
    }
    Ok(())
}

impl fmt::Display for FairnessSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind_name())?;
        if let Some(a) = self.attribute() {
            write!(f, "({a})")?;
        }
        Ok(())
    }
}
