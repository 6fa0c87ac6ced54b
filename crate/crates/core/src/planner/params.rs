use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Evolutionary planner configuration. Omitted JSON fields take the
/// defaults below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlannerParams {
    pub population_size: usize,
    pub generations: usize,
    pub mutation_rate: f64,
    pub crossover_rate: f64,
    pub seed: u64,
    /// Maximum number of moves of a closed tour.
    pub budget: usize,
    /// Chebyshev radius of the area sensed around each visited cell.
    pub sensor_radius: usize,
}

impl Default for PlannerParams {
    fn default() -> Self {
        PlannerParams {
            population_size: 128,
            generations: 300,
            mutation_rate: 0.4,
            crossover_rate: 0.8,
            seed: 0,
            budget: 40,
            sensor_radius: 0,
        }
    }
}

impl PlannerParams {
    pub fn with_budget(budget: usize, seed: u64) -> Self {
        PlannerParams {
            budget,
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.population_size < 4 || !self.population_size.is_multiple_of(2) {
            return Err(Error::Validation(format!(
                "population_size must be even and at least 4, got {}",
                self.population_size
            )));
        }
        for (name, rate) in [("mutation_rate", self.mutation_rate), ("crossover_rate", self.crossover_rate)] {
            if !(0.0..=1.0).contains(&rate) {
                return Err(Error::Validation(format!("{name} must lie in [0, 1], got {rate}")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_partial_json() {
        let p: PlannerParams = serde_json::from_str(r#"{"budget": 12, "seed": 7}"#).unwrap();
        assert_eq!(p, PlannerParams::with_budget(12, 7));
        assert!(p.validate().is_ok());
    }

    #[test]
    fn rejects_bad_values() {
        let odd = PlannerParams { population_size: 7, ..Default::default() };
        assert!(odd.validate().is_err());
        let tiny = PlannerParams { population_size: 2, ..Default::default() };
        assert!(tiny.validate().is_err());
        let rate = PlannerParams { mutation_rate: 1.5, ..Default::default() };
        assert!(rate.validate().is_err());
        assert!(serde_json::from_str::<PlannerParams>(r#"{"budgt": 3}"#).is_err());
    }
}
