//! Fairness-aware budgeted tour planning over demographic grid maps.
//!
//! A robot leaves a base station, visits grid cells and must be back
//! within a move budget. Every cell holds head-counts of people per
//! protected-characteristic category. The planner trades off efficiency
//! (distinct people found) against unfairness (how far the people found
//! are from a fair group or location distribution) and returns the
//! Pareto front of that trade-off.
//!
//! The distribution, distance and front arithmetic is generic over
//! [`Scalar`]; the aliases below fix the `f64` instantiation used by the
//! planners and file formats.

pub mod citymap;
pub mod error;
pub mod fairness;
pub mod planner;
pub mod scalar;

pub use citymap::{city_distribution, generate_city, load_city, save_city, Attribute, Cell, CityMap, Coord, Preset};
pub use error::{Error, ErrorKind, Result};
pub use fairness::{js_distance, path_audit, unfairness, FairnessSpec, PathAudit};
pub use planner::{
    evolve_pareto, hypervolume, oracle_pareto, refine, surrogate_plan, Path, PlannerParams,
};
pub use scalar::Scalar;

/// Group distribution in double precision.
pub type Distribution = fairness::GroupDistribution<f64>;
/// Pareto front as produced by the planners.
pub type Front = planner::ParetoFront<f64>;
/// One planned tour with its objective values.
pub type PlanSolution = planner::Solution<f64>;
/// Objective pair in double precision.
pub type Objectives = planner::Objectives<f64>;
