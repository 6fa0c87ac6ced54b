//! Closed-tour planning under a move budget.
//!
//! * [`evolve_pareto`] / [`refine`]: NSGA-II over waypoint genomes.
//! * [`surrogate_plan`]: greedy orienteering on an additive per-cell
//!   surrogate of the fairness objective.
//! * [`oracle_pareto`]: exhaustive enumeration for instances up to 5x5
//!   with budget 12.
//! * [`hypervolume`]: front quality relative to a reference point.

mod decode;
mod export;
mod front;
mod grid;
mod nsga;
mod oracle;
mod params;
mod path;
mod surrogate;

pub use decode::check_waypoints;
pub use export::{
    load_plan_file, to_canonical_json, FrontExport, PlanFile, SolutionExport, FRONT_FORMAT, SOLUTION_FORMAT,
};
pub use front::{hypervolume, hypervolume_of, Objectives, ParetoFront, Solution};
pub use nsga::{evolve_pareto, refine};
pub use oracle::{oracle_pareto, ORACLE_MAX_BUDGET, ORACLE_MAX_SIDE};
pub use params::PlannerParams;
pub use path::Path;
pub use surrogate::{cell_rewards, surrogate_plan};
