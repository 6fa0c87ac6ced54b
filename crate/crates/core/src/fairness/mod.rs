//! Group distributions, Jensen-Shannon scoring and fairness specifications.
//!
//! A path is audited against one attribute at a time: the people it finds
//! (each counted once, however often their cell is revisited) form a group
//! distribution that is compared with the city-wide distribution or an
//! explicit target. Rawlsian kinds instead score the worst-off group or
//! region and are negated so that every spec is minimized.

mod audit;
mod distribution;
mod spec;

pub use audit::{covered_cells, path_audit, region_visits, unfairness, PathAudit, Scorer};
pub use distribution::{js_distance, GroupDistribution};
pub use spec::FairnessSpec;
