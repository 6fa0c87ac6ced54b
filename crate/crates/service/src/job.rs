use chrono::{DateTime, Utc};
use fairnav_core::planner::FrontExport;
use fairnav_core::{Coord, FairnessSpec, PlannerParams};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JobStatus {
    Queued,
    Running,
    Done,
    Failed,
}

impl JobStatus {
    pub fn is_finished(self) -> bool {
        matches!(self, JobStatus::Done | JobStatus::Failed)
    }
}

/// One asynchronous planning run. `result` is present iff `status` is
/// `done`, `error` iff `failed`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanJob {
    pub id: String,
    pub city_id: String,
    pub spec: FairnessSpec,
    pub params: PlannerParams,
    pub status: JobStatus,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<FrontExport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub created_at: DateTime<Utc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finished_at: Option<DateTime<Utc>>,
    /// Set on refinement jobs: the job whose front seeds this one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parent: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub waypoints: Vec<Coord>,
}

impl PlanJob {
    pub fn new(city_id: String, spec: FairnessSpec, params: PlannerParams) -> Self {
        PlanJob {
            id: uuid::Uuid::new_v4().simple().to_string(),
            city_id,
            spec,
            params,
            status: JobStatus::Queued,
            result: None,
            error: None,
            created_at: Utc::now(),
            finished_at: None,
            parent: None,
            waypoints: Vec::new(),
        }
    }
}
