//! Pareto export (`fairnav-front/1`) and single-solution (`fairnav-solution/1`)
//! files.

use super::front::{ParetoFront, Solution};
use super::PlannerParams;
use crate::error::{Error, Result};
use crate::fairness::FairnessSpec;
use serde::{Deserialize, Serialize};

pub const FRONT_FORMAT: &str = "fairnav-front/1";
pub const SOLUTION_FORMAT: &str = "fairnav-solution/1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontExport {
    pub format: String,
    pub spec: FairnessSpec,
    pub params: PlannerParams,
    pub solutions: Vec<Solution<f64>>,
}

impl FrontExport {
    pub fn new(spec: FairnessSpec, params: PlannerParams, front: ParetoFront<f64>) -> Self {
        FrontExport {
            format: FRONT_FORMAT.to_string(),
            spec,
            params,
            solutions: front.into_solutions(),
        }
    }

    /// Solutions re-wrapped as a front (re-filtered, so hand-edited files
    /// cannot smuggle in dominated points).
    pub fn front(&self) -> ParetoFront<f64> {
        ParetoFront::from_candidates(self.solutions.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionExport {
    pub format: String,
    pub spec: FairnessSpec,
    pub params: PlannerParams,
    pub weight: f64,
    #[serde(flatten)]
    pub solution: Solution<f64>,
}

/// Either file kind, for tools that compare fronts against single plans.
#[derive(Debug, Clone, PartialEq)]
pub enum PlanFile {
    Front(FrontExport),
    Solution(SolutionExport),
}

impl PlanFile {
    pub fn spec(&self) -> &FairnessSpec {
        match self {
            PlanFile::Front(f) => &f.spec,
            PlanFile::Solution(s) => &s.spec,
        }
    }

    pub fn params(&self) -> &PlannerParams {
        match self {
            PlanFile::Front(f) => &f.params,
            PlanFile::Solution(s) => &s.params,
        }
    }

    pub fn front(&self) -> ParetoFront<f64> {
        match self {
            PlanFile::Front(f) => f.front(),
            PlanFile::Solution(s) => ParetoFront::from_candidates(vec![s.solution.clone()]),
        }
    }
}

/// Canonical bytes: compact JSON plus a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut bytes = serde_json::to_vec(value).expect("export types serialize");
    bytes.push(b'\n');
    bytes
}

pub fn load_plan_file(bytes: &[u8]) -> Result<PlanFile> {
    #[derive(Deserialize)]
    struct Probe {
        format: String,
    }
    let probe: Probe =
        serde_json::from_slice(bytes).map_err(|e| Error::parse("format", e.to_string()))?;
    let parse = |e: serde_path_to_error::Error<serde_json::Error>| {
        Error::parse(e.path().to_string(), e.into_inner().to_string())
    };
    match probe.format.as_str() {
        FRONT_FORMAT => serde_path_to_error::deserialize(&mut serde_json::Deserializer::from_slice(bytes))
            .map(PlanFile::Front)
            .map_err(parse),
        SOLUTION_FORMAT => serde_path_to_error::deserialize(&mut serde_json::Deserializer::from_slice(bytes))
            .map(PlanFile::Solution)
            .map_err(parse),
        other => Err(Error::parse("format", format!("unknown plan file format `{other}`"))),
    }
}
