//! FIFO job dispatch with a bounded number of concurrent planner runs.

use crate::job::{JobStatus, PlanJob};
use crate::store::Store;
use chrono::Utc;
use fairnav_core::planner::FrontExport;
use fairnav_core::{evolve_pareto, refine, Front};
use std::sync::Arc;
use tokio::sync::{mpsc, Semaphore};

#[derive(Clone)]
pub struct Queue {
    tx: mpsc::UnboundedSender<String>,
}

impl Queue {
    /// Start the dispatcher. Must be called inside a tokio runtime.
    pub fn start(store: Arc<Store>, workers: usize) -> Self {
        let (tx, mut rx) = mpsc::unbounded_channel::<String>();
        let permits = Arc::new(Semaphore::new(workers.max(1)));
        tokio::spawn(async move {
            while let Some(id) = rx.recv().await {
                let permit = permits.clone().acquire_owned().await.expect("semaphore never closes");
                let store = store.clone();
                tokio::spawn(async move {
                    run(&store, &id).await;
                    drop(permit);
                });
            }
        });
        Queue { tx }
    }

    pub fn submit(&self, id: String) {
        // The dispatcher lives as long as the runtime.
        let _ = self.tx.send(id);
    }
}

async fn run(store: &Arc<Store>, id: &str) {
    let (store, id) = (store.clone(), id.to_string());
    let handle = {
        let (store, id) = (store.clone(), id.clone());
        tokio::task::spawn_blocking(move || execute(&store, &id))
    };
    if let Err(e) = handle.await {
        let message = format!("planner crashed: {e}");
        let failed = store.update_job(&id, |j| {
            j.status = JobStatus::Failed;
            j.error = Some(message);
            j.finished_at = Some(Utc::now());
        });
        if let Err(e) = failed {
            tracing::error!(job = id, "persisting job state: {e}");
        }
    }
}

fn execute(store: &Store, id: &str) {
    let Some(job) = store.job(id) else { return };
    if let Err(e) = store.set_status(id, JobStatus::Running) {
        tracing::error!(job = id, "persisting job state: {e}");
    }
    let outcome = plan(store, &job);
    let finished = store.update_job(id, |j| {
        j.finished_at = Some(Utc::now());
        match outcome {
            Ok(front) => {
                j.status = JobStatus::Done;
                j.result = Some(FrontExport::new(job.spec.clone(), job.params.clone(), front));
            }
            Err(message) => {
                j.status = JobStatus::Failed;
                j.error = Some(message);
            }
        }
    });
    if let Err(e) = finished {
        tracing::error!(job = id, "persisting job result: {e}");
    }
}

fn plan(store: &Store, job: &PlanJob) -> Result<Front, String> {
    let city = store
        .city(&job.city_id)
        .ok_or_else(|| format!("city `{}` is gone", job.city_id))?;
    let front = match &job.parent {
        None => evolve_pareto(&city.map, &job.spec, &job.params),
        Some(parent) => {
            let previous = store
                .job(parent)
                .and_then(|p| p.result)
                .ok_or_else(|| format!("parent job `{parent}` has no front"))?
                .front();
            refine(&city.map, &job.spec, &job.params, &job.waypoints, &previous)
        }
    };
    front.map_err(|e| e.to_string())
}
