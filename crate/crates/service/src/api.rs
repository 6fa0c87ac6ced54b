use crate::error::ApiError;
use crate::job::{JobStatus, PlanJob};
use crate::store::{Store, StoredCity};
use crate::worker::Queue;
use axum::body::Bytes;
use axum::extract::{DefaultBodyLimit, Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use fairnav_core::fairness::Scorer;
use fairnav_core::planner::check_waypoints;
use fairnav_core::{city_distribution, load_city, Coord, Distribution, FairnessSpec, PathAudit, PlannerParams};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Largest accepted city side.
pub const MAX_CITY_SIDE: u64 = 512;
const MAX_BODY_BYTES: usize = 512 * 1024 * 1024;

#[derive(Clone)]
pub struct AppState {
    pub store: Arc<Store>,
    pub queue: Queue,
}

pub fn routes(state: AppState) -> Router {
    Router::new()
        .route("/healthz", get(healthz))
        .route("/cities", post(create_city))
        .route("/cities/{id}", get(get_city))
        .route("/cities/{id}/distribution", get(get_distribution))
        .route("/plans", post(create_plan))
        .route("/plans/{id}", get(get_plan))
        .route("/plans/{id}/solutions/{k}/audit", get(get_audit))
        .route("/plans/{id}/refine", post(refine_plan))
        .layer(DefaultBodyLimit::max(MAX_BODY_BYTES))
        .with_state(state)
}

fn parse_body<T: DeserializeOwned>(bytes: &[u8]) -> Result<T, ApiError> {
    serde_path_to_error::deserialize(&mut serde_json::Deserializer::from_slice(bytes)).map_err(ApiError::body_parse)
}

fn json_bytes(status: StatusCode, bytes: Vec<u8>) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], bytes).into_response()
}

fn store_err(e: crate::store::StoreError) -> ApiError {
    ApiError::internal(e)
}

async fn healthz() -> Json<serde_json::Value> {
    Json(serde_json::json!({ "status": "ok" }))
}

#[derive(Serialize, Deserialize)]
pub struct CityCreated {
    pub city_id: String,
}

#[derive(Serialize, Deserialize)]
pub struct JobCreated {
    pub job_id: String,
}

async fn create_city(State(state): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    #[derive(Deserialize)]
    struct Dims {
        width: u64,
        height: u64,
    }
    if let Ok(d) = serde_json::from_slice::<Dims>(&body) {
        if d.width > MAX_CITY_SIDE || d.height > MAX_CITY_SIDE {
            return Err(ApiError::new(
                StatusCode::PAYLOAD_TOO_LARGE,
                format!(
                    "city is {}x{}, the limit is {MAX_CITY_SIDE}x{MAX_CITY_SIDE}",
                    d.width, d.height
                ),
            ));
        }
    }
    let map = load_city(&body).map_err(|e| ApiError::from_core(e, StatusCode::BAD_REQUEST))?;
    let id = uuid::Uuid::new_v4().simple().to_string();
    let store = state.store.clone();
    let city_id = id.clone();
    tokio::task::spawn_blocking(move || store.insert_city(city_id, map))
        .await
        .map_err(ApiError::internal)?
        .map_err(store_err)?;
    Ok((StatusCode::CREATED, Json(CityCreated { city_id: id })).into_response())
}

fn city(state: &AppState, id: &str) -> Result<StoredCity, ApiError> {
    state.store.city(id).ok_or_else(|| ApiError::not_found("city", id))
}

fn job(state: &AppState, id: &str) -> Result<PlanJob, ApiError> {
    state.store.job(id).ok_or_else(|| ApiError::not_found("job", id))
}

async fn get_city(State(state): State<AppState>, Path(id): Path<String>) -> Result<Response, ApiError> {
    let c = city(&state, &id)?;
    Ok(json_bytes(StatusCode::OK, c.bytes.to_vec()))
}

#[derive(Deserialize)]
struct DistributionQuery {
    attribute: Option<String>,
}

async fn get_distribution(
    State(state): State<AppState>,
    Path(id): Path<String>,
    Query(q): Query<DistributionQuery>,
) -> Result<Json<Distribution>, ApiError> {
    let c = city(&state, &id)?;
    let attribute = match q.attribute {
        Some(a) => a,
        None => c.map.attributes()[0].name.clone(),
    };
    city_distribution(&c.map, &attribute)
        .map(Json)
        .map_err(|e| ApiError::from_core(e, StatusCode::UNPROCESSABLE_ENTITY))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PlanRequest {
    city_id: String,
    spec: FairnessSpec,
    #[serde(default)]
    params: PlannerParams,
}

async fn submit(state: &AppState, job: PlanJob) -> Result<Response, ApiError> {
    let id = job.id.clone();
    let store = state.store.clone();
    tokio::task::spawn_blocking(move || store.insert_job(job))
        .await
        .map_err(ApiError::internal)?
        .map_err(store_err)?;
    state.queue.submit(id.clone());
    Ok((StatusCode::ACCEPTED, Json(JobCreated { job_id: id })).into_response())
}

async fn create_plan(State(state): State<AppState>, body: Bytes) -> Result<Response, ApiError> {
    let req: PlanRequest = parse_body(&body)?;
    let c = city(&state, &req.city_id)?;
    req.params
        .validate()
        .map_err(|e| ApiError::from_core(e, StatusCode::BAD_REQUEST))?;
    req.spec
        .validate(&c.map)
        .map_err(|e| ApiError::from_core(e, StatusCode::UNPROCESSABLE_ENTITY))?;
    submit(&state, PlanJob::new(req.city_id, req.spec, req.params)).await
}

async fn get_plan(State(state): State<AppState>, Path(id): Path<String>) -> Result<Json<PlanJob>, ApiError> {
    job(&state, &id).map(Json)
}

fn require_done(job: &PlanJob) -> Result<(), ApiError> {
    if job.status == JobStatus::Done {
        Ok(())
    } else {
        Err(ApiError::new(
            StatusCode::CONFLICT,
            format!("job `{}` is {:?}, not done", job.id, job.status).to_lowercase(),
        ))
    }
}

async fn get_audit(
    State(state): State<AppState>,
    Path((id, k)): Path<(String, usize)>,
) -> Result<Json<PathAudit>, ApiError> {
    let job = job(&state, &id)?;
    require_done(&job)?;
    let front = job.result.as_ref().expect("done jobs carry a result");
    let solution = front.solutions.get(k).ok_or_else(|| {
        ApiError::new(
            StatusCode::NOT_FOUND,
            format!("job `{id}` has {} solutions, no index {k}", front.solutions.len()),
        )
    })?;
    let c = city(&state, &job.city_id)?;
    let scorer = Scorer::new(&c.map, &job.spec, job.params.sensor_radius)
        .map_err(|e| ApiError::from_core(e, StatusCode::UNPROCESSABLE_ENTITY))?;
    Ok(Json(scorer.audit(solution.path.steps())))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RefineRequest {
    #[serde(default)]
    waypoints: Vec<Coord>,
}

async fn refine_plan(
    State(state): State<AppState>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Response, ApiError> {
    let req: RefineRequest = parse_body(&body)?;
    let parent = job(&state, &id)?;
    require_done(&parent)?;
    let c = city(&state, &parent.city_id)?;
    check_waypoints(&c.map, parent.params.budget, &req.waypoints)
        .map_err(|e| ApiError::from_core(e, StatusCode::UNPROCESSABLE_ENTITY))?;
    let mut child = PlanJob::new(parent.city_id.clone(), parent.spec.clone(), parent.params.clone());
    child.parent = Some(parent.id);
    child.waypoints = req.waypoints;
    submit(&state, child).await
}
