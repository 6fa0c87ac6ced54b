//! HTTP front end for the fairnav planners.
//!
//! Cities are uploaded once, planning runs as asynchronous jobs on a
//! bounded FIFO worker pool, and every city and job is mirrored to a
//! single JSON file so finished fronts survive restarts.

mod api;
mod error;
mod job;
mod store;
mod worker;

pub use api::{routes, AppState, CityCreated, JobCreated, MAX_CITY_SIDE};
pub use error::ApiError;
pub use job::{JobStatus, PlanJob};
pub use store::{Store, StoreError};
pub use worker::Queue;

use axum::http::HeaderValue;
use axum::Router;
use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;
use tower_http::cors::{AllowOrigin, Any, CorsLayer};

#[derive(Debug, thiserror::Error)]
pub enum ServeError {
    #[error("invalid {var}: {message}")]
    Config { var: &'static str, message: String },
    #[error(transparent)]
    Store(#[from] StoreError),
    #[error("server i/o: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub port: u16,
    /// `None` keeps everything in memory.
    pub data_dir: Option<PathBuf>,
    pub workers: usize,
    /// Allowed browser origins; empty allows any.
    pub cors_origins: Vec<String>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            port: 8080,
            data_dir: Some(PathBuf::from("fairnav-data")),
            workers: 2,
            cors_origins: Vec::new(),
        }
    }
}

impl Config {
    /// Read `FAIRNAV_PORT`, `FAIRNAV_DATA_DIR`, `FAIRNAV_WORKERS` and
    /// `FAIRNAV_CORS_ORIGIN` (comma separated) over the defaults.
    pub fn from_env() -> Result<Self, ServeError> {
        Self::from_lookup(|k| std::env::var(k).ok())
    }

    pub fn from_lookup(var: impl Fn(&str) -> Option<String>) -> Result<Self, ServeError> {
        let mut config = Config::default();
        if let Some(port) = var("FAIRNAV_PORT") {
            config.port = port.parse().map_err(|e: std::num::ParseIntError| ServeError::Config {
                var: "FAIRNAV_PORT",
                message: e.to_string(),
            })?;
        }
        if let Some(dir) = var("FAIRNAV_DATA_DIR") {
            config.data_dir = Some(PathBuf::from(dir));
        }
        if let Some(workers) = var("FAIRNAV_WORKERS") {
            config.workers = match workers.parse::<usize>() {
                Ok(n) if n > 0 => n,
                _ => {
                    return Err(ServeError::Config {
                        var: "FAIRNAV_WORKERS",
                        message: format!("expected a positive integer, got `{workers}`"),
                    })
                }
            };
        }
        if let Some(origins) = var("FAIRNAV_CORS_ORIGIN") {
            config.cors_origins = origins
                .split(',')
                .map(str::trim)
                .filter(|o| !o.is_empty() && *o != "*")
                .map(String::from)
                .collect();
        }
        Ok(config)
    }
}

/// Open the store, resume unfinished jobs and build the router. Must be
/// called inside a tokio runtime.
pub fn app(config: &Config) -> Result<Router, ServeError> {
    let store = match &config.data_dir {
        Some(dir) => Store::open(dir)?,
        None => Store::in_memory(),
    };
    let store = Arc::new(store);
    let queue = Queue::start(store.clone(), config.workers);
    for job in store.unfinished_jobs() {
        store.set_status(&job.id, JobStatus::Queued)?;
        queue.submit(job.id);
    }
    Ok(routes(AppState { store, queue }).layer(cors(&config.cors_origins)?))
}

fn cors(origins: &[String]) -> Result<CorsLayer, ServeError> {
    let layer = CorsLayer::new().allow_methods(Any).allow_headers(Any);
    if origins.is_empty() {
        return Ok(layer.allow_origin(Any));
    }
    let values = origins
        .iter()
        .map(|o| {
            HeaderValue::from_str(o).map_err(|e| ServeError::Config {
                var: "FAIRNAV_CORS_ORIGIN",
                message: e.to_string(),
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(layer.allow_origin(AllowOrigin::list(values)))
}

/// Bind and serve until the process is stopped.
pub async fn serve(config: Config) -> Result<(), ServeError> {
    let router = app(&config)?;
    let addr = SocketAddr::from(([0, 0, 0, 0], config.port));
    let listener = tokio::net::TcpListener::bind(addr).await?;
    tracing::info!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router).await?;
    Ok(())
}
