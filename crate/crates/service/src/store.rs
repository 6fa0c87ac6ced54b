//! In-memory state mirrored to a single JSON file.
//!
//! Every mutation rewrites the whole file through a temporary sibling and
//! a rename, so the file on disk is always a complete snapshot.

use crate::job::{JobStatus, PlanJob};
use fairnav_core::{load_city, save_city, CityMap};
use serde::{Deserialize, Serialize};
use serde_json::value::RawValue;
use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, RwLock};

const STORE_FORMAT: &str = "fairnav-store/1";
const STORE_FILE: &str = "store.json";

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("store i/o: {0}")]
    Io(#[from] io::Error),
    #[error("corrupt store file {path}: {message}")]
    Corrupt { path: PathBuf, message: String },
}

#[derive(Clone)]
pub struct StoredCity {
    pub map: Arc<CityMap>,
    /// Canonical city-file bytes.
    pub bytes: Arc<[u8]>,
}

#[derive(Default)]
struct Inner {
    cities: BTreeMap<String, StoredCity>,
    jobs: BTreeMap<String, PlanJob>,
}

pub struct Store {
    path: Option<PathBuf>,
    inner: RwLock<Inner>,
    write: Mutex<()>,
}

#[derive(Serialize)]
struct FileOut<'a> {
    format: &'a str,
    cities: BTreeMap<&'a str, &'a RawValue>,
    jobs: &'a BTreeMap<String, PlanJob>,
}

#[derive(Deserialize)]
struct FileIn {
    format: String,
    cities: BTreeMap<String, Box<RawValue>>,
    jobs: BTreeMap<String, PlanJob>,
}

impl Store {
    pub fn in_memory() -> Self {
        Store {
            path: None,
            inner: RwLock::default(),
            write: Mutex::new(()),
        }
    }

    /// Open (or create) the store in `dir`.
    pub fn open(dir: &Path) -> Result<Self, StoreError> {
        fs::create_dir_all(dir)?;
        let path = dir.join(STORE_FILE);
        let mut inner = Inner::default();
        match fs::read(&path) {
            Ok(bytes) => {
                let corrupt = |message: String| StoreError::Corrupt {
                    path: path.clone(),
                    message,
                };
                let file: FileIn = serde_json::from_slice(&bytes).map_err(|e| corrupt(e.to_string()))?;
                if file.format != STORE_FORMAT {
                    return Err(corrupt(format!("unknown format `{}`", file.format)));
                }
                for (id, raw) in file.cities {
                    let map = load_city(raw.get().as_bytes()).map_err(|e| corrupt(format!("city {id}: {e}")))?;
                    let bytes = save_city(&map).into();
                    inner.cities.insert(id, StoredCity { map: Arc::new(map), bytes });
                }
                inner.jobs = file.jobs;
            }
            Err(e) if e.kind() == io::ErrorKind::NotFound => {}
            Err(e) => return Err(e.into()),
        }
        Ok(Store {
            path: Some(path),
            inner: RwLock::new(inner),
            write: Mutex::new(()),
        })
    }

    pub fn city(&self, id: &str) -> Option<StoredCity> {
        self.inner.read().unwrap().cities.get(id).cloned()
    }

    pub fn job(&self, id: &str) -> Option<PlanJob> {
        self.inner.read().unwrap().jobs.get(id).cloned()
    }

    /// Jobs that were queued or running, oldest first.
    pub fn unfinished_jobs(&self) -> Vec<PlanJob> {
        let mut jobs: Vec<PlanJob> = self
            .inner
            .read()
            .unwrap()
            .jobs
            .values()
            .filter(|j| !j.status.is_finished())
            .cloned()
            .collect();
        jobs.sort_by(|a, b| a.created_at.cmp(&b.created_at).then_with(|| a.id.cmp(&b.id)));
        jobs
    }

    pub fn insert_city(&self, id: String, map: CityMap) -> Result<(), StoreError> {
        let bytes = save_city(&map).into();
        self.mutate(|inner| {
            inner.cities.insert(id, StoredCity { map: Arc::new(map), bytes });
        })
    }

    pub fn insert_job(&self, job: PlanJob) -> Result<(), StoreError> {
        self.mutate(|inner| {
            inner.jobs.insert(job.id.clone(), job);
        })
    }

    /// Apply `f` to a stored job and persist. Returns false if the id is
    /// unknown.
    pub fn update_job(&self, id: &str, f: impl FnOnce(&mut PlanJob)) -> Result<bool, StoreError> {
        let mut found = false;
        self.mutate(|inner| {
            if let Some(job) = inner.jobs.get_mut(id) {
                f(job);
                found = true;
            }
        })?;
        Ok(found)
    }

    pub fn set_status(&self, id: &str, status: JobStatus) -> Result<bool, StoreError> {
        self.update_job(id, |job| job.status = status)
    }

    fn mutate(&self, f: impl FnOnce(&mut Inner)) -> Result<(), StoreError> {
        let _guard = self.write.lock().unwrap();
        f(&mut self.inner.write().unwrap());
        let Some(path) = &self.path else {
            return Ok(());
        };
        let bytes = {
            let inner = self.inner.read().unwrap();
            let raws: Vec<(&str, Box<RawValue>)> = inner
                .cities
                .iter()
                .map(|(id, c)| {
                    let text = std::str::from_utf8(&c.bytes).expect("city files are utf-8").trim_end();
                    (id.as_str(), RawValue::from_string(text.to_string()).expect("city files are json"))
                })
                .collect();
            let file = FileOut {
                format: STORE_FORMAT,
                cities: raws.iter().map(|(id, raw)| (*id, raw.as_ref())).collect(),
                jobs: &inner.jobs,
            };
            serde_json::to_vec(&file).expect("store serializes")
        };
        write_atomic(path, &bytes)?;
        Ok(())
    }
}

fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let tmp = path.with_extension("json.tmp");
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}
