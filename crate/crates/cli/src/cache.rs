use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use cuspidal::ALGORITHM_VERSION;

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

/// Content-addressed store of computed results, one JSON file per key.
#[derive(Debug, Clone, Default)]
pub struct Cache {
    dir: Option<PathBuf>,
}

#[derive(Serialize, Deserialize)]
struct Entry {
    version: String,
    kind: String,
    params: Value,
    value: Value,
}

impl Cache {
    pub fn disabled() -> Self {
        Cache { dir: None }
    }

    pub fn at(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: Some(dir.into()) }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn key(kind: &str, params: &Value) -> String {
        let payload = serde_json::json!({ "kind": kind, "params": params, "version": ALGORITHM_VERSION });
        hex::encode(Sha256::digest(payload.to_string().as_bytes()))
    }

    fn path(&self, kind: &str, params: &Value) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{}.json", Self::key(kind, params))))
    }

    pub fn get<T: DeserializeOwned>(&self, kind: &str, params: &Value) -> Option<T> {
        let text = fs::read_to_string(self.path(kind, params)?).ok()?;
        let entry: Entry = serde_json::from_str(&text).ok()?;
        if entry.version != ALGORITHM_VERSION || entry.kind != kind || &entry.params != params {
            return None;
        }
        serde_json::from_value(entry.value).ok()
    }

    /// Write-temp-then-rename; failures leave the cache unchanged.
    pub fn put<T: Serialize>(&self, kind: &str, params: &Value, value: &T) -> std::io::Result<()> {
        let (Some(dir), Some(path)) = (self.dir.as_ref(), self.path(kind, params)) else {
            return Ok(());
        };
        fs::create_dir_all(dir)?;
        let entry = Entry {
            version: ALGORITHM_VERSION.to_string(),
            kind: kind.to_string(),
            params: params.clone(),
            value: serde_json::to_value(value).map_err(std::io::Error::other)?,
        };
        let tmp = dir.join(format!(
            ".{}.{}.{}.tmp",
            Self::key(kind, params),
            std::process::id(),
            TMP_COUNTER.fetch_add(1, Ordering::Relaxed)
        ));
        fs::write(&tmp, serde_json::to_vec(&entry).map_err(std::io::Error::other)?)?;
        fs::rename(&tmp, path).inspect_err(|_| {
            let _ = fs::remove_file(&tmp);
        })
    }

    pub fn get_or_compute<T, F>(&self, kind: &str, params: &Value, f: F) -> T
    where
        T: Serialize + DeserializeOwned,
        F: FnOnce() -> (T, bool),
    {
        if let Some(v) = self.get(kind, params) {
            return v;
        }
        let (v, store) = f();
        if store {
            let _ = self.put(kind, params, &v);
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn key_depends_on_kind_and_params() {
        let p = json!({"a": 2, "b": 3, "m": 6});
        assert_eq!(Cache::key("sigma", &p), Cache::key("sigma", &p));
        assert_ne!(Cache::key("sigma", &p), Cache::key("x", &p));
        assert_ne!(Cache::key("sigma", &p), Cache::key("sigma", &json!({"a": 2, "b": 3, "m": 7})));
        assert_eq!(Cache::key("sigma", &p).len(), 64);
    }

    #[test]
    fn disabled_cache_always_computes() {
        let c = Cache::disabled();
        let mut calls = 0;
        for _ in 0..2 {
            let v: u32 = c.get_or_compute("k", &json!(1), || {
                calls += 1;
                (7, true)
            });
            assert_eq!(v, 7);
        }
        assert_eq!(calls, 2);
    }
}
