//! On-disk result cache keyed by a content hash of the poset.

use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::poset::Poset;

pub const CACHE_ENV: &str = "OCS_CACHE";

#[derive(Debug, Clone)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// `None` unless `OCS_CACHE` names a directory.
    pub fn from_env() -> Option<Self> {
        std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(Self::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(operation: &str, poset: &Poset) -> String {
        let mut h = Sha256::new();
        h.update(operation.as_bytes());
        h.update([0]);
        h.update(poset.canonical_serialization().as_bytes());
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn get(&self, key: &str) -> Option<serde_json::Value> {
        let text = std::fs::read_to_string(self.path(key)).ok()?;
        serde_json::from_str(&text).ok()
    }

    /// Write-then-rename so readers never see a partial entry.
    pub fn put(&self, key: &str, value: &serde_json::Value) -> Result<()> {
        std::fs::create_dir_all(&self.dir)?;
        let tmp = self.dir.join(format!(".{key}.{}.tmp", std::process::id()));
        std::fs::write(&tmp, serde_json::to_vec(value)?)?;
        std::fs::rename(&tmp, self.path(key)).map_err(Error::from)
    }

    pub fn get_or_compute(
        &self,
        operation: &str,
        poset: &Poset,
        compute: impl FnOnce() -> Result<serde_json::Value>,
    ) -> Result<serde_json::Value> {
        let key = Self::key(operation, poset);
        if let Some(v) = self.get(&key) {
            return Ok(v);
        }
        let v = compute()?;
        self.put(&key, &v)?;
        Ok(v)
    }
}

/// Runs `compute` through `cache` when present.
pub fn cached(
    cache: Option<&Cache>,
    operation: &str,
    poset: &Poset,
    compute: impl FnOnce() -> Result<serde_json::Value>,
) -> Result<serde_json::Value> {
    match cache {
        Some(c) => c.get_or_compute(operation, poset, compute),
        None => compute(),
    }
}
