//! Content-addressed store for expensive reports.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::report::Report;

/// Bump when the stored layout or any cached computation changes.
const CACHE_VERSION: &str = "house-edge-cache-v1";

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: &Path) -> Cache {
        Cache { dir: dir.to_path_buf() }
    }

    /// Key from the version, command name and its inputs.
    pub fn key(report: &Report) -> String {
        let mut h = Sha256::new();
        h.update(CACHE_VERSION);
        h.update([0]);
        h.update(env!("CARGO_PKG_VERSION"));
        h.update([0]);
        h.update(&report.command);
        for (k, v) in &report.inputs {
            h.update([0]);
            h.update(k);
            h.update([1]);
            h.update(v);
        }
        hex::encode(h.finalize())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// A stored report, or `None` on a miss or an unreadable entry.
    pub fn load(&self, key: &str) -> Option<Report> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        serde_json::from_str(&text).ok()
    }

    pub fn store(&self, key: &str, report: &Report) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let tmp = self.dir.join(format!("{key}.tmp"));
        fs::write(&tmp, serde_json::to_vec(report).expect("reports serialize"))?;
        fs::rename(tmp, self.path(key))
    }
}
