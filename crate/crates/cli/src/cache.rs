//! Result cache at `cache_dir/{experiment_id}/{hash}.json`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::Value;
use sha2::{Digest, Sha256};

/// SHA-256 of the canonical (key-sorted, compact) serialization.
pub fn content_hash(input: &Value) -> String {
    format!("{:x}", Sha256::digest(input.to_string().as_bytes()))
}

pub fn entry_path(dir: &Path, experiment_id: &str, input: &Value) -> PathBuf {
    dir.join(experiment_id).join(format!("{}.json", content_hash(input)))
}

pub fn load(path: &Path) -> Option<Value> {
    serde_json::from_str(&fs::read_to_string(path).ok()?).ok()
}

/// Writes a sibling temporary file and renames it into place.
pub fn store(path: &Path, value: &Value) -> std::io::Result<()> {
    let dir = path.parent().expect("cache entries live in a directory");
    fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(".{}.{}.tmp", path.file_name().unwrap().to_string_lossy(), std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(serde_json::to_string_pretty(value)?.as_bytes())?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}
