//! On-disk q-character cache. Each file stores the payload with its SHA-256
//! so a damaged entry is detected rather than silently reused.

use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use qcharlab::CONVENTIONS;

fn digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

pub fn cache_key(label: &str, node: usize) -> String {
    digest(&format!("qchar\n{label}\n{node}\n{CONVENTIONS}"))
}

pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: &Path) -> Self {
        Cache { dir: dir.to_path_buf() }
    }

    pub fn entry_path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    /// `Ok(None)` on a miss, `Err` when an entry exists but fails its
    /// integrity check.
    pub fn load(&self, key: &str) -> Result<Option<Value>, String> {
        let path = self.entry_path(key);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(format!("{}: {e}", path.display())),
        };
        let corrupt = |why: &str| format!("cache integrity error in {}: {why}", path.display());
        let wrapper: Value = serde_json::from_str(&text).map_err(|e| corrupt(&e.to_string()))?;
        let payload = wrapper["payload"].as_str().ok_or_else(|| corrupt("missing payload"))?;
        if wrapper["key"].as_str() != Some(key) {
            return Err(corrupt("key mismatch"));
        }
        if wrapper["conventions"].as_str() != Some(CONVENTIONS) {
            return Err(corrupt("conventions mismatch"));
        }
        if wrapper["sha256"].as_str() != Some(digest(payload).as_str()) {
            return Err(corrupt("checksum mismatch"));
        }
        serde_json::from_str(payload).map(Some).map_err(|e| corrupt(&e.to_string()))
    }

    pub fn store(&self, key: &str, payload: &Value) -> Result<(), String> {
        fs::create_dir_all(&self.dir).map_err(|e| format!("{}: {e}", self.dir.display()))?;
        let text = payload.to_string();
        let wrapper = json!({
            "key": key,
            "conventions": CONVENTIONS,
            "sha256": digest(&text),
            "payload": text,
        });
        let path = self.entry_path(key);
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, wrapper.to_string()).map_err(|e| format!("{}: {e}", tmp.display()))?;
        fs::rename(&tmp, &path).map_err(|e| format!("{}: {e}", path.display()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scratch(name: &str) -> PathBuf {
        let dir = std::env::temp_dir().join(format!("qcharlab-cache-{name}-{}", std::process::id()));
        let _ = fs::remove_dir_all(&dir);
        dir
    }

    #[test]
    fn round_trip_and_miss() {
        let dir = scratch("rt");
        let cache = Cache::new(&dir);
        let key = cache_key("A2", 1);
        assert_eq!(cache.load(&key).unwrap(), None);
        cache.store(&key, &json!({"x": [1, 2]})).unwrap();
        assert_eq!(cache.load(&key).unwrap(), Some(json!({"x": [1, 2]})));
        fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn tampering_is_detected() {
        let dir = scratch("tamper");
        let cache = Cache::new(&dir);
        let key = cache_key("B2", 2);
        cache.store(&key, &json!({"x": 1})).unwrap();
        let path = cache.entry_path(&key);
        let text = fs::read_to_string(&path).unwrap().replace("\\\"x\\\":1", "\\\"x\\\":2");
        fs::write(&path, text).unwrap();
        assert!(cache.load(&key).unwrap_err().contains("checksum"));
        fs::write(&path, "not json").unwrap();
        assert!(cache.load(&key).is_err());
        fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn keys_separate_inputs() {
        assert_ne!(cache_key("B2", 1), cache_key("B2", 2));
        assert_ne!(cache_key("B2", 1), cache_key("C2", 1));
        assert_eq!(cache_key("G2", 1).len(), 64);
    }
}
