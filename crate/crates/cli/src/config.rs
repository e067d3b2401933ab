//! `key = value` run configuration. Command-line flags take precedence over
//! the file; the cache directory may also come from the environment.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use qcharlab::qchar::FmCaps;

pub const CACHE_ENV: &str = "QCHARLAB_CACHE_DIR";

const KEYS: [&str; 12] = [
    "type",
    "node",
    "theta",
    "word",
    "out",
    "field",
    "cache_dir",
    "cap_monomials",
    "cap_height",
    "cap_w",
    "cap_entries",
    "cap_stability_dim",
];

#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut values = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| format!("config line {}: expected `key = value`", n + 1))?;
            let key = k.trim().replace('-', "_");
            if !KEYS.contains(&key.as_str()) {
                return Err(format!("config line {}: unknown key `{}`", n + 1, k.trim()));
            }
            values.insert(key, v.trim().trim_matches('"').to_string());
        }
        Ok(ConfigFile { values })
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn number(&self, key: &str) -> Result<Option<usize>, String> {
        self.get(key)
            .map(|v| v.parse::<usize>().map_err(|_| format!("config `{key}` must be a positive integer")))
            .transpose()
    }
}

/// Resolved settings shared by every subcommand.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub file: ConfigFile,
    pub fm_caps: FmCaps,
    pub weyl_cap: usize,
    pub max_entries: usize,
    pub max_stability_dim: usize,
    pub cache_dir: Option<PathBuf>,
}

#[derive(Debug, Clone, Default)]
pub struct GlobalFlags {
    pub config: Option<PathBuf>,
    pub cache_dir: Option<PathBuf>,
    pub cap_monomials: Option<usize>,
    pub cap_height: Option<usize>,
    pub cap_w: Option<usize>,
    pub cap_entries: Option<usize>,
}

fn positive(name: &str, v: usize) -> Result<usize, String> {
    if v == 0 {
        Err(format!("{name} must be positive"))
    } else {
        Ok(v)
    }
}

impl RunConfig {
    pub fn resolve(flags: &GlobalFlags) -> Result<Self, String> {
        let file = match &flags.config {
            Some(p) => ConfigFile::load(p)?,
            None => ConfigFile::default(),
        };
        let defaults = FmCaps::default();
        let pick = |flag: Option<usize>, key: &str, default: usize| -> Result<usize, String> {
            let v = match flag {
                Some(v) => v,
                None => file.number(key)?.unwrap_or(default),
            };
            positive(key, v)
        };
        let fm_caps = FmCaps {
            max_monomials: pick(flags.cap_monomials, "cap_monomials", defaults.max_monomials)?,
            max_height: pick(flags.cap_height, "cap_height", defaults.max_height as usize)? as i64,
        };
        let weyl_cap = pick(flags.cap_w, "cap_w", qcharlab::cartan::DEFAULT_WEYL_CAP)?;
        let max_entries = pick(flags.cap_entries, "cap_entries", 22)?;
        let max_stability_dim = pick(None, "cap_stability_dim", 14)?;
        let cache_dir = flags
            .cache_dir
            .clone()
            .or_else(|| std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
            .or_else(|| file.get("cache_dir").map(PathBuf::from));
        Ok(RunConfig {
            file,
            fm_caps,
            weyl_cap,
            max_entries,
            max_stability_dim,
            cache_dir,
        })
    }

    /// A flag value, falling back to the config file.
    pub fn text(&self, flag: &Option<String>, key: &str) -> Option<String> {
        flag.clone().or_else(|| self.file.get(key).map(str::to_string))
    }

    pub fn path(&self, flag: &Option<PathBuf>, key: &str) -> Option<PathBuf> {
        flag.clone().or_else(|| self.file.get(key).map(PathBuf::from))
    }
}
