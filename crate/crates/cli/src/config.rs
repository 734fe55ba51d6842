//! Plain `key = value` configuration files: UTF-8, `#` comments, keys named
//! after the long command-line flags. Command-line flags override file
//! values.

use std::collections::HashMap;
use std::path::Path;

use crate::CliError;

#[derive(Debug, Default)]
pub struct FileConfig {
    values: HashMap<String, String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let mut values = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Usage(format!(
                    "config {}:{}: expected `key = value`, got `{raw}`",
                    path.display(),
                    lineno + 1
                )));
            };
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(FileConfig { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(|s| s.as_str())
    }

    /// Flag value if present, else the config entry, else the default.
    pub fn resolve_f64(&self, flag: Option<f64>, key: &str, default: f64) -> Result<f64, CliError> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.get(key) {
            Some(s) => s
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("config key `{key}`: not a number: `{s}`"))),
            None => Ok(default),
        }
    }

    pub fn resolve_opt_f64(&self, flag: Option<f64>, key: &str) -> Result<Option<f64>, CliError> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.get(key) {
            Some(s) => s
                .parse::<f64>()
                .map(Some)
                .map_err(|_| CliError::Usage(format!("config key `{key}`: not a number: `{s}`"))),
            None => Ok(None),
        }
    }

    pub fn resolve_usize(
        &self,
        flag: Option<usize>,
        key: &str,
        default: usize,
    ) -> Result<usize, CliError> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.get(key) {
            Some(s) => s.parse::<usize>().map_err(|_| {
                CliError::Usage(format!("config key `{key}`: not an integer: `{s}`"))
            }),
            None => Ok(default),
        }
    }

    pub fn resolve_u32(&self, flag: Option<u32>, key: &str, default: u32) -> Result<u32, CliError> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.get(key) {
            Some(s) => s.parse::<u32>().map_err(|_| {
                CliError::Usage(format!("config key `{key}`: not an integer: `{s}`"))
            }),
            None => Ok(default),
        }
    }
}
