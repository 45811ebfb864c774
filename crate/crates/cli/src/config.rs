//! Optional `key = value` settings file.
//!
//! ```text
//! # defaults for firstsign
//! precision = 200
//! cache_dir = /var/tmp/firstsign
//! threads = 4
//! ```

use std::path::{Path, PathBuf};

/// Environment variable naming the settings file.
pub const CONFIG_ENV: &str = "FIRSTSIGN_CONFIG";

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Config {
    pub precision: Option<usize>,
    pub cache_dir: Option<PathBuf>,
    pub threads: Option<usize>,
}

impl Config {
    pub fn parse(text: &str) -> Result<Config, String> {
        let mut cfg = Config::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("line {}: expected key = value, got {raw:?}", lineno + 1))?;
            let (key, value) = (key.trim(), value.trim());
            let number = |v: &str| {
                v.parse::<usize>()
                    .map_err(|_| format!("line {}: {key} must be a positive integer, got {v:?}", lineno + 1))
            };
            match key {
                "precision" => cfg.precision = Some(number(value)?),
                "threads" => cfg.threads = Some(number(value)?),
                "cache_dir" => cfg.cache_dir = Some(PathBuf::from(value)),
                other => return Err(format!("line {}: unknown setting {other:?}", lineno + 1)),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Config, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Config::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
    }

    /// The file given on the command line, else the one named by
    /// [`CONFIG_ENV`], else defaults.
    pub fn discover(explicit: Option<&Path>) -> Result<Config, String> {
        match explicit {
            Some(p) => Config::load(p),
            None => match std::env::var_os(CONFIG_ENV) {
                Some(p) if !p.is_empty() => Config::load(Path::new(&p)),
                _ => Ok(Config::default()),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_keys() {
        let cfg = Config::parse("# c\nprecision = 120\n\ncache_dir=/tmp/x  # trailing\nthreads = 2\n").unwrap();
        assert_eq!(cfg.precision, Some(120));
        assert_eq!(cfg.cache_dir, Some(PathBuf::from("/tmp/x")));
        assert_eq!(cfg.threads, Some(2));
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(Config::parse("precision 5").is_err());
        assert!(Config::parse("precision = many").is_err());
        assert!(Config::parse("colour = blue").is_err());
        assert_eq!(Config::parse("").unwrap(), Config::default());
    }
}
