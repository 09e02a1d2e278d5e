//! Run configuration: flags merged over an optional `key=value` file.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use pjlab_core::identities::{Suite, Tolerances};
use pjlab_core::weight::WeightParams;
use pjlab_core::{policy_bits, Real};

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn bad(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Keys accepted in a config file; each mirrors the flag of the same name.
pub const KEYS: &[&str] = &[
    "alpha", "beta", "t", "nmax", "bits", "tol", "suites", "out", "format", "seed", "svg", "kmax", "s",
    "beta-values",
];

/// Raw settings: flag values take precedence over file values.
#[derive(Debug, Default)]
pub struct Settings {
    flags: BTreeMap<&'static str, String>,
    file: BTreeMap<String, String>,
}

impl Settings {
    pub fn new(config: Option<&Path>) -> Result<Self, ConfigError> {
        let mut file = BTreeMap::new();
        if let Some(path) = config {
            let text = std::fs::read_to_string(path)
                .map_err(|e| bad(format!("cannot read config file {}: {e}", path.display())))?;
            for (i, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (k, v) = line
                    .split_once('=')
                    .ok_or_else(|| bad(format!("{}:{}: expected key=value", path.display(), i + 1)))?;
                let k = k.trim();
                if !KEYS.contains(&k) {
                    return Err(bad(format!("{}:{}: unknown key {k:?}", path.display(), i + 1)));
                }
                let v = v.trim().to_string();
                // tol and svg accumulate across lines
                match file.get_mut(k) {
                    Some(prev) if k == "tol" || k == "svg" => {
                        let prev: &mut String = prev;
                        prev.push(',');
                        prev.push_str(&v);
                    }
                    _ => {
                        file.insert(k.to_string(), v);
                    }
                }
            }
        }
        Ok(Settings {
            flags: BTreeMap::new(),
            file,
        })
    }

    pub fn flag(&mut self, key: &'static str, value: Option<String>) {
        debug_assert!(KEYS.contains(&key));
        if let Some(v) = value {
            self.flags.insert(key, v);
        }
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.flags
            .get(key)
            .or_else(|| self.file.get(key))
            .map(String::as_str)
    }

    fn list(&self, key: &str) -> Option<Vec<&str>> {
        self.get(key).map(|v| {
            v.split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .collect()
        })
    }

    pub fn real(&self, key: &str, default: &str, bits: usize) -> Result<Real, ConfigError> {
        let text = self.get(key).unwrap_or(default);
        Real::parse_decimal(text, bits).map_err(|_| bad(format!("{key}: not a number: {text:?}")))
    }

    pub fn reals(&self, key: &str, default: &[&str], bits: usize) -> Result<Vec<Real>, ConfigError> {
        let items = self.list(key).unwrap_or_else(|| default.to_vec());
        items
            .iter()
            .map(|s| Real::parse_decimal(s, bits).map_err(|_| bad(format!("{key}: not a number: {s:?}"))))
            .collect()
    }

    pub fn uint(&self, key: &str, default: usize) -> Result<usize, ConfigError> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .trim()
                .parse()
                .map_err(|_| bad(format!("{key}: not a nonnegative integer: {v:?}"))),
        }
    }

    pub fn format(&self, default: Format) -> Result<Format, ConfigError> {
        match self.get("format") {
            None => Ok(default),
            Some("csv") => Ok(Format::Csv),
            Some("json") => Ok(Format::Json),
            Some(other) => Err(bad(format!("format: expected csv or json, got {other:?}"))),
        }
    }

    pub fn out(&self) -> Option<PathBuf> {
        self.get("out").map(PathBuf::from)
    }

    pub fn strings(&self, key: &str) -> Vec<String> {
        self.list(key)
            .map(|v| v.into_iter().map(String::from).collect())
            .unwrap_or_default()
    }
}

/// Everything a subcommand needs to build pipelines.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub alpha: Real,
    pub beta: Real,
    pub t_grid: Vec<Real>,
    pub n_max: usize,
    pub bits: usize,
    pub tolerances: Tolerances,
    pub suites: BTreeSet<Suite>,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn from_settings(s: &Settings, default_format: Format) -> Result<Self, ConfigError> {
        let n_max = s.uint("nmax", 10)?;
        if n_max < 1 {
            return Err(bad("nmax must be at least 1"));
        }
        let bits = s.uint("bits", policy_bits(n_max))?;
        if bits < 64 {
            return Err(bad("bits must be at least 64"));
        }
        let alpha = s.real("alpha", "1", bits)?;
        let beta = s.real("beta", "1", bits)?;
        let t_grid = s.reals("t", &["0.5", "1", "2"], bits)?;
        if t_grid.is_empty() {
            return Err(bad("the t grid is empty"));
        }
        for t in &t_grid {
            WeightParams::new(alpha.clone(), beta.clone(), t.clone()).map_err(|e| bad(e.to_string()))?;
        }

        let mut tolerances = Tolerances::new(bits);
        for item in s.strings("tol") {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| bad(format!("tol: expected class=value, got {item:?}")))?;
            let value = Real::parse_decimal(v, 64).map_err(|_| bad(format!("tol: not a number: {v:?}")))?;
            tolerances.set(k.trim(), value).map_err(|e| bad(format!("tol: {e}")))?;
        }

        let names = s.strings("suites");
        let suites = if names.is_empty() {
            Suite::ALL.iter().copied().collect()
        } else {
            names
                .iter()
                .map(|n| Suite::parse(n).ok_or_else(|| bad(format!("suites: unknown suite {n:?}"))))
                .collect::<Result<_, _>>()?
        };

        Ok(RunConfig {
            alpha,
            beta,
            t_grid,
            n_max,
            bits,
            tolerances,
            suites,
            out: s.out(),
            format: s.format(default_format)?,
        })
    }

    /// Decimal digits printed for every number.
    pub fn digits(&self) -> usize {
        (self.bits as f64 * 0.3).round() as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(&path, "# comment\nalpha = 1.5\nnmax=4\ntol=stencil=1e-3\ntol=riccati=1e-4\n").unwrap();
        let mut s = Settings::new(Some(&path)).unwrap();
        s.flag("nmax", Some("3".into()));
        let cfg = RunConfig::from_settings(&s, Format::Json).unwrap();
        assert_eq!(cfg.n_max, 3);
        assert_eq!(cfg.alpha.to_f64(), 1.5);
        assert_eq!(cfg.bits, policy_bits(3));
        assert_eq!(cfg.digits(), 58);
        assert_eq!(s.strings("tol").len(), 2);
    }

    #[test]
    fn invalid_settings_are_rejected() {
        let mut s = Settings::default();
        s.flag("t", Some(",".into()));
        assert!(RunConfig::from_settings(&s, Format::Csv).is_err());
        let mut s = Settings::default();
        s.flag("alpha", Some("0".into()));
        assert!(RunConfig::from_settings(&s, Format::Csv).is_err());
        let mut s = Settings::default();
        s.flag("suites", Some("toda,nope".into()));
        assert!(RunConfig::from_settings(&s, Format::Csv).is_err());
        let mut s = Settings::default();
        s.flag("bits", Some("32".into()));
        assert!(RunConfig::from_settings(&s, Format::Csv).is_err());
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.conf");
        std::fs::write(&path, "colour=blue\n").unwrap();
        assert!(Settings::new(Some(&path)).is_err());
    }
}
