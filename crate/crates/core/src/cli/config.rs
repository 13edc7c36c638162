//! Flat `key = value` configuration with dotted section prefixes.
//!
//! ```text
//! # zero-temperature sweep for three sizes
//! model.omega = 1
//! model.n_atoms = 8, 16, 32
//! grid.lambda_max = 1.5
//! ```
//!
//! Every key may be overridden by `--set key=value`. Unknown keys are rejected with the
//! location they came from.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use crate::error::{Error, Result};

/// Every key the commands understand, with its default.
pub const KEYS: &[(&str, &str)] = &[
    ("model.omega", "1"),
    ("model.omega0", "1"),
    ("model.n_atoms", "100"),
    ("grid.lambda_min", "0"),
    ("grid.lambda_max", "1.5"),
    ("grid.lambda_steps", "61"),
    ("grid.t_min", "0.2"),
    ("grid.t_max", "3"),
    ("grid.t_steps", "15"),
    ("grid.beta", ""),
    ("numerics.cutoff_photon", "30"),
    ("numerics.cutoff_atom", "30"),
    ("numerics.rel_tol", "1e-10"),
    ("numerics.max_nodes", "20000"),
    ("numerics.window_sigmas", "8"),
    ("numerics.threads", "0"),
    ("thermal.factor", "corrected"),
    ("witness.mode", "zero_t"),
    ("witness.form", "large_n"),
    ("oracle.mode", "ground"),
    ("oracle.cutoff", "0"),
    ("fit.source", "numerical"),
    ("fit.lambda_min", "0.45"),
    ("fit.lambda_max", "0.4999"),
    ("fit.lambda_steps", "40"),
    ("fit.spacing", "linear"),
    ("output.csv", ""),
    ("output.precision", "12"),
];

/// Where a value was set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Source {
    Default,
    File { path: String, line: usize },
    Flag,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Source::Default => f.write_str("default"),
            Source::File { path, line } => write!(f, "{path}:{line}"),
            Source::Flag => f.write_str("--set"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Config {
    values: BTreeMap<String, (String, Source)>,
}

impl Default for Config {
    fn default() -> Self {
        let values = KEYS.iter().map(|(k, v)| (k.to_string(), (v.to_string(), Source::Default))).collect();
        Self { values }
    }
}

impl Config {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config {
            location: path.display().to_string(),
            message: format!("cannot read: {e}"),
        })?;
        let mut c = Self::default();
        c.merge_text(&text, &path.display().to_string())?;
        Ok(c)
    }

    /// Applies the lines of a config file. Keys may appear only once per file.
    pub fn merge_text(&mut self, text: &str, origin: &str) -> Result<()> {
        let mut seen = std::collections::HashSet::new();
        for (i, raw) in text.lines().enumerate() {
            let location = Source::File { path: origin.to_string(), line: i + 1 };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(config_error(&location, format!("expected `key = value`, got `{line}`")));
            };
            let key = key.trim();
            if !seen.insert(key.to_string()) {
                return Err(config_error(&location, format!("duplicate key `{key}`")));
            }
            self.set(key, value.trim(), location)?;
        }
        Ok(())
    }

    /// Applies one `key=value` override.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let Some((key, value)) = assignment.split_once('=') else {
            return Err(config_error(&Source::Flag, format!("expected key=value, got `{assignment}`")));
        };
        self.set(key.trim(), value.trim(), Source::Flag)
    }

    fn set(&mut self, key: &str, value: &str, source: Source) -> Result<()> {
        match self.values.get_mut(key) {
            Some(slot) => {
                *slot = (value.to_string(), source);
                Ok(())
            }
            None => Err(config_error(&source, format!("unknown key `{key}`"))),
        }
    }

    pub fn raw(&self, key: &str) -> &str {
        &self.values.get(key).unwrap_or_else(|| panic!("config key `{key}` is not registered")).0
    }

    pub fn source(&self, key: &str) -> &Source {
        &self.values[key].1
    }

    /// A config error pointing at where `key` was set.
    pub fn error(&self, key: &str, message: impl Into<String>) -> Error {
        config_error(self.source(key), format!("{key}: {}", message.into()))
    }

    pub fn f64(&self, key: &str) -> Result<f64> {
        let raw = self.raw(key);
        match raw.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(self.error(key, format!("expected a finite number, got `{raw}`"))),
        }
    }

    pub fn usize(&self, key: &str) -> Result<usize> {
        let raw = self.raw(key);
        raw.parse::<usize>().map_err(|_| self.error(key, format!("expected a non-negative integer, got `{raw}`")))
    }

    /// Comma-separated list; empty when the value is empty.
    pub fn list<T: std::str::FromStr>(&self, key: &str) -> Result<Vec<T>> {
        let raw = self.raw(key);
        if raw.is_empty() {
            return Ok(vec![]);
        }
        raw.split(',')
            .map(|s| s.trim().parse::<T>().map_err(|_| self.error(key, format!("cannot parse list entry `{}`", s.trim()))))
            .collect()
    }

    /// One of `choices`.
    pub fn choice(&self, key: &str, choices: &[&str]) -> Result<String> {
        let raw = self.raw(key);
        if choices.contains(&raw) {
            Ok(raw.to_string())
        } else {
            Err(self.error(key, format!("expected one of {}, got `{raw}`", choices.join("|"))))
        }
    }
}

fn config_error(source: &Source, message: String) -> Error {
    Error::Config { location: source.to_string(), message }
}

/// An evenly spaced axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    /// Reads `<prefix>_min`, `<prefix>_max`, `<prefix>_steps`. A single step requires
    /// min = max.
    pub fn from_config(c: &Config, prefix: &str) -> Result<Self> {
        let (kmin, kmax, ksteps) = (format!("{prefix}_min"), format!("{prefix}_max"), format!("{prefix}_steps"));
        let axis = Self { min: c.f64(&kmin)?, max: c.f64(&kmax)?, steps: c.usize(&ksteps)? };
        if axis.steps == 0 {
            return Err(c.error(&ksteps, "must be at least 1"));
        }
        if axis.max < axis.min {
            return Err(c.error(&kmax, format!("below {kmin} ({})", axis.min)));
        }
        if axis.steps == 1 && axis.max != axis.min {
            return Err(c.error(&ksteps, "a single step needs min = max"));
        }
        if axis.steps >= 2 && axis.max == axis.min {
            return Err(c.error(&kmax, "equals the minimum; use steps = 1 for a fixed value"));
        }
        Ok(axis)
    }

    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let h = (self.max - self.min) / (self.steps - 1) as f64;
        (0..self.steps).map(|i| if i + 1 == self.steps { self.max } else { self.min + h * i as f64 }).collect()
    }

    pub fn is_swept(&self) -> bool {
        self.steps >= 2
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_overrides() {
        let mut c = Config::default();
        c.merge_text("# header\nmodel.omega = 2  # trailing\n\ngrid.lambda_steps=5\n", "f.conf").unwrap();
        assert_eq!(c.f64("model.omega").unwrap(), 2.0);
        assert_eq!(c.source("model.omega"), &Source::File { path: "f.conf".into(), line: 2 });
        c.apply_override("model.omega=3").unwrap();
        assert_eq!(c.f64("model.omega").unwrap(), 3.0);
        assert_eq!(c.usize("grid.lambda_steps").unwrap(), 5);
    }

    #[test]
    fn errors_carry_location() {
        let mut c = Config::default();
        let e = c.merge_text("model.omega = 1\nmodel.bogus = 2\n", "f.conf").unwrap_err();
        assert!(matches!(&e, Error::Config { location, .. } if location == "f.conf:2"), "{e}");
        let e = Config::default().merge_text("model.omega 1\n", "f.conf").unwrap_err();
        assert!(e.to_string().contains("f.conf:1"));
        assert!(Config::default().merge_text("model.omega = 1\nmodel.omega = 2\n", "f").is_err());
        c.apply_override("model.omega=abc").unwrap();
        let e = c.f64("model.omega").unwrap_err();
        assert!(matches!(&e, Error::Config { location, .. } if location == "--set"));
    }

    #[test]
    fn lists() {
        let mut c = Config::default();
        c.apply_override("model.n_atoms = 8, 16,32").unwrap();
        assert_eq!(c.list::<usize>("model.n_atoms").unwrap(), vec![8, 16, 32]);
        assert!(c.list::<f64>("grid.beta").unwrap().is_empty());
    }

    #[test]
    fn axes() {
        let mut c = Config::default();
        let a = Axis::from_config(&c, "grid.lambda").unwrap();
        assert_eq!(a.points().len(), 61);
        assert_eq!(a.points()[60], 1.5);
        c.apply_override("grid.lambda_steps=1").unwrap();
        assert!(Axis::from_config(&c, "grid.lambda").is_err());
        c.apply_override("grid.lambda_max=0").unwrap();
        assert_eq!(Axis::from_config(&c, "grid.lambda").unwrap().points(), vec![0.0]);
    }
}
