//! Flat `key = value` configuration files and resolution against CLI flags.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config file {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: expected `key = value`, found `{text}`")]
    Syntax { path: PathBuf, line: usize, text: String },
    #[error("{path}:{line}: key `{key}` given twice")]
    Duplicate { path: PathBuf, line: usize, key: String },
    #[error("unknown config key `{key}` for `{command}`")]
    UnknownKey { key: String, command: String },
    #[error("invalid value `{value}` for `{key}`: {reason}")]
    InvalidValue { key: String, value: String, reason: String },
    #[error("{0}")]
    Invalid(String),
    #[error("cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Parsed config file. Keys may use `-` or `_`; lines starting with `#`
/// are comments.
#[derive(Debug, Default)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
    used: RefCell<BTreeSet<String>>,
}

fn normalize_key(key: &str) -> String {
    key.trim().replace('_', "-")
}

impl ConfigFile {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text, path)
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self, ConfigError> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::Syntax {
                    path: path.to_path_buf(),
                    line: i + 1,
                    text: raw.to_string(),
                });
            };
            let key = normalize_key(key);
            if key.is_empty() {
                return Err(ConfigError::Syntax {
                    path: path.to_path_buf(),
                    line: i + 1,
                    text: raw.to_string(),
                });
            }
            if values.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(ConfigError::Duplicate {
                    path: path.to_path_buf(),
                    line: i + 1,
                    key,
                });
            }
        }
        Ok(Self {
            values,
            used: RefCell::new(BTreeSet::new()),
        })
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        let Some(raw) = self.values.get(key) else {
            return Ok(None);
        };
        self.used.borrow_mut().insert(key.to_string());
        raw.parse().map(Some).map_err(|e: T::Err| ConfigError::InvalidValue {
            key: key.to_string(),
            value: raw.clone(),
            reason: e.to_string(),
        })
    }

    /// Every key must have been consumed by the command.
    pub fn check_unused(&self, command: &str) -> Result<(), ConfigError> {
        let used = self.used.borrow();
        match self.values.keys().find(|k| !used.contains(*k)) {
            Some(key) => Err(ConfigError::UnknownKey {
                key: key.clone(),
                command: command.to_string(),
            }),
            None => Ok(()),
        }
    }
}

/// Effective parameters in resolution order, echoed into every output.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Effective {
    entries: Vec<(String, String)>,
}

impl Effective {
    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    fn record(&mut self, key: &str, value: String) {
        self.entries.push((key.to_string(), value));
    }
}

/// Resolves parameters with precedence CLI flag > config file > default.
pub struct Resolver<'a> {
    file: &'a ConfigFile,
    pub effective: Effective,
}

impl<'a> Resolver<'a> {
    pub fn new(file: &'a ConfigFile) -> Self {
        Self {
            file,
            effective: Effective::default(),
        }
    }

    pub fn resolve<T>(&mut self, key: &str, cli: Option<T>, default: T) -> Result<T, ConfigError>
    where
        T: FromStr + fmt::Display,
        T::Err: fmt::Display,
    {
        let from_file = self.file.get::<T>(key)?;
        let value = cli.or(from_file).unwrap_or(default);
        self.effective.record(key, value.to_string());
        Ok(value)
    }
}

/// Comma-separated list of reals.
#[derive(Debug, Clone, PartialEq)]
pub struct RealList(pub Vec<f64>);

impl FromStr for RealList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Self(Vec::new()));
        }
        s.split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|e| format!("`{}`: {e}", t.trim())))
            .collect::<Result<Vec<_>, _>>()
            .map(Self)
    }
}

impl fmt::Display for RealList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// A string restricted to a fixed set of choices.
macro_rules! choice {
    ($name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq)]
        pub enum $name {
            $($variant),+
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s.trim() {
                    $($text => Ok(Self::$variant),)+
                    other => Err(format!(
                        "expected one of {}, found `{other}`",
                        [$($text),+].join(", ")
                    )),
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(match self {
                    $(Self::$variant => $text),+
                })
            }
        }

        impl clap::ValueEnum for $name {
            fn value_variants<'a>() -> &'a [Self] {
                &[$(Self::$variant),+]
            }

            fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
                Some(clap::builder::PossibleValue::new(match self {
                    $(Self::$variant => $text),+
                }))
            }
        }
    };
}

choice!(SchemeChoice { Central => "central", Richardson => "richardson" });
choice!(VelocityChoice { Csf => "csf", Frozen => "frozen", Outer => "outer" });
choice!(DeficitChoice { Nodes => "nodes", Midpoint => "midpoint" });
choice!(SolverChoice { Cholesky => "cholesky", Cg => "cg" });
