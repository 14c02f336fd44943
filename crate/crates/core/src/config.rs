//! Line-oriented `key = value` configuration files.
//!
//! Blank lines and `#` comments are ignored. Every key is optional; missing
//! keys keep their defaults.
//!
//! | key                   | default |
//! |-----------------------|---------|
//! | `lattice_size`        | 10      |
//! | `source_rate`         | 2       |
//! | `source_period`       | 5       |
//! | `source_hop`          | 3       |
//! | `nutrient_min_life`   | 10      |
//! | `nutrient_decay_prob` | 0.02    |
//! | `intervention`        | `cap:9` |
//! | `intervention_onset`  | 25      |
//! | `horizon`             | 200     |
//! | `runs`                | 20000   |
//! | `seed`                | 0       |
//! | `eps`                 | 0.1     |
//! | `env_weighting`       | `multiplicity` (or `indicator`) |

use std::collections::HashSet;
use std::fmt::{self, Display};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::agent::InterventionKind;
use crate::engine::SimConfig;
use crate::lattice::Lattice;
use crate::metrics::EnvWeighting;

/// Largest supported lattice edge. Transition tables grow as `N^4`.
pub const MAX_LATTICE_SIZE: u16 = 32;

pub const KEYS: &[&str] = &[
    "lattice_size",
    "source_rate",
    "source_period",
    "source_hop",
    "nutrient_min_life",
    "nutrient_decay_prob",
    "intervention",
    "intervention_onset",
    "horizon",
    "runs",
    "seed",
    "eps",
    "env_weighting",
];

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: expected `key = value`, found `{text}`")]
    Syntax { line: usize, text: String },
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: key `{key}` given more than once")]
    DuplicateKey { line: usize, key: String },
    #[error("invalid value `{value}` for `{key}`: {reason}")]
    Invalid {
        key: &'static str,
        value: String,
        reason: String,
    },
}

impl ConfigError {
    pub fn invalid(key: &'static str, value: impl Display, reason: impl Into<String>) -> Self {
        ConfigError::Invalid {
            key,
            value: value.to_string(),
            reason: reason.into(),
        }
    }

    /// The configuration key this error is about, if any.
    pub fn key(&self) -> Option<&str> {
        match self {
            ConfigError::Invalid { key, .. } => Some(key),
            ConfigError::UnknownKey { key, .. } | ConfigError::DuplicateKey { key, .. } => Some(key),
            _ => None,
        }
    }
}

pub fn load_config(path: impl AsRef<Path>) -> Result<SimConfig, ConfigError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<SimConfig, ConfigError> {
    let mut cfg = SimConfig::default();
    let mut seen = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Syntax {
            line: line_no,
            text: raw.to_owned(),
        })?;
        let (key, value) = (key.trim(), value.trim());
        let Some(&key) = KEYS.iter().find(|&&k| k == key) else {
            return Err(ConfigError::UnknownKey {
                line: line_no,
                key: key.to_owned(),
            });
        };
        if !seen.insert(key) {
            return Err(ConfigError::DuplicateKey {
                line: line_no,
                key: key.to_owned(),
            });
        }
        apply(&mut cfg, key, value)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn parse<T: FromStr>(key: &'static str, value: &str) -> Result<T, ConfigError>
where
    T::Err: Display,
{
    value
        .parse()
        .map_err(|e: T::Err| ConfigError::invalid(key, value, e.to_string()))
}

fn apply(cfg: &mut SimConfig, key: &'static str, value: &str) -> Result<(), ConfigError> {
    match key {
        "lattice_size" => {
            let n: u16 = parse(key, value)?;
            if n == 0 {
                return Err(ConfigError::invalid(key, value, "must be at least 2"));
            }
            cfg.world.lattice = Lattice::new(n);
        }
        "source_rate" => cfg.world.source_rate = parse(key, value)?,
        "source_period" => cfg.world.source_period = parse(key, value)?,
        "source_hop" => cfg.world.source_hop = parse(key, value)?,
        "nutrient_min_life" => cfg.world.nutrient_min_life = parse(key, value)?,
        "nutrient_decay_prob" => cfg.world.nutrient_decay_prob = parse(key, value)?,
        "intervention" => cfg.intervention.kind = parse::<InterventionKind>(key, value)?,
        "intervention_onset" => cfg.intervention.onset = parse(key, value)?,
        "horizon" => cfg.horizon = parse(key, value)?,
        "runs" => cfg.runs = parse(key, value)?,
        "seed" => cfg.master_seed = parse(key, value)?,
        "eps" => cfg.eps = parse(key, value)?,
        "env_weighting" => cfg.env_weighting = parse(key, value)?,
        _ => unreachable!("key list and match arms disagree on `{key}`"),
    }
    Ok(())
}

/// Canonical `key = value` rendering of every field, in [`KEYS`] order.
/// Parsing the output yields the same configuration.
pub fn render_config(cfg: &SimConfig) -> String {
    let iv = match cfg.intervention.kind {
        InterventionKind::SenseCap(n) => format!("cap:{n}"),
        other => other.to_string(),
    };
    let w = &cfg.world;
    let fields: [(&str, &dyn Display); 13] = [
        ("lattice_size", &w.lattice.size()),
        ("source_rate", &w.source_rate),
        ("source_period", &w.source_period),
        ("source_hop", &w.source_hop),
        ("nutrient_min_life", &w.nutrient_min_life),
        ("nutrient_decay_prob", &w.nutrient_decay_prob),
        ("intervention", &iv),
        ("intervention_onset", &cfg.intervention.onset),
        ("horizon", &cfg.horizon),
        ("runs", &cfg.runs),
        ("seed", &cfg.master_seed),
        ("eps", &cfg.eps),
        ("env_weighting", &cfg.env_weighting),
    ];
    let mut out = String::new();
    for (k, v) in fields {
        out.push_str(&format!("{k} = {v}\n"));
    }
    out
}

impl fmt::Display for EnvWeighting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EnvWeighting::Multiplicity => "multiplicity",
            EnvWeighting::Indicator => "indicator",
        })
    }
}

impl FromStr for EnvWeighting {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "multiplicity" => Ok(EnvWeighting::Multiplicity),
            "indicator" => Ok(EnvWeighting::Indicator),
            other => Err(format!("expected `multiplicity` or `indicator`, got `{other}`")),
        }
    }
}
