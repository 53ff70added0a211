//! Suite configuration.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sigma_lab::{Kind, SigmaClass};

use crate::error::CliError;

/// Largest carrier order the catalogs are enumerated to.
pub const MAX_ORDER_LIMIT: usize = 4;

pub const MODULES: &[&str] = &[
    "fixtures",
    "maltsev",
    "transitivity",
    "permutation",
    "connector",
    "cap",
    "centralizer",
    "cores",
    "protomodularity",
    "regularity",
    "saturation",
    "baer",
];

fn default_max_order() -> usize {
    MAX_ORDER_LIMIT
}

fn default_samples() -> usize {
    1000
}

fn default_seed() -> u64 {
    0x5EED
}

/// What to run and how wide. `modules: None` runs every module; an empty
/// list runs nothing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "camelCase")]
pub struct SuiteConfig {
    #[serde(default)]
    pub kind: Option<String>,
    #[serde(default)]
    pub sigma: Option<String>,
    #[serde(default = "default_max_order")]
    pub max_order: usize,
    #[serde(default)]
    pub modules: Option<Vec<String>>,
    /// Worker threads; 0 picks the rayon default.
    #[serde(default)]
    pub jobs: usize,
    #[serde(default)]
    pub out: Option<PathBuf>,
    /// Sampled order-4 squares for the Mal'tsev module.
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            kind: None,
            sigma: None,
            max_order: default_max_order(),
            modules: None,
            jobs: 0,
            out: None,
            samples: default_samples(),
            seed: default_seed(),
        }
    }
}

impl SuiteConfig {
    pub fn from_json(text: &str) -> Result<SuiteConfig, CliError> {
        let cfg: SuiteConfig = serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.max_order == 0 {
            return Err(CliError::Config("maxOrder must be at least 1".into()));
        }
        if self.max_order > MAX_ORDER_LIMIT {
            return Err(CliError::Core(sigma_lab::Error::BoundExceeded {
                what: "suite max order".into(),
                size: self.max_order,
                bound: MAX_ORDER_LIMIT,
            }));
        }
        self.kind()?;
        self.sigma()?;
        for m in self.modules.iter().flatten() {
            if !MODULES.contains(&m.as_str()) {
                return Err(CliError::Config(format!("unknown module {m:?}")));
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> Result<Option<Kind>, CliError> {
        self.kind
            .as_deref()
            .map(|k| Kind::parse(k).ok_or_else(|| CliError::Config(format!("unknown kind {k:?}"))))
            .transpose()
    }

    pub fn sigma(&self) -> Result<Option<SigmaClass>, CliError> {
        self.sigma
            .as_deref()
            .map(|s| SigmaClass::parse(s).ok_or_else(|| CliError::Config(format!("unknown class {s:?}"))))
            .transpose()
    }

    /// Selected modules in suite order.
    pub fn selected(&self) -> Vec<&'static str> {
        match &self.modules {
            None => MODULES.to_vec(),
            Some(list) => MODULES.iter().copied().filter(|m| list.iter().any(|x| x == m)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_rejected() {
        assert!(SuiteConfig::from_json(r#"{"maxOrder":3,"colour":1}"#).is_err());
        let cfg = SuiteConfig::from_json(r#"{"maxOrder":3,"modules":["maltsev"]}"#).unwrap();
        assert_eq!(cfg.selected(), vec!["maltsev"]);
        assert!(SuiteConfig::from_json(r#"{"maxOrder":9}"#).is_err());
        assert!(SuiteConfig::from_json(r#"{"modules":["nope"]}"#).is_err());
    }
}
