use std::path::Path;

use serde::Deserialize;
use uag_core::Limits;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

/// Settings read from `--config`, each overridable on the command line.
#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub format: Format,
    pub threads: usize,
    pub max_carrier: u64,
    pub max_points: u64,
    pub max_closure: u64,
    pub witness_depth: u32,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        let l = Limits::default();
        RunConfig {
            format: Format::Json,
            threads: 1,
            max_carrier: l.max_carrier,
            max_points: l.max_points,
            max_closure: l.max_closure,
            witness_depth: l.witness_depth,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let cfg: RunConfig = toml::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), String> {
        let bounds = [
            ("threads", self.threads as u64),
            ("max_carrier", self.max_carrier),
            ("max_points", self.max_points),
            ("max_closure", self.max_closure),
        ];
        for (name, v) in bounds {
            if v == 0 {
                return Err(format!("{name} must be positive"));
            }
        }
        Ok(())
    }

    pub fn limits(&self) -> Limits {
        Limits {
            max_carrier: self.max_carrier,
            max_points: self.max_points,
            max_closure: self.max_closure,
            witness_depth: self.witness_depth,
        }
    }
}
