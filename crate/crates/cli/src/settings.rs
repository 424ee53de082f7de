//! Layered run configuration: built-in defaults, then a TOML file, then
//! `AMPSO_<FIELD>` environment variables, then command-line flags.

use std::path::Path;

use anyhow::{bail, Context};
use ampso::harness::{apply_overrides, ConfigOverrides};
use ampso::{AmpsoConfig, RngStream};
use serde_json::Value;

pub const ENV_PREFIX: &str = "AMPSO_";

/// Field names accepted in config files and environment variables.
pub fn field_names() -> Vec<String> {
    match serde_json::to_value(AmpsoConfig::default()) {
        Ok(Value::Object(map)) => map.keys().cloned().collect(),
        _ => Vec::new(),
    }
}

pub fn read_config_file(path: &Path) -> anyhow::Result<ConfigOverrides> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
    let table: toml::Table = toml::from_str(&text).with_context(|| format!("invalid TOML in {}", path.display()))?;
    match serde_json::to_value(table)? {
        Value::Object(map) => Ok(map),
        _ => bail!("config {} is not a table", path.display()),
    }
}

/// Overrides taken from `AMPSO_<FIELD>` variables, read through `lookup`.
pub fn env_overrides(lookup: impl Fn(&str) -> Option<String>) -> anyhow::Result<ConfigOverrides> {
    let mut out = ConfigOverrides::new();
    for field in field_names() {
        let var = format!("{ENV_PREFIX}{}", field.to_uppercase());
        if let Some(raw) = lookup(&var) {
            let value: Value = serde_json::from_str(raw.trim())
                .with_context(|| format!("{var}={raw} is not a number"))?;
            out.insert(field, value);
        }
    }
    Ok(out)
}

/// Merge the layers in precedence order and validate the result for `dim`.
pub fn resolve(
    dim: usize,
    config_file: Option<&Path>,
    env: &ConfigOverrides,
    fe_budget: Option<usize>,
) -> anyhow::Result<(AmpsoConfig, ConfigOverrides)> {
    let mut merged = match config_file {
        Some(p) => read_config_file(p)?,
        None => ConfigOverrides::new(),
    };
    merged.extend(env.clone());
    if let Some(b) = fe_budget {
        merged.insert("fe_budget".into(), b.into());
    }
    let config = apply_overrides(dim, &merged)?;
    config.validate()?;
    Ok((config, merged))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeedArg {
    Fixed(u64),
    Clock,
}

impl SeedArg {
    pub fn resolve(self) -> u64 {
        match self {
            SeedArg::Fixed(s) => s,
            SeedArg::Clock => RngStream::from_clock().seed(),
        }
    }
}

impl std::str::FromStr for SeedArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "clock" {
            return Ok(SeedArg::Clock);
        }
        s.parse()
            .map(SeedArg::Fixed)
            .map_err(|_| format!("`{s}` is neither an unsigned integer nor `clock`"))
    }
}
