//! Optional TOML config. Top-level keys `seed` and `format`; one table per
//! subcommand whose keys are that subcommand's long flag names. Flags given
//! on the command line win.

use std::collections::BTreeSet;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

pub const SECTIONS: [&str; 6] = [
    "accuracy",
    "region-map",
    "gain-surface",
    "montecarlo",
    "kraus-verify",
    "protocol",
];

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    pub seed: Option<u64>,
    pub format: Option<String>,
    table: toml::Table,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in config {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let table: toml::Table = text.parse()?;
        let mut seed = None;
        let mut format = None;
        for (key, value) in &table {
            match key.as_str() {
                "seed" => {
                    let s = value.as_integer().context("`seed` must be an integer")?;
                    seed = Some(u64::try_from(s).context("`seed` must be non-negative")?);
                }
                "format" => {
                    format = Some(value.as_str().context("`format` must be a string")?.to_string())
                }
                k if SECTIONS.contains(&k) => {
                    if !value.is_table() {
                        bail!("`{k}` must be a table");
                    }
                }
                k => bail!("unknown config key `{k}`"),
            }
        }
        Ok(ConfigFile {
            seed,
            format,
            table,
        })
    }

    pub fn section(&self, name: &str) -> Option<&toml::Table> {
        self.table.get(name).and_then(toml::Value::as_table)
    }
}

/// Overlays the flags actually given on top of the config section.
pub fn resolve<T>(flags: &T, section: Option<&toml::Table>) -> Result<T>
where
    T: Serialize + DeserializeOwned + clap::Args,
{
    let mut merged = Map::new();
    if let Some(table) = section {
        let known: BTreeSet<String> = T::augment_args(clap::Command::new("config"))
            .get_arguments()
            .filter_map(|a| a.get_long().map(str::to_string))
            .collect();
        for (key, value) in table {
            if !known.contains(key) {
                bail!("unknown config key `{key}`");
            }
            merged.insert(key.clone(), serde_json::to_value(value)?);
        }
    }
    if let Value::Object(given) = serde_json::to_value(flags)? {
        merged.extend(given);
    }
    serde_json::from_value(Value::Object(merged)).context("invalid config value")
}
