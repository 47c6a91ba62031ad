//! Library surface of the experiment runner, reused by the test suites.

pub mod config;
pub mod runner;

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{Context, Result};

/// Assembles the effective key map: config file (when given) plus
/// command-line overrides, which win.
pub fn effective_map(
    config_path: Option<&Path>,
    overrides: &[(&str, Option<String>)],
) -> Result<BTreeMap<String, String>> {
    let mut map = match config_path {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("cannot read config file {}", path.display()))?;
            config::parse_document(&text)?
        }
        None => BTreeMap::new(),
    };
    for (key, value) in overrides {
        if let Some(v) = value {
            // An explicit budget override displaces a config-file
            // termination; flags win.
            if *key == "budget" {
                map.remove("termination");
            }
            map.insert((*key).to_string(), v.clone());
        }
    }
    Ok(map)
}
