use std::path::{Path, PathBuf};

use serde::Deserialize;
use wpc_core::D_MAX_CAP;

use crate::CliError;

pub const CONFIG_FILE: &str = "wpc.toml";
pub const ATLAS_DIR_ENV: &str = "WPC_ATLAS_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Text,
    Json,
}

/// Settings read from `wpc.toml`; every key is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    d_max_cap: Option<i64>,
    threads: Option<usize>,
    atlas_dir: Option<PathBuf>,
    format: Option<Format>,
    seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub d_max_cap: i64,
    pub threads: Option<usize>,
    pub atlas_dir: PathBuf,
    pub format: Format,
    pub seed: u64,
}

/// Values given on the command line.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub threads: Option<usize>,
    pub atlas_dir: Option<PathBuf>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
}

impl Config {
    /// Flags beat the environment, which beats the config file.
    pub fn load(
        dir: &Path,
        env_atlas: Option<PathBuf>,
        flags: &Overrides,
    ) -> Result<Config, CliError> {
        let path = dir.join(CONFIG_FILE);
        let file = match std::fs::read_to_string(&path) {
            Ok(text) => toml::from_str::<FileConfig>(&text)
                .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => FileConfig::default(),
            Err(e) => return Err(CliError::usage(format!("{}: {e}", path.display()))),
        };
        let config = Config {
            d_max_cap: file.d_max_cap.unwrap_or(D_MAX_CAP),
            threads: flags.threads.or(file.threads),
            atlas_dir: flags
                .atlas_dir
                .clone()
                .or(env_atlas)
                .or(file.atlas_dir)
                .unwrap_or_else(|| PathBuf::from("atlas")),
            format: flags.format.or(file.format).unwrap_or_default(),
            seed: flags.seed.or(file.seed).unwrap_or(0),
        };
        if !(1..=D_MAX_CAP).contains(&config.d_max_cap) {
            return Err(CliError::usage(format!(
                "d_max_cap must be in 1..={D_MAX_CAP}"
            )));
        }
        if config.threads == Some(0) {
            return Err(CliError::usage("threads must be at least 1"));
        }
        Ok(config)
    }
}
