use std::fs;
use std::path::PathBuf;

use clap::ValueEnum;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// Settings shared by every subcommand. Command-line flags override `Z2REP_CONFIG`,
/// which overrides the defaults.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub level_cap: u32,
    /// `None` lets each command pick its own bound on `M`.
    pub m_cap: Option<u32>,
    pub samples: u32,
    pub seed: u64,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            level_cap: 16,
            m_cap: None,
            samples: 5,
            seed: 0,
            output_format: OutputFormat::Json,
            output_path: None,
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    level_cap: Option<u32>,
    #[serde(alias = "M_cap")]
    m_cap: Option<u32>,
    samples: Option<u32>,
    seed: Option<u64>,
    output_format: Option<OutputFormat>,
    output_path: Option<PathBuf>,
}

#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub level_cap: Option<u32>,
    pub m_cap: Option<u32>,
    pub samples: Option<u32>,
    pub seed: Option<u64>,
    pub format: Option<OutputFormat>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn resolve(env_path: Option<PathBuf>, flags: Overrides) -> Result<RunConfig, CliError> {
        let file = match env_path {
            Some(path) => {
                let text = fs::read_to_string(&path).map_err(|e| CliError::Config {
                    path: path.clone(),
                    reason: e.to_string(),
                })?;
                serde_json::from_str::<FileConfig>(&text).map_err(|e| CliError::Config {
                    path,
                    reason: e.to_string(),
                })?
            }
            None => FileConfig::default(),
        };
        let d = RunConfig::default();
        let cfg = RunConfig {
            level_cap: flags.level_cap.or(file.level_cap).unwrap_or(d.level_cap),
            m_cap: flags.m_cap.or(file.m_cap),
            samples: flags.samples.or(file.samples).unwrap_or(d.samples),
            seed: flags.seed.or(file.seed).unwrap_or(d.seed),
            output_format: flags.format.or(file.output_format).unwrap_or(d.output_format),
            output_path: flags.out.or(file.output_path),
        };
        if cfg.level_cap == 0 || cfg.m_cap == Some(0) {
            return Err(CliError::Usage("caps must be positive".into()));
        }
        Ok(cfg)
    }
}
