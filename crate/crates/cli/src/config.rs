//! Run configuration.
//!
//! A TOML file of plain `key = value` pairs, all optional:
//!
//! ```toml
//! convention = "standard"   # or "paper_literal"
//! lambda = 1.0              # trace form normalization, > 0
//! sign = -1                 # cocycle sign; defaults to the convention's pinned sign
//! boundary_samples = 1024   # points per boundary circle for sup norms
//! ```
//!
//! The path comes from `--config` or `KMLOOP_CONFIG`. `--convention` on the
//! command line overrides the file. Every report carries the SHA-256 of the
//! effective configuration, serialized back to TOML.

use std::path::Path;

use kmloop_core::laurent::GradingConfig;
use kmloop_core::{CocycleSign, Convention};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    convention: Option<String>,
    lambda: Option<f64>,
    sign: Option<i64>,
    boundary_samples: Option<usize>,
}

/// The effective configuration of one run.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub convention: String,
    pub lambda: f64,
    pub sign: i64,
    pub boundary_samples: usize,
}

impl RunConfig {
    pub fn load(path: Option<&Path>, convention_override: Option<&str>) -> Result<Self, CliError> {
        let raw = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| CliError::Io(p.display().to_string(), e))?;
                toml::from_str::<RawConfig>(&text).map_err(|e| CliError::Input(format!("config {}: {e}", p.display())))?
            }
            None => RawConfig::default(),
        };
        let name = convention_override
            .map(str::to_owned)
            .or(raw.convention)
            .unwrap_or_else(|| "standard".into());
        let convention = Convention::parse(&name)?;
        let sign = match raw.sign {
            Some(s) => CocycleSign::from_value(s)?.value() as i64,
            None => CocycleSign::pinned(convention).value() as i64,
        };
        let lambda = raw.lambda.unwrap_or(1.0);
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(CliError::Input(format!("lambda must be positive, got {lambda}")));
        }
        let boundary_samples = raw.boundary_samples.unwrap_or(GradingConfig::DEFAULT_SAMPLES);
        GradingConfig::with_samples(0, boundary_samples)?;
        Ok(RunConfig {
            convention: convention.as_str().into(),
            lambda,
            sign,
            boundary_samples,
        })
    }

    pub fn convention(&self) -> Convention {
        Convention::parse(&self.convention).expect("validated on load")
    }

    pub fn sign(&self) -> CocycleSign {
        CocycleSign::from_value(self.sign).expect("validated on load")
    }

    pub fn hash(&self) -> String {
        let text = toml::to_string(self).expect("plain fields serialize");
        hex::encode(Sha256::digest(text.as_bytes()))
    }
}
