use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::BenchmarkModel;
use crate::series::min_embed_length;
use crate::training::{TrainConfig, MIN_PATTERNS};

/// Where the series comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Model1,
    Model2,
    Model3,
    /// `{"csv": "path/to/file.csv"}`
    Csv(PathBuf),
}

impl Source {
    pub fn benchmark(&self) -> Option<BenchmarkModel> {
        match self {
            Source::Model1 => Some(BenchmarkModel::ModelI),
            Source::Model2 => Some(BenchmarkModel::ModelII),
            Source::Model3 => Some(BenchmarkModel::ModelIII),
            Source::Csv(_) => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transform {
    None,
    NormalizedDifference,
}

/// A full rolling-window experiment. Omitted JSON fields take the defaults
/// below; unknown fields are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub source: Source,
    /// Defaults to `normalized_difference` for CSV input, `none` otherwise.
    pub transform: Option<Transform>,
    pub m: usize,
    /// Defaults to 3 for CSV input and 1 for the generated models.
    pub tau: Option<usize>,
    pub train_size: usize,
    pub test_size: usize,
    pub step: usize,
    pub train_config: TrainConfig,
    pub n_cells: usize,
    /// Length of generated series; ignored for CSV input.
    pub series_length: usize,
    /// Seed for generated series; defaults to `train_config.seed`.
    pub series_seed: Option<u64>,
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            source: Source::Model1,
            transform: None,
            m: 2,
            tau: None,
            train_size: 200,
            test_size: 100,
            step: 100,
            train_config: TrainConfig::default(),
            n_cells: 2,
            series_length: 1200,
            series_seed: None,
            output_dir: PathBuf::from("output"),
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn transform(&self) -> Transform {
        self.transform.unwrap_or(match self.source {
            Source::Csv(_) => Transform::NormalizedDifference,
            _ => Transform::None,
        })
    }

    pub fn tau(&self) -> usize {
        self.tau.unwrap_or(match self.source {
            Source::Csv(_) => 3,
            _ => 1,
        })
    }

    pub fn series_seed(&self) -> u64 {
        self.series_seed.unwrap_or(self.train_config.seed)
    }

    /// Training patterns per fold once left-edge history is dropped.
    pub fn effective_train_patterns(&self) -> usize {
        self.train_size + 1 - min_embed_length(self.m, self.tau())
    }

    /// Copy with every optional field made explicit.
    pub fn resolved(&self) -> Self {
        Self {
            transform: Some(self.transform()),
            tau: Some(self.tau()),
            series_seed: Some(self.series_seed()),
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        if self.m < 1 || self.tau() < 1 {
            return fail("m and tau must be at least 1".into());
        }
        if self.train_size < min_embed_length(self.m, self.tau()) {
            return fail(format!(
                "train_size must exceed (m-1)*tau + 1 = {}",
                min_embed_length(self.m, self.tau()) - 1
            ));
        }
        if self.effective_train_patterns() < MIN_PATTERNS {
            return fail(format!("train_size leaves fewer than {MIN_PATTERNS} training patterns"));
        }
        if self.test_size < 1 || self.step < 1 {
            return fail("test_size and step must be at least 1".into());
        }
        if self.n_cells < 2 {
            return fail("n_cells must be at least 2".into());
        }
        self.train_config.validate()
    }
}
