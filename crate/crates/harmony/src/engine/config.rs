//! Declarative study configuration.
//!
//! A study is a single UTF-8 JSON document with top-level keys `sources`,
//! `analyses`, `post_processing` (optional, at most one entry), `workers`
//! (default 1) and `output_dir`. Unknown keys are schema errors.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use serde_json::Value;
use thiserror::Error;

use crate::extract::{ExtractorKind, ExtractorSpec};

/// One analysis instance to run, by unique name.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisDecl {
    pub name: String,
    /// Registered analysis kind implementing this declaration.
    pub kind: String,
    /// Names of analyses this one reads blackboard data from.
    pub depends_on: Vec<String>,
    /// Flat scalar parameters; defaulted per kind before delivery.
    pub params: BTreeMap<String, Value>,
}

/// A parsed, structurally valid study description.
#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub sources: Vec<ExtractorSpec>,
    pub analyses: Vec<AnalysisDecl>,
    pub post_processing: Option<AnalysisDecl>,
    pub workers: usize,
    pub output_dir: PathBuf,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("SCHEMA_ERROR: {message}")]
    Schema { message: String },
    #[error("MULTIPLE_POST_PROCESSING: a study admits one post-processing analysis, found {found}: {}", names.join(", "))]
    MultiplePostProcessing { found: usize, names: Vec<String> },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn schema(message: impl Into<String>) -> ConfigError {
    ConfigError::Schema {
        message: message.into(),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    sources: Vec<RawSource>,
    analyses: Vec<RawAnalysis>,
    #[serde(default)]
    post_processing: Option<OneOrMany>,
    #[serde(default)]
    workers: Option<u64>,
    output_dir: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSource {
    name: String,
    kind: String,
    location: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAnalysis {
    name: String,
    kind: String,
    #[serde(default)]
    depends_on: Vec<String>,
    #[serde(default)]
    params: BTreeMap<String, Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPost {
    name: String,
    kind: String,
    #[serde(default)]
    params: BTreeMap<String, Value>,
}

/// Accepts a single object or an array, so an over-specified study fails with
/// the dedicated multiple-post-processing error instead of a generic one.
#[derive(Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(RawPost),
    Many(Vec<RawPost>),
}

impl StudyConfig {
    pub fn from_file(path: &Path) -> Result<StudyConfig, ConfigError> {
        let bytes = fs::read(path)?;
        StudyConfig::from_json_slice(&bytes)
    }

    pub fn from_json_slice(bytes: &[u8]) -> Result<StudyConfig, ConfigError> {
        let raw: RawConfig =
            serde_json::from_slice(bytes).map_err(|e| schema(e.to_string()))?;

        if raw.sources.is_empty() {
            return Err(schema("`sources` must not be empty"));
        }
        let mut sources = Vec::with_capacity(raw.sources.len());
        let mut seen_names = std::collections::HashSet::new();
        for source in &raw.sources {
            if source.name.is_empty() {
                return Err(schema("source name must not be empty"));
            }
            if !seen_names.insert(source.name.as_str()) {
                return Err(schema(format!("duplicate source name {:?}", source.name)));
            }
            let kind = match source.kind.as_str() {
                "git" => ExtractorKind::Git,
                "model-file" => ExtractorKind::ModelFile,
                other => {
                    return Err(schema(format!(
                        "source {:?} has unknown kind {other:?} (expected \"git\" or \"model-file\")",
                        source.name
                    )))
                }
            };
            sources.push(ExtractorSpec {
                kind,
                location: PathBuf::from(&source.location),
                source_name: source.name.clone(),
            });
        }

        let analyses = raw
            .analyses
            .iter()
            .map(|a| {
                check_scalar_params(&a.name, &a.params)?;
                Ok(AnalysisDecl {
                    name: a.name.clone(),
                    kind: a.kind.clone(),
                    depends_on: a.depends_on.clone(),
                    params: a.params.clone(),
                })
            })
            .collect::<Result<Vec<_>, ConfigError>>()?;

        let post_processing = match raw.post_processing {
            None => None,
            Some(OneOrMany::One(p)) => Some(p),
            Some(OneOrMany::Many(mut many)) => {
                if many.len() > 1 {
                    return Err(ConfigError::MultiplePostProcessing {
                        found: many.len(),
                        names: many.into_iter().map(|p| p.name).collect(),
                    });
                }
                many.pop()
            }
        };
        let post_processing = post_processing
            .map(|p| {
                check_scalar_params(&p.name, &p.params)?;
                Ok::<_, ConfigError>(AnalysisDecl {
                    name: p.name,
                    kind: p.kind,
                    depends_on: Vec::new(),
                    params: p.params,
                })
            })
            .transpose()?;

        let workers = match raw.workers {
            None => 1,
            Some(0) => return Err(schema("`workers` must be at least 1")),
            Some(n) => usize::try_from(n).map_err(|_| schema("`workers` out of range"))?,
        };

        if raw.output_dir.is_empty() {
            return Err(schema("`output_dir` must not be empty"));
        }

        Ok(StudyConfig {
            sources,
            analyses,
            post_processing,
            workers,
            output_dir: PathBuf::from(raw.output_dir),
        })
    }
}

fn check_scalar_params(
    analysis: &str,
    params: &BTreeMap<String, Value>,
) -> Result<(), ConfigError> {
    for (key, value) in params {
        if value.is_array() || value.is_object() {
            return Err(schema(format!(
                "analysis {analysis:?} param {key:?} must be a scalar; complex inputs go through the blackboard or files"
            )));
        }
    }
    Ok(())
}
