//! End-to-end study runner: extract every source, persist the extracted
//! models, then plan and execute the configured analyses.

use std::path::Path;
use std::sync::Arc;

use thiserror::Error;

use crate::analyses::Registry;
use crate::engine::{self, ConfigError, ExecuteError, ExecutionOutcome, PlanError, StudyConfig};
use crate::extract::{self, ExtractError};
use crate::persist::{self, PersistError};

#[derive(Debug, Error)]
pub enum StudyError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Plan(#[from] PlanError),
    #[error("extracting source {source:?}: {error}")]
    Extract {
        source: String,
        #[source]
        error: ExtractError,
    },
    #[error("saving model for source {source:?}: {error}")]
    SaveModel {
        source: String,
        #[source]
        error: PersistError,
    },
    #[error(transparent)]
    Execute(#[from] ExecuteError),
}

/// Runs a study: plans, extracts each source (saving the model file next to
/// the source's results as `model.harmony.json`), executes all analyses, and
/// returns the report plus the final blackboard contents.
pub fn run_study(config: &StudyConfig, registry: &Registry) -> Result<ExecutionOutcome, StudyError> {
    let plan = engine::plan(config, registry)?;

    let mut models = Vec::with_capacity(config.sources.len());
    for (idx, spec) in config.sources.iter().enumerate() {
        let mut model = extract::extract(spec).map_err(|error| StudyError::Extract {
            source: spec.source_name.clone(),
            error,
        })?;
        model.assign_source_id(idx as u32);

        let dir = config.output_dir.join(&spec.source_name);
        std::fs::create_dir_all(&dir).map_err(|e| StudyError::SaveModel {
            source: spec.source_name.clone(),
            error: PersistError::Io(e),
        })?;
        persist::save_model(&model, &dir.join("model.harmony.json")).map_err(|error| {
            StudyError::SaveModel {
                source: spec.source_name.clone(),
                error,
            }
        })?;

        models.push(Arc::new(model));
    }

    Ok(engine::execute(&plan, &models, config, registry)?)
}

/// Convenience wrapper: parse the configuration file, then run the study.
pub fn run_study_file(path: &Path, registry: &Registry) -> Result<ExecutionOutcome, StudyError> {
    let config = StudyConfig::from_file(path)?;
    run_study(&config, registry)
}
