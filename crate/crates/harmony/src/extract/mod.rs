//! Source extractors: build a [`RepositoryModel`] from a git repository or a
//! previously saved model file, and expose file contents at a revision.
//!
//! Git access goes through the `git` command-line tool with a pinned
//! invocation (see [`gitlog`]); renames are never detected, so a rename
//! appears as DELETE of the old path plus CREATE of the new one, and merge
//! commits carry no actions. Extraction is deterministic: the same repository
//! state always yields the same model, ids and orderings included.

pub mod gitlog;

use std::path::{Path, PathBuf};
use std::process::Command;

use thiserror::Error;

use crate::assemble::{assemble, AssembleError, ProtoAction, ProtoEvent};
use crate::model::{ActionKind, RepositoryModel, ValidationReport};
use crate::persist::{self, PersistError};

use gitlog::{parse_git_log, RawCommitRecord, GIT_LOG_ARGS};

/// Which extractor to use for a source.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtractorKind {
    Git,
    ModelFile,
}

/// One source to extract.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractorSpec {
    pub kind: ExtractorKind,
    pub location: PathBuf,
    pub source_name: String,
}

impl ExtractorSpec {
    pub fn git(location: impl Into<PathBuf>, source_name: impl Into<String>) -> Self {
        ExtractorSpec {
            kind: ExtractorKind::Git,
            location: location.into(),
            source_name: source_name.into(),
        }
    }

    pub fn model_file(location: impl Into<PathBuf>, source_name: impl Into<String>) -> Self {
        ExtractorSpec {
            kind: ExtractorKind::ModelFile,
            location: location.into(),
            source_name: source_name.into(),
        }
    }
}

/// Extraction failures. Messages carry the stable error code first, so they
/// stay grep-able wherever they surface (stderr, study reports, FFI).
#[derive(Debug, Error)]
pub enum ExtractError {
    #[error("NOT_A_REPOSITORY: {location} is not a git work tree or bare repository")]
    NotARepository { location: PathBuf },
    #[error("TOOL_FAILURE: git exited with status {status}: {stderr}")]
    ToolFailure { status: i32, stderr: String },
    #[error("PARSE_ERROR at byte {offset}: {message} in line {line:?}")]
    Parse {
        message: String,
        line: String,
        offset: u64,
    },
    #[error("INCOMPLETE_HISTORY: commit {child} references parent {parent} outside the extracted history")]
    IncompleteHistory { child: String, parent: String },
    #[error("INVALID_MODEL: extracted model failed validation:\n{0}")]
    InvalidModel(ValidationReport),
    #[error("NO_SUCH_REVISION: {revision}")]
    NoSuchRevision { revision: String },
    #[error("NO_SUCH_PATH_AT_REVISION: {path:?} does not exist at revision {revision}")]
    NoSuchPathAtRevision { revision: String, path: String },
    #[error(transparent)]
    Model(#[from] PersistError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Runs the extractor selected by `spec.kind`.
pub fn extract(spec: &ExtractorSpec) -> Result<RepositoryModel, ExtractError> {
    match spec.kind {
        ExtractorKind::Git => extract_git(spec),
        ExtractorKind::ModelFile => extract_model_file(spec),
    }
}

/// Builds a model from every commit reachable from any ref of a git
/// repository. One event per commit (parents in `%P` order), one author per
/// distinct (name, email), one item per path ever touched; change statuses map
/// A→CREATE, M→EDIT, T→EDIT, D→DELETE, and merge commits carry zero actions.
pub fn extract_git(spec: &ExtractorSpec) -> Result<RepositoryModel, ExtractError> {
    ensure_repository(&spec.location)?;

    let output = Command::new("git")
        .arg("-C")
        .arg(&spec.location)
        .args(GIT_LOG_ARGS)
        .output()?;
    if !output.status.success() {
        return Err(ExtractError::ToolFailure {
            status: output.status.code().unwrap_or(-1),
            stderr: String::from_utf8_lossy(&output.stderr).trim().to_string(),
        });
    }

    let records = parse_git_log(&output.stdout)?;
    let protos: Vec<ProtoEvent> = records.iter().map(proto_from_record).collect();

    let model = assemble(
        &spec.source_name,
        &spec.location.to_string_lossy(),
        &protos,
        &[],
        &[],
    )
    .map_err(|e| match e {
        AssembleError::UnresolvedParent { child, parent } => {
            ExtractError::IncompleteHistory { child, parent }
        }
        AssembleError::DuplicateNativeId { native_id } => ExtractError::Parse {
            message: format!("commit {native_id} listed twice"),
            line: String::new(),
            offset: 0,
        },
    })?;

    let report = model.validate();
    if !report.ok() {
        return Err(ExtractError::InvalidModel(report));
    }
    Ok(model)
}

fn proto_from_record(record: &RawCommitRecord) -> ProtoEvent {
    let email = if record.author_email.is_empty() {
        None
    } else {
        Some(record.author_email.clone())
    };
    // Merges carry no actions; changes already live on the parent branches.
    let actions = if record.parent_hashes.len() >= 2 {
        Vec::new()
    } else {
        record
            .raw_changes
            .iter()
            .map(|(status, path)| ProtoAction {
                kind: match status {
                    'A' => ActionKind::Create,
                    'M' | 'T' => ActionKind::Edit,
                    'D' => ActionKind::Delete,
                    other => unreachable!("parser admits only AMDT, got {other}"),
                },
                item_path: path.clone(),
            })
            .collect()
    };
    ProtoEvent {
        native_id: record.hash.clone(),
        parents: record.parent_hashes.clone(),
        authors: vec![(record.author_name.clone(), email)],
        timestamp: record.author_timestamp,
        message: record.subject.clone(),
        actions,
    }
}

/// Loads a previously saved model file. A non-empty `spec.source_name`
/// overrides the name stored in the file.
pub fn extract_model_file(spec: &ExtractorSpec) -> Result<RepositoryModel, ExtractError> {
    let override_name = if spec.source_name.is_empty() {
        None
    } else {
        Some(spec.source_name.as_str())
    };
    Ok(persist::load_model_with_name(&spec.location, override_name)?)
}

/// Returns the exact bytes of `item_path` as of the revision `event_native_id`
/// in the git repository `spec.location`.
pub fn item_content(
    spec: &ExtractorSpec,
    event_native_id: &str,
    item_path: &str,
) -> Result<Vec<u8>, ExtractError> {
    ensure_repository(&spec.location)?;

    let output = Command::new("git")
        .arg("-C")
        .arg(&spec.location)
        .arg("show")
        .arg(format!("{event_native_id}:{item_path}"))
        .output()?;
    if output.status.success() {
        return Ok(output.stdout);
    }

    // `git show` stderr conflates the two failure modes, so classify by
    // probing the revision itself.
    let probe = Command::new("git")
        .arg("-C")
        .arg(&spec.location)
        .arg("cat-file")
        .arg("-e")
        .arg(format!("{event_native_id}^{{commit}}"))
        .output()?;
    if probe.status.success() {
        Err(ExtractError::NoSuchPathAtRevision {
            revision: event_native_id.to_string(),
            path: item_path.to_string(),
        })
    } else {
        Err(ExtractError::NoSuchRevision {
            revision: event_native_id.to_string(),
        })
    }
}

fn ensure_repository(location: &Path) -> Result<(), ExtractError> {
    let not_a_repo = || ExtractError::NotARepository {
        location: location.to_path_buf(),
    };
    if !location.exists() {
        return Err(not_a_repo());
    }
    let status = Command::new("git")
        .arg("-C")
        .arg(location)
        .args(["rev-parse", "--git-dir"])
        .output()?;
    if status.status.success() {
        Ok(())
    } else {
        Err(not_a_repo())
    }
}
