//! Analysis plugins and their execution contexts.
//!
//! Two service interfaces exist: [`Analysis`] runs once per source and is the
//! standard way to implement an analysis; [`PostProcessingAnalysis`] runs once
//! per study, after every per-source analysis, over the whole collection of
//! sources. Implementations are registered in a [`Registry`] at build time.
//!
//! Analyses must be pure with respect to (model, dependency blackboard values,
//! params): the engine re-runs them freely and expects byte-identical outputs.

pub mod commit_stats;
pub mod item_activity;
pub mod ownership;
pub mod ownership_summary;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::Value;
use thiserror::Error;

use crate::engine::blackboard::{Blackboard, BlackboardError, BlackboardView, Scope};
use crate::engine::config::AnalysisDecl;
use crate::model::RepositoryModel;

pub use ownership::{Classification, OwnershipRecord};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error("MISSING_DEPENDENCY_DATA: {detail}")]
    MissingDependencyData { detail: String },
    #[error(transparent)]
    Blackboard(#[from] BlackboardError),
    #[error("BAD_PARAM: {key:?}: {expected}")]
    BadParam { key: String, expected: String },
    #[error("{0}")]
    Failed(String),
}

/// A per-source analysis plugin.
pub trait Analysis: Send + Sync {
    /// The registered kind identifier, referenced by study configurations.
    fn kind(&self) -> &'static str;

    /// Parameter defaults, merged under the declaration's params.
    fn default_params(&self) -> BTreeMap<String, Value> {
        BTreeMap::new()
    }

    fn run(&self, ctx: &mut AnalysisContext<'_>) -> Result<(), AnalysisError>;
}

/// The single study-level analysis, executed after all per-source analyses.
pub trait PostProcessingAnalysis: Send + Sync {
    fn kind(&self) -> &'static str;

    fn default_params(&self) -> BTreeMap<String, Value> {
        BTreeMap::new()
    }

    fn run(&self, ctx: &mut PostContext<'_>) -> Result<(), AnalysisError>;
}

/// Everything one per-source analysis execution may touch: the (read-only)
/// model, a dependency-gated blackboard view, defaulted params, and the
/// record sink for this (source, analysis) result file.
pub struct AnalysisContext<'a> {
    model: &'a RepositoryModel,
    blackboard: BlackboardView<'a>,
    params: BTreeMap<String, Value>,
    name: String,
    /// (name, kind) of the direct dependencies, for producer lookup.
    deps: Vec<(String, String)>,
    records: Vec<Value>,
}

impl<'a> AnalysisContext<'a> {
    pub fn new(
        model: &'a RepositoryModel,
        blackboard: BlackboardView<'a>,
        params: BTreeMap<String, Value>,
        name: impl Into<String>,
        deps: Vec<(String, String)>,
    ) -> Self {
        AnalysisContext {
            model,
            blackboard,
            params,
            name: name.into(),
            deps,
            records: Vec::new(),
        }
    }

    pub fn model(&self) -> &'a RepositoryModel {
        self.model
    }

    pub fn blackboard(&self) -> &BlackboardView<'a> {
        &self.blackboard
    }

    pub fn params(&self) -> &BTreeMap<String, Value> {
        &self.params
    }

    /// This execution's declaration name (the blackboard producer name).
    pub fn name(&self) -> &str {
        &self.name
    }

    /// The name of the first direct dependency of the given kind, if any.
    pub fn dep_of_kind(&self, kind: &str) -> Option<&str> {
        self.deps
            .iter()
            .find(|(_, k)| k == kind)
            .map(|(name, _)| name.as_str())
    }

    /// Appends one record to this execution's result file.
    pub fn emit(&mut self, record: Value) {
        self.records.push(record);
    }

    pub fn param_f64(&self, key: &str) -> Result<f64, AnalysisError> {
        match self.params.get(key) {
            None => Err(AnalysisError::BadParam {
                key: key.to_string(),
                expected: "missing (no default registered)".to_string(),
            }),
            Some(value) => value.as_f64().ok_or_else(|| AnalysisError::BadParam {
                key: key.to_string(),
                expected: format!("number, found {value}"),
            }),
        }
    }

    pub(crate) fn into_records(self) -> Vec<Value> {
        self.records
    }
}

/// Context of the post-processing analysis: every source's model, the full
/// blackboard, and the study-level record sink.
pub struct PostContext<'a> {
    sources: &'a [(String, Arc<RepositoryModel>)],
    board: &'a Blackboard,
    analyses: &'a [AnalysisDecl],
    params: BTreeMap<String, Value>,
    name: String,
    records: Vec<Value>,
}

impl<'a> PostContext<'a> {
    pub fn new(
        sources: &'a [(String, Arc<RepositoryModel>)],
        board: &'a Blackboard,
        analyses: &'a [AnalysisDecl],
        params: BTreeMap<String, Value>,
        name: impl Into<String>,
    ) -> Self {
        PostContext {
            sources,
            board,
            analyses,
            params,
            name: name.into(),
            records: Vec::new(),
        }
    }

    /// All sources of the study, in configuration order.
    pub fn sources(&self) -> &[(String, Arc<RepositoryModel>)] {
        self.sources
    }

    /// The per-source analysis declarations of the study.
    pub fn analyses(&self) -> &[AnalysisDecl] {
        self.analyses
    }

    pub fn params(&self) -> &BTreeMap<String, Value> {
        &self.params
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Reads a per-source blackboard entry. Post-processing sees everything.
    pub fn get_source(
        &self,
        source: &str,
        producer: &str,
        key: &str,
    ) -> Result<Value, BlackboardError> {
        self.board
            .get(&Scope::Source(source.to_string()), producer, key)
    }

    /// Reads a study-global blackboard entry.
    pub fn get_global(&self, producer: &str, key: &str) -> Result<Value, BlackboardError> {
        self.board.get(&Scope::Global, producer, key)
    }

    /// Publishes a study-global value under this analysis's own name.
    pub fn put_global(&self, key: &str, value: Value) -> Result<(), BlackboardError> {
        self.board.put(Scope::Global, &self.name, key, value)
    }

    pub fn emit(&mut self, record: Value) {
        self.records.push(record);
    }

    pub(crate) fn into_records(self) -> Vec<Value> {
        self.records
    }
}

/// Build-time registry of analysis implementations, keyed by kind.
#[derive(Clone, Default)]
pub struct Registry {
    per_source: BTreeMap<&'static str, Arc<dyn Analysis>>,
    post: BTreeMap<&'static str, Arc<dyn PostProcessingAnalysis>>,
}

impl Registry {
    pub fn new() -> Self {
        Registry::default()
    }

    /// The registry with all built-in analyses.
    pub fn builtin() -> Self {
        let mut registry = Registry::new();
        registry.register(Arc::new(commit_stats::CommitStats));
        registry.register(Arc::new(item_activity::ItemActivity));
        registry.register(Arc::new(ownership::Ownership));
        registry.register_post(Arc::new(ownership_summary::OwnershipSummary));
        registry
    }

    /// Registers a per-source analysis. Panics on a duplicate kind: kinds are
    /// a build-time namespace.
    pub fn register(&mut self, analysis: Arc<dyn Analysis>) {
        let kind = analysis.kind();
        if self.per_source.insert(kind, analysis).is_some() || self.post.contains_key(kind) {
            panic!("analysis kind {kind:?} registered twice");
        }
    }

    /// Registers a post-processing analysis. Panics on a duplicate kind.
    pub fn register_post(&mut self, analysis: Arc<dyn PostProcessingAnalysis>) {
        let kind = analysis.kind();
        if self.post.insert(kind, analysis).is_some() || self.per_source.contains_key(kind) {
            panic!("analysis kind {kind:?} registered twice");
        }
    }

    pub fn has_kind(&self, kind: &str) -> bool {
        self.per_source.contains_key(kind)
    }

    pub fn has_post_kind(&self, kind: &str) -> bool {
        self.post.contains_key(kind)
    }

    pub fn get(&self, kind: &str) -> Option<Arc<dyn Analysis>> {
        self.per_source.get(kind).cloned()
    }

    pub fn get_post(&self, kind: &str) -> Option<Arc<dyn PostProcessingAnalysis>> {
        self.post.get(kind).cloned()
    }

    /// Every registered kind, sorted.
    pub fn kinds(&self) -> Vec<&'static str> {
        let mut kinds: Vec<&'static str> = self
            .per_source
            .keys()
            .chain(self.post.keys())
            .copied()
            .collect();
        kinds.sort_unstable();
        kinds
    }
}
