//! The blackboard analyses exchange data through.
//!
//! Entries are keyed by (scope, producer analysis name, key) and written at
//! most once per run, so the final contents are independent of scheduling.
//! Analyses read through a [`BlackboardView`] that only admits producers in
//! the reader's transitive dependency set; an undeclared read is a hard error
//! because dependency gating is the one ordering guarantee the engine gives.

use std::collections::BTreeMap;
use std::sync::Mutex;

use serde_json::{Map, Value};
use thiserror::Error;

/// Where an entry is visible: one source, or the whole study.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Scope {
    Global,
    Source(String),
}

impl std::fmt::Display for Scope {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Scope::Global => f.write_str("GLOBAL"),
            Scope::Source(name) => write!(f, "source:{name}"),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BlackboardError {
    #[error("DUPLICATE_WRITE: ({scope}, {producer}, {key}) was already written this run")]
    DuplicateWrite {
        scope: Scope,
        producer: String,
        key: String,
    },
    #[error("NOT_FOUND: no entry ({scope}, {producer}, {key})")]
    NotFound {
        scope: Scope,
        producer: String,
        key: String,
    },
    #[error("UNDECLARED_DEPENDENCY: {reader:?} reads from {producer:?} without depending on it")]
    UndeclaredDependency { reader: String, producer: String },
}

/// Write-once keyed store, safe for concurrent producers.
#[derive(Debug, Default)]
pub struct Blackboard {
    entries: Mutex<BTreeMap<(Scope, String, String), Value>>,
}

impl Blackboard {
    pub fn new() -> Self {
        Blackboard::default()
    }

    /// Stores a value; each (scope, producer, key) triple may be written at
    /// most once per run.
    pub fn put(
        &self,
        scope: Scope,
        producer: &str,
        key: &str,
        value: Value,
    ) -> Result<(), BlackboardError> {
        let mut entries = self.entries.lock().expect("blackboard lock");
        let triple = (scope, producer.to_string(), key.to_string());
        if entries.contains_key(&triple) {
            return Err(BlackboardError::DuplicateWrite {
                scope: triple.0,
                producer: triple.1,
                key: triple.2,
            });
        }
        entries.insert(triple, value);
        Ok(())
    }

    /// Reads a stored value back, unmodified.
    pub fn get(&self, scope: &Scope, producer: &str, key: &str) -> Result<Value, BlackboardError> {
        let entries = self.entries.lock().expect("blackboard lock");
        entries
            .get(&(scope.clone(), producer.to_string(), key.to_string()))
            .cloned()
            .ok_or_else(|| BlackboardError::NotFound {
                scope: scope.clone(),
                producer: producer.to_string(),
                key: key.to_string(),
            })
    }

    /// Deterministic dump of the full store:
    /// `{"global": {producer: {key: value}}, "sources": {source: {producer: {key: value}}}}`.
    pub fn snapshot(&self) -> Value {
        let entries = self.entries.lock().expect("blackboard lock");
        let mut global = Map::new();
        let mut sources = Map::new();
        for ((scope, producer, key), value) in entries.iter() {
            let bucket = match scope {
                Scope::Global => &mut global,
                Scope::Source(name) => sources
                    .entry(name.clone())
                    .or_insert_with(|| Value::Object(Map::new()))
                    .as_object_mut()
                    .expect("source bucket is an object"),
            };
            bucket
                .entry(producer.clone())
                .or_insert_with(|| Value::Object(Map::new()))
                .as_object_mut()
                .expect("producer bucket is an object")
                .insert(key.clone(), value.clone());
        }
        let mut root = Map::new();
        root.insert("global".to_string(), Value::Object(global));
        root.insert("sources".to_string(), Value::Object(sources));
        Value::Object(root)
    }
}

/// A per-analysis handle: writes under the analysis's own name, reads gated by
/// its transitive dependency set.
pub struct BlackboardView<'a> {
    board: &'a Blackboard,
    scope: Scope,
    analysis: String,
    allowed_producers: std::collections::BTreeSet<String>,
}

impl<'a> BlackboardView<'a> {
    pub fn new(
        board: &'a Blackboard,
        scope: Scope,
        analysis: impl Into<String>,
        allowed_producers: std::collections::BTreeSet<String>,
    ) -> Self {
        BlackboardView {
            board,
            scope,
            analysis: analysis.into(),
            allowed_producers,
        }
    }

    /// Publishes a value in this analysis's scope under its own name.
    pub fn put(&self, key: &str, value: Value) -> Result<(), BlackboardError> {
        self.board
            .put(self.scope.clone(), &self.analysis, key, value)
    }

    /// Publishes a study-global value under this analysis's own name.
    pub fn put_global(&self, key: &str, value: Value) -> Result<(), BlackboardError> {
        self.board.put(Scope::Global, &self.analysis, key, value)
    }

    /// Reads a value another analysis produced in this scope. The producer
    /// must be in the reader's transitive dependency set.
    pub fn get(&self, producer: &str, key: &str) -> Result<Value, BlackboardError> {
        if !self.allowed_producers.contains(producer) {
            return Err(BlackboardError::UndeclaredDependency {
                reader: self.analysis.clone(),
                producer: producer.to_string(),
            });
        }
        self.board.get(&self.scope, producer, key)
    }
}
