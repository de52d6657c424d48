//! Canonical, deterministic model serialization.
//!
//! A model document is a single UTF-8 JSON file (conventionally
//! `*.harmony.json`): object keys in lexicographic order, no insignificant
//! whitespace, one trailing newline, and all arrays in canonical order —
//! authors by (name, email), items by path, events in topological order.
//! Internal ids are never written; identity is natural-key or positional, and
//! ids are reassigned on load. Loading re-validates, so no malformed history
//! can enter through this path.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::assemble::{assemble, AssembleError, ProtoAction, ProtoEvent};
use crate::model::{ActionKind, RepositoryModel, ValidationReport};

/// The one document version this build reads and writes.
pub const FORMAT_VERSION: u64 = 1;

#[derive(Debug, Error)]
pub enum PersistError {
    /// The model breaks an integrity rule; serialization and loading both
    /// refuse it. Carries the full validation report.
    #[error("INVALID_MODEL: model failed validation:\n{0}")]
    InvalidModel(ValidationReport),
    /// The document does not conform to the schema. The pointer locates the
    /// offending field, JSON-pointer style.
    #[error("SCHEMA_ERROR at {pointer}: {message}")]
    Schema { pointer: String, message: String },
    #[error("UNSUPPORTED_VERSION: format_version {found} (this build reads version 1)")]
    UnsupportedVersion { found: u64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn schema(pointer: impl Into<String>, message: impl Into<String>) -> PersistError {
    PersistError::Schema {
        pointer: pointer.into(),
        message: message.into(),
    }
}

/// Serializes a model to its canonical byte representation.
///
/// Refuses models that fail validation: the file format only ever carries
/// well-formed histories.
pub fn model_to_canonical_json(model: &RepositoryModel) -> Result<Vec<u8>, PersistError> {
    let report = model.validate();
    if !report.ok() {
        return Err(PersistError::InvalidModel(report));
    }

    // Canonical author order; event author references are indices into it.
    let mut author_order: Vec<usize> = (0..model.authors().len()).collect();
    author_order.sort_by(|&a, &b| {
        let (x, y) = (&model.authors()[a], &model.authors()[b]);
        (&x.name, &x.email).cmp(&(&y.name, &y.email))
    });
    let mut author_position = vec![0usize; model.authors().len()];
    for (pos, &idx) in author_order.iter().enumerate() {
        author_position[idx] = pos;
    }
    let authors: Vec<Value> = author_order
        .iter()
        .map(|&idx| {
            let author = &model.authors()[idx];
            json!({
                "email": author.email,
                "name": author.name,
            })
        })
        .collect();

    let mut paths: Vec<&str> = model.items().iter().map(|i| i.path.as_str()).collect();
    paths.sort_unstable();
    let items: Vec<Value> = paths.iter().map(|p| json!({ "path": p })).collect();

    let order = model
        .topo_order()
        .expect("validated model has an acyclic parent relation");
    let events: Vec<Value> = order
        .iter()
        .map(|id| {
            let event = model.event(*id);
            let parents: Vec<&str> = event
                .parents
                .iter()
                .map(|p| model.event(*p).native_id.as_str())
                .collect();
            let event_authors: Vec<u64> = event
                .authors
                .iter()
                .map(|a| author_position[a.index()] as u64)
                .collect();
            let mut action_ids: Vec<_> = event.actions.clone();
            action_ids.sort_by_key(|a| model.action(*a).ordinal);
            let actions: Vec<Value> = action_ids
                .iter()
                .enumerate()
                .map(|(ordinal, a)| {
                    let action = model.action(*a);
                    json!({
                        "item_path": model.item(action.item).path,
                        "kind": action.kind.as_str(),
                        "ordinal": ordinal as u64,
                    })
                })
                .collect();
            json!({
                "actions": actions,
                "authors": event_authors,
                "message": event.message,
                "native_id": event.native_id,
                "parents": parents,
                "timestamp": event.timestamp,
            })
        })
        .collect();

    let document = json!({
        "authors": authors,
        "events": events,
        "format_version": FORMAT_VERSION,
        "items": items,
        "source": {
            "location": model.source().location,
            "name": model.source().name,
        },
    });

    let mut bytes = serde_json::to_vec(&document).expect("canonical document serializes");
    bytes.push(b'\n');
    Ok(bytes)
}

/// Writes the canonical document to `path`, returning the byte count.
pub fn save_model(model: &RepositoryModel, path: &Path) -> Result<u64, PersistError> {
    let bytes = model_to_canonical_json(model)?;
    fs::write(path, &bytes)?;
    Ok(bytes.len() as u64)
}

/// Loads and validates a model document.
pub fn load_model(path: &Path) -> Result<RepositoryModel, PersistError> {
    let bytes = fs::read(path)?;
    model_from_slice(&bytes, None)
}

/// Loads a model document, optionally overriding the stored source name.
pub fn load_model_with_name(
    path: &Path,
    source_name: Option<&str>,
) -> Result<RepositoryModel, PersistError> {
    let bytes = fs::read(path)?;
    model_from_slice(&bytes, source_name)
}

/// Parses, cross-checks and validates a document from memory.
pub fn model_from_slice(
    bytes: &[u8],
    source_name: Option<&str>,
) -> Result<RepositoryModel, PersistError> {
    let value: Value =
        serde_json::from_slice(bytes).map_err(|e| schema("/", format!("invalid JSON: {e}")))?;
    let root = as_object(&value, "/")?;
    check_keys(
        root,
        "/",
        &["authors", "events", "format_version", "items", "source"],
    )?;

    let version = as_u64(require(root, "/", "format_version")?, "/format_version")?;
    if version != FORMAT_VERSION {
        return Err(PersistError::UnsupportedVersion { found: version });
    }

    let source = as_object(require(root, "/", "source")?, "/source")?;
    check_keys(source, "/source", &["location", "name"])?;
    let name = as_str(require(source, "/source", "name")?, "/source/name")?;
    let location = as_str(require(source, "/source", "location")?, "/source/location")?;

    let authors_value = as_array(require(root, "/", "authors")?, "/authors")?;
    let mut authors: Vec<(String, Option<String>)> = Vec::with_capacity(authors_value.len());
    let mut seen_authors = HashSet::new();
    for (i, entry) in authors_value.iter().enumerate() {
        let ptr = format!("/authors/{i}");
        let obj = as_object(entry, &ptr)?;
        check_keys(obj, &ptr, &["email", "name"])?;
        let author_name = as_str(require(obj, &ptr, "name")?, &format!("{ptr}/name"))?;
        let email = match require(obj, &ptr, "email")? {
            Value::Null => None,
            Value::String(s) => Some(s.clone()),
            _ => return Err(schema(format!("{ptr}/email"), "expected string or null")),
        };
        if !seen_authors.insert((author_name.to_string(), email.clone())) {
            return Err(schema(ptr, "duplicate author identity"));
        }
        authors.push((author_name.to_string(), email));
    }

    let items_value = as_array(require(root, "/", "items")?, "/items")?;
    let mut item_paths: Vec<String> = Vec::with_capacity(items_value.len());
    let mut seen_paths = HashSet::new();
    for (i, entry) in items_value.iter().enumerate() {
        let ptr = format!("/items/{i}");
        let obj = as_object(entry, &ptr)?;
        check_keys(obj, &ptr, &["path"])?;
        let path = as_str(require(obj, &ptr, "path")?, &format!("{ptr}/path"))?;
        if !seen_paths.insert(path.to_string()) {
            return Err(schema(format!("{ptr}/path"), "duplicate item path"));
        }
        item_paths.push(path.to_string());
    }
    let known_paths: HashSet<&str> = item_paths.iter().map(String::as_str).collect();

    let events_value = as_array(require(root, "/", "events")?, "/events")?;
    let mut native_ids = HashSet::new();
    for (i, entry) in events_value.iter().enumerate() {
        let ptr = format!("/events/{i}");
        let obj = as_object(entry, &ptr)?;
        let native_id = as_str(require(obj, &ptr, "native_id")?, &format!("{ptr}/native_id"))?;
        if !native_ids.insert(native_id) {
            return Err(schema(format!("{ptr}/native_id"), "duplicate native id"));
        }
    }

    let mut protos: Vec<ProtoEvent> = Vec::with_capacity(events_value.len());
    for (i, entry) in events_value.iter().enumerate() {
        let ptr = format!("/events/{i}");
        let obj = as_object(entry, &ptr)?;
        check_keys(
            obj,
            &ptr,
            &["actions", "authors", "message", "native_id", "parents", "timestamp"],
        )?;
        let native_id = as_str(require(obj, &ptr, "native_id")?, &format!("{ptr}/native_id"))?;
        let message = as_str(require(obj, &ptr, "message")?, &format!("{ptr}/message"))?;
        let timestamp = as_i64(require(obj, &ptr, "timestamp")?, &format!("{ptr}/timestamp"))?;

        let parents_value = as_array(require(obj, &ptr, "parents")?, &format!("{ptr}/parents"))?;
        let mut parents = Vec::with_capacity(parents_value.len());
        for (j, parent) in parents_value.iter().enumerate() {
            let pptr = format!("{ptr}/parents/{j}");
            let hash = as_str(parent, &pptr)?;
            if !native_ids.contains(hash) {
                return Err(schema(pptr, format!("unknown parent native id {hash:?}")));
            }
            parents.push(hash.to_string());
        }

        let authors_idx = as_array(require(obj, &ptr, "authors")?, &format!("{ptr}/authors"))?;
        let mut event_authors = Vec::with_capacity(authors_idx.len());
        for (j, author) in authors_idx.iter().enumerate() {
            let aptr = format!("{ptr}/authors/{j}");
            let idx = as_u64(author, &aptr)? as usize;
            let key = authors
                .get(idx)
                .ok_or_else(|| schema(&aptr, format!("author index {idx} out of range")))?;
            event_authors.push(key.clone());
        }

        let actions_value = as_array(require(obj, &ptr, "actions")?, &format!("{ptr}/actions"))?;
        let mut actions = Vec::with_capacity(actions_value.len());
        for (j, action) in actions_value.iter().enumerate() {
            let aptr = format!("{ptr}/actions/{j}");
            let obj = as_object(action, &aptr)?;
            check_keys(obj, &aptr, &["item_path", "kind", "ordinal"])?;
            let item_path = as_str(require(obj, &aptr, "item_path")?, &format!("{aptr}/item_path"))?;
            if !known_paths.contains(item_path) {
                return Err(schema(
                    format!("{aptr}/item_path"),
                    format!("unknown item path {item_path:?}"),
                ));
            }
            let kind = match as_str(require(obj, &aptr, "kind")?, &format!("{aptr}/kind"))? {
                "CREATE" => ActionKind::Create,
                "EDIT" => ActionKind::Edit,
                "DELETE" => ActionKind::Delete,
                other => {
                    return Err(schema(
                        format!("{aptr}/kind"),
                        format!("unknown action kind {other:?}"),
                    ))
                }
            };
            let ordinal = as_u64(require(obj, &aptr, "ordinal")?, &format!("{aptr}/ordinal"))?;
            if ordinal != j as u64 {
                return Err(schema(
                    format!("{aptr}/ordinal"),
                    format!("expected ordinal {j}, found {ordinal}"),
                ));
            }
            actions.push(ProtoAction {
                kind,
                item_path: item_path.to_string(),
            });
        }

        protos.push(ProtoEvent {
            native_id: native_id.to_string(),
            parents,
            authors: event_authors,
            timestamp,
            message: message.to_string(),
            actions,
        });
    }

    let model = assemble(
        source_name.unwrap_or(name),
        location,
        &protos,
        &authors,
        &item_paths,
    )
    .map_err(|e| match e {
        // Both are pre-checked above; keep honest errors if a path is missed.
        AssembleError::UnresolvedParent { child, parent } => schema(
            "/events",
            format!("event {child} references unknown parent {parent}"),
        ),
        AssembleError::DuplicateNativeId { native_id } => {
            schema("/events", format!("duplicate native id {native_id}"))
        }
    })?;

    let report = model.validate();
    if !report.ok() {
        return Err(PersistError::InvalidModel(report));
    }
    Ok(model)
}

fn as_object<'a>(value: &'a Value, pointer: &str) -> Result<&'a Map<String, Value>, PersistError> {
    value
        .as_object()
        .ok_or_else(|| schema(pointer, "expected object"))
}

fn as_array<'a>(value: &'a Value, pointer: &str) -> Result<&'a Vec<Value>, PersistError> {
    value
        .as_array()
        .ok_or_else(|| schema(pointer, "expected array"))
}

fn as_str<'a>(value: &'a Value, pointer: &str) -> Result<&'a str, PersistError> {
    value
        .as_str()
        .ok_or_else(|| schema(pointer, "expected string"))
}

fn as_u64(value: &Value, pointer: &str) -> Result<u64, PersistError> {
    value
        .as_u64()
        .ok_or_else(|| schema(pointer, "expected nonnegative integer"))
}

fn as_i64(value: &Value, pointer: &str) -> Result<i64, PersistError> {
    value
        .as_i64()
        .ok_or_else(|| schema(pointer, "expected integer"))
}

fn require<'a>(
    map: &'a Map<String, Value>,
    pointer: &str,
    key: &str,
) -> Result<&'a Value, PersistError> {
    map.get(key)
        .ok_or_else(|| schema(pointer, format!("missing field {key:?}")))
}

fn check_keys(
    map: &Map<String, Value>,
    pointer: &str,
    allowed: &[&str],
) -> Result<(), PersistError> {
    for key in map.keys() {
        if !allowed.contains(&key.as_str()) {
            let base = if pointer == "/" { "" } else { pointer };
            return Err(schema(format!("{base}/{key}"), "unknown field"));
        }
    }
    Ok(())
}
