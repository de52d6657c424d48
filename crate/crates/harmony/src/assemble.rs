//! Canonical model assembly from VCS-agnostic proto records.
//!
//! Both the git extractor and the model-file loader funnel through
//! [`assemble`], so identical histories yield identical models — ids,
//! orderings and all. Authors are id-ordered by (name, email), items by path,
//! events by the deterministic topological order of
//! [`RepositoryModel::topo_order`].

use std::cmp::Reverse;
use std::collections::{BinaryHeap, BTreeSet, HashMap};

use crate::model::{ActionKind, EventId, ModelBuilder, RepositoryModel};

#[derive(Debug, Clone)]
pub(crate) struct ProtoAction {
    pub kind: ActionKind,
    pub item_path: String,
}

#[derive(Debug, Clone)]
pub(crate) struct ProtoEvent {
    pub native_id: String,
    pub parents: Vec<String>,
    pub authors: Vec<(String, Option<String>)>,
    pub timestamp: i64,
    pub message: String,
    pub actions: Vec<ProtoAction>,
}

#[derive(Debug)]
pub(crate) enum AssembleError {
    UnresolvedParent { child: String, parent: String },
    DuplicateNativeId { native_id: String },
}

/// Builds a model in canonical order. Parent references must resolve within
/// `protos` and native ids must be distinct; cyclic parent relations are
/// tolerated (the unorderable tail keeps input order) so that `validate` can
/// report them on the result.
///
/// `declared_authors` and `declared_items` let a loader carry authors and
/// items that no event references; the extractor passes empty slices.
pub(crate) fn assemble(
    source_name: &str,
    location: &str,
    protos: &[ProtoEvent],
    declared_authors: &[(String, Option<String>)],
    declared_items: &[String],
) -> Result<RepositoryModel, AssembleError> {
    let mut index_of: HashMap<&str, usize> = HashMap::new();
    for (i, proto) in protos.iter().enumerate() {
        if index_of.insert(proto.native_id.as_str(), i).is_some() {
            return Err(AssembleError::DuplicateNativeId {
                native_id: proto.native_id.clone(),
            });
        }
    }
    for proto in protos {
        for parent in &proto.parents {
            if !index_of.contains_key(parent.as_str()) {
                return Err(AssembleError::UnresolvedParent {
                    child: proto.native_id.clone(),
                    parent: parent.clone(),
                });
            }
        }
    }

    // Deterministic topological order with (timestamp, native_id) tie-break.
    let mut remaining: Vec<usize> = vec![0; protos.len()];
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); protos.len()];
    let mut ready = BinaryHeap::new();
    for (idx, proto) in protos.iter().enumerate() {
        remaining[idx] = proto.parents.len();
        for parent in &proto.parents {
            children[index_of[parent.as_str()]].push(idx);
        }
        if remaining[idx] == 0 {
            ready.push(Reverse((proto.timestamp, proto.native_id.clone(), idx)));
        }
    }
    let mut order = Vec::with_capacity(protos.len());
    let mut placed = vec![false; protos.len()];
    while let Some(Reverse((_, _, idx))) = ready.pop() {
        order.push(idx);
        placed[idx] = true;
        for &child in &children[idx] {
            remaining[child] -= 1;
            if remaining[child] == 0 {
                let p = &protos[child];
                ready.push(Reverse((p.timestamp, p.native_id.clone(), child)));
            }
        }
    }
    for idx in 0..protos.len() {
        if !placed[idx] {
            order.push(idx);
        }
    }

    let mut builder = ModelBuilder::new(source_name, location);

    let mut author_keys: BTreeSet<(String, Option<String>)> =
        declared_authors.iter().cloned().collect();
    let mut item_paths: BTreeSet<String> = declared_items.iter().cloned().collect();
    for proto in protos {
        for key in &proto.authors {
            author_keys.insert(key.clone());
        }
        for action in &proto.actions {
            item_paths.insert(action.item_path.clone());
        }
    }
    for (name, email) in &author_keys {
        builder.add_author(name, email.as_deref());
    }
    for path in &item_paths {
        builder.add_item(path);
    }

    // Events are added in `order`, so the event at position p gets id p;
    // pre-assigning ids lets parents resolve even across a cyclic tail.
    let mut event_ids: HashMap<&str, EventId> = HashMap::new();
    for (pos, &idx) in order.iter().enumerate() {
        event_ids.insert(protos[idx].native_id.as_str(), EventId(pos as u32));
    }
    for &idx in &order {
        let proto = &protos[idx];
        let parents = proto.parents.iter().map(|p| event_ids[p.as_str()]).collect();
        let authors = proto
            .authors
            .iter()
            .map(|(name, email)| builder.add_author(name, email.as_deref()))
            .collect();
        let event = builder.add_event(
            &proto.native_id,
            parents,
            authors,
            proto.timestamp,
            &proto.message,
        );
        debug_assert_eq!(event, event_ids[proto.native_id.as_str()]);
        for action in &proto.actions {
            let item = builder.add_item(&action.item_path);
            builder.add_action(event, item, action.kind);
        }
    }

    Ok(builder.build())
}
