//! The unified, VCS-agnostic history model.
//!
//! A [`RepositoryModel`] describes the full history of one source as a DAG of
//! [`Event`]s (revisions). Each event is made by one or more [`Author`]s and
//! contains an ordered list of [`Action`]s, each of which affects exactly one
//! [`Item`] (a versioned file). The model carries no VCS-specific data beyond
//! the native revision identifier, so analyses written against it work for any
//! versioning system an extractor supports.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, BTreeMap, HashMap, HashSet};
use std::fmt;

use thiserror::Error;

macro_rules! id_newtype {
    ($(#[$meta:meta])* $name:ident, $prefix:literal) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub u32);

        impl $name {
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, concat!($prefix, "{}"), self.0)
            }
        }
    };
}

id_newtype!(
    /// Identifier of an [`Author`] within one model.
    AuthorId,
    "a"
);
id_newtype!(
    /// Identifier of an [`Item`] within one model.
    ItemId,
    "i"
);
id_newtype!(
    /// Identifier of an [`Event`] within one model.
    EventId,
    "e"
);
id_newtype!(
    /// Identifier of an [`Action`] within one model.
    ActionId,
    "x"
);

/// The repository a model was extracted from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceRef {
    /// Identifier of this source within a study (assigned by the study runner).
    pub id: u32,
    /// Human-readable label; must be non-empty.
    pub name: String,
    /// URL or filesystem path of the repository.
    pub location: String,
}

/// A person who authored events.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Author {
    pub id: AuthorId,
    pub name: String,
    pub email: Option<String>,
}

impl Author {
    /// The (name, email) pair that identifies an author across models.
    pub fn identity(&self) -> (&str, Option<&str>) {
        (&self.name, self.email.as_deref())
    }
}

/// A versioned file, identified by its repository-relative path for the whole
/// history. Paths are `/`-separated with no leading `/`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Item {
    pub id: ItemId,
    pub path: String,
}

/// What an [`Action`] did to its item.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ActionKind {
    Create,
    Edit,
    Delete,
}

impl ActionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ActionKind::Create => "CREATE",
            ActionKind::Edit => "EDIT",
            ActionKind::Delete => "DELETE",
        }
    }
}

impl fmt::Display for ActionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One modification of exactly one item within one event.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Action {
    pub id: ActionId,
    pub event: EventId,
    pub item: ItemId,
    pub kind: ActionKind,
    /// Position within the containing event's action list.
    pub ordinal: u32,
}

/// One revision of the repository.
///
/// Multiple parents model merges; multiple authors model co-authored
/// revisions. The timestamp is metadata only — causal order is always the
/// parent DAG, tie-broken by `(timestamp, native_id)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    pub id: EventId,
    /// The VCS-native revision identifier (e.g. a commit hash).
    pub native_id: String,
    pub parents: Vec<EventId>,
    pub authors: Vec<AuthorId>,
    /// Seconds since the Unix epoch, UTC.
    pub timestamp: i64,
    pub message: String,
    pub actions: Vec<ActionId>,
}

/// The unified history of one source. Immutable after construction; safe to
/// share read-only across any number of workers.
#[derive(Debug, Clone)]
pub struct RepositoryModel {
    source: SourceRef,
    authors: Vec<Author>,
    items: Vec<Item>,
    events: Vec<Event>,
    actions: Vec<Action>,
    events_by_native_id: HashMap<String, EventId>,
    items_by_path: HashMap<String, ItemId>,
}

impl PartialEq for RepositoryModel {
    fn eq(&self, other: &Self) -> bool {
        // The lookup maps are derived from the vectors.
        self.source == other.source
            && self.authors == other.authors
            && self.items == other.items
            && self.events == other.events
            && self.actions == other.actions
    }
}

impl Eq for RepositoryModel {}

impl RepositoryModel {
    pub fn source(&self) -> &SourceRef {
        &self.source
    }

    /// Assigns the id this source carries within a study. The study runner
    /// calls this once per source before models are shared with workers.
    pub fn assign_source_id(&mut self, id: u32) {
        self.source.id = id;
    }

    pub fn authors(&self) -> &[Author] {
        &self.authors
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn actions(&self) -> &[Action] {
        &self.actions
    }

    /// Looks up an author by id. Panics on a dangling id; validated models
    /// never contain one.
    pub fn author(&self, id: AuthorId) -> &Author {
        &self.authors[id.index()]
    }

    pub fn item(&self, id: ItemId) -> &Item {
        &self.items[id.index()]
    }

    pub fn event(&self, id: EventId) -> &Event {
        &self.events[id.index()]
    }

    pub fn action(&self, id: ActionId) -> &Action {
        &self.actions[id.index()]
    }

    pub fn event_by_native_id(&self, native_id: &str) -> Option<&Event> {
        self.events_by_native_id
            .get(native_id)
            .map(|id| self.event(*id))
    }

    pub fn item_by_path(&self, path: &str) -> Option<&Item> {
        self.items_by_path.get(path).map(|id| self.item(*id))
    }

    fn get_author(&self, id: AuthorId) -> Option<&Author> {
        self.authors.get(id.index())
    }

    fn get_item(&self, id: ItemId) -> Option<&Item> {
        self.items.get(id.index())
    }

    fn get_event(&self, id: EventId) -> Option<&Event> {
        self.events.get(id.index())
    }

    fn get_action(&self, id: ActionId) -> Option<&Action> {
        self.actions.get(id.index())
    }

    /// Checks every integrity rule and reports all violations found. Problems
    /// are reported, never thrown; an empty report means the model is
    /// well-formed.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();

        if self.source.name.is_empty() {
            violations.push(Violation::new(
                RuleCode::EmptySourceName,
                "source name is empty".to_string(),
                self.source.location.clone(),
            ));
        }

        let mut author_identities: HashMap<(&str, Option<&str>), &Author> = HashMap::new();
        for author in &self.authors {
            if let Some(previous) = author_identities.insert(author.identity(), author) {
                violations.push(Violation::new(
                    RuleCode::DuplicateAuthorIdentity,
                    format!(
                        "authors {} and {} share identity ({}, {})",
                        previous.id,
                        author.id,
                        author.name,
                        author.email.as_deref().unwrap_or("-")
                    ),
                    author.id.to_string(),
                ));
            }
        }

        let mut item_paths: HashMap<&str, &Item> = HashMap::new();
        for item in &self.items {
            if item.path.is_empty() {
                violations.push(Violation::new(
                    RuleCode::EmptyItemPath,
                    format!("item {} has an empty path", item.id),
                    item.id.to_string(),
                ));
            } else if let Some(previous) = item_paths.insert(item.path.as_str(), item) {
                violations.push(Violation::new(
                    RuleCode::DuplicateItemPath,
                    format!(
                        "items {} and {} share path {}",
                        previous.id, item.id, item.path
                    ),
                    item.path.clone(),
                ));
            }
        }

        let mut native_ids: HashMap<&str, &Event> = HashMap::new();
        for event in &self.events {
            if let Some(previous) = native_ids.insert(event.native_id.as_str(), event) {
                violations.push(Violation::new(
                    RuleCode::DuplicateNativeId,
                    format!(
                        "events {} and {} share native id {}",
                        previous.id, event.id, event.native_id
                    ),
                    event.native_id.clone(),
                ));
            }

            if event.authors.is_empty() {
                violations.push(Violation::new(
                    RuleCode::NoAuthors,
                    format!("event {} has no authors", event.native_id),
                    event.native_id.clone(),
                ));
            }

            for parent in &event.parents {
                if self.get_event(*parent).is_none() {
                    violations.push(Violation::new(
                        RuleCode::DanglingReference,
                        format!("event {} lists unknown parent {}", event.native_id, parent),
                        event.native_id.clone(),
                    ));
                }
            }
            for author in &event.authors {
                if self.get_author(*author).is_none() {
                    violations.push(Violation::new(
                        RuleCode::DanglingReference,
                        format!("event {} lists unknown author {}", event.native_id, author),
                        event.native_id.clone(),
                    ));
                }
            }

            let mut ordinals = HashSet::new();
            for action_id in &event.actions {
                match self.get_action(*action_id) {
                    None => violations.push(Violation::new(
                        RuleCode::DanglingReference,
                        format!("event {} lists unknown action {}", event.native_id, action_id),
                        event.native_id.clone(),
                    )),
                    Some(action) => {
                        if action.event != event.id {
                            violations.push(Violation::new(
                                RuleCode::ActionEventMismatch,
                                format!(
                                    "action {} is listed by event {} but references event {}",
                                    action.id, event.id, action.event
                                ),
                                action.id.to_string(),
                            ));
                        }
                        if !ordinals.insert(action.ordinal) {
                            violations.push(Violation::new(
                                RuleCode::DuplicateOrdinal,
                                format!(
                                    "event {} contains duplicate action ordinal {}",
                                    event.native_id, action.ordinal
                                ),
                                event.native_id.clone(),
                            ));
                        }
                    }
                }
            }
        }

        let mut listed_by: HashMap<ActionId, u32> = HashMap::new();
        for event in &self.events {
            for action_id in &event.actions {
                *listed_by.entry(*action_id).or_insert(0) += 1;
            }
        }
        for action in &self.actions {
            match listed_by.get(&action.id).copied().unwrap_or(0) {
                0 => violations.push(Violation::new(
                    RuleCode::ActionNotListed,
                    format!("action {} is not listed by any event", action.id),
                    action.id.to_string(),
                )),
                1 => {}
                n => violations.push(Violation::new(
                    RuleCode::ActionMultiplyListed,
                    format!("action {} is listed by {} events", action.id, n),
                    action.id.to_string(),
                )),
            }
            if self.get_item(action.item).is_none() {
                violations.push(Violation::new(
                    RuleCode::DanglingReference,
                    format!("action {} references unknown item {}", action.id, action.item),
                    action.id.to_string(),
                ));
            }
            if self.get_event(action.event).is_none() {
                violations.push(Violation::new(
                    RuleCode::DanglingReference,
                    format!("action {} references unknown event {}", action.id, action.event),
                    action.id.to_string(),
                ));
            }
        }

        if let Some(members) = self.cycle_members() {
            let names: Vec<&str> = members.iter().map(|id| self.native_id_of(*id)).collect();
            violations.push(Violation::new(
                RuleCode::Cycle,
                format!("parent relation is cyclic; unorderable events: {}", names.join(", ")),
                names.first().map(|s| s.to_string()).unwrap_or_default(),
            ));
        }

        ValidationReport { violations }
    }

    fn native_id_of(&self, id: EventId) -> &str {
        self.get_event(id).map(|e| e.native_id.as_str()).unwrap_or("?")
    }

    /// Events that can never be emitted by a topological traversal, in id
    /// order. `None` when the parent relation is acyclic.
    fn cycle_members(&self) -> Option<Vec<EventId>> {
        let mut remaining: Vec<usize> = vec![0; self.events.len()];
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); self.events.len()];
        let mut queue = Vec::new();
        for (idx, event) in self.events.iter().enumerate() {
            let in_set: Vec<usize> = event
                .parents
                .iter()
                .filter(|p| p.index() < self.events.len())
                .map(|p| p.index())
                .collect();
            remaining[idx] = in_set.len();
            for parent in in_set {
                children[parent].push(idx);
            }
            if remaining[idx] == 0 {
                queue.push(idx);
            }
        }
        let mut emitted = 0;
        while let Some(idx) = queue.pop() {
            emitted += 1;
            for &child in &children[idx] {
                remaining[child] -= 1;
                if remaining[child] == 0 {
                    queue.push(child);
                }
            }
        }
        if emitted == self.events.len() {
            None
        } else {
            Some(
                remaining
                    .iter()
                    .enumerate()
                    .filter(|(_, r)| **r > 0)
                    .map(|(idx, _)| EventId(idx as u32))
                    .collect(),
            )
        }
    }

    /// Deterministic topological order of all events: parents always precede
    /// children, and among events whose parents have all been emitted the
    /// smallest `(timestamp, native_id)` goes first.
    pub fn topo_order(&self) -> Result<Vec<EventId>, ModelError> {
        let mut remaining: Vec<usize> = vec![0; self.events.len()];
        let mut children: Vec<Vec<usize>> = vec![Vec::new(); self.events.len()];
        let mut ready = BinaryHeap::new();
        for (idx, event) in self.events.iter().enumerate() {
            let in_set: Vec<usize> = event
                .parents
                .iter()
                .filter(|p| p.index() < self.events.len())
                .map(|p| p.index())
                .collect();
            remaining[idx] = in_set.len();
            for parent in in_set {
                children[parent].push(idx);
            }
            if remaining[idx] == 0 {
                ready.push(Reverse((event.timestamp, event.native_id.clone(), idx)));
            }
        }

        let mut order = Vec::with_capacity(self.events.len());
        while let Some(Reverse((_, _, idx))) = ready.pop() {
            order.push(EventId(idx as u32));
            for &child in &children[idx] {
                remaining[child] -= 1;
                if remaining[child] == 0 {
                    let event = &self.events[child];
                    ready.push(Reverse((event.timestamp, event.native_id.clone(), child)));
                }
            }
        }

        if order.len() == self.events.len() {
            Ok(order)
        } else {
            let members = self
                .cycle_members()
                .unwrap_or_default()
                .iter()
                .map(|id| self.native_id_of(*id).to_string())
                .collect();
            Err(ModelError::Cycle { members })
        }
    }

    /// Equality on natural keys only: source name and location, author
    /// identities, item paths, and events matched by native id with their
    /// parents, authors, timestamps, messages and ordered actions. Internal id
    /// assignment is ignored.
    pub fn natural_eq(&self, other: &RepositoryModel) -> bool {
        if self.source.name != other.source.name || self.source.location != other.source.location {
            return false;
        }
        let identity_set = |m: &RepositoryModel| -> std::collections::BTreeSet<(String, Option<String>)> {
            m.authors
                .iter()
                .map(|a| (a.name.clone(), a.email.clone()))
                .collect()
        };
        if identity_set(self) != identity_set(other) {
            return false;
        }
        let my_paths: std::collections::BTreeSet<&str> =
            self.items.iter().map(|i| i.path.as_str()).collect();
        let their_paths: std::collections::BTreeSet<&str> =
            other.items.iter().map(|i| i.path.as_str()).collect();
        if my_paths != their_paths {
            return false;
        }
        if self.events.len() != other.events.len() {
            return false;
        }
        // (parents, authors, actions) flattened to natural keys, per event.
        type EventKey = (
            i64,
            String,
            Vec<String>,
            Vec<(String, Option<String>)>,
            Vec<(ActionKind, String)>,
        );
        let event_key = |m: &RepositoryModel, e: &Event| -> Option<EventKey> {
            let parents = e
                .parents
                .iter()
                .map(|p| m.get_event(*p).map(|pe| pe.native_id.clone()))
                .collect::<Option<Vec<_>>>()?;
            let authors = e
                .authors
                .iter()
                .map(|a| m.get_author(*a).map(|au| (au.name.clone(), au.email.clone())))
                .collect::<Option<Vec<_>>>()?;
            let actions = e
                .actions
                .iter()
                .map(|x| {
                    let action = m.get_action(*x)?;
                    let item = m.get_item(action.item)?;
                    Some((action.kind, item.path.clone()))
                })
                .collect::<Option<Vec<_>>>()?;
            Some((e.timestamp, e.message.clone(), parents, authors, actions))
        };
        for event in &self.events {
            let Some(theirs) = other.event_by_native_id(&event.native_id) else {
                return false;
            };
            match (event_key(self, event), event_key(other, theirs)) {
                (Some(a), Some(b)) if a == b => {}
                _ => return false,
            }
        }
        true
    }

    /// Weighted per-(item, author) action counts plus per-item totals.
    ///
    /// Every action contributes weight `1/k` to each of the `k` authors of its
    /// containing event, so the weights for an item always sum to its total.
    pub fn action_counts(&self) -> ActionCounts {
        let mut per_author: BTreeMap<(ItemId, AuthorId), f64> = BTreeMap::new();
        let mut item_totals: BTreeMap<ItemId, u64> = BTreeMap::new();
        for event in &self.events {
            if event.authors.is_empty() {
                continue;
            }
            let share = 1.0 / event.authors.len() as f64;
            for action_id in &event.actions {
                let Some(action) = self.get_action(*action_id) else {
                    continue;
                };
                *item_totals.entry(action.item).or_insert(0) += 1;
                for author in &event.authors {
                    *per_author.entry((action.item, *author)).or_insert(0.0) += share;
                }
            }
        }
        ActionCounts {
            per_author,
            item_totals,
        }
    }
}

/// Result of [`RepositoryModel::action_counts`].
#[derive(Debug, Clone, PartialEq)]
pub struct ActionCounts {
    /// `(item, author)` → weighted action count.
    pub per_author: BTreeMap<(ItemId, AuthorId), f64>,
    /// item → total number of actions on it.
    pub item_totals: BTreeMap<ItemId, u64>,
}

/// Integrity rules checked by [`RepositoryModel::validate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleCode {
    EmptySourceName,
    DuplicateAuthorIdentity,
    EmptyItemPath,
    DuplicateItemPath,
    DuplicateNativeId,
    NoAuthors,
    DanglingReference,
    ActionEventMismatch,
    ActionNotListed,
    ActionMultiplyListed,
    DuplicateOrdinal,
    Cycle,
}

impl RuleCode {
    pub fn as_str(self) -> &'static str {
        match self {
            RuleCode::EmptySourceName => "EMPTY_SOURCE_NAME",
            RuleCode::DuplicateAuthorIdentity => "DUPLICATE_AUTHOR_IDENTITY",
            RuleCode::EmptyItemPath => "EMPTY_ITEM_PATH",
            RuleCode::DuplicateItemPath => "DUPLICATE_ITEM_PATH",
            RuleCode::DuplicateNativeId => "DUPLICATE_NATIVE_ID",
            RuleCode::NoAuthors => "NO_AUTHORS",
            RuleCode::DanglingReference => "DANGLING_REFERENCE",
            RuleCode::ActionEventMismatch => "ACTION_EVENT_MISMATCH",
            RuleCode::ActionNotListed => "ACTION_NOT_LISTED",
            RuleCode::ActionMultiplyListed => "ACTION_MULTIPLY_LISTED",
            RuleCode::DuplicateOrdinal => "DUPLICATE_ORDINAL",
            RuleCode::Cycle => "CYCLE",
        }
    }
}

impl fmt::Display for RuleCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One broken integrity rule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub rule: RuleCode,
    pub message: String,
    /// The offending entity, by natural key where one exists.
    pub offending: String,
}

impl Violation {
    fn new(rule: RuleCode, message: String, offending: String) -> Self {
        Violation {
            rule,
            message,
            offending,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {} [{}]", self.rule, self.message, self.offending)
    }
}

/// Outcome of [`RepositoryModel::validate`]. `ok()` holds exactly when no
/// violations were found.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ok() {
            write!(f, "ok")
        } else {
            for (i, v) in self.violations.iter().enumerate() {
                if i > 0 {
                    writeln!(f)?;
                }
                write!(f, "{v}")?;
            }
            Ok(())
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModelError {
    #[error("parent relation is cyclic; unorderable events: {}", members.join(", "))]
    Cycle { members: Vec<String> },
}

/// Incremental constructor for [`RepositoryModel`].
///
/// The builder is permissive: it assigns ids and deduplicates authors, items
/// and per-event author lists, but it does not reject dangling references or
/// cyclic parent links — `validate` reports those on the finished model.
#[derive(Debug)]
pub struct ModelBuilder {
    source: SourceRef,
    authors: Vec<Author>,
    items: Vec<Item>,
    events: Vec<Event>,
    actions: Vec<Action>,
    author_index: HashMap<(String, Option<String>), AuthorId>,
    item_index: HashMap<String, ItemId>,
}

impl ModelBuilder {
    pub fn new(source_name: &str, location: &str) -> Self {
        ModelBuilder {
            source: SourceRef {
                id: 0,
                name: source_name.to_string(),
                location: location.to_string(),
            },
            authors: Vec::new(),
            items: Vec::new(),
            events: Vec::new(),
            actions: Vec::new(),
            author_index: HashMap::new(),
            item_index: HashMap::new(),
        }
    }

    pub fn set_source_id(&mut self, id: u32) {
        self.source.id = id;
    }

    /// Adds an author, or returns the existing id for this (name, email).
    pub fn add_author(&mut self, name: &str, email: Option<&str>) -> AuthorId {
        let key = (name.to_string(), email.map(str::to_string));
        if let Some(id) = self.author_index.get(&key) {
            return *id;
        }
        let id = AuthorId(self.authors.len() as u32);
        self.authors.push(Author {
            id,
            name: key.0.clone(),
            email: key.1.clone(),
        });
        self.author_index.insert(key, id);
        id
    }

    /// Adds an item, or returns the existing id for this path.
    pub fn add_item(&mut self, path: &str) -> ItemId {
        if let Some(id) = self.item_index.get(path) {
            return *id;
        }
        let id = ItemId(self.items.len() as u32);
        self.items.push(Item {
            id,
            path: path.to_string(),
        });
        self.item_index.insert(path.to_string(), id);
        id
    }

    /// Adds an event with the given parents and authors. The author list is
    /// deduplicated preserving first occurrence (authorship is a set).
    pub fn add_event(
        &mut self,
        native_id: &str,
        parents: Vec<EventId>,
        authors: Vec<AuthorId>,
        timestamp: i64,
        message: &str,
    ) -> EventId {
        let id = EventId(self.events.len() as u32);
        let mut seen = HashSet::new();
        let authors = authors
            .into_iter()
            .filter(|a| seen.insert(*a))
            .collect();
        self.events.push(Event {
            id,
            native_id: native_id.to_string(),
            parents,
            authors,
            timestamp,
            message: message.to_string(),
            actions: Vec::new(),
        });
        id
    }

    /// Appends an action to an event; the ordinal is the event's current
    /// action count. Panics if `event` was not created by this builder.
    pub fn add_action(&mut self, event: EventId, item: ItemId, kind: ActionKind) -> ActionId {
        let id = ActionId(self.actions.len() as u32);
        let ev = &mut self.events[event.index()];
        let ordinal = ev.actions.len() as u32;
        ev.actions.push(id);
        self.actions.push(Action {
            id,
            event,
            item,
            kind,
            ordinal,
        });
        id
    }

    pub fn build(self) -> RepositoryModel {
        let events_by_native_id = self
            .events
            .iter()
            .map(|e| (e.native_id.clone(), e.id))
            .collect();
        let items_by_path = self.items.iter().map(|i| (i.path.clone(), i.id)).collect();
        RepositoryModel {
            source: self.source,
            authors: self.authors,
            items: self.items,
            events: self.events,
            actions: self.actions,
            events_by_native_id,
            items_by_path,
        }
    }
}
