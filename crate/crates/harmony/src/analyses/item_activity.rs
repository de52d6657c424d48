//! Per-item activity: action counts by kind and weighted per-author counts.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use super::{Analysis, AnalysisContext, AnalysisError};
use crate::model::ActionKind;

/// Emits one `item` record per item (counts by action kind plus total, sorted
/// by path) and one `item_author` record per (item, author) pair with the
/// weighted count from the model (sorted by path, then author).
///
/// Publishes two blackboard keys for downstream analyses:
/// - `totals`: `{path: total action count}`
/// - `per_author`: `{path: [{count, email, name}, ...]}` sorted by author
pub struct ItemActivity;

impl Analysis for ItemActivity {
    fn kind(&self) -> &'static str {
        "item-activity"
    }

    fn run(&self, ctx: &mut AnalysisContext<'_>) -> Result<(), AnalysisError> {
        let model = ctx.model();
        let counts = model.action_counts();

        let mut by_kind: BTreeMap<&str, [u64; 3]> = BTreeMap::new();
        for action in model.actions() {
            let path = model.item(action.item).path.as_str();
            let slot = match action.kind {
                ActionKind::Create => 0,
                ActionKind::Edit => 1,
                ActionKind::Delete => 2,
            };
            by_kind.entry(path).or_insert([0u64; 3])[slot] += 1;
        }

        let mut totals = Map::new();
        let mut per_author: BTreeMap<&str, Vec<Value>> = BTreeMap::new();
        for (item_id, total) in &counts.item_totals {
            totals.insert(model.item(*item_id).path.clone(), json!(*total));
        }
        let mut weighted: Vec<_> = counts
            .per_author
            .iter()
            .map(|((item, author), count)| {
                let path = model.item(*item).path.as_str();
                let author = model.author(*author);
                (path, &author.name, &author.email, *count)
            })
            .collect();
        weighted.sort_by(|a, b| (a.0, a.1, a.2).cmp(&(b.0, b.1, b.2)));
        for (path, name, email, count) in &weighted {
            per_author.entry(path).or_default().push(json!({
                "count": count,
                "email": email,
                "name": name,
            }));
        }

        let board = ctx.blackboard();
        board.put("totals", Value::Object(totals.clone()))?;
        board.put(
            "per_author",
            Value::Object(
                per_author
                    .iter()
                    .map(|(path, entries)| (path.to_string(), Value::Array(entries.clone())))
                    .collect(),
            ),
        )?;

        for (path, kinds) in &by_kind {
            let total: u64 = kinds.iter().sum();
            ctx.emit(json!({
                "create": kinds[0],
                "delete": kinds[2],
                "edit": kinds[1],
                "path": path,
                "record": "item",
                "total": total,
            }));
        }
        for (path, name, email, count) in weighted {
            ctx.emit(json!({
                "count": count,
                "email": email,
                "name": name,
                "path": path,
                "record": "item_author",
            }));
        }
        Ok(())
    }
}
