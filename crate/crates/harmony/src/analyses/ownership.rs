//! Per-item code ownership with major/minor contributor classification.
//!
//! An author owns the fraction of an item's actions they performed (weighted
//! counts, so co-authored events split evenly). An author is a major
//! contributor of an item when they performed at least `threshold` of its
//! actions — the threshold is inclusive and defaults to 5% — and a minor
//! contributor otherwise.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::{json, Value};

use super::{Analysis, AnalysisContext, AnalysisError};
use crate::engine::blackboard::BlackboardError;

/// Inclusive default major-contributor threshold.
pub const DEFAULT_THRESHOLD: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Classification {
    Major,
    Minor,
}

/// One (item, author) ownership row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OwnershipRecord {
    pub classification: Classification,
    /// Weighted action count of this author on this item.
    pub contributions: f64,
    pub email: Option<String>,
    /// Item path.
    pub item: String,
    pub name: String,
    /// contributions / item total, in [0, 1].
    pub ownership: f64,
}

/// Classifies an ownership fraction against an inclusive threshold.
pub fn classify(ownership: f64, threshold: f64) -> Classification {
    if ownership >= threshold {
        Classification::Major
    } else {
        Classification::Minor
    }
}

/// Computes ownership records from item-activity's published maps.
///
/// Declared dependency required: the analysis reads the blackboard keys
/// `totals` and `per_author` of its item-activity dependency. Records are
/// sorted by (item path, descending ownership, author name).
pub struct Ownership;

impl Analysis for Ownership {
    fn kind(&self) -> &'static str {
        "ownership"
    }

    fn default_params(&self) -> BTreeMap<String, Value> {
        BTreeMap::from([("threshold".to_string(), json!(DEFAULT_THRESHOLD))])
    }

    fn run(&self, ctx: &mut AnalysisContext<'_>) -> Result<(), AnalysisError> {
        let threshold = ctx.param_f64("threshold")?;
        // Resolve the producer by kind; reading without a declared dependency
        // fails with UNDECLARED_DEPENDENCY in the blackboard view.
        let producer = ctx.dep_of_kind("item-activity").unwrap_or("item-activity").to_string();

        let fetch = |key: &str| -> Result<Value, AnalysisError> {
            ctx.blackboard().get(&producer, key).map_err(|e| match e {
                BlackboardError::NotFound { .. } => AnalysisError::MissingDependencyData {
                    detail: format!("blackboard key ({producer}, {key}) absent"),
                },
                other => AnalysisError::Blackboard(other),
            })
        };
        let totals = fetch("totals")?;
        let per_author = fetch("per_author")?;

        let records = records_from_activity(&totals, &per_author, threshold)?;
        ctx.blackboard().put(
            "records",
            Value::Array(
                records
                    .iter()
                    .map(|r| serde_json::to_value(r).expect("record serializes"))
                    .collect(),
            ),
        )?;
        for record in &records {
            ctx.emit(serde_json::to_value(record).expect("record serializes"));
        }
        Ok(())
    }
}

fn records_from_activity(
    totals: &Value,
    per_author: &Value,
    threshold: f64,
) -> Result<Vec<OwnershipRecord>, AnalysisError> {
    let bad_data = |detail: &str| AnalysisError::MissingDependencyData {
        detail: format!("malformed item-activity data: {detail}"),
    };
    let totals = totals.as_object().ok_or_else(|| bad_data("totals not an object"))?;
    let per_author = per_author
        .as_object()
        .ok_or_else(|| bad_data("per_author not an object"))?;

    let mut records = Vec::new();
    for (path, entries) in per_author {
        let total = totals
            .get(path)
            .and_then(Value::as_u64)
            .ok_or_else(|| bad_data("item missing from totals"))?;
        if total == 0 {
            continue;
        }
        let entries = entries.as_array().ok_or_else(|| bad_data("entry not an array"))?;
        for entry in entries {
            let count = entry
                .get("count")
                .and_then(Value::as_f64)
                .ok_or_else(|| bad_data("count missing"))?;
            if count <= 0.0 {
                continue;
            }
            let name = entry
                .get("name")
                .and_then(Value::as_str)
                .ok_or_else(|| bad_data("name missing"))?;
            let email = match entry.get("email") {
                None | Some(Value::Null) => None,
                Some(Value::String(s)) => Some(s.clone()),
                Some(_) => return Err(bad_data("email not a string")),
            };
            let ownership = count / total as f64;
            records.push(OwnershipRecord {
                classification: classify(ownership, threshold),
                contributions: count,
                email,
                item: path.clone(),
                name: name.to_string(),
                ownership,
            });
        }
    }
    records.sort_by(|a, b| {
        a.item
            .cmp(&b.item)
            .then(b.ownership.total_cmp(&a.ownership))
            .then(a.name.cmp(&b.name))
    });
    Ok(records)
}
