//! Study-level ownership summary across all sources.

use serde_json::{json, Value};

use super::{AnalysisError, PostContext, PostProcessingAnalysis};
use crate::engine::blackboard::BlackboardError;

/// Aggregates the per-source ownership records: per source, the item count and
/// the mean number of major and minor contributors per item; plus study-wide
/// totals. Requires an ownership analysis to have run on every source.
pub struct OwnershipSummary;

impl PostProcessingAnalysis for OwnershipSummary {
    fn kind(&self) -> &'static str {
        "ownership-summary"
    }

    fn run(&self, ctx: &mut PostContext<'_>) -> Result<(), AnalysisError> {
        // The ownership producer: the first ownership-kind declaration by name.
        let producer = ctx
            .analyses()
            .iter()
            .filter(|d| d.kind == "ownership")
            .map(|d| d.name.clone())
            .min()
            .ok_or_else(|| AnalysisError::MissingDependencyData {
                detail: "no ownership analysis declared in this study".to_string(),
            })?;

        let mut source_names: Vec<&str> =
            ctx.sources().iter().map(|(name, _)| name.as_str()).collect();
        source_names.sort_unstable();

        let mut study_items = 0u64;
        let mut study_major = 0u64;
        let mut study_minor = 0u64;
        let mut records = Vec::new();
        for source in source_names {
            let rows = ctx
                .get_source(source, &producer, "records")
                .map_err(|e| match e {
                    BlackboardError::NotFound { .. } => AnalysisError::MissingDependencyData {
                        detail: format!("ownership records absent for source {source:?}"),
                    },
                    other => AnalysisError::Blackboard(other),
                })?;
            let rows = rows.as_array().cloned().unwrap_or_default();

            let mut items = std::collections::BTreeSet::new();
            let mut major = 0u64;
            let mut minor = 0u64;
            for row in &rows {
                let item = row.get("item").and_then(Value::as_str).unwrap_or_default();
                items.insert(item.to_string());
                match row.get("classification").and_then(Value::as_str) {
                    Some("MAJOR") => major += 1,
                    Some("MINOR") => minor += 1,
                    _ => {}
                }
            }
            let item_count = items.len() as u64;
            records.push(json!({
                "items": item_count,
                "mean_major": mean(major, item_count),
                "mean_minor": mean(minor, item_count),
                "record": "source",
                "source": source,
            }));
            study_items += item_count;
            study_major += major;
            study_minor += minor;
        }

        records.push(json!({
            "items": study_items,
            "mean_major": mean(study_major, study_items),
            "mean_minor": mean(study_minor, study_items),
            "record": "study",
            "sources": ctx.sources().len() as u64,
        }));

        for record in records {
            ctx.emit(record);
        }
        Ok(())
    }
}

fn mean(count: u64, items: u64) -> f64 {
    if items == 0 {
        0.0
    } else {
        count as f64 / items as f64
    }
}
