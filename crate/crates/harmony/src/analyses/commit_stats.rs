//! Basic per-source statistics: event counts per author plus source totals.

use serde_json::json;

use super::{Analysis, AnalysisContext, AnalysisError};

/// Emits one `totals` record (event, item and action counts) followed by one
/// `author` record per author, sorted by (name, email). An event with k
/// authors counts once for each of them. Publishes `{"events": N}` under the
/// blackboard key `totals`.
pub struct CommitStats;

impl Analysis for CommitStats {
    fn kind(&self) -> &'static str {
        "commit-stats"
    }

    fn run(&self, ctx: &mut AnalysisContext<'_>) -> Result<(), AnalysisError> {
        let model = ctx.model();

        let mut events_by_author = vec![0u64; model.authors().len()];
        for event in model.events() {
            for author in &event.authors {
                events_by_author[author.index()] += 1;
            }
        }

        ctx.blackboard()
            .put("totals", json!({ "events": model.events().len() as u64 }))?;

        let totals = json!({
            "actions": model.actions().len() as u64,
            "events": model.events().len() as u64,
            "items": model.items().len() as u64,
            "record": "totals",
        });

        let mut authors: Vec<_> = model.authors().iter().collect();
        authors.sort_by(|a, b| (&a.name, &a.email).cmp(&(&b.name, &b.email)));

        ctx.emit(totals);
        for author in authors {
            let events = events_by_author[author.id.index()];
            ctx.emit(json!({
                "email": author.email,
                "events": events,
                "name": author.name,
                "record": "author",
            }));
        }
        Ok(())
    }
}
