//! Study execution: a bounded worker pool driven by dependency counts.
//!
//! The unit of scheduling is one (source, analysis) execution. A node becomes
//! ready when all of its dependencies on the same source have completed; ready
//! nodes are handed to exactly `workers` worker threads, so at most that many
//! analyses are ever in flight. When an analysis fails, its dependents on that
//! source are marked failed-skipped without running; other sources proceed.
//! The post-processing analysis runs last, on the coordinating thread, with
//! every model and the full blackboard.

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde_json::{json, Value};
use thiserror::Error;

use crate::analyses::{AnalysisContext, PostContext, Registry};
use crate::engine::blackboard::{Blackboard, BlackboardView, Scope};
use crate::engine::config::{AnalysisDecl, StudyConfig};
use crate::engine::plan::ExecutionPlan;
use crate::model::RepositoryModel;

/// Outcome of one (source, analysis) execution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunStatus {
    Ok,
    Failed { message: String },
}

impl RunStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, RunStatus::Ok)
    }
}

/// One line of the study report, with a monotonic execution trace.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub source: String,
    pub analysis: String,
    pub status: RunStatus,
    pub duration: Duration,
    /// Nanoseconds since the run started.
    pub started_ns: u64,
    pub finished_ns: u64,
    pub output_file: Option<PathBuf>,
}

/// Per-(source, analysis) statuses plus the post-processing entry.
#[derive(Debug, Clone)]
pub struct StudyReport {
    pub records: Vec<RunRecord>,
    pub post: Option<RunRecord>,
    pub wall: Duration,
}

impl StudyReport {
    pub fn all_ok(&self) -> bool {
        self.records.iter().all(|r| r.status.is_ok())
            && self.post.as_ref().is_none_or(|p| p.status.is_ok())
    }

    /// All result files written by this run.
    pub fn output_files(&self) -> Vec<&PathBuf> {
        self.records
            .iter()
            .chain(self.post.as_ref())
            .filter_map(|r| r.output_file.as_ref())
            .collect()
    }

    /// Plain-text table, one row per execution.
    pub fn render(&self) -> String {
        let mut out = String::from("source\tanalysis\tstatus\tduration_ms\toutput\n");
        for record in self.records.iter().chain(self.post.as_ref()) {
            let status = match &record.status {
                RunStatus::Ok => "OK".to_string(),
                RunStatus::Failed { message } => format!("FAILED: {message}"),
            };
            out.push_str(&format!(
                "{}\t{}\t{}\t{:.3}\t{}\n",
                record.source,
                record.analysis,
                status,
                record.duration.as_secs_f64() * 1000.0,
                record
                    .output_file
                    .as_ref()
                    .map(|p| p.display().to_string())
                    .unwrap_or_else(|| "-".to_string()),
            ));
        }
        out
    }
}

/// Report plus the deterministic final blackboard contents.
#[derive(Debug, Clone)]
pub struct ExecutionOutcome {
    pub report: StudyReport,
    pub blackboard: Value,
}

#[derive(Debug, Error)]
pub enum ExecuteError {
    #[error("failed writing {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

struct Done {
    node: usize,
    result: Result<Vec<Value>, String>,
    started_ns: u64,
    finished_ns: u64,
}

/// Runs a planned study over extracted models (one per configured source, in
/// order). Analysis failures land in the report; `execute` itself only fails
/// on I/O errors while writing result files.
pub fn execute(
    plan: &ExecutionPlan,
    models: &[Arc<RepositoryModel>],
    config: &StudyConfig,
    registry: &Registry,
) -> Result<ExecutionOutcome, ExecuteError> {
    assert_eq!(
        models.len(),
        config.sources.len(),
        "models must correspond 1:1 to configured sources"
    );

    let epoch = Instant::now();
    let board = Blackboard::new();
    let decls = plan.decls();
    let n_sources = models.len();
    let n_decls = decls.len();
    let n_nodes = n_sources * n_decls;

    // dependents[d] = decl indices that directly depend on decl d.
    let mut dependents: Vec<Vec<usize>> = vec![Vec::new(); n_decls];
    for d in 0..n_decls {
        for &dep in plan.deps_of(d) {
            dependents[dep].push(d);
        }
    }

    let source_names: Vec<&str> = config
        .sources
        .iter()
        .map(|s| s.source_name.as_str())
        .collect();

    let mut outcomes: Vec<Option<RunRecord>> = vec![None; n_nodes];

    let write_result = |source: &str, decl: &AnalysisDecl, records: Vec<Value>| {
        let dir = config.output_dir.join(source);
        let path = dir.join(format!("{}.json", decl.name));
        let document = json!({
            "analysis": decl.name,
            "records": records,
            "source": source,
        });
        let mut bytes = serde_json::to_vec(&document).expect("result document serializes");
        bytes.push(b'\n');
        fs::create_dir_all(&dir)
            .and_then(|()| fs::write(&path, &bytes))
            .map(|()| path.clone())
            .map_err(|source| ExecuteError::Io { path, source })
    };

    let mut io_error: Option<ExecuteError> = None;

    std::thread::scope(|scope| {
        let (jobs_tx, jobs_rx) = crossbeam_channel::unbounded::<usize>();
        let (done_tx, done_rx) = crossbeam_channel::unbounded::<Done>();

        for _ in 0..config.workers {
            let jobs_rx = jobs_rx.clone();
            let done_tx = done_tx.clone();
            let board = &board;
            let epoch = &epoch;
            let source_names = &source_names;
            scope.spawn(move || {
                for node in jobs_rx.iter() {
                    let (s, d) = (node / n_decls, node % n_decls);
                    let decl = &decls[d];
                    let analysis = registry.get(&decl.kind).expect("planned kind is registered");
                    let mut params = analysis.default_params();
                    params.extend(decl.params.clone());
                    let deps: Vec<(String, String)> = plan
                        .deps_of(d)
                        .iter()
                        .map(|&i| (decls[i].name.clone(), decls[i].kind.clone()))
                        .collect();
                    let view = BlackboardView::new(
                        board,
                        Scope::Source(source_names[s].to_string()),
                        decl.name.clone(),
                        plan.transitive_deps_of(d).clone(),
                    );
                    let mut ctx =
                        AnalysisContext::new(&models[s], view, params, decl.name.clone(), deps);

                    let started_ns = epoch.elapsed().as_nanos() as u64;
                    let result = catch_unwind(AssertUnwindSafe(|| {
                        analysis.run(&mut ctx).map(|()| ctx.into_records())
                    }))
                    .unwrap_or_else(|_| Err(crate::analyses::AnalysisError::Failed(
                        "analysis panicked".to_string(),
                    )))
                    .map_err(|e| e.to_string());
                    let finished_ns = epoch.elapsed().as_nanos() as u64;

                    let _ = done_tx.send(Done {
                        node,
                        result,
                        started_ns,
                        finished_ns,
                    });
                }
            });
        }
        drop(done_tx);

        // Coordinator: track unfinished dependency counts per node and feed
        // ready nodes to the pool.
        let mut remaining: Vec<usize> = (0..n_nodes)
            .map(|node| plan.deps_of(node % n_decls).len())
            .collect();
        let mut pending = n_nodes;
        for node in 0..n_nodes {
            if remaining[node] == 0 {
                jobs_tx.send(node).expect("pool accepts jobs");
            }
        }

        let mut resolve: Vec<(usize, RunRecord)> = Vec::new();
        while pending > 0 {
            let done = match done_rx.recv() {
                Ok(done) => done,
                Err(_) => break,
            };
            let (s, d) = (done.node / n_decls, done.node % n_decls);
            let decl = &decls[d];
            let status = match done.result {
                Ok(records) => {
                    let mut output = None;
                    if io_error.is_none() {
                        match write_result(source_names[s], decl, records) {
                            Ok(path) => output = Some(path),
                            Err(err) => io_error = Some(err),
                        }
                    }
                    (RunStatus::Ok, output)
                }
                Err(message) => (RunStatus::Failed { message }, None),
            };
            resolve.push((
                done.node,
                RunRecord {
                    source: source_names[s].to_string(),
                    analysis: decl.name.clone(),
                    status: status.0,
                    duration: Duration::from_nanos(done.finished_ns - done.started_ns),
                    started_ns: done.started_ns,
                    finished_ns: done.finished_ns,
                    output_file: status.1,
                },
            ));

            while let Some((node, record)) = resolve.pop() {
                let (s, d) = (node / n_decls, node % n_decls);
                outcomes[node] = Some(record);
                pending -= 1;

                for &dependent in &dependents[d] {
                    let dep_node = s * n_decls + dependent;
                    remaining[dep_node] -= 1;
                    if remaining[dep_node] > 0 {
                        continue;
                    }
                    // All dependencies resolved: run it, or skip if any failed.
                    let first_failed = plan.deps_of(dependent).iter().find_map(|&i| {
                        let dep_outcome = outcomes[s * n_decls + i].as_ref();
                        match dep_outcome {
                            Some(r) if !r.status.is_ok() => Some(decls[i].name.clone()),
                            _ => None,
                        }
                    });
                    match first_failed {
                        None => jobs_tx.send(dep_node).expect("pool accepts jobs"),
                        Some(failed_dep) => {
                            let now = epoch.elapsed().as_nanos() as u64;
                            resolve.push((
                                dep_node,
                                RunRecord {
                                    source: source_names[s].to_string(),
                                    analysis: decls[dependent].name.clone(),
                                    status: RunStatus::Failed {
                                        message: format!(
                                            "skipped: dependency `{failed_dep}` failed"
                                        ),
                                    },
                                    duration: Duration::ZERO,
                                    started_ns: now,
                                    finished_ns: now,
                                    output_file: None,
                                },
                            ));
                        }
                    }
                }
            }
        }
        drop(jobs_tx);
    });

    if let Some(err) = io_error {
        return Err(err);
    }

    // Post-processing: after every per-source analysis, with all models and
    // the full blackboard.
    let post_record = if let Some(post) = plan.post() {
        let sources_with_models: Vec<(String, Arc<RepositoryModel>)> = source_names
            .iter()
            .zip(models)
            .map(|(name, model)| (name.to_string(), model.clone()))
            .collect();
        let implementation = registry
            .get_post(&post.kind)
            .expect("planned post kind is registered");
        let mut params = implementation.default_params();
        params.extend(post.params.clone());
        let mut ctx = PostContext::new(
            &sources_with_models,
            &board,
            plan.decls(),
            params,
            post.name.clone(),
        );
        let started_ns = epoch.elapsed().as_nanos() as u64;
        let result = catch_unwind(AssertUnwindSafe(|| {
            implementation.run(&mut ctx).map(|()| ctx.into_records())
        }))
        .unwrap_or_else(|_| {
            Err(crate::analyses::AnalysisError::Failed(
                "analysis panicked".to_string(),
            ))
        });
        let finished_ns = epoch.elapsed().as_nanos() as u64;

        let (status, output_file) = match result {
            Ok(records) => {
                let path = write_result("_study", post, records)?;
                (RunStatus::Ok, Some(path))
            }
            Err(e) => (
                RunStatus::Failed {
                    message: e.to_string(),
                },
                None,
            ),
        };
        Some(RunRecord {
            source: "_study".to_string(),
            analysis: post.name.clone(),
            status,
            duration: Duration::from_nanos(finished_ns - started_ns),
            started_ns,
            finished_ns,
            output_file,
        })
    } else {
        None
    };

    let records = outcomes
        .into_iter()
        .map(|r| r.expect("every node resolved"))
        .collect();

    Ok(ExecutionOutcome {
        report: StudyReport {
            records,
            post: post_record,
            wall: epoch.elapsed(),
        },
        blackboard: board.snapshot(),
    })
}
