//! The scheduler and blackboard: turns a study configuration into a staged
//! execution plan, runs per-source analyses in dependency order on a bounded
//! worker pool, and runs the single post-processing analysis at the end.

pub mod blackboard;
pub mod config;
pub mod execute;
pub mod plan;

pub use blackboard::{Blackboard, BlackboardError, BlackboardView, Scope};
pub use config::{AnalysisDecl, ConfigError, StudyConfig};
pub use execute::{execute, ExecuteError, ExecutionOutcome, RunRecord, RunStatus, StudyReport};
pub use plan::{plan, ExecutionPlan, PlanError};
