//! harmony — a mining-software-repositories platform.
//!
//! Extracts version-control histories into a unified, VCS-agnostic model and
//! runs dependency-scheduled, parallelized analyses over them. The pieces:
//!
//! - [`model`]: the unified history types (events, authors, items, actions)
//!   and their integrity rules;
//! - [`extract`]: source extractors — git repositories and previously saved
//!   model files — plus revision-pinned file access;
//! - [`persist`]: canonical, deterministic model serialization;
//! - [`engine`]: study configuration, the dependency scheduler, the worker
//!   pool and the blackboard analyses exchange data through;
//! - [`analyses`]: the built-in analysis plugins, including per-item code
//!   ownership with major/minor contributor classification;
//! - [`study`]: the end-to-end study runner the CLI drives.

mod assemble;

pub mod analyses;
pub mod engine;
pub mod extract;
pub mod model;
pub mod persist;
pub mod study;

pub use model::{ActionKind, RepositoryModel, SourceRef, ValidationReport};
