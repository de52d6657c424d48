//! Study planning: validates the analysis dependency graph and lays it out in
//! minimal stages.
//!
//! Every analysis lands at stage `1 + max(stage of its dependencies)` (roots
//! at 0), so the layering is the minimal one and is a pure function of the
//! name-keyed graph — permuting the configuration order never changes it.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::analyses::Registry;
use crate::engine::config::{AnalysisDecl, StudyConfig};

/// A validated, staged execution layout for one study.
#[derive(Debug, Clone)]
pub struct ExecutionPlan {
    decls: Vec<AnalysisDecl>,
    /// Direct dependencies, as indices into `decls`.
    deps: Vec<Vec<usize>>,
    /// Minimal topological layering, each stage sorted by name.
    stages: Vec<Vec<usize>>,
    /// Transitive dependency names per declaration, for blackboard gating.
    transitive: Vec<BTreeSet<String>>,
    post: Option<AnalysisDecl>,
}

impl ExecutionPlan {
    /// Per-source analyses, sorted by name.
    pub fn decls(&self) -> &[AnalysisDecl] {
        &self.decls
    }

    pub fn deps_of(&self, decl_idx: usize) -> &[usize] {
        &self.deps[decl_idx]
    }

    pub fn transitive_deps_of(&self, decl_idx: usize) -> &BTreeSet<String> {
        &self.transitive[decl_idx]
    }

    pub fn post(&self) -> Option<&AnalysisDecl> {
        self.post.as_ref()
    }

    /// The stage layering by analysis name.
    pub fn stages(&self) -> Vec<Vec<&str>> {
        self.stages
            .iter()
            .map(|stage| stage.iter().map(|&i| self.decls[i].name.as_str()).collect())
            .collect()
    }

    /// Stage index of an analysis, by name.
    pub fn stage_of(&self, name: &str) -> Option<usize> {
        self.stages.iter().position(|stage| {
            stage.iter().any(|&i| self.decls[i].name == name)
        })
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PlanError {
    #[error("DUPLICATE_NAME: analysis name {name:?} declared more than once")]
    DuplicateName { name: String },
    #[error("UNKNOWN_KIND: analysis {analysis:?} has unregistered kind {kind:?}")]
    UnknownKind { analysis: String, kind: String },
    #[error("UNKNOWN_DEPENDENCY: analysis {analysis:?} depends on unknown analysis {dependency:?}")]
    UnknownDependency { analysis: String, dependency: String },
    #[error("CYCLE: dependency cycle among analyses: {}", members.join(", "))]
    Cycle { members: Vec<String> },
}

/// Validates the configured analyses against the registry and computes the
/// minimal stage layering.
pub fn plan(config: &StudyConfig, registry: &Registry) -> Result<ExecutionPlan, PlanError> {
    let mut decls = config.analyses.clone();
    decls.sort_by(|a, b| a.name.cmp(&b.name));

    let mut index: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, decl) in decls.iter().enumerate() {
        if index.insert(decl.name.as_str(), i).is_some() {
            return Err(PlanError::DuplicateName {
                name: decl.name.clone(),
            });
        }
    }
    if let Some(post) = &config.post_processing {
        if index.contains_key(post.name.as_str()) {
            return Err(PlanError::DuplicateName {
                name: post.name.clone(),
            });
        }
    }

    for decl in &decls {
        if !registry.has_kind(&decl.kind) {
            return Err(PlanError::UnknownKind {
                analysis: decl.name.clone(),
                kind: decl.kind.clone(),
            });
        }
    }
    if let Some(post) = &config.post_processing {
        if !registry.has_post_kind(&post.kind) {
            return Err(PlanError::UnknownKind {
                analysis: post.name.clone(),
                kind: post.kind.clone(),
            });
        }
    }

    let mut deps: Vec<Vec<usize>> = Vec::with_capacity(decls.len());
    for decl in &decls {
        let mut direct = Vec::with_capacity(decl.depends_on.len());
        for dep in &decl.depends_on {
            let Some(&i) = index.get(dep.as_str()) else {
                return Err(PlanError::UnknownDependency {
                    analysis: decl.name.clone(),
                    dependency: dep.clone(),
                });
            };
            direct.push(i);
        }
        deps.push(direct);
    }

    if let Some(cycle) = find_cycle(&deps) {
        let mut members: Vec<String> =
            cycle.into_iter().map(|i| decls[i].name.clone()).collect();
        members.sort();
        return Err(PlanError::Cycle { members });
    }

    // Minimal layering: memoized longest path from roots.
    let mut stage = vec![usize::MAX; decls.len()];
    fn stage_of(i: usize, deps: &[Vec<usize>], stage: &mut Vec<usize>) -> usize {
        if stage[i] != usize::MAX {
            return stage[i];
        }
        let s = deps[i]
            .iter()
            .map(|&d| stage_of(d, deps, stage) + 1)
            .max()
            .unwrap_or(0);
        stage[i] = s;
        s
    }
    for i in 0..decls.len() {
        stage_of(i, &deps, &mut stage);
    }
    let stage_count = stage.iter().map(|s| s + 1).max().unwrap_or(0);
    let mut stages: Vec<Vec<usize>> = vec![Vec::new(); stage_count];
    for (i, &s) in stage.iter().enumerate() {
        stages[s].push(i); // decls are name-sorted, so each stage is too
    }

    let mut transitive: Vec<BTreeSet<String>> = vec![BTreeSet::new(); decls.len()];
    for stage in &stages {
        for &i in stage {
            let mut closure = BTreeSet::new();
            for &d in &deps[i] {
                closure.insert(decls[d].name.clone());
                closure.extend(transitive[d].iter().cloned());
            }
            transitive[i] = closure;
        }
    }

    Ok(ExecutionPlan {
        decls,
        deps,
        stages,
        transitive,
        post: config.post_processing.clone(),
    })
}

/// Returns the members of one dependency cycle, if any exists.
fn find_cycle(deps: &[Vec<usize>]) -> Option<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        White,
        Gray,
        Black,
    }
    fn visit(
        node: usize,
        deps: &[Vec<usize>],
        marks: &mut Vec<Mark>,
        path: &mut Vec<usize>,
    ) -> Option<Vec<usize>> {
        marks[node] = Mark::Gray;
        path.push(node);
        for &next in &deps[node] {
            match marks[next] {
                Mark::Gray => {
                    let start = path.iter().position(|&n| n == next).expect("on path");
                    return Some(path[start..].to_vec());
                }
                Mark::White => {
                    if let Some(cycle) = visit(next, deps, marks, path) {
                        return Some(cycle);
                    }
                }
                Mark::Black => {}
            }
        }
        path.pop();
        marks[node] = Mark::Black;
        None
    }

    let mut marks = vec![Mark::White; deps.len()];
    for node in 0..deps.len() {
        if marks[node] == Mark::White {
            if let Some(cycle) = visit(node, deps, &mut marks, &mut Vec::new()) {
                return Some(cycle);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analyses;
    use std::collections::BTreeMap;
    use std::path::PathBuf;

    fn decl(name: &str, deps: &[&str]) -> AnalysisDecl {
        AnalysisDecl {
            name: name.to_string(),
            kind: "commit-stats".to_string(),
            depends_on: deps.iter().map(|s| s.to_string()).collect(),
            params: BTreeMap::new(),
        }
    }

    fn config(analyses: Vec<AnalysisDecl>) -> StudyConfig {
        StudyConfig {
            sources: vec![crate::extract::ExtractorSpec::git("/tmp/x", "s1")],
            analyses,
            post_processing: None,
            workers: 1,
            output_dir: PathBuf::from("out"),
        }
    }

    #[test]
    fn chain_layers_into_two_stages() {
        let cfg = config(vec![decl("A", &[]), decl("B", &["A"])]);
        let plan = plan(&cfg, &analyses::Registry::builtin()).unwrap();
        assert_eq!(plan.stages(), vec![vec!["A"], vec!["B"]]);
    }

    #[test]
    fn join_layers_dependencies_together() {
        let cfg = config(vec![decl("C", &["A", "B"]), decl("A", &[]), decl("B", &[])]);
        let plan = plan(&cfg, &analyses::Registry::builtin()).unwrap();
        assert_eq!(plan.stages(), vec![vec!["A", "B"], vec!["C"]]);
    }

    #[test]
    fn two_cycle_is_rejected_naming_both() {
        let cfg = config(vec![decl("A", &["B"]), decl("B", &["A"])]);
        let err = plan(&cfg, &analyses::Registry::builtin()).unwrap_err();
        assert_eq!(
            err,
            PlanError::Cycle {
                members: vec!["A".to_string(), "B".to_string()]
            }
        );
    }

    #[test]
    fn self_dependency_is_a_cycle() {
        let cfg = config(vec![decl("A", &["A"])]);
        let err = plan(&cfg, &analyses::Registry::builtin()).unwrap_err();
        assert_eq!(
            err,
            PlanError::Cycle {
                members: vec!["A".to_string()]
            }
        );
    }

    #[test]
    fn unknown_dependency_is_rejected() {
        let cfg = config(vec![decl("A", &["missing"])]);
        let err = plan(&cfg, &analyses::Registry::builtin()).unwrap_err();
        assert!(matches!(err, PlanError::UnknownDependency { .. }));
    }

    #[test]
    fn unknown_kind_is_rejected() {
        let mut d = decl("A", &[]);
        d.kind = "no-such-kind".to_string();
        let err = plan(&config(vec![d]), &analyses::Registry::builtin()).unwrap_err();
        assert!(matches!(err, PlanError::UnknownKind { .. }));
    }

    #[test]
    fn duplicate_names_are_rejected() {
        let cfg = config(vec![decl("A", &[]), decl("A", &[])]);
        let err = plan(&cfg, &analyses::Registry::builtin()).unwrap_err();
        assert!(matches!(err, PlanError::DuplicateName { .. }));
    }

    #[test]
    fn layering_is_order_stable() {
        let mut a = config(vec![
            decl("A", &[]),
            decl("B", &["A"]),
            decl("C", &["A"]),
            decl("D", &["B", "C"]),
        ]);
        let registry = analyses::Registry::builtin();
        let first = plan(&a, &registry).unwrap();
        a.analyses.reverse();
        let second = plan(&a, &registry).unwrap();
        assert_eq!(first.stages(), second.stages());
        for name in ["A", "B", "C", "D"] {
            assert_eq!(first.stage_of(name), second.stage_of(name));
        }
    }

    #[test]
    fn transitive_closure_covers_indirect_dependencies() {
        let cfg = config(vec![decl("A", &[]), decl("B", &["A"]), decl("C", &["B"])]);
        let plan = plan(&cfg, &analyses::Registry::builtin()).unwrap();
        let c_idx = plan.decls().iter().position(|d| d.name == "C").unwrap();
        let closure = plan.transitive_deps_of(c_idx);
        assert!(closure.contains("A") && closure.contains("B"));
    }
}
