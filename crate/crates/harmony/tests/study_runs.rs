//! End-to-end studies with the built-in analyses.

mod common;

use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value};

use harmony::analyses::Registry;
use harmony::engine::{self, AnalysisDecl, StudyConfig};
use harmony::extract::ExtractorSpec;
use harmony::model::ModelBuilder;
use harmony::study::run_study;

use common::scripted_fixture_repo;

fn decl(name: &str, kind: &str, deps: &[&str], params: Value) -> AnalysisDecl {
    AnalysisDecl {
        name: name.to_string(),
        kind: kind.to_string(),
        depends_on: deps.iter().map(|s| s.to_string()).collect(),
        params: params
            .as_object()
            .map(|m| m.iter().map(|(k, v)| (k.clone(), v.clone())).collect())
            .unwrap_or_default(),
    }
}

fn builtin_study(repo: &Path, output_dir: &Path, workers: usize) -> StudyConfig {
    StudyConfig {
        sources: vec![ExtractorSpec::git(repo, "fixture")],
        analyses: vec![
            decl("commit-stats", "commit-stats", &[], json!({})),
            decl("item-activity", "item-activity", &[], json!({})),
            decl("ownership", "ownership", &["item-activity"], json!({})),
        ],
        post_processing: Some(decl(
            "ownership-summary",
            "ownership-summary",
            &[],
            json!({}),
        )),
        workers,
        output_dir: output_dir.to_path_buf(),
    }
}

fn read_records(path: &Path) -> Vec<Value> {
    let document: Value = serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap();
    document["records"].as_array().unwrap().clone()
}

#[test]
fn fixture_study_runs_all_builtins() {
    let fixture = scripted_fixture_repo();
    let out = tempfile::TempDir::new().unwrap();
    let config = builtin_study(fixture.path(), out.path(), 2);
    let outcome = run_study(&config, &Registry::builtin()).unwrap();
    assert!(outcome.report.all_ok(), "{}", outcome.report.render());

    // Four result files plus the persisted model.
    assert_eq!(outcome.report.output_files().len(), 4);
    for file in [
        "fixture/commit-stats.json",
        "fixture/item-activity.json",
        "fixture/ownership.json",
        "_study/ownership-summary.json",
        "fixture/model.harmony.json",
    ] {
        assert!(out.path().join(file).exists(), "missing {file}");
    }

    // commit-stats: alice authored c1, c2, c4; bob c3 and the merge c5.
    let stats = read_records(&out.path().join("fixture/commit-stats.json"));
    assert_eq!(
        stats[0],
        json!({"actions": 5, "events": 5, "items": 2, "record": "totals"})
    );
    assert_eq!(
        stats[1],
        json!({"email": "alice@example.com", "events": 3, "name": "alice", "record": "author"})
    );
    assert_eq!(
        stats[2],
        json!({"email": "bob@example.com", "events": 2, "name": "bob", "record": "author"})
    );

    // item-activity per item: a.txt create+edit, b.txt create+edit+delete.
    let activity = read_records(&out.path().join("fixture/item-activity.json"));
    assert_eq!(
        activity[0],
        json!({"create": 1, "delete": 0, "edit": 1, "path": "a.txt", "record": "item", "total": 2})
    );
    assert_eq!(
        activity[1],
        json!({"create": 1, "delete": 1, "edit": 1, "path": "b.txt", "record": "item", "total": 3})
    );

    // ownership: a.txt fully alice's; b.txt split 2/3 alice, 1/3 bob.
    let ownership = read_records(&out.path().join("fixture/ownership.json"));
    assert_eq!(ownership.len(), 3);
    assert_eq!(ownership[0]["item"], "a.txt");
    assert_eq!(ownership[0]["name"], "alice");
    assert_eq!(ownership[0]["ownership"], json!(1.0));
    assert_eq!(ownership[0]["classification"], "MAJOR");
    assert_eq!(ownership[1]["item"], "b.txt");
    assert_eq!(ownership[1]["name"], "alice");
    assert_eq!(ownership[1]["ownership"].as_f64().unwrap(), 2.0 / 3.0);
    assert_eq!(ownership[2]["name"], "bob");
    assert_eq!(ownership[2]["ownership"].as_f64().unwrap(), 1.0 / 3.0);
    assert_eq!(ownership[2]["classification"], "MAJOR");

    // summary: a.txt has 1 major, b.txt has 2 → mean 1.5 over 2 items.
    let summary = read_records(&out.path().join("_study/ownership-summary.json"));
    assert_eq!(
        summary[0],
        json!({"items": 2, "mean_major": 1.5, "mean_minor": 0.0, "record": "source", "source": "fixture"})
    );
    assert_eq!(
        summary[1],
        json!({"items": 2, "mean_major": 1.5, "mean_minor": 0.0, "record": "study", "sources": 1})
    );
}

/// Oracle equivalence: ownership computed through the blackboard pipeline
/// equals ownership computed directly from the model's action counts.
#[test]
fn ownership_through_blackboard_matches_direct_computation() {
    let fixture = scripted_fixture_repo();
    let out = tempfile::TempDir::new().unwrap();
    let config = builtin_study(fixture.path(), out.path(), 1);
    let outcome = run_study(&config, &Registry::builtin()).unwrap();
    assert!(outcome.report.all_ok());

    let model =
        harmony::extract::extract_git(&ExtractorSpec::git(fixture.path(), "fixture")).unwrap();
    let counts = model.action_counts();
    let mut expected: Vec<(String, String, f64, f64, &str)> = counts
        .per_author
        .iter()
        .filter(|(_, w)| **w > 0.0)
        .map(|((item, author), weight)| {
            let total = counts.item_totals[item] as f64;
            let ownership = *weight / total;
            (
                model.item(*item).path.clone(),
                model.author(*author).name.clone(),
                ownership,
                *weight,
                if ownership >= 0.05 { "MAJOR" } else { "MINOR" },
            )
        })
        .collect();
    expected.sort_by(|a, b| {
        a.0.cmp(&b.0)
            .then(b.2.total_cmp(&a.2))
            .then(a.1.cmp(&b.1))
    });

    let records = read_records(&out.path().join("fixture/ownership.json"));
    assert_eq!(records.len(), expected.len());
    for (record, (item, name, ownership, weight, class)) in records.iter().zip(&expected) {
        assert_eq!(record["item"].as_str().unwrap(), item);
        assert_eq!(record["name"].as_str().unwrap(), name);
        assert_eq!(record["ownership"].as_f64().unwrap(), *ownership);
        assert_eq!(record["contributions"].as_f64().unwrap(), *weight);
        assert_eq!(record["classification"].as_str().unwrap(), *class);
    }
}

#[test]
fn rerunning_the_study_reproduces_every_byte() {
    let fixture = scripted_fixture_repo();
    let registry = Registry::builtin();

    let out1 = tempfile::TempDir::new().unwrap();
    let first = run_study(&builtin_study(fixture.path(), out1.path(), 2), &registry).unwrap();
    let out2 = tempfile::TempDir::new().unwrap();
    let second = run_study(&builtin_study(fixture.path(), out2.path(), 2), &registry).unwrap();

    assert_eq!(first.blackboard, second.blackboard);
    for file in [
        "fixture/model.harmony.json",
        "fixture/commit-stats.json",
        "fixture/item-activity.json",
        "fixture/ownership.json",
        "_study/ownership-summary.json",
    ] {
        assert_eq!(
            std::fs::read(out1.path().join(file)).unwrap(),
            std::fs::read(out2.path().join(file)).unwrap(),
            "{file} differs between runs"
        );
    }
}

#[test]
fn multi_author_event_counts_each_author_once() {
    let mut b = ModelBuilder::new("pair", "memory");
    let a1 = b.add_author("ann", None);
    let a2 = b.add_author("ben", None);
    let f = b.add_item("f.txt");
    let e = b.add_event("c1", vec![], vec![a1, a2], 1, "pair-programmed");
    b.add_action(e, f, harmony::model::ActionKind::Create);
    let model = Arc::new(b.build());

    let out = tempfile::TempDir::new().unwrap();
    let config = StudyConfig {
        sources: vec![ExtractorSpec::git("/unused", "pair")],
        analyses: vec![
            decl("commit-stats", "commit-stats", &[], json!({})),
            decl("item-activity", "item-activity", &[], json!({})),
            decl("ownership", "ownership", &["item-activity"], json!({})),
        ],
        post_processing: None,
        workers: 1,
        output_dir: out.path().to_path_buf(),
    };
    let registry = Registry::builtin();
    let plan = engine::plan(&config, &registry).unwrap();
    let outcome = engine::execute(&plan, &[model], &config, &registry).unwrap();
    assert!(outcome.report.all_ok());

    let stats = read_records(&out.path().join("pair/commit-stats.json"));
    assert_eq!(
        stats[0],
        json!({"actions": 1, "events": 1, "items": 1, "record": "totals"})
    );
    assert_eq!(stats[1]["name"], "ann");
    assert_eq!(stats[1]["events"], 1);
    assert_eq!(stats[2]["name"], "ben");
    assert_eq!(stats[2]["events"], 1);

    // Each author owns half of the single action.
    let ownership = read_records(&out.path().join("pair/ownership.json"));
    assert_eq!(ownership.len(), 2);
    for record in &ownership {
        assert_eq!(record["ownership"], json!(0.5));
        assert_eq!(record["contributions"], json!(0.5));
        assert_eq!(record["classification"], "MAJOR");
    }
}

#[test]
fn empty_model_analyses_emit_empty_tables() {
    let model = Arc::new(ModelBuilder::new("void", "memory").build());
    let out = tempfile::TempDir::new().unwrap();
    let config = StudyConfig {
        sources: vec![ExtractorSpec::git("/unused", "void")],
        analyses: vec![
            decl("commit-stats", "commit-stats", &[], json!({})),
            decl("item-activity", "item-activity", &[], json!({})),
            decl("ownership", "ownership", &["item-activity"], json!({})),
        ],
        post_processing: Some(decl(
            "ownership-summary",
            "ownership-summary",
            &[],
            json!({}),
        )),
        workers: 1,
        output_dir: out.path().to_path_buf(),
    };
    let registry = Registry::builtin();
    let plan = engine::plan(&config, &registry).unwrap();
    let outcome = engine::execute(&plan, &[model], &config, &registry).unwrap();
    assert!(outcome.report.all_ok(), "{}", outcome.report.render());

    let stats = read_records(&out.path().join("void/commit-stats.json"));
    assert_eq!(
        stats,
        vec![json!({"actions": 0, "events": 0, "items": 0, "record": "totals"})]
    );
    assert_eq!(
        read_records(&out.path().join("void/item-activity.json")),
        Vec::<Value>::new()
    );
    assert_eq!(
        read_records(&out.path().join("void/ownership.json")),
        Vec::<Value>::new()
    );
    let summary = read_records(&out.path().join("_study/ownership-summary.json"));
    assert_eq!(
        summary[0],
        json!({"items": 0, "mean_major": 0.0, "mean_minor": 0.0, "record": "source", "source": "void"})
    );
}

#[test]
fn custom_ownership_threshold_reclassifies() {
    let mut b = ModelBuilder::new("s", "memory");
    let major = b.add_author("big", None);
    let minor = b.add_author("small", None);
    let f = b.add_item("f.txt");
    let mut prev = Vec::new();
    for i in 0..9 {
        let e = b.add_event(&format!("M{i}"), prev.clone(), vec![major], i, "");
        b.add_action(e, f, harmony::model::ActionKind::Edit);
        prev = vec![e];
    }
    let e = b.add_event("m9", prev, vec![minor], 9, "");
    b.add_action(e, f, harmony::model::ActionKind::Edit);
    let model = Arc::new(b.build());

    // 10% contributor: MAJOR at the default 5%, MINOR at a 20% threshold.
    for (threshold, expected) in [(json!({}), "MAJOR"), (json!({"threshold": 0.2}), "MINOR")] {
        let out = tempfile::TempDir::new().unwrap();
        let config = StudyConfig {
            sources: vec![ExtractorSpec::git("/unused", "s")],
            analyses: vec![
                decl("item-activity", "item-activity", &[], json!({})),
                decl("ownership", "ownership", &["item-activity"], threshold),
            ],
            post_processing: None,
            workers: 1,
            output_dir: out.path().to_path_buf(),
        };
        let registry = Registry::builtin();
        let plan = engine::plan(&config, &registry).unwrap();
        let outcome = engine::execute(&plan, &[model.clone()], &config, &registry).unwrap();
        assert!(outcome.report.all_ok());
        let records = read_records(&out.path().join("s/ownership.json"));
        let small = records.iter().find(|r| r["name"] == "small").unwrap();
        assert_eq!(small["ownership"], json!(0.1));
        assert_eq!(small["classification"], expected);
    }
}

#[test]
fn summary_without_ownership_reports_missing_dependency_data() {
    let model = Arc::new(ModelBuilder::new("s", "memory").build());
    let out = tempfile::TempDir::new().unwrap();
    let config = StudyConfig {
        sources: vec![ExtractorSpec::git("/unused", "s")],
        analyses: vec![decl("commit-stats", "commit-stats", &[], json!({}))],
        post_processing: Some(decl(
            "ownership-summary",
            "ownership-summary",
            &[],
            json!({}),
        )),
        workers: 1,
        output_dir: out.path().to_path_buf(),
    };
    let registry = Registry::builtin();
    let plan = engine::plan(&config, &registry).unwrap();
    let outcome = engine::execute(&plan, &[model], &config, &registry).unwrap();
    let post = outcome.report.post.unwrap();
    match post.status {
        harmony::engine::RunStatus::Failed { ref message } => {
            assert!(message.contains("MISSING_DEPENDENCY_DATA"), "got {message}")
        }
        harmony::engine::RunStatus::Ok => panic!("summary must fail without ownership"),
    }
}

#[test]
fn study_with_model_file_source_round_trips() {
    let fixture = scripted_fixture_repo();
    let extracted =
        harmony::extract::extract_git(&ExtractorSpec::git(fixture.path(), "fixture")).unwrap();
    let dir = tempfile::TempDir::new().unwrap();
    let model_path = dir.path().join("fixture.harmony.json");
    harmony::persist::save_model(&extracted, &model_path).unwrap();

    let out = tempfile::TempDir::new().unwrap();
    let config = StudyConfig {
        sources: vec![ExtractorSpec::model_file(&model_path, "fixture")],
        analyses: vec![decl("commit-stats", "commit-stats", &[], json!({}))],
        post_processing: None,
        workers: 1,
        output_dir: out.path().to_path_buf(),
    };
    let outcome = run_study(&config, &Registry::builtin()).unwrap();
    assert!(outcome.report.all_ok());
    let stats = read_records(&out.path().join("fixture/commit-stats.json"));
    assert_eq!(
        stats[0],
        json!({"actions": 5, "events": 5, "items": 2, "record": "totals"})
    );
}

#[test]
fn item_activity_sees_rename_as_delete_plus_create() {
    let fixture = common::rename_fixture_repo();
    let out = tempfile::TempDir::new().unwrap();
    let config = StudyConfig {
        sources: vec![ExtractorSpec::git(fixture.path(), "rename")],
        analyses: vec![decl("item-activity", "item-activity", &[], json!({}))],
        post_processing: None,
        workers: 1,
        output_dir: out.path().to_path_buf(),
    };
    let outcome = run_study(&config, &Registry::builtin()).unwrap();
    assert!(outcome.report.all_ok());

    let records = read_records(&out.path().join("rename/item-activity.json"));
    assert_eq!(
        records[0],
        json!({"create": 1, "delete": 1, "edit": 0, "path": "a.txt", "record": "item", "total": 2})
    );
    assert_eq!(
        records[1],
        json!({"create": 1, "delete": 0, "edit": 0, "path": "c.txt", "record": "item", "total": 1})
    );
}

#[test]
fn ownership_registers_its_threshold_default() {
    let registry = Registry::builtin();
    let ownership = registry.get("ownership").unwrap();
    let defaults = ownership.default_params();
    assert_eq!(defaults["threshold"], json!(0.05));
}
