//! Persistence round trips against the checked-in golden file and the
//! scripted fixture.

mod common;

use harmony::model::ModelBuilder;
use harmony::persist;

use common::scripted_fixture_repo;

const GOLDEN_EMPTY: &[u8] = include_bytes!("golden/empty.harmony.json");

#[test]
fn empty_model_serializes_to_the_golden_bytes() {
    let model = ModelBuilder::new("empty", "").build();
    let bytes = persist::model_to_canonical_json(&model).unwrap();
    assert_eq!(bytes, GOLDEN_EMPTY);
}

#[test]
fn golden_file_loads_to_the_empty_model() {
    let model = persist::model_from_slice(GOLDEN_EMPTY, None).unwrap();
    assert!(model.validate().ok());
    assert_eq!(model.events().len(), 0);
    assert_eq!(model.authors().len(), 0);
    assert_eq!(model.items().len(), 0);
    assert_eq!(model.source().name, "empty");
}

#[test]
fn fixture_model_round_trips_through_disk() {
    let fixture = scripted_fixture_repo();
    let model =
        harmony::extract::extract_git(&harmony::extract::ExtractorSpec::git(
            fixture.path(),
            "fixture",
        ))
        .unwrap();

    let dir = tempfile::TempDir::new().unwrap();
    let path = dir.path().join("fixture.harmony.json");
    let written = persist::save_model(&model, &path).unwrap();
    assert_eq!(written, std::fs::metadata(&path).unwrap().len());

    let reloaded = persist::load_model(&path).unwrap();
    assert!(model.natural_eq(&reloaded));

    // save ∘ load ∘ save is a byte fixpoint.
    let second = dir.path().join("fixture2.harmony.json");
    persist::save_model(&reloaded, &second).unwrap();
    assert_eq!(
        std::fs::read(&path).unwrap(),
        std::fs::read(&second).unwrap()
    );
}
