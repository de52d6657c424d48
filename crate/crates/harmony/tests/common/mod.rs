//! Shared test fixtures: scripted git repositories with pinned authors and
//! timestamps, and a seeded random-model generator.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

use harmony::model::{ActionKind, EventId, ModelBuilder, RepositoryModel};

pub const ALICE: (&str, &str) = ("alice", "alice@example.com");
pub const BOB: (&str, &str) = ("bob", "bob@example.com");

/// A scripted repository plus the commit hashes in script order.
pub struct FixtureRepo {
    pub dir: TempDir,
    pub hashes: Vec<String>,
}

impl FixtureRepo {
    pub fn path(&self) -> &Path {
        self.dir.path()
    }
}

pub fn git(dir: &Path, envs: &[(&str, &str)], args: &[&str]) -> String {
    let output = Command::new("git")
        .arg("-C")
        .arg(dir)
        .args(args)
        .envs(envs.iter().copied())
        .output()
        .expect("git runs");
    assert!(
        output.status.success(),
        "git {:?} failed: {}",
        args,
        String::from_utf8_lossy(&output.stderr)
    );
    String::from_utf8_lossy(&output.stdout).trim().to_string()
}

fn git_allow_failure(dir: &Path, envs: &[(&str, &str)], args: &[&str]) {
    let _ = Command::new("git")
        .arg("-C")
        .arg(dir)
        .args(args)
        .envs(envs.iter().copied())
        .output()
        .expect("git runs");
}

fn init_repo(dir: &Path) {
    git(dir, &[], &["init", "-q", "-b", "main"]);
    git(dir, &[], &["config", "user.name", "fixture"]);
    git(dir, &[], &["config", "user.email", "fixture@example.com"]);
    git(dir, &[], &["config", "commit.gpgsign", "false"]);
}

fn author_env(who: (&str, &str), timestamp: i64) -> Vec<(String, String)> {
    let date = format!("@{timestamp} +0000");
    vec![
        ("GIT_AUTHOR_NAME".to_string(), who.0.to_string()),
        ("GIT_AUTHOR_EMAIL".to_string(), who.1.to_string()),
        ("GIT_AUTHOR_DATE".to_string(), date.clone()),
        ("GIT_COMMITTER_NAME".to_string(), who.0.to_string()),
        ("GIT_COMMITTER_EMAIL".to_string(), who.1.to_string()),
        ("GIT_COMMITTER_DATE".to_string(), date),
    ]
}

fn commit(dir: &Path, who: (&str, &str), timestamp: i64, message: &str) -> String {
    let envs = author_env(who, timestamp);
    let envs: Vec<(&str, &str)> = envs.iter().map(|(k, v)| (k.as_str(), v.as_str())).collect();
    git(dir, &envs, &["commit", "-q", "-m", message]);
    git(dir, &[], &["rev-parse", "HEAD"])
}

pub fn write_file(dir: &Path, name: &str, content: &str) {
    let path = dir.join(name);
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).expect("fixture dirs");
    }
    std::fs::write(path, content).expect("fixture file");
}

/// Timestamps of the five scripted commits, in script order.
pub const FIXTURE_TIMESTAMPS: [i64; 5] = [
    1_700_000_100,
    1_700_000_200,
    1_700_000_300,
    1_700_000_400,
    1_700_000_500,
];

/// The five-commit fixture: branch, merge, add/edit/delete.
///
/// - c1 (alice): CREATE a.txt ("first\n")
/// - c2 (alice): EDIT a.txt ("edited\n"), CREATE b.txt ("b0\n")
/// - c3 (bob, branch `feature` off c2): EDIT b.txt ("b1\n")
/// - c4 (alice, on main off c2): DELETE b.txt
/// - c5 (bob): merge of c3 into c4, conflict resolved by keeping the
///   deletion — two parents (c4, c3), zero actions
pub fn scripted_fixture_repo() -> FixtureRepo {
    let dir = TempDir::new().expect("tempdir");
    let path = dir.path();
    init_repo(path);
    let mut hashes = Vec::new();

    write_file(path, "a.txt", "first\n");
    git(path, &[], &["add", "."]);
    hashes.push(commit(path, ALICE, FIXTURE_TIMESTAMPS[0], "c1: add a"));

    write_file(path, "a.txt", "edited\n");
    write_file(path, "b.txt", "b0\n");
    git(path, &[], &["add", "."]);
    hashes.push(commit(path, ALICE, FIXTURE_TIMESTAMPS[1], "c2: edit a, add b"));

    git(path, &[], &["checkout", "-q", "-b", "feature"]);
    write_file(path, "b.txt", "b1\n");
    git(path, &[], &["add", "."]);
    hashes.push(commit(path, BOB, FIXTURE_TIMESTAMPS[2], "c3: edit b"));

    git(path, &[], &["checkout", "-q", "main"]);
    git(path, &[], &["rm", "-q", "b.txt"]);
    hashes.push(commit(path, ALICE, FIXTURE_TIMESTAMPS[3], "c4: delete b"));

    // The merge conflicts (b.txt: deleted on main, edited on feature); keep
    // the deletion and commit as bob.
    git_allow_failure(path, &[], &["merge", "--no-ff", "--no-commit", "feature"]);
    git(path, &[], &["rm", "-q", "b.txt"]);
    hashes.push(commit(path, BOB, FIXTURE_TIMESTAMPS[4], "c5: merge"));

    FixtureRepo { dir, hashes }
}

/// Two commits: r1 creates a.txt, r2 renames it to c.txt (`git mv`).
pub fn rename_fixture_repo() -> FixtureRepo {
    let dir = TempDir::new().expect("tempdir");
    let path = dir.path();
    init_repo(path);
    let mut hashes = Vec::new();

    write_file(path, "a.txt", "same content\n");
    git(path, &[], &["add", "."]);
    hashes.push(commit(path, ALICE, FIXTURE_TIMESTAMPS[0], "r1: add a"));

    git(path, &[], &["mv", "a.txt", "c.txt"]);
    hashes.push(commit(path, ALICE, FIXTURE_TIMESTAMPS[1], "r2: rename a to c"));

    FixtureRepo { dir, hashes }
}

/// An initialized repository with no commits.
pub fn empty_repo() -> TempDir {
    let dir = TempDir::new().expect("tempdir");
    init_repo(dir.path());
    dir
}

/// A deterministic pseudo-random valid model: up to 50 events, up to 10
/// authors (multi-author events included), random parent DAG.
pub fn random_model(seed: u64) -> RepositoryModel {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut builder = ModelBuilder::new(&format!("random-{seed}"), "memory");

    let author_count = rng.random_range(1..=10usize);
    let authors: Vec<_> = (0..author_count)
        .map(|i| {
            let email = if rng.random_bool(0.7) {
                Some(format!("a{i}@example.com"))
            } else {
                None
            };
            builder.add_author(&format!("author{i}"), email.as_deref())
        })
        .collect();

    let item_count = rng.random_range(1..=8usize);
    let items: Vec<_> = (0..item_count)
        .map(|i| builder.add_item(&format!("dir{}/file{i}.txt", i % 3)))
        .collect();

    let event_count = rng.random_range(0..=50usize);
    let mut events: Vec<EventId> = Vec::new();
    for i in 0..event_count {
        let parents = if events.is_empty() {
            Vec::new()
        } else {
            let max_parents = events.len().min(3);
            let n = rng.random_range(0..=max_parents);
            let mut picked: Vec<EventId> = Vec::new();
            for _ in 0..n {
                let p = events[rng.random_range(0..events.len())];
                if !picked.contains(&p) {
                    picked.push(p);
                }
            }
            picked
        };
        let author_list: Vec<_> = {
            let n = rng.random_range(1..=authors.len().min(3));
            (0..n)
                .map(|_| authors[rng.random_range(0..authors.len())])
                .collect()
        };
        let timestamp = rng.random_range(0..1_000_000i64);
        let event = builder.add_event(
            &format!("rev{i:04}"),
            parents,
            author_list,
            timestamp,
            &format!("message {i}"),
        );
        for _ in 0..rng.random_range(0..=4usize) {
            let item = items[rng.random_range(0..items.len())];
            let kind = match rng.random_range(0..3u8) {
                0 => ActionKind::Create,
                1 => ActionKind::Edit,
                _ => ActionKind::Delete,
            };
            builder.add_action(event, item, kind);
        }
        events.push(event);
    }

    builder.build()
}

/// Writes a study config JSON to `dir` and returns its path.
pub fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).expect("config file");
    path
}
