//! Compiles and runs a real C program against the generated header and the
//! static library, proving the published ABI works outside Rust.

use std::env;
use std::path::PathBuf;
use std::process::Command;

const C_PROGRAM: &str = r#"
#include <assert.h>
#include <stdint.h>
#include <stdio.h>
#include <string.h>

#include "harmony.h"

int main(void) {
    assert(strlen(harmony_version()) > 0);

    HarmonyModel *model = NULL;
    HarmonyStatus status = harmony_extract_git("/definitely/not/a/repo", "x", &model);
    assert(status == HARMONY_ERR_NOT_A_REPOSITORY);
    assert(model == NULL);
    assert(harmony_last_error() != NULL);
    assert(strstr(harmony_last_error(), "NOT_A_REPOSITORY") != NULL);

    HarmonyModel *empty = NULL;
    status = harmony_model_load(MODEL_PATH, &empty);
    assert(status == HARMONY_OK);
    assert(harmony_model_event_count(empty) == 0);

    uint64_t violations = 99;
    assert(harmony_model_validate(empty, &violations) == HARMONY_OK);
    assert(violations == 0);

    char *json = NULL;
    assert(harmony_model_to_json(empty, &json) == HARMONY_OK);
    assert(strstr(json, "\"format_version\":1") != NULL);
    harmony_string_free(json);
    harmony_model_free(empty);

    printf("c-smoke-ok\n");
    return 0;
}
"#;

fn target_debug_dir() -> PathBuf {
    if let Ok(dir) = env::var("CARGO_TARGET_DIR") {
        return PathBuf::from(dir).join("debug");
    }
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../target/debug")
        .canonicalize()
        .expect("workspace target dir")
}

#[test]
fn c_program_links_and_runs_against_the_static_library() {
    let staticlib = target_debug_dir().join("libharmony_ffi.a");
    assert!(
        staticlib.exists(),
        "static library missing at {}",
        staticlib.display()
    );
    let include_dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include");
    assert!(include_dir.join("harmony.h").exists(), "header not generated");

    let work = tempfile::TempDir::new().unwrap();
    let c_file = work.path().join("smoke.c");
    std::fs::write(&c_file, C_PROGRAM).unwrap();

    // The golden empty model the C program loads.
    let model_path = work.path().join("empty.harmony.json");
    std::fs::write(
        &model_path,
        b"{\"authors\":[],\"events\":[],\"format_version\":1,\"items\":[],\"source\":{\"location\":\"\",\"name\":\"empty\"}}\n",
    )
    .unwrap();

    let binary = work.path().join("smoke");
    let compile = Command::new("cc")
        .arg(&c_file)
        .arg(&staticlib)
        .arg("-I")
        .arg(&include_dir)
        .arg(format!(
            "-DMODEL_PATH=\"{}\"",
            model_path.to_str().unwrap()
        ))
        .args(["-lpthread", "-ldl", "-lm"])
        .arg("-o")
        .arg(&binary)
        .output()
        .expect("cc is available");
    assert!(
        compile.status.success(),
        "compilation failed: {}",
        String::from_utf8_lossy(&compile.stderr)
    );

    let run = Command::new(&binary).output().expect("smoke binary runs");
    assert!(
        run.status.success(),
        "smoke binary failed: {}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert_eq!(String::from_utf8_lossy(&run.stdout), "c-smoke-ok\n");
}
