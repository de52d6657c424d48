//! C ABI for the harmony platform.
//!
//! Conventions:
//! - Every fallible function returns a [`HarmonyStatus`]; `HARMONY_OK` is 0.
//! - Models are opaque [`HarmonyModel`] handles created by the library and
//!   released with [`harmony_model_free`].
//! - Strings returned through out-parameters are NUL-terminated, allocated by
//!   the library, and released with [`harmony_string_free`]; byte buffers with
//!   [`harmony_bytes_free`].
//! - On failure, [`harmony_last_error`] returns a thread-local message valid
//!   until the next failing call on the same thread.
//!
//! The C header is generated into `include/harmony.h` at build time.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::path::{Path, PathBuf};

use harmony::analyses::Registry;
use harmony::engine::{RunRecord, RunStatus};
use harmony::extract::{self, ExtractError, ExtractorSpec};
use harmony::persist::{self, PersistError};
use harmony::study::{self, StudyError};
use harmony::RepositoryModel;

/// Status codes of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HarmonyStatus {
    HarmonyOk = 0,
    HarmonyErrNullArgument = 1,
    HarmonyErrInvalidUtf8 = 2,
    HarmonyErrNotARepository = 3,
    HarmonyErrToolFailure = 4,
    HarmonyErrParse = 5,
    HarmonyErrSchema = 6,
    HarmonyErrUnsupportedVersion = 7,
    HarmonyErrInvalidModel = 8,
    HarmonyErrIo = 9,
    HarmonyErrNoSuchRevision = 10,
    HarmonyErrNoSuchPath = 11,
    HarmonyErrConfig = 12,
    HarmonyErrPlan = 13,
    HarmonyErrAnalysisFailed = 14,
    HarmonyErrInternal = 15,
}

/// Opaque handle to an extracted or loaded repository model.
pub struct HarmonyModel {
    inner: RepositoryModel,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: impl Into<String>) {
    let message = message.into();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(message.replace('\0', "?")).ok();
    });
}

fn fail(status: HarmonyStatus, message: impl Into<String>) -> HarmonyStatus {
    set_last_error(message);
    status
}

fn persist_status(error: &PersistError) -> HarmonyStatus {
    match error {
        PersistError::InvalidModel(_) => HarmonyStatus::HarmonyErrInvalidModel,
        PersistError::Schema { .. } => HarmonyStatus::HarmonyErrSchema,
        PersistError::UnsupportedVersion { .. } => HarmonyStatus::HarmonyErrUnsupportedVersion,
        PersistError::Io(_) => HarmonyStatus::HarmonyErrIo,
    }
}

fn extract_status(error: &ExtractError) -> HarmonyStatus {
    match error {
        ExtractError::NotARepository { .. } => HarmonyStatus::HarmonyErrNotARepository,
        ExtractError::ToolFailure { .. } => HarmonyStatus::HarmonyErrToolFailure,
        ExtractError::Parse { .. } | ExtractError::IncompleteHistory { .. } => {
            HarmonyStatus::HarmonyErrParse
        }
        ExtractError::InvalidModel(_) => HarmonyStatus::HarmonyErrInvalidModel,
        ExtractError::NoSuchRevision { .. } => HarmonyStatus::HarmonyErrNoSuchRevision,
        ExtractError::NoSuchPathAtRevision { .. } => HarmonyStatus::HarmonyErrNoSuchPath,
        ExtractError::Model(e) => persist_status(e),
        ExtractError::Io(_) => HarmonyStatus::HarmonyErrIo,
    }
}

/// # Safety
/// `ptr` must be NULL or a valid NUL-terminated string.
unsafe fn required_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, HarmonyStatus> {
    if ptr.is_null() {
        return Err(fail(
            HarmonyStatus::HarmonyErrNullArgument,
            format!("{what} is NULL"),
        ));
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        fail(
            HarmonyStatus::HarmonyErrInvalidUtf8,
            format!("{what} is not valid UTF-8"),
        )
    })
}

fn required_out<T>(ptr: *mut T, what: &str) -> Result<(), HarmonyStatus> {
    if ptr.is_null() {
        Err(fail(
            HarmonyStatus::HarmonyErrNullArgument,
            format!("{what} is NULL"),
        ))
    } else {
        Ok(())
    }
}

fn leak_model(model: RepositoryModel, out: *mut *mut HarmonyModel) -> HarmonyStatus {
    let handle = Box::new(HarmonyModel { inner: model });
    unsafe { *out = Box::into_raw(handle) };
    HarmonyStatus::HarmonyOk
}

fn leak_string(text: String, out: *mut *mut c_char) -> HarmonyStatus {
    match CString::new(text.replace('\0', "?")) {
        Ok(s) => {
            unsafe { *out = s.into_raw() };
            HarmonyStatus::HarmonyOk
        }
        Err(_) => fail(HarmonyStatus::HarmonyErrInternal, "string not encodable"),
    }
}

/// Library version string; statically allocated, never freed.
#[no_mangle]
pub extern "C" fn harmony_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message of the last failing call on this thread, or NULL. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn harmony_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|s| s.as_ptr())
            .unwrap_or(std::ptr::null())
    })
}

/// Extracts a git repository into a model handle.
///
/// # Safety
/// `repo_path` and `source_name` must be valid NUL-terminated strings and
/// `out_model` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn harmony_extract_git(
    repo_path: *const c_char,
    source_name: *const c_char,
    out_model: *mut *mut HarmonyModel,
) -> HarmonyStatus {
    let (repo, name) = match (
        required_str(repo_path, "repo_path"),
        required_str(source_name, "source_name"),
    ) {
        (Ok(r), Ok(n)) => (r, n),
        (Err(e), _) | (_, Err(e)) => return e,
    };
    if required_out(out_model, "out_model").is_err() {
        return HarmonyStatus::HarmonyErrNullArgument;
    }
    match extract::extract_git(&ExtractorSpec::git(repo, name)) {
        Ok(model) => leak_model(model, out_model),
        Err(e) => fail(extract_status(&e), e.to_string()),
    }
}

/// Loads a model file (canonical JSON) into a model handle.
///
/// # Safety
/// `path` must be a valid NUL-terminated string and `out_model` a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn harmony_model_load(
    path: *const c_char,
    out_model: *mut *mut HarmonyModel,
) -> HarmonyStatus {
    let path = match required_str(path, "path") {
        Ok(p) => PathBuf::from(p),
        Err(e) => return e,
    };
    if required_out(out_model, "out_model").is_err() {
        return HarmonyStatus::HarmonyErrNullArgument;
    }
    match persist::load_model(&path) {
        Ok(model) => leak_model(model, out_model),
        Err(e) => fail(persist_status(&e), e.to_string()),
    }
}

/// Saves a model to `path` as canonical JSON.
///
/// # Safety
/// `model` must be a live handle from this library; `path` a valid string.
#[no_mangle]
pub unsafe extern "C" fn harmony_model_save(
    model: *const HarmonyModel,
    path: *const c_char,
) -> HarmonyStatus {
    if model.is_null() {
        return fail(HarmonyStatus::HarmonyErrNullArgument, "model is NULL");
    }
    let path = match required_str(path, "path") {
        Ok(p) => PathBuf::from(p),
        Err(e) => return e,
    };
    match persist::save_model(&(*model).inner, &path) {
        Ok(_) => HarmonyStatus::HarmonyOk,
        Err(e) => fail(persist_status(&e), e.to_string()),
    }
}

/// Serializes a model to a canonical JSON string (free with
/// `harmony_string_free`).
///
/// # Safety
/// `model` must be a live handle; `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn harmony_model_to_json(
    model: *const HarmonyModel,
    out_json: *mut *mut c_char,
) -> HarmonyStatus {
    if model.is_null() {
        return fail(HarmonyStatus::HarmonyErrNullArgument, "model is NULL");
    }
    if required_out(out_json, "out_json").is_err() {
        return HarmonyStatus::HarmonyErrNullArgument;
    }
    match persist::model_to_canonical_json(&(*model).inner) {
        Ok(bytes) => leak_string(String::from_utf8_lossy(&bytes).to_string(), out_json),
        Err(e) => fail(persist_status(&e), e.to_string()),
    }
}

/// Runs validation; writes the number of violations to `out_violations`.
/// Returns `HARMONY_OK` even when violations exist — inspect the count.
///
/// # Safety
/// `model` must be a live handle; `out_violations` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn harmony_model_validate(
    model: *const HarmonyModel,
    out_violations: *mut u64,
) -> HarmonyStatus {
    if model.is_null() {
        return fail(HarmonyStatus::HarmonyErrNullArgument, "model is NULL");
    }
    if required_out(out_violations, "out_violations").is_err() {
        return HarmonyStatus::HarmonyErrNullArgument;
    }
    let report = (*model).inner.validate();
    *out_violations = report.violations.len() as u64;
    if !report.ok() {
        set_last_error(report.to_string());
    }
    HarmonyStatus::HarmonyOk
}

macro_rules! count_getter {
    ($(#[$meta:meta])* $name:ident, $field:ident) => {
        $(#[$meta])*
        /// Returns 0 for a NULL handle.
        ///
        /// # Safety
        /// `model` must be NULL or a live handle from this library.
        #[no_mangle]
        pub unsafe extern "C" fn $name(model: *const HarmonyModel) -> u64 {
            if model.is_null() {
                return 0;
            }
            (*model).inner.$field().len() as u64
        }
    };
}

count_getter!(
    /// Number of events (revisions) in the model.
    harmony_model_event_count,
    events
);
count_getter!(
    /// Number of items (versioned files) in the model.
    harmony_model_item_count,
    items
);
count_getter!(
    /// Number of distinct authors in the model.
    harmony_model_author_count,
    authors
);
count_getter!(
    /// Number of actions in the model.
    harmony_model_action_count,
    actions
);

/// Reads the exact bytes of `item_path` at revision `revision` from a git
/// repository. Free the buffer with `harmony_bytes_free`.
///
/// # Safety
/// All strings must be valid and NUL-terminated; `out_bytes` and `out_len`
/// valid pointers.
#[no_mangle]
pub unsafe extern "C" fn harmony_item_content(
    repo_path: *const c_char,
    revision: *const c_char,
    item_path: *const c_char,
    out_bytes: *mut *mut u8,
    out_len: *mut usize,
) -> HarmonyStatus {
    let (repo, rev, path) = match (
        required_str(repo_path, "repo_path"),
        required_str(revision, "revision"),
        required_str(item_path, "item_path"),
    ) {
        (Ok(a), Ok(b), Ok(c)) => (a, b, c),
        (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => return e,
    };
    if required_out(out_bytes, "out_bytes").is_err() || required_out(out_len, "out_len").is_err() {
        return HarmonyStatus::HarmonyErrNullArgument;
    }
    match extract::item_content(&ExtractorSpec::git(repo, ""), rev, path) {
        Ok(bytes) => {
            let mut boxed = bytes.into_boxed_slice();
            *out_len = boxed.len();
            *out_bytes = boxed.as_mut_ptr();
            std::mem::forget(boxed);
            HarmonyStatus::HarmonyOk
        }
        Err(e) => fail(extract_status(&e), e.to_string()),
    }
}

fn record_json(record: &RunRecord) -> serde_json::Value {
    serde_json::json!({
        "analysis": record.analysis,
        "duration_ms": record.duration.as_secs_f64() * 1000.0,
        "output_file": record.output_file.as_ref().map(|p| p.display().to_string()),
        "source": record.source,
        "status": match &record.status {
            RunStatus::Ok => "OK".to_string(),
            RunStatus::Failed { message } => format!("FAILED: {message}"),
        },
    })
}

/// Runs a full study from a configuration file; on success writes the report
/// (JSON) to `out_report_json`. Returns `HARMONY_ERR_ANALYSIS_FAILED` when
/// the study ran but some analysis failed — the report is still written.
///
/// # Safety
/// `config_path` must be a valid NUL-terminated string; `out_report_json` a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn harmony_study_run(
    config_path: *const c_char,
    out_report_json: *mut *mut c_char,
) -> HarmonyStatus {
    let path = match required_str(config_path, "config_path") {
        Ok(p) => PathBuf::from(p),
        Err(e) => return e,
    };
    if required_out(out_report_json, "out_report_json").is_err() {
        return HarmonyStatus::HarmonyErrNullArgument;
    }
    let registry = Registry::builtin();
    match study::run_study_file(Path::new(&path), &registry) {
        Ok(outcome) => {
            let report = &outcome.report;
            let document = serde_json::json!({
                "all_ok": report.all_ok(),
                "blackboard": outcome.blackboard,
                "post": report.post.as_ref().map(record_json),
                "records": report.records.iter().map(record_json).collect::<Vec<_>>(),
                "wall_ms": report.wall.as_secs_f64() * 1000.0,
            });
            let all_ok = report.all_ok();
            let status = leak_string(document.to_string(), out_report_json);
            if status != HarmonyStatus::HarmonyOk {
                return status;
            }
            if all_ok {
                HarmonyStatus::HarmonyOk
            } else {
                fail(
                    HarmonyStatus::HarmonyErrAnalysisFailed,
                    "one or more analyses failed; see the report",
                )
            }
        }
        Err(e) => {
            let status = match &e {
                StudyError::Config(_) => HarmonyStatus::HarmonyErrConfig,
                StudyError::Plan(_) => HarmonyStatus::HarmonyErrPlan,
                StudyError::Extract { error, .. } => extract_status(error),
                StudyError::SaveModel { error, .. } => persist_status(error),
                StudyError::Execute(_) => HarmonyStatus::HarmonyErrIo,
            };
            fail(status, e.to_string())
        }
    }
}

/// Releases a model handle. NULL is a no-op.
///
/// # Safety
/// `model` must be NULL or a handle returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn harmony_model_free(model: *mut HarmonyModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Releases a string returned by this library. NULL is a no-op.
///
/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn harmony_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Releases a byte buffer returned by this library. NULL is a no-op.
///
/// # Safety
/// `bytes` and `len` must come from the same successful call, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn harmony_bytes_free(bytes: *mut u8, len: usize) {
    if !bytes.is_null() {
        drop(Box::from_raw(std::ptr::slice_from_raw_parts_mut(bytes, len)));
    }
}
