/* C interface of the harmony mining-software-repositories platform. */

#ifndef HARMONY_H
#define HARMONY_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Status codes of every fallible call.
typedef enum HarmonyStatus {
  HARMONY_OK = 0,
  HARMONY_ERR_NULL_ARGUMENT = 1,
  HARMONY_ERR_INVALID_UTF8 = 2,
  HARMONY_ERR_NOT_A_REPOSITORY = 3,
  HARMONY_ERR_TOOL_FAILURE = 4,
  HARMONY_ERR_PARSE = 5,
  HARMONY_ERR_SCHEMA = 6,
  HARMONY_ERR_UNSUPPORTED_VERSION = 7,
  HARMONY_ERR_INVALID_MODEL = 8,
  HARMONY_ERR_IO = 9,
  HARMONY_ERR_NO_SUCH_REVISION = 10,
  HARMONY_ERR_NO_SUCH_PATH = 11,
  HARMONY_ERR_CONFIG = 12,
  HARMONY_ERR_PLAN = 13,
  HARMONY_ERR_ANALYSIS_FAILED = 14,
  HARMONY_ERR_INTERNAL = 15,
} HarmonyStatus;

// Opaque handle to an extracted or loaded repository model.
typedef struct HarmonyModel HarmonyModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version string; statically allocated, never freed.
const char *harmony_version(void);

// Message of the last failing call on this thread, or NULL. Valid until the
// next failing call on the same thread.
const char *harmony_last_error(void);

// Extracts a git repository into a model handle.
//
// # Safety
// `repo_path` and `source_name` must be valid NUL-terminated strings and
// `out_model` a valid pointer.
enum HarmonyStatus harmony_extract_git(const char *repo_path,
                                       const char *source_name,
                                       struct HarmonyModel **out_model);

// Loads a model file (canonical JSON) into a model handle.
//
// # Safety
// `path` must be a valid NUL-terminated string and `out_model` a valid
// pointer.
enum HarmonyStatus harmony_model_load(const char *path, struct HarmonyModel **out_model);

// Saves a model to `path` as canonical JSON.
//
// # Safety
// `model` must be a live handle from this library; `path` a valid string.
enum HarmonyStatus harmony_model_save(const struct HarmonyModel *model, const char *path);

// Serializes a model to a canonical JSON string (free with
// `harmony_string_free`).
//
// # Safety
// `model` must be a live handle; `out_json` a valid pointer.
enum HarmonyStatus harmony_model_to_json(const struct HarmonyModel *model, char **out_json);

// Runs validation; writes the number of violations to `out_violations`.
// Returns `HARMONY_OK` even when violations exist — inspect the count.
//
// # Safety
// `model` must be a live handle; `out_violations` a valid pointer.
enum HarmonyStatus harmony_model_validate(const struct HarmonyModel *model,
                                          uint64_t *out_violations);

// Reads the exact bytes of `item_path` at revision `revision` from a git
// repository. Free the buffer with `harmony_bytes_free`.
//
// # Safety
// All strings must be valid and NUL-terminated; `out_bytes` and `out_len`
// valid pointers.
enum HarmonyStatus harmony_item_content(const char *repo_path,
                                        const char *revision,
                                        const char *item_path,
                                        uint8_t **out_bytes,
                                        size_t *out_len);

// Runs a full study from a configuration file; on success writes the report
// (JSON) to `out_report_json`. Returns `HARMONY_ERR_ANALYSIS_FAILED` when
// the study ran but some analysis failed — the report is still written.
//
// # Safety
// `config_path` must be a valid NUL-terminated string; `out_report_json` a
// valid pointer.
enum HarmonyStatus harmony_study_run(const char *config_path, char **out_report_json);

// Releases a model handle. NULL is a no-op.
//
// # Safety
// `model` must be NULL or a handle returned by this library, not yet freed.
void harmony_model_free(struct HarmonyModel *model);

// Releases a string returned by this library. NULL is a no-op.
//
// # Safety
// `s` must be NULL or a string returned by this library, not yet freed.
void harmony_string_free(char *s);

// Releases a byte buffer returned by this library. NULL is a no-op.
//
// # Safety
// `bytes` and `len` must come from the same successful call, not yet freed.
void harmony_bytes_free(uint8_t *bytes, size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HARMONY_H */
