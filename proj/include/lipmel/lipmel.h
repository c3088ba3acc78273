// include/lipmel/lipmel.h

// Copyright 2026  The lipmel Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

/* C interface to the lipmel lip-to-speech engine.
 *
 * Every function returns an lm_status; on failure lm_last_error() holds a
 * message for the calling thread. Handles are opaque and owned by the
 * caller, who releases them with the matching _destroy function. */
#ifndef LIPMEL_LIPMEL_H_
#define LIPMEL_LIPMEL_H_

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(LIPMEL_BUILDING_LIBRARY)
#define LM_API __attribute__((visibility("default")))
#else
#define LM_API
#endif

/* Values are stable; the command-line tool uses them as exit codes. */
typedef enum lm_status {
  LM_OK = 0,
  LM_ERR_INTERNAL = 1,
  LM_ERR_CONFIG = 2,
  LM_ERR_IO = 3,
  LM_ERR_NUMERIC = 4,
  LM_ERR_MAX_STEPS = 5,
  LM_ERR_CHECK_FAILED = 6,
  LM_ERR_PARSE = 7,
  LM_ERR_SHAPE = 8,
  LM_ERR_INVALID_ARGUMENT = 9
} lm_status;

typedef enum lm_stop_reason {
  LM_STOP_PERIOD_DETECTED = 0,
  LM_STOP_MAX_STEPS = 1,
  LM_STOP_TARGET_LENGTH = 2
} lm_stop_reason;

typedef enum lm_stream { LM_STREAM_OUT = 0, LM_STREAM_WARN = 1 } lm_stream;

/* Receives one line of command output, without a trailing newline. */
typedef void (*lm_line_fn)(void* user, lm_stream stream, const char* line);

typedef struct lm_config lm_config;
typedef struct lm_model lm_model;

LM_API const char* lm_version(void);
LM_API const char* lm_status_string(lm_status status);
/* Message of the last failure on this thread; empty after success. */
LM_API const char* lm_last_error(void);
/* Releases buffers returned by the library. */
LM_API void lm_free(void* p);

/* Key-value configuration ("key = value" lines, '#' comments). */
LM_API lm_status lm_config_create(lm_config** out);
LM_API void lm_config_destroy(lm_config* cfg);
/* Merges a file; its keys override earlier ones. */
LM_API lm_status lm_config_load_file(lm_config* cfg, const char* path);
LM_API lm_status lm_config_set(lm_config* cfg, const char* key, const char* value);
/* Parses "key=value". */
LM_API lm_status lm_config_apply(lm_config* cfg, const char* assignment);
/* *value is NULL when the key is unset; the pointer stays valid until the
 * config is modified or destroyed. */
LM_API lm_status lm_config_get(const lm_config* cfg, const char* key, const char** value);
/* Fails with LM_ERR_CONFIG on keys no command understands. */
LM_API lm_status lm_config_validate(const lm_config* cfg);
/* Newly allocated "key = value" text; release with lm_free. */
LM_API lm_status lm_config_to_text(const lm_config* cfg, char** text);

/* Runs one command: gendata, train, synthesize, evaluate, gradcheck or
 * inspect. All inputs come from `cfg`; `sink` may be NULL. */
LM_API lm_status lm_run(const char* command, const lm_config* cfg, lm_line_fn sink, void* user);

/* Trained model loaded from a checkpoint. */
LM_API lm_status lm_model_load(const char* checkpoint_path, lm_model** out);
LM_API void lm_model_destroy(lm_model* model);
LM_API lm_status lm_model_info(const lm_model* model, int64_t* parameter_count, int64_t* n_mels,
                               int64_t* frame_size);
/* Free-running inference on a video container. *mel is a newly allocated
 * row-major [rows x cols] log-mel matrix; release with lm_free. */
LM_API lm_status lm_model_infer(lm_model* model, const char* video_path, uint64_t seed, float** mel,
                                size_t* rows, size_t* cols, lm_stop_reason* stop);

#ifdef __cplusplus
}
#endif

#endif /* LIPMEL_LIPMEL_H_ */
