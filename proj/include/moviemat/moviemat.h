/*
 * Copyright 2026 The MovieMat Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to the MovieMat context-aware recommender.
 *
 * All objects are opaque handles owned by the caller and released with the
 * matching *_free function. Every fallible call returns an mm_status; on
 * failure mm_last_error() describes the problem (per thread, valid until the
 * next failing call on that thread). Strings returned through char** out
 * parameters are heap allocated and must be released with mm_string_free().
 */
#ifndef MOVIEMAT_MOVIEMAT_H
#define MOVIEMAT_MOVIEMAT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MOVIEMAT_BUILDING_LIBRARY)
#    define MM_API __declspec(dllexport)
#  else
#    define MM_API __declspec(dllimport)
#  endif
#else
#  define MM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Values 1-3 match the CLI exit codes. */
typedef enum mm_status {
  MM_OK = 0,
  MM_ERR_USAGE = 1,      /* invalid argument or configuration */
  MM_ERR_DATA = 2,       /* I/O failure or malformed input */
  MM_ERR_DIVERGENCE = 3, /* training produced non-finite/exploding parameters */
  MM_ERR_INTERNAL = 4
} mm_status;

typedef struct mm_schema mm_schema;
typedef struct mm_dataset mm_dataset;
typedef struct mm_model mm_model;

MM_API const char* mm_version(void);
MM_API const char* mm_last_error(void);
MM_API void mm_string_free(char* s);

/* --- context schema ---------------------------------------------------- */

/* Bundled LDOS-CoMoDa schema. */
MM_API mm_status mm_schema_default(mm_schema** out);
MM_API mm_status mm_schema_load(const char* path, mm_schema** out);
MM_API mm_status mm_schema_to_json(const mm_schema* schema, char** out_json);
MM_API void mm_schema_free(mm_schema* schema);

/* --- datasets ---------------------------------------------------------- */

/* schema may be NULL for the bundled default. */
MM_API mm_status mm_dataset_load(const char* path, const mm_schema* schema, mm_dataset** out);
MM_API mm_status mm_dataset_counts(const mm_dataset* ds, size_t* users, size_t* items,
                                   size_t* records);
/* {"users", "items", "records", "rating_histogram"} */
MM_API mm_status mm_dataset_stats_json(const mm_dataset* ds, char** out_json);
MM_API void mm_dataset_free(mm_dataset* ds);

/* Writes a CoMoDa-shaped synthetic dataset (CSV, default schema layout). */
MM_API mm_status mm_synthesize(size_t users, size_t items, size_t records, uint64_t seed,
                               const char* out_path);

/* --- models ------------------------------------------------------------ */

MM_API mm_status mm_model_load(const char* path, mm_model** out);
MM_API mm_status mm_model_save(const mm_model* model, const char* path);
/* Variant name ("classic", "moviemat", "moviemat-plus"). Owned by the model. */
MM_API const char* mm_model_variant(const mm_model* model);
MM_API size_t mm_model_context_count(const mm_model* model);
/* Name of the idx-th context field of the layout; NULL if out of range. */
MM_API const char* mm_model_context_name(const mm_model* model, size_t idx);
MM_API mm_status mm_model_predict_rating(const mm_model* model, const char* user_id,
                                         const char* item_id, double* out);
MM_API mm_status mm_model_predict_context(const mm_model* model, const char* user_id,
                                          const char* item_id, const char* field, double* out);
MM_API void mm_model_free(mm_model* model);

/* --- experiments ------------------------------------------------------- */

/* config_json uses the experiment keys documented in the README. On success
 * *out_summary receives a JSON summary of what was written. */
MM_API mm_status mm_run_train(const char* config_json, char** out_summary);
MM_API mm_status mm_run_compare(const char* config_json, char** out_summary);

/* --- storage estimates ------------------------------------------------- */

MM_API mm_status mm_storage_tensor(const uint64_t* dims, size_t n_dims, uint64_t bytes_per_value,
                                   uint64_t* out_bytes);
MM_API mm_status mm_storage_matmat(uint64_t k, uint64_t records, uint64_t bytes_per_value,
                                   uint64_t* out_bytes);
/* Binary-unit rendering such as "384.0 TB". */
MM_API mm_status mm_format_size(uint64_t bytes, char** out);

#ifdef __cplusplus
}
#endif

#endif /* MOVIEMAT_MOVIEMAT_H */
