// Copyright 2026 The MovieMat Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "moviemat/moviemat.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <memory>
#include <new>
#include <string>

#include "moviemat/dataset.hpp"
#include "moviemat/errors.hpp"
#include "moviemat/experiment.hpp"
#include "moviemat/model.hpp"
#include "moviemat/model_io.hpp"
#include "moviemat/storage.hpp"
#include "moviemat/synthetic.hpp"

struct mm_schema {
  moviemat::ContextSchema schema;
};

struct mm_dataset {
  moviemat::Dataset dataset;
};

struct mm_model {
  moviemat::FactorModel model;
  std::string variant_name;
};

namespace {

thread_local std::string g_last_error;

mm_status fail(mm_status status, const std::string& msg) {
  g_last_error = msg;
  return status;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
mm_status guarded(Fn&& fn) {
  try {
    fn();
    return MM_OK;
  } catch (const moviemat::Error& e) {
    return fail(static_cast<mm_status>(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(MM_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(MM_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(MM_ERR_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (!p) throw moviemat::UsageError(std::string(what) + " must not be NULL");
}

std::size_t lookup(const moviemat::IdIndex* index, const char* id, const char* what) {
  if (!index) throw moviemat::DataError("model artifact carries no id table");
  auto idx = index->find(id);
  if (!idx) throw moviemat::UsageError(std::string("unknown ") + what + " id '" + id + "'");
  return *idx;
}

}  // namespace

extern "C" {

const char* mm_version(void) { return "1.0.0"; }

const char* mm_last_error(void) { return g_last_error.c_str(); }

void mm_string_free(char* s) { std::free(s); }

mm_status mm_schema_default(mm_schema** out) {
  return guarded([&] {
    require(out, "out");
    *out = new mm_schema{moviemat::default_comoda_schema()};
  });
}

mm_status mm_schema_load(const char* path, mm_schema** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new mm_schema{moviemat::load_schema(path)};
  });
}

mm_status mm_schema_to_json(const mm_schema* schema, char** out_json) {
  return guarded([&] {
    require(schema, "schema");
    require(out_json, "out_json");
    *out_json = dup_string(moviemat::schema_to_json(schema->schema));
  });
}

void mm_schema_free(mm_schema* schema) { delete schema; }

mm_status mm_dataset_load(const char* path, const mm_schema* schema, mm_dataset** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    const auto s = schema ? schema->schema : moviemat::default_comoda_schema();
    *out = new mm_dataset{moviemat::load_dataset(path, s)};
  });
}

mm_status mm_dataset_counts(const mm_dataset* ds, size_t* users, size_t* items, size_t* records) {
  return guarded([&] {
    require(ds, "dataset");
    const auto stats = moviemat::dataset_stats(ds->dataset);
    if (users) *users = stats.users;
    if (items) *items = stats.items;
    if (records) *records = stats.records;
  });
}

mm_status mm_dataset_stats_json(const mm_dataset* ds, char** out_json) {
  return guarded([&] {
    require(ds, "dataset");
    require(out_json, "out_json");
    *out_json = dup_string(moviemat::stats_to_json(moviemat::dataset_stats(ds->dataset)));
  });
}

void mm_dataset_free(mm_dataset* ds) { delete ds; }

mm_status mm_synthesize(size_t users, size_t items, size_t records, uint64_t seed,
                        const char* out_path) {
  return guarded([&] {
    require(out_path, "out_path");
    moviemat::SyntheticOptions opts;
    opts.users = users;
    opts.items = items;
    opts.records = records;
    opts.seed = seed;
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw moviemat::DataError(std::string("cannot write '") + out_path + "'");
    moviemat::write_synthetic_csv(opts, out);
    if (!out) throw moviemat::DataError(std::string("write failed for '") + out_path + "'");
  });
}

mm_status mm_model_load(const char* path, mm_model** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    auto model = moviemat::load_model(path);
    std::string name(model.variant().name());
    *out = new mm_model{std::move(model), std::move(name)};
  });
}

mm_status mm_model_save(const mm_model* model, const char* path) {
  return guarded([&] {
    require(model, "model");
    require(path, "path");
    moviemat::save_model(model->model, path);
  });
}

const char* mm_model_variant(const mm_model* model) {
  return model ? model->variant_name.c_str() : nullptr;
}

size_t mm_model_context_count(const mm_model* model) {
  return model ? model->model.variant().layout.size() : 0;
}

const char* mm_model_context_name(const mm_model* model, size_t idx) {
  if (!model || idx >= model->model.variant().layout.size()) return nullptr;
  return model->model.variant().layout[idx].field.c_str();
}

mm_status mm_model_predict_rating(const mm_model* model, const char* user_id,
                                  const char* item_id, double* out) {
  return guarded([&] {
    require(model, "model");
    require(user_id, "user_id");
    require(item_id, "item_id");
    require(out, "out");
    const auto u = lookup(model->model.user_ids(), user_id, "user");
    const auto i = lookup(model->model.item_ids(), item_id, "item");
    *out = moviemat::predict_rating(model->model, u, i);
  });
}

mm_status mm_model_predict_context(const mm_model* model, const char* user_id,
                                   const char* item_id, const char* field, double* out) {
  return guarded([&] {
    require(model, "model");
    require(user_id, "user_id");
    require(item_id, "item_id");
    require(field, "field");
    require(out, "out");
    const auto u = lookup(model->model.user_ids(), user_id, "user");
    const auto i = lookup(model->model.item_ids(), item_id, "item");
    *out = moviemat::predict_context(model->model, u, i, field);
  });
}

void mm_model_free(mm_model* model) { delete model; }

mm_status mm_run_train(const char* config_json, char** out_summary) {
  return guarded([&] {
    require(config_json, "config_json");
    auto summary = moviemat::run_train(moviemat::config_from_json(config_json));
    if (out_summary) *out_summary = dup_string(summary);
  });
}

mm_status mm_run_compare(const char* config_json, char** out_summary) {
  return guarded([&] {
    require(config_json, "config_json");
    auto summary = moviemat::run_compare(moviemat::config_from_json(config_json));
    if (out_summary) *out_summary = dup_string(summary);
  });
}

mm_status mm_storage_tensor(const uint64_t* dims, size_t n_dims, uint64_t bytes_per_value,
                            uint64_t* out_bytes) {
  return guarded([&] {
    require(dims, "dims");
    require(out_bytes, "out_bytes");
    *out_bytes = moviemat::tensor_storage_bytes({dims, n_dims}, bytes_per_value);
  });
}

mm_status mm_storage_matmat(uint64_t k, uint64_t records, uint64_t bytes_per_value,
                            uint64_t* out_bytes) {
  return guarded([&] {
    require(out_bytes, "out_bytes");
    *out_bytes = moviemat::matmat_storage_bytes(k, records, bytes_per_value);
  });
}

mm_status mm_format_size(uint64_t bytes, char** out) {
  return guarded([&] {
    require(out, "out");
    *out = dup_string(moviemat::format_binary_size(bytes));
  });
}

}  // extern "C"
