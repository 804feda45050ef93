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

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace moviemat {

// A scalarized categorical context column, e.g. mood in 1..3.
struct ContextField {
  std::string name;
  int min_value = 1;
  int max_value = 1;
  std::size_t column = 0;

  friend bool operator==(const ContextField&, const ContextField&) = default;
};

struct ContextSchema {
  std::vector<ContextField> fields;
  int missing_sentinel = -1;
  std::size_t user_column = 0;
  std::size_t item_column = 1;
  std::size_t rating_column = 2;
  double max_rating = 5.0;
  // Column delimiter; auto-detected from the first line when empty.
  std::optional<char> delimiter;

  // Throws UsageError on duplicate names, overlapping columns or bad ranges.
  void validate() const;

  // Position of the named field in `fields`, if any.
  std::optional<std::size_t> field_index(std::string_view name) const;
  const ContextField* find(std::string_view name) const;

  friend bool operator==(const ContextSchema&, const ContextSchema&) = default;
};

// Location, mood, daytype, season, weather and end emotion columns of the
// LDOS-CoMoDa distribution file (missing values encoded as -1).
ContextSchema default_comoda_schema();

ContextSchema parse_schema_json(std::string_view json_text);
ContextSchema load_schema(const std::string& path);
std::string schema_to_json(const ContextSchema& schema);

// Dense index over opaque string identifiers, assigned in first-seen order.
class IdIndex {
 public:
  std::size_t intern(const std::string& id);
  std::optional<std::size_t> find(std::string_view id) const;
  const std::string& id(std::size_t index) const { return ids_.at(index); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  std::size_t size() const noexcept { return ids_.size(); }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::size_t> lookup_;
};

struct RatingRecord {
  std::string user_id;
  std::string item_id;
  std::size_t user = 0;  // dense index into the dataset's user IdIndex
  std::size_t item = 0;
  double rating = 0.0;
  // Aligned with ContextSchema::fields; empty optional means "unknown".
  std::vector<std::optional<int>> context;

  friend bool operator==(const RatingRecord&, const RatingRecord&) = default;
};

// Immutable collection of records plus the id indices they refer to.
// Train/test splits share the index objects of the dataset they came from.
class Dataset {
 public:
  Dataset(ContextSchema schema, std::shared_ptr<const IdIndex> users,
          std::shared_ptr<const IdIndex> items, std::vector<RatingRecord> records,
          std::size_t skipped_rows = 0);

  const ContextSchema& schema() const noexcept { return schema_; }
  const std::vector<RatingRecord>& records() const noexcept { return records_; }
  const IdIndex& users() const noexcept { return *users_; }
  const IdIndex& items() const noexcept { return *items_; }
  std::shared_ptr<const IdIndex> shared_users() const noexcept { return users_; }
  std::shared_ptr<const IdIndex> shared_items() const noexcept { return items_; }

  std::size_t num_users() const noexcept { return users_->size(); }
  std::size_t num_items() const noexcept { return items_->size(); }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  // Rows dropped at load time because their rating was missing.
  std::size_t skipped_rows() const noexcept { return skipped_rows_; }

  // Context value of `record` for the named field, absent if unknown.
  std::optional<int> context_value(const RatingRecord& record, std::string_view field) const;

 private:
  ContextSchema schema_;
  std::shared_ptr<const IdIndex> users_;
  std::shared_ptr<const IdIndex> items_;
  std::vector<RatingRecord> records_;
  std::size_t skipped_rows_ = 0;
};

Dataset parse_dataset(std::istream& in, const ContextSchema& schema);
Dataset load_dataset(const std::string& path, const ContextSchema& schema);

struct DatasetStats {
  std::size_t users = 0;    // distinct users among the records
  std::size_t items = 0;    // distinct items among the records
  std::size_t records = 0;
  std::map<double, std::size_t> rating_histogram;
};

DatasetStats dataset_stats(const Dataset& ds);
std::string stats_to_json(const DatasetStats& stats);

// Record-level holdout: |test| = round(N * test_fraction).
std::pair<Dataset, Dataset> split_train_test(const Dataset& ds, double test_fraction,
                                             std::uint64_t seed);

}  // namespace moviemat
