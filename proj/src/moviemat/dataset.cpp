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

#include "moviemat/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "moviemat/errors.hpp"
#include "moviemat/rng.hpp"

namespace moviemat {

using nlohmann::json;

void ContextSchema::validate() const {
  if (!(max_rating > 0.0) || !std::isfinite(max_rating)) {
    throw UsageError("schema: max_rating must be positive");
  }
  std::set<std::size_t> columns{user_column, item_column, rating_column};
  if (columns.size() != 3) throw UsageError("schema: user/item/rating columns must differ");
  std::set<std::string> names;
  for (const auto& f : fields) {
    if (f.name.empty()) throw UsageError("schema: context field with empty name");
    if (!names.insert(f.name).second) throw UsageError("schema: duplicate field '" + f.name + "'");
    if (!columns.insert(f.column).second) {
      throw UsageError("schema: field '" + f.name + "' reuses column " + std::to_string(f.column));
    }
    if (f.min_value < 1 || f.max_value < f.min_value) {
      throw UsageError("schema: field '" + f.name + "' needs max >= min >= 1");
    }
  }
  if (delimiter && *delimiter == '\n') throw UsageError("schema: newline is not a delimiter");
}

std::optional<std::size_t> ContextSchema::field_index(std::string_view name) const {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i].name == name) return i;
  }
  return std::nullopt;
}

const ContextField* ContextSchema::find(std::string_view name) const {
  auto idx = field_index(name);
  return idx ? &fields[*idx] : nullptr;
}

ContextSchema default_comoda_schema() {
  ContextSchema s;
  s.user_column = 0;
  s.item_column = 1;
  s.rating_column = 2;
  s.max_rating = 5.0;
  s.missing_sentinel = -1;
  s.fields = {
      {"daytype", 1, 3, 8},  {"season", 1, 4, 9},   {"location", 1, 3, 10},
      {"weather", 1, 5, 11}, {"emotion", 1, 7, 13}, {"mood", 1, 3, 15},
  };
  return s;
}

ContextSchema parse_schema_json(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw UsageError(std::string("schema: invalid JSON: ") + e.what());
  }
  ContextSchema s;
  try {
    s.user_column = doc.value("user_column", s.user_column);
    s.item_column = doc.value("item_column", s.item_column);
    s.rating_column = doc.value("rating_column", s.rating_column);
    s.max_rating = doc.value("max_rating", s.max_rating);
    s.missing_sentinel = doc.value("missing_sentinel", s.missing_sentinel);
    if (doc.contains("delimiter")) {
      const auto d = doc.at("delimiter").get<std::string>();
      if (d == "\\t" || d == "tab") {
        s.delimiter = '\t';
      } else if (d.size() == 1) {
        s.delimiter = d[0];
      } else if (!d.empty() && d != "auto") {
        throw UsageError("schema: delimiter must be one character, 'tab' or 'auto'");
      }
    }
    for (const auto& f : doc.value("fields", json::array())) {
      ContextField field;
      field.name = f.at("name").get<std::string>();
      field.column = f.at("column").get<std::size_t>();
      field.min_value = f.value("min", 1);
      field.max_value = f.at("max").get<int>();
      s.fields.push_back(std::move(field));
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("schema: ") + e.what());
  }
  s.validate();
  return s;
}

ContextSchema load_schema(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open schema file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_schema_json(buf.str());
}

std::string schema_to_json(const ContextSchema& schema) {
  json doc;
  doc["user_column"] = schema.user_column;
  doc["item_column"] = schema.item_column;
  doc["rating_column"] = schema.rating_column;
  doc["max_rating"] = schema.max_rating;
  doc["missing_sentinel"] = schema.missing_sentinel;
  if (schema.delimiter) {
    doc["delimiter"] = *schema.delimiter == '\t' ? std::string("tab") : std::string(1, *schema.delimiter);
  }
  json fields = json::array();
  for (const auto& f : schema.fields) {
    fields.push_back({{"name", f.name}, {"column", f.column}, {"min", f.min_value}, {"max", f.max_value}});
  }
  doc["fields"] = fields;
  return doc.dump(2);
}

std::size_t IdIndex::intern(const std::string& id) {
  auto [it, inserted] = lookup_.try_emplace(id, ids_.size());
  if (inserted) ids_.push_back(id);
  return it->second;
}

std::optional<std::size_t> IdIndex::find(std::string_view id) const {
  auto it = lookup_.find(std::string(id));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

Dataset::Dataset(ContextSchema schema, std::shared_ptr<const IdIndex> users,
                 std::shared_ptr<const IdIndex> items, std::vector<RatingRecord> records,
                 std::size_t skipped_rows)
    : schema_(std::move(schema)),
      users_(users ? std::move(users) : std::make_shared<const IdIndex>()),
      items_(items ? std::move(items) : std::make_shared<const IdIndex>()),
      records_(std::move(records)),
      skipped_rows_(skipped_rows) {}

std::optional<int> Dataset::context_value(const RatingRecord& record, std::string_view field) const {
  auto idx = schema_.field_index(field);
  if (!idx || *idx >= record.context.size()) return std::nullopt;
  return record.context[*idx];
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\r' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r' || s.back() == '"')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_line(std::string_view line, char delim) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      break;
    }
    cells.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return cells;
}

char detect_delimiter(std::string_view line) {
  char best = 0;
  std::size_t best_count = 0;
  for (char c : {',', ';', '\t'}) {
    auto n = static_cast<std::size_t>(std::count(line.begin(), line.end(), c));
    if (n > best_count) {
      best = c;
      best_count = n;
    }
  }
  if (best == 0) throw DataError("cannot detect delimiter (expected ',', ';' or tab)");
  return best;
}

template <typename T>
std::optional<T> parse_number(std::string_view s) {
  T value{};
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::string at_line(std::size_t line_no) { return "line " + std::to_string(line_no) + ": "; }

}  // namespace

Dataset parse_dataset(std::istream& in, const ContextSchema& schema) {
  schema.validate();
  auto users = std::make_shared<IdIndex>();
  auto items = std::make_shared<IdIndex>();
  std::vector<RatingRecord> records;
  std::size_t skipped = 0;

  std::size_t needed = std::max({schema.user_column, schema.item_column, schema.rating_column}) + 1;
  for (const auto& f : schema.fields) needed = std::max(needed, f.column + 1);

  char delim = schema.delimiter.value_or('\0');
  std::size_t expected_columns = 0;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (trim(view).empty()) continue;
    if (first && delim == '\0') delim = detect_delimiter(view);
    auto cells = split_line(view, delim);

    if (first) {
      first = false;
      expected_columns = cells.size();
      if (cells.size() < needed) {
        throw DataError(at_line(line_no) + "expected at least " + std::to_string(needed) +
                        " columns, found " + std::to_string(cells.size()));
      }
      // A non-numeric rating cell on the first line marks a header.
      if (!parse_number<double>(cells[schema.rating_column])) continue;
    }

    if (cells.size() != expected_columns) {
      throw DataError(at_line(line_no) + "expected " + std::to_string(expected_columns) +
                      " columns, found " + std::to_string(cells.size()));
    }

    const auto rating_cell = cells[schema.rating_column];
    auto rating = parse_number<double>(rating_cell);
    if (rating_cell.empty() ||
        (rating && *rating == static_cast<double>(schema.missing_sentinel))) {
      ++skipped;
      continue;
    }
    if (!rating || !std::isfinite(*rating)) {
      throw DataError(at_line(line_no) + "non-numeric rating '" + std::string(rating_cell) + "'");
    }
    if (*rating < 1.0 || *rating > schema.max_rating) {
      throw DataError(at_line(line_no) + "rating " + std::string(rating_cell) +
                      " outside [1, max_rating]");
    }

    RatingRecord rec;
    rec.user_id = std::string(cells[schema.user_column]);
    rec.item_id = std::string(cells[schema.item_column]);
    if (rec.user_id.empty() || rec.item_id.empty()) {
      throw DataError(at_line(line_no) + "empty user or item id");
    }
    rec.rating = *rating;
    rec.context.reserve(schema.fields.size());
    for (const auto& f : schema.fields) {
      const auto cell = cells[f.column];
      auto v = parse_number<int>(cell);
      if (!v) {
        throw DataError(at_line(line_no) + "context '" + f.name + "' is not an integer: '" +
                        std::string(cell) + "'");
      }
      if (*v == schema.missing_sentinel) {
        rec.context.emplace_back();
        continue;
      }
      if (*v < f.min_value || *v > f.max_value) {
        throw DataError(at_line(line_no) + "context '" + f.name + "' value " + std::to_string(*v) +
                        " outside [" + std::to_string(f.min_value) + ", " +
                        std::to_string(f.max_value) + "]");
      }
      rec.context.emplace_back(*v);
    }
    rec.user = users->intern(rec.user_id);
    rec.item = items->intern(rec.item_id);
    records.push_back(std::move(rec));
  }
  if (in.bad()) throw DataError("read error");

  return Dataset(schema, std::move(users), std::move(items), std::move(records), skipped);
}

Dataset load_dataset(const std::string& path, const ContextSchema& schema) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset '" + path + "'");
  try {
    return parse_dataset(in, schema);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

DatasetStats dataset_stats(const Dataset& ds) {
  DatasetStats stats;
  std::vector<bool> seen_user(ds.num_users(), false);
  std::vector<bool> seen_item(ds.num_items(), false);
  for (const auto& r : ds.records()) {
    if (!seen_user[r.user]) {
      seen_user[r.user] = true;
      ++stats.users;
    }
    if (!seen_item[r.item]) {
      seen_item[r.item] = true;
      ++stats.items;
    }
    ++stats.rating_histogram[r.rating];
  }
  stats.records = ds.size();
  return stats;
}

std::string stats_to_json(const DatasetStats& stats) {
  json hist = json::object();
  for (const auto& [rating, count] : stats.rating_histogram) {
    json key = rating;
    hist[key.dump()] = count;
  }
  json doc{{"users", stats.users}, {"items", stats.items}, {"records", stats.records},
           {"rating_histogram", hist}};
  return doc.dump(2);
}

std::pair<Dataset, Dataset> split_train_test(const Dataset& ds, double test_fraction,
                                             std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
    throw UsageError("test_fraction must lie in (0, 1)");
  }
  if (ds.empty()) throw UsageError("cannot split an empty dataset");

  const std::size_t n = ds.size();
  const auto n_test = static_cast<std::size_t>(std::llround(static_cast<double>(n) * test_fraction));
  Rng rng(seed);
  auto order = random_permutation(n, rng);
  std::vector<bool> in_test(n, false);
  for (std::size_t i = 0; i < n_test; ++i) in_test[order[i]] = true;

  std::vector<RatingRecord> train, test;
  train.reserve(n - n_test);
  test.reserve(n_test);
  for (std::size_t i = 0; i < n; ++i) {
    (in_test[i] ? test : train).push_back(ds.records()[i]);
  }
  return {Dataset(ds.schema(), ds.shared_users(), ds.shared_items(), std::move(train)),
          Dataset(ds.schema(), ds.shared_users(), ds.shared_items(), std::move(test))};
}

}  // namespace moviemat
