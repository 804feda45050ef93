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

#include "moviemat/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "moviemat/errors.hpp"

namespace moviemat {

using nlohmann::json;

namespace {

json factor_table(const std::vector<DenseMatrix>& ms) {
  json out = json::array();
  for (const auto& m : ms) {
    out.push_back(std::vector<double>(m.entries().begin(), m.entries().end()));
  }
  return out;
}

std::vector<DenseMatrix> read_factor_table(const json& j, std::size_t f, std::size_t k) {
  std::vector<DenseMatrix> out;
  out.reserve(j.size());
  for (const auto& row : j) out.emplace_back(f, k, row.get<std::vector<double>>());
  return out;
}

std::shared_ptr<const IdIndex> read_ids(const json& doc, const char* key, std::size_t expected) {
  if (!doc.contains(key)) return nullptr;
  auto index = std::make_shared<IdIndex>();
  for (const auto& id : doc.at(key)) index->intern(id.get<std::string>());
  if (index->size() != expected) {
    throw DataError(std::string("model: '") + key + "' has duplicates or the wrong length");
  }
  return index;
}

}  // namespace

std::string model_to_json(const FactorModel& model) {
  json doc;
  doc["format"] = "moviemat-model";
  doc["version"] = kModelFormatVersion;
  doc["variant"] = std::string(model.variant().name());
  doc["f"] = model.latent_dim();
  doc["k"] = model.k();
  doc["max_rating"] = model.max_rating();
  json fields = json::array();
  for (const auto& f : model.context_fields()) {
    fields.push_back({{"name", f.name}, {"min", f.min_value}, {"max", f.max_value}, {"column", f.column}});
  }
  doc["context_fields"] = fields;
  if (model.user_ids()) doc["user_ids"] = model.user_ids()->ids();
  if (model.item_ids()) doc["item_ids"] = model.item_ids()->ids();
  doc["user_factors"] = factor_table(model.all_user_factors());
  doc["item_factors"] = factor_table(model.all_item_factors());
  return doc.dump();
}

FactorModel model_from_json(std::string_view text) {
  try {
    const json doc = json::parse(text);
    if (doc.value("format", std::string()) != "moviemat-model") {
      throw DataError("model: not a moviemat model document");
    }
    const int version = doc.at("version").get<int>();
    if (version != kModelFormatVersion) {
      throw DataError("model: unsupported format version " + std::to_string(version));
    }
    auto variant = ModelVariant::from_name(doc.at("variant").get<std::string>());
    const auto f = doc.at("f").get<std::size_t>();
    if (doc.at("k").get<std::size_t>() != variant.k) {
      throw DataError("model: k does not match the variant");
    }
    std::vector<ContextField> fields;
    for (const auto& jf : doc.value("context_fields", json::array())) {
      fields.push_back({jf.at("name").get<std::string>(), jf.at("min").get<int>(),
                        jf.at("max").get<int>(), jf.value("column", std::size_t{0})});
    }
    auto users = read_factor_table(doc.at("user_factors"), f, variant.k);
    auto items = read_factor_table(doc.at("item_factors"), f, variant.k);
    const auto m = users.size();
    const auto n = items.size();
    FactorModel model(std::move(variant), f, std::move(users), std::move(items),
                      doc.at("max_rating").get<double>(), std::move(fields));
    model.set_ids(read_ids(doc, "user_ids", m), read_ids(doc, "item_ids", n));
    return model;
  } catch (const json::exception& e) {
    throw DataError(std::string("model: ") + e.what());
  } catch (const UsageError& e) {
    throw DataError(std::string("model: ") + e.what());
  }
}

void save_model(const FactorModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write model to '" + path + "'");
  out << model_to_json(model) << '\n';
  if (!out) throw DataError("write failed for '" + path + "'");
}

FactorModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return model_from_json(buf.str());
}

}  // namespace moviemat
