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

#include "moviemat/model.hpp"

#include <algorithm>
#include <cmath>

#include "moviemat/errors.hpp"
#include "moviemat/rng.hpp"

namespace moviemat {

ModelVariant ModelVariant::classic_mf() { return {VariantKind::ClassicMF, 1, {}}; }

ModelVariant ModelVariant::movie_mat() {
  return {VariantKind::MovieMat, 2, {{0, 1, "location"}, {1, 0, "mood"}}};
}

ModelVariant ModelVariant::movie_mat_plus() {
  return {VariantKind::MovieMatPlus,
          3,
          {{0, 1, "daytype"},
           {0, 2, "season"},
           {1, 0, "weather"},
           {1, 2, "location"},
           {2, 0, "emotion"},
           {2, 1, "mood"}}};
}

ModelVariant ModelVariant::from_name(std::string_view name) {
  if (name == "classic" || name == "classic-mf" || name == "mf") return classic_mf();
  if (name == "moviemat") return movie_mat();
  if (name == "moviemat-plus" || name == "moviemat+") return movie_mat_plus();
  throw UsageError("unknown variant '" + std::string(name) +
                   "' (expected classic, moviemat or moviemat-plus)");
}

std::string_view ModelVariant::name() const noexcept {
  switch (kind) {
    case VariantKind::ClassicMF: return "classic";
    case VariantKind::MovieMat: return "moviemat";
    case VariantKind::MovieMatPlus: return "moviemat-plus";
  }
  return "unknown";
}

const ContextCell* ModelVariant::cell_for(std::string_view field) const {
  for (const auto& c : layout) {
    if (c.field == field) return &c;
  }
  return nullptr;
}

TargetBuilder::TargetBuilder(const ModelVariant& variant, const ContextSchema& schema)
    : k_(variant.k), max_rating_(schema.max_rating) {
  if (k_ == 0) throw UsageError("variant target size must be positive");
  if (variant.layout.size() != k_ * k_ - k_) {
    throw UsageError("variant layout must cover every off-diagonal cell");
  }
  for (const auto& cell : variant.layout) {
    if (cell.row >= k_ || cell.col >= k_ || cell.row == cell.col) {
      throw UsageError("variant layout cell for '" + cell.field + "' is not off-diagonal");
    }
    auto idx = schema.field_index(cell.field);
    if (!idx) {
      throw UsageError("variant '" + std::string(variant.name()) + "' needs context field '" +
                       cell.field + "' missing from the schema");
    }
    cells_.push_back({cell.row, cell.col, *idx, static_cast<double>(schema.fields[*idx].max_value)});
  }
}

TargetMatrix TargetBuilder::build(const RatingRecord& record) const {
  TargetMatrix t{DenseMatrix(k_, k_), CellMask(k_, k_, true)};
  const double r = record.rating / max_rating_;
  for (std::size_t d = 0; d < k_; ++d) t.values(d, d) = r;
  for (const auto& cell : cells_) {
    const auto& v = cell.field_index < record.context.size() ? record.context[cell.field_index]
                                                            : std::optional<int>{};
    if (v) {
      t.values(cell.row, cell.col) = static_cast<double>(*v) / cell.max_value;
    } else {
      t.mask.set(cell.row, cell.col, false);
    }
  }
  return t;
}

TargetMatrix build_target(const RatingRecord& record, const ModelVariant& variant,
                          const ContextSchema& schema) {
  return TargetBuilder(variant, schema).build(record);
}

std::vector<ContextField> layout_fields(const ModelVariant& variant, const ContextSchema& schema) {
  std::vector<ContextField> out;
  for (const auto& cell : variant.layout) {
    const auto* f = schema.find(cell.field);
    if (!f) throw UsageError("context field '" + cell.field + "' missing from the schema");
    out.push_back(*f);
  }
  return out;
}

FactorModel::FactorModel(ModelVariant variant, std::size_t latent_dim,
                         std::vector<DenseMatrix> users, std::vector<DenseMatrix> items,
                         double max_rating, std::vector<ContextField> context_fields)
    : variant_(std::move(variant)),
      latent_dim_(latent_dim),
      users_(std::move(users)),
      items_(std::move(items)),
      max_rating_(max_rating),
      context_fields_(std::move(context_fields)) {
  if (latent_dim_ == 0) throw UsageError("latent dimension must be positive");
  if (!(max_rating_ > 0.0)) throw UsageError("max_rating must be positive");
  auto check = [&](const std::vector<DenseMatrix>& ms, const char* what) {
    for (const auto& m : ms) {
      if (m.rows() != latent_dim_ || m.cols() != variant_.k) {
        throw UsageError(std::string(what) + " factor matrix has the wrong shape");
      }
      if (!m.all_finite()) throw UsageError(std::string(what) + " factors must be finite");
    }
  };
  check(users_, "user");
  check(items_, "item");
}

namespace {
[[noreturn]] void out_of_range(const char* what, std::size_t idx, std::size_t n) {
  throw UsageError(std::string(what) + " index " + std::to_string(idx) + " out of range [0, " +
                   std::to_string(n) + ")");
}
}  // namespace

const DenseMatrix& FactorModel::user_factors(std::size_t user) const {
  if (user >= users_.size()) out_of_range("user", user, users_.size());
  return users_[user];
}

const DenseMatrix& FactorModel::item_factors(std::size_t item) const {
  if (item >= items_.size()) out_of_range("item", item, items_.size());
  return items_[item];
}

DenseMatrix& FactorModel::user_factors(std::size_t user) {
  if (user >= users_.size()) out_of_range("user", user, users_.size());
  return users_[user];
}

DenseMatrix& FactorModel::item_factors(std::size_t item) {
  if (item >= items_.size()) out_of_range("item", item, items_.size());
  return items_[item];
}

void FactorModel::set_ids(std::shared_ptr<const IdIndex> users, std::shared_ptr<const IdIndex> items) {
  if ((users && users->size() != users_.size()) || (items && items->size() != items_.size())) {
    throw UsageError("id table size does not match the factor tables");
  }
  user_ids_ = std::move(users);
  item_ids_ = std::move(items);
}

bool operator==(const FactorModel& a, const FactorModel& b) {
  auto same_ids = [](const IdIndex* x, const IdIndex* y) {
    if (!x || !y) return x == y;
    return x->ids() == y->ids();
  };
  return a.variant_ == b.variant_ && a.latent_dim_ == b.latent_dim_ && a.users_ == b.users_ &&
         a.items_ == b.items_ && a.max_rating_ == b.max_rating_ &&
         a.context_fields_ == b.context_fields_ && same_ids(a.user_ids(), b.user_ids()) &&
         same_ids(a.item_ids(), b.item_ids());
}

FactorModel init_model(const ModelVariant& variant, std::size_t latent_dim, std::size_t num_users,
                       std::size_t num_items, std::uint64_t seed, double max_rating,
                       std::vector<ContextField> context_fields) {
  if (latent_dim == 0 || num_users == 0 || num_items == 0) {
    throw UsageError("init_model: f, m and n must all be at least 1");
  }
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(latent_dim));
  auto draw = [&](std::size_t count) {
    std::vector<DenseMatrix> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      DenseMatrix m(latent_dim, variant.k);
      for (double& v : m.entries()) v = scale * rng.uniform();
      out.push_back(std::move(m));
    }
    return out;
  };
  auto users = draw(num_users);
  auto items = draw(num_items);
  return FactorModel(variant, latent_dim, std::move(users), std::move(items), max_rating,
                     std::move(context_fields));
}

DenseMatrix predict_target(const FactorModel& model, std::size_t user, std::size_t item) {
  return matmul_transpose_left(model.user_factors(user), model.item_factors(item));
}

double predict_score(const FactorModel& model, std::size_t user, std::size_t item) {
  const auto& u = model.user_factors(user);
  const auto& v = model.item_factors(item);
  const std::size_t k = model.k();
  double diag = 0.0;
  for (std::size_t d = 0; d < k; ++d) {
    double acc = 0.0;
    for (std::size_t t = 0; t < u.rows(); ++t) acc += u(t, d) * v(t, d);
    diag += acc;
  }
  return model.max_rating() * (diag / static_cast<double>(k));
}

double predict_rating(const FactorModel& model, std::size_t user, std::size_t item) {
  return std::clamp(predict_score(model, user, item), 1.0, model.max_rating());
}

double predict_context(const FactorModel& model, std::size_t user, std::size_t item,
                       std::string_view field) {
  const auto* cell = model.variant().cell_for(field);
  if (!cell) {
    throw UsageError("field '" + std::string(field) + "' is not part of the " +
                     std::string(model.variant().name()) + " layout");
  }
  auto it = std::find_if(model.context_fields().begin(), model.context_fields().end(),
                         [&](const ContextField& f) { return f.name == field; });
  if (it == model.context_fields().end()) {
    throw UsageError("model carries no range for context field '" + std::string(field) + "'");
  }
  const auto& u = model.user_factors(user);
  const auto& v = model.item_factors(item);
  double acc = 0.0;
  for (std::size_t t = 0; t < u.rows(); ++t) acc += u(t, cell->row) * v(t, cell->col);
  return std::clamp(acc * it->max_value, static_cast<double>(it->min_value),
                    static_cast<double>(it->max_value));
}

}  // namespace moviemat
