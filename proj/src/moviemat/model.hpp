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
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "moviemat/dataset.hpp"
#include "moviemat/linalg.hpp"

namespace moviemat {

enum class VariantKind { ClassicMF, MovieMat, MovieMatPlus };

// Off-diagonal target cell carrying a normalized context field.
struct ContextCell {
  std::size_t row = 0;
  std::size_t col = 0;
  std::string field;

  friend bool operator==(const ContextCell&, const ContextCell&) = default;
};

// Shape of the k x k target each rating is turned into. The diagonal always
// holds the normalized rating; `layout` assigns every off-diagonal cell to a
// context field.
struct ModelVariant {
  VariantKind kind = VariantKind::ClassicMF;
  std::size_t k = 1;
  std::vector<ContextCell> layout;

  static ModelVariant classic_mf();
  // 2x2: location above the diagonal, mood below.
  static ModelVariant movie_mat();
  // 3x3: daytype, season / weather, location / emotion, mood.
  static ModelVariant movie_mat_plus();

  // Accepts "classic", "moviemat" and "moviemat-plus" (plus a few aliases).
  static ModelVariant from_name(std::string_view name);
  std::string_view name() const noexcept;

  const ContextCell* cell_for(std::string_view field) const;

  friend bool operator==(const ModelVariant&, const ModelVariant&) = default;
};

struct TargetMatrix {
  DenseMatrix values;
  CellMask mask;
};

// Resolves a variant's layout against a schema once, then converts records.
class TargetBuilder {
 public:
  TargetBuilder(const ModelVariant& variant, const ContextSchema& schema);

  TargetMatrix build(const RatingRecord& record) const;

 private:
  struct ResolvedCell {
    std::size_t row;
    std::size_t col;
    std::size_t field_index;
    double max_value;
  };
  std::size_t k_;
  double max_rating_;
  std::vector<ResolvedCell> cells_;
};

TargetMatrix build_target(const RatingRecord& record, const ModelVariant& variant,
                          const ContextSchema& schema);

// Schema entries of the fields a variant places in its target, in layout order.
std::vector<ContextField> layout_fields(const ModelVariant& variant, const ContextSchema& schema);

// Per-user and per-item f x k factor matrices. A rating target is fitted by
// users[i]^T * items[j].
class FactorModel {
 public:
  FactorModel(ModelVariant variant, std::size_t latent_dim, std::vector<DenseMatrix> users,
              std::vector<DenseMatrix> items, double max_rating,
              std::vector<ContextField> context_fields = {});

  const ModelVariant& variant() const noexcept { return variant_; }
  std::size_t latent_dim() const noexcept { return latent_dim_; }
  std::size_t k() const noexcept { return variant_.k; }
  double max_rating() const noexcept { return max_rating_; }
  std::size_t num_users() const noexcept { return users_.size(); }
  std::size_t num_items() const noexcept { return items_.size(); }
  std::size_t parameter_count() const noexcept {
    return (users_.size() + items_.size()) * latent_dim_ * variant_.k;
  }

  const DenseMatrix& user_factors(std::size_t user) const;
  const DenseMatrix& item_factors(std::size_t item) const;
  DenseMatrix& user_factors(std::size_t user);
  DenseMatrix& item_factors(std::size_t item);

  const std::vector<DenseMatrix>& all_user_factors() const noexcept { return users_; }
  const std::vector<DenseMatrix>& all_item_factors() const noexcept { return items_; }

  // Ranges of the context fields in the variant layout (needed to invert the
  // normalization); may be empty when context prediction is not required.
  const std::vector<ContextField>& context_fields() const noexcept { return context_fields_; }

  // Optional id tables so that artifacts can be queried by external id.
  void set_ids(std::shared_ptr<const IdIndex> users, std::shared_ptr<const IdIndex> items);
  const IdIndex* user_ids() const noexcept { return user_ids_.get(); }
  const IdIndex* item_ids() const noexcept { return item_ids_.get(); }

  friend bool operator==(const FactorModel& a, const FactorModel& b);

 private:
  ModelVariant variant_;
  std::size_t latent_dim_;
  std::vector<DenseMatrix> users_;
  std::vector<DenseMatrix> items_;
  double max_rating_;
  std::vector<ContextField> context_fields_;
  std::shared_ptr<const IdIndex> user_ids_;
  std::shared_ptr<const IdIndex> item_ids_;
};

// Every parameter independently uniform on [0, 1/sqrt(f)].
FactorModel init_model(const ModelVariant& variant, std::size_t latent_dim, std::size_t num_users,
                       std::size_t num_items, std::uint64_t seed, double max_rating,
                       std::vector<ContextField> context_fields = {});

DenseMatrix predict_target(const FactorModel& model, std::size_t user, std::size_t item);

// max_rating * mean(diagonal of the predicted target), without clamping.
// Ranking uses this score; it is a strictly increasing map of the diagonal mean.
double predict_score(const FactorModel& model, std::size_t user, std::size_t item);

// predict_score clamped to [1, max_rating].
double predict_rating(const FactorModel& model, std::size_t user, std::size_t item);

// The field's off-diagonal cell times its max, clamped to the field range.
double predict_context(const FactorModel& model, std::size_t user, std::size_t item,
                       std::string_view field);

}  // namespace moviemat
