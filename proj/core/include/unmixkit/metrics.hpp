// Copyright 2026 The unmixkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "unmixkit/types.hpp"

namespace unmixkit::metrics {

/// The set of library indices that count as "the target": either an explicit
/// index set or every spectrum of one mineral category.
class TargetGroup {
 public:
  static TargetGroup from_indices(std::set<std::size_t> indices,
                                  std::string label);
  /// Every library spectrum whose category equals `category`. Throws
  /// InvalidArgument when the category does not occur in the library.
  static TargetGroup from_category(const SpectralLibrary& library,
                                   const std::string& category);

  bool contains(std::size_t library_index) const {
    return indices_.count(library_index) > 0;
  }
  const std::set<std::size_t>& indices() const noexcept { return indices_; }
  const std::string& label() const noexcept { return label_; }

 private:
  std::set<std::size_t> indices_;
  std::string label_;
};

/// One model's entries ordered by abundance descending (ties toward the
/// lower library index), paired with the target predicate they are scored
/// against.
struct RankedModel {
  std::vector<std::pair<std::size_t, double>> entries;
  TargetGroup target;

  RankedModel(const AbundanceSolution& solution, TargetGroup target_group);
  RankedModel(std::vector<std::pair<std::size_t, double>> ranked_entries,
              TargetGroup target_group);
};

/// True iff any entry of the model belongs to the target group.
bool detection_hit(const RankedModel& model);

/// Fraction of models that contain at least one target entry.
double detection_percentage(const std::vector<RankedModel>& models);

/// (target entries among the first min(k, size) entries) / k.
double precision_at_k(const RankedModel& model, std::size_t k);

/// Average precision truncated at k: the mean of precision_at_i over the
/// target positions i <= k, or 0 when no target appears in the top k.
double average_precision(const RankedModel& model, std::size_t k);

/// Mean of per-model average precision.
double mean_average_precision(const std::vector<RankedModel>& models,
                              std::size_t k);

/// One technique to evaluate: a name plus a solver closure.
struct TechniqueSpec {
  std::string name;
  std::function<AbundanceSolution(const SpectralLibrary&,
                                  const PixelSpectrum&)>
      solve;
};

struct EvalRow {
  std::string technique;
  double mean_rmse = 0.0;
  ErrorUnits rmse_units = ErrorUnits::Reflectance;
  double mean_runtime_seconds = 0.0;
  double detection_pct = 0.0;
  double map_at_k = 0.0;
  std::size_t failures = 0;
};

struct EvalReport {
  std::size_t k = 0;
  std::vector<EvalRow> rows;

  /// CSV with the fixed column header
  /// technique,mean_rmse,rmse_units,mean_runtime_s,detection_pct,map_at_k,failures.
  std::string to_csv() const;
  /// Human-readable aligned table.
  std::string to_table() const;
};

/// Run every technique over every pixel, timing each solve with a monotonic
/// clock (median of `repeats`), and aggregate means, detection percentage,
/// and MAP at k. Per-pixel solver errors are counted in the row's failure
/// column instead of aborting the run.
EvalReport benchmark(const std::vector<TechniqueSpec>& techniques,
                     const SpectralLibrary& library,
                     const std::vector<PixelSpectrum>& pixels,
                     const TargetGroup& target, std::size_t k,
                     int repeats = 3);

}  // namespace unmixkit::metrics
