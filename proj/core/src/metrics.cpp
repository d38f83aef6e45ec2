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

#include "unmixkit/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <sstream>

#include "unmixkit/detail/text_io.hpp"

namespace unmixkit::metrics {

TargetGroup TargetGroup::from_indices(std::set<std::size_t> indices,
                                      std::string label) {
  TargetGroup group;
  group.indices_ = std::move(indices);
  group.label_ = std::move(label);
  return group;
}

TargetGroup TargetGroup::from_category(const SpectralLibrary& library,
                                       const std::string& category) {
  TargetGroup group;
  group.label_ = category;
  for (std::size_t i = 0; i < library.categories().size(); ++i) {
    if (library.categories()[i] == category) group.indices_.insert(i);
  }
  if (group.indices_.empty()) {
    throw InvalidArgument("category \"" + category +
                          "\" does not occur in the library");
  }
  return group;
}

RankedModel::RankedModel(const AbundanceSolution& solution,
                         TargetGroup target_group)
    : target(std::move(target_group)) {
  entries.reserve(solution.coefficients.size());
  for (const auto& [index, value] : solution.coefficients) {
    entries.emplace_back(index, value);
  }
  // Abundance descending; the map iteration order already breaks ties
  // toward the lower index.
  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& l, const auto& r) {
                     return l.second > r.second;
                   });
}

RankedModel::RankedModel(std::vector<std::pair<std::size_t, double>> ranked,
                         TargetGroup target_group)
    : entries(std::move(ranked)), target(std::move(target_group)) {}

bool detection_hit(const RankedModel& model) {
  return std::any_of(model.entries.begin(), model.entries.end(),
                     [&model](const auto& entry) {
                       return model.target.contains(entry.first);
                     });
}

double detection_percentage(const std::vector<RankedModel>& models) {
  if (models.empty()) throw EmptyInput("detection percentage of an empty list");
  std::size_t hits = 0;
  for (const auto& model : models) {
    if (detection_hit(model)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(models.size());
}

double precision_at_k(const RankedModel& model, std::size_t k) {
  if (k < 1) throw InvalidK("precision at k needs k >= 1");
  const std::size_t depth = std::min(k, model.entries.size());
  std::size_t relevant = 0;
  for (std::size_t i = 0; i < depth; ++i) {
    if (model.target.contains(model.entries[i].first)) ++relevant;
  }
  return static_cast<double>(relevant) / static_cast<double>(k);
}

double average_precision(const RankedModel& model, std::size_t k) {
  if (k < 1) throw InvalidK("average precision needs k >= 1");
  const std::size_t depth = std::min(k, model.entries.size());
  double sum = 0.0;
  std::size_t relevant = 0;
  for (std::size_t i = 0; i < depth; ++i) {
    if (model.target.contains(model.entries[i].first)) {
      ++relevant;
      sum += static_cast<double>(relevant) / static_cast<double>(i + 1);
    }
  }
  return relevant == 0 ? 0.0 : sum / static_cast<double>(relevant);
}

double mean_average_precision(const std::vector<RankedModel>& models,
                              std::size_t k) {
  if (models.empty()) throw EmptyInput("MAP of an empty model list");
  double sum = 0.0;
  for (const auto& model : models) sum += average_precision(model, k);
  return sum / static_cast<double>(models.size());
}

std::string EvalReport::to_csv() const {
  std::string out =
      "technique,mean_rmse,rmse_units,mean_runtime_s,detection_pct,map_at_k,"
      "failures\n";
  for (const auto& row : rows) {
    out += row.technique;
    out += ',';
    out += detail::format_double(row.mean_rmse);
    out += ',';
    out += to_string(row.rmse_units);
    out += ',';
    out += detail::format_double(row.mean_runtime_seconds);
    out += ',';
    out += detail::format_double(row.detection_pct);
    out += ',';
    out += detail::format_double(row.map_at_k);
    out += ',';
    out += std::to_string(row.failures);
    out += '\n';
  }
  return out;
}

std::string EvalReport::to_table() const {
  std::ostringstream out;
  out << std::left << std::setw(12) << "technique" << std::right
      << std::setw(12) << "mean_rmse" << std::setw(13) << "units"
      << std::setw(16) << "mean_runtime_s" << std::setw(15) << "detection_pct"
      << std::setw(10) << "map@" << k << std::setw(10) << "failures" << '\n';
  out << std::setprecision(6);
  for (const auto& row : rows) {
    out << std::left << std::setw(12) << row.technique << std::right
        << std::setw(12) << row.mean_rmse << std::setw(13)
        << to_string(row.rmse_units) << std::setw(16)
        << row.mean_runtime_seconds << std::setw(15) << row.detection_pct
        << std::setw(11) << row.map_at_k << std::setw(10) << row.failures
        << '\n';
  }
  return out.str();
}

EvalReport benchmark(const std::vector<TechniqueSpec>& techniques,
                     const SpectralLibrary& library,
                     const std::vector<PixelSpectrum>& pixels,
                     const TargetGroup& target, std::size_t k, int repeats) {
  if (techniques.empty() || pixels.empty()) {
    throw EmptyInput("benchmark needs at least one technique and one pixel");
  }
  if (repeats < 1) throw InvalidArgument("benchmark repeats must be >= 1");

  using Clock = std::chrono::steady_clock;
  EvalReport report;
  report.k = k;
  for (const auto& technique : techniques) {
    EvalRow row;
    row.technique = technique.name;
    std::vector<RankedModel> models;
    double rmse_sum = 0.0;
    double runtime_sum = 0.0;
    std::size_t successes = 0;
    for (const auto& pixel : pixels) {
      try {
        AbundanceSolution solution;
        std::vector<double> timings(static_cast<std::size_t>(repeats));
        for (int r = 0; r < repeats; ++r) {
          const auto tick = Clock::now();
          solution = technique.solve(library, pixel);
          timings[static_cast<std::size_t>(r)] =
              std::chrono::duration<double>(Clock::now() - tick).count();
        }
        std::sort(timings.begin(), timings.end());
        rmse_sum += solution.rmse;
        runtime_sum += timings[timings.size() / 2];
        row.rmse_units = solution.units;
        models.emplace_back(solution, target);
        ++successes;
      } catch (const Error&) {
        ++row.failures;
      }
    }
    if (successes > 0) {
      row.mean_rmse = rmse_sum / static_cast<double>(successes);
      row.mean_runtime_seconds = runtime_sum / static_cast<double>(successes);
      row.detection_pct = detection_percentage(models);
      row.map_at_k = mean_average_precision(models, k);
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace unmixkit::metrics
