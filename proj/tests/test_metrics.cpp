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

#include <doctest.h>

#include <random>

#include "support/gen.hpp"
#include "unmixkit/metrics.hpp"
#include "unmixkit/solvers.hpp"

using namespace unmixkit;
using metrics::RankedModel;
using metrics::TargetGroup;

namespace {

TargetGroup targets(std::initializer_list<std::size_t> indices) {
  return TargetGroup::from_indices(std::set<std::size_t>(indices), "target");
}

RankedModel model_of(std::initializer_list<std::pair<std::size_t, double>> entries,
                     TargetGroup group) {
  std::vector<std::pair<std::size_t, double>> ranked(entries);
  return RankedModel(std::move(ranked), std::move(group));
}

}  // namespace

TEST_CASE("ranked model orders by abundance, ties toward the lower index") {
  AbundanceSolution solution;
  solution.coefficients = {{0, 0.2}, {3, 0.9}, {5, 0.2}, {7, 0.4}};
  RankedModel model(solution, targets({3}));
  REQUIRE(model.entries.size() == 4);
  CHECK(model.entries[0].first == 3);
  CHECK(model.entries[1].first == 7);
  CHECK(model.entries[2].first == 0);  // 0.2 tie: lower index first
  CHECK(model.entries[3].first == 5);
}

TEST_CASE("detection_hit basics") {
  CHECK(detection_hit(model_of({{2, 0.5}, {4, 0.1}}, targets({4, 9}))));
  CHECK_FALSE(detection_hit(model_of({}, targets({1}))));
  CHECK_FALSE(detection_hit(model_of({{2, 0.5}}, targets({1}))));
}

TEST_CASE("detection_percentage matches the hand ratio") {
  std::vector<RankedModel> models;
  for (int i = 0; i < 19; ++i) models.push_back(model_of({{1, 1.0}}, targets({1})));
  models.push_back(model_of({{2, 1.0}}, targets({1})));
  CHECK(metrics::detection_percentage(models) == doctest::Approx(0.95));

  std::vector<RankedModel> all_hit(3, model_of({{1, 1.0}}, targets({1})));
  CHECK(metrics::detection_percentage(all_hit) == 1.0);
  std::vector<RankedModel> none(3, model_of({{2, 1.0}}, targets({1})));
  CHECK(metrics::detection_percentage(none) == 0.0);
  CHECK_THROWS_AS(metrics::detection_percentage({}), EmptyInput);
}

TEST_CASE("precision_at_k definitions") {
  auto group = targets({7});
  CHECK(metrics::precision_at_k(model_of({{7, 1.0}}, group), 1) == 1.0);
  CHECK(metrics::precision_at_k(model_of({{1, 1.0}, {2, 0.5}}, group), 3) == 0.0);
  // ranks [nontarget, target, target] at k = 3 -> 2/3
  auto two_of_three =
      model_of({{1, 0.9}, {7, 0.5}, {8, 0.2}},
               TargetGroup::from_indices({7, 8}, "target"));
  CHECK(metrics::precision_at_k(two_of_three, 3) == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(metrics::precision_at_k(model_of({}, group), 0), InvalidK);
}

TEST_CASE("precision_at_k divides by k even when the model is short") {
  auto group = targets({1});
  CHECK(metrics::precision_at_k(model_of({{1, 1.0}}, group), 4) ==
        doctest::Approx(0.25));
}

TEST_CASE("average precision and MAP fixtures") {
  auto group = targets({7});
  CHECK(metrics::average_precision(model_of({{7, 1.0}, {1, 0.5}, {2, 0.2}}, group),
                                   3) == doctest::Approx(1.0));
  // target at rank 2 of 3, k = 3 -> AP = 1/2
  CHECK(metrics::average_precision(model_of({{1, 0.9}, {7, 0.5}, {2, 0.2}}, group),
                                   3) == doctest::Approx(0.5));

  std::vector<RankedModel> pair = {
      model_of({{1, 0.9}, {7, 0.5}}, group),                    // AP 0.5
      model_of({{7, 0.9}, {1, 0.5}, {3, 0.3}, {8, 0.2}}, group)  // AP 1.0
  };
  CHECK(metrics::mean_average_precision(pair, 2) == doctest::Approx(0.75));
  CHECK_THROWS_AS(metrics::mean_average_precision({}, 2), EmptyInput);
}

TEST_CASE("promoting a target entry never lowers precision_at_k") {
  std::mt19937_64 rng(81);
  std::uniform_real_distribution<double> value(0.01, 1.0);
  auto group = targets({2, 5});
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::pair<std::size_t, double>> entries;
    for (std::size_t i = 0; i < 8; ++i) entries.emplace_back(i, value(rng));
    std::sort(entries.begin(), entries.end(),
              [](auto& l, auto& r) { return l.second > r.second; });
    RankedModel base(entries, group);

    // Swap a target entry one rank up.
    for (std::size_t pos = 1; pos < entries.size(); ++pos) {
      if (group.contains(entries[pos].first) &&
          !group.contains(entries[pos - 1].first)) {
        auto promoted = entries;
        std::swap(promoted[pos - 1], promoted[pos]);
        RankedModel better(promoted, group);
        for (std::size_t k = 1; k <= entries.size(); ++k) {
          CHECK(metrics::precision_at_k(better, k) >=
                metrics::precision_at_k(base, k));
        }
        break;
      }
    }
  }
}

TEST_CASE("MAP is invariant under duplicating the model list") {
  auto group = targets({1, 4});
  std::vector<RankedModel> models = {
      model_of({{1, 0.8}, {2, 0.4}}, group),
      model_of({{3, 0.9}, {4, 0.7}, {5, 0.1}}, group),
      model_of({{6, 0.5}}, group),
  };
  std::vector<RankedModel> doubled = models;
  doubled.insert(doubled.end(), models.begin(), models.end());
  CHECK(metrics::mean_average_precision(doubled, 3) ==
        doctest::Approx(metrics::mean_average_precision(models, 3)));
}

TEST_CASE("detection percentage of a concatenation is the weighted mean") {
  auto group = targets({1});
  std::vector<RankedModel> a = {model_of({{1, 1.0}}, group),
                                model_of({{2, 1.0}}, group)};
  std::vector<RankedModel> b = {model_of({{1, 1.0}}, group),
                                model_of({{1, 0.5}}, group),
                                model_of({{3, 1.0}}, group)};
  std::vector<RankedModel> combined = a;
  combined.insert(combined.end(), b.begin(), b.end());
  const double expected = (metrics::detection_percentage(a) * 2.0 +
                           metrics::detection_percentage(b) * 3.0) /
                          5.0;
  CHECK(metrics::detection_percentage(combined) == doctest::Approx(expected));
}

TEST_CASE("target group from category resolves library indices") {
  auto lib = gen::tiny_library(Matrix::Identity(3, 3));
  SpectralLibrary named(lib.band_wavelengths(), lib.spectra(),
                        {"a", "b", "c"}, {"sulfate", "clay", "sulfate"});
  auto group = TargetGroup::from_category(named, "sulfate");
  CHECK(group.indices() == std::set<std::size_t>{0, 2});
  CHECK_THROWS_AS(TargetGroup::from_category(named, "unknown"), InvalidArgument);
}

TEST_CASE("benchmark aggregates a singleton run") {
  std::mt19937_64 rng(82);
  auto lib = gen::random_library(10, 4, rng);
  PixelSpectrum pixel(lib.spectra().col(1), lib.band_wavelengths());
  std::vector<metrics::TechniqueSpec> techniques{
      {"nnls",
       [](const SpectralLibrary& l, const PixelSpectrum& p) {
         return solvers::nnls_solve(l, p);
       }}};
  auto group = TargetGroup::from_indices({1}, "t1");
  auto report = metrics::benchmark(techniques, lib, {pixel}, group, 3, 1);
  REQUIRE(report.rows.size() == 1);
  CHECK(report.rows[0].technique == "nnls");
  CHECK(report.rows[0].mean_rmse < 1e-10);
  CHECK(report.rows[0].detection_pct == 1.0);
  CHECK(report.rows[0].map_at_k == 1.0);
  CHECK(report.rows[0].failures == 0);
  CHECK(report.rows[0].mean_runtime_seconds >= 0.0);
}

TEST_CASE("benchmark records solver failures without aborting") {
  std::mt19937_64 rng(83);
  auto lib = gen::random_library(4, 6, rng);  // N > M: ols must fail
  auto pixel = gen::random_pixel(lib, rng);
  std::vector<metrics::TechniqueSpec> techniques{
      {"ols",
       [](const SpectralLibrary& l, const PixelSpectrum& p) {
         return solvers::ols_solve(l, p);
       }},
      {"nnls",
       [](const SpectralLibrary& l, const PixelSpectrum& p) {
         return solvers::nnls_solve(l, p);
       }}};
  auto group = TargetGroup::from_indices({0}, "t0");
  auto report = metrics::benchmark(techniques, lib, {pixel}, group, 2, 1);
  CHECK(report.rows[0].failures == 1);
  CHECK(report.rows[1].failures == 0);
}

TEST_CASE("deterministic solver gives identical rmse across benchmark runs") {
  std::mt19937_64 rng(84);
  auto lib = gen::random_library(12, 5, rng);
  auto pixel = gen::random_pixel(lib, rng);
  std::vector<metrics::TechniqueSpec> techniques{
      {"nnls",
       [](const SpectralLibrary& l, const PixelSpectrum& p) {
         return solvers::nnls_solve(l, p);
       }}};
  auto group = TargetGroup::from_indices({0}, "t0");
  auto first = metrics::benchmark(techniques, lib, {pixel}, group, 2, 3);
  auto second = metrics::benchmark(techniques, lib, {pixel}, group, 2, 3);
  CHECK(first.rows[0].mean_rmse == second.rows[0].mean_rmse);
  CHECK(first.rows[0].detection_pct == second.rows[0].detection_pct);
}

TEST_CASE("report CSV has the fixed header and one row per technique") {
  metrics::EvalReport report;
  report.k = 5;
  metrics::EvalRow row;
  row.technique = "nnls";
  row.mean_rmse = 0.25;
  row.detection_pct = 1.0;
  row.map_at_k = 0.5;
  report.rows.push_back(row);
  const std::string csv = report.to_csv();
  CHECK(csv.find("technique,mean_rmse,rmse_units,mean_runtime_s,detection_pct,"
                 "map_at_k,failures\n") == 0);
  CHECK(csv.find("nnls,0.25,reflectance,0,1,0.5,0\n") != std::string::npos);
}
