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

#include <benchmark/benchmark.h>

#include "unmixkit/data_io.hpp"
#include "unmixkit/minlp.hpp"
#include "unmixkit/solvers.hpp"
#include "unmixkit/stepwise.hpp"
#include "unmixkit/whiten.hpp"

namespace {

using namespace unmixkit;

struct Problem {
  SpectralLibrary library;
  std::vector<PixelSpectrum> pixels;
};

Problem make_problem(std::size_t n, std::size_t m) {
  auto library = io::synthetic_library(n, m, 17);
  auto scene = io::generate_scene(library, 8, 3, {0.2, 1.0}, 30.0, 29);
  return {std::move(library), std::move(scene.pixels)};
}

void BM_Nnls(benchmark::State& state) {
  auto problem = make_problem(static_cast<std::size_t>(state.range(0)),
                              static_cast<std::size_t>(state.range(1)));
  std::size_t i = 0;
  for (auto _ : state) {
    auto solution = solvers::nnls_solve(problem.library,
                                        problem.pixels[i++ % problem.pixels.size()]);
    benchmark::DoNotOptimize(solution);
  }
}
BENCHMARK(BM_Nnls)->Args({40, 100})->Args({120, 224});

void BM_LassoFixedPenalty(benchmark::State& state) {
  auto problem = make_problem(static_cast<std::size_t>(state.range(0)),
                              static_cast<std::size_t>(state.range(1)));
  std::size_t i = 0;
  for (auto _ : state) {
    auto solution = solvers::lasso_solve(
        problem.library, problem.pixels[i++ % problem.pixels.size()], 0.01);
    benchmark::DoNotOptimize(solution);
  }
}
BENCHMARK(BM_LassoFixedPenalty)->Args({40, 100})->Args({120, 224});

void BM_LassoCrossValidated(benchmark::State& state) {
  auto problem = make_problem(static_cast<std::size_t>(state.range(0)),
                              static_cast<std::size_t>(state.range(1)));
  std::size_t i = 0;
  for (auto _ : state) {
    auto result = solvers::lasso_cv(problem.library,
                                    problem.pixels[i++ % problem.pixels.size()]);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_LassoCrossValidated)->Args({40, 100});

void BM_DfsSelect(benchmark::State& state) {
  auto problem = make_problem(static_cast<std::size_t>(state.range(0)),
                              static_cast<std::size_t>(state.range(1)));
  std::size_t i = 0;
  for (auto _ : state) {
    auto solution = stepwise::dfs_select(
        problem.library, problem.pixels[i++ % problem.pixels.size()]);
    benchmark::DoNotOptimize(solution);
  }
}
BENCHMARK(BM_DfsSelect)->Args({40, 100})->Args({120, 224});

void BM_MinlpUnmix(benchmark::State& state) {
  auto problem = make_problem(static_cast<std::size_t>(state.range(0)),
                              static_cast<std::size_t>(state.range(1)));
  minlp::MinlpConfig config;
  config.model_size = 3;
  config.time_limit_seconds = 10.0;
  std::size_t i = 0;
  for (auto _ : state) {
    auto result = minlp::minlp_unmix(
        problem.library, problem.pixels[i++ % problem.pixels.size()], config);
    benchmark::DoNotOptimize(result);
  }
}
BENCHMARK(BM_MinlpUnmix)->Args({40, 100})->Args({60, 100});

void BM_ComputeStats(benchmark::State& state) {
  auto library = io::synthetic_library(20, static_cast<std::size_t>(state.range(0)), 17);
  auto scene = io::generate_scene(library, 2000, 3, {0.2, 1.0}, 30.0, 31);
  for (auto _ : state) {
    auto stats = whiten::compute_stats(scene.pixels);
    benchmark::DoNotOptimize(stats);
  }
}
BENCHMARK(BM_ComputeStats)->Arg(50)->Arg(100);

void BM_AceScore(benchmark::State& state) {
  auto library = io::synthetic_library(20, 100, 17);
  auto scene = io::generate_scene(library, 500, 3, {0.2, 1.0}, 30.0, 37);
  auto stats = whiten::compute_stats(scene.pixels);
  const Vector target = library.spectrum(3);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        whiten::ace_score(scene.pixels[i++ % scene.pixels.size()], target, stats));
  }
}
BENCHMARK(BM_AceScore);

}  // namespace

BENCHMARK_MAIN();
