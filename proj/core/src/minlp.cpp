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

#include "unmixkit/minlp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "unmixkit/core.hpp"
#include "unmixkit/solvers.hpp"

namespace unmixkit::minlp {

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kActiveSetTol = 1e-10;

struct Node {
  std::vector<std::size_t> fixed_in;
  std::vector<bool> excluded;
  double bound = 0.0;  // inherited lower bound on the SSR of any completion
};

struct Incumbent {
  Vector dense;  // length N, within the caps
  double ssr = std::numeric_limits<double>::infinity();
};

solvers::detail::BoundedLsqResult solve_on(const Matrix& spectra,
                                           const Vector& y,
                                           const std::vector<std::size_t>& cols,
                                           const Vector& caps) {
  return solvers::detail::bounded_least_squares(spectra, y, cols, caps,
                                                kActiveSetTol,
                                                6 * cols.size() + 60);
}

Vector scatter(const solvers::detail::BoundedLsqResult& fit,
               const std::vector<std::size_t>& cols, std::size_t n) {
  Vector dense = Vector::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t f = 0; f < cols.size(); ++f) {
    dense[static_cast<Eigen::Index>(cols[f])] =
        fit.coefficients[static_cast<Eigen::Index>(f)];
  }
  return dense;
}

std::size_t positive_count(const Vector& dense) {
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < dense.size(); ++i) {
    if (dense[i] > 0.0) ++count;
  }
  return count;
}

}  // namespace

void MinlpConfig::validate(std::size_t spectrum_count) const {
  if (model_size < 1) throw InvalidArgument("model_size must be >= 1");
  if (model_size > spectrum_count) {
    throw Infeasible("model_size " + std::to_string(model_size) +
                     " exceeds the library size " +
                     std::to_string(spectrum_count));
  }
  if (abundance_caps.size() != 0) {
    if (static_cast<std::size_t>(abundance_caps.size()) != spectrum_count) {
      throw DimensionMismatch("abundance_caps length does not match library");
    }
    for (Eigen::Index i = 0; i < abundance_caps.size(); ++i) {
      if (!(abundance_caps[i] > 0.0)) {
        throw InvalidArgument("abundance caps must be > 0");
      }
    }
  }
  if (!(time_limit_seconds > 0.0)) throw InvalidArgument("time limit must be > 0");
  if (gap_tol < 0.0) throw InvalidArgument("gap_tol must be >= 0");
}

MinlpResult minlp_unmix(const SpectralLibrary& library,
                        const PixelSpectrum& pixel, const MinlpConfig& config) {
  const auto start = Clock::now();
  const std::size_t n = library.spectrum_count();
  config.validate(n);
  if (pixel.band_count() != library.band_count()) {
    throw DimensionMismatch("pixel band count does not match library");
  }
  const Matrix& spectra = library.spectra();
  const Vector& y = pixel.values;
  const Vector caps = config.abundance_caps.size() != 0
                          ? config.abundance_caps
                          : Vector::Constant(static_cast<Eigen::Index>(n), 5.0);

  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);

  MinlpResult result;

  // Including a spectrum at zero abundance is free, so an at-least
  // cardinality never binds: padding any support with zero-abundance
  // inclusions satisfies it. The optimum is the cap-constrained fit over
  // the whole library.
  if (config.cardinality_sense == CardinalitySense::AtLeast) {
    auto fit = solve_on(spectra, y, all, caps);
    result.solution = detail::make_solution(
        spectra, y, scatter(fit, all, n), /*nonneg=*/true,
        ErrorUnits::Reflectance,
        std::chrono::duration<double>(Clock::now() - start).count());
    result.objective = result.solution.rmse;
    result.proven_optimal = true;
    result.nodes_explored = 1;
    result.gap = 0.0;
    return result;
  }

  const std::size_t p = config.model_size;

  // Incumbent: empty model, then the cap-constrained fit truncated to its p
  // largest coefficients.
  Incumbent incumbent;
  incumbent.dense = Vector::Zero(static_cast<Eigen::Index>(n));
  incumbent.ssr = y.squaredNorm();

  {
    auto full = solve_on(spectra, y, all, caps);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&full](std::size_t l, std::size_t r) {
                       return full.coefficients[static_cast<Eigen::Index>(l)] >
                              full.coefficients[static_cast<Eigen::Index>(r)];
                     });
    std::vector<std::size_t> warm;
    for (std::size_t i = 0; i < n && warm.size() < p; ++i) {
      if (full.coefficients[static_cast<Eigen::Index>(order[i])] > 0.0) {
        warm.push_back(order[i]);
      }
    }
    if (!warm.empty()) {
      std::sort(warm.begin(), warm.end());
      auto fit = solve_on(spectra, y, warm, caps);
      if (fit.ssr < incumbent.ssr) {
        incumbent.ssr = fit.ssr;
        incumbent.dense = scatter(fit, warm, n);
      }
    }
  }

  // Pruning threshold. A node whose SSR bound reaches
  // incumbent * (1 - gap_tol)^2 cannot improve the RMSE objective by more
  // than the accepted relative gap.
  const double gap_factor = (1.0 - std::min(config.gap_tol, 1.0)) *
                            (1.0 - std::min(config.gap_tol, 1.0));
  auto prune_limit = [&]() { return incumbent.ssr * gap_factor; };

  std::vector<Node> stack;
  stack.push_back(Node{{}, std::vector<bool>(n, false), 0.0});

  double open_lower_bound = std::numeric_limits<double>::infinity();
  std::size_t nodes = 0;
  std::vector<std::size_t> relax_cols;
  relax_cols.reserve(n);

  while (!stack.empty()) {
    if (std::chrono::duration<double>(Clock::now() - start).count() >
        config.time_limit_seconds) {
      for (const Node& open : stack) {
        open_lower_bound = std::min(open_lower_bound, open.bound);
      }
      break;
    }
    Node node = std::move(stack.back());
    stack.pop_back();
    ++nodes;

    if (node.bound >= prune_limit()) {
      if (node.bound < incumbent.ssr) {
        open_lower_bound = std::min(open_lower_bound, node.bound);
      }
      continue;
    }

    relax_cols = node.fixed_in;
    for (std::size_t i = 0; i < n; ++i) {
      if (!node.excluded[i] &&
          std::find(node.fixed_in.begin(), node.fixed_in.end(), i) ==
              node.fixed_in.end()) {
        relax_cols.push_back(i);
      }
    }
    std::sort(relax_cols.begin(), relax_cols.end());

    // Leaf: the committed set is full (or nothing is left to add).
    if (node.fixed_in.size() == p || relax_cols.size() == node.fixed_in.size()) {
      std::vector<std::size_t> cols = node.fixed_in;
      std::sort(cols.begin(), cols.end());
      auto fit = solve_on(spectra, y, cols, caps);
      if (fit.ssr < incumbent.ssr) {
        incumbent.ssr = fit.ssr;
        incumbent.dense = scatter(fit, cols, n);
      }
      continue;
    }

    // Relaxation: drop the cardinality constraint over the non-excluded set.
    auto relaxed = solve_on(spectra, y, relax_cols, caps);
    if (relaxed.ssr >= prune_limit()) {
      if (relaxed.ssr < incumbent.ssr) {
        open_lower_bound = std::min(open_lower_bound, relaxed.ssr);
      }
      continue;
    }
    const Vector relaxed_dense = scatter(relaxed, relax_cols, n);
    if (positive_count(relaxed_dense) <= p) {
      // The relaxed optimum is already cardinality-feasible, so it solves
      // this node exactly.
      if (relaxed.ssr < incumbent.ssr) {
        incumbent.ssr = relaxed.ssr;
        incumbent.dense = relaxed_dense;
      }
      continue;
    }

    // Branch on the free variable with the largest relaxed coefficient.
    std::size_t branch_index = n;
    double branch_value = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (node.excluded[i]) continue;
      if (std::find(node.fixed_in.begin(), node.fixed_in.end(), i) !=
          node.fixed_in.end()) {
        continue;
      }
      const double value = relaxed_dense[static_cast<Eigen::Index>(i)];
      if (value > branch_value) {
        branch_value = value;
        branch_index = i;
      }
    }
    if (branch_index == n) continue;  // no free variable left

    Node exclude_child;
    exclude_child.fixed_in = node.fixed_in;
    exclude_child.excluded = node.excluded;
    exclude_child.excluded[branch_index] = true;
    exclude_child.bound = relaxed.ssr;

    Node include_child;
    include_child.fixed_in = node.fixed_in;
    include_child.fixed_in.push_back(branch_index);
    include_child.excluded = node.excluded;
    include_child.bound = relaxed.ssr;

    // LIFO: dive into the include branch first.
    stack.push_back(std::move(exclude_child));
    stack.push_back(std::move(include_child));
  }

  result.solution = detail::make_solution(
      spectra, y, incumbent.dense, /*nonneg=*/true, ErrorUnits::Reflectance,
      std::chrono::duration<double>(Clock::now() - start).count());
  result.objective = result.solution.rmse;
  result.nodes_explored = nodes;
  result.proven_optimal = !(open_lower_bound < incumbent.ssr);
  if (result.proven_optimal) {
    result.gap = 0.0;
  } else {
    const double bands = static_cast<double>(library.band_count());
    const double z_inc = std::sqrt(incumbent.ssr / bands);
    const double z_lb =
        std::sqrt(std::max(open_lower_bound, 0.0) / bands);
    result.gap = z_inc > 0.0 ? std::max(0.0, (z_inc - z_lb) / z_inc) : 0.0;
  }
  return result;
}

}  // namespace unmixkit::minlp
