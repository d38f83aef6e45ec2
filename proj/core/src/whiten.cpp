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

#include "unmixkit/whiten.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "linalg.hpp"

namespace unmixkit::whiten {

namespace {

constexpr double kEigenvalueFloorScale = 1e-8;

void check_band_count(const WhitenStats& stats, Eigen::Index size) {
  if (static_cast<Eigen::Index>(stats.band_count()) != size) {
    throw DimensionMismatch("spectrum length does not match whitening stats");
  }
}

}  // namespace

WhitenStats WhitenStats::identity(std::size_t bands) {
  const auto m = static_cast<Eigen::Index>(bands);
  WhitenStats stats;
  stats.mean = Vector::Zero(m);
  stats.covariance = Matrix::Identity(m, m);
  stats.eigenvalues = Vector::Ones(m);
  stats.eigenvectors = Matrix::Identity(m, m);
  stats.transform = Matrix::Identity(m, m);
  stats.regularization = 0.0;
  return stats;
}

WhitenStats compute_stats(const std::vector<PixelSpectrum>& cube) {
  if (cube.empty()) throw EmptyCube("cannot compute statistics of an empty cube");
  const Eigen::Index bands = cube.front().values.size();
  for (const auto& pixel : cube) {
    if (pixel.values.size() != bands) {
      throw DimensionMismatch("cube pixels disagree on band count");
    }
  }

  WhitenStats stats;
  stats.mean = Vector::Zero(bands);
  for (const auto& pixel : cube) stats.mean += pixel.values;
  stats.mean /= static_cast<double>(cube.size());

  stats.covariance = Matrix::Zero(bands, bands);
  if (cube.size() > 1) {
    for (const auto& pixel : cube) {
      const Vector centered = pixel.values - stats.mean;
      stats.covariance.noalias() += centered * centered.transpose();
    }
    stats.covariance /= static_cast<double>(cube.size() - 1);
  }

  auto eig = detail::symmetric_eigen(stats.covariance);
  stats.eigenvalues = std::move(eig.eigenvalues);
  stats.eigenvectors = std::move(eig.eigenvectors);

  const double largest = std::max(stats.eigenvalues[0], 0.0);
  stats.regularization = largest > 0.0 ? kEigenvalueFloorScale * largest
                                       : kEigenvalueFloorScale;
  const Vector floored =
      (stats.eigenvalues.array() + stats.regularization).max(stats.regularization);
  stats.transform = floored.cwiseSqrt().cwiseInverse().asDiagonal() *
                    stats.eigenvectors.transpose();
  return stats;
}

Vector whiten_spectrum(const WhitenStats& stats, const Vector& spectrum) {
  check_band_count(stats, spectrum.size());
  return stats.transform * (spectrum - stats.mean);
}

AbundanceSolution hysudeb_unmix(const SpectralLibrary& library,
                                const PixelSpectrum& pixel,
                                const WhitenStats& stats,
                                const solvers::LassoConfig& lasso_config,
                                const SolverConfig& solver_config) {
  if (pixel.band_count() != library.band_count()) {
    throw DimensionMismatch("pixel band count does not match library");
  }
  check_band_count(stats, pixel.values.size());

  // Decorrelate with the linear part of the transform only. Subtracting the
  // image mean from both sides would leave an unfittable (1 - sum a) * W*mean
  // term whenever abundances do not sum to one, which this model permits;
  // the pure linear map keeps the mixture equation intact, so an invertible
  // transform preserves the noiseless optimum.
  const Matrix whitened_library = stats.transform * library.spectra();
  const Vector whitened_pixel = stats.transform * pixel.values;
  auto cv = solvers::detail::lasso_cv_matrix(whitened_library, whitened_pixel,
                                             lasso_config, solver_config,
                                             ErrorUnits::Whitened);
  return std::move(cv.solution);
}

double ace_score(const PixelSpectrum& pixel, const Vector& target_spectrum,
                 const WhitenStats& stats) {
  if (pixel.values.size() != target_spectrum.size()) {
    throw DimensionMismatch("pixel and target spectrum lengths differ");
  }
  const Vector whitened_target = whiten_spectrum(stats, target_spectrum);
  const Vector whitened_pixel = whiten_spectrum(stats, pixel.values);
  const double target_norm = whitened_target.squaredNorm();
  const double pixel_norm = whitened_pixel.squaredNorm();
  if (target_norm == 0.0 || pixel_norm == 0.0) return 0.0;
  const double inner = whitened_target.dot(whitened_pixel);
  // Clamp the Cauchy-Schwarz roundoff so scores stay in [0, 1].
  return std::clamp(inner * inner / (target_norm * pixel_norm), 0.0, 1.0);
}

std::vector<std::size_t> select_roi(const std::vector<PixelSpectrum>& cube,
                                    const Vector& target_spectrum,
                                    const WhitenStats& stats,
                                    double threshold) {
  if (!(threshold >= 0.0) || !(threshold <= 1.0)) {
    throw InvalidThreshold("ACE threshold must lie in [0, 1]");
  }
  std::vector<std::size_t> selected;
  for (std::size_t i = 0; i < cube.size(); ++i) {
    if (ace_score(cube[i], target_spectrum, stats) >= threshold) {
      selected.push_back(i);
    }
  }
  return selected;
}

std::vector<std::size_t> select_roi_top_k(const std::vector<PixelSpectrum>& cube,
                                          const Vector& target_spectrum,
                                          const WhitenStats& stats,
                                          std::size_t top_k) {
  if (top_k > cube.size()) {
    throw InvalidThreshold("top_k exceeds the pixel count");
  }
  std::vector<std::size_t> order(cube.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> scores(cube.size());
  for (std::size_t i = 0; i < cube.size(); ++i) {
    scores[i] = ace_score(cube[i], target_spectrum, stats);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&scores](std::size_t l, std::size_t r) {
                     return scores[l] > scores[r];
                   });
  order.resize(top_k);
  std::sort(order.begin(), order.end());
  return order;
}

AceScoreMap score_cube(const std::vector<PixelSpectrum>& cube,
                       const Vector& target_spectrum, const WhitenStats& stats,
                       std::string target_name, double threshold) {
  AceScoreMap map;
  map.target_name = std::move(target_name);
  map.threshold = threshold;
  map.scores.reserve(cube.size());
  for (const auto& pixel : cube) {
    map.scores.push_back(ace_score(pixel, target_spectrum, stats));
  }
  return map;
}

}  // namespace unmixkit::whiten
