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

#include "unmixkit/core.hpp"

#include <algorithm>
#include <cmath>

namespace unmixkit {

Vector residual(const SpectralLibrary& library, const PixelSpectrum& pixel,
                const AbundanceMap& coefficients) {
  if (pixel.band_count() != library.band_count()) {
    throw DimensionMismatch("pixel has " + std::to_string(pixel.band_count()) +
                            " bands, library has " +
                            std::to_string(library.band_count()));
  }
  Vector r = pixel.values;
  for (const auto& [index, value] : coefficients) {
    if (index >= library.spectrum_count()) {
      throw IndexOutOfRange("coefficient index " + std::to_string(index) +
                            " out of range (N = " +
                            std::to_string(library.spectrum_count()) + ")");
    }
    r.noalias() -= value * library.spectra().col(static_cast<Eigen::Index>(index));
  }
  return r;
}

double rmse(const Vector& residual) {
  if (residual.size() == 0) throw EmptyInput("rmse of an empty residual");
  return std::sqrt(residual.squaredNorm() / static_cast<double>(residual.size()));
}

SpectralLibrary align_to_bands(const SpectralLibrary& library,
                               const Vector& target_wavelengths) {
  const Vector& grid = library.band_wavelengths();
  const auto target_count = target_wavelengths.size();
  if (target_count == 0) throw EmptyInput("empty target wavelength grid");
  for (Eigen::Index j = 1; j < target_count; ++j) {
    if (!(target_wavelengths[j] > target_wavelengths[j - 1])) {
      throw InvalidArgument("target wavelengths must be strictly increasing");
    }
  }
  if (target_wavelengths[0] < grid[0] ||
      target_wavelengths[target_count - 1] > grid[grid.size() - 1]) {
    throw OutOfRange("target wavelengths fall outside the library grid");
  }

  Matrix resampled(target_count, library.spectra().cols());
  Eigen::Index segment = 0;
  for (Eigen::Index j = 0; j < target_count; ++j) {
    const double x = target_wavelengths[j];
    while (segment + 2 < grid.size() && grid[segment + 1] <= x) ++segment;
    const double x0 = grid[segment];
    const double x1 = grid[segment + 1 < grid.size() ? segment + 1 : segment];
    if (x == x0 || grid.size() == 1) {
      resampled.row(j) = library.spectra().row(segment);
    } else if (x == x1) {
      resampled.row(j) = library.spectra().row(segment + 1);
    } else {
      const double t = (x - x0) / (x1 - x0);
      resampled.row(j) = (1.0 - t) * library.spectra().row(segment) +
                         t * library.spectra().row(segment + 1);
    }
  }
  return SpectralLibrary(target_wavelengths, std::move(resampled),
                         library.names(), library.categories());
}

namespace detail {

AbundanceSolution make_solution(const Matrix& spectra, const Vector& pixel,
                                const Vector& dense_coefficients, bool nonneg,
                                ErrorUnits units, double runtime_seconds) {
  AbundanceSolution solution;
  solution.nonneg = nonneg;
  solution.units = units;
  solution.runtime_seconds = runtime_seconds;
  Vector r = pixel;
  for (Eigen::Index i = 0; i < dense_coefficients.size(); ++i) {
    const double value = dense_coefficients[i];
    if (value != 0.0) {
      solution.coefficients.emplace(static_cast<std::size_t>(i), value);
      r.noalias() -= value * spectra.col(i);
    }
  }
  solution.residual = std::move(r);
  solution.rmse = rmse(solution.residual);
  return solution;
}

}  // namespace detail
}  // namespace unmixkit
