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

#include <Eigen/Dense>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "unmixkit/errors.hpp"

namespace unmixkit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Sparse abundance vector: library index -> coefficient. Zero entries are
/// never stored.
using AbundanceMap = std::map<std::size_t, double>;

/// A reference collection of material spectra sampled on a shared band grid.
///
/// Spectra are stored as the columns of an M x N matrix (M bands, N spectra),
/// column-major, so each spectrum is contiguous in memory. Reflectance is
/// unitless and nonnegative; wavelengths are micrometers and strictly
/// increasing. Immutable after construction and safe to share across threads.
class SpectralLibrary {
 public:
  SpectralLibrary(Vector band_wavelengths, Matrix spectra,
                  std::vector<std::string> names,
                  std::vector<std::string> categories);

  std::size_t band_count() const noexcept {
    return static_cast<std::size_t>(spectra_.rows());
  }
  std::size_t spectrum_count() const noexcept {
    return static_cast<std::size_t>(spectra_.cols());
  }

  const Vector& band_wavelengths() const noexcept { return band_wavelengths_; }
  const Matrix& spectra() const noexcept { return spectra_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::vector<std::string>& categories() const noexcept {
    return categories_;
  }

  /// Column view of one spectrum.
  Eigen::Ref<const Vector> spectrum(std::size_t index) const;

  /// Index of the spectrum with the given name, if any.
  std::optional<std::size_t> find_name(const std::string& name) const;

 private:
  Vector band_wavelengths_;
  Matrix spectra_;
  std::vector<std::string> names_;
  std::vector<std::string> categories_;
};

/// One observed reflectance spectrum, on the same band grid as the library
/// it is unmixed against.
struct PixelSpectrum {
  Vector values;
  Vector wavelengths;

  PixelSpectrum() = default;
  PixelSpectrum(Vector values_in, Vector wavelengths_in);

  std::size_t band_count() const noexcept {
    return static_cast<std::size_t>(values.size());
  }
};

/// Units of the residual/RMSE stored in an AbundanceSolution. Whitened-space
/// errors are not numerically comparable to reflectance-space errors.
enum class ErrorUnits { Reflectance, Whitened };

const char* to_string(ErrorUnits units) noexcept;

/// Output of one unmixing solve: the sparse coefficient vector, the residual
/// y - S*a, and fit statistics.
///
/// `nonneg` distinguishes constrained solutions (every stored coefficient
/// strictly positive) from raw unconstrained ones (nonzero, possibly
/// negative). Zeros are omitted in both cases.
struct AbundanceSolution {
  AbundanceMap coefficients;
  Vector residual;
  double rmse = 0.0;
  double runtime_seconds = 0.0;
  bool nonneg = true;
  ErrorUnits units = ErrorUnits::Reflectance;

  /// The support of the model: exactly the keys of `coefficients`,
  /// ascending.
  std::vector<std::size_t> selected() const;
};

/// Generic iteration controls shared by the iterative solvers. `max_iter`
/// left empty means "use the solver's own default cap".
struct SolverConfig {
  bool nonneg = true;
  std::optional<std::size_t> max_iter;
  double tol = 1e-8;

  void validate() const;
};

}  // namespace unmixkit
