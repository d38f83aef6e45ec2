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

#include "unmixkit/types.hpp"

#include <cmath>
#include <unordered_set>
#include <utility>

namespace unmixkit {

SpectralLibrary::SpectralLibrary(Vector band_wavelengths, Matrix spectra,
                                 std::vector<std::string> names,
                                 std::vector<std::string> categories)
    : band_wavelengths_(std::move(band_wavelengths)),
      spectra_(std::move(spectra)),
      names_(std::move(names)),
      categories_(std::move(categories)) {
  const auto bands = static_cast<std::size_t>(spectra_.rows());
  const auto count = static_cast<std::size_t>(spectra_.cols());
  if (bands == 0 || count == 0) {
    throw InvalidArgument("spectral library must have at least one band and one spectrum");
  }
  if (static_cast<std::size_t>(band_wavelengths_.size()) != bands) {
    throw DimensionMismatch("wavelength vector length does not match band count");
  }
  if (names_.size() != count || categories_.size() != count) {
    throw DimensionMismatch("names/categories length does not match spectrum count");
  }
  for (Eigen::Index j = 1; j < band_wavelengths_.size(); ++j) {
    if (!(band_wavelengths_[j] > band_wavelengths_[j - 1])) {
      throw InvalidArgument("band wavelengths must be strictly increasing");
    }
  }
  for (Eigen::Index j = 0; j < spectra_.size(); ++j) {
    const double v = spectra_.data()[j];
    if (!std::isfinite(v) || v < 0.0) {
      throw InvalidArgument("reflectance entries must be finite and nonnegative");
    }
  }
  std::unordered_set<std::string> seen;
  for (const auto& name : names_) {
    if (!seen.insert(name).second) {
      throw DuplicateName("duplicate spectrum name: " + name);
    }
  }
  for (const auto& category : categories_) {
    if (category.empty()) {
      throw InvalidArgument("spectrum categories must be non-empty");
    }
  }
}

Eigen::Ref<const Vector> SpectralLibrary::spectrum(std::size_t index) const {
  if (index >= spectrum_count()) {
    throw IndexOutOfRange("spectrum index " + std::to_string(index) +
                          " out of range (N = " + std::to_string(spectrum_count()) + ")");
  }
  return spectra_.col(static_cast<Eigen::Index>(index));
}

std::optional<std::size_t> SpectralLibrary::find_name(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  return std::nullopt;
}

PixelSpectrum::PixelSpectrum(Vector values_in, Vector wavelengths_in)
    : values(std::move(values_in)), wavelengths(std::move(wavelengths_in)) {
  if (wavelengths.size() != 0 && wavelengths.size() != values.size()) {
    throw DimensionMismatch("pixel wavelength grid does not match value count");
  }
  for (Eigen::Index j = 0; j < values.size(); ++j) {
    if (!std::isfinite(values[j])) {
      throw InvalidArgument("pixel reflectance entries must be finite");
    }
  }
}

const char* to_string(ErrorUnits units) noexcept {
  return units == ErrorUnits::Whitened ? "whitened" : "reflectance";
}

std::vector<std::size_t> AbundanceSolution::selected() const {
  std::vector<std::size_t> indices;
  indices.reserve(coefficients.size());
  for (const auto& [index, value] : coefficients) indices.push_back(index);
  return indices;
}

void SolverConfig::validate() const {
  if (!(tol > 0.0)) throw InvalidArgument("solver tolerance must be > 0");
  if (max_iter.has_value() && *max_iter < 1) {
    throw InvalidArgument("max_iter must be >= 1");
  }
}

}  // namespace unmixkit
