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

#include "unmixkit/types.hpp"

namespace unmixkit {

/// Residual of the linear mixture y - S*a for a sparse coefficient map.
/// Throws DimensionMismatch if the pixel is not on the library's band grid
/// and IndexOutOfRange for coefficient indices >= N.
Vector residual(const SpectralLibrary& library, const PixelSpectrum& pixel,
                const AbundanceMap& coefficients);

/// Root mean squared error: sqrt((1/M) * sum r_j^2). Throws EmptyInput on an
/// empty vector.
double rmse(const Vector& residual);

/// Resample every library spectrum onto `target_wavelengths` by linear
/// interpolation. Targets must be strictly increasing and lie within the
/// library's wavelength range (OutOfRange otherwise). Names and categories
/// are preserved.
SpectralLibrary align_to_bands(const SpectralLibrary& library,
                               const Vector& target_wavelengths);

namespace detail {

/// Assemble a fully populated AbundanceSolution from a dense coefficient
/// vector: drops exact zeros, computes the residual against S and y, and
/// stamps units and runtime. Shared by every solver.
AbundanceSolution make_solution(const Matrix& spectra, const Vector& pixel,
                                const Vector& dense_coefficients, bool nonneg,
                                ErrorUnits units, double runtime_seconds);

}  // namespace detail
}  // namespace unmixkit
