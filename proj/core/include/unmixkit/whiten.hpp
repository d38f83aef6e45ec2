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

#include <vector>

#include "unmixkit/solvers.hpp"
#include "unmixkit/types.hpp"

namespace unmixkit::whiten {

/// Image band statistics and the PCA whitening transform derived from them:
/// W = diag(eigenvalues + eps)^(-1/2) * E', so W * covariance * W' is the
/// identity up to the eigenvalue floor. Immutable once computed.
struct WhitenStats {
  Vector mean;
  Matrix covariance;
  Vector eigenvalues;   // descending
  Matrix eigenvectors;  // orthonormal columns, sign-fixed
  Matrix transform;     // W, bands x bands
  double regularization = 0.0;

  std::size_t band_count() const noexcept {
    return static_cast<std::size_t>(mean.size());
  }

  /// Stats whose transform is exactly the identity (zero mean, unit
  /// covariance, no eigenvalue floor).
  static WhitenStats identity(std::size_t bands);
};

/// Per-pixel detection scores for one target spectrum.
struct AceScoreMap {
  std::vector<double> scores;  // each in [0, 1]
  std::string target_name;
  double threshold = 0.0;
};

/// Sample mean and covariance (denominator: pixel count - 1) of a cube,
/// eigendecomposed into the whitening transform. The eigenvalue floor
/// eps = 1e-8 * largest eigenvalue keeps rank-deficient covariances usable.
/// Throws EmptyCube on an empty collection.
WhitenStats compute_stats(const std::vector<PixelSpectrum>& cube);

/// W * (spectrum - mean).
Vector whiten_spectrum(const WhitenStats& stats, const Vector& spectrum);

/// Whiten the library columns and the pixel with the image statistics, then
/// run cross-validated LASSO in the whitened space. The returned residual
/// and RMSE are in whitened units (ErrorUnits::Whitened) and are not
/// comparable to reflectance-space errors.
AbundanceSolution hysudeb_unmix(const SpectralLibrary& library,
                                const PixelSpectrum& pixel,
                                const WhitenStats& stats,
                                const solvers::LassoConfig& lasso_config = {},
                                const SolverConfig& solver_config = {});

/// Adaptive coherence estimate: the squared cosine between the whitened
/// pixel and the whitened target, in [0, 1]. Zero when either whitened
/// vector vanishes.
double ace_score(const PixelSpectrum& pixel, const Vector& target_spectrum,
                 const WhitenStats& stats);

/// Indices of the pixels whose ACE score is >= threshold, ascending.
std::vector<std::size_t> select_roi(const std::vector<PixelSpectrum>& cube,
                                    const Vector& target_spectrum,
                                    const WhitenStats& stats, double threshold);

/// Indices of the top_k pixels by ACE score (ties toward the lower pixel
/// index), ascending.
std::vector<std::size_t> select_roi_top_k(const std::vector<PixelSpectrum>& cube,
                                          const Vector& target_spectrum,
                                          const WhitenStats& stats,
                                          std::size_t top_k);

/// Scores for every pixel against one named target.
AceScoreMap score_cube(const std::vector<PixelSpectrum>& cube,
                       const Vector& target_spectrum, const WhitenStats& stats,
                       std::string target_name, double threshold);

}  // namespace unmixkit::whiten
