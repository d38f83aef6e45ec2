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

#include <utility>
#include <vector>

#include "unmixkit/core.hpp"
#include "unmixkit/types.hpp"

namespace unmixkit::solvers {

/// Penalty and cross-validation settings for the L1-regularized solver.
/// The grid defaults sweep 0.001..0.1 in steps of 0.001 with 5 folds.
struct LassoConfig {
  double lambda = 0.01;
  double grid_start = 0.001;
  double grid_stop = 0.1;
  double grid_step = 0.001;
  std::size_t folds = 5;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Closed-form least squares via the normal equations. Requires N <= M
/// (Underdetermined otherwise) and a normal matrix with condition estimate
/// below 1e12 (SingularNormalMatrix otherwise). The returned coefficients
/// are the raw signed values; the solution is flagged `nonneg = false`.
AbundanceSolution ols_solve(const SpectralLibrary& library,
                            const PixelSpectrum& pixel);

/// Least squares under elementwise nonnegativity, solved by the
/// Lawson-Hanson active-set method. At exit the KKT conditions hold: every
/// zero coefficient has gradient component S_i' (S a - y) >= -tol.
AbundanceSolution nnls_solve(const SpectralLibrary& library,
                             const PixelSpectrum& pixel,
                             const SolverConfig& config = {});

/// Nonnegative LASSO: minimize (1/M) ||y - S a||^2 + lambda ||a||_1 with
/// a >= 0, by cyclic coordinate descent with soft thresholding. Converged
/// when the largest coefficient change in a sweep drops below config.tol.
/// When `sweep_objectives` is non-null the objective value after each sweep
/// is appended to it.
AbundanceSolution lasso_solve(const SpectralLibrary& library,
                              const PixelSpectrum& pixel, double lambda,
                              const SolverConfig& config = {},
                              std::vector<double>* sweep_objectives = nullptr);

struct LassoCvResult {
  double best_lambda = 0.0;
  AbundanceSolution solution;
  std::vector<double> grid;
  std::vector<double> cv_errors;  // mean held-out squared error per grid point
};

/// K-fold cross-validation over the penalty grid. Bands are the CV
/// observations: they are shuffled with the config seed and partitioned into
/// `folds` contiguous groups. Ties in CV error break toward the larger
/// lambda (the sparser model); the final fit uses all bands.
LassoCvResult lasso_cv(const SpectralLibrary& library,
                       const PixelSpectrum& pixel,
                       const LassoConfig& lasso_config = {},
                       const SolverConfig& solver_config = {});

namespace detail {

struct BoundedLsqResult {
  Vector coefficients;  // one entry per requested column, in request order
  double ssr = 0.0;
  std::size_t iterations = 0;
};

/// Active-set solver for min ||y - S_C z||^2 subject to 0 <= z_c <= cap_c,
/// restricted to the columns listed in `columns`. An empty `upper_caps`
/// means no upper bounds, which reduces the method to plain Lawson-Hanson
/// NNLS. `upper_caps`, when present, is indexed by original column index.
BoundedLsqResult bounded_least_squares(const Matrix& spectra, const Vector& y,
                                       const std::vector<std::size_t>& columns,
                                       const Vector& upper_caps, double tol,
                                       std::size_t max_iterations);

/// Matrix-level LASSO entry points shared with the whitened-space solver.
AbundanceSolution lasso_solve_matrix(const Matrix& spectra, const Vector& y,
                                     double lambda, const SolverConfig& config,
                                     ErrorUnits units,
                                     std::vector<double>* sweep_objectives);

LassoCvResult lasso_cv_matrix(const Matrix& spectra, const Vector& y,
                              const LassoConfig& lasso_config,
                              const SolverConfig& solver_config,
                              ErrorUnits units);

}  // namespace detail
}  // namespace unmixkit::solvers
