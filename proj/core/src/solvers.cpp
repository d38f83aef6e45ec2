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

#include "unmixkit/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "linalg.hpp"

namespace unmixkit::solvers {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void check_pixel(const SpectralLibrary& library, const PixelSpectrum& pixel) {
  if (pixel.band_count() != library.band_count()) {
    throw DimensionMismatch("pixel has " + std::to_string(pixel.band_count()) +
                            " bands, library has " +
                            std::to_string(library.band_count()));
  }
}

constexpr double kConditionLimit = 1e12;

}  // namespace

void LassoConfig::validate() const {
  if (lambda < 0.0) throw InvalidArgument("lasso lambda must be >= 0");
  if (grid_start > grid_stop) throw InvalidArgument("lasso grid_start must be <= grid_stop");
  if (!(grid_step > 0.0)) throw InvalidArgument("lasso grid_step must be > 0");
  if (folds < 2) throw InvalidArgument("cross-validation needs at least 2 folds");
}

AbundanceSolution ols_solve(const SpectralLibrary& library,
                            const PixelSpectrum& pixel) {
  const auto start = Clock::now();
  check_pixel(library, pixel);
  const Matrix& s = library.spectra();
  const auto bands = library.band_count();
  const auto count = library.spectrum_count();
  if (count > bands) {
    throw Underdetermined("library has " + std::to_string(count) +
                          " spectra over " + std::to_string(bands) +
                          " bands; the normal matrix cannot be inverted");
  }

  const Matrix normal = s.transpose() * s;
  const auto eig = unmixkit::detail::symmetric_eigen(normal);
  const double largest = eig.eigenvalues[0];
  const double smallest = eig.eigenvalues[eig.eigenvalues.size() - 1];
  if (!(smallest > 0.0) || largest / smallest > kConditionLimit) {
    throw SingularNormalMatrix("normal matrix condition estimate exceeds 1e12");
  }

  const Vector projected = s.transpose() * pixel.values;
  const Vector coefficients =
      eig.eigenvectors *
      (eig.eigenvectors.transpose() * projected).cwiseQuotient(eig.eigenvalues);
  return unmixkit::detail::make_solution(s, pixel.values, coefficients,
                                         /*nonneg=*/false,
                                         ErrorUnits::Reflectance,
                                         seconds_since(start));
}

namespace detail {

namespace {

enum class BoundState : unsigned char { AtZero, Free, AtUpper };

}  // namespace

BoundedLsqResult bounded_least_squares(const Matrix& spectra, const Vector& y,
                                       const std::vector<std::size_t>& columns,
                                       const Vector& upper_caps, double tol,
                                       std::size_t max_iterations) {
  const auto n = columns.size();
  const bool capped = upper_caps.size() > 0;
  auto cap = [&](std::size_t slot) {
    return capped ? upper_caps[static_cast<Eigen::Index>(columns[slot])]
                  : std::numeric_limits<double>::infinity();
  };

  BoundedLsqResult result;
  result.coefficients = Vector::Zero(static_cast<Eigen::Index>(n));
  if (n == 0) {
    result.ssr = y.squaredNorm();
    return result;
  }

  std::vector<BoundState> state(n, BoundState::AtZero);
  Vector coeffs = Vector::Zero(static_cast<Eigen::Index>(n));
  Vector residual = y;

  // Dual tolerance scaled to the correlation magnitudes of this problem.
  double gradient_scale = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    gradient_scale = std::max(
        gradient_scale,
        std::abs(spectra.col(static_cast<Eigen::Index>(columns[c])).dot(y)));
  }
  const double dual_tol = tol * gradient_scale;

  std::vector<std::size_t> free_slots;
  Matrix free_matrix;

  auto rebuild_residual = [&]() {
    residual = y;
    for (std::size_t c = 0; c < n; ++c) {
      if (coeffs[static_cast<Eigen::Index>(c)] != 0.0) {
        residual.noalias() -= coeffs[static_cast<Eigen::Index>(c)] *
                              spectra.col(static_cast<Eigen::Index>(columns[c]));
      }
    }
  };

  std::size_t iterations = 0;
  while (true) {
    // Select the bound variable whose gradient most wants to move inward.
    double best_violation = dual_tol;
    std::ptrdiff_t entering = -1;
    for (std::size_t c = 0; c < n; ++c) {
      if (state[c] == BoundState::Free) continue;
      const double w =
          spectra.col(static_cast<Eigen::Index>(columns[c])).dot(residual);
      const double violation = state[c] == BoundState::AtZero ? w : -w;
      if (violation > best_violation) {
        best_violation = violation;
        entering = static_cast<std::ptrdiff_t>(c);
      }
    }
    if (entering < 0) break;  // KKT satisfied
    state[static_cast<std::size_t>(entering)] = BoundState::Free;

    // Inner loop: re-solve on the free set, stepping back to the nearest
    // bound whenever the unconstrained solution leaves the box.
    while (true) {
      if (++iterations > max_iterations) {
        throw MaxIterationsExceeded(
            "active-set solver exceeded " + std::to_string(max_iterations) +
            " iterations");
      }
      free_slots.clear();
      for (std::size_t c = 0; c < n; ++c) {
        if (state[c] == BoundState::Free) free_slots.push_back(c);
      }
      if (free_slots.empty()) {
        // Everything sits on a bound; that is this iteration's solution.
        for (std::size_t c = 0; c < n; ++c) {
          coeffs[static_cast<Eigen::Index>(c)] =
              state[c] == BoundState::AtUpper ? cap(c) : 0.0;
        }
        rebuild_residual();
        break;
      }

      Vector target = y;
      for (std::size_t c = 0; c < n; ++c) {
        if (state[c] == BoundState::AtUpper) {
          target.noalias() -=
              cap(c) * spectra.col(static_cast<Eigen::Index>(columns[c]));
        }
      }
      free_matrix.resize(y.size(), static_cast<Eigen::Index>(free_slots.size()));
      for (std::size_t f = 0; f < free_slots.size(); ++f) {
        free_matrix.col(static_cast<Eigen::Index>(f)) =
            spectra.col(static_cast<Eigen::Index>(columns[free_slots[f]]));
      }
      const Vector solution = free_matrix.colPivHouseholderQr().solve(target);

      bool inside = true;
      for (std::size_t f = 0; f < free_slots.size(); ++f) {
        const double z = solution[static_cast<Eigen::Index>(f)];
        if (z <= 0.0 || z >= cap(free_slots[f])) {
          inside = false;
          break;
        }
      }
      if (inside) {
        for (std::size_t c = 0; c < n; ++c) {
          if (state[c] == BoundState::AtUpper) {
            coeffs[static_cast<Eigen::Index>(c)] = cap(c);
          } else if (state[c] == BoundState::AtZero) {
            coeffs[static_cast<Eigen::Index>(c)] = 0.0;
          }
        }
        for (std::size_t f = 0; f < free_slots.size(); ++f) {
          coeffs[static_cast<Eigen::Index>(free_slots[f])] =
              solution[static_cast<Eigen::Index>(f)];
        }
        rebuild_residual();
        break;
      }

      // Largest feasible step from the current iterate toward the solution.
      double alpha = 1.0;
      std::ptrdiff_t blocking = -1;
      bool blocking_at_upper = false;
      for (std::size_t f = 0; f < free_slots.size(); ++f) {
        const double current = coeffs[static_cast<Eigen::Index>(free_slots[f])];
        const double z = solution[static_cast<Eigen::Index>(f)];
        double limit = 1.0;
        bool at_upper = false;
        if (z <= 0.0) {
          limit = current > z ? current / (current - z) : 0.0;
        } else if (z >= cap(free_slots[f])) {
          limit = z > current ? (cap(free_slots[f]) - current) / (z - current) : 0.0;
          at_upper = true;
        } else {
          continue;
        }
        if (blocking < 0 || limit < alpha) {
          alpha = limit;
          blocking = static_cast<std::ptrdiff_t>(free_slots[f]);
          blocking_at_upper = at_upper;
        }
      }
      if (blocking < 0) {
        // Should not happen: some coordinate was outside the box.
        throw MaxIterationsExceeded("active-set step selection failed");
      }
      for (std::size_t f = 0; f < free_slots.size(); ++f) {
        auto slot = static_cast<Eigen::Index>(free_slots[f]);
        coeffs[slot] += alpha * (solution[static_cast<Eigen::Index>(f)] - coeffs[slot]);
      }
      const auto b = static_cast<std::size_t>(blocking);
      if (blocking_at_upper) {
        coeffs[static_cast<Eigen::Index>(b)] = cap(b);
        state[b] = BoundState::AtUpper;
      } else {
        coeffs[static_cast<Eigen::Index>(b)] = 0.0;
        state[b] = BoundState::AtZero;
      }
      // Snap any coordinate that the step left numerically on a bound.
      for (std::size_t f = 0; f < free_slots.size(); ++f) {
        auto slot = static_cast<Eigen::Index>(free_slots[f]);
        if (state[free_slots[f]] != BoundState::Free) continue;
        if (coeffs[slot] <= 0.0) {
          coeffs[slot] = 0.0;
          state[free_slots[f]] = BoundState::AtZero;
        } else if (coeffs[slot] >= cap(free_slots[f])) {
          coeffs[slot] = cap(free_slots[f]);
          state[free_slots[f]] = BoundState::AtUpper;
        }
      }
      rebuild_residual();
    }
  }

  // Free variables whose least-squares value collapsed to roundoff noise
  // are exact zeros of the true solution; snap them so supports are clean.
  const double largest = coeffs.size() > 0 ? coeffs.maxCoeff() : 0.0;
  if (largest > 0.0) {
    bool snapped = false;
    for (Eigen::Index c = 0; c < coeffs.size(); ++c) {
      if (coeffs[c] != 0.0 && coeffs[c] <= 1e-12 * largest) {
        coeffs[c] = 0.0;
        snapped = true;
      }
    }
    if (snapped) rebuild_residual();
  }

  result.coefficients = coeffs;
  result.ssr = residual.squaredNorm();
  result.iterations = iterations;
  return result;
}

}  // namespace detail

AbundanceSolution nnls_solve(const SpectralLibrary& library,
                             const PixelSpectrum& pixel,
                             const SolverConfig& config) {
  const auto start = Clock::now();
  config.validate();
  check_pixel(library, pixel);
  const auto count = library.spectrum_count();
  std::vector<std::size_t> all(count);
  std::iota(all.begin(), all.end(), 0);
  const std::size_t cap = config.max_iter.value_or(3 * count);
  auto lsq = detail::bounded_least_squares(library.spectra(), pixel.values, all,
                                           Vector(), config.tol, cap);
  return unmixkit::detail::make_solution(library.spectra(), pixel.values,
                                         lsq.coefficients, /*nonneg=*/true,
                                         ErrorUnits::Reflectance,
                                         seconds_since(start));
}

namespace detail {

namespace {

struct CoordinateDescentResult {
  Vector coefficients;
  std::size_t sweeps = 0;
};

// Cyclic coordinate descent on the gram form of the objective
//   (1/M)(y'y - 2 a'corr + a'G a) + lambda ||a||_1,  a >= 0 when nonneg.
// `gram_times_a` is maintained incrementally; `band_count` is the M of the
// (1/M) factor, which may differ from the gram's source row count during
// cross-validation.
CoordinateDescentResult coordinate_descent(
    const Matrix& gram, const Vector& corr, double y_squared_norm,
    std::size_t band_count, double lambda, Vector start, bool nonneg,
    double tol, std::size_t max_sweeps, std::vector<double>* sweep_objectives) {
  const Eigen::Index n = gram.rows();
  Vector a = std::move(start);
  if (a.size() != n) a = Vector::Zero(n);
  Vector gram_a = gram * a;
  const double threshold = lambda * static_cast<double>(band_count) / 2.0;

  auto objective = [&]() {
    const double fit = y_squared_norm - 2.0 * a.dot(corr) + a.dot(gram * a);
    return fit / static_cast<double>(band_count) +
           lambda * a.cwiseAbs().sum();
  };

  CoordinateDescentResult result;
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    double max_change = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double diag = gram(i, i);
      if (diag <= 0.0) continue;
      const double rho = corr[i] - gram_a[i] + diag * a[i];
      double updated;
      if (nonneg) {
        updated = std::max(0.0, (rho - threshold) / diag);
      } else {
        const double shrunk =
            std::max(0.0, std::abs(rho) - threshold) * (rho >= 0.0 ? 1.0 : -1.0);
        updated = shrunk / diag;
      }
      const double change = updated - a[i];
      if (change != 0.0) {
        a[i] = updated;
        gram_a.noalias() += change * gram.col(i);
        max_change = std::max(max_change, std::abs(change));
      }
    }
    result.sweeps = sweep + 1;
    if (sweep_objectives) sweep_objectives->push_back(objective());
    if (max_change < tol) {
      result.coefficients = std::move(a);
      return result;
    }
  }
  throw MaxIterationsExceeded("coordinate descent did not converge in " +
                              std::to_string(max_sweeps) + " sweeps");
}

constexpr std::size_t kDefaultLassoSweeps = 100000;

}  // namespace

AbundanceSolution lasso_solve_matrix(const Matrix& spectra, const Vector& y,
                                     double lambda, const SolverConfig& config,
                                     ErrorUnits units,
                                     std::vector<double>* sweep_objectives) {
  const auto start = Clock::now();
  config.validate();
  if (lambda < 0.0) throw InvalidArgument("lasso lambda must be >= 0");
  const Matrix gram = spectra.transpose() * spectra;
  const Vector corr = spectra.transpose() * y;
  auto cd = coordinate_descent(
      gram, corr, y.squaredNorm(), static_cast<std::size_t>(spectra.rows()),
      lambda, Vector(), config.nonneg, config.tol,
      config.max_iter.value_or(kDefaultLassoSweeps), sweep_objectives);
  return unmixkit::detail::make_solution(spectra, y, cd.coefficients,
                                         config.nonneg, units,
                                         seconds_since(start));
}

LassoCvResult lasso_cv_matrix(const Matrix& spectra, const Vector& y,
                              const LassoConfig& lasso_config,
                              const SolverConfig& solver_config,
                              ErrorUnits units) {
  const auto start = Clock::now();
  lasso_config.validate();
  solver_config.validate();
  const auto bands = static_cast<std::size_t>(spectra.rows());
  if (bands < lasso_config.folds) {
    throw TooFewBands("cross-validation needs at least " +
                      std::to_string(lasso_config.folds) + " bands, got " +
                      std::to_string(bands));
  }

  std::vector<double> grid;
  for (double lambda = lasso_config.grid_start;
       lambda <= lasso_config.grid_stop + 0.5 * lasso_config.grid_step;
       lambda += lasso_config.grid_step) {
    grid.push_back(lambda);
  }

  // Seeded band shuffle, then contiguous folds.
  std::vector<std::size_t> order(bands);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(lasso_config.seed);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<double> total_error(grid.size(), 0.0);
  const std::size_t folds = lasso_config.folds;
  std::size_t fold_begin = 0;
  for (std::size_t fold = 0; fold < folds; ++fold) {
    const std::size_t fold_size = bands / folds + (fold < bands % folds ? 1 : 0);
    const std::size_t fold_end = fold_begin + fold_size;

    Matrix train(static_cast<Eigen::Index>(bands - fold_size), spectra.cols());
    Vector train_y(static_cast<Eigen::Index>(bands - fold_size));
    Matrix test(static_cast<Eigen::Index>(fold_size), spectra.cols());
    Vector test_y(static_cast<Eigen::Index>(fold_size));
    Eigen::Index train_row = 0;
    Eigen::Index test_row = 0;
    for (std::size_t pos = 0; pos < bands; ++pos) {
      const auto band = static_cast<Eigen::Index>(order[pos]);
      if (pos >= fold_begin && pos < fold_end) {
        test.row(test_row) = spectra.row(band);
        test_y[test_row++] = y[band];
      } else {
        train.row(train_row) = spectra.row(band);
        train_y[train_row++] = y[band];
      }
    }

    const Matrix gram = train.transpose() * train;
    const Vector corr = train.transpose() * train_y;
    const double train_norm = train_y.squaredNorm();
    const auto train_bands = static_cast<std::size_t>(train.rows());

    // Sweep the grid from the sparsest end down, warm-starting each fit.
    Vector warm = Vector::Zero(spectra.cols());
    for (std::size_t g = grid.size(); g-- > 0;) {
      auto cd = coordinate_descent(
          gram, corr, train_norm, train_bands, grid[g], warm,
          solver_config.nonneg, solver_config.tol,
          solver_config.max_iter.value_or(kDefaultLassoSweeps), nullptr);
      warm = cd.coefficients;
      total_error[g] += (test_y - test * cd.coefficients).squaredNorm();
    }
    fold_begin = fold_end;
  }

  LassoCvResult result;
  result.grid = grid;
  result.cv_errors.resize(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    result.cv_errors[g] = total_error[g] / static_cast<double>(bands);
  }
  // Ascending scan with ">= keeps the later (larger) lambda" tie behavior.
  std::size_t best = 0;
  for (std::size_t g = 1; g < grid.size(); ++g) {
    if (result.cv_errors[g] <= result.cv_errors[best]) best = g;
  }
  result.best_lambda = grid[best];
  result.solution = lasso_solve_matrix(spectra, y, result.best_lambda,
                                       solver_config, units, nullptr);
  result.solution.runtime_seconds = seconds_since(start);
  return result;
}

}  // namespace detail

AbundanceSolution lasso_solve(const SpectralLibrary& library,
                              const PixelSpectrum& pixel, double lambda,
                              const SolverConfig& config,
                              std::vector<double>* sweep_objectives) {
  check_pixel(library, pixel);
  return detail::lasso_solve_matrix(library.spectra(), pixel.values, lambda,
                                    config, ErrorUnits::Reflectance,
                                    sweep_objectives);
}

LassoCvResult lasso_cv(const SpectralLibrary& library,
                       const PixelSpectrum& pixel,
                       const LassoConfig& lasso_config,
                       const SolverConfig& solver_config) {
  check_pixel(library, pixel);
  return detail::lasso_cv_matrix(library.spectra(), pixel.values, lasso_config,
                                 solver_config, ErrorUnits::Reflectance);
}

}  // namespace unmixkit::solvers
