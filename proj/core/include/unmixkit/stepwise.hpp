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

#include <optional>

#include "unmixkit/types.hpp"

namespace unmixkit::stepwise {

struct StepwiseConfig {
  /// p-value below which a candidate spectrum is accepted.
  double alpha = 0.05;
  /// Cap on model size; empty means min(M - 1, 20).
  std::optional<std::size_t> max_features;
  /// Refit the final support with nonnegative least squares.
  bool refit_nonneg = true;

  void validate() const;
};

/// F statistic for adding `extra_params` parameters:
///   F = ((rss_reduced - rss_full) / extra_params) / (rss_full / residual_df_full).
/// Returns +infinity when the full model fits exactly and the reduced one
/// does not, and 0 when there is no improvement.
double f_statistic(double rss_reduced, double rss_full,
                   std::size_t extra_params, std::size_t residual_df_full);

/// Upper-tail probability of the F(df1, df2) distribution, via the
/// regularized incomplete beta function.
double f_pvalue(double f, std::size_t df1, std::size_t df2);

/// Greedy forward selection: at each step, F-test every excluded spectrum
/// against the current model and add the one with the smallest p-value while
/// it stays below alpha. Candidate fits use unconstrained least squares on
/// the support; the final coefficients come from an NNLS refit. Stops when
/// no candidate passes, when the size cap is reached, or when the winning
/// spectrum's NNLS coefficient would be zero.
AbundanceSolution dfs_select(const SpectralLibrary& library,
                             const PixelSpectrum& pixel,
                             const StepwiseConfig& config = {});

namespace detail {

/// Regularized incomplete beta function I_x(a, b), evaluated by a continued
/// fraction iterated to 1e-12.
double incomplete_beta(double a, double b, double x);

}  // namespace detail
}  // namespace unmixkit::stepwise
