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

namespace unmixkit::minlp {

enum class CardinalitySense { AtMost, AtLeast };

struct MinlpConfig {
  /// Model-size limit on the number of spectra assigned to the model.
  std::size_t model_size = 1;
  CardinalitySense cardinality_sense = CardinalitySense::AtMost;
  /// Per-spectrum abundance caps; empty means a uniform cap of 5.0. Caps
  /// above 1 leave headroom for materials that appear brighter than their
  /// library spectra.
  Vector abundance_caps;
  double time_limit_seconds = 60.0;
  /// Relative optimality gap (on the RMSE objective) at which the search may
  /// stop early; 0 means prove optimality.
  double gap_tol = 0.0;

  void validate(std::size_t spectrum_count) const;
};

struct MinlpResult {
  AbundanceSolution solution;
  /// Objective value Z: the RMSE of the embedded solution.
  double objective = 0.0;
  bool proven_optimal = false;
  std::size_t nodes_explored = 0;
  /// Relative bound gap at termination; 0 when proven optimal.
  double gap = 0.0;
};

/// Exact cardinality-constrained unmixing:
///   minimize  Z = sqrt((1/M) sum_j (y_j - sum_i a_i s_ij)^2)
///   s.t.      a_i <= B_i x_i,  sum_i x_i {<=,>=} model_size,
///             x_i in {0,1},  a_i >= 0.
/// Solved by depth-first branch and bound on the inclusion variables with
/// box-constrained least-squares relaxations; the search minimizes the sum
/// of squared residuals, which orders solutions identically to Z. The
/// search is single-threaded and fully deterministic.
MinlpResult minlp_unmix(const SpectralLibrary& library,
                        const PixelSpectrum& pixel, const MinlpConfig& config);

}  // namespace unmixkit::minlp
