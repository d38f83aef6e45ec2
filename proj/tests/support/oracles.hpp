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
//
// Independent reference implementations used only to check the library.
// Everything here is deliberately brute force: numerical quadrature instead
// of special functions, pattern/support enumeration instead of active sets.

#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "unmixkit/types.hpp"

namespace oracles {

using unmixkit::Matrix;
using unmixkit::Vector;

// ---------------------------------------------------------------------------
// Quadrature

inline double simpson_rule(double a, double b, double fa, double fm,
                           double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_impl(const std::function<double(double)>& f,
                                    double a, double b, double fa, double fm,
                                    double fb, double whole, double tol,
                                    int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson_rule(a, m, fa, flm, fm);
  const double right = simpson_rule(m, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return adaptive_simpson_impl(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         adaptive_simpson_impl(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

// Pre-panelled so narrow peaks cannot hide between the first sample points.
inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double tol = 1e-12) {
  if (a >= b) return 0.0;
  constexpr int kPanels = 64;
  const double width = (b - a) / kPanels;
  double total = 0.0;
  for (int panel = 0; panel < kPanels; ++panel) {
    const double lo = a + panel * width;
    const double hi = panel + 1 == kPanels ? b : lo + width;
    const double flo = f(lo);
    const double fhi = f(hi);
    const double fm = f(0.5 * (lo + hi));
    const double whole = simpson_rule(lo, hi, flo, fm, fhi);
    total += adaptive_simpson_impl(f, lo, hi, flo, fm, fhi, whole,
                                   tol / kPanels, 36);
  }
  return total;
}

// Upper tail of F(d1, d2) by quadrature alone. With W = d1 X / (d1 X + d2)
// distributed Beta(d1/2, d2/2) and the substitution w = sin^2(theta), the
// density becomes 2 sin^(d1-1) cos^(d2-1), which is smooth for all df >= 1;
// the tail is the ratio of two proper integrals.
inline double f_upper_tail_by_quadrature(double f, int df1, int df2) {
  if (f <= 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  const double w0 = (df1 * f) / (df1 * f + df2);
  const double theta0 = std::asin(std::min(1.0, std::sqrt(w0)));
  auto integrand = [df1, df2](double theta) {
    return 2.0 * std::pow(std::sin(theta), df1 - 1) *
           std::pow(std::cos(theta), df2 - 1);
  };
  const double half_pi = std::acos(0.0);
  const double tail = adaptive_simpson(integrand, theta0, half_pi, 1e-13);
  const double total = adaptive_simpson(integrand, 0.0, half_pi, 1e-13);
  return tail / total;
}

// ---------------------------------------------------------------------------
// Box-constrained least squares by active-pattern enumeration

struct BoxFit {
  Vector coefficients;  // one per requested column
  double ssr = std::numeric_limits<double>::infinity();
};

// Exact min ||y - S_C z||^2 with 0 <= z_c <= cap_c for small |C|: every
// variable is at its lower bound, free, or at its upper bound; trying all
// 3^|C| patterns and keeping the best feasible candidate covers the optimum.
inline BoxFit box_least_squares_by_enumeration(
    const Matrix& spectra, const Vector& y,
    const std::vector<std::size_t>& columns, const Vector& caps) {
  const std::size_t k = columns.size();
  BoxFit best;
  best.coefficients = Vector::Zero(static_cast<Eigen::Index>(k));
  best.ssr = y.squaredNorm();

  std::size_t patterns = 1;
  for (std::size_t i = 0; i < k; ++i) patterns *= 3;

  std::vector<int> state(k);
  for (std::size_t pattern = 0; pattern < patterns; ++pattern) {
    std::size_t code = pattern;
    for (std::size_t i = 0; i < k; ++i) {
      state[i] = static_cast<int>(code % 3);  // 0 = lower, 1 = free, 2 = upper
      code /= 3;
    }
    Vector target = y;
    std::vector<std::size_t> free_slots;
    bool has_upper_cap = true;
    for (std::size_t i = 0; i < k; ++i) {
      if (state[i] == 2) {
        const double cap = caps.size() > 0
                               ? caps[static_cast<Eigen::Index>(columns[i])]
                               : std::numeric_limits<double>::infinity();
        if (std::isinf(cap)) {
          has_upper_cap = false;
          break;
        }
        target -= cap * spectra.col(static_cast<Eigen::Index>(columns[i]));
      } else if (state[i] == 1) {
        free_slots.push_back(i);
      }
    }
    if (!has_upper_cap) continue;

    Vector z = Vector::Zero(static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i) {
      if (state[i] == 2) {
        z[static_cast<Eigen::Index>(i)] =
            caps[static_cast<Eigen::Index>(columns[i])];
      }
    }
    if (!free_slots.empty()) {
      Matrix sub(y.size(), static_cast<Eigen::Index>(free_slots.size()));
      for (std::size_t i = 0; i < free_slots.size(); ++i) {
        sub.col(static_cast<Eigen::Index>(i)) =
            spectra.col(static_cast<Eigen::Index>(columns[free_slots[i]]));
      }
      const Vector solved = sub.colPivHouseholderQr().solve(target);
      bool feasible = true;
      for (std::size_t i = 0; i < free_slots.size(); ++i) {
        const double cap =
            caps.size() > 0
                ? caps[static_cast<Eigen::Index>(columns[free_slots[i]])]
                : std::numeric_limits<double>::infinity();
        const double value = solved[static_cast<Eigen::Index>(i)];
        if (value < -1e-12 || value > cap + 1e-12) {
          feasible = false;
          break;
        }
      }
      if (!feasible) continue;
      for (std::size_t i = 0; i < free_slots.size(); ++i) {
        z[static_cast<Eigen::Index>(free_slots[i])] =
            std::max(0.0, solved[static_cast<Eigen::Index>(i)]);
      }
    }
    Vector residual = y;
    for (std::size_t i = 0; i < k; ++i) {
      residual -= z[static_cast<Eigen::Index>(i)] *
                  spectra.col(static_cast<Eigen::Index>(columns[i]));
    }
    const double ssr = residual.squaredNorm();
    if (ssr < best.ssr) {
      best.ssr = ssr;
      best.coefficients = z;
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Cardinality-constrained optimum by support enumeration

struct SubsetFit {
  std::vector<std::size_t> support;
  double ssr = std::numeric_limits<double>::infinity();
};

inline void enumerate_supports(std::size_t n, std::size_t max_size,
                               std::vector<std::size_t>& current,
                               std::size_t next,
                               const std::function<void(const std::vector<std::size_t>&)>& visit) {
  visit(current);
  if (current.size() == max_size) return;
  for (std::size_t i = next; i < n; ++i) {
    current.push_back(i);
    enumerate_supports(n, max_size, current, i + 1, visit);
    current.pop_back();
  }
}

// Best SSR over every support of size <= p with box-constrained coefficients.
inline SubsetFit best_subset_by_enumeration(const Matrix& spectra,
                                            const Vector& y, std::size_t p,
                                            const Vector& caps) {
  SubsetFit best;
  best.ssr = y.squaredNorm();
  std::vector<std::size_t> current;
  enumerate_supports(
      static_cast<std::size_t>(spectra.cols()), p, current, 0,
      [&](const std::vector<std::size_t>& support) {
        const auto fit =
            box_least_squares_by_enumeration(spectra, y, support, caps);
        if (fit.ssr < best.ssr) {
          best.ssr = fit.ssr;
          best.support = support;
        }
      });
  return best;
}

}  // namespace oracles
