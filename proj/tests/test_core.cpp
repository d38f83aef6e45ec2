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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "support/gen.hpp"
#include "unmixkit/core.hpp"

using namespace unmixkit;

namespace {

// Naive dense multiply, kept independent of the residual implementation.
Vector naive_residual(const Matrix& s, const Vector& y, const AbundanceMap& a) {
  Vector r = y;
  for (Eigen::Index row = 0; row < s.rows(); ++row) {
    for (const auto& [index, value] : a) {
      r[row] -= s(row, static_cast<Eigen::Index>(index)) * value;
    }
  }
  return r;
}

}  // namespace

TEST_CASE("residual on exact and empty models") {
  auto lib = gen::tiny_library(Matrix::Identity(2, 2));
  auto pixel = gen::pixel_of(lib, {0.3, 0.7});

  auto exact = residual(lib, pixel, {{0, 0.3}, {1, 0.7}});
  CHECK(exact[0] == doctest::Approx(0.0));
  CHECK(exact[1] == doctest::Approx(0.0));

  auto empty = residual(lib, pixel, {});
  CHECK(empty[0] == doctest::Approx(0.3));
  CHECK(empty[1] == doctest::Approx(0.7));
}

TEST_CASE("residual hand example matches matrix-multiply oracle") {
  Matrix s(2, 2);
  s.col(0) << 1.0, 0.0;
  s.col(1) << 1.0, 1.0;
  auto lib = gen::tiny_library(s);
  auto pixel = gen::pixel_of(lib, {1.0, 0.5});
  AbundanceMap coeffs{{1, 0.5}};

  auto r = residual(lib, pixel, coeffs);
  CHECK(r[0] == doctest::Approx(0.5));
  CHECK(r[1] == doctest::Approx(0.0));

  auto expected = naive_residual(s, pixel.values, coeffs);
  CHECK((r - expected).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("residual errors") {
  auto lib = gen::tiny_library(Matrix::Identity(2, 2));
  Vector short_values(1);
  short_values << 0.5;
  PixelSpectrum short_pixel(short_values, Vector());
  CHECK_THROWS_AS(residual(lib, short_pixel, {}), DimensionMismatch);
  auto pixel = gen::pixel_of(lib, {0.3, 0.7});
  CHECK_THROWS_AS(residual(lib, pixel, {{5, 1.0}}), IndexOutOfRange);
}

TEST_CASE("rmse examples and errors") {
  Vector zero(3);
  zero << 0.0, 0.0, 0.0;
  CHECK(rmse(zero) == 0.0);

  Vector two(2);
  two << 3.0, 4.0;
  CHECK(rmse(two) == doctest::Approx(std::sqrt(12.5)).epsilon(1e-12));

  Vector one(1);
  one << 1.0;
  CHECK(rmse(one) == 1.0);

  CHECK_THROWS_AS(rmse(Vector()), EmptyInput);
}

TEST_CASE("rmse properties: naive oracle, permutation, scaling") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> value(-2.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    Vector r(8);
    for (Eigen::Index i = 0; i < r.size(); ++i) r[i] = value(rng);

    double naive = 0.0;
    for (Eigen::Index i = 0; i < r.size(); ++i) naive += r[i] * r[i];
    naive = std::sqrt(naive / static_cast<double>(r.size()));
    CHECK(rmse(r) == doctest::Approx(naive).epsilon(1e-12));

    Vector shuffled = r;
    std::shuffle(shuffled.data(), shuffled.data() + shuffled.size(), rng);
    CHECK(rmse(shuffled) == doctest::Approx(rmse(r)).epsilon(1e-12));
  }
}

TEST_CASE("residual scales linearly with (c*y, c*a)") {
  std::mt19937_64 rng(12);
  auto lib = gen::random_library(6, 4, rng);
  auto pixel = gen::random_pixel(lib, rng);
  AbundanceMap coeffs{{0, 0.4}, {2, 1.1}};
  const double c = 2.75;
  AbundanceMap scaled_coeffs;
  for (auto& [i, v] : coeffs) scaled_coeffs[i] = c * v;
  PixelSpectrum scaled_pixel(c * pixel.values, pixel.wavelengths);

  auto base = residual(lib, pixel, coeffs);
  auto scaled = residual(lib, scaled_pixel, scaled_coeffs);
  CHECK((scaled - c * base).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(rmse(base) >= 0.0);
}

TEST_CASE("exact reconstruction gives rmse below 1e-12") {
  std::mt19937_64 rng(13);
  auto lib = gen::random_library(10, 5, rng);
  AbundanceMap coeffs{{1, 0.3}, {3, 0.9}};
  Vector y = 0.3 * lib.spectra().col(1) + 0.9 * lib.spectra().col(3);
  PixelSpectrum pixel(y, lib.band_wavelengths());
  CHECK(rmse(residual(lib, pixel, coeffs)) < 1e-12);
}

TEST_CASE("align_to_bands interpolates and preserves metadata") {
  Matrix s(2, 1);
  s << 0.2, 0.4;
  Vector grid(2);
  grid << 1.0, 2.0;
  SpectralLibrary lib(grid, s, {"a"}, {"cat"});

  Vector mid(1);
  mid << 1.5;
  auto aligned = align_to_bands(lib, mid);
  CHECK(aligned.spectra()(0, 0) == doctest::Approx(0.3));
  CHECK(aligned.names() == lib.names());
  CHECK(aligned.categories() == lib.categories());
}

TEST_CASE("align_to_bands to own grid is bitwise identity") {
  std::mt19937_64 rng(14);
  auto lib = gen::random_library(9, 3, rng);
  auto aligned = align_to_bands(lib, lib.band_wavelengths());
  CHECK(aligned.spectra() == lib.spectra());
}

TEST_CASE("align_to_bands piecewise-linear example") {
  Matrix s(3, 1);
  s << 0.0, 1.0, 0.0;
  Vector grid(3);
  grid << 1.0, 2.0, 3.0;
  SpectralLibrary lib(grid, s, {"a"}, {"cat"});

  Vector targets(2);
  targets << 1.25, 2.75;
  auto aligned = align_to_bands(lib, targets);
  CHECK(aligned.spectra()(0, 0) == doctest::Approx(0.25));
  CHECK(aligned.spectra()(1, 0) == doctest::Approx(0.25));

  // Same numbers from an explicit piecewise-linear oracle.
  auto interp = [&](double x) {
    if (x <= 2.0) return (x - 1.0) * 1.0;
    return 1.0 - (x - 2.0) * 1.0;
  };
  CHECK(aligned.spectra()(0, 0) == doctest::Approx(interp(1.25)));
  CHECK(aligned.spectra()(1, 0) == doctest::Approx(interp(2.75)));
}

TEST_CASE("align_to_bands rejects out-of-range targets") {
  std::mt19937_64 rng(15);
  auto lib = gen::random_library(5, 2, rng);
  Vector outside(1);
  outside << lib.band_wavelengths()[4] + 1.0;
  CHECK_THROWS_AS(align_to_bands(lib, outside), OutOfRange);
}

TEST_CASE("library construction enforces invariants") {
  Vector grid(2);
  grid << 1.0, 2.0;
  Matrix good = Matrix::Identity(2, 2);

  CHECK_THROWS_AS(SpectralLibrary(grid, good, {"a", "a"}, {"c", "c"}),
                  DuplicateName);
  CHECK_THROWS_AS(SpectralLibrary(grid, good, {"a", "b"}, {"c", ""}),
                  InvalidArgument);

  Vector bad_grid(2);
  bad_grid << 2.0, 1.0;
  CHECK_THROWS_AS(SpectralLibrary(bad_grid, good, {"a", "b"}, {"c", "c"}),
                  InvalidArgument);

  Matrix negative = good;
  negative(0, 0) = -0.25;
  CHECK_THROWS_AS(SpectralLibrary(grid, negative, {"a", "b"}, {"c", "c"}),
                  InvalidArgument);
}

TEST_CASE("solution selected() lists exactly the stored support") {
  AbundanceSolution solution;
  solution.coefficients = {{4, 0.2}, {1, 0.9}};
  CHECK(solution.selected() == std::vector<std::size_t>{1, 4});
}
