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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "support/gen.hpp"
#include "unmixkit/data_io.hpp"

using namespace unmixkit;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  static const fs::path dir = [] {
    auto path = fs::temp_directory_path() / "unmixkit_io_tests";
    fs::create_directories(path);
    return path;
  }();
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  out << text;
}

io::Cube small_cube(std::uint64_t seed, std::size_t lines = 2,
                    std::size_t samples = 2, std::size_t bands = 3) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> value(0.0, 1.0);
  io::Cube cube;
  cube.lines = lines;
  cube.samples = samples;
  cube.wavelengths.resize(static_cast<Eigen::Index>(bands));
  for (std::size_t b = 0; b < bands; ++b) {
    cube.wavelengths[static_cast<Eigen::Index>(b)] = 0.5 + 0.1 * b;
  }
  cube.data.resize(static_cast<Eigen::Index>(bands),
                   static_cast<Eigen::Index>(lines * samples));
  for (Eigen::Index i = 0; i < cube.data.size(); ++i) {
    cube.data.data()[i] = value(rng);
  }
  return cube;
}

}  // namespace

TEST_CASE("library CSV round trip is bit-exact") {
  auto lib = io::synthetic_library(5, 12, 31);
  const auto path = scratch_dir() / "roundtrip.csv";
  io::save_library(lib, path);
  auto loaded = io::load_library(path);
  CHECK(loaded.spectra() == lib.spectra());
  CHECK(loaded.band_wavelengths() == lib.band_wavelengths());
  CHECK(loaded.names() == lib.names());
  CHECK(loaded.categories() == lib.categories());
}

TEST_CASE("well-formed two-spectrum file loads with N=2, M=3") {
  const auto path = scratch_dir() / "small.csv";
  write_text(path,
             "name,category,b1,b2,b3\n"
             "__wavelengths__,,0.4,0.5,0.6\n"
             "alpha,sulfate,0.1,0.2,0.3\n"
             "beta,clay,0.3,0.2,0.1\n");
  auto lib = io::load_library(path);
  CHECK(lib.spectrum_count() == 2);
  CHECK(lib.band_count() == 3);
  CHECK(lib.names()[0] == "alpha");
  CHECK(lib.categories()[1] == "clay");
  CHECK(lib.spectra()(2, 0) == 0.3);
}

TEST_CASE("library loader rejections carry locations") {
  const auto negative = scratch_dir() / "negative.csv";
  write_text(negative,
             "name,category,b1,b2\n"
             "__wavelengths__,,0.4,0.5\n"
             "alpha,sulfate,0.1,-0.1\n");
  CHECK_THROWS_AS(io::load_library(negative), NegativeReflectance);
  try {
    io::load_library(negative);
  } catch (const NegativeReflectance& error) {
    CHECK(error.line() == 3);
  }

  const auto garbled = scratch_dir() / "garbled.csv";
  write_text(garbled,
             "name,category,b1,b2\n"
             "__wavelengths__,,0.4,0.5\n"
             "alpha,sulfate,0.1,zebra\n");
  try {
    io::load_library(garbled);
    CHECK(false);
  } catch (const ParseError& error) {
    CHECK(error.line() == 3);
    CHECK(error.column() == 4);
  }

  const auto duplicate = scratch_dir() / "duplicate.csv";
  write_text(duplicate,
             "name,category,b1,b2\n"
             "__wavelengths__,,0.4,0.5\n"
             "alpha,sulfate,0.1,0.2\n"
             "alpha,clay,0.3,0.4\n");
  CHECK_THROWS_AS(io::load_library(duplicate), DuplicateName);

  const auto ragged = scratch_dir() / "ragged.csv";
  write_text(ragged,
             "name,category,b1,b2\n"
             "__wavelengths__,,0.4,0.5\n"
             "alpha,sulfate,0.1\n");
  CHECK_THROWS_AS(io::load_library(ragged), ParseError);

  CHECK_THROWS_AS(io::load_library(scratch_dir() / "missing.csv"), IoError);
}

TEST_CASE("cube round trips identically across the three interleaves") {
  const auto cube = small_cube(32);
  io::Cube loaded[3];
  const io::Interleave kinds[3] = {io::Interleave::BandSequential,
                                   io::Interleave::BandInterleavedByLine,
                                   io::Interleave::BandInterleavedByPixel};
  for (int k = 0; k < 3; ++k) {
    const auto header = scratch_dir() / ("cube" + std::to_string(k) + ".hdr");
    const auto data = scratch_dir() / ("cube" + std::to_string(k) + ".dat");
    io::save_cube(cube, header, data, kinds[k]);
    loaded[k] = io::load_cube(header, data);
    CHECK(loaded[k].data == cube.data);
    CHECK(loaded[k].wavelengths == cube.wavelengths);
  }
  CHECK(loaded[0].data == loaded[1].data);
  CHECK(loaded[1].data == loaded[2].data);
}

TEST_CASE("float32 and big-endian cubes round trip") {
  auto cube = small_cube(33);
  // Make every value exactly float32-representable first.
  for (Eigen::Index i = 0; i < cube.data.size(); ++i) {
    cube.data.data()[i] = static_cast<double>(static_cast<float>(cube.data.data()[i]));
  }
  const auto header = scratch_dir() / "f32.hdr";
  const auto data = scratch_dir() / "f32.dat";
  io::save_cube(cube, header, data, io::Interleave::BandInterleavedByPixel,
                io::CubeDataType::Float32);
  auto loaded = io::load_cube(header, data);
  CHECK(loaded.data == cube.data);

  io::save_cube(cube, header, data, io::Interleave::BandSequential,
                io::CubeDataType::Float64, io::ByteOrder::BigEndian);
  auto swapped = io::load_cube(header, data);
  CHECK(swapped.data == cube.data);
}

TEST_CASE("single-pixel cube round trips") {
  auto cube = small_cube(34, 1, 1, 4);
  const auto header = scratch_dir() / "single.hdr";
  const auto data = scratch_dir() / "single.dat";
  io::save_cube(cube, header, data);
  auto loaded = io::load_cube(header, data);
  CHECK(loaded.pixel(0, 0).values == cube.pixel(0, 0).values);
  CHECK_THROWS_AS(loaded.pixel(0, 1), IndexOutOfRange);
}

TEST_CASE("cube loader rejects malformed inputs") {
  const auto cube = small_cube(35);
  const auto header = scratch_dir() / "bad.hdr";
  const auto data = scratch_dir() / "bad.dat";
  io::save_cube(cube, header, data);

  // Truncated data file.
  fs::resize_file(data, fs::file_size(data) - 8);
  CHECK_THROWS_AS(io::load_cube(header, data), SizeMismatch);
  io::save_cube(cube, header, data);

  // Unsupported data type.
  write_text(scratch_dir() / "dtype.hdr",
             "samples = 2\nlines = 2\nbands = 3\ninterleave = bsq\n"
             "data type = 2\nbyte order = 0\nwavelength = {0.5, 0.6, 0.7}\n");
  CHECK_THROWS_AS(io::load_cube(scratch_dir() / "dtype.hdr", data),
                  UnsupportedDataType);

  // Missing required key.
  write_text(scratch_dir() / "missing.hdr",
             "samples = 2\nlines = 2\ninterleave = bsq\n"
             "data type = 5\nbyte order = 0\nwavelength = {0.5, 0.6, 0.7}\n");
  CHECK_THROWS_AS(io::load_cube(scratch_dir() / "missing.hdr", data),
                  HeaderSyntax);

  // Wavelength count mismatch.
  write_text(scratch_dir() / "shortwl.hdr",
             "samples = 2\nlines = 2\nbands = 3\ninterleave = bsq\n"
             "data type = 5\nbyte order = 0\nwavelength = {0.5, 0.6}\n");
  CHECK_THROWS_AS(io::load_cube(scratch_dir() / "shortwl.hdr", data),
                  HeaderSyntax);

  // Syntax: line without '='.
  write_text(scratch_dir() / "noeq.hdr", "samples 2\n");
  CHECK_THROWS_AS(io::load_cube(scratch_dir() / "noeq.hdr", data),
                  HeaderSyntax);
}

TEST_CASE("header parser tolerates ENVI magic, case, and multi-line lists") {
  const auto path = scratch_dir() / "envi.hdr";
  write_text(path,
             "ENVI\n"
             "Samples = 2\n"
             "LINES = 1\n"
             "bands = 3\n"
             "interleave = bil\n"
             "data type = 4\n"
             "byte order = 1\n"
             "wavelength = {0.5,\n 0.6,\n 0.7}\n"
             "description = ignored\n");
  auto header = io::parse_cube_header(path);
  CHECK(header.samples == 2);
  CHECK(header.lines == 1);
  CHECK(header.interleave == io::Interleave::BandInterleavedByLine);
  CHECK(header.data_type == io::CubeDataType::Float32);
  CHECK(header.byte_order == io::ByteOrder::BigEndian);
  CHECK(header.wavelengths == std::vector<double>{0.5, 0.6, 0.7});
}

TEST_CASE("noiseless scenes reproduce S*a exactly and are seed-deterministic") {
  auto lib = io::synthetic_library(10, 30, 36);
  auto scene = io::generate_scene(lib, 5, 2, {0.2, 1.0},
                                  std::numeric_limits<double>::infinity(), 99);
  for (std::size_t p = 0; p < scene.pixels.size(); ++p) {
    Vector expected = Vector::Zero(30);
    for (const auto& [i, v] : scene.ground_truth[p]) {
      expected += v * lib.spectra().col(static_cast<Eigen::Index>(i));
    }
    CHECK((scene.pixels[p].values - expected).cwiseAbs().maxCoeff() == 0.0);
    CHECK(scene.ground_truth[p].size() == 2);
    for (const auto& [i, v] : scene.ground_truth[p]) {
      CHECK(v >= 0.2);
      CHECK(v <= 1.0);
    }
  }
  auto again = io::generate_scene(lib, 5, 2, {0.2, 1.0},
                                  std::numeric_limits<double>::infinity(), 99);
  for (std::size_t p = 0; p < 5; ++p) {
    CHECK(again.pixels[p].values == scene.pixels[p].values);
  }
}

TEST_CASE("noisy scenes hit the requested SNR") {
  auto lib = io::synthetic_library(20, 40, 37);
  auto scene = io::generate_scene(lib, 1000, 3, {0.2, 1.0}, 30.0, 5);
  double signal = 0.0;
  double noise = 0.0;
  for (std::size_t p = 0; p < scene.pixels.size(); ++p) {
    Vector clean = Vector::Zero(40);
    for (const auto& [i, v] : scene.ground_truth[p]) {
      clean += v * lib.spectra().col(static_cast<Eigen::Index>(i));
    }
    signal += clean.squaredNorm();
    noise += (scene.pixels[p].values - clean).squaredNorm();
  }
  const double snr_db = 10.0 * std::log10(signal / noise);
  CHECK(std::abs(snr_db - 30.0) < 0.5);
}

TEST_CASE("generate_scene validates sparsity") {
  auto lib = io::synthetic_library(4, 10, 38);
  CHECK_THROWS_AS(io::generate_scene(lib, 1, 5, {0.2, 1.0}, 30.0, 1),
                  InvalidSparsity);
  CHECK_THROWS_AS(io::generate_scene(lib, 1, 0, {0.2, 1.0}, 30.0, 1),
                  InvalidSparsity);
  CHECK_THROWS_AS(io::generate_scene(lib, 1, 2, {0.0, 1.0}, 30.0, 1),
                  InvalidArgument);
}

TEST_CASE("results JSON round trips exactly") {
  io::ResultsDocument document;
  document.library = "lib.csv";
  io::PixelResult pixel;
  pixel.id = "0:1";
  pixel.solver = "nnls";
  pixel.coefficients = {{3, 0.123456789012345678}, {17, 1.0 / 3.0}};
  pixel.rmse = 0.07071067811865475;
  pixel.units = ErrorUnits::Whitened;
  pixel.runtime_seconds = 0.001;
  document.pixels.push_back(pixel);

  metrics::EvalReport report;
  report.k = 5;
  metrics::EvalRow row;
  row.technique = "nnls";
  row.mean_rmse = 1.0 / 7.0;
  row.rmse_units = ErrorUnits::Reflectance;
  row.mean_runtime_seconds = 0.25;
  row.detection_pct = 0.95;
  row.map_at_k = 2.0 / 3.0;
  row.failures = 1;
  report.rows.push_back(row);
  document.report = report;

  const auto path = scratch_dir() / "results.json";
  io::save_results(path, document);
  auto loaded = io::load_results(path);
  CHECK(loaded.library == document.library);
  REQUIRE(loaded.pixels.size() == 1);
  CHECK(loaded.pixels[0].id == "0:1");
  CHECK(loaded.pixels[0].solver == "nnls");
  CHECK(loaded.pixels[0].coefficients == pixel.coefficients);
  CHECK(loaded.pixels[0].rmse == pixel.rmse);
  CHECK(loaded.pixels[0].units == ErrorUnits::Whitened);
  CHECK(loaded.pixels[0].runtime_seconds == pixel.runtime_seconds);
  REQUIRE(loaded.report.has_value());
  CHECK(loaded.report->k == 5);
  CHECK(loaded.report->rows[0].mean_rmse == row.mean_rmse);
  CHECK(loaded.report->rows[0].map_at_k == row.map_at_k);
  CHECK(loaded.report->rows[0].failures == 1);
}

TEST_CASE("empty results document stays valid JSON") {
  io::ResultsDocument document;
  document.library = "lib.csv";
  const auto path = scratch_dir() / "empty.json";
  io::save_results(path, document);
  auto loaded = io::load_results(path);
  CHECK(loaded.pixels.empty());
  CHECK_FALSE(loaded.report.has_value());
}

TEST_CASE("save_results to an unwritable path raises IoError") {
  io::ResultsDocument document;
  CHECK_THROWS_AS(
      io::save_results("/nonexistent-dir/sub/results.json", document), IoError);
}

TEST_CASE("synthetic library is deterministic and valid") {
  auto first = io::synthetic_library(15, 50, 4);
  auto second = io::synthetic_library(15, 50, 4);
  CHECK(first.spectra() == second.spectra());
  CHECK(first.spectra().minCoeff() >= 0.0);
  CHECK(first.names().size() == 15);
}
