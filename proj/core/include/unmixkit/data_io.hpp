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

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unmixkit/metrics.hpp"
#include "unmixkit/types.hpp"

namespace unmixkit::io {

/// One spectrum as it appears in a library file.
struct LibraryFileRecord {
  std::string name;
  std::string category;
  std::vector<double> wavelengths;
  std::vector<double> reflectances;
};

/// Library CSV layout: a header row, then a reserved "__wavelengths__" row
/// holding the band grid, then one row per spectrum:
///   name,category,b1,...,bM
///   __wavelengths__,,0.4,...,2.5
///   alunite_a,sulfate,0.31,...,0.08
/// UTF-8, comma-delimited, "." decimal separator. Values are written in
/// shortest round-trip form, so save followed by load is bit-exact.
SpectralLibrary load_library(const std::filesystem::path& path);
void save_library(const SpectralLibrary& library,
                  const std::filesystem::path& path);

enum class Interleave { BandSequential, BandInterleavedByLine, BandInterleavedByPixel };
enum class CubeDataType { Float32 = 4, Float64 = 5 };
enum class ByteOrder { LittleEndian = 0, BigEndian = 1 };

const char* to_string(Interleave interleave) noexcept;

/// Plain-text cube header: one "key = value" line per key. Required keys:
/// samples, lines, bands, interleave (bsq|bil|bip), data type (4|5),
/// byte order (0|1), wavelength = {comma list}.
struct CubeHeader {
  std::size_t samples = 0;
  std::size_t lines = 0;
  std::size_t bands = 0;
  Interleave interleave = Interleave::BandSequential;
  CubeDataType data_type = CubeDataType::Float64;
  ByteOrder byte_order = ByteOrder::LittleEndian;
  std::vector<double> wavelengths;
};

CubeHeader parse_cube_header(const std::filesystem::path& header_path);

/// An in-memory hyperspectral image: bands x (lines*samples), pixel index
/// line * samples + sample.
struct Cube {
  std::size_t samples = 0;
  std::size_t lines = 0;
  Vector wavelengths;
  Matrix data;

  std::size_t bands() const noexcept {
    return static_cast<std::size_t>(data.rows());
  }
  std::size_t pixel_count() const noexcept {
    return static_cast<std::size_t>(data.cols());
  }
  PixelSpectrum pixel(std::size_t line, std::size_t sample) const;
  std::vector<PixelSpectrum> pixels() const;
};

/// Reads the header, checks that the data file size matches
/// samples*lines*bands*bytes-per-value exactly, and de-interleaves. All
/// three interleaves of the same image load to identical pixel vectors.
Cube load_cube(const std::filesystem::path& header_path,
               const std::filesystem::path& data_path);

void save_cube(const Cube& cube, const std::filesystem::path& header_path,
               const std::filesystem::path& data_path,
               Interleave interleave = Interleave::BandSequential,
               CubeDataType data_type = CubeDataType::Float64,
               ByteOrder byte_order = ByteOrder::LittleEndian);

/// A generated verification scene: mixed pixels with known sparse ground
/// truth at a chosen SNR (infinity for noiseless).
struct SynthScene {
  std::vector<PixelSpectrum> pixels;
  std::vector<AbundanceMap> ground_truth;
  double snr_db = 0.0;
  std::uint64_t seed = 0;
};

/// Per pixel: draw `sparsity` distinct library indices and abundances
/// uniform in [abundance_range.first, abundance_range.second], form
/// y = S a, and add zero-mean Gaussian noise scaled so that
/// 10 log10(||S a||^2 / ||noise||^2) equals snr_db exactly. Deterministic
/// given the seed.
SynthScene generate_scene(const SpectralLibrary& library,
                          std::size_t n_pixels, std::size_t sparsity,
                          std::pair<double, double> abundance_range,
                          double snr_db, std::uint64_t seed);

/// A seeded library of smooth synthetic mineral-like spectra (a low
/// baseline plus a few Gaussian absorption-style bumps) over a linear band
/// grid, with categories cycling through a fixed mineral-group list.
SpectralLibrary synthetic_library(std::size_t n_spectra, std::size_t n_bands,
                                  std::uint64_t seed);

/// The per-pixel slice of a results document.
struct PixelResult {
  std::string id;
  std::string solver;
  AbundanceMap coefficients;
  double rmse = 0.0;
  ErrorUnits units = ErrorUnits::Reflectance;
  double runtime_seconds = 0.0;

  static PixelResult from_solution(std::string id, std::string solver,
                                   const AbundanceSolution& solution);
};

struct ResultsDocument {
  std::string library;
  std::vector<PixelResult> pixels;
  std::optional<metrics::EvalReport> report;
};

/// JSON round trip for solver outputs; values survive save/load exactly.
void save_results(const std::filesystem::path& path,
                  const ResultsDocument& document);
ResultsDocument load_results(const std::filesystem::path& path);
std::string results_to_json(const ResultsDocument& document);
ResultsDocument results_from_json(const std::string& text);

}  // namespace unmixkit::io
