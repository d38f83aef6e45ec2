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

#include "unmixkit/data_io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include <json.hpp>

#include "unmixkit/detail/text_io.hpp"

namespace unmixkit::io {

namespace {

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t begin = 0;
  while (true) {
    const std::size_t comma = line.find(',', begin);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(begin));
      break;
    }
    fields.push_back(line.substr(begin, comma - begin));
    begin = comma + 1;
  }
  return fields;
}

constexpr const char* kWavelengthsRowName = "__wavelengths__";

}  // namespace

SpectralLibrary load_library(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open library file: " + path.string());

  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("library file is empty", 1, 1);
  }
  const auto header = split_csv(strip_cr(line));
  if (header.size() < 3 || header[0] != "name" || header[1] != "category") {
    throw ParseError("library header must start with name,category", 1, 1);
  }
  const std::size_t bands = header.size() - 2;

  std::size_t line_number = 1;
  std::vector<double> wavelengths;
  std::vector<LibraryFileRecord> records;
  while (std::getline(in, line)) {
    ++line_number;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != bands + 2) {
      throw ParseError("expected " + std::to_string(bands + 2) + " fields, got " +
                           std::to_string(fields.size()),
                       line_number, std::min(fields.size(), bands + 2) + 1);
    }
    std::vector<double> values(bands);
    for (std::size_t b = 0; b < bands; ++b) {
      if (!detail::parse_double(fields[b + 2], values[b])) {
        throw ParseError("non-numeric value \"" + fields[b + 2] + "\"",
                         line_number, b + 3);
      }
    }
    if (wavelengths.empty() && records.empty()) {
      if (fields[0] != kWavelengthsRowName) {
        throw ParseError("first data row must be the reserved " +
                             std::string(kWavelengthsRowName) + " row",
                         line_number, 1);
      }
      for (std::size_t b = 1; b < bands; ++b) {
        if (!(values[b] > values[b - 1])) {
          throw ParseError("wavelengths must be strictly increasing",
                           line_number, b + 3);
        }
      }
      wavelengths = std::move(values);
      continue;
    }
    for (std::size_t b = 0; b < bands; ++b) {
      if (values[b] < 0.0) {
        throw NegativeReflectance("negative reflectance " + fields[b + 2] +
                                      " in spectrum \"" + fields[0] + "\"",
                                  line_number);
      }
      if (!std::isfinite(values[b])) {
        throw ParseError("non-finite reflectance", line_number, b + 3);
      }
    }
    LibraryFileRecord record;
    record.name = fields[0];
    record.category = fields[1];
    record.wavelengths = wavelengths;
    record.reflectances = std::move(values);
    records.push_back(std::move(record));
  }
  if (wavelengths.empty()) {
    throw ParseError("missing " + std::string(kWavelengthsRowName) + " row", 2, 1);
  }
  if (records.empty()) {
    throw ParseError("library file contains no spectra", line_number, 1);
  }

  Vector grid(static_cast<Eigen::Index>(bands));
  for (std::size_t b = 0; b < bands; ++b) grid[static_cast<Eigen::Index>(b)] = wavelengths[b];
  Matrix spectra(static_cast<Eigen::Index>(bands),
                 static_cast<Eigen::Index>(records.size()));
  std::vector<std::string> names;
  std::vector<std::string> categories;
  names.reserve(records.size());
  categories.reserve(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    for (std::size_t b = 0; b < bands; ++b) {
      spectra(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(i)) =
          records[i].reflectances[b];
    }
    names.push_back(records[i].name);
    categories.push_back(records[i].category);
  }
  return SpectralLibrary(std::move(grid), std::move(spectra), std::move(names),
                         std::move(categories));
}

void save_library(const SpectralLibrary& library,
                  const std::filesystem::path& path) {
  for (const auto& name : library.names()) {
    if (name.find(',') != std::string::npos ||
        name.find('\n') != std::string::npos || name == kWavelengthsRowName) {
      throw InvalidArgument("spectrum name not representable in CSV: " + name);
    }
  }
  for (const auto& category : library.categories()) {
    if (category.find(',') != std::string::npos ||
        category.find('\n') != std::string::npos) {
      throw InvalidArgument("category not representable in CSV: " + category);
    }
  }

  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open library file for writing: " + path.string());
  const std::size_t bands = library.band_count();
  out << "name,category";
  for (std::size_t b = 0; b < bands; ++b) out << ",b" << (b + 1);
  out << '\n';
  out << kWavelengthsRowName << ',';
  for (std::size_t b = 0; b < bands; ++b) {
    out << ',' << detail::format_double(
                      library.band_wavelengths()[static_cast<Eigen::Index>(b)]);
  }
  out << '\n';
  for (std::size_t i = 0; i < library.spectrum_count(); ++i) {
    out << library.names()[i] << ',' << library.categories()[i];
    for (std::size_t b = 0; b < bands; ++b) {
      out << ','
          << detail::format_double(library.spectra()(
                 static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(i)));
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing library file: " + path.string());
}

const char* to_string(Interleave interleave) noexcept {
  switch (interleave) {
    case Interleave::BandInterleavedByLine:
      return "bil";
    case Interleave::BandInterleavedByPixel:
      return "bip";
    case Interleave::BandSequential:
    default:
      return "bsq";
  }
}

namespace {

std::string trim(std::string text) {
  const auto begin = text.find_first_not_of(" \t");
  if (begin == std::string::npos) return {};
  const auto end = text.find_last_not_of(" \t");
  return text.substr(begin, end - begin + 1);
}

std::size_t parse_count(const std::string& value, const std::string& key) {
  std::size_t parsed = 0;
  const auto result =
      std::from_chars(value.data(), value.data() + value.size(), parsed);
  if (result.ec != std::errc() || result.ptr != value.data() + value.size()) {
    throw HeaderSyntax("header key \"" + key + "\" needs an integer, got \"" +
                       value + "\"");
  }
  return parsed;
}

}  // namespace

CubeHeader parse_cube_header(const std::filesystem::path& header_path) {
  std::ifstream in(header_path);
  if (!in) throw IoError("cannot open cube header: " + header_path.string());

  std::map<std::string, std::string> entries;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (first && trim(line) == "ENVI") {
      first = false;
      continue;
    }
    first = false;
    if (trim(line).empty()) continue;
    const auto equals = line.find('=');
    if (equals == std::string::npos) {
      throw HeaderSyntax("header line without '=': \"" + line + "\"");
    }
    std::string key = trim(line.substr(0, equals));
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    std::string value = trim(line.substr(equals + 1));
    // Braced values may continue over several lines.
    if (!value.empty() && value.front() == '{') {
      while (value.find('}') == std::string::npos && std::getline(in, line)) {
        value += ' ' + trim(strip_cr(line));
      }
      if (value.find('}') == std::string::npos) {
        throw HeaderSyntax("unterminated { list for key \"" + key + "\"");
      }
    }
    entries[key] = value;
  }

  auto required = [&entries](const std::string& key) -> const std::string& {
    const auto found = entries.find(key);
    if (found == entries.end()) {
      throw HeaderSyntax("missing required header key \"" + key + "\"");
    }
    return found->second;
  };

  CubeHeader header;
  header.samples = parse_count(required("samples"), "samples");
  header.lines = parse_count(required("lines"), "lines");
  header.bands = parse_count(required("bands"), "bands");

  const std::string interleave = required("interleave");
  if (interleave == "bsq") {
    header.interleave = Interleave::BandSequential;
  } else if (interleave == "bil") {
    header.interleave = Interleave::BandInterleavedByLine;
  } else if (interleave == "bip") {
    header.interleave = Interleave::BandInterleavedByPixel;
  } else {
    throw HeaderSyntax("interleave must be bsq|bil|bip, got \"" + interleave + "\"");
  }

  const std::size_t data_type = parse_count(required("data type"), "data type");
  if (data_type == 4) {
    header.data_type = CubeDataType::Float32;
  } else if (data_type == 5) {
    header.data_type = CubeDataType::Float64;
  } else {
    throw UnsupportedDataType("data type " + std::to_string(data_type) +
                              " not supported (need 4 or 5)");
  }

  const std::size_t byte_order = parse_count(required("byte order"), "byte order");
  if (byte_order > 1) {
    throw HeaderSyntax("byte order must be 0 or 1");
  }
  header.byte_order = static_cast<ByteOrder>(byte_order);

  std::string list = required("wavelength");
  if (list.size() < 2 || list.front() != '{' || list.back() != '}') {
    throw HeaderSyntax("wavelength value must be a {comma list}");
  }
  list = list.substr(1, list.size() - 2);
  std::stringstream stream(list);
  std::string item;
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    double value = 0.0;
    if (!detail::parse_double(item, value)) {
      throw HeaderSyntax("non-numeric wavelength \"" + item + "\"");
    }
    header.wavelengths.push_back(value);
  }
  if (header.wavelengths.size() != header.bands) {
    throw HeaderSyntax("wavelength list length " +
                       std::to_string(header.wavelengths.size()) +
                       " does not match bands = " + std::to_string(header.bands));
  }
  if (header.samples == 0 || header.lines == 0 || header.bands == 0) {
    throw HeaderSyntax("samples, lines, and bands must all be positive");
  }
  return header;
}

PixelSpectrum Cube::pixel(std::size_t line, std::size_t sample) const {
  if (line >= lines || sample >= samples) {
    throw IndexOutOfRange("pixel (" + std::to_string(line) + ":" +
                          std::to_string(sample) + ") outside cube " +
                          std::to_string(lines) + "x" + std::to_string(samples));
  }
  return PixelSpectrum(data.col(static_cast<Eigen::Index>(line * samples + sample)),
                       wavelengths);
}

std::vector<PixelSpectrum> Cube::pixels() const {
  std::vector<PixelSpectrum> all;
  all.reserve(pixel_count());
  for (std::size_t p = 0; p < pixel_count(); ++p) {
    all.emplace_back(data.col(static_cast<Eigen::Index>(p)), wavelengths);
  }
  return all;
}

namespace {

bool needs_swap(ByteOrder order) {
  const bool file_little = order == ByteOrder::LittleEndian;
  const bool host_little = std::endian::native == std::endian::little;
  return file_little != host_little;
}

template <typename Word>
void swap_words(std::vector<Word>& words) {
  for (auto& word : words) {
    auto* bytes = reinterpret_cast<unsigned char*>(&word);
    std::reverse(bytes, bytes + sizeof(Word));
  }
}

// (band, pixel) -> flat element offset for the given layout.
std::size_t element_offset(Interleave interleave, std::size_t band,
                           std::size_t line, std::size_t sample,
                           std::size_t bands, std::size_t lines,
                           std::size_t samples) {
  switch (interleave) {
    case Interleave::BandInterleavedByLine:
      return (line * bands + band) * samples + sample;
    case Interleave::BandInterleavedByPixel:
      return (line * samples + sample) * bands + band;
    case Interleave::BandSequential:
    default:
      return (band * lines + line) * samples + sample;
  }
}

}  // namespace

Cube load_cube(const std::filesystem::path& header_path,
               const std::filesystem::path& data_path) {
  const CubeHeader header = parse_cube_header(header_path);
  const std::size_t values = header.samples * header.lines * header.bands;
  const std::size_t word_size =
      header.data_type == CubeDataType::Float32 ? sizeof(float) : sizeof(double);

  std::error_code ec;
  const auto file_size = std::filesystem::file_size(data_path, ec);
  if (ec) throw IoError("cannot stat cube data file: " + data_path.string());
  if (file_size != values * word_size) {
    throw SizeMismatch("cube data file is " + std::to_string(file_size) +
                       " bytes; header implies " +
                       std::to_string(values * word_size));
  }

  std::ifstream in(data_path, std::ios::binary);
  if (!in) throw IoError("cannot open cube data file: " + data_path.string());

  std::vector<double> raw(values);
  if (header.data_type == CubeDataType::Float32) {
    std::vector<float> words(values);
    in.read(reinterpret_cast<char*>(words.data()),
            static_cast<std::streamsize>(values * sizeof(float)));
    if (!in) throw IoError("short read from cube data file");
    if (needs_swap(header.byte_order)) swap_words(words);
    std::copy(words.begin(), words.end(), raw.begin());
  } else {
    in.read(reinterpret_cast<char*>(raw.data()),
            static_cast<std::streamsize>(values * sizeof(double)));
    if (!in) throw IoError("short read from cube data file");
    if (needs_swap(header.byte_order)) swap_words(raw);
  }

  Cube cube;
  cube.samples = header.samples;
  cube.lines = header.lines;
  cube.wavelengths.resize(static_cast<Eigen::Index>(header.bands));
  for (std::size_t b = 0; b < header.bands; ++b) {
    cube.wavelengths[static_cast<Eigen::Index>(b)] = header.wavelengths[b];
  }
  cube.data.resize(static_cast<Eigen::Index>(header.bands),
                   static_cast<Eigen::Index>(header.samples * header.lines));
  for (std::size_t line = 0; line < header.lines; ++line) {
    for (std::size_t sample = 0; sample < header.samples; ++sample) {
      const auto pixel = static_cast<Eigen::Index>(line * header.samples + sample);
      for (std::size_t band = 0; band < header.bands; ++band) {
        cube.data(static_cast<Eigen::Index>(band), pixel) =
            raw[element_offset(header.interleave, band, line, sample,
                               header.bands, header.lines, header.samples)];
      }
    }
  }
  return cube;
}

void save_cube(const Cube& cube, const std::filesystem::path& header_path,
               const std::filesystem::path& data_path, Interleave interleave,
               CubeDataType data_type, ByteOrder byte_order) {
  if (cube.pixel_count() != cube.samples * cube.lines) {
    throw SizeMismatch("cube data column count does not match samples*lines");
  }
  std::ofstream header(header_path, std::ios::trunc);
  if (!header) throw IoError("cannot write cube header: " + header_path.string());
  header << "samples = " << cube.samples << '\n';
  header << "lines = " << cube.lines << '\n';
  header << "bands = " << cube.bands() << '\n';
  header << "interleave = " << to_string(interleave) << '\n';
  header << "data type = " << static_cast<int>(data_type) << '\n';
  header << "byte order = " << static_cast<int>(byte_order) << '\n';
  header << "wavelength = {";
  for (std::size_t b = 0; b < cube.bands(); ++b) {
    if (b) header << ", ";
    header << detail::format_double(cube.wavelengths[static_cast<Eigen::Index>(b)]);
  }
  header << "}\n";
  if (!header) throw IoError("failed writing cube header");

  const std::size_t values = cube.bands() * cube.pixel_count();
  std::ofstream data(data_path, std::ios::binary | std::ios::trunc);
  if (!data) throw IoError("cannot write cube data: " + data_path.string());

  auto write_all = [&](auto& words) {
    if (needs_swap(byte_order)) swap_words(words);
    data.write(reinterpret_cast<const char*>(words.data()),
               static_cast<std::streamsize>(words.size() * sizeof(words[0])));
  };

  if (data_type == CubeDataType::Float32) {
    std::vector<float> words(values);
    for (std::size_t line = 0; line < cube.lines; ++line) {
      for (std::size_t sample = 0; sample < cube.samples; ++sample) {
        const auto pixel = static_cast<Eigen::Index>(line * cube.samples + sample);
        for (std::size_t band = 0; band < cube.bands(); ++band) {
          words[element_offset(interleave, band, line, sample, cube.bands(),
                               cube.lines, cube.samples)] =
              static_cast<float>(cube.data(static_cast<Eigen::Index>(band), pixel));
        }
      }
    }
    write_all(words);
  } else {
    std::vector<double> words(values);
    for (std::size_t line = 0; line < cube.lines; ++line) {
      for (std::size_t sample = 0; sample < cube.samples; ++sample) {
        const auto pixel = static_cast<Eigen::Index>(line * cube.samples + sample);
        for (std::size_t band = 0; band < cube.bands(); ++band) {
          words[element_offset(interleave, band, line, sample, cube.bands(),
                               cube.lines, cube.samples)] =
              cube.data(static_cast<Eigen::Index>(band), pixel);
        }
      }
    }
    write_all(words);
  }
  if (!data) throw IoError("failed writing cube data");
}

SynthScene generate_scene(const SpectralLibrary& library, std::size_t n_pixels,
                          std::size_t sparsity,
                          std::pair<double, double> abundance_range,
                          double snr_db, std::uint64_t seed) {
  const std::size_t count = library.spectrum_count();
  if (sparsity < 1 || sparsity > count) {
    throw InvalidSparsity("sparsity must lie in [1, " + std::to_string(count) + "]");
  }
  if (n_pixels < 1) throw InvalidArgument("scene needs at least one pixel");
  if (!(abundance_range.first > 0.0) ||
      !(abundance_range.second >= abundance_range.first)) {
    throw InvalidArgument("abundance range must satisfy 0 < lo <= hi");
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> abundance(abundance_range.first,
                                                   abundance_range.second);
  std::normal_distribution<double> gauss(0.0, 1.0);

  SynthScene scene;
  scene.snr_db = snr_db;
  scene.seed = seed;
  scene.pixels.reserve(n_pixels);
  scene.ground_truth.reserve(n_pixels);

  std::vector<std::size_t> indices(count);
  for (std::size_t p = 0; p < n_pixels; ++p) {
    std::iota(indices.begin(), indices.end(), 0);
    // Partial Fisher-Yates: the first `sparsity` entries become the support.
    for (std::size_t j = 0; j < sparsity; ++j) {
      std::uniform_int_distribution<std::size_t> pick(j, count - 1);
      std::swap(indices[j], indices[pick(rng)]);
    }
    AbundanceMap truth;
    Vector y = Vector::Zero(static_cast<Eigen::Index>(library.band_count()));
    for (std::size_t j = 0; j < sparsity; ++j) {
      const double value = abundance(rng);
      truth[indices[j]] = value;
      y.noalias() +=
          value * library.spectra().col(static_cast<Eigen::Index>(indices[j]));
    }
    if (std::isfinite(snr_db)) {
      Vector noise(y.size());
      for (Eigen::Index b = 0; b < noise.size(); ++b) noise[b] = gauss(rng);
      const double noise_norm = noise.norm();
      const double signal_norm = y.norm();
      if (noise_norm > 0.0 && signal_norm > 0.0) {
        const double target = signal_norm / std::pow(10.0, snr_db / 20.0);
        y.noalias() += (target / noise_norm) * noise;
      }
    }
    scene.pixels.emplace_back(std::move(y), library.band_wavelengths());
    scene.ground_truth.push_back(std::move(truth));
  }
  return scene;
}

SpectralLibrary synthetic_library(std::size_t n_spectra, std::size_t n_bands,
                                  std::uint64_t seed) {
  if (n_spectra < 1 || n_bands < 2) {
    throw InvalidArgument("synthetic library needs >= 1 spectra and >= 2 bands");
  }
  static const std::vector<std::string> kCategories = {
      "sulfate",      "phyllosilicate", "tectosilicate",
      "nesosilicate", "carbonate",      "hydroxide"};

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.4 / static_cast<double>(n_spectra),
                                                0.4 / static_cast<double>(n_spectra));
  std::uniform_real_distribution<double> width(0.008 * 0.7, 0.008 * 1.3);
  std::uniform_real_distribution<double> height(0.5, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  Vector wavelengths(static_cast<Eigen::Index>(n_bands));
  for (std::size_t b = 0; b < n_bands; ++b) {
    wavelengths[static_cast<Eigen::Index>(b)] =
        0.4 + 2.1 * static_cast<double>(b) / static_cast<double>(n_bands - 1);
  }

  // Each spectrum is a low albedo floor plus a strong primary feature in its
  // own spectral window (plus a weaker secondary one), so the columns stay
  // distinguishable the way distinct minerals are.
  Matrix spectra(static_cast<Eigen::Index>(n_bands),
                 static_cast<Eigen::Index>(n_spectra));
  std::vector<std::string> names;
  std::vector<std::string> categories;
  auto add_bump = [&](Vector& spectrum, double c, double w, double h) {
    for (std::size_t b = 0; b < n_bands; ++b) {
      const double t = static_cast<double>(b) / static_cast<double>(n_bands - 1);
      const double d = (t - c) / w;
      spectrum[static_cast<Eigen::Index>(b)] += h * std::exp(-0.5 * d * d);
    }
  };
  for (std::size_t i = 0; i < n_spectra; ++i) {
    Vector spectrum = Vector::Constant(static_cast<Eigen::Index>(n_bands), 0.005);
    const double primary_center =
        (static_cast<double>(i) + 0.5) / static_cast<double>(n_spectra) + jitter(rng);
    add_bump(spectrum, primary_center, width(rng), height(rng));
    add_bump(spectrum, unit(rng), width(rng), 0.3 * unit(rng));
    spectra.col(static_cast<Eigen::Index>(i)) = spectrum;
    char name[32];
    std::snprintf(name, sizeof(name), "spec_%03zu", i);
    names.emplace_back(name);
    categories.push_back(kCategories[i % kCategories.size()]);
  }
  return SpectralLibrary(std::move(wavelengths), std::move(spectra),
                         std::move(names), std::move(categories));
}

namespace {

using nlohmann::json;

json report_to_json(const metrics::EvalReport& report) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    rows.push_back({{"technique", row.technique},
                    {"mean_rmse", row.mean_rmse},
                    {"rmse_units", to_string(row.rmse_units)},
                    {"mean_runtime_s", row.mean_runtime_seconds},
                    {"detection_pct", row.detection_pct},
                    {"map_at_k", row.map_at_k},
                    {"failures", row.failures}});
  }
  return json{{"k", report.k}, {"rows", std::move(rows)}};
}

metrics::EvalReport report_from_json(const json& node) {
  metrics::EvalReport report;
  report.k = node.at("k").get<std::size_t>();
  for (const auto& entry : node.at("rows")) {
    metrics::EvalRow row;
    row.technique = entry.at("technique").get<std::string>();
    row.mean_rmse = entry.at("mean_rmse").get<double>();
    row.rmse_units = entry.at("rmse_units").get<std::string>() == "whitened"
                         ? ErrorUnits::Whitened
                         : ErrorUnits::Reflectance;
    row.mean_runtime_seconds = entry.at("mean_runtime_s").get<double>();
    row.detection_pct = entry.at("detection_pct").get<double>();
    row.map_at_k = entry.at("map_at_k").get<double>();
    row.failures = entry.at("failures").get<std::size_t>();
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace

PixelResult PixelResult::from_solution(std::string id, std::string solver,
                                       const AbundanceSolution& solution) {
  PixelResult result;
  result.id = std::move(id);
  result.solver = std::move(solver);
  result.coefficients = solution.coefficients;
  result.rmse = solution.rmse;
  result.units = solution.units;
  result.runtime_seconds = solution.runtime_seconds;
  return result;
}

std::string results_to_json(const ResultsDocument& document) {
  json pixels = json::array();
  for (const auto& pixel : document.pixels) {
    json coefficients = json::object();
    for (const auto& [index, value] : pixel.coefficients) {
      coefficients[std::to_string(index)] = value;
    }
    pixels.push_back({{"id", pixel.id},
                      {"solver", pixel.solver},
                      {"coefficients", std::move(coefficients)},
                      {"rmse", pixel.rmse},
                      {"rmse_units", to_string(pixel.units)},
                      {"runtime_s", pixel.runtime_seconds}});
  }
  json document_json{{"library", document.library},
                     {"pixels", std::move(pixels)}};
  document_json["report"] =
      document.report.has_value() ? report_to_json(*document.report) : json();
  return document_json.dump(2) + "\n";
}

ResultsDocument results_from_json(const std::string& text) {
  json parsed;
  try {
    parsed = json::parse(text);
  } catch (const json::parse_error& error) {
    throw ParseError(std::string("results JSON: ") + error.what(), 1, 1);
  }
  ResultsDocument document;
  document.library = parsed.at("library").get<std::string>();
  for (const auto& entry : parsed.at("pixels")) {
    PixelResult pixel;
    pixel.id = entry.at("id").get<std::string>();
    pixel.solver = entry.at("solver").get<std::string>();
    for (const auto& [key, value] : entry.at("coefficients").items()) {
      pixel.coefficients[std::stoull(key)] = value.get<double>();
    }
    pixel.rmse = entry.at("rmse").get<double>();
    pixel.units = entry.at("rmse_units").get<std::string>() == "whitened"
                      ? ErrorUnits::Whitened
                      : ErrorUnits::Reflectance;
    pixel.runtime_seconds = entry.at("runtime_s").get<double>();
    document.pixels.push_back(std::move(pixel));
  }
  if (parsed.contains("report") && !parsed.at("report").is_null()) {
    document.report = report_from_json(parsed.at("report"));
  }
  return document;
}

void save_results(const std::filesystem::path& path,
                  const ResultsDocument& document) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open results file for writing: " + path.string());
  out << results_to_json(document);
  if (!out) throw IoError("failed writing results file: " + path.string());
}

ResultsDocument load_results(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open results file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return results_from_json(buffer.str());
}

}  // namespace unmixkit::io
