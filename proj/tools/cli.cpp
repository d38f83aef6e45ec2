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

#include "cli.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "unmixkit/core.hpp"
#include "unmixkit/data_io.hpp"
#include "unmixkit/detail/text_io.hpp"
#include "unmixkit/metrics.hpp"
#include "unmixkit/minlp.hpp"
#include "unmixkit/solvers.hpp"
#include "unmixkit/stepwise.hpp"
#include "unmixkit/whiten.hpp"

namespace unmixkit::cli {

namespace {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Small parsing helpers

std::vector<std::string> split(const std::string& text, char delimiter) {
  std::vector<std::string> parts;
  std::stringstream stream(text);
  std::string item;
  while (std::getline(stream, item, delimiter)) parts.push_back(item);
  return parts;
}

std::pair<std::size_t, std::size_t> parse_pixel_ref(const std::string& token) {
  const auto colon = token.find(':');
  if (colon == std::string::npos) {
    throw InvalidArgument("pixel reference \"" + token +
                          "\" is not line:sample");
  }
  std::size_t line = 0;
  std::size_t sample = 0;
  const auto l = std::from_chars(token.data(), token.data() + colon, line);
  const auto s = std::from_chars(token.data() + colon + 1,
                                 token.data() + token.size(), sample);
  if (l.ec != std::errc() || l.ptr != token.data() + colon ||
      s.ec != std::errc() || s.ptr != token.data() + token.size()) {
    throw InvalidArgument("pixel reference \"" + token +
                          "\" is not line:sample");
  }
  return {line, sample};
}

std::vector<std::pair<std::size_t, std::size_t>> parse_pixel_spec(
    const std::string& spec) {
  std::vector<std::pair<std::size_t, std::size_t>> refs;
  for (const auto& token : split(spec, ',')) {
    if (!token.empty()) refs.push_back(parse_pixel_ref(token));
  }
  if (refs.empty()) throw InvalidArgument("empty --pixels specification");
  return refs;
}

std::vector<std::pair<std::size_t, std::size_t>> read_pixel_file(
    const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open pixel file: " + path.string());
  std::vector<std::pair<std::size_t, std::size_t>> refs;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    for (const auto& token : split(line, ',')) {
      if (!token.empty()) refs.push_back(parse_pixel_ref(token));
    }
  }
  if (refs.empty()) throw InvalidArgument("pixel file lists no pixels");
  return refs;
}

// Key=value lists such as "pixels=50,sparsity=3,snr=30,seed=7".
std::map<std::string, std::string> parse_kv_spec(const std::string& spec) {
  std::map<std::string, std::string> entries;
  for (const auto& token : split(spec, ',')) {
    if (token.empty()) continue;
    const auto equals = token.find('=');
    if (equals == std::string::npos) {
      throw InvalidArgument("expected key=value in \"" + token + "\"");
    }
    entries[token.substr(0, equals)] = token.substr(equals + 1);
  }
  return entries;
}

double kv_double(const std::map<std::string, std::string>& entries,
                 const std::string& key, std::optional<double> fallback = {}) {
  const auto found = entries.find(key);
  if (found == entries.end()) {
    if (fallback) return *fallback;
    throw InvalidArgument("missing \"" + key + "\" in specification");
  }
  if (found->second == "inf" || found->second == "infinity") {
    return std::numeric_limits<double>::infinity();
  }
  try {
    return std::stod(found->second);
  } catch (const std::exception&) {
    throw InvalidArgument("bad numeric value for \"" + key + "\"");
  }
}

std::size_t kv_count(const std::map<std::string, std::string>& entries,
                     const std::string& key,
                     std::optional<std::size_t> fallback = {}) {
  const auto found = entries.find(key);
  if (found == entries.end()) {
    if (fallback) return *fallback;
    throw InvalidArgument("missing \"" + key + "\" in specification");
  }
  std::size_t value = 0;
  const auto result = std::from_chars(
      found->second.data(), found->second.data() + found->second.size(), value);
  if (result.ec != std::errc() ||
      result.ptr != found->second.data() + found->second.size()) {
    throw InvalidArgument("bad integer value for \"" + key + "\"");
  }
  return value;
}

void write_output(const std::string& text, const std::string& output_path) {
  if (output_path.empty() || output_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(output_path, std::ios::trunc);
  if (!out) throw IoError("cannot open output file: " + output_path);
  out << text;
  if (!out) throw IoError("failed writing output file: " + output_path);
}

// Cube arguments name either the header or the shared base path.
std::pair<fs::path, fs::path> cube_paths(const std::string& cube_arg,
                                         const std::string& data_override) {
  fs::path header(cube_arg);
  fs::path base = header;
  if (header.extension() == ".hdr") {
    base.replace_extension();
  } else {
    header += ".hdr";
  }
  fs::path data = data_override.empty() ? base.concat(".dat") : fs::path(data_override);
  return {header, data};
}

// ---------------------------------------------------------------------------
// Shared solver wiring

struct SolverFlags {
  std::string solver;
  double lambda = 0.01;
  bool lambda_given = false;
  bool use_cv = false;
  double alpha = 0.05;
  std::size_t model_size = 3;
  std::string cardinality = "atmost";
  double time_limit = 60.0;
  std::uint64_t seed = 0;
};

using SolverRunner =
    std::function<AbundanceSolution(const SpectralLibrary&, const PixelSpectrum&)>;

SolverRunner make_runner(const std::string& name, const SolverFlags& flags,
                         std::shared_ptr<const whiten::WhitenStats> stats) {
  if (name == "ols") {
    return [](const SpectralLibrary& lib, const PixelSpectrum& px) {
      return solvers::ols_solve(lib, px);
    };
  }
  if (name == "nnls") {
    return [](const SpectralLibrary& lib, const PixelSpectrum& px) {
      return solvers::nnls_solve(lib, px);
    };
  }
  if (name == "lasso") {
    if (flags.use_cv) {
      solvers::LassoConfig config;
      config.seed = flags.seed;
      return [config](const SpectralLibrary& lib, const PixelSpectrum& px) {
        return solvers::lasso_cv(lib, px, config).solution;
      };
    }
    const double lambda = flags.lambda;
    return [lambda](const SpectralLibrary& lib, const PixelSpectrum& px) {
      return solvers::lasso_solve(lib, px, lambda);
    };
  }
  if (name == "dfs") {
    stepwise::StepwiseConfig config;
    config.alpha = flags.alpha;
    return [config](const SpectralLibrary& lib, const PixelSpectrum& px) {
      return stepwise::dfs_select(lib, px, config);
    };
  }
  if (name == "minlp") {
    minlp::MinlpConfig config;
    config.model_size = flags.model_size;
    config.cardinality_sense = flags.cardinality == "atleast"
                                   ? minlp::CardinalitySense::AtLeast
                                   : minlp::CardinalitySense::AtMost;
    config.time_limit_seconds = flags.time_limit;
    return [config](const SpectralLibrary& lib, const PixelSpectrum& px) {
      return minlp::minlp_unmix(lib, px, config).solution;
    };
  }
  if (name == "hysudeb") {
    if (!stats) {
      throw InvalidArgument("hysudeb needs image statistics; provide a cube or scene");
    }
    solvers::LassoConfig config;
    config.seed = flags.seed;
    return [config, stats](const SpectralLibrary& lib, const PixelSpectrum& px) {
      return whiten::hysudeb_unmix(lib, px, *stats, config);
    };
  }
  throw InvalidArgument("unknown solver \"" + name + "\"");
}

std::size_t worker_count(std::size_t jobs_flag) {
  if (jobs_flag > 0) return jobs_flag;
  if (const char* env = std::getenv("UNMIXKIT_JOBS")) {
    std::size_t parsed = 0;
    const auto result = std::from_chars(env, env + std::strlen(env), parsed);
    if (result.ec == std::errc() && parsed > 0) return parsed;
  }
  const unsigned hardware = std::thread::hardware_concurrency();
  return hardware > 0 ? hardware : 1;
}

// Solve every pixel, preserving input order regardless of scheduling.
std::vector<AbundanceSolution> solve_pixels(
    const SolverRunner& runner, const SpectralLibrary& library,
    const std::vector<PixelSpectrum>& pixels, std::size_t jobs) {
  std::vector<AbundanceSolution> solutions(pixels.size());
  if (jobs <= 1 || pixels.size() <= 1) {
    for (std::size_t i = 0; i < pixels.size(); ++i) {
      solutions[i] = runner(library, pixels[i]);
    }
    return solutions;
  }
  std::vector<std::exception_ptr> errors(pixels.size());
  std::atomic<std::size_t> next{0};
  auto work = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= pixels.size()) return;
      try {
        solutions[i] = runner(library, pixels[i]);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> workers;
  const std::size_t n_threads = std::min(jobs, pixels.size());
  workers.reserve(n_threads);
  for (std::size_t t = 0; t < n_threads; ++t) workers.emplace_back(work);
  for (auto& worker : workers) worker.join();
  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }
  return solutions;
}

// ---------------------------------------------------------------------------
// Output rendering

std::string pixel_results_csv(const io::ResultsDocument& document,
                              const SpectralLibrary& library) {
  std::string out =
      "pixel_id,solver,library_index,name,abundance,rmse,rmse_units,runtime_s\n";
  for (const auto& pixel : document.pixels) {
    for (const auto& [index, value] : pixel.coefficients) {
      out += pixel.id + ',' + pixel.solver + ',' + std::to_string(index) + ',' +
             library.names()[index] + ',' + detail::format_double(value) + ',' +
             detail::format_double(pixel.rmse) + ',' + to_string(pixel.units) +
             ',' + detail::format_double(pixel.runtime_seconds) + '\n';
    }
    if (pixel.coefficients.empty()) {
      out += pixel.id + ',' + pixel.solver + ",,,," +
             detail::format_double(pixel.rmse) + ',' + to_string(pixel.units) +
             ',' + detail::format_double(pixel.runtime_seconds) + '\n';
    }
  }
  return out;
}

std::string pixel_results_table(const io::ResultsDocument& document,
                                const SpectralLibrary& library) {
  std::ostringstream out;
  for (const auto& pixel : document.pixels) {
    out << "pixel " << pixel.id << "  solver=" << pixel.solver
        << "  rmse=" << pixel.rmse << " (" << to_string(pixel.units) << ")"
        << "  runtime_s=" << pixel.runtime_seconds << '\n';
    for (const auto& [index, value] : pixel.coefficients) {
      out << "  [" << index << "] " << library.names()[index] << " = " << value
          << '\n';
    }
    if (pixel.coefficients.empty()) out << "  (empty model)\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Subcommand options

struct CommonOptions {
  std::string library_path;
  std::string cube;
  std::string cube_data;
  std::string pixels_spec;
  std::string pixel_file;
  std::string output;
  std::string format = "json";
  std::size_t jobs = 0;
};

struct UnmixCommand {
  CommonOptions common;
  SolverFlags flags;
};

struct DetectCommand {
  CommonOptions common;
  std::string target_name;
  double threshold = -1.0;
  std::size_t top_k = 0;
  bool threshold_given = false;
  bool top_k_given = false;
};

struct SynthCommand {
  std::string library_path;
  std::string make_library;
  std::string synth_spec;
  std::string output;
  std::string interleave = "bsq";
  int data_type = 5;
};

struct BenchCommand {
  CommonOptions common;
  std::string synth_spec;
  std::string solvers_list;
  std::string target_category;
  std::string target_names;
  std::size_t k = 5;
  int repeats = 3;
  SolverFlags flags;
};

struct EvalCommand {
  std::string results_path;
  std::string library_path;
  std::string target_category;
  std::string target_names;
  std::size_t k = 5;
  std::string output;
  std::string format = "csv";
};

metrics::TargetGroup resolve_target(const SpectralLibrary& library,
                                    const std::string& category,
                                    const std::string& names) {
  if (!category.empty()) {
    return metrics::TargetGroup::from_category(library, category);
  }
  std::set<std::size_t> indices;
  for (const auto& name : split(names, ',')) {
    if (name.empty()) continue;
    const auto index = library.find_name(name);
    if (!index) throw InvalidArgument("library has no spectrum named \"" + name + "\"");
    indices.insert(*index);
  }
  if (indices.empty()) {
    throw InvalidArgument("no target given; use --target-category or --target-names");
  }
  return metrics::TargetGroup::from_indices(std::move(indices), names);
}

// ---------------------------------------------------------------------------
// Subcommand bodies

int run_unmix(const UnmixCommand& command) {
  const auto library = io::load_library(command.common.library_path);
  const auto [header_path, data_path] =
      cube_paths(command.common.cube, command.common.cube_data);
  const auto cube = io::load_cube(header_path, data_path);

  const auto refs = command.common.pixel_file.empty()
                        ? parse_pixel_spec(command.common.pixels_spec)
                        : read_pixel_file(command.common.pixel_file);
  std::vector<PixelSpectrum> pixels;
  pixels.reserve(refs.size());
  for (const auto& [line, sample] : refs) pixels.push_back(cube.pixel(line, sample));

  std::shared_ptr<const whiten::WhitenStats> stats;
  if (command.flags.solver == "hysudeb") {
    stats = std::make_shared<whiten::WhitenStats>(
        whiten::compute_stats(cube.pixels()));
  }
  const auto runner = make_runner(command.flags.solver, command.flags, stats);
  const auto solutions = solve_pixels(runner, library, pixels,
                                      worker_count(command.common.jobs));

  io::ResultsDocument document;
  document.library = command.common.library_path;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    const std::string id =
        std::to_string(refs[i].first) + ":" + std::to_string(refs[i].second);
    document.pixels.push_back(
        io::PixelResult::from_solution(id, command.flags.solver, solutions[i]));
  }

  if (command.common.format == "json") {
    write_output(io::results_to_json(document), command.common.output);
  } else if (command.common.format == "csv") {
    write_output(pixel_results_csv(document, library), command.common.output);
  } else {
    write_output(pixel_results_table(document, library), command.common.output);
  }
  return 0;
}

int run_detect(const DetectCommand& command) {
  const auto library = io::load_library(command.common.library_path);
  const auto [header_path, data_path] =
      cube_paths(command.common.cube, command.common.cube_data);
  const auto cube = io::load_cube(header_path, data_path);
  const auto pixels = cube.pixels();

  const auto target_index = library.find_name(command.target_name);
  if (!target_index) {
    throw InvalidArgument("library has no spectrum named \"" +
                          command.target_name + "\"");
  }
  const Vector target = library.spectrum(*target_index);
  const auto stats = whiten::compute_stats(pixels);
  const auto scores = whiten::score_cube(pixels, target, stats,
                                         command.target_name,
                                         command.threshold_given
                                             ? command.threshold
                                             : 0.0);
  std::vector<std::size_t> selected;
  if (command.threshold_given) {
    selected = whiten::select_roi(pixels, target, stats, command.threshold);
  } else {
    selected = whiten::select_roi_top_k(pixels, target, stats, command.top_k);
  }

  if (command.common.format == "json") {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto index : selected) {
      rows.push_back({{"index", index},
                      {"line", index / cube.samples},
                      {"sample", index % cube.samples},
                      {"score", scores.scores[index]}});
    }
    nlohmann::json document{{"target", command.target_name},
                            {"selected", std::move(rows)}};
    if (command.threshold_given) document["threshold"] = command.threshold;
    if (command.top_k_given) document["top_k"] = command.top_k;
    write_output(document.dump(2) + "\n", command.common.output);
  } else {
    std::string out = "index,line,sample,score\n";
    for (const auto index : selected) {
      out += std::to_string(index) + ',' + std::to_string(index / cube.samples) +
             ',' + std::to_string(index % cube.samples) + ',' +
             detail::format_double(scores.scores[index]) + '\n';
    }
    write_output(out, command.common.output);
  }
  return 0;
}

int run_synth(const SynthCommand& command) {
  if (!command.make_library.empty()) {
    const auto spec = parse_kv_spec(command.make_library);
    const auto library = io::synthetic_library(kv_count(spec, "n"),
                                               kv_count(spec, "bands"),
                                               kv_count(spec, "seed", 0));
    io::save_library(library, command.output);
    std::cerr << "wrote " << library.spectrum_count() << "-spectrum library to "
              << command.output << "\n";
    return 0;
  }

  const auto library = io::load_library(command.library_path);
  const auto spec = parse_kv_spec(command.synth_spec);
  const auto scene = io::generate_scene(
      library, kv_count(spec, "pixels"), kv_count(spec, "sparsity"),
      {kv_double(spec, "abundance_lo", 0.2), kv_double(spec, "abundance_hi", 1.0)},
      kv_double(spec, "snr"), kv_count(spec, "seed", 0));

  io::Cube cube;
  cube.samples = scene.pixels.size();
  cube.lines = 1;
  cube.wavelengths = library.band_wavelengths();
  cube.data.resize(static_cast<Eigen::Index>(library.band_count()),
                   static_cast<Eigen::Index>(scene.pixels.size()));
  for (std::size_t p = 0; p < scene.pixels.size(); ++p) {
    cube.data.col(static_cast<Eigen::Index>(p)) = scene.pixels[p].values;
  }

  io::Interleave interleave = io::Interleave::BandSequential;
  if (command.interleave == "bil") interleave = io::Interleave::BandInterleavedByLine;
  if (command.interleave == "bip") interleave = io::Interleave::BandInterleavedByPixel;
  const auto data_type = command.data_type == 4 ? io::CubeDataType::Float32
                                                : io::CubeDataType::Float64;

  const fs::path base(command.output);
  fs::path header = base;
  header += ".hdr";
  fs::path data = base;
  data += ".dat";
  io::save_cube(cube, header, data, interleave, data_type);

  nlohmann::json truth_pixels = nlohmann::json::array();
  for (std::size_t p = 0; p < scene.ground_truth.size(); ++p) {
    nlohmann::json coefficients = nlohmann::json::object();
    for (const auto& [index, value] : scene.ground_truth[p]) {
      coefficients[std::to_string(index)] = value;
    }
    truth_pixels.push_back({{"id", "0:" + std::to_string(p)},
                            {"coefficients", std::move(coefficients)}});
  }
  nlohmann::json truth{{"library", command.library_path},
                       {"snr_db", scene.snr_db},
                       {"seed", scene.seed},
                       {"pixels", std::move(truth_pixels)}};
  fs::path truth_path = base;
  truth_path += ".truth.json";
  std::ofstream truth_out(truth_path, std::ios::trunc);
  if (!truth_out) throw IoError("cannot write " + truth_path.string());
  truth_out << truth.dump(2) << "\n";
  std::cerr << "wrote scene (" << scene.pixels.size() << " pixels) to "
            << header.string() << ", " << data.string() << ", "
            << truth_path.string() << "\n";
  return 0;
}

int run_bench(const BenchCommand& command) {
  const auto library = io::load_library(command.common.library_path);

  std::vector<PixelSpectrum> pixels;
  if (!command.synth_spec.empty()) {
    const auto spec = parse_kv_spec(command.synth_spec);
    auto scene = io::generate_scene(
        library, kv_count(spec, "pixels"), kv_count(spec, "sparsity"),
        {kv_double(spec, "abundance_lo", 0.2),
         kv_double(spec, "abundance_hi", 1.0)},
        kv_double(spec, "snr"), kv_count(spec, "seed", 0));
    pixels = std::move(scene.pixels);
  } else {
    const auto [header_path, data_path] =
        cube_paths(command.common.cube, command.common.cube_data);
    const auto cube = io::load_cube(header_path, data_path);
    const auto refs = command.common.pixel_file.empty()
                          ? parse_pixel_spec(command.common.pixels_spec)
                          : read_pixel_file(command.common.pixel_file);
    for (const auto& [line, sample] : refs) pixels.push_back(cube.pixel(line, sample));
  }

  const auto target = resolve_target(library, command.target_category,
                                     command.target_names);

  std::shared_ptr<const whiten::WhitenStats> stats;
  std::vector<metrics::TechniqueSpec> techniques;
  for (const auto& name : split(command.solvers_list, ',')) {
    if (name.empty()) continue;
    if (name == "hysudeb" && !stats) {
      stats = std::make_shared<whiten::WhitenStats>(whiten::compute_stats(pixels));
    }
    techniques.push_back({name, make_runner(name, command.flags, stats)});
  }
  if (techniques.empty()) throw InvalidArgument("--solvers lists no solvers");

  const auto report = metrics::benchmark(techniques, library, pixels, target,
                                         command.k, command.repeats);

  if (command.common.format == "json") {
    io::ResultsDocument document;
    document.library = command.common.library_path;
    document.report = report;
    write_output(io::results_to_json(document), command.common.output);
  } else if (command.common.format == "table") {
    write_output(report.to_table(), command.common.output);
  } else {
    write_output(report.to_csv(), command.common.output);
  }
  return 0;
}

int run_eval(const EvalCommand& command) {
  const auto document = io::load_results(command.results_path);
  const auto library = io::load_library(command.library_path);
  const auto target = resolve_target(library, command.target_category,
                                     command.target_names);

  // Group stored per-pixel rows by solver and rebuild the report.
  std::vector<std::string> order;
  std::map<std::string, std::vector<const io::PixelResult*>> by_solver;
  for (const auto& pixel : document.pixels) {
    if (!by_solver.count(pixel.solver)) order.push_back(pixel.solver);
    by_solver[pixel.solver].push_back(&pixel);
  }
  if (order.empty()) throw EmptyInput("results document has no pixel rows");

  metrics::EvalReport report;
  report.k = command.k;
  for (const auto& solver : order) {
    metrics::EvalRow row;
    row.technique = solver;
    std::vector<metrics::RankedModel> models;
    double rmse_sum = 0.0;
    double runtime_sum = 0.0;
    for (const auto* pixel : by_solver[solver]) {
      AbundanceSolution solution;
      solution.coefficients = pixel->coefficients;
      solution.units = pixel->units;
      models.emplace_back(solution, target);
      rmse_sum += pixel->rmse;
      runtime_sum += pixel->runtime_seconds;
      row.rmse_units = pixel->units;
    }
    const auto count = static_cast<double>(by_solver[solver].size());
    row.mean_rmse = rmse_sum / count;
    row.mean_runtime_seconds = runtime_sum / count;
    row.detection_pct = metrics::detection_percentage(models);
    row.map_at_k = metrics::mean_average_precision(models, command.k);
    report.rows.push_back(std::move(row));
  }

  if (command.format == "json") {
    io::ResultsDocument out;
    out.library = command.library_path;
    out.report = report;
    write_output(io::results_to_json(out), command.output);
  } else if (command.format == "table") {
    write_output(report.to_table(), command.output);
  } else {
    write_output(report.to_csv(), command.output);
  }
  return 0;
}

void add_common_io(CLI::App* sub, CommonOptions& common, bool need_cube) {
  sub->add_option("--library", common.library_path, "Spectral library CSV")
      ->required();
  auto* cube = sub->add_option("--cube", common.cube,
                               "Cube base path or .hdr path (data: base.dat)");
  sub->add_option("--cube-data", common.cube_data,
                  "Override the cube data file path");
  auto* pixels = sub->add_option("--pixels", common.pixels_spec,
                                 "Comma-separated line:sample pairs");
  auto* pixel_file = sub->add_option("--pixel-file", common.pixel_file,
                                     "File of line:sample pairs, one per line");
  pixels->excludes(pixel_file);
  if (need_cube) cube->required();
  sub->add_option("--output", common.output, "Output path (default: stdout)");
  sub->add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "table"}));
  sub->add_option("--jobs", common.jobs,
                  "Worker threads for per-pixel solves (default: logical "
                  "CPUs, or UNMIXKIT_JOBS)");
}

void add_solver_flags(CLI::App* sub, SolverFlags& flags, bool with_solver_choice) {
  CLI::Option* lambda = sub->add_option("--lambda", flags.lambda,
                                        "Fixed L1 penalty for the lasso solver");
  CLI::Option* cv = sub->add_flag("--cv", flags.use_cv,
                                  "Pick the lasso penalty by cross-validation");
  lambda->excludes(cv);
  sub->add_option("--alpha", flags.alpha, "p-value threshold for dfs")
      ->check(CLI::Range(std::numeric_limits<double>::min(), 1.0));
  sub->add_option("--p", flags.model_size, "Model-size parameter for minlp");
  sub->add_option("--cardinality", flags.cardinality,
                  "Cardinality sense for minlp")
      ->check(CLI::IsMember({"atmost", "atleast"}));
  sub->add_option("--time-limit", flags.time_limit,
                  "Time limit in seconds for minlp");
  sub->add_option("--seed", flags.seed, "Seed for cross-validation folds");
  if (with_solver_choice) {
    sub->add_option("--solver", flags.solver, "Unmixing technique")
        ->required()
        ->check(CLI::IsMember({"ols", "nnls", "lasso", "dfs", "minlp", "hysudeb"}));
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"unmixkit: sparse spectral unmixing of hyperspectral pixels"};
  app.require_subcommand(1);

  UnmixCommand unmix;
  auto* unmix_cmd = app.add_subcommand(
      "unmix", "Estimate abundances for selected pixels with one solver");
  add_common_io(unmix_cmd, unmix.common, /*need_cube=*/true);
  add_solver_flags(unmix_cmd, unmix.flags, /*with_solver_choice=*/true);

  DetectCommand detect;
  auto* detect_cmd = app.add_subcommand(
      "detect", "Score a target spectrum over a cube and select an ROI");
  add_common_io(detect_cmd, detect.common, /*need_cube=*/true);
  detect_cmd->add_option("--target", detect.target_name,
                         "Library spectrum name to detect")
      ->required();
  auto* threshold = detect_cmd->add_option("--threshold", detect.threshold,
                                           "Select pixels with score >= threshold");
  auto* top_k = detect_cmd->add_option("--top-k", detect.top_k,
                                       "Select the top-k pixels by score");
  threshold->excludes(top_k);

  SynthCommand synth;
  auto* synth_cmd = app.add_subcommand(
      "synth", "Generate synthetic scenes (or libraries) for verification");
  auto* synth_library = synth_cmd->add_option("--library", synth.library_path,
                                              "Library to mix pixels from");
  auto* make_library = synth_cmd->add_option(
      "--make-library", synth.make_library,
      "Generate a library instead: n=<count>,bands=<count>,seed=<seed>");
  synth_library->excludes(make_library);
  synth_cmd->add_option("--synth", synth.synth_spec,
                        "Scene spec: pixels=..,sparsity=..,snr=..,seed=.. "
                        "(snr=inf for noiseless)");
  synth_cmd->add_option("--output", synth.output,
                        "Output base path (scene) or CSV path (library)")
      ->required();
  synth_cmd->add_option("--interleave", synth.interleave, "Cube interleave")
      ->check(CLI::IsMember({"bsq", "bil", "bip"}));
  synth_cmd->add_option("--data-type", synth.data_type, "Cube data type (4|5)")
      ->check(CLI::IsMember({4, 5}));

  BenchCommand bench;
  auto* bench_cmd = app.add_subcommand(
      "bench", "Compare solvers on a scene: error, runtime, detection, MAP");
  add_common_io(bench_cmd, bench.common, /*need_cube=*/false);
  bench_cmd->add_option("--synth", bench.synth_spec,
                        "Generate the benchmark scene instead of reading a cube");
  bench_cmd->add_option("--solvers", bench.solvers_list,
                        "Comma-separated solver list")
      ->required();
  bench_cmd->add_option("--target-category", bench.target_category,
                        "Mineral category that counts as the target");
  bench_cmd->add_option("--target-names", bench.target_names,
                        "Comma-separated target spectrum names");
  bench_cmd->add_option("--k", bench.k, "Ranking depth for MAP at k");
  bench_cmd->add_option("--repeats", bench.repeats,
                        "Timing repeats per solve (median is reported)");
  add_solver_flags(bench_cmd, bench.flags, /*with_solver_choice=*/false);
  bench.common.format = "csv";

  EvalCommand eval;
  auto* eval_cmd = app.add_subcommand(
      "eval", "Re-score a saved results document against a target group");
  eval_cmd->add_option("--results", eval.results_path, "Results JSON path")
      ->required();
  eval_cmd->add_option("--library", eval.library_path, "Spectral library CSV")
      ->required();
  eval_cmd->add_option("--target-category", eval.target_category,
                       "Mineral category that counts as the target");
  eval_cmd->add_option("--target-names", eval.target_names,
                       "Comma-separated target spectrum names");
  eval_cmd->add_option("--k", eval.k, "Ranking depth for MAP at k");
  eval_cmd->add_option("--output", eval.output, "Output path (default: stdout)");
  eval_cmd->add_option("--format", eval.format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "table"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& help) {
    return app.exit(help);
  } catch (const CLI::CallForAllHelp& help) {
    return app.exit(help);
  } catch (const CLI::ParseError& error) {
    std::cerr << "usage error: " << error.what() << "\n";
    return 2;
  }

  try {
    if (unmix_cmd->parsed()) {
      if (unmix.common.pixels_spec.empty() && unmix.common.pixel_file.empty()) {
        std::cerr << "usage error: unmix needs --pixels or --pixel-file\n";
        return 2;
      }
      unmix.flags.lambda_given = unmix_cmd->count("--lambda") > 0;
      if (unmix.flags.solver == "lasso" && !unmix.flags.lambda_given &&
          !unmix.flags.use_cv) {
        unmix.flags.use_cv = true;  // no penalty given: cross-validate
      }
      return run_unmix(unmix);
    }
    if (detect_cmd->parsed()) {
      detect.threshold_given = detect_cmd->count("--threshold") > 0;
      detect.top_k_given = detect_cmd->count("--top-k") > 0;
      if (!detect.threshold_given && !detect.top_k_given) {
        std::cerr << "usage error: detect needs --threshold or --top-k\n";
        return 2;
      }
      return run_detect(detect);
    }
    if (synth_cmd->parsed()) {
      if (synth.make_library.empty() &&
          (synth.library_path.empty() || synth.synth_spec.empty())) {
        std::cerr << "usage error: synth needs --make-library, or --library "
                     "with --synth\n";
        return 2;
      }
      return run_synth(synth);
    }
    if (bench_cmd->parsed()) {
      if (bench.synth_spec.empty() && bench.common.cube.empty()) {
        std::cerr << "usage error: bench needs --synth or --cube\n";
        return 2;
      }
      return run_bench(bench);
    }
    if (eval_cmd->parsed()) {
      return run_eval(eval);
    }
  } catch (const Error& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace unmixkit::cli
