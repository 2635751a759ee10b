#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "winfree/configuration.hpp"
#include "winfree/dynamics.hpp"
#include "winfree/influence.hpp"

namespace winfree {

using Json = nlohmann::json;

struct ProfileSpec {
  std::string name = "I1";
  std::string kind = "builtin-I1";  // builtin-I1 | builtin-I2 | table
  double beta = 1.0;
  InfluenceProfile::Table table;
};

struct FrequencySpec {
  std::string kind = "zero";  // zero | identical-rotation | structured | explicit
  double rate = 0.0;
  std::vector<double> axis;                // identical-rotation, d = 2: Ω = rate·hat(axis)
  std::vector<std::vector<double>> plane;  // identical-rotation: Ω turns plane[0] toward plane[1]
  std::vector<double> nus;                 // structured
  std::vector<std::vector<double>> axes;   // structured, optional
  std::vector<Matrix> matrices;            // explicit
};

struct InitialSpec {
  std::string kind = "random-in-cap";  // explicit | random-in-cap
  std::vector<std::vector<double>> points;
  double gamma = 0.5;
  std::uint64_t seed = 0;
};

struct OutputSpec {
  std::string dir = ".";
  std::string trajectory = "trajectory.csv";
  std::string summary = "summary.json";
  std::string verdicts = "verdicts.json";
};

struct RunConfig {
  std::string name = "run";
  int dim = 1;
  int n = 1;
  double kappa = 0.0;
  ProfileSpec profile;
  FrequencySpec frequencies;
  InitialSpec initial;
  double dt = 1e-3;
  double t_end = 1.0;
  int decimation = 0;
  std::optional<double> gamma;
  std::vector<std::string> checks;
  double pair_perturbation = 1e-2;
  OutputSpec output;
};

struct SweepConfig {
  RunConfig base;
  Json base_json;
  /// Dotted paths into the base config, each with its list of values.
  std::vector<std::pair<std::string, std::vector<Json>>> grid;
  int jobs = 1;
  std::string aggregate = "rows";
  std::string output = "sweep";
};

const std::vector<std::string>& known_check_ids();

/// ConfigError with the offending field named in the message.
RunConfig parse_run_config(const Json& j);
Json to_json(const RunConfig& cfg);

SweepConfig parse_sweep_config(const Json& j);
Json to_json(const SweepConfig& cfg);

/// Parse errors become ConfigError with line and column.
Json load_json(const std::string& path);

InfluenceProfile make_profile(const ProfileSpec& spec);
std::vector<SkewMatrix> make_frequencies(const RunConfig& cfg);
Configuration make_initial(const RunConfig& cfg);
ModelParams make_params(const RunConfig& cfg);

/// Deterministic per-cell seed; cell 0 keeps the base seed.
std::uint64_t cell_seed(std::uint64_t base, std::size_t index);

/// Writes value at a dotted path ("initial.seed"); ConfigError if absent.
void set_path(Json& j, const std::string& path, const Json& value);

}  // namespace winfree
