#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "winfree/checkers.hpp"
#include "winfree/dynamics.hpp"
#include "winfree/run_config.hpp"

namespace winfree {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitRuntime = 3, kExitVerification = 4 };

struct VerifyOptions {
  /// Forwarded to the integrator for the primary trajectory of every run.
  std::function<void(Matrix&)> pre_projection_hook;
};

struct CommandOptions {
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::string kind;  // plotdata only
};

/// Headline numbers shared by the simulate summary and sweep rows.
struct RunMetrics {
  double final_order_parameter = 0.0;
  double final_mean_influence = 0.0;
  double max_phi = 0.0;
  std::optional<double> chord_rate;
  std::string dichotomy = "n/a";
};

RunMetrics compute_metrics(const Trajectory& traj, const InfluenceProfile& profile);

/// Evaluates every id in cfg.checks against traj. Hypothesis failures become
/// vacuous verdicts; other errors become failed verdicts.
std::vector<Verdict> evaluate_checks(const RunConfig& cfg, const ModelParams& params, const Trajectory& traj,
                                     const VerifyOptions& options = {});

Trajectory run_trajectory(const RunConfig& cfg, const ModelParams& params, const VerifyOptions& options = {});

Json to_json(const Verdict& v);
Json summary_json(const RunConfig& cfg, const Trajectory& traj, const RunMetrics& metrics,
                  const std::vector<Verdict>& verdicts);
/// Header t,i,x0..xd,phi_i,Ic,R; one row per record and oscillator, %.17g.
std::string trajectory_csv(const Trajectory& traj);

/// Writes to a sibling temp file and renames it into place.
void write_atomic(const std::string& path, const std::string& content);

int cmd_simulate(const std::string& path, const CommandOptions& opts, std::ostream& err);
int cmd_verify(const std::string& path, const CommandOptions& opts, std::ostream& err,
               const VerifyOptions& verify = {});
int cmd_sweep(const std::string& path, const CommandOptions& opts, std::ostream& err);
int cmd_equilibrium(const std::string& path, const CommandOptions& opts, std::ostream& err);
int cmd_plotdata(const std::string& path, const CommandOptions& opts, std::ostream& err);

/// Pairwise-log marker standing in for log(0) once chords fall below the floor.
constexpr double kConvergedMarker = -1000.0;

}  // namespace winfree
