#include "winfree/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "winfree/equilibria.hpp"
#include "winfree/error.hpp"

namespace winfree {

namespace fs = std::filesystem;

namespace {

std::string g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool is_hypothesis_error(ErrorCode c) {
  return c == ErrorCode::PreconditionUnmet || c == ErrorCode::BoundInapplicable ||
         c == ErrorCode::HypothesisViolated || c == ErrorCode::UnsupportedDim;
}

Angle config_gamma(const RunConfig& cfg) {
  if (!cfg.gamma) throw Error(ErrorCode::ConfigError, "field 'gamma': required by the selected checks");
  return Angle(*cfg.gamma);
}

int effective_decimation(const RunConfig& cfg) {
  if (cfg.decimation > 0) return cfg.decimation;
  return cfg.t_end <= 10.0 ? 1 : 10;
}

void require_identical(const ModelParams& params) {
  if (!params.identical_frequencies()) {
    throw Error(ErrorCode::PreconditionUnmet, "natural frequencies are not identical");
  }
}

Verdict splitting_check(const RunConfig& cfg, const ModelParams& params, const Trajectory& traj) {
  require_identical(params);
  const SkewMatrix& omega = params.omegas.front();
  const auto split = split_transform(traj, omega, params.profile);
  ModelParams frozen = params;
  frozen.omegas.assign(params.omegas.size(), SkewMatrix(params.dim + 1));
  IntegrateOptions io;
  io.decimation = effective_decimation(cfg);
  const auto direct = integrate(frozen, traj.initial(), cfg.dt, cfg.t_end, io);
  Verdict v;
  v.id = "prop5.1";
  v.tolerance = 1e-7;
  for (std::size_t k = 0; k < split.size(); ++k) {
    const double d = (split.states[k].points() - direct.states[k].points()).colwise().norm().maxCoeff();
    if (d > v.observed) {
      v.observed = d;
      if (d > v.tolerance) v.witness = Witness{split.times[k], {}};
    }
  }
  v.pass = v.observed <= v.tolerance;
  return v;
}

Verdict reduction_check(const RunConfig& cfg, const ModelParams& params, const Trajectory& traj) {
  const auto scalar = reduce_to_scalar(params);
  const auto& x0 = traj.initial();
  std::vector<double> theta0(static_cast<std::size_t>(x0.size()));
  for (Eigen::Index i = 0; i < x0.size(); ++i) theta0[i] = std::atan2(x0.points()(1, i), x0.points()(0, i));
  const auto st = integrate_scalar(scalar, theta0, cfg.dt, cfg.t_end, effective_decimation(cfg));
  Verdict v;
  v.id = "reduction-d1";
  v.tolerance = 1e-6;
  if (st.times.size() != traj.size()) throw Error(ErrorCode::LengthMismatch, "record grids differ");
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto& p = traj.states[k].points();
    for (Eigen::Index i = 0; i < p.cols(); ++i) {
      const double d = std::abs(wrap_angle(st.thetas[k][i] - std::atan2(p(1, i), p(0, i))));
      if (d > v.observed) {
        v.observed = d;
        if (d > v.tolerance) v.witness = Witness{traj.times[k], {int(i)}};
      }
    }
  }
  v.pass = v.observed <= v.tolerance;
  return v;
}

Verdict determinism_check(const RunConfig& cfg, const ModelParams& params, const Trajectory& traj,
                          const VerifyOptions& options) {
  const auto again = run_trajectory(cfg, params, options);
  Verdict v;
  v.id = "determinism";
  std::size_t diffs = again.size() == traj.size() ? 0 : 1;
  for (std::size_t k = 0; diffs == 0 && k < traj.size(); ++k) {
    if (again.times[k] != traj.times[k] || again.states[k].points() != traj.states[k].points()) {
      ++diffs;
      v.witness = Witness{traj.times[k], {}};
    }
  }
  v.observed = static_cast<double>(diffs);
  v.pass = diffs == 0;
  return v;
}

Configuration perturbed_pair(const RunConfig& cfg, const Configuration& x0, double gamma) {
  std::mt19937_64 rng(cfg.initial.seed ^ 0x5851f42d4c957f2dULL);
  std::normal_distribution<double> normal;
  Matrix pts = x0.points();
  for (Eigen::Index i = 0; i < pts.cols(); ++i) {
    const Vector xi = pts.col(i);
    Vector dir(xi.size());
    for (Eigen::Index r = 0; r < dir.size(); ++r) dir(r) = normal(rng);
    dir -= dir.dot(xi) * xi;
    dir *= cfg.pair_perturbation / dir.norm();
    Vector cand = renormalize(xi + dir).coords();
    if (std::acos(std::clamp(cand(0), -1.0, 1.0)) > gamma) cand = renormalize(xi - dir).coords();
    if (std::acos(std::clamp(cand(0), -1.0, 1.0)) > gamma) {
      throw Error(ErrorCode::PreconditionUnmet, "perturbed partner leaves the cap");
    }
    pts.col(i) = cand;
  }
  return Configuration(std::move(pts));
}

Verdict equilibrium_check(const RunConfig& cfg, const ModelParams& params) {
  Verdict v;
  v.id = "equilibrium-residual";
  v.tolerance = 1e-10;
  if (cfg.frequencies.kind == "structured") {
    const LambdaEquation eq{cfg.kappa, cfg.frequencies.nus, params.profile};
    const auto root = solve_lambda(eq);
    if (!root) {
      return vacuous_verdict(v.id, "NoRoot: F(bracket_low) = " + g17(eq(eq.bracket_low())) + " > 0");
    }
    std::vector<Vector> axes;
    for (const auto& a : cfg.frequencies.axes) axes.push_back(Eigen::Map<const Vector>(a.data(), Eigen::Index(a.size())));
    if (axes.empty()) axes = default_axes(params.omegas.size(), cfg.dim);
    const auto state = build_equilibrium(*root, cfg.frequencies.nus, axes);
    v.observed = residual(params, state.config);
    const double f = std::abs(eq(*root));
    v.pass = v.observed <= v.tolerance && f <= 1e-12;
    v.note = "lambda* = " + g17(*root) + ", |F(lambda*)| = " + g17(f);
    return v;
  }
  if (cfg.frequencies.kind == "zero") {
    const auto x0 = make_initial(cfg);
    const auto cls = classify_zero_frequency(x0, Angle(params.profile.beta()));
    v.observed = residual(params, x0);
    const bool at_rest = v.observed <= v.tolerance;
    v.pass = at_rest == (cls != ZeroFrequencyClass::not_equilibrium);
    v.note = std::string("classification ") + to_string(cls);
    return v;
  }
  throw Error(ErrorCode::PreconditionUnmet, "equilibrium check needs structured or zero frequencies");
}

Verdict evaluate_one(const std::string& id, const RunConfig& cfg, const ModelParams& params, const Trajectory& traj,
                     const VerifyOptions& options) {
  const auto& profile = params.profile;
  if (id == "norm-conservation") return norm_conservation_check(traj);
  if (id == "lemma4.1") return angle_inequality_check(params, traj);
  if (id == "prop4.1") return cap_invariance_check(params, config_gamma(cfg), traj);
  if (id == "lemma4.2") return single_cap_check(params, config_gamma(cfg), traj);
  if (id == "prop4.2") return liminf_check(params, config_gamma(cfg), traj);
  if (id == "thm4.1") return absorption_check(params, config_gamma(cfg), traj);
  if (id == "lemma4.3") {
    const Angle g = config_gamma(cfg);
    return stability_check(params, traj.initial(), perturbed_pair(cfg, traj.initial(), g.radians()), g, cfg.dt,
                           cfg.t_end);
  }
  if (id == "prop5.1") return splitting_check(cfg, params, traj);
  if (id == "thm5.1") {
    require_identical(params);
    return pairwise_monotonicity_check(traj, Angle(profile.beta()));
  }
  if (id == "cor5.1") {
    require_identical(params);
    return dissipation_limit_check(traj, profile);
  }
  if (id == "thm5.2") return aggregation_check(params, config_gamma(cfg), traj);
  if (id == "thm5.3") {
    require_identical(params);
    Verdict v = dichotomy_check(traj, profile);
    if (v.note.find("Escaped") != std::string::npos) {
      const auto dev = free_flow_deviation(traj, params.omegas.front());
      const double d = dev.value_or(std::numeric_limits<double>::infinity());
      v.note += ", free-flow deviation " + g17(d);
      if (!(d <= 1e-8)) v.pass = false;
    }
    return v;
  }
  if (id == "cor5.2") {
    require_identical(params);
    return cross_ratio_check(traj);
  }
  if (id == "thm5.4" || id == "cor5.3") {
    require_identical(params);
    const auto v = sn_membership(params.omegas.front());
    if (!v) throw Error(ErrorCode::PreconditionUnmet, "frequency matrix has no kernel vector orthogonal to e");
    if (id == "thm5.4") return motion_constant_check(traj, *v);
    const Angle g = config_gamma(cfg);
    const CapCondition cond{g, params.kappa, params.max_op_norm(), profile};
    if (!cond.satisfied() || !cap_contains(traj.initial(), g.radians())) {
      throw Error(ErrorCode::PreconditionUnmet, "aggregation hypotheses fail at gamma");
    }
    return inner_decay_check(traj, *v, params.kappa * std::cos(g.radians()) * profile(g.radians()));
  }
  if (id == "equilibrium-residual") return equilibrium_check(cfg, params);
  if (id == "reduction-d1") return reduction_check(cfg, params, traj);
  if (id == "determinism") return determinism_check(cfg, params, traj, options);
  throw Error(ErrorCode::ConfigError, "unknown statement id '" + id + "'");
}

void print_verdicts(std::ostream& err, const std::string& name, const std::vector<Verdict>& verdicts) {
  for (const auto& v : verdicts) {
    err << name << " " << v.id << ": " << (v.vacuous ? "VACUOUS" : v.pass ? "PASS" : "FAIL") << " observed "
        << g17(v.observed) << " threshold " << g17(v.threshold);
    if (!v.note.empty()) err << " (" << v.note << ")";
    err << "\n";
  }
}

fs::path output_dir(const RunConfig& cfg, const CommandOptions& opts) {
  fs::path dir = opts.out_dir ? fs::path(*opts.out_dir) : fs::path(cfg.output.dir);
  fs::create_directories(dir);
  return dir;
}

void apply_overrides(RunConfig& cfg, const CommandOptions& opts) {
  if (opts.seed) cfg.initial.seed = *opts.seed;
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.code() == ErrorCode::ConfigError ? kExitConfig : kExitRuntime;
  } catch (const Json::exception& e) {
    err << "error: ConfigError: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

}  // namespace

RunMetrics compute_metrics(const Trajectory& traj, const InfluenceProfile& profile) {
  RunMetrics m;
  const auto& last = traj.observables.back();
  m.final_order_parameter = last.order_parameter;
  m.final_mean_influence = last.mean_influence;
  for (const auto& o : traj.observables) m.max_phi = std::max(m.max_phi, *std::max_element(o.phis.begin(), o.phis.end()));
  std::vector<double> chords(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) chords[k] = max_pairwise_chord(traj.states[k]);
  m.chord_rate = fit_decay_rate(traj.times, chords);
  try {
    m.dichotomy = to_string(dichotomy_classify(traj, profile).outcome);
  } catch (const Error&) {
    m.dichotomy = "n/a";
  }
  return m;
}

Trajectory run_trajectory(const RunConfig& cfg, const ModelParams& params, const VerifyOptions& options) {
  IntegrateOptions io;
  io.decimation = cfg.decimation;
  io.pre_projection_hook = options.pre_projection_hook;
  return integrate(params, make_initial(cfg), cfg.dt, cfg.t_end, io);
}

std::vector<Verdict> evaluate_checks(const RunConfig& cfg, const ModelParams& params, const Trajectory& traj,
                                     const VerifyOptions& options) {
  std::vector<Verdict> out;
  for (const auto& id : cfg.checks) {
    try {
      out.push_back(evaluate_one(id, cfg, params, traj, options));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ConfigError) throw;
      if (is_hypothesis_error(e.code())) {
        out.push_back(vacuous_verdict(id, e.what()));
      } else {
        Verdict v;
        v.id = id;
        v.pass = false;
        v.note = e.what();
        out.push_back(v);
      }
    }
  }
  return out;
}

Json to_json(const Verdict& v) {
  Json j;
  j["id"] = v.id;
  j["threshold"] = v.threshold;
  j["observed"] = v.observed;
  j["tolerance"] = v.tolerance;
  j["pass"] = v.pass;
  if (v.witness) {
    j["witness"] = {{"time", v.witness->time}, {"indices", v.witness->indices}};
  } else {
    j["witness"] = nullptr;
  }
  j["vacuous"] = v.vacuous;
  j["note"] = v.note;
  return j;
}

Json summary_json(const RunConfig& cfg, const Trajectory& traj, const RunMetrics& metrics,
                  const std::vector<Verdict>& verdicts) {
  Json j;
  j["schema"] = 1;
  j["config"] = to_json(cfg);
  j["records"] = traj.size();
  j["final_time"] = traj.final_time();
  const auto& x = traj.final_state().points();
  Json fs_ = Json::array();
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    Json p = Json::array();
    for (Eigen::Index r = 0; r < x.rows(); ++r) p.push_back(x(r, i));
    fs_.push_back(p);
  }
  j["final_state"] = fs_;
  j["final"] = {{"R", metrics.final_order_parameter},
                {"Ic", metrics.final_mean_influence},
                {"max_phi", metrics.max_phi},
                {"max_norm_drift", traj.max_norm_drift}};
  j["rates"] = {{"chord_decay", metrics.chord_rate ? Json(*metrics.chord_rate) : Json(nullptr)}};
  j["dichotomy"] = metrics.dichotomy;
  Json checks = Json::array();
  for (const auto& v : verdicts) checks.push_back(to_json(v));
  j["checks"] = checks;
  return j;
}

std::string trajectory_csv(const Trajectory& traj) {
  const auto& first = traj.initial();
  std::string out = "t,i";
  for (int r = 0; r <= first.dim(); ++r) out += ",x" + std::to_string(r);
  out += ",phi_i,Ic,R\n";
  out.reserve(out.size() + traj.size() * static_cast<std::size_t>(first.size()) * 26 * (first.dim() + 5));
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto& x = traj.states[k].points();
    const auto& o = traj.observables[k];
    const std::string t = g17(traj.times[k]);
    const std::string tail = "," + g17(o.mean_influence) + "," + g17(o.order_parameter) + "\n";
    for (Eigen::Index i = 0; i < x.cols(); ++i) {
      out += t;
      out += ',';
      out += std::to_string(i);
      for (Eigen::Index r = 0; r < x.rows(); ++r) {
        out += ',';
        out += g17(x(r, i));
      }
      out += ',';
      out += g17(o.phis[static_cast<std::size_t>(i)]);
      out += tail;
    }
  }
  return out;
}

void write_atomic(const std::string& path, const std::string& content) {
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::ConfigError, "cannot write '" + tmp.string() + "'");
    out << content;
    out.flush();
    if (!out) {
      fs::remove(tmp);
      throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
  }
  fs::rename(tmp, target);
}

int cmd_simulate(const std::string& path, const CommandOptions& opts, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig cfg = parse_run_config(load_json(path));
    apply_overrides(cfg, opts);
    const auto dir = output_dir(cfg, opts);
    const auto params = make_params(cfg);
    const auto traj = run_trajectory(cfg, params);
    const auto verdicts = evaluate_checks(cfg, params, traj);
    const auto metrics = compute_metrics(traj, params.profile);
    write_atomic((dir / cfg.output.trajectory).string(), trajectory_csv(traj));
    write_atomic((dir / cfg.output.summary).string(), summary_json(cfg, traj, metrics, verdicts).dump(2) + "\n");
    return int(kExitOk);
  });
}

int cmd_verify(const std::string& path, const CommandOptions& opts, std::ostream& err, const VerifyOptions& verify) {
  return guarded(err, [&] {
    const Json doc = load_json(path);
    std::vector<RunConfig> runs;
    if (doc.is_object() && doc.contains("suite")) {
      if (!doc.contains("schema") || doc["schema"] != 1) throw Error(ErrorCode::ConfigError, "field 'schema': expected 1");
      const Json& suite = doc["suite"];
      if (!suite.is_array() || suite.empty()) throw Error(ErrorCode::ConfigError, "field 'suite': expected a non-empty array");
      for (std::size_t k = 0; k < suite.size(); ++k) {
        Json entry = suite[k];
        if (entry.is_object() && !entry.contains("schema")) entry["schema"] = 1;
        try {
          runs.push_back(parse_run_config(entry));
        } catch (const Error& e) {
          throw Error(ErrorCode::ConfigError, "suite[" + std::to_string(k) + "]: " + e.what());
        }
      }
    } else {
      runs.push_back(parse_run_config(doc));
    }
    for (const auto& r : runs) {
      if (r.checks.empty()) throw Error(ErrorCode::ConfigError, "field 'checks': run '" + r.name + "' lists no statements");
    }

    Json report;
    report["schema"] = 1;
    Json rows = Json::array();
    bool all_pass = true;
    for (auto cfg : runs) {
      apply_overrides(cfg, opts);
      const auto params = make_params(cfg);
      const auto traj = run_trajectory(cfg, params, verify);
      const auto verdicts = evaluate_checks(cfg, params, traj, verify);
      print_verdicts(err, cfg.name, verdicts);
      Json checks = Json::array();
      for (const auto& v : verdicts) {
        checks.push_back(to_json(v));
        if (!v.vacuous && !v.pass) all_pass = false;
      }
      rows.push_back({{"name", cfg.name}, {"checks", checks}});
    }
    report["runs"] = rows;
    report["pass"] = all_pass;
    const auto dir = output_dir(runs.front(), opts);
    write_atomic((dir / runs.front().output.verdicts).string(), report.dump(2) + "\n");
    return int(all_pass ? kExitOk : kExitVerification);
  });
}

int cmd_sweep(const std::string& path, const CommandOptions& opts, std::ostream& err) {
  return guarded(err, [&] {
    SweepConfig sweep = parse_sweep_config(load_json(path));
    if (opts.seed) sweep.base_json["initial"]["seed"] = *opts.seed;
    const int jobs = std::max(1, opts.jobs.value_or(sweep.jobs));

    std::size_t cells = 1;
    for (const auto& axis : sweep.grid) cells *= axis.second.size();
    const bool seeded = sweep.base.initial.kind == "random-in-cap" &&
                        std::none_of(sweep.grid.begin(), sweep.grid.end(),
                                     [](const auto& a) { return a.first == "initial.seed"; });
    const std::uint64_t base_seed = opts.seed.value_or(sweep.base.initial.seed);

    std::vector<Json> rows(cells);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t idx = next++; idx < cells; idx = next++) {
        Json cell = sweep.base_json;
        Json row;
        row["cell"] = idx;
        Json values = Json::object();
        std::size_t rem = idx;
        for (auto it = sweep.grid.rbegin(); it != sweep.grid.rend(); ++it) {
          const auto& v = it->second[rem % it->second.size()];
          rem /= it->second.size();
          set_path(cell, it->first, v);
          values[it->first] = v;
        }
        row["params"] = values;
        if (seeded) cell["initial"]["seed"] = cell_seed(base_seed, idx);
        row["seed"] = cell["initial"].contains("seed") ? cell["initial"]["seed"] : Json(nullptr);
        try {
          const RunConfig cfg = parse_run_config(cell);
          const auto params = make_params(cfg);
          const auto traj = run_trajectory(cfg, params);
          const auto m = compute_metrics(traj, params.profile);
          row["final_R"] = m.final_order_parameter;
          row["final_Ic"] = m.final_mean_influence;
          row["dichotomy"] = m.dichotomy;
          row["max_phi"] = m.max_phi;
          row["chord_rate"] = m.chord_rate ? Json(*m.chord_rate) : Json(nullptr);
          row["error"] = nullptr;
        } catch (const std::exception& e) {
          row["error"] = e.what();
        }
        rows[idx] = std::move(row);
      }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < std::min<int>(jobs, static_cast<int>(cells)); ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::string csv = "cell";
    for (const auto& axis : sweep.grid) csv += "," + axis.first;
    csv += ",seed,final_R,final_Ic,dichotomy,max_phi,chord_rate,error\n";
    auto num = [](const Json& v) { return v.is_number() ? g17(v.get<double>()) : std::string(); };
    for (const auto& row : rows) {
      csv += std::to_string(row["cell"].get<std::size_t>());
      for (const auto& axis : sweep.grid) csv += "," + row["params"][axis.first].dump();
      csv += "," + (row["seed"].is_null() ? std::string() : row["seed"].dump());
      const bool ok = row["error"].is_null();
      csv += "," + (ok ? num(row["final_R"]) : "") + "," + (ok ? num(row["final_Ic"]) : "") + ",";
      csv += (ok ? row["dichotomy"].get<std::string>() : "") + "," + (ok ? num(row["max_phi"]) : "") + ",";
      csv += (ok ? num(row["chord_rate"]) : "") + ",";
      if (!ok) {
        std::string msg = row["error"].get<std::string>();
        std::replace(msg.begin(), msg.end(), ',', ';');
        csv += msg;
      }
      csv += "\n";
    }
    Json report;
    report["schema"] = 1;
    report["sweep"] = to_json(sweep);
    report["rows"] = rows;

    const fs::path dir = opts.out_dir ? fs::path(*opts.out_dir) : fs::path(sweep.base.output.dir);
    fs::create_directories(dir);
    for (const char* ext : {".csv", ".json"}) {
      const fs::path target = dir / (sweep.output + ext);
      std::error_code ec;
      if (fs::equivalent(target, fs::path(path), ec)) {
        throw Error(ErrorCode::ConfigError, "field 'output': report '" + target.string() + "' would overwrite the sweep config");
      }
    }
    write_atomic((dir / (sweep.output + ".csv")).string(), csv);
    write_atomic((dir / (sweep.output + ".json")).string(), report.dump(2) + "\n");
    return int(kExitOk);
  });
}

int cmd_equilibrium(const std::string& path, const CommandOptions& opts, std::ostream& err) {
  return guarded(err, [&] {
    RunConfig cfg = parse_run_config(load_json(path));
    apply_overrides(cfg, opts);
    const auto params = make_params(cfg);
    Json out;
    out["schema"] = 1;
    if (cfg.frequencies.kind == "structured") {
      const LambdaEquation eq{cfg.kappa, cfg.frequencies.nus, params.profile};
      out["bracket_low"] = eq.bracket_low();
      const auto root = solve_lambda(eq);
      if (!root) {
        out["lambda_star"] = nullptr;
        out["phis"] = Json::array();
        out["residual"] = nullptr;
        out["classification"] = "NoRoot";
        out["F_at_bracket_low"] = eq(eq.bracket_low());
      } else {
        std::vector<Vector> axes;
        for (const auto& a : cfg.frequencies.axes) axes.push_back(Eigen::Map<const Vector>(a.data(), Eigen::Index(a.size())));
        if (axes.empty()) axes = default_axes(params.omegas.size(), cfg.dim);
        const auto state = build_equilibrium(*root, cfg.frequencies.nus, axes);
        const double r = residual(params, state.config);
        out["lambda_star"] = *root;
        out["phis"] = state.phis;
        out["residual"] = r;
        out["F_at_root"] = eq(*root);
        out["classification"] = r <= 1e-10 ? "StructuredEquilibrium" : "ResidualTooLarge";
      }
    } else {
      const auto x0 = make_initial(cfg);
      out["lambda_star"] = nullptr;
      out["phis"] = polar_angles(x0);
      out["residual"] = residual(params, x0);
      if (cfg.frequencies.kind == "zero") {
        out["classification"] = to_string(classify_zero_frequency(x0, Angle(params.profile.beta())));
      } else if (cfg.dim == 2 && params.identical_frequencies()) {
        const auto rep = classify_s2(x0, params.omegas.front(), cfg.kappa, params.profile);
        out["classification"] = rep.equilibrium ? "S2Equilibrium" : "S2NotEquilibrium";
        out["axis_case"] = rep.axis_case == AxisCase::parallel ? "parallel" : "perpendicular";
        out["mu"] = rep.mu;
        out["on_great_circles"] = rep.on_great_circles;
        Json branches = Json::array();
        for (const auto& p : rep.particles) branches.push_back(p.branch);
        out["branches"] = branches;
      } else {
        throw Error(ErrorCode::ConfigError,
                    "field 'frequencies': equilibrium analysis needs structured, zero, or d = 2 identical frequencies");
      }
    }
    const auto dir = output_dir(cfg, opts);
    write_atomic((dir / "equilibrium.json").string(), out.dump(2) + "\n");
    return int(kExitOk);
  });
}

int cmd_plotdata(const std::string& path, const CommandOptions& opts, std::ostream& err) {
  static const std::vector<std::string> kinds = {"angles-vs-time", "order-parameter", "pairwise-log", "phase-diagram"};
  if (std::find(kinds.begin(), kinds.end(), opts.kind) == kinds.end()) {
    err << "error: ConfigError: unknown plot kind '" << opts.kind << "'\n";
    return kExitConfig;
  }
  return guarded(err, [&] {
    std::string out;
    if (opts.kind == "phase-diagram") {
      const Json report = load_json(path);
      if (!report.contains("rows")) throw Error(ErrorCode::ConfigError, "'" + path + "' is not a sweep report");
      for (const auto& row : report["rows"]) {
        const auto& params = row["params"];
        const double x = params.empty() || !params.begin()->is_number() ? 0.0 : params.begin()->get<double>();
        double code = std::numeric_limits<double>::quiet_NaN();
        double r = std::numeric_limits<double>::quiet_NaN();
        if (row["error"].is_null()) {
          const auto cls = row["dichotomy"].get<std::string>();
          code = cls == "Synchronized" ? 1.0 : cls == "Escaped" ? -1.0 : 0.0;
          r = row["final_R"].get<double>();
        }
        out += g17(x) + " " + g17(code) + " " + g17(r) + "\n";
      }
    } else {
      std::ifstream in(path);
      if (!in) throw Error(ErrorCode::ConfigError, "cannot read '" + path + "'");
      std::string line;
      std::getline(in, line);
      const auto header = split_csv_line(line);
      if (header.size() < 7 || header[0] != "t" || header[1] != "i") {
        throw Error(ErrorCode::ConfigError, "'" + path + "' is not a trajectory CSV");
      }
      const std::size_t ncoord = header.size() - 5;
      std::vector<double> times;
      std::vector<std::vector<std::vector<double>>> records;
      std::vector<double> order;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size()) throw Error(ErrorCode::ConfigError, "ragged row in '" + path + "'");
        const double t = std::stod(cells[0]);
        if (opts.kind == "angles-vs-time") {
          out += cells[0] + " " + cells[1] + " " + cells[2 + ncoord] + "\n";
          continue;
        }
        if (times.empty() || times.back() != t) {
          times.push_back(t);
          records.emplace_back();
          order.push_back(std::stod(cells.back()));
        }
        std::vector<double> x(ncoord);
        for (std::size_t r = 0; r < ncoord; ++r) x[r] = std::stod(cells[2 + r]);
        records.back().push_back(std::move(x));
      }
      for (std::size_t k = 0; k < times.size(); ++k) {
        if (opts.kind == "order-parameter") {
          out += g17(times[k]) + " " + g17(order[k]) + "\n";
          continue;
        }
        double m = 0.0;
        const auto& pts = records[k];
        for (std::size_t i = 0; i < pts.size(); ++i) {
          for (std::size_t j = i + 1; j < pts.size(); ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < ncoord; ++r) s += (pts[i][r] - pts[j][r]) * (pts[i][r] - pts[j][r]);
            m = std::max(m, std::sqrt(s));
          }
        }
        out += g17(times[k]) + " " + g17(m > kConvergedFloor ? std::log(m) : kConvergedMarker) + "\n";
      }
    }
    const fs::path dir = opts.out_dir ? fs::path(*opts.out_dir) : fs::path(path).parent_path();
    if (!dir.empty()) fs::create_directories(dir);
    write_atomic((dir / (opts.kind + ".dat")).string(), out);
    return int(kExitOk);
  });
}

}  // namespace winfree
