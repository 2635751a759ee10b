// Desk-scale acceptance run. One line per criterion; exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "winfree/checkers.hpp"
#include "winfree/equilibria.hpp"
#include "winfree/experiment.hpp"

using namespace winfree;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Record {
  Json config;
  std::size_t csv_hash;
  std::size_t json_hash;
};

std::vector<Record> g_runs;

struct Result {
  RunConfig cfg;
  ModelParams params;
  Trajectory traj;
  RunMetrics metrics;
  std::vector<Verdict> verdicts;
};

Result execute(const Json& j) {
  Result r;
  r.cfg = parse_run_config(j);
  r.params = make_params(r.cfg);
  r.traj = run_trajectory(r.cfg, r.params);
  r.metrics = compute_metrics(r.traj, r.params.profile);
  r.verdicts = evaluate_checks(r.cfg, r.params, r.traj);
  return r;
}

/// Runs the config and remembers output hashes for the determinism pass.
Result run(const Json& j) {
  Result r = execute(j);
  const std::hash<std::string> h;
  g_runs.push_back({j, h(trajectory_csv(r.traj)), h(summary_json(r.cfg, r.traj, r.metrics, r.verdicts).dump())});
  return r;
}

const Verdict& verdict(const Result& r, const std::string& id) {
  for (const auto& v : r.verdicts)
    if (v.id == id) return v;
  throw std::runtime_error("no verdict for " + id);
}

std::string num(double x, int digits = 3) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng_); }
  int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng_); }
  std::uint64_t seed() { return rng_() % 1000000; }

  Vector gaussian(int m) {
    std::normal_distribution<double> g;
    Vector v(m);
    for (int k = 0; k < m; ++k) v[k] = g(rng_);
    return v;
  }

  /// Unit vector of R^m orthogonal to e.
  Vector orthogonal_to_e(int m) {
    Vector v = gaussian(m);
    v[0] = 0.0;
    return v.normalized();
  }

  Json skew(int m, double op_norm) {
    if (op_norm == 0.0) return rows(Matrix::Zero(m, m));
    Matrix a(m, m);
    for (int r = 0; r < m; ++r) a.row(r) = gaussian(m).transpose();
    Matrix s = a - a.transpose();
    s *= op_norm / operator_norm(SkewMatrix::from_matrix(s));
    return rows(s);
  }

  /// Explicit frequencies with the largest operator norm equal to w.
  Json explicit_frequencies(int n, int m, double w) {
    Json mats = Json::array();
    for (int i = 0; i < n; ++i) mats.push_back(skew(m, i == 0 ? w : uniform(0.0, w)));
    return {{"kind", "explicit"}, {"matrices", mats}};
  }

  static Json rows(const Matrix& s) {
    Json out = Json::array();
    for (Eigen::Index r = 0; r < s.rows(); ++r) {
      Json row = Json::array();
      for (Eigen::Index c = 0; c < s.cols(); ++c) row.push_back(s(r, c));
      out.push_back(row);
    }
    return out;
  }

  static Json point(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

 private:
  std::mt19937_64 rng_;
};

Json base(const std::string& name, int dim, int n, double kappa, const std::string& profile) {
  return {{"schema", 1},
          {"name", name},
          {"dim", dim},
          {"n", n},
          {"kappa", kappa},
          {"profile", {{"kind", profile}}},
          {"dt", 1e-3}};
}

Json cap_initial(double gamma, std::uint64_t seed) {
  return {{"kind", "random-in-cap"}, {"gamma", gamma}, {"seed", seed}};
}

double tilde(const std::string& profile, double phi) {
  return profile == "builtin-I1" ? InfluenceProfile::builtin_i1()(phi) : InfluenceProfile::builtin_i2()(phi);
}

/// Identical rotation of rate w: about a random axis in e⊥ (d = 2), in a plane
/// through e (d = 3) or the planar generator (d = 1).
Json identical_in_sn(Gen& g, int dim, double w) {
  Json f = {{"kind", "identical-rotation"}, {"rate", w}};
  if (dim == 2) f["axis"] = Gen::point(g.orthogonal_to_e(3));
  if (dim == 3) {
    Vector e = Vector::Zero(4);
    e[0] = 1.0;
    f["plane"] = {Gen::point(e), Gen::point(g.orthogonal_to_e(4))};
  }
  return f;
}

/// Tally of verdicts for one id across instances. `worst` is the largest
/// observed value, or the largest observed − threshold when `excess` is set.
struct Tally {
  bool excess = false;
  int total = 0, passed = 0;
  double worst = -std::numeric_limits<double>::infinity();
  std::string first_failure;

  void add(const Verdict& v) {
    ++total;
    if (v.vacuous) {
      if (first_failure.empty()) first_failure = "vacuous: " + v.note;
      return;
    }
    if (v.pass) ++passed;
    else if (first_failure.empty()) first_failure = "observed " + num(v.observed) + " vs " + num(v.threshold) + " " + v.note;
    worst = std::max(worst, excess ? v.observed - v.threshold : v.observed);
  }
  bool ok() const { return total > 0 && passed == total; }
  std::string summary(const std::string& label) const {
    std::string s = std::to_string(passed) + "/" + std::to_string(total) + " " + label + " " + num(worst);
    if (!first_failure.empty()) s += " [" + first_failure + "]";
    return s;
  }
};

Outcome norm_conservation() {
  Gen g(101);
  Tally t;
  for (int k = 0; k < 20; ++k) {
    const int dim = g.integer(1, 3), n = g.integer(2, 32);
    Json j = base("norm", dim, n, g.uniform(0.0, 4.0), k % 2 ? "builtin-I2" : "builtin-I1");
    j["frequencies"] = g.explicit_frequencies(n, dim + 1, g.uniform(0.0, 1.5));
    j["initial"] = cap_initial(g.uniform(0.2, 3.0), g.seed());
    j["t_end"] = 10.0;
    j["checks"] = {"norm-conservation"};
    t.add(verdict(run(j), "norm-conservation"));
  }
  return {t.ok(), t.summary("instances, worst drift")};
}

Outcome reduction() {
  Gen g(202);
  Tally t;
  for (int k = 0; k < 20; ++k) {
    const int n = g.integer(2, 16);
    Json j = base("reduction", 1, n, g.uniform(0.0, 3.0), k % 2 ? "builtin-I2" : "builtin-I1");
    Json mats = Json::array();
    for (int i = 0; i < n; ++i) mats.push_back(Gen::rows(SkewMatrix::planar(g.uniform(-1.0, 1.0)).matrix()));
    j["frequencies"] = {{"kind", "explicit"}, {"matrices", mats}};
    j["initial"] = cap_initial(g.uniform(0.3, 3.0), g.seed());
    j["t_end"] = 10.0;
    j["checks"] = {"reduction-d1"};
    t.add(verdict(run(j), "reduction-d1"));
  }
  return {t.ok(), t.summary("seeds, worst angle deviation")};
}

Outcome invariant_cap() {
  Gen g(303);
  Tally t{true};
  for (int k = 0; k < 20; ++k) {
    const int dim = g.integer(1, 3), n = g.integer(2, 32);
    const std::string prof = k % 2 ? "builtin-I2" : "builtin-I1";
    const double gamma = prof == "builtin-I1" ? g.uniform(0.1, 0.9) : g.uniform(0.05, 0.45);
    const double kappa = g.uniform(1.0, 4.0);
    const double w = g.uniform(0.1, 0.9) * kappa * std::sin(gamma) * tilde(prof, gamma);
    Json j = base("cap", dim, n, kappa, prof);
    j["frequencies"] = g.explicit_frequencies(n, dim + 1, w);
    j["initial"] = cap_initial(gamma, g.seed());
    j["gamma"] = gamma;
    j["t_end"] = 50.0;
    j["checks"] = {"prop4.1"};
    t.add(verdict(run(j), "prop4.1"));
  }
  return {t.ok(), t.summary("instances, worst max phi - gamma")};
}

Outcome absorption() {
  Gen g(404);
  Tally t{true};
  const auto i1 = InfluenceProfile::builtin_i1();
  double longest = 0.0;
  while (t.total < 10) {
    const int n = g.integer(3, 8);
    const double gamma = g.uniform(0.3, 0.6);
    const double w = g.uniform(0.005, 0.05);
    const double kc = critical_coupling(n, w, Angle(1.0), Angle(gamma), i1);
    const double cap_kappa = n * w / (std::sin(gamma) * i1(gamma));
    const double kappa = std::max(2.0 * kc, 1.05 * cap_kappa) * g.uniform(1.0, 1.5);
    Json pts = Json::array();
    std::vector<double> phis;
    for (int i = 0; i < n; ++i) {
      const double phi = i == 0 ? g.uniform(0.0, gamma) : g.uniform(0.0, 1.5);
      phis.push_back(phi);
      Vector x = std::sin(phi) * g.orthogonal_to_e(3);
      x[0] = std::cos(phi);
      pts.push_back(Gen::point(x));
    }
    double bound = 0.0;
    for (double phi : phis)
      if (phi > 1.0) bound = std::max(bound, transition_bound(n, kappa, Angle(1.0), Angle(gamma), i1, Angle(phi), w, w).t_j);
    if (bound > 150.0) continue;
    longest = std::max(longest, bound);
    Json j = base("absorption", 2, n, kappa, "builtin-I1");
    j["frequencies"] = g.explicit_frequencies(n, 3, w);
    j["initial"] = {{"kind", "explicit"}, {"points", pts}};
    j["gamma"] = gamma;
    j["t_end"] = std::min(200.0, std::max(20.0, 1.3 * bound + 5.0));
    j["checks"] = {"thm4.1"};
    t.add(verdict(run(j), "thm4.1"));
  }
  return {t.ok(), t.summary("instances (kappa >= 2 kappa_c), worst post-bound phi - beta") + ", longest T bound " + num(longest)};
}

Outcome contraction() {
  Gen g(505);
  Tally t;
  std::string kc_note;
  for (int k = 0; k < 10; ++k) {
    const int dim = g.integer(1, 3), n = g.integer(3, 12);
    const double gamma = g.uniform(0.05, 0.2), kappa = g.uniform(0.5, 3.0);
    const double itilde = 1.0 - gamma / 1.5;
    const double w = g.uniform(0.0, 0.5) * kappa * std::sin(gamma) * itilde / n;
    Json j = base("contraction", dim, n, kappa, "table");
    j["profile"] = {{"kind", "table"}, {"beta", 1.5}, {"table", {{0.0, 1.0}, {1.5, 0.0}}}};
    j["frequencies"] = g.explicit_frequencies(n, dim + 1, w);
    j["initial"] = cap_initial(gamma, g.seed());
    j["gamma"] = gamma;
    j["t_end"] = 10.0;
    j["checks"] = {"lemma4.3"};
    const auto r = run(j);
    const auto& v = verdict(r, "lemma4.3");
    if (kc_note.empty()) kc_note = v.note;
    t.add(v);
  }
  return {t.ok(), t.summary("pairs, worst slope") + "; first pair " + kc_note};
}

Outcome aggregation() {
  Gen g(606);
  Tally t{true};
  for (int k = 0; k < 10; ++k) {
    const int dim = g.integer(1, 3), n = g.integer(3, 16);
    const std::string prof = k % 2 ? "builtin-I2" : "builtin-I1";
    const double gamma = prof == "builtin-I1" ? g.uniform(0.1, 0.5) : g.uniform(0.05, 0.3);
    const double kappa = g.uniform(1.0, 4.0);
    const double w = g.uniform(0.0, 0.9) * kappa * std::sin(gamma) * tilde(prof, gamma);
    Json j = base("aggregation", dim, n, kappa, prof);
    j["frequencies"] = identical_in_sn(g, dim, w);
    j["initial"] = cap_initial(gamma, g.seed());
    j["gamma"] = gamma;
    j["t_end"] = 10.0;
    j["checks"] = {"thm5.2"};
    t.add(verdict(run(j), "thm5.2"));
  }
  return {t.ok(), t.summary("instances, worst fitted slope + 0.95 lambda")};
}

Outcome monotonicity() {
  Gen g(707);
  Tally angles, order;
  int synced = 0, escaped = 0;
  std::string extremes;
  auto record = [&](const Result& r) {
    angles.add(verdict(r, "thm5.1"));
    order.add(verdict(r, "thm5.3"));
    const auto& v = verdict(r, "thm5.3");
    const double final_ic = r.traj.observables.back().mean_influence;
    if (r.metrics.dichotomy == "Synchronized" && r.metrics.final_order_parameter > 0.999 && v.pass) ++synced;
    if (r.metrics.dichotomy == "Escaped" && final_ic < 1e-12 && v.pass) ++escaped;
  };
  for (int k = 0; k < 10; ++k) {
    const int n = g.integer(3, 12);
    const double spread = g.uniform(0.05, 0.25);
    const double psi = g.uniform(0.0, 2.5);
    Vector c = std::sin(psi) * g.orthogonal_to_e(3);
    c[0] = std::cos(psi);
    Json pts = Json::array();
    for (int i = 0; i < n; ++i) {
      Vector tng = g.gaussian(3);
      tng -= tng.dot(c) * c;
      const double a = spread / 2 * g.uniform(0.0, 1.0);
      pts.push_back(Gen::point((std::cos(a) * c + std::sin(a) * tng.normalized()).normalized()));
    }
    Json j = base("monotone", 2, n, g.uniform(0.2, 4.0), "builtin-I1");
    j["frequencies"] = {{"kind", "identical-rotation"}, {"rate", g.uniform(0.0, 2.0)}, {"axis", Gen::point(g.gaussian(3).normalized())}};
    j["initial"] = {{"kind", "explicit"}, {"points", pts}};
    j["t_end"] = 10.0;
    j["checks"] = {"thm5.1", "thm5.3"};
    record(run(j));
  }

  Json sync = base("synchronized", 2, 8, 2.0, "builtin-I1");
  sync["frequencies"] = {{"kind", "identical-rotation"}, {"rate", 0.2}, {"axis", {0, 0, 1}}};
  sync["initial"] = cap_initial(0.25, 7);
  sync["t_end"] = 20.0;
  sync["checks"] = {"thm5.1", "thm5.3"};
  const auto rs = run(sync);
  record(rs);

  const double h = std::sqrt(1 - 0.01);
  Json esc = base("escaped", 2, 4, 1.0, "builtin-I1");
  esc["frequencies"] = {{"kind", "identical-rotation"}, {"rate", 1.0}, {"axis", {0, 1, 0}}};
  esc["initial"] = {{"kind", "explicit"}, {"points", {{0.1, h, 0}, {0, h, 0.1}, {-0.1, h, 0}, {0, h, -0.1}}}};
  esc["t_end"] = 10.0;
  esc["checks"] = {"thm5.1", "thm5.3"};
  const auto re = run(esc);
  record(re);

  extremes = "; synchronized final R " + num(rs.metrics.final_order_parameter) + " (" + rs.metrics.dichotomy +
             "), escaped run " + re.metrics.dichotomy + " with final I_c " +
             num(re.traj.observables.back().mean_influence) + " and " + verdict(re, "thm5.3").note;
  const bool pass = angles.ok() && order.ok() && synced >= 1 && escaped >= 1;
  return {pass, "angles " + angles.summary("runs, worst increase") + "; order " + order.summary("runs, worst drop") +
                    "; Synchronized " + std::to_string(synced) + ", Escaped " + std::to_string(escaped) + extremes};
}

Outcome motion_constants() {
  Gen g(808);
  Tally cross, ratio, decay;
  for (int k = 0; k < 10; ++k) {
    const int dim = g.integer(2, 3), n = g.integer(4, 12);
    // Chords shrink like exp(-kappa t); above kappa T ~ 15 they approach roundoff
    // and the ratios below are dominated by rounding rather than dynamics.
    const double gamma = g.uniform(0.1, 0.4), kappa = g.uniform(0.3, 1.5);
    const double w = g.uniform(0.2, 0.9) * kappa * std::sin(gamma) * (1.0 - gamma);
    Json j = base("constants", dim, n, kappa, "builtin-I1");
    j["frequencies"] = identical_in_sn(g, dim, w);
    j["initial"] = cap_initial(gamma, g.seed());
    j["gamma"] = gamma;
    j["t_end"] = 10.0;
    j["checks"] = {"cor5.2", "thm5.4", "cor5.3"};
    const auto r = run(j);
    cross.add(verdict(r, "cor5.2"));
    ratio.add(verdict(r, "thm5.4"));
    decay.add(verdict(r, "cor5.3"));
  }
  return {cross.ok() && ratio.ok() && decay.ok(), "cross-ratio " + cross.summary("runs, worst drift") +
                                                      "; <.,v> ratio " + ratio.summary("runs, worst drift") +
                                                      "; inner decay " + decay.summary("runs, worst slope")};
}

Outcome splitting() {
  Gen g(909);
  Tally t;
  for (int k = 0; k < 10; ++k) {
    const int dim = g.integer(2, 3), n = g.integer(2, 16);
    Json j = base("splitting", dim, n, g.uniform(0.0, 3.0), k % 2 ? "builtin-I2" : "builtin-I1");
    const double rate = g.uniform(0.1, 2.0);
    if (dim == 2) {
      j["frequencies"] = {{"kind", "identical-rotation"}, {"rate", rate}, {"axis", {1, 0, 0}}};
    } else {
      Vector u = g.orthogonal_to_e(4), w = g.orthogonal_to_e(4);
      w = (w - w.dot(u) * u).normalized();
      j["frequencies"] = {{"kind", "identical-rotation"}, {"rate", rate}, {"plane", {Gen::point(u), Gen::point(w)}}};
    }
    j["initial"] = cap_initial(g.uniform(0.2, 2.0), g.seed());
    j["t_end"] = 10.0;
    j["checks"] = {"prop5.1"};
    t.add(verdict(run(j), "prop5.1"));
  }
  return {t.ok(), t.summary("seeds, worst deviation")};
}

/// Independent root oracle for λ/κ − mean Ĩ₁(arcsin(ν/λ)): dense scan, then bisection.
double oracle_lambda(double kappa, const std::vector<double>& nus) {
  auto f = [&](double lam) {
    double s = 0.0;
    for (double nu : nus) s += std::max(0.0, 1.0 - std::asin(std::abs(nu) / lam));
    return lam / kappa - s / static_cast<double>(nus.size());
  };
  double lo = 0.0;
  for (double nu : nus) lo = std::max(lo, std::abs(nu) / std::sin(1.0));
  double prev = lo;
  for (int k = 1; k <= 100000; ++k) {
    const double x = lo + (kappa + 1.0 - lo) * k / 100000.0;
    if (f(prev) < 0.0 && f(x) >= 0.0) {
      double a = prev, b = x;
      for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        (f(m) < 0.0 ? a : b) = m;
      }
      return 0.5 * (a + b);
    }
    prev = x;
  }
  return std::nan("");
}

Configuration columns(const std::vector<Eigen::Vector3d>& v) {
  Matrix m(3, static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) m.col(static_cast<Eigen::Index>(i)) = v[i];
  return Configuration(m);
}

Outcome equilibria() {
  std::ostringstream d;
  bool pass = true;
  const auto i1 = InfluenceProfile::builtin_i1();

  const std::vector<double> nus{0.5, 0.05};
  const LambdaEquation doc{2.0, nus, i1};
  const auto lam = solve_lambda(doc);
  const double oracle = oracle_lambda(2.0, nus);
  pass = pass && lam && std::abs(*lam - oracle) <= 1e-3 && std::abs(*lam - 1.664) <= 1e-3;
  d << "lambda* " << (lam ? num(*lam, 10) : "none") << " vs oracle " << num(oracle, 10);

  Gen g(1010);
  double worst_f = 0.0, worst_res = 0.0;
  int solved = 0;
  for (int k = 0; k < 20; ++k) {
    const int n = g.integer(1, 6), dim = g.integer(2, 3);
    const double kappa = g.uniform(1.0, 5.0);
    std::vector<double> ns;
    for (int i = 0; i < n; ++i) ns.push_back(g.uniform(-0.3, 0.3));
    const LambdaEquation eq{kappa, ns, i1};
    const auto root = solve_lambda(eq);
    if (!root) continue;
    ++solved;
    const auto axes = default_axes(ns.size(), dim);
    const auto st = build_equilibrium(*root, ns, axes);
    ModelParams p;
    p.dim = dim;
    p.kappa = kappa;
    p.omegas = structured_frequencies(ns, axes);
    worst_f = std::max(worst_f, std::abs(eq(*root)));
    worst_res = std::max(worst_res, residual(p, st.config));
  }
  pass = pass && solved >= 15 && worst_f <= 1e-12 && worst_res <= 1e-10;
  d << "; " << solved << "/20 structured instances solved, max |F| " << num(worst_f) << ", max residual "
    << num(worst_res);

  const bool no_root = !solve_lambda(LambdaEquation{2.0, {0.5}, i1});
  pass = pass && no_root;
  d << "; N=1 instance " << (no_root ? "NoRoot" : "found a root");

  const Eigen::Vector3d e(1, 0, 0);
  const auto set_b = classify_zero_frequency(columns({-e, e, -e}), Angle(1.0));
  const auto at_beta = columns({Eigen::Vector3d(std::cos(1.0), std::sin(1.0), 0), Eigen::Vector3d(std::cos(1.0), 0, -std::sin(1.0))});
  const auto set_a = classify_zero_frequency(at_beta, Angle(1.0));
  const auto neither = classify_zero_frequency(columns({e, Eigen::Vector3d(0.8, 0.6, 0)}), Angle(1.0));
  pass = pass && set_b == ZeroFrequencyClass::set_b && set_a == ZeroFrequencyClass::set_a &&
         neither == ZeroFrequencyClass::not_equilibrium;
  d << "; zero-frequency " << to_string(set_b) << "/" << to_string(set_a) << "/" << to_string(neither);

  int branch_ok = 0;
  for (int k = 0; k < 10; ++k) {
    const double phi = g.uniform(0.05, 0.9), kappa = g.uniform(0.5, 4.0);
    const double rate = kappa * (1.0 - phi) * std::sin(phi);
    const auto x = columns({Eigen::Vector3d(std::cos(phi), 0, -std::sin(phi))});
    const auto rep = classify_s2(x, SkewMatrix::hat(Eigen::Vector3d(0, rate, 0)), kappa, i1);
    if (rep.on_great_circles && rep.equilibrium && rep.residual <= 1e-10) ++branch_ok;
  }
  const auto wide = InfluenceProfile::table("wide", 2.0, {{0.0, 1.0}, {2.0, 0.0}});
  for (int k = 0; k < 10; ++k) {
    const double kappa = g.uniform(0.2, 1.0), lambda = g.uniform(1.0, 2.0);
    const double mu = kappa * wide(kPi / 2) / lambda, s = std::sqrt(1 - mu * mu);
    const auto x = columns({Eigen::Vector3d(0, s, -mu), Eigen::Vector3d(0, -s, -mu)});
    const auto rep = classify_s2(x, SkewMatrix::hat(Eigen::Vector3d(0, lambda, 0)), kappa, wide);
    if (rep.on_great_circles && rep.equilibrium && rep.residual <= 1e-10) ++branch_ok;
  }
  pass = pass && branch_ok == 20;
  d << "; S2 branch points " << branch_ok << "/20 on the great circles";
  return {pass, d.str()};
}

Outcome determinism() {
  std::size_t same = 0;
  std::string first_diff;
  const std::hash<std::string> h;
  for (const auto& rec : g_runs) {
    const auto r = execute(rec.config);
    const bool eq = h(trajectory_csv(r.traj)) == rec.csv_hash &&
                    h(summary_json(r.cfg, r.traj, r.metrics, r.verdicts).dump()) == rec.json_hash;
    if (eq) ++same;
    else if (first_diff.empty()) first_diff = " [first difference: " + rec.config["name"].get<std::string>() + "]";
  }
  return {!g_runs.empty() && same == g_runs.size(),
          std::to_string(same) + "/" + std::to_string(g_runs.size()) + " runs byte-identical on repeat" + first_diff};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget;
    std::function<Outcome()> body;
  };
  const std::vector<Criterion> criteria{
      {1, "norm conservation", 60, norm_conservation},
      {2, "circle reduction", 30, reduction},
      {3, "invariant cap", 60, invariant_cap},
      {4, "finite-time absorption", 60, absorption},
      {5, "l1 contraction", 90, contraction},
      {6, "exponential aggregation", 60, aggregation},
      {7, "monotonicity and dichotomy", 120, monotonicity},
      {8, "constants of motion", 60, motion_constants},
      {9, "solution splitting", 60, splitting},
      {10, "equilibrium pipeline", 10, equilibria},
      {11, "determinism", 0, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = c.budget <= 0 || secs < c.budget;
    const bool pass = o.pass && in_budget;
    failures += !pass;
    std::cout << "criterion " << c.id << " " << c.name << ": " << (pass ? "PASS" : "FAIL") << " " << o.detail << " ("
              << num(secs) << " s";
    if (c.budget > 0) std::cout << " of " << num(c.budget) << " s budget";
    std::cout << ")" << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
