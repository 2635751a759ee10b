#include "winfree/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "winfree/equilibria.hpp"
#include "winfree/error.hpp"

namespace winfree {

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::ConfigError, "field '" + field + "': " + what);
}

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

// Typed access to one JSON object, reporting failures by dotted field path.
class Fields {
 public:
  Fields(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) bad(path_.empty() ? "<root>" : path_, "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }
  const Json& raw(const std::string& key) const {
    if (!has(key)) bad(field(key), "missing");
    return j_.at(key);
  }
  std::string field(const std::string& key) const { return join(path_, key); }

  double number(const std::string& key) const {
    const Json& v = raw(key);
    if (!v.is_number()) bad(field(key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) bad(field(key), "must be finite");
    return d;
  }
  double number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

  long long integer(const std::string& key) const {
    const Json& v = raw(key);
    if (!v.is_number_integer()) bad(field(key), "expected an integer");
    return v.get<long long>();
  }
  long long integer(const std::string& key, long long fallback) const { return has(key) ? integer(key) : fallback; }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) const {
    if (!has(key)) return fallback;
    const Json& v = raw(key);
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<long long>() < 0)) {
      bad(field(key), "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::string string(const std::string& key) const {
    const Json& v = raw(key);
    if (!v.is_string()) bad(field(key), "expected a string");
    return v.get<std::string>();
  }
  std::string string(const std::string& key, const std::string& fallback) const {
    return has(key) ? string(key) : fallback;
  }

  std::vector<double> vector(const std::string& key) const { return to_vector(raw(key), field(key)); }
  std::vector<std::vector<double>> rows(const std::string& key) const {
    const Json& v = raw(key);
    if (!v.is_array()) bad(field(key), "expected an array of arrays");
    std::vector<std::vector<double>> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(to_vector(v[i], field(key) + "[" + std::to_string(i) + "]"));
    return out;
  }

  static std::vector<double> to_vector(const Json& v, const std::string& where) {
    if (!v.is_array()) bad(where, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) bad(where, "expected an array of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  void reject_unknown(std::initializer_list<const char*> allowed) const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return it.key() == a; })) {
        bad(field(it.key()), "unknown field");
      }
    }
  }

 private:
  const Json& j_;
  std::string path_;
};

Vector to_eigen(const std::vector<double>& v) { return Eigen::Map<const Vector>(v.data(), Eigen::Index(v.size())); }

void check_schema(const Fields& f) {
  if (!f.has("schema")) bad("schema", "missing");
  if (f.integer("schema") != 1) bad("schema", "unsupported version (expected 1)");
}

ProfileSpec parse_profile(const Fields& f) {
  f.reject_unknown({"name", "kind", "beta", "table"});
  ProfileSpec p;
  p.kind = f.string("kind");
  if (p.kind == "builtin-I1") {
    p.name = f.string("name", "I1");
    p.beta = 1.0;
  } else if (p.kind == "builtin-I2") {
    p.name = f.string("name", "I2");
    p.beta = 0.5;
  } else if (p.kind == "table") {
    p.name = f.string("name", "table");
    p.beta = f.number("beta");
    for (const auto& row : f.rows("table")) {
      if (row.size() != 2) bad(f.field("table"), "each node is [angle, value]");
      p.table.emplace_back(row[0], row[1]);
    }
  } else {
    bad(f.field("kind"), "unknown profile kind '" + p.kind + "'");
  }
  if (f.has("beta") && p.kind != "table" && f.number("beta") != p.beta) {
    bad(f.field("beta"), "built-in profiles fix beta");
  }
  return p;
}

FrequencySpec parse_frequencies(const Fields& f, int dim, int n) {
  FrequencySpec s;
  s.kind = f.string("kind");
  if (s.kind == "zero") {
    f.reject_unknown({"kind"});
  } else if (s.kind == "identical-rotation") {
    f.reject_unknown({"kind", "rate", "axis", "plane"});
    s.rate = f.number("rate");
    if (f.has("axis")) {
      if (dim != 2) bad(f.field("axis"), "axis form needs dim = 2; use plane");
      s.axis = f.vector("axis");
      if (s.axis.size() != 3) bad(f.field("axis"), "expected 3 entries");
      if (std::abs(to_eigen(s.axis).norm() - 1.0) > 1e-9) bad(f.field("axis"), "must be a unit vector");
    } else if (f.has("plane")) {
      s.plane = f.rows("plane");
      if (s.plane.size() != 2 || s.plane[0].size() != std::size_t(dim + 1) || s.plane[1].size() != std::size_t(dim + 1)) {
        bad(f.field("plane"), "expected two vectors of length dim + 1");
      }
      const Vector u = to_eigen(s.plane[0]);
      const Vector w = to_eigen(s.plane[1]);
      if (std::abs(u.norm() - 1.0) > 1e-9 || std::abs(w.norm() - 1.0) > 1e-9 || std::abs(u.dot(w)) > 1e-9) {
        bad(f.field("plane"), "vectors must be orthonormal");
      }
    } else if (dim != 1) {
      bad(f.field("axis"), "missing (needed unless dim = 1)");
    }
  } else if (s.kind == "structured") {
    f.reject_unknown({"kind", "nus", "axes"});
    s.nus = f.vector("nus");
    if (s.nus.size() != std::size_t(n)) bad(f.field("nus"), "expected " + std::to_string(n) + " entries");
    if (f.has("axes")) {
      s.axes = f.rows("axes");
      if (s.axes.size() != std::size_t(n)) bad(f.field("axes"), "expected " + std::to_string(n) + " entries");
      for (std::size_t i = 0; i < s.axes.size(); ++i) {
        const std::string where = f.field("axes") + "[" + std::to_string(i) + "]";
        if (s.axes[i].size() != std::size_t(dim + 1)) bad(where, "expected dim + 1 entries");
        const Vector a = to_eigen(s.axes[i]);
        if (std::abs(a.norm() - 1.0) > 1e-12 || std::abs(a(0)) > 1e-12) bad(where, "must be a unit vector orthogonal to e");
      }
    }
  } else if (s.kind == "explicit") {
    f.reject_unknown({"kind", "matrices"});
    const Json& ms = f.raw("matrices");
    if (!ms.is_array() || ms.size() != std::size_t(n)) {
      bad(f.field("matrices"), "expected " + std::to_string(n) + " matrices");
    }
    for (std::size_t k = 0; k < ms.size(); ++k) {
      const std::string where = f.field("matrices") + "[" + std::to_string(k) + "]";
      if (!ms[k].is_array() || ms[k].size() != std::size_t(dim + 1)) bad(where, "expected dim + 1 rows");
      Matrix m(dim + 1, dim + 1);
      for (int r = 0; r <= dim; ++r) {
        const auto row = Fields::to_vector(ms[k][r], where);
        if (row.size() != std::size_t(dim + 1)) bad(where, "expected dim + 1 columns");
        for (int c = 0; c <= dim; ++c) m(r, c) = row[c];
      }
      if ((m + m.transpose()).cwiseAbs().maxCoeff() > 1e-12) bad(where, "matrix is not skew-symmetric");
      s.matrices.push_back(m);
    }
  } else {
    bad(f.field("kind"), "unknown frequency kind '" + s.kind + "'");
  }
  return s;
}

InitialSpec parse_initial(const Fields& f, int dim, int n) {
  InitialSpec s;
  s.kind = f.string("kind");
  if (s.kind == "explicit") {
    f.reject_unknown({"kind", "points"});
    s.points = f.rows("points");
    if (s.points.size() != std::size_t(n)) bad(f.field("points"), "expected " + std::to_string(n) + " points");
    for (std::size_t i = 0; i < s.points.size(); ++i) {
      const std::string where = f.field("points") + "[" + std::to_string(i) + "]";
      if (s.points[i].size() != std::size_t(dim + 1)) bad(where, "expected dim + 1 entries");
      if (std::abs(to_eigen(s.points[i]).norm() - 1.0) > kConfigurationTolerance) bad(where, "not a unit vector");
    }
  } else if (s.kind == "random-in-cap") {
    f.reject_unknown({"kind", "gamma", "seed"});
    s.gamma = f.number("gamma");
    if (!(s.gamma >= 0.0 && s.gamma <= kPi)) bad(f.field("gamma"), "must lie in [0, pi]");
    s.seed = f.unsigned_integer("seed", 0);
  } else {
    bad(f.field("kind"), "unknown initial kind '" + s.kind + "'");
  }
  return s;
}

}  // namespace

const std::vector<std::string>& known_check_ids() {
  static const std::vector<std::string> ids = {
      "lemma4.1", "prop4.1", "lemma4.2", "prop4.2", "thm4.1", "lemma4.3", "prop5.1",
      "thm5.1",   "cor5.1",  "thm5.2",   "thm5.3",  "cor5.2", "thm5.4",   "cor5.3",
      "equilibrium-residual", "norm-conservation", "reduction-d1", "determinism"};
  return ids;
}

RunConfig parse_run_config(const Json& j) {
  const Fields f(j, "");
  f.reject_unknown({"schema", "name", "dim", "n", "kappa", "profile", "frequencies", "initial", "dt", "t_end",
                    "decimation", "gamma", "checks", "pair_perturbation", "output"});
  check_schema(f);
  RunConfig c;
  c.name = f.string("name", "run");
  c.dim = static_cast<int>(f.integer("dim"));
  if (c.dim < 1) bad("dim", "must be >= 1");
  c.n = static_cast<int>(f.integer("n"));
  if (c.n < 1) bad("n", "must be >= 1");
  c.kappa = f.number("kappa");
  if (c.kappa < 0.0) bad("kappa", "must be >= 0");
  c.profile = parse_profile(Fields(f.raw("profile"), "profile"));
  c.frequencies = parse_frequencies(Fields(f.raw("frequencies"), "frequencies"), c.dim, c.n);
  c.initial = parse_initial(Fields(f.raw("initial"), "initial"), c.dim, c.n);
  c.dt = f.number("dt", 1e-3);
  if (!(c.dt > 0.0)) bad("dt", "must be > 0");
  c.t_end = f.number("t_end");
  if (!(c.t_end > 0.0)) bad("t_end", "must be > 0");
  c.decimation = static_cast<int>(f.integer("decimation", 0));
  if (c.decimation < 0) bad("decimation", "must be >= 0");
  if (f.has("gamma")) {
    c.gamma = f.number("gamma");
    if (!(*c.gamma >= 0.0 && *c.gamma <= kPi)) bad("gamma", "must lie in [0, pi]");
  }
  if (f.has("checks")) {
    const Json& ch = f.raw("checks");
    if (!ch.is_array()) bad("checks", "expected an array of statement ids");
    for (std::size_t i = 0; i < ch.size(); ++i) {
      const std::string where = "checks[" + std::to_string(i) + "]";
      if (!ch[i].is_string()) bad(where, "expected a string");
      const auto id = ch[i].get<std::string>();
      const auto& ids = known_check_ids();
      if (std::find(ids.begin(), ids.end(), id) == ids.end()) bad(where, "unknown statement id '" + id + "'");
      c.checks.push_back(id);
    }
  }
  for (const char* id : {"prop4.1", "lemma4.2", "prop4.2", "thm4.1", "lemma4.3", "thm5.2", "cor5.3"}) {
    if (!c.gamma && std::find(c.checks.begin(), c.checks.end(), id) != c.checks.end()) {
      bad("gamma", std::string("required by check '") + id + "'");
    }
  }
  c.pair_perturbation = f.number("pair_perturbation", 1e-2);
  if (!(c.pair_perturbation > 0.0)) bad("pair_perturbation", "must be > 0");
  if (f.has("output")) {
    const Fields o(f.raw("output"), "output");
    o.reject_unknown({"dir", "trajectory", "summary", "verdicts"});
    c.output.dir = o.string("dir", c.output.dir);
    c.output.trajectory = o.string("trajectory", c.output.trajectory);
    c.output.summary = o.string("summary", c.output.summary);
    c.output.verdicts = o.string("verdicts", c.output.verdicts);
  }
  try {
    make_profile(c.profile);
  } catch (const Error& e) {
    bad("profile", e.what());
  }
  return c;
}

Json to_json(const RunConfig& c) {
  Json j;
  j["schema"] = 1;
  j["name"] = c.name;
  j["dim"] = c.dim;
  j["n"] = c.n;
  j["kappa"] = c.kappa;

  Json p;
  p["name"] = c.profile.name;
  p["kind"] = c.profile.kind;
  if (c.profile.kind == "table") {
    p["beta"] = c.profile.beta;
    Json t = Json::array();
    for (const auto& [a, v] : c.profile.table) t.push_back({a, v});
    p["table"] = t;
  }
  j["profile"] = p;

  Json fr;
  fr["kind"] = c.frequencies.kind;
  if (c.frequencies.kind == "identical-rotation") {
    fr["rate"] = c.frequencies.rate;
    if (!c.frequencies.axis.empty()) fr["axis"] = c.frequencies.axis;
    if (!c.frequencies.plane.empty()) fr["plane"] = c.frequencies.plane;
  } else if (c.frequencies.kind == "structured") {
    fr["nus"] = c.frequencies.nus;
    if (!c.frequencies.axes.empty()) fr["axes"] = c.frequencies.axes;
  } else if (c.frequencies.kind == "explicit") {
    Json ms = Json::array();
    for (const auto& m : c.frequencies.matrices) {
      Json rows = Json::array();
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        Json row = Json::array();
        for (Eigen::Index col = 0; col < m.cols(); ++col) row.push_back(m(r, col));
        rows.push_back(row);
      }
      ms.push_back(rows);
    }
    fr["matrices"] = ms;
  }
  j["frequencies"] = fr;

  Json in;
  in["kind"] = c.initial.kind;
  if (c.initial.kind == "explicit") {
    in["points"] = c.initial.points;
  } else {
    in["gamma"] = c.initial.gamma;
    in["seed"] = c.initial.seed;
  }
  j["initial"] = in;

  j["dt"] = c.dt;
  j["t_end"] = c.t_end;
  j["decimation"] = c.decimation;
  if (c.gamma) j["gamma"] = *c.gamma;
  j["checks"] = c.checks;
  j["pair_perturbation"] = c.pair_perturbation;
  j["output"] = {{"dir", c.output.dir},
                 {"trajectory", c.output.trajectory},
                 {"summary", c.output.summary},
                 {"verdicts", c.output.verdicts}};
  return j;
}

void set_path(Json& j, const std::string& path, const Json& value) {
  Json* node = &j;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (!node->is_object() || !node->contains(key)) bad("grid." + path, "no such parameter in the base config");
    node = &(*node)[key];
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  *node = value;
}

SweepConfig parse_sweep_config(const Json& j) {
  const Fields f(j, "");
  f.reject_unknown({"schema", "base", "grid", "jobs", "aggregate", "output"});
  check_schema(f);
  SweepConfig s;
  s.base_json = f.raw("base");
  if (s.base_json.is_object() && !s.base_json.contains("schema")) s.base_json["schema"] = 1;
  try {
    s.base = parse_run_config(s.base_json);
  } catch (const Error& e) {
    throw Error(ErrorCode::ConfigError, std::string("in 'base': ") + e.what());
  }
  // Fill defaults so every grid path resolves against the canonical form.
  s.base_json = to_json(s.base);

  const Fields g(f.raw("grid"), "grid");
  const Json& grid = f.raw("grid");
  if (grid.empty()) bad("grid", "needs at least one axis");
  for (auto it = grid.begin(); it != grid.end(); ++it) {
    if (!it.value().is_array() || it.value().empty()) bad("grid." + it.key(), "expected a non-empty array");
    Json probe = s.base_json;
    std::vector<Json> values(it.value().begin(), it.value().end());
    for (const auto& v : values) {
      set_path(probe, it.key(), v);
      try {
        parse_run_config(probe);
      } catch (const Error& e) {
        throw Error(ErrorCode::ConfigError, "grid." + it.key() + ": value " + v.dump() + " rejected (" + e.what() + ")");
      }
    }
    s.grid.emplace_back(it.key(), std::move(values));
  }
  s.jobs = static_cast<int>(f.integer("jobs", 1));
  if (s.jobs < 1) bad("jobs", "must be >= 1");
  s.aggregate = f.string("aggregate", "rows");
  if (s.aggregate != "rows") bad("aggregate", "only 'rows' is supported");
  s.output = f.string("output", "sweep");
  return s;
}

Json to_json(const SweepConfig& s) {
  Json j;
  j["schema"] = 1;
  j["base"] = to_json(s.base);
  Json grid = Json::object();
  for (const auto& [path, values] : s.grid) grid[path] = values;
  j["grid"] = grid;
  j["jobs"] = s.jobs;
  j["aggregate"] = s.aggregate;
  j["output"] = s.output;
  return j;
}

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot read '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, path + ": " + e.what());
  }
}

InfluenceProfile make_profile(const ProfileSpec& spec) {
  if (spec.kind == "builtin-I1") return InfluenceProfile::builtin_i1();
  if (spec.kind == "builtin-I2") return InfluenceProfile::builtin_i2();
  return InfluenceProfile::table(spec.name, spec.beta, spec.table);
}

std::vector<SkewMatrix> make_frequencies(const RunConfig& cfg) {
  const auto& s = cfg.frequencies;
  const auto n = static_cast<std::size_t>(cfg.n);
  if (s.kind == "zero") return std::vector<SkewMatrix>(n, SkewMatrix(cfg.dim + 1));
  if (s.kind == "identical-rotation") {
    SkewMatrix om(cfg.dim + 1);
    if (!s.axis.empty()) {
      om = SkewMatrix::hat(s.rate * Eigen::Vector3d(s.axis[0], s.axis[1], s.axis[2]));
    } else if (!s.plane.empty()) {
      om = SkewMatrix::plane_rotation(to_eigen(s.plane[0]), to_eigen(s.plane[1]), s.rate);
    } else {
      om = SkewMatrix::planar(s.rate);
    }
    return std::vector<SkewMatrix>(n, om);
  }
  if (s.kind == "structured") {
    std::vector<Vector> axes;
    if (s.axes.empty()) {
      axes = default_axes(n, cfg.dim);
    } else {
      for (const auto& a : s.axes) axes.push_back(to_eigen(a));
    }
    return structured_frequencies(s.nus, axes);
  }
  std::vector<SkewMatrix> out;
  for (const auto& m : s.matrices) out.push_back(SkewMatrix::from_matrix(m));
  return out;
}

Configuration make_initial(const RunConfig& cfg) {
  const auto& s = cfg.initial;
  Matrix pts(cfg.dim + 1, cfg.n);
  if (s.kind == "explicit") {
    for (int i = 0; i < cfg.n; ++i) pts.col(i) = to_eigen(s.points[static_cast<std::size_t>(i)]);
    return Configuration(std::move(pts));
  }
  std::mt19937_64 rng(s.seed);
  for (int i = 0; i < cfg.n; ++i) pts.col(i) = random_in_cap(cfg.dim, Angle(s.gamma), rng).coords();
  return Configuration(std::move(pts));
}

ModelParams make_params(const RunConfig& cfg) {
  ModelParams p;
  p.kappa = cfg.kappa;
  p.dim = cfg.dim;
  p.profile = make_profile(cfg.profile);
  p.omegas = make_frequencies(cfg);
  return p;
}

std::uint64_t cell_seed(std::uint64_t base, std::size_t index) {
  if (index == 0) return base;
  // splitmix64 finaliser over the combined key.
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(index) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace winfree
