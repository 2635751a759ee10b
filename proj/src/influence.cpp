#include "winfree/influence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "winfree/error.hpp"

namespace winfree {

InfluenceProfile InfluenceProfile::builtin_i1() {
  auto s = std::make_shared<State>();
  s->name = "I1";
  s->kind = ProfileKind::builtin_i1;
  s->beta = 1.0;
  s->lipschitz = 1.0;
  s->fn = [](double phi) { return phi < 1.0 ? 1.0 - phi : 0.0; };
  return InfluenceProfile(std::move(s));
}

InfluenceProfile InfluenceProfile::builtin_i2() {
  auto s = std::make_shared<State>();
  s->name = "I2";
  s->kind = ProfileKind::builtin_i2;
  s->beta = 0.5;
  // |d/dφ (2φ − 1)²| = |8φ − 4| peaks at φ = 0.
  s->lipschitz = 4.0;
  s->fn = [](double phi) {
    if (phi >= 0.5) return 0.0;
    const double u = 2.0 * phi - 1.0;
    return u * u;
  };
  return InfluenceProfile(std::move(s));
}

InfluenceProfile InfluenceProfile::table(std::string name, double beta, Table points) {
  if (points.empty()) throw Error(ErrorCode::InvalidProfile, "empty influence table");
  if (points.front().first != 0.0) throw Error(ErrorCode::InvalidProfile, "influence table must start at angle 0");
  double lip = 0.0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto [a, v] = points[k];
    if (!std::isfinite(a) || !std::isfinite(v) || a < 0.0 || a > kPi || v < 0.0) {
      throw Error(ErrorCode::InvalidProfile, "table node " + std::to_string(k) + " out of range");
    }
    if (k > 0) {
      const double da = a - points[k - 1].first;
      if (!(da > 0.0)) throw Error(ErrorCode::InvalidProfile, "table angles must increase strictly");
      lip = std::max(lip, std::abs(v - points[k - 1].second) / da);
    }
  }
  if (!(beta > 0.0 && beta <= kPi)) throw Error(ErrorCode::InvalidProfile, "beta outside (0, pi]");

  auto s = std::make_shared<State>();
  s->name = std::move(name);
  s->kind = ProfileKind::table;
  s->beta = beta;
  s->lipschitz = lip;
  s->nodes = std::move(points);
  s->fn = [nodes = s->nodes](double phi) {
    if (phi >= nodes.back().first) return nodes.back().second;
    auto hi = std::upper_bound(nodes.begin(), nodes.end(), phi,
                               [](double p, const std::pair<double, double>& n) { return p < n.first; });
    if (hi == nodes.begin()) return nodes.front().second;
    auto lo = hi - 1;
    const double w = (phi - lo->first) / (hi->first - lo->first);
    return lo->second + w * (hi->second - lo->second);
  };
  return InfluenceProfile(std::move(s));
}

InfluenceProfile InfluenceProfile::custom(std::string name, double beta, Evaluator fn, double lipschitz) {
  if (!fn) throw Error(ErrorCode::InvalidProfile, "custom profile without evaluator");
  if (!(beta > 0.0 && beta <= kPi)) throw Error(ErrorCode::InvalidProfile, "beta outside (0, pi]");
  auto s = std::make_shared<State>();
  s->name = std::move(name);
  s->kind = ProfileKind::custom;
  s->beta = beta;
  s->fn = std::move(fn);
  s->lipschitz = lipschitz;
  InfluenceProfile p(s);
  if (lipschitz < 0.0) s->lipschitz = lipschitz_estimate(p);
  return p;
}

double evaluate(const InfluenceProfile& profile, double phi) {
  if (!(phi >= 0.0 && phi <= kPi)) {
    throw Error(ErrorCode::DomainError, "profile argument " + std::to_string(phi) + " outside [0, pi]");
  }
  return profile(phi);
}

double evaluate_point(const InfluenceProfile& profile, const UnitVector& x) {
  return profile(angle(x, UnitVector::attraction_point(x.dim())).radians());
}

double mean_influence(const InfluenceProfile& profile, const Configuration& x) {
  if (x.empty()) throw Error(ErrorCode::EmptyConfiguration, "mean influence of an empty configuration");
  double sum = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    sum += profile(std::acos(std::clamp(x.points()(0, k), -1.0, 1.0)));
  }
  return sum / static_cast<double>(x.size());
}

double lipschitz_estimate(const InfluenceProfile& profile, std::size_t grid) {
  const double h = kPi / static_cast<double>(grid);
  double prev = profile(0.0);
  double sup = 0.0;
  for (std::size_t k = 1; k <= grid; ++k) {
    const double cur = profile(static_cast<double>(k) * h);
    sup = std::max(sup, std::abs(cur - prev) / h);
    prev = cur;
  }
  return sup;
}

bool ProfileReport::all_pass() const {
  return std::all_of(conditions.begin(), conditions.end(), [](const ConditionCheck& c) { return c.pass; });
}

const ConditionCheck& ProfileReport::condition(const std::string& id) const {
  for (const auto& c : conditions)
    if (c.id == id) return c;
  throw Error(ErrorCode::DomainError, "unknown profile condition " + id);
}

ProfileReport validate(const InfluenceProfile& profile, std::size_t grid) {
  constexpr std::size_t kMaxWitnesses = 5;
  const double h = kPi / static_cast<double>(grid);
  const double beta = profile.beta();
  std::vector<double> values(grid + 1);
  for (std::size_t k = 0; k <= grid; ++k) values[k] = profile(static_cast<double>(k) * h);

  ProfileReport report;
  report.profile = profile.name();

  ConditionCheck c1{"C1", true, "non-increasing on the grid", {}};
  for (std::size_t k = 1; k <= grid; ++k) {
    if (values[k] > values[k - 1] + 1e-12) {
      c1.pass = false;
      if (c1.witnesses.size() < kMaxWitnesses) c1.witnesses.push_back(static_cast<double>(k) * h);
    }
  }
  if (!c1.pass) c1.detail = "increase found";

  ConditionCheck c2{"C2", true, "vanishes on [beta, pi] with 0 < beta < pi/2", {}};
  if (!(beta > 0.0 && beta < kPi / 2.0)) {
    c2.pass = false;
    c2.detail = "beta = " + std::to_string(beta) + " not in (0, pi/2)";
  }
  auto check_zero = [&](double phi, double v) {
    if (v != 0.0) {
      c2.pass = false;
      if (c2.witnesses.size() < kMaxWitnesses) c2.witnesses.push_back(phi);
    }
  };
  if (beta <= kPi) check_zero(beta, profile(beta));
  for (std::size_t k = 0; k <= grid; ++k) {
    const double phi = static_cast<double>(k) * h;
    if (phi >= beta) check_zero(phi, values[k]);
  }
  if (c2.pass == false && c2.detail.rfind("beta", 0) != 0) c2.detail = "nonzero beyond beta";

  ConditionCheck c3{"C3", std::abs(values[0] - 1.0) <= 1e-12, "", {}};
  {
    std::ostringstream os;
    os << "I(0) = " << values[0];
    c3.detail = os.str();
  }
  if (!c3.pass) c3.witnesses.push_back(0.0);

  ConditionCheck c4{"C4", true, "", {}};
  double sup = 0.0;
  double arg = 0.0;
  for (std::size_t k = 1; k <= grid; ++k) {
    const double q = std::abs(values[k] - values[k - 1]) / h;
    if (!(q <= sup)) {
      sup = q;
      arg = static_cast<double>(k) * h;
    }
  }
  const double declared = profile.lipschitz();
  c4.pass = std::isfinite(sup) && sup <= declared * (1.0 + 1e-9) + 1e-9;
  {
    std::ostringstream os;
    os << "grid Lipschitz " << sup << ", declared " << declared;
    c4.detail = os.str();
  }
  if (!c4.pass) c4.witnesses.push_back(arg);

  report.conditions = {c1, c2, c3, c4};
  return report;
}

}  // namespace winfree
