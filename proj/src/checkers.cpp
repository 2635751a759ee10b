#include "winfree/checkers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/SVD>

#include "winfree/error.hpp"

namespace winfree {

namespace {

[[noreturn]] void unmet(const std::string& what) { throw Error(ErrorCode::PreconditionUnmet, what); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double initial_pairwise_max_angle(const Configuration& x) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    for (Eigen::Index j = i + 1; j < x.size(); ++j) m = std::max(m, angle_between(x.column(i), x.column(j)));
  return m;
}

void require_pairwise_spread(const Configuration& x0, double beta) {
  const double spread = initial_pairwise_max_angle(x0);
  if (!(spread < kPi / 2.0 - beta)) {
    unmet("initial pairwise angle " + fmt(spread) + " not below pi/2 - beta = " + fmt(kPi / 2.0 - beta));
  }
}

double max_phi(const Observables& o) { return *std::max_element(o.phis.begin(), o.phis.end()); }

void require_identical(const ModelParams& params) {
  if (!params.identical_frequencies()) unmet("natural frequencies are not identical");
}

}  // namespace

bool CapCondition::satisfied() const {
  const double g = gamma.radians();
  return kappa > 0.0 && std::sin(g) * profile(g) > max_op_norm / kappa;
}

Verdict vacuous_verdict(std::string id, std::string reason) {
  Verdict v;
  v.id = std::move(id);
  v.pass = true;
  v.vacuous = true;
  v.note = std::move(reason);
  return v;
}

double critical_coupling(int n, double max_op_norm, Angle beta, Angle gamma, const InfluenceProfile& profile) {
  if (n < 1) throw Error(ErrorCode::DomainError, "N must be positive");
  const double ig = profile(gamma.radians());
  if (!(ig > 0.0)) throw Error(ErrorCode::DegenerateProfile, "I(gamma) = 0, no finite critical coupling");
  return static_cast<double>(n) * max_op_norm / (std::sin(beta.radians()) * ig);
}

bool cap_contains(const Configuration& x, double gamma, double slack) {
  for (double phi : polar_angles(x))
    if (phi > gamma + slack) return false;
  return true;
}

Verdict cap_invariance_check(const ModelParams& params, Angle gamma, const Trajectory& traj) {
  const CapCondition cond{gamma, params.kappa, params.max_op_norm(), params.profile};
  if (!cond.satisfied()) {
    unmet("sin(gamma) I(gamma) = " + fmt(std::sin(gamma.radians()) * params.profile(gamma.radians())) +
          " does not exceed max|Omega|/kappa");
  }
  if (!cap_contains(traj.initial(), gamma.radians())) unmet("initial data outside the cap");

  Verdict v;
  v.id = "prop4.1";
  v.threshold = gamma.radians();
  v.tolerance = 1e-6;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto& phis = traj.observables[k].phis;
    for (std::size_t i = 0; i < phis.size(); ++i) {
      if (phis[i] > v.observed) v.observed = phis[i];
      if (!v.witness && phis[i] > v.threshold + v.tolerance) v.witness = Witness{traj.times[k], {int(i)}};
    }
  }
  v.pass = v.observed <= v.threshold + v.tolerance;
  return v;
}

TransitionBound transition_bound(int n, double kappa, Angle beta, Angle gamma, const InfluenceProfile& profile,
                                 Angle phi0, double op_norm_j, double max_op_norm) {
  const double kc = critical_coupling(n, max_op_norm, beta, gamma, profile);
  if (!(kappa > kc)) unmet("kappa = " + fmt(kappa) + " does not exceed kappa_c = " + fmt(kc));
  const double p = phi0.radians();
  if (p >= kPi / 2.0) {
    throw Error(ErrorCode::BoundInapplicable, "phi0 = " + fmt(p) + " >= pi/2, cos(phi0) bound degenerates");
  }
  const double ratio = static_cast<double>(n) * op_norm_j / (kappa * profile(gamma.radians()));
  if (ratio >= 1.0 || !(p < kPi - std::asin(ratio))) unmet("initial angle violates the admissible range");

  const double b = beta.radians();
  const Angle beta_star(std::asin(kc / kappa * std::sin(b)));
  if (p <= b) return {beta_star, 0.0};
  const double bs = beta_star.radians();
  const double tj = static_cast<double>(n) / (kappa * profile(gamma.radians()) * std::cos(p)) *
                    std::log((p - bs) / (b - bs));
  return {beta_star, tj};
}

Verdict entry_check(const Trajectory& traj, Angle beta, double t_bound) {
  if (!(traj.final_time() > t_bound)) {
    throw Error(ErrorCode::TrajectoryTooShort,
                "run ends at " + fmt(traj.final_time()) + " before the entry bound " + fmt(t_bound));
  }
  const double b = beta.radians();
  Verdict v;
  v.id = "thm4.1";
  v.threshold = b;
  v.tolerance = 1e-6;
  const std::size_t n = traj.observables.front().phis.size();
  std::vector<bool> entered(n, false);
  double first_entry = 0.0;
  double worst = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto& phis = traj.observables[k].phis;
    bool all_inside = true;
    for (std::size_t i = 0; i < n; ++i) {
      const bool bad_after_bound = traj.times[k] > t_bound && phis[i] > b + v.tolerance;
      const bool reexit = entered[i] && phis[i] > b + v.tolerance;
      if (traj.times[k] > t_bound || entered[i]) worst = std::max(worst, phis[i]);
      if ((bad_after_bound || reexit) && !v.witness) v.witness = Witness{traj.times[k], {int(i)}};
      if (phis[i] < b) entered[i] = true;
      if (phis[i] > b) all_inside = false;
    }
    if (!all_inside) first_entry = k + 1 < traj.size() ? traj.times[k + 1] : traj.times[k];
  }
  v.observed = worst;
  v.pass = !v.witness;
  v.note = "bound T = " + fmt(t_bound) + ", all inside from t = " + fmt(first_entry);
  return v;
}

Verdict absorption_check(const ModelParams& params, Angle gamma, const Trajectory& traj) {
  const auto& x0 = traj.initial();
  const int n = static_cast<int>(x0.size());
  const double g = gamma.radians();
  const double b = params.profile.beta();
  if (!(g < b)) unmet("gamma must lie below beta");
  const auto phis0 = polar_angles(x0);
  if (std::none_of(phis0.begin(), phis0.end(), [&](double p) { return p <= g; })) {
    unmet("no oscillator starts inside the cap of radius gamma");
  }
  const double max_op = params.max_op_norm();
  // Keeps the anchoring oscillator inside D_gamma, which the bound relies on.
  if (!(max_op < params.kappa / n * std::sin(g) * params.profile(g))) {
    unmet("max|Omega| not below (kappa/N) sin(gamma) I(gamma)");
  }
  double t_bound = 0.0;
  for (int j = 0; j < n; ++j) {
    if (phis0[j] <= b) continue;
    const auto tb = transition_bound(n, params.kappa, Angle(b), gamma, params.profile, Angle(phis0[j]),
                                     operator_norm(params.omegas[j]), max_op);
    t_bound = std::max(t_bound, tb.t_j);
  }
  return entry_check(traj, Angle(b), t_bound);
}

double l1_distance(const Configuration& a, const Configuration& b) {
  if (a.size() != b.size() || a.dim() != b.dim()) throw Error(ErrorCode::LengthMismatch, "configurations differ in shape");
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += (a.column(i) - b.column(i)).norm();
  return s;
}

std::optional<double> fit_decay_rate(std::span<const double> times, std::span<const double> values,
                                     double start_fraction) {
  if (times.size() != values.size()) throw Error(ErrorCode::LengthMismatch, "series lengths differ");
  if (times.empty()) return std::nullopt;
  const double t0 = start_fraction * times.back();
  double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
  std::size_t m = 0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!(values[k] >= 0.0)) {
      throw Error(ErrorCode::NonPositiveValues, "series value " + fmt(values[k]) + " at t = " + fmt(times[k]));
    }
    if (times[k] < t0 || values[k] <= kConvergedFloor) continue;
    const double y = std::log(values[k]);
    st += times[k];
    sy += y;
    stt += times[k] * times[k];
    sty += times[k] * y;
    ++m;
  }
  if (m < 2) return std::nullopt;
  const double mm = static_cast<double>(m);
  const double denom = mm * stt - st * st;
  if (!(denom > 0.0)) return std::nullopt;
  return (mm * sty - st * sy) / denom;
}

Verdict stability_check(const ModelParams& params, const Configuration& x0, const Configuration& x0_tilde,
                        Angle gamma, double dt, double t_end) {
  const double g = gamma.radians();
  const double c = std::cos(g) * params.profile(g) - params.profile.lipschitz();
  if (!(c > 0.0)) unmet("cos(gamma) I(gamma) - Lip = " + fmt(c) + " is not positive");
  if (!cap_contains(x0, g) || !cap_contains(x0_tilde, g)) unmet("initial data outside the cap");

  const auto a = integrate(params, x0, dt, t_end);
  const auto b = integrate(params, x0_tilde, dt, t_end);
  const double kc = params.kappa * c;
  const double rate = std::min(c, kc);

  Verdict v;
  v.id = "lemma4.3";
  v.threshold = -rate * 0.95;
  v.tolerance = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (max_phi(a.observables[k]) > g + 1e-6 || max_phi(b.observables[k]) > g + 1e-6) {
      Verdict vac = vacuous_verdict("lemma4.3", "a-priori containment in the cap violated");
      vac.witness = Witness{a.times[k], {}};
      return vac;
    }
  }
  std::vector<double> dist(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) dist[k] = l1_distance(a.states[k], b.states[k]);

  std::ostringstream note;
  note << "C = " << fmt(c) << ", kappa*C = " << fmt(kc);
  if (dist.front() <= kConvergedFloor) {
    v.pass = true;
    note << "; identical initial data";
    v.note = note.str();
    return v;
  }
  const auto slope = fit_decay_rate(a.times, dist);
  if (!slope) {
    v.pass = true;
    v.observed = -std::numeric_limits<double>::infinity();
    note << "; distance below floor over the fit window";
  } else {
    v.observed = *slope;
    v.pass = *slope <= v.threshold;
    note << "; data " << (*slope <= -kc * 0.95 ? "supports" : "does not support") << " the kappa*C rate";
    note << ", " << (*slope <= -c * 0.95 ? "supports" : "does not support") << " the C rate";
  }
  v.note = note.str();
  return v;
}

Verdict pairwise_monotonicity_check(const Trajectory& traj, Angle beta) {
  const auto& x0 = traj.initial();
  if (x0.size() < 2) return vacuous_verdict("thm5.1", "fewer than two oscillators");
  require_pairwise_spread(x0, beta.radians());
  const Eigen::Index n = x0.size();
  std::vector<double> a0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) a0.push_back(angle_between(x0.column(i), x0.column(j)));

  Verdict v;
  v.id = "thm5.1";
  v.threshold = 0.0;
  v.tolerance = 1e-6;
  v.observed = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto& x = traj.states[k];
    std::size_t p = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j, ++p) {
        const double growth = angle_between(x.column(i), x.column(j)) - a0[p];
        v.observed = std::max(v.observed, growth);
        if (growth > v.tolerance && !v.witness) v.witness = Witness{traj.times[k], {int(i), int(j)}};
      }
    }
  }
  v.pass = v.observed <= v.threshold + v.tolerance;
  return v;
}

double max_pairwise_chord(const Configuration& x) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    for (Eigen::Index j = i + 1; j < x.size(); ++j) m = std::max(m, (x.column(i) - x.column(j)).norm());
  return m;
}

Verdict aggregation_check(const ModelParams& params, Angle gamma, const Trajectory& traj) {
  require_identical(params);
  const double g = gamma.radians();
  if (!(g > 0.0 && g < params.profile.beta())) unmet("gamma must lie in (0, beta)");
  const CapCondition cond{gamma, params.kappa, params.max_op_norm(), params.profile};
  if (!cond.satisfied()) unmet("cap condition fails at gamma");
  const auto& x0 = traj.initial();
  if (!cap_contains(x0, g)) unmet("initial data outside the cap");

  const double lambda = params.kappa * std::cos(g) * params.profile(g);
  Verdict v;
  v.id = "thm5.2";
  v.threshold = -lambda * 0.95;
  v.tolerance = 0.0;

  const Eigen::Index n = x0.size();
  double worst_ratio = 0.0;
  std::vector<double> series(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto& x = traj.states[k];
    const double decay = std::exp(-lambda * traj.times[k]);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const double c0 = (x0.column(i) - x0.column(j)).norm();
        const double c = (x.column(i) - x.column(j)).norm();
        if (c0 <= 0.0) continue;
        const double r = c / (c0 * decay);
        worst_ratio = std::max(worst_ratio, r);
        if (r > 1.0 + 1e-6 && !v.witness) v.witness = Witness{traj.times[k], {int(i), int(j)}};
      }
    }
    series[k] = max_pairwise_chord(x);
  }
  const bool bound_ok = !v.witness;
  const auto slope = fit_decay_rate(traj.times, series);
  std::ostringstream note;
  note << "lambda = " << fmt(lambda) << ", worst chord/bound ratio " << fmt(worst_ratio);
  if (!slope) {
    v.observed = -std::numeric_limits<double>::infinity();
    v.pass = bound_ok;
    note << "; converged below floor";
  } else {
    v.observed = *slope;
    v.pass = bound_ok && *slope <= v.threshold;
  }
  v.note = note.str();
  return v;
}

double order_parameter(const Configuration& x) { return x.centroid().norm(); }

const char* to_string(Dichotomy d) {
  switch (d) {
    case Dichotomy::synchronized: return "Synchronized";
    case Dichotomy::escaped: return "Escaped";
    case Dichotomy::undecided: return "Undecided";
  }
  return "Undecided";
}

DichotomyResult dichotomy_classify(const Trajectory& traj, const InfluenceProfile& profile) {
  require_pairwise_spread(traj.initial(), profile.beta());
  DichotomyResult res;
  for (std::size_t k = 1; k < traj.size(); ++k) {
    const double drop = traj.observables[k - 1].order_parameter - traj.observables[k].order_parameter;
    if (drop > res.worst_order_drop) res.worst_order_drop = drop;
    if (drop > 1e-7 && res.order_monotone) {
      res.order_monotone = false;
      res.witness = Witness{traj.times[k], {}};
    }
  }
  if (traj.observables.back().order_parameter > 1.0 - 1e-3) {
    res.outcome = Dichotomy::synchronized;
    return res;
  }
  const double tail = 0.8 * traj.final_time();
  bool escaped = true;
  for (std::size_t k = 0; k < traj.size() && escaped; ++k) {
    if (traj.times[k] < tail) continue;
    const auto& o = traj.observables[k];
    const double min_phi = *std::min_element(o.phis.begin(), o.phis.end());
    if (!(o.mean_influence < 1e-12) || min_phi < profile.beta() - 1e-6) escaped = false;
  }
  res.outcome = escaped ? Dichotomy::escaped : Dichotomy::undecided;
  return res;
}

Verdict dichotomy_check(const Trajectory& traj, const InfluenceProfile& profile) {
  const auto res = dichotomy_classify(traj, profile);
  Verdict v;
  v.id = "thm5.3";
  v.threshold = 0.0;
  v.tolerance = 1e-7;
  v.observed = res.worst_order_drop;
  v.pass = res.order_monotone;
  v.witness = res.witness;
  v.note = std::string("outcome ") + to_string(res.outcome) + ", final R = " +
           fmt(traj.observables.back().order_parameter);
  return v;
}

std::optional<double> free_flow_deviation(const Trajectory& traj, const SkewMatrix& omega) {
  std::size_t k0 = traj.size();
  while (k0 > 0 && traj.observables[k0 - 1].mean_influence < 1e-12) --k0;
  if (k0 + 1 >= traj.size()) return std::nullopt;
  const Matrix& base = traj.states[k0].points();
  double dev = 0.0;
  for (std::size_t k = k0 + 1; k < traj.size(); ++k) {
    const Matrix predicted = skew_exponential(omega, traj.times[k] - traj.times[k0]) * base;
    dev = std::max(dev, (traj.states[k].points() - predicted).colwise().norm().maxCoeff());
  }
  return dev;
}

double cross_ratio(const Configuration& x, int i1, int i2, int i3, int i4) {
  const int idx[4] = {i1, i2, i3, i4};
  for (int a = 0; a < 4; ++a) {
    if (idx[a] < 0 || idx[a] >= x.size()) throw Error(ErrorCode::OutOfRange, "cross-ratio index out of range");
    for (int b = a + 1; b < 4; ++b) {
      if (idx[a] == idx[b]) throw Error(ErrorCode::DegenerateQuadruple, "repeated cross-ratio index");
      if ((x.column(idx[a]) - x.column(idx[b])).norm() <= 1e-12) {
        throw Error(ErrorCode::DegenerateQuadruple, "coincident points in the quadruple");
      }
    }
  }
  auto d2 = [&](int a, int b) { return (x.column(a) - x.column(b)).squaredNorm(); };
  return d2(i1, i2) * d2(i3, i4) / (d2(i2, i3) * d2(i4, i1));
}

std::optional<Vector> sn_membership(const SkewMatrix& omega) {
  const Eigen::Index n = omega.size();
  if (n < 2) return std::nullopt;
  // Ω restricted to e⊥ = span{e_2, ..., e_{d+1}}.
  const Matrix restricted = omega.matrix().rightCols(n - 1);
  Eigen::JacobiSVD<Matrix> svd(restricted, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const Eigen::Index last = n - 2;
  if (s.size() > last && s(last) > 1e-10) return std::nullopt;
  Vector v = Vector::Zero(n);
  v.tail(n - 1) = svd.matrixV().col(last);
  v /= v.norm();
  if ((omega.matrix() * v).norm() > 1e-10 || std::abs(v(0)) > 1e-10) return std::nullopt;
  return v;
}

double motion_constant_ratio(const Configuration& x, int i, int j, const Vector& v) {
  const double a = x.column(i).dot(v);
  const double b = x.column(j).dot(v);
  if (std::abs(a) <= 1e-12 || std::abs(b) <= 1e-12) {
    throw Error(ErrorCode::VanishingInnerProduct, "<x, v> vanishes for the pair");
  }
  return (x.column(i) - x.column(j)).squaredNorm() / (a * b);
}

namespace {

template <typename F>
Verdict relative_drift(std::string id, const Trajectory& traj, int count, F value_at) {
  Verdict v;
  v.id = std::move(id);
  v.threshold = 0.0;
  v.tolerance = 1e-6;
  for (int q = 0; q < count; ++q) {
    const double c0 = value_at(traj.initial(), q);
    for (std::size_t k = 1; k < traj.size(); ++k) {
      const double drift = std::abs(value_at(traj.states[k], q) - c0) / std::abs(c0);
      v.observed = std::max(v.observed, drift);
      if (drift > v.tolerance && !v.witness) v.witness = Witness{traj.times[k], {q}};
    }
  }
  v.pass = v.observed <= v.tolerance;
  return v;
}

}  // namespace

Verdict cross_ratio_check(const Trajectory& traj) {
  const int n = static_cast<int>(traj.initial().size());
  if (n < 4) unmet("cross-ratio needs four oscillators");
  for (int q = 0; q + 3 < n; ++q) {
    try {
      cross_ratio(traj.initial(), q, q + 1, q + 2, q + 3);
    } catch (const Error& e) {
      unmet(e.what());
    }
  }
  return relative_drift("cor5.2", traj, n - 3,
                        [](const Configuration& x, int q) { return cross_ratio(x, q, q + 1, q + 2, q + 3); });
}

Verdict motion_constant_check(const Trajectory& traj, const Vector& v) {
  const auto& x0 = traj.initial();
  const int n = static_cast<int>(x0.size());
  if (n < 2) unmet("constant of motion needs two oscillators");
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if ((x0.column(i) - x0.column(j)).norm() <= 1e-12) unmet("coincident initial oscillators");
      if (std::abs(x0.column(i).dot(v)) <= 1e-12 || std::abs(x0.column(j).dot(v)) <= 1e-12) {
        unmet("initial <x, v> vanishes");
      }
      pairs.emplace_back(i, j);
    }
  }
  auto verdict = relative_drift("thm5.4", traj, static_cast<int>(pairs.size()), [&](const Configuration& x, int p) {
    return motion_constant_ratio(x, pairs[p].first, pairs[p].second, v);
  });
  if (verdict.witness) {
    const int p = verdict.witness->indices.front();
    verdict.witness->indices = {pairs[p].first, pairs[p].second};
  }
  return verdict;
}

Verdict inner_decay_check(const Trajectory& traj, const Vector& v, double lambda) {
  Verdict out;
  out.id = "cor5.3";
  out.threshold = -lambda / 2.0 * 0.9;
  out.tolerance = 0.0;
  out.observed = -std::numeric_limits<double>::infinity();
  const Eigen::Index n = traj.initial().size();
  std::vector<double> series(traj.size());
  int fitted = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < traj.size(); ++k) series[k] = std::abs(traj.states[k].column(i).dot(v));
    const auto slope = fit_decay_rate(traj.times, series);
    if (!slope) continue;
    ++fitted;
    if (*slope > out.observed) {
      out.observed = *slope;
      if (*slope > out.threshold) out.witness = Witness{traj.final_time(), {int(i)}};
    }
  }
  out.pass = !out.witness;
  out.note = "lambda = " + fmt(lambda) + ", " + std::to_string(fitted) + " series fitted";
  return out;
}

Verdict angle_inequality_check(const ModelParams& params, const Trajectory& traj) {
  const std::size_t n = traj.initial().size();
  std::vector<double> ops(n);
  for (std::size_t j = 0; j < n; ++j) ops[j] = operator_norm(params.omegas[j]);
  auto bound = [&](const Observables& o, std::size_t j) {
    double sum = 0.0;
    for (double p : o.phis) sum += params.profile(p);
    return ops[j] - params.kappa / static_cast<double>(n) * std::sin(o.phis[j]) * sum;
  };
  Verdict v;
  v.id = "lemma4.1";
  v.threshold = 0.0;
  v.tolerance = 10.0 * traj.dt;
  v.observed = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < traj.size(); ++k) {
    const double h = traj.times[k] - traj.times[k - 1];
    const auto& a = traj.observables[k - 1];
    const auto& b = traj.observables[k];
    for (std::size_t j = 0; j < n; ++j) {
      const double excess = (b.phis[j] - a.phis[j]) / h - 0.5 * (bound(a, j) + bound(b, j));
      v.observed = std::max(v.observed, excess);
      if (excess > v.tolerance && !v.witness) v.witness = Witness{traj.times[k], {int(j)}};
    }
  }
  v.pass = v.observed <= v.threshold + v.tolerance;
  return v;
}

Verdict single_cap_check(const ModelParams& params, Angle gamma, const Trajectory& traj) {
  const double g = gamma.radians();
  if (!(g < params.profile.beta())) unmet("gamma must lie below beta");
  const auto phis0 = polar_angles(traj.initial());
  const double n = static_cast<double>(phis0.size());
  const double limit = params.kappa / n * std::sin(g) * params.profile(g);
  std::vector<int> eligible;
  for (std::size_t j = 0; j < phis0.size(); ++j) {
    if (phis0[j] <= g && operator_norm(params.omegas[j]) < limit) eligible.push_back(int(j));
  }
  if (eligible.empty()) unmet("no oscillator meets the single-cap hypothesis");
  Verdict v;
  v.id = "lemma4.2";
  v.threshold = g;
  v.tolerance = 1e-6;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    for (int j : eligible) {
      const double p = traj.observables[k].phis[j];
      v.observed = std::max(v.observed, p);
      if (p > g + v.tolerance && !v.witness) v.witness = Witness{traj.times[k], {j}};
    }
  }
  v.pass = !v.witness;
  v.note = std::to_string(eligible.size()) + " eligible oscillators";
  return v;
}

Verdict liminf_check(const ModelParams& params, Angle gamma, const Trajectory& traj) {
  const double g = gamma.radians();
  if (!(g < params.profile.beta())) unmet("gamma must lie below beta");
  const auto phis0 = polar_angles(traj.initial());
  const std::size_t n = phis0.size();
  if (std::none_of(phis0.begin(), phis0.end(), [&](double p) { return p <= g; })) {
    unmet("no oscillator starts inside the cap of radius gamma");
  }
  const double ig = params.profile(g);
  if (!(params.max_op_norm() < params.kappa / static_cast<double>(n) * std::sin(g) * ig)) {
    unmet("max|Omega| not below (kappa/N) sin(gamma) I(gamma)");
  }
  const double tail = 0.75 * traj.final_time();
  Verdict v;
  v.id = "prop4.2";
  v.threshold = 0.0;
  v.tolerance = 1e-3;
  v.observed = -std::numeric_limits<double>::infinity();
  int checked = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double ratio = static_cast<double>(n) * operator_norm(params.omegas[j]) / (params.kappa * ig);
    if (ratio >= 1.0 || !(phis0[j] < kPi - std::asin(ratio))) continue;
    const double bound = std::asin(ratio);
    double tail_min = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < traj.size(); ++k) {
      if (traj.times[k] >= tail) tail_min = std::min(tail_min, traj.observables[k].phis[j]);
    }
    const double excess = tail_min - bound;
    ++checked;
    if (excess > v.observed) v.observed = excess;
    if (excess > v.tolerance && !v.witness) v.witness = Witness{traj.final_time(), {int(j)}};
  }
  if (checked == 0) unmet("no oscillator satisfies the admissible initial range");
  v.pass = !v.witness;
  v.note = "tail-minimum proxy for liminf over the final quarter";
  return v;
}

Verdict dissipation_limit_check(const Trajectory& traj, const InfluenceProfile& profile) {
  require_pairwise_spread(traj.initial(), profile.beta());
  const auto& x = traj.final_state();
  const double ic = traj.observables.back().mean_influence;
  Verdict v;
  v.id = "cor5.1";
  v.threshold = 0.0;
  v.tolerance = 1e-6;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    for (Eigen::Index j = i + 1; j < x.size(); ++j) {
      const double q = ic * (x.points()(0, i) + x.points()(0, j)) * (x.column(i) - x.column(j)).squaredNorm();
      if (q > v.observed) {
        v.observed = q;
        if (q > v.tolerance) v.witness = Witness{traj.final_time(), {int(i), int(j)}};
      }
    }
  }
  v.pass = v.observed <= v.tolerance;
  return v;
}

Verdict norm_conservation_check(const Trajectory& traj, double tolerance) {
  Verdict v;
  v.id = "norm-conservation";
  v.threshold = 0.0;
  v.tolerance = tolerance;
  v.observed = traj.max_norm_drift;
  v.pass = v.observed <= tolerance;
  return v;
}

}  // namespace winfree
