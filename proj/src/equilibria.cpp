#include "winfree/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "winfree/checkers.hpp"
#include "winfree/error.hpp"

namespace winfree {

StructuredFrequency StructuredFrequency::make(double nu, const Vector& axis) {
  if (axis.size() < 2 || std::abs(axis.norm() - 1.0) > 1e-12 || std::abs(axis(0)) > 1e-12) {
    throw Error(ErrorCode::DomainError, "frequency axis must be a unit vector orthogonal to e");
  }
  const Vector e = UnitVector::attraction_point(static_cast<int>(axis.size()) - 1).coords();
  return {nu, axis, SkewMatrix::plane_rotation(e, axis, nu)};
}

std::vector<Vector> default_axes(std::size_t n, int dim) {
  Vector axis = Vector::Zero(dim + 1);
  axis(1) = 1.0;
  return std::vector<Vector>(n, axis);
}

std::vector<SkewMatrix> structured_frequencies(const std::vector<double>& nus, const std::vector<Vector>& axes) {
  if (nus.size() != axes.size()) throw Error(ErrorCode::LengthMismatch, "one axis per frequency required");
  std::vector<SkewMatrix> out;
  out.reserve(nus.size());
  for (std::size_t i = 0; i < nus.size(); ++i) out.push_back(StructuredFrequency::make(nus[i], axes[i]).omega);
  return out;
}

double LambdaEquation::bracket_low() const {
  double m = 0.0;
  for (double nu : nus) m = std::max(m, std::abs(nu));
  return m / std::sin(profile.beta());
}

double LambdaEquation::operator()(double lambda) const {
  double sum = 0.0;
  for (double nu : nus) {
    const double s = lambda > 0.0 ? std::clamp(std::abs(nu) / lambda, 0.0, 1.0) : (nu == 0.0 ? 0.0 : 1.0);
    sum += profile(std::asin(s));
  }
  return lambda / kappa - sum / static_cast<double>(nus.size());
}

std::optional<double> solve_lambda(const LambdaEquation& eq) {
  if (!(eq.kappa > 0.0)) throw Error(ErrorCode::DomainError, "kappa must be positive");
  if (eq.nus.empty()) throw Error(ErrorCode::EmptyConfiguration, "no frequencies");
  double lo = eq.bracket_low();
  const double f_lo = eq(lo);
  if (f_lo == 0.0) return lo;

  double hi = 0.0;
  if (f_lo > 0.0) {
    // F can dip below zero after starting positive. F(λ) > 0 once λ > κ·Ĩ(0),
    // so a sign change, if any, lies on [lo, κ·Ĩ(0)].
    const double top = eq.kappa * eq.profile(0.0);
    if (!(top > lo)) return std::nullopt;
    constexpr int kScan = 20000;
    const double h = (top - lo) / kScan;
    double prev = lo;
    bool found = false;
    for (int k = 1; k <= kScan && !found; ++k) {
      const double lam = lo + h * k;
      const double f = eq(lam);
      if (f == 0.0) return lam;
      if (f < 0.0) {
        hi = prev;
        lo = lam;
        found = true;
      }
      prev = lam;
    }
    if (!found) return std::nullopt;
  } else {
    hi = lo > 0.0 ? 2.0 * lo : eq.kappa;
    double f_hi = eq(hi);
    while (f_hi <= 0.0) {
      if (f_hi == 0.0) return hi;
      lo = hi;
      hi *= 2.0;
      f_hi = eq(hi);
    }
  }
  // Invariant: F(lo) < 0 < F(hi); lo may exceed hi after a downward crossing.
  for (int it = 0; it < 400; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double f = eq(mid);
    if (std::abs(f) <= 1e-12) return mid;
    (f < 0.0 ? lo : hi) = mid;
  }
  return std::abs(eq(lo)) <= std::abs(eq(hi)) ? lo : hi;
}

std::optional<double> monotonicity_violation(const LambdaEquation& eq, double upper, std::size_t points) {
  const double lo = eq.bracket_low();
  const double h = (upper - lo) / static_cast<double>(points - 1);
  double prev = eq(lo);
  for (std::size_t k = 1; k < points; ++k) {
    const double lam = lo + h * static_cast<double>(k);
    const double cur = eq(lam);
    if (cur < prev - 1e-12) return lam;
    prev = cur;
  }
  return std::nullopt;
}

EquilibriumState build_equilibrium(double lambda_star, const std::vector<double>& nus,
                                   const std::vector<Vector>& axes) {
  if (nus.size() != axes.size()) throw Error(ErrorCode::LengthMismatch, "one axis per frequency required");
  if (nus.empty()) throw Error(ErrorCode::EmptyConfiguration, "no frequencies");
  const Eigen::Index rows = axes.front().size();
  EquilibriumState st;
  st.lambda_star = lambda_star;
  st.axes = axes;
  Matrix pts(rows, static_cast<Eigen::Index>(nus.size()));
  for (std::size_t i = 0; i < nus.size(); ++i) {
    if (std::abs(nus[i]) > lambda_star) {
      throw Error(ErrorCode::OutOfRange, "|nu_" + std::to_string(i) + "| exceeds lambda*");
    }
    if (axes[i].size() != rows) throw Error(ErrorCode::LengthMismatch, "axes of mixed dimension");
    const double phi = std::asin(std::clamp(nus[i] / lambda_star, -1.0, 1.0));
    st.phis.push_back(phi);
    Vector x = std::sin(phi) * axes[i];
    x(0) += std::cos(phi);
    pts.col(static_cast<Eigen::Index>(i)) = x;
  }
  st.config = Configuration(std::move(pts));
  return st;
}

double residual(const ModelParams& params, const Configuration& x) {
  return rhs(params, x).colwise().norm().maxCoeff();
}

const char* to_string(ZeroFrequencyClass c) {
  switch (c) {
    case ZeroFrequencyClass::set_a: return "SetA";
    case ZeroFrequencyClass::set_b: return "SetB";
    case ZeroFrequencyClass::not_equilibrium: return "NotEquilibrium";
  }
  return "NotEquilibrium";
}

ZeroFrequencyClass classify_zero_frequency(const Configuration& x, Angle beta) {
  const Vector e = UnitVector::attraction_point(x.dim()).coords();
  bool bipolar = true;
  for (Eigen::Index i = 0; i < x.size() && bipolar; ++i) {
    const double d = std::min((x.column(i) - e).norm(), (x.column(i) + e).norm());
    if (d > 1e-9) bipolar = false;
  }
  if (bipolar) return ZeroFrequencyClass::set_b;
  for (double phi : polar_angles(x))
    if (phi < beta.radians() - 1e-9) return ZeroFrequencyClass::not_equilibrium;
  return ZeroFrequencyClass::set_a;
}

double s2_component_residual(const Eigen::Vector3d& y, double mu) {
  const double r1 = y(2) + mu * (1.0 - y(0) * y(0));
  const double r2 = mu * y(0) * y(1);
  const double r3 = y(0) * (1.0 + mu * y(2));
  return std::max({std::abs(r1), std::abs(r2), std::abs(r3)});
}

S2Report classify_s2(const Configuration& x, const SkewMatrix& omega, double kappa, const InfluenceProfile& profile) {
  if (x.dim() != 2 || omega.size() != 3) throw Error(ErrorCode::UnsupportedDim, "S^2 classification needs d = 2");
  const Matrix& m = omega.matrix();
  const Eigen::Vector3d w(m(2, 1), m(0, 2), m(1, 0));
  S2Report rep;
  rep.rate = w.norm();
  if (rep.rate <= 1e-14) throw Error(ErrorCode::UnsupportedAxis, "zero frequency has no rotation axis");
  rep.axis = w / rep.rate;
  const Eigen::Vector3d e(1.0, 0.0, 0.0);
  const double c = rep.axis.dot(e);
  if (std::abs(std::abs(c) - 1.0) <= 1e-9) {
    rep.axis_case = AxisCase::parallel;
  } else if (std::abs(c) <= 1e-9) {
    rep.axis_case = AxisCase::perpendicular;
  } else {
    throw Error(ErrorCode::UnsupportedAxis, "rotation axis neither parallel nor perpendicular to e");
  }
  rep.mean_influence = mean_influence(profile, x);
  rep.mu = kappa * rep.mean_influence / rep.rate;

  ModelParams params;
  params.kappa = kappa;
  params.dim = 2;
  params.profile = profile;
  params.omegas.assign(static_cast<std::size_t>(x.size()), omega);
  rep.residual = residual(params, x);

  if (rep.axis_case == AxisCase::parallel) {
    rep.on_great_circles = false;
    bool poles = true;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      S2Particle p;
      p.frame_coords = x.column(i);
      const bool pole = std::min((p.frame_coords - e).norm(), (p.frame_coords + e).norm()) <= 1e-9;
      p.branch = pole ? "pole" : "off-circle";
      poles = poles && pole;
      rep.particles.push_back(p);
    }
    rep.equilibrium = poles;
    return rep;
  }

  const Eigen::Vector3d e3 = e.cross(rep.axis);
  rep.on_great_circles = true;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const Eigen::Vector3d xi = x.column(i);
    S2Particle p;
    p.frame_coords = Eigen::Vector3d(xi.dot(e), xi.dot(rep.axis), xi.dot(e3));
    const bool c1 = std::abs(p.frame_coords(0)) <= 1e-9;
    const bool c2 = std::abs(p.frame_coords(1)) <= 1e-9;
    p.branch = c1 && c2 ? "both" : c1 ? "x1=0" : c2 ? "x2=0" : "off-circle";
    if (!c1 && !c2) rep.on_great_circles = false;
    p.component_residual = s2_component_residual(p.frame_coords, rep.mu);
    worst = std::max(worst, p.component_residual);
    rep.particles.push_back(p);
  }
  rep.equilibrium = rep.on_great_circles && worst <= 1e-9 && rep.residual <= 1e-9;
  return rep;
}

BasinResult basin_rate(const ModelParams& params, const EquilibriumState& eq, double perturbation,
                       std::uint64_t seed, double dt, double t_end) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix pts = eq.config.points();
  for (Eigen::Index i = 0; i < pts.cols(); ++i) {
    Vector dir(pts.rows());
    for (Eigen::Index r = 0; r < dir.size(); ++r) dir(r) = normal(rng);
    const Vector xi = pts.col(i);
    dir -= dir.dot(xi) * xi;
    dir *= perturbation / dir.norm();
    pts.col(i) = renormalize(xi + dir).coords();
  }
  const auto traj = integrate(params, Configuration(std::move(pts)), dt, t_end);
  std::vector<double> dist(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    dist[k] = (traj.states[k].points() - eq.config.points()).colwise().norm().maxCoeff();
  }
  BasinResult res;
  res.initial_distance = dist.front();
  res.final_distance = dist.back();
  if (const auto slope = fit_decay_rate(traj.times, dist)) res.rate = -*slope;
  return res;
}

}  // namespace winfree
