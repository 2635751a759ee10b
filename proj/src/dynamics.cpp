#include "winfree/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "winfree/error.hpp"

namespace winfree {

void ModelParams::check_against(const Configuration& x) const {
  if (x.empty()) throw Error(ErrorCode::EmptyConfiguration, "configuration has no oscillators");
  if (x.dim() != dim) {
    throw Error(ErrorCode::LengthMismatch,
                "configuration lives on S^" + std::to_string(x.dim()) + ", params on S^" + std::to_string(dim));
  }
  if (static_cast<Eigen::Index>(omegas.size()) != x.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(omegas.size()) + " frequency matrices for " +
                                               std::to_string(x.size()) + " oscillators");
  }
  for (const auto& om : omegas) {
    if (om.size() != dim + 1) throw Error(ErrorCode::LengthMismatch, "frequency matrix of wrong size");
  }
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) throw Error(ErrorCode::DomainError, "kappa must be finite and >= 0");
}

bool ModelParams::identical_frequencies() const {
  return std::all_of(omegas.begin(), omegas.end(), [&](const SkewMatrix& m) { return m == omegas.front(); });
}

double ModelParams::max_op_norm() const {
  double m = 0.0;
  for (const auto& om : omegas) m = std::max(m, operator_norm(om));
  return m;
}

Observables observe(const InfluenceProfile& profile, const Configuration& x) {
  Observables o;
  o.phis = polar_angles(x);
  double sum = 0.0;
  for (double phi : o.phis) sum += profile(phi);
  o.mean_influence = sum / static_cast<double>(x.size());
  o.order_parameter = x.centroid().norm();
  return o;
}

namespace {

// Works on raw RK stage states, which sit O(dt²) off the sphere: the influence
// uses the polar angle of x/‖x‖, the projection term keeps its polynomial form.
class RhsEvaluator {
 public:
  explicit RhsEvaluator(const ModelParams& params)
      : params_(params), identical_(params.identical_frequencies()) {}

  void operator()(const Matrix& x, Matrix& out) const {
    const Eigen::Index n = x.cols();
    double sum = 0.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      const double c = x(0, k) / x.col(k).norm();
      sum += params_.profile(std::acos(std::clamp(c, -1.0, 1.0)));
    }
    const double gain = params_.kappa * sum / static_cast<double>(n);

    if (identical_) {
      out.noalias() = params_.omegas.front().matrix() * x;
    } else {
      for (Eigen::Index i = 0; i < n; ++i) {
        out.col(i).noalias() = params_.omegas[static_cast<std::size_t>(i)].matrix() * x.col(i);
      }
    }
    if (gain == 0.0) return;
    for (Eigen::Index i = 0; i < n; ++i) {
      double g = gain;
      if (params_.eta) g *= params_.eta(x.col(i));
      const double proj = x(0, i);
      out.col(i) -= (g * proj) * x.col(i);
      out(0, i) += g;
    }
  }

 private:
  const ModelParams& params_;
  bool identical_;
};

bool all_finite(const Matrix& m) { return m.allFinite(); }

}  // namespace

Matrix rhs(const ModelParams& params, const Configuration& x) {
  params.check_against(x);
  Matrix out(x.points().rows(), x.points().cols());
  const RhsEvaluator eval{params};
  eval(x.points(), out);
  return out;
}

Trajectory integrate(const ModelParams& params, const Configuration& x0, double dt, double t_end,
                     const IntegrateOptions& options) {
  params.check_against(x0);
  if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorCode::DomainError, "dt must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw Error(ErrorCode::DomainError, "T must be >= 0");

  int decimation = options.decimation;
  if (decimation <= 0) decimation = t_end <= 10.0 ? 1 : 10;
  const auto steps = static_cast<long long>(std::ceil(t_end / dt - 1e-9));

  const RhsEvaluator f(params);
  const Eigen::Index rows = x0.points().rows();
  const Eigen::Index cols = x0.points().cols();
  Matrix x = x0.points();
  Matrix k1(rows, cols), k2(rows, cols), k3(rows, cols), k4(rows, cols), stage(rows, cols);

  Trajectory traj;
  traj.dt = dt;
  const auto expected = static_cast<std::size_t>(steps / decimation + 2);
  traj.times.reserve(expected);
  traj.states.reserve(expected);
  traj.observables.reserve(expected);
  auto record = [&](double t) {
    traj.times.push_back(t);
    traj.states.emplace_back(x);
    traj.observables.push_back(observe(params.profile, traj.states.back()));
  };
  record(0.0);

  for (long long step = 1; step <= steps; ++step) {
    f(x, k1);
    stage = x + (0.5 * dt) * k1;
    f(stage, k2);
    stage = x + (0.5 * dt) * k2;
    f(stage, k3);
    stage = x + dt * k3;
    f(stage, k4);
    x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (options.pre_projection_hook) options.pre_projection_hook(x);
    if (!all_finite(x)) {
      throw Error(ErrorCode::BlowUp, "non-finite state at step " + std::to_string(step));
    }
    for (Eigen::Index i = 0; i < cols; ++i) {
      const double n = x.col(i).norm();
      traj.max_norm_drift = std::max(traj.max_norm_drift, std::abs(n - 1.0));
      x.col(i) /= n;
    }
    if (step % decimation == 0 || step == steps) record(static_cast<double>(step) * dt);
  }
  return traj;
}

std::vector<double> scalar_rhs(const ScalarParams& params, std::span<const double> theta) {
  if (theta.size() != params.nus.size()) {
    throw Error(ErrorCode::LengthMismatch, "scalar state and frequencies differ in length");
  }
  double sum = 0.0;
  for (double t : theta) sum += params.influence(t);
  const double gain = params.kappa * sum / static_cast<double>(theta.size());
  std::vector<double> out(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i) out[i] = params.nus[i] + gain * params.sensitivity(theta[i]);
  return out;
}

ScalarTrajectory integrate_scalar(const ScalarParams& params, std::vector<double> theta0, double dt, double t_end,
                                  int decimation) {
  if (!(dt > 0.0)) throw Error(ErrorCode::DomainError, "dt must be positive");
  if (decimation <= 0) decimation = 1;
  const auto steps = static_cast<long long>(std::ceil(t_end / dt - 1e-9));
  const std::size_t n = theta0.size();
  ScalarTrajectory out;
  std::vector<double> th = std::move(theta0);
  std::vector<double> stage(n);
  out.times.push_back(0.0);
  out.thetas.push_back(th);
  for (long long step = 1; step <= steps; ++step) {
    const auto k1 = scalar_rhs(params, th);
    for (std::size_t i = 0; i < n; ++i) stage[i] = th[i] + 0.5 * dt * k1[i];
    const auto k2 = scalar_rhs(params, stage);
    for (std::size_t i = 0; i < n; ++i) stage[i] = th[i] + 0.5 * dt * k2[i];
    const auto k3 = scalar_rhs(params, stage);
    for (std::size_t i = 0; i < n; ++i) stage[i] = th[i] + dt * k3[i];
    const auto k4 = scalar_rhs(params, stage);
    for (std::size_t i = 0; i < n; ++i) th[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    if (step % decimation == 0 || step == steps) {
      out.times.push_back(static_cast<double>(step) * dt);
      out.thetas.push_back(th);
    }
  }
  return out;
}

double wrap_angle(double theta) {
  double w = std::remainder(theta, 2.0 * kPi);
  if (w <= -kPi) w += 2.0 * kPi;
  return w;
}

ScalarParams reduce_to_scalar(const ModelParams& params) {
  if (params.dim != 1) throw Error(ErrorCode::UnsupportedDim, "scalar reduction needs d = 1");
  ScalarParams s;
  s.kappa = params.kappa;
  for (const auto& om : params.omegas) s.nus.push_back(om.matrix()(1, 0));
  if (params.eta) {
    s.sensitivity = [eta = params.eta](double th) {
      Vector x(2);
      x << std::cos(th), std::sin(th);
      return -std::sin(th) * eta(x);
    };
  } else {
    s.sensitivity = [](double th) { return -std::sin(th); };
  }
  s.influence = [profile = params.profile](double th) { return profile(std::abs(wrap_angle(th))); };
  return s;
}

Trajectory split_transform(const Trajectory& traj, const SkewMatrix& omega, const InfluenceProfile& profile) {
  if (traj.states.empty()) return traj;
  const Vector e = UnitVector::attraction_point(traj.initial().dim()).coords();
  if (omega.size() != e.size()) throw Error(ErrorCode::LengthMismatch, "frequency matrix of wrong size");
  const double residual = (omega.matrix() * e).norm();
  if (residual > 1e-10) {
    throw Error(ErrorCode::HypothesisViolated, "‖Ωe‖ = " + std::to_string(residual) + " > 1e-10");
  }
  Trajectory out;
  out.dt = traj.dt;
  out.max_norm_drift = traj.max_norm_drift;
  out.times = traj.times;
  out.states.reserve(traj.size());
  out.observables.reserve(traj.size());
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const Matrix r = skew_exponential(omega, -traj.times[k]);
    out.states.emplace_back(r * traj.states[k].points());
    out.observables.push_back(observe(profile, out.states.back()));
  }
  return out;
}

Configuration embed_circle(std::span<const double> thetas, int target_dim) {
  if (target_dim != 1 && target_dim != 2) {
    throw Error(ErrorCode::UnsupportedDim, "circle embedding targets d = 1 or d = 2");
  }
  Matrix pts = Matrix::Zero(target_dim + 1, static_cast<Eigen::Index>(thetas.size()));
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    pts(0, static_cast<Eigen::Index>(i)) = std::cos(thetas[i]);
    pts(1, static_cast<Eigen::Index>(i)) = std::sin(thetas[i]);
  }
  return Configuration(std::move(pts));
}

std::vector<SkewMatrix> lift_frequencies(std::span<const double> nus, int target_dim) {
  if (target_dim != 1 && target_dim != 2) {
    throw Error(ErrorCode::UnsupportedDim, "frequency lift targets d = 1 or d = 2");
  }
  std::vector<SkewMatrix> out;
  out.reserve(nus.size());
  for (double nu : nus) {
    SkewMatrix m(target_dim + 1);
    m.set(0, 1, -nu);
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace winfree
