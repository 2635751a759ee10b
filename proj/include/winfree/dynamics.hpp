#pragma once

#include <functional>
#include <span>
#include <vector>

#include "winfree/configuration.hpp"
#include "winfree/geometry.hpp"
#include "winfree/influence.hpp"

namespace winfree {

/// Coupling κ, natural frequencies Ω_i, influence profile and the optional
/// sensitivity shape η (the constant 1 when empty).
struct ModelParams {
  double kappa = 0.0;
  std::vector<SkewMatrix> omegas;
  InfluenceProfile profile = InfluenceProfile::builtin_i1();
  std::function<double(const Vector&)> eta;
  int dim = 1;

  /// Throws LengthMismatch / DomainError when the params cannot drive x.
  void check_against(const Configuration& x) const;
  bool identical_frequencies() const;
  double max_op_norm() const;
};

/// Per-record derived quantities.
struct Observables {
  std::vector<double> phis;  // φ_i = ∠(x_i, e)
  double mean_influence = 0.0;  // I_c
  double order_parameter = 0.0;  // R = ‖x_c‖
};

Observables observe(const InfluenceProfile& profile, const Configuration& x);

struct Trajectory {
  std::vector<double> times;
  std::vector<Configuration> states;
  std::vector<Observables> observables;
  double dt = 0.0;
  /// max over steps and oscillators of |‖x_i‖ − 1| before projection.
  double max_norm_drift = 0.0;

  std::size_t size() const { return times.size(); }
  const Configuration& initial() const { return states.front(); }
  const Configuration& final_state() const { return states.back(); }
  double final_time() const { return times.back(); }
};

/// v_i = Ω_i x_i + (κ/N)(e − ⟨x_i, e⟩x_i) η(x_i) Σ_j I(x_j), one column per oscillator.
Matrix rhs(const ModelParams& params, const Configuration& x);

struct IntegrateOptions {
  /// Record every k-th step; 0 picks 1 for T ≤ 10 and 10 beyond.
  int decimation = 0;
  /// Called on the raw stepped state before projection. Test seam only.
  std::function<void(Matrix&)> pre_projection_hook;
};

/// Classical RK4 with a fixed step followed by projection onto S^d.
Trajectory integrate(const ModelParams& params, const Configuration& x0, double dt, double t_end,
                     const IntegrateOptions& options = {});

/// Scalar model θ_i' = ν_i + (κ/N) S(θ_i) Σ_k I(θ_k).
struct ScalarParams {
  double kappa = 0.0;
  std::vector<double> nus;
  std::function<double(double)> sensitivity;
  std::function<double(double)> influence;
};

std::vector<double> scalar_rhs(const ScalarParams& params, std::span<const double> theta);

struct ScalarTrajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> thetas;
};

ScalarTrajectory integrate_scalar(const ScalarParams& params, std::vector<double> theta0, double dt, double t_end,
                                  int decimation = 1);

/// Wrap into (−π, π].
double wrap_angle(double theta);

/// Scalar-model counterpart of the sphere model at d = 1 with η ≡ 1:
/// S(θ) = −sin θ and I(θ) = Ĩ(|wrap(θ)|).
ScalarParams reduce_to_scalar(const ModelParams& params);

/// y_i(t) = exp(−tΩ) x_i(t); HypothesisViolated unless ‖Ωe‖ ≤ 1e-10.
Trajectory split_transform(const Trajectory& traj, const SkewMatrix& omega, const InfluenceProfile& profile);

/// θ ↦ (cos θ, sin θ) for d = 1 or (cos θ, sin θ, 0) for d = 2.
Configuration embed_circle(std::span<const double> thetas, int target_dim);
/// ν ↦ the 2×2 rotation generator, zero-padded to d + 1.
std::vector<SkewMatrix> lift_frequencies(std::span<const double> nus, int target_dim);

}  // namespace winfree
