#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "winfree/configuration.hpp"
#include "winfree/dynamics.hpp"
#include "winfree/geometry.hpp"
#include "winfree/influence.hpp"

namespace winfree {

/// Ω = ν(n eᵀ − e nᵀ): Ωe = νn, Ωn = −νe, zero on span{e, n}⊥.
struct StructuredFrequency {
  double nu = 0.0;
  Vector axis;
  SkewMatrix omega;

  /// DomainError unless n is a unit vector orthogonal to e.
  static StructuredFrequency make(double nu, const Vector& axis);
};

/// n_i = (0, 1, 0, ...) for every oscillator.
std::vector<Vector> default_axes(std::size_t n, int dim);

std::vector<SkewMatrix> structured_frequencies(const std::vector<double>& nus, const std::vector<Vector>& axes);

/// F(λ) = λ/κ − (1/N) Σ_k Ĩ(arcsin(|ν_k|/λ)).
struct LambdaEquation {
  double kappa = 0.0;
  std::vector<double> nus;
  InfluenceProfile profile = InfluenceProfile::builtin_i1();

  /// max|ν| / sin β.
  double bracket_low() const;
  double operator()(double lambda) const;
};

/// A root of F above bracket_low, bisected to |F| ≤ 1e-12.
/// F need not be monotone there, so a positive F(bracket_low) triggers a grid
/// scan of [bracket_low, κ·Ĩ(0)]; nullopt (NoRoot) when no sign change is seen.
std::optional<double> solve_lambda(const LambdaEquation& eq);

/// First grid point on [bracket_low, upper] where F decreases, if any.
std::optional<double> monotonicity_violation(const LambdaEquation& eq, double upper, std::size_t points = 10000);

struct EquilibriumState {
  double lambda_star = 0.0;
  std::vector<double> phis;  // signed, sin φ_i = ν_i/λ*
  std::vector<Vector> axes;
  Configuration config;
};

/// x_i = cos φ_i e + sin φ_i n_i; OutOfRange when some |ν_i| > λ*.
EquilibriumState build_equilibrium(double lambda_star, const std::vector<double>& nus, const std::vector<Vector>& axes);

/// max_i ‖rhs_i‖.
double residual(const ModelParams& params, const Configuration& x);

enum class ZeroFrequencyClass { set_a, set_b, not_equilibrium };
const char* to_string(ZeroFrequencyClass c);

/// Checks the bipolar set B before set A, so a configuration at −e reports B.
ZeroFrequencyClass classify_zero_frequency(const Configuration& x, Angle beta);

enum class AxisCase { parallel, perpendicular };

struct S2Particle {
  std::string branch;  // "x1=0", "x2=0", "both", "pole" or "off-circle"
  Eigen::Vector3d frame_coords;
  double component_residual = 0.0;
};

struct S2Report {
  AxisCase axis_case = AxisCase::parallel;
  double rate = 0.0;  // λ in Ω = λ·hat(u)
  Eigen::Vector3d axis;
  double mean_influence = 0.0;
  double mu = 0.0;  // κ I_c / λ
  bool on_great_circles = false;
  bool equilibrium = false;
  double residual = 0.0;
  std::vector<S2Particle> particles;
};

/// Component equations in the frame (e, u, e × u) for the perpendicular case:
/// x³ + μ(1 − (x¹)²), μ x¹x², x¹(1 + μ x³). Returns the largest magnitude.
double s2_component_residual(const Eigen::Vector3d& y, double mu);

/// d = 2 only (UnsupportedDim); UnsupportedAxis unless u ∥ e or u ⟂ e.
S2Report classify_s2(const Configuration& x, const SkewMatrix& omega, double kappa, const InfluenceProfile& profile);

struct BasinResult {
  std::optional<double> rate;  // fitted decay rate of the distance to equilibrium, > 0 when attracting
  double initial_distance = 0.0;
  double final_distance = 0.0;
};

/// Perturbs each oscillator by chord ≈ `perturbation` and fits the return rate.
BasinResult basin_rate(const ModelParams& params, const EquilibriumState& eq, double perturbation,
                       std::uint64_t seed, double dt, double t_end);

}  // namespace winfree
