#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "winfree/configuration.hpp"
#include "winfree/dynamics.hpp"
#include "winfree/geometry.hpp"
#include "winfree/influence.hpp"

namespace winfree {

/// sin γ · Ĩ(γ) > max‖Ω_j‖_op / κ.
struct CapCondition {
  Angle gamma;
  double kappa = 0.0;
  double max_op_norm = 0.0;
  InfluenceProfile profile = InfluenceProfile::builtin_i1();

  bool satisfied() const;
};

struct Witness {
  double time = 0.0;
  std::vector<int> indices;
};

/// Outcome of one statement check. A vacuous verdict records that the
/// hypothesis did not hold; it passes but carries no evidence.
struct Verdict {
  std::string id;
  double threshold = 0.0;
  double observed = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::optional<Witness> witness;
  bool vacuous = false;
  std::string note;
};

Verdict vacuous_verdict(std::string id, std::string reason);

/// κ_c = N·max‖Ω‖_op / (sin β · Ĩ(γ)).
double critical_coupling(int n, double max_op_norm, Angle beta, Angle gamma, const InfluenceProfile& profile);

bool cap_contains(const Configuration& x, double gamma, double slack = 0.0);

Verdict cap_invariance_check(const ModelParams& params, Angle gamma, const Trajectory& traj);

struct TransitionBound {
  Angle beta_star;
  double t_j = 0.0;
};

/// β_* and the entry-time bound T_j for one oscillator starting at polar angle φ0.
TransitionBound transition_bound(int n, double kappa, Angle beta, Angle gamma, const InfluenceProfile& profile,
                                 Angle phi0, double op_norm_j, double max_op_norm);

/// Every φ_i stays within β after t_bound, and nobody leaves D_β once inside.
Verdict entry_check(const Trajectory& traj, Angle beta, double t_bound);

/// Runs the absorption statement end to end: bound from the initial data,
/// then entry_check on the trajectory.
Verdict absorption_check(const ModelParams& params, Angle gamma, const Trajectory& traj);

double l1_distance(const Configuration& a, const Configuration& b);

/// OLS slope of log(value) against t over [start_fraction·T, T]. Values at or
/// below kConvergedFloor are dropped; nullopt when fewer than two remain.
constexpr double kConvergedFloor = 1e-14;
std::optional<double> fit_decay_rate(std::span<const double> times, std::span<const double> values,
                                     double start_fraction = 0.25);

/// Paired runs from x0 and x0_tilde; contraction of the ℓ¹ distance.
Verdict stability_check(const ModelParams& params, const Configuration& x0, const Configuration& x0_tilde,
                        Angle gamma, double dt, double t_end);

Verdict pairwise_monotonicity_check(const Trajectory& traj, Angle beta);

double max_pairwise_chord(const Configuration& x);
Verdict aggregation_check(const ModelParams& params, Angle gamma, const Trajectory& traj);

double order_parameter(const Configuration& x);

enum class Dichotomy { synchronized, escaped, undecided };
const char* to_string(Dichotomy d);

struct DichotomyResult {
  Dichotomy outcome = Dichotomy::undecided;
  bool order_monotone = true;
  double worst_order_drop = 0.0;
  std::optional<Witness> witness;
};

/// Requires initial pairwise angles below π/2 − β.
DichotomyResult dichotomy_classify(const Trajectory& traj, const InfluenceProfile& profile);
Verdict dichotomy_check(const Trajectory& traj, const InfluenceProfile& profile);

/// Max deviation from exp((t − t0)Ω) x(t0) after the first record from which
/// I_c stays zero. nullopt when the run never escapes.
std::optional<double> free_flow_deviation(const Trajectory& traj, const SkewMatrix& omega);

double cross_ratio(const Configuration& x, int i1, int i2, int i3, int i4);

/// A unit v with Ωv = 0 and ⟨v, e⟩ = 0, if the kernel meets e⊥.
std::optional<Vector> sn_membership(const SkewMatrix& omega);

double motion_constant_ratio(const Configuration& x, int i, int j, const Vector& v);

/// Relative drift of every cross-ratio over consecutive quadruples.
Verdict cross_ratio_check(const Trajectory& traj);
Verdict motion_constant_check(const Trajectory& traj, const Vector& v);
Verdict inner_decay_check(const Trajectory& traj, const Vector& v, double lambda);

/// Δφ_j/Δt against the averaged right-hand side of the angle inequality.
Verdict angle_inequality_check(const ModelParams& params, const Trajectory& traj);
Verdict single_cap_check(const ModelParams& params, Angle gamma, const Trajectory& traj);
/// Finite-horizon proxy for the liminf bound: minimum of φ_j over the last quarter.
Verdict liminf_check(const ModelParams& params, Angle gamma, const Trajectory& traj);
/// I_c (⟨e,x_i⟩ + ⟨e,x_j⟩)‖x_i − x_j‖² at the final record.
Verdict dissipation_limit_check(const Trajectory& traj, const InfluenceProfile& profile);
Verdict norm_conservation_check(const Trajectory& traj, double tolerance = 1e-12);

}  // namespace winfree
