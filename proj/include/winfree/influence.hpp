#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "winfree/configuration.hpp"
#include "winfree/geometry.hpp"

namespace winfree {

enum class ProfileKind { builtin_i1, builtin_i2, table, custom };

/// Radial influence profile Ĩ : [0, π] → [0, ∞). The sphere-level influence
/// is I(x) = Ĩ(∠(e, x)). Immutable and cheap to copy.
class InfluenceProfile {
 public:
  using Evaluator = std::function<double(double)>;
  using Table = std::vector<std::pair<double, double>>;

  /// Ĩ(φ) = max(1 − φ, 0), β = 1.
  static InfluenceProfile builtin_i1();
  /// Ĩ(φ) = (2φ − 1)² on [0, 0.5], 0 beyond; β = 0.5.
  static InfluenceProfile builtin_i2();
  /// Piecewise-linear through (angle, value) pairs; constant beyond the last
  /// node. Angles must start at 0 and increase strictly.
  static InfluenceProfile table(std::string name, double beta, Table points);
  /// Arbitrary evaluator; the Lipschitz constant is estimated on a grid when
  /// not supplied.
  static InfluenceProfile custom(std::string name, double beta, Evaluator fn, double lipschitz = -1.0);

  const std::string& name() const { return state_->name; }
  ProfileKind kind() const { return state_->kind; }
  double beta() const { return state_->beta; }
  double lipschitz() const { return state_->lipschitz; }
  const Table& nodes() const { return state_->nodes; }

  /// Unchecked evaluation; see evaluate() for the domain-checked form.
  double operator()(double phi) const { return state_->fn(phi); }

 private:
  struct State {
    std::string name;
    ProfileKind kind;
    double beta;
    double lipschitz;
    Table nodes;
    Evaluator fn;
  };
  explicit InfluenceProfile(std::shared_ptr<const State> s) : state_(std::move(s)) {}

  std::shared_ptr<const State> state_;
};

/// Ĩ(φ); DomainError if φ ∉ [0, π].
double evaluate(const InfluenceProfile& profile, double phi);
/// I(x) = Ĩ(∠(e, x)).
double evaluate_point(const InfluenceProfile& profile, const UnitVector& x);
/// I_c = (1/N) Σ_k I(x_k); EmptyConfiguration when N = 0.
double mean_influence(const InfluenceProfile& profile, const Configuration& x);

constexpr std::size_t kProfileGrid = 100000;

/// sup |ΔĨ/Δφ| over a uniform grid of [0, π].
double lipschitz_estimate(const InfluenceProfile& profile, std::size_t grid = kProfileGrid);

struct ConditionCheck {
  std::string id;  // "C1".."C4"
  bool pass = false;
  std::string detail;
  std::vector<double> witnesses;  // offending grid angles
};

struct ProfileReport {
  std::string profile;
  std::vector<ConditionCheck> conditions;

  bool all_pass() const;
  const ConditionCheck& condition(const std::string& id) const;
};

/// Grid check of monotone decrease, support in [0, β] with 0 < β < π/2,
/// normalisation Ĩ(0) = 1, and a finite Lipschitz bound. Failures are data.
ProfileReport validate(const InfluenceProfile& profile, std::size_t grid = kProfileGrid);

}  // namespace winfree
