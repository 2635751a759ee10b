#pragma once

#include <vector>

#include "winfree/geometry.hpp"

namespace winfree {

/// Tolerance on each oscillator's norm when a Configuration is built.
constexpr double kConfigurationTolerance = 1e-9;

/// N oscillators on S^d, stored column-wise in a (d+1) × N matrix.
class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(Matrix points, double tolerance = kConfigurationTolerance);
  explicit Configuration(const std::vector<UnitVector>& points);

  Eigen::Index size() const { return points_.cols(); }
  int dim() const { return static_cast<int>(points_.rows()) - 1; }
  bool empty() const { return points_.cols() == 0; }

  const Matrix& points() const { return points_; }
  auto column(Eigen::Index i) const { return points_.col(i); }
  UnitVector point(Eigen::Index i) const { return UnitVector(points_.col(i), kConfigurationTolerance); }

  /// Mean position x_c.
  Vector centroid() const;

 private:
  Matrix points_;
};

/// ‖x_i − x_j‖ for i < j in lexicographic order.
std::vector<double> pairwise_chords(const Configuration& x);

/// Polar angles φ_i = ∠(x_i, e).
std::vector<double> polar_angles(const Configuration& x);

}  // namespace winfree
