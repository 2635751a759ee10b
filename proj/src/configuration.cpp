#include "winfree/configuration.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "winfree/error.hpp"

namespace winfree {

Configuration::Configuration(Matrix points, double tolerance) : points_(std::move(points)) {
  if (points_.cols() > 0 && points_.rows() < 2) {
    throw Error(ErrorCode::UnsupportedDim, "points need at least 2 coordinates");
  }
  for (Eigen::Index i = 0; i < points_.cols(); ++i) {
    const double n = points_.col(i).norm();
    if (!std::isfinite(n) || std::abs(n - 1.0) > tolerance) {
      throw Error(ErrorCode::NotUnitNorm,
                  "oscillator " + std::to_string(i) + " has norm " + std::to_string(n));
    }
  }
}

Configuration::Configuration(const std::vector<UnitVector>& points) {
  if (points.empty()) return;
  const Eigen::Index rows = points.front().size();
  points_.resize(rows, static_cast<Eigen::Index>(points.size()));
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != rows) throw Error(ErrorCode::LengthMismatch, "oscillators of mixed dimension");
    points_.col(static_cast<Eigen::Index>(i)) = points[i].coords();
  }
}

Vector Configuration::centroid() const {
  if (empty()) throw Error(ErrorCode::EmptyConfiguration, "centroid of an empty configuration");
  return points_.rowwise().mean();
}

std::vector<double> pairwise_chords(const Configuration& x) {
  const Eigen::Index n = x.size();
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) out.push_back((x.column(i) - x.column(j)).norm());
  return out;
}

std::vector<double> polar_angles(const Configuration& x) {
  std::vector<double> out(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    out[static_cast<std::size_t>(i)] = std::acos(std::clamp(x.points()(0, i), -1.0, 1.0));
  }
  return out;
}

}  // namespace winfree
