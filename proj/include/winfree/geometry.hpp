#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace winfree {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

constexpr double kPi = 3.14159265358979323846;

/// Tolerance on |‖x‖ − 1| accepted when wrapping coordinates as a UnitVector.
constexpr double kUnitTolerance = 1e-12;

/// A point of S^d, stored as its d+1 ambient coordinates.
class UnitVector {
 public:
  explicit UnitVector(Vector coords, double tolerance = kUnitTolerance);

  /// e = (1, 0, ..., 0) in R^{dim+1}.
  static UnitVector attraction_point(int dim);

  const Vector& coords() const { return coords_; }
  Eigen::Index size() const { return coords_.size(); }
  int dim() const { return static_cast<int>(coords_.size()) - 1; }
  double operator[](Eigen::Index i) const { return coords_[i]; }

  UnitVector operator-() const { return UnitVector(-coords_); }

 private:
  Vector coords_;
};

/// Skew-symmetric generator Ω. Only the strict upper triangle is free; the
/// lower triangle is always its exact negation and the diagonal is zero.
class SkewMatrix {
 public:
  SkewMatrix() = default;
  explicit SkewMatrix(Eigen::Index size) : m_(Matrix::Zero(size, size)) {}

  /// Accepts m when ‖m + mᵀ‖_max ≤ tolerance and keeps its upper triangle.
  static SkewMatrix from_matrix(const Matrix& m, double tolerance = 1e-12);
  /// [[0, −ν], [ν, 0]].
  static SkewMatrix planar(double nu);
  /// hat(w) with hat(w) v = w × v.
  static SkewMatrix hat(const Eigen::Vector3d& w);
  /// rate·(w uᵀ − u wᵀ); for orthonormal u, w this turns u toward w.
  static SkewMatrix plane_rotation(const Vector& u, const Vector& w, double rate);

  void set(Eigen::Index row, Eigen::Index col, double value);

  const Matrix& matrix() const { return m_; }
  Eigen::Index size() const { return m_.rows(); }
  Vector apply(const Vector& x) const { return m_ * x; }
  bool is_zero() const { return m_.isZero(0.0); }

  friend bool operator==(const SkewMatrix& a, const SkewMatrix& b) {
    return a.m_.rows() == b.m_.rows() && a.m_ == b.m_;
  }

 private:
  Matrix m_;
};

/// Geodesic angle in [0, π].
class Angle {
 public:
  Angle() = default;
  explicit Angle(double radians);

  double radians() const { return value_; }

 private:
  double value_ = 0.0;
};

/// arccos⟨x, y⟩ with the inner product clamped to [−1, 1].
Angle angle(const UnitVector& x, const UnitVector& y);
double angle_between(const Vector& x, const Vector& y);

enum class TangentForm { raw, unit };

/// e − ⟨x, e⟩x; with TangentForm::unit the result is normalised to n_e(x) and
/// DegeneratePoint is raised when x = ±e.
Vector tangent_toward_e(const UnitVector& x, const UnitVector& e, TangentForm form = TangentForm::raw);

double operator_norm(const SkewMatrix& omega);

/// exp(tΩ). Closed forms for 2×2 and 3×3, scaling-and-squaring Taylor otherwise.
Matrix skew_exponential(const SkewMatrix& omega, double t);

UnitVector renormalize(const Vector& x);

/// Polar angle uniform in [0, γ], direction uniform in the unit sphere of e⊥.
UnitVector random_in_cap(int dim, Angle gamma, std::mt19937_64& rng);
UnitVector random_in_cap(int dim, Angle gamma, std::uint64_t seed);

/// Uniformly distributed point on S^dim.
UnitVector random_on_sphere(int dim, std::mt19937_64& rng);

}  // namespace winfree
