#include "winfree/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "winfree/error.hpp"

namespace winfree {

UnitVector::UnitVector(Vector coords, double tolerance) : coords_(std::move(coords)) {
  if (coords_.size() < 2) {
    throw Error(ErrorCode::UnsupportedDim, "unit vector needs at least 2 coordinates");
  }
  const double n = coords_.norm();
  if (!std::isfinite(n) || std::abs(n - 1.0) > tolerance) {
    throw Error(ErrorCode::NotUnitNorm, "norm " + std::to_string(n) + " differs from 1");
  }
}

UnitVector UnitVector::attraction_point(int dim) {
  if (dim < 1) throw Error(ErrorCode::UnsupportedDim, "dimension must be >= 1");
  Vector e = Vector::Zero(dim + 1);
  e[0] = 1.0;
  return UnitVector(std::move(e));
}

SkewMatrix SkewMatrix::from_matrix(const Matrix& m, double tolerance) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::NotSkew, "matrix is not square");
  const double asym = (m + m.transpose()).cwiseAbs().maxCoeff();
  if (m.size() > 0 && !(asym <= tolerance)) {
    throw Error(ErrorCode::NotSkew, "‖Ω + Ωᵀ‖_max = " + std::to_string(asym));
  }
  SkewMatrix s(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = i + 1; j < m.cols(); ++j) s.set(i, j, m(i, j));
  return s;
}

SkewMatrix SkewMatrix::planar(double nu) {
  SkewMatrix s(2);
  s.set(0, 1, -nu);
  return s;
}

SkewMatrix SkewMatrix::hat(const Eigen::Vector3d& w) {
  SkewMatrix s(3);
  s.set(0, 1, -w.z());
  s.set(0, 2, w.y());
  s.set(1, 2, -w.x());
  return s;
}

SkewMatrix SkewMatrix::plane_rotation(const Vector& u, const Vector& w, double rate) {
  if (u.size() != w.size()) throw Error(ErrorCode::LengthMismatch, "plane vectors differ in size");
  return from_matrix(rate * (w * u.transpose() - u * w.transpose()), 1e-9);
}

void SkewMatrix::set(Eigen::Index row, Eigen::Index col, double value) {
  if (row == col) throw Error(ErrorCode::NotSkew, "diagonal of a skew matrix is fixed at zero");
  m_(row, col) = value;
  m_(col, row) = -value;
}

Angle::Angle(double radians) : value_(radians) {
  if (!(radians >= 0.0 && radians <= kPi)) {
    throw Error(ErrorCode::DomainError, "angle " + std::to_string(radians) + " outside [0, pi]");
  }
}

double angle_between(const Vector& x, const Vector& y) {
  return std::acos(std::clamp(x.dot(y), -1.0, 1.0));
}

Angle angle(const UnitVector& x, const UnitVector& y) {
  if (x.size() != y.size()) throw Error(ErrorCode::LengthMismatch, "angle of vectors of different size");
  return Angle(angle_between(x.coords(), y.coords()));
}

Vector tangent_toward_e(const UnitVector& x, const UnitVector& e, TangentForm form) {
  if (x.size() != e.size()) throw Error(ErrorCode::LengthMismatch, "tangent of vectors of different size");
  Vector t = e.coords() - x.coords().dot(e.coords()) * x.coords();
  if (form == TangentForm::raw) return t;
  const double n = t.norm();
  if (n < 1e-12) throw Error(ErrorCode::DegeneratePoint, "n_e(x) undefined at x = ±e");
  return t / n;
}

double operator_norm(const SkewMatrix& omega) {
  if (omega.size() == 0 || omega.is_zero()) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(omega.matrix());
  return svd.singularValues()(0);
}

namespace {

Matrix exp_planar(const SkewMatrix& omega, double t) {
  const double a = omega.matrix()(1, 0) * t;
  Matrix r(2, 2);
  r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return r;
}

// Rodrigues: I + (sin θ/θ) A + ((1 − cos θ)/θ²) A² with A = tΩ, θ = ‖A‖.
Matrix exp_rodrigues(const SkewMatrix& omega, double t) {
  const Matrix a = t * omega.matrix();
  const Eigen::Vector3d w(a(2, 1), a(0, 2), a(1, 0));
  const double theta = w.norm();
  double c1;
  double c2;
  if (theta < 1e-4) {
    const double t2 = theta * theta;
    c1 = 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
    c2 = 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
  } else {
    c1 = std::sin(theta) / theta;
    c2 = (1.0 - std::cos(theta)) / (theta * theta);
  }
  return Matrix::Identity(3, 3) + c1 * a + c2 * a * a;
}

}  // namespace

Matrix skew_exponential(const SkewMatrix& omega, double t) {
  switch (omega.size()) {
    case 0: return Matrix();
    case 1: return Matrix::Identity(1, 1);
    case 2: return exp_planar(omega, t);
    case 3: return exp_rodrigues(omega, t);
    default: return (t * omega.matrix()).exp();
  }
}

UnitVector renormalize(const Vector& x) {
  const double n = x.norm();
  if (!(n > 1e-12)) throw Error(ErrorCode::ZeroVector, "cannot normalise a vector of norm " + std::to_string(n));
  return UnitVector(x / n);
}

UnitVector random_on_sphere(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(dim + 1);
  double n = 0.0;
  do {
    for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = normal(rng);
    n = v.norm();
  } while (n < 1e-8);
  return UnitVector(v / n);
}

UnitVector random_in_cap(int dim, Angle gamma, std::mt19937_64& rng) {
  if (dim < 1) throw Error(ErrorCode::UnsupportedDim, "dimension must be >= 1");
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double polar = gamma.radians() * uniform(rng);

  // Direction in e⊥ ≅ S^{dim−1}; for dim = 1 that sphere is {±1}.
  Vector direction = Vector::Zero(dim + 1);
  if (dim == 1) {
    direction[1] = uniform(rng) < 0.5 ? -1.0 : 1.0;
  } else {
    std::normal_distribution<double> normal(0.0, 1.0);
    double n = 0.0;
    do {
      for (int k = 1; k <= dim; ++k) direction[k] = normal(rng);
      n = direction.norm();
    } while (n < 1e-8);
    direction /= n;
  }
  if (polar == 0.0) return UnitVector::attraction_point(dim);
  Vector x = std::sin(polar) * direction;
  x[0] = std::cos(polar);
  return UnitVector(std::move(x));
}

UnitVector random_in_cap(int dim, Angle gamma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_in_cap(dim, gamma, rng);
}

}  // namespace winfree
