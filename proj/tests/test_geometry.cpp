#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "winfree/configuration.hpp"
#include "winfree/error.hpp"
#include "winfree/geometry.hpp"

using namespace winfree;

namespace {

Vector vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index k = 0;
  for (double x : xs) v(k++) = x;
  return v;
}

UnitVector uv(std::initializer_list<double> xs) { return UnitVector(vec(xs)); }

// Term-by-term Taylor series, independent of the production closed forms.
Matrix taylor_exp(const Matrix& a, int terms) {
  Matrix sum = Matrix::Identity(a.rows(), a.cols());
  Matrix term = sum;
  for (int k = 1; k <= terms; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

// Largest ‖Ωv‖ over a latitude-longitude grid of unit v in R³.
double brute_operator_norm(const Matrix& m, int grid) {
  double best = 0.0;
  for (int a = 0; a <= grid; ++a) {
    const double th = kPi * a / grid;
    for (int b = 0; b < 2 * grid; ++b) {
      const double ph = kPi * b / grid;
      const Eigen::Vector3d v(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
      best = std::max(best, (m * Vector(v)).norm());
    }
  }
  return best;
}

}  // namespace

TEST(Angle, Basics) {
  const auto e = UnitVector::attraction_point(2);
  EXPECT_DOUBLE_EQ(angle(e, e).radians(), 0.0);
  EXPECT_NEAR(angle(e, -e).radians(), kPi, 1e-15);
  EXPECT_NEAR(angle(e, uv({0, 1, 0})).radians(), kPi / 2, 1e-15);
}

TEST(Angle, ClampsRoundoff) {
  const Vector x = vec({1.0, 0.0});
  EXPECT_EQ(angle_between(x, x * (1.0 + 1e-16)), 0.0);
  EXPECT_THROW(Angle(-0.1), Error);
  EXPECT_THROW(Angle(4.0), Error);
}

TEST(UnitVector, RejectsNonUnit) {
  try {
    UnitVector(vec({1.0, 1.0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotUnitNorm);
  }
}

TEST(Tangent, Examples) {
  const auto e = UnitVector::attraction_point(2);
  EXPECT_EQ(tangent_toward_e(e, e).norm(), 0.0);
  EXPECT_TRUE(tangent_toward_e(uv({0, 1, 0}), e).isApprox(e.coords()));
  const UnitVector x(vec({std::cos(1.0), std::sin(1.0)}));
  const Vector t = tangent_toward_e(x, UnitVector::attraction_point(1));
  EXPECT_NEAR(t.norm(), std::sqrt(1.0 - std::cos(1.0) * std::cos(1.0)), 1e-15);
  EXPECT_NEAR(t.norm(), 0.841471, 1e-6);
}

TEST(Tangent, UnitFormDegenerateAtPoles) {
  const auto e = UnitVector::attraction_point(2);
  try {
    tangent_toward_e(-e, e, TangentForm::unit);
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.code(), ErrorCode::DegeneratePoint);
  }
  const auto n = tangent_toward_e(uv({0.6, 0.8, 0}), e, TangentForm::unit);
  EXPECT_NEAR(n.norm(), 1.0, 1e-15);
  EXPECT_NEAR(n.dot(vec({0.6, 0.8, 0})), 0.0, 1e-15);
}

TEST(Tangent, OrthogonalToPoint) {
  std::mt19937_64 rng(3);
  const auto e = UnitVector::attraction_point(3);
  for (int k = 0; k < 200; ++k) {
    const auto x = random_on_sphere(3, rng);
    EXPECT_NEAR(tangent_toward_e(x, e).dot(x.coords()), 0.0, 1e-14);
  }
}

TEST(SkewMatrix, Validation) {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  try {
    SkewMatrix::from_matrix(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSkew);
  }
  SkewMatrix s(3);
  s.set(0, 2, 0.4);
  EXPECT_EQ(s.matrix()(2, 0), -0.4);
  EXPECT_THROW(s.set(1, 1, 1.0), Error);
}

TEST(SkewMatrix, HatIsCrossProduct) {
  const Eigen::Vector3d w(0.3, -1.2, 0.5), v(1.0, 2.0, -0.7);
  EXPECT_TRUE(Eigen::Vector3d(SkewMatrix::hat(w).matrix() * Vector(v)).isApprox(w.cross(v), 1e-15));
}

TEST(OperatorNorm, Examples) {
  EXPECT_NEAR(operator_norm(SkewMatrix::planar(0.7)), 0.7, 1e-15);
  EXPECT_EQ(operator_norm(SkewMatrix(4)), 0.0);
  const auto om = SkewMatrix::hat(Eigen::Vector3d(0, 2, 0));
  EXPECT_NEAR(operator_norm(om), 2.0, 1e-14);
  EXPECT_NEAR(operator_norm(om), brute_operator_norm(om.matrix(), 400), 1e-4);
}

TEST(OperatorNorm, MatchesBruteForceOnRandomSkew) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> nd;
  for (int k = 0; k < 5; ++k) {
    const auto om = SkewMatrix::hat(Eigen::Vector3d(nd(rng), nd(rng), nd(rng)));
    const double brute = brute_operator_norm(om.matrix(), 300);
    EXPECT_LE(brute, operator_norm(om) + 1e-12);
    EXPECT_NEAR(brute, operator_norm(om), 1e-3 * operator_norm(om));
  }
}

TEST(Exponential, Examples) {
  EXPECT_TRUE(skew_exponential(SkewMatrix::hat(Eigen::Vector3d(1, 2, 3)), 0.0).isIdentity(0.0));
  Matrix quarter(2, 2);
  quarter << 0, -1, 1, 0;
  EXPECT_LT((skew_exponential(SkewMatrix::planar(1.0), kPi / 2) - quarter).cwiseAbs().maxCoeff(), 1e-15);
  const auto om = SkewMatrix::hat(Eigen::Vector3d(0, 0, 1));
  EXPECT_LT((skew_exponential(om, 1.0) - taylor_exp(om.matrix(), 30)).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Exponential, HigherDimensionsAgainstSeries) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  for (int n : {4, 5, 7}) {
    Matrix a = Matrix::Zero(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = r + 1; c < n; ++c) {
        a(r, c) = 0.5 * nd(rng);
        a(c, r) = -a(r, c);
      }
    const auto om = SkewMatrix::from_matrix(a);
    const Matrix q = skew_exponential(om, 0.8);
    EXPECT_LT((q - taylor_exp(0.8 * a, 40)).cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_LT((q.transpose() * q - Matrix::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(Exponential, GroupProperty) {
  const auto om = SkewMatrix::hat(Eigen::Vector3d(0.2, -0.4, 0.9));
  const Matrix lhs = skew_exponential(om, 0.3) * skew_exponential(om, 1.1);
  EXPECT_LT((lhs - skew_exponential(om, 1.4)).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((skew_exponential(om, 2.0) * skew_exponential(om, -2.0) - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(),
            1e-14);
}

TEST(Renormalize, Examples) {
  EXPECT_EQ(renormalize(vec({2, 0, 0})).coords(), vec({1, 0, 0}));
  EXPECT_EQ(renormalize(vec({1, 0, 0})).coords(), vec({1, 0, 0}));
  EXPECT_TRUE(renormalize(vec({1, 1})).coords().isApprox(vec({1 / std::sqrt(2.0), 1 / std::sqrt(2.0)})));
  try {
    renormalize(vec({0, 0}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroVector);
  }
}

TEST(RandomInCap, Contract) {
  EXPECT_EQ(random_in_cap(3, Angle(0.0), 1u).coords(), UnitVector::attraction_point(3).coords());
  std::mt19937_64 rng(99);
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const auto x = random_in_cap(2, Angle(0.5), rng);
    worst = std::max(worst, angle(x, UnitVector::attraction_point(2)).radians());
  }
  EXPECT_LE(worst, 0.5);
  EXPECT_GT(worst, 0.45);
  for (int k = 0; k < 1000; ++k) {
    const auto x = random_in_cap(1, Angle(kPi), rng);
    EXPECT_LE(angle(x, UnitVector::attraction_point(1)).radians(), kPi);
  }
}

TEST(RandomInCap, SeedDeterminism) {
  EXPECT_EQ(random_in_cap(4, Angle(1.0), 42u).coords(), random_in_cap(4, Angle(1.0), 42u).coords());
  EXPECT_NE(random_in_cap(4, Angle(1.0), 42u).coords(), random_in_cap(4, Angle(1.0), 43u).coords());
}

TEST(Configuration, Basics) {
  Matrix p(3, 2);
  p << 1, -1, 0, 0, 0, 0;
  const Configuration x(p);
  EXPECT_EQ(x.size(), 2);
  EXPECT_EQ(x.dim(), 2);
  EXPECT_NEAR(x.centroid().norm(), 0.0, 1e-15);
  EXPECT_NEAR(pairwise_chords(x).at(0), 2.0, 1e-15);
  EXPECT_NEAR(polar_angles(x)[1], kPi, 1e-15);
  Matrix bad = p;
  bad(0, 0) = 1.1;
  EXPECT_THROW(Configuration{bad}, Error);
  EXPECT_THROW(Configuration().centroid(), Error);
}
