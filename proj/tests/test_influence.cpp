#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "winfree/error.hpp"
#include "winfree/influence.hpp"

using namespace winfree;

namespace {

// Central difference quotient sup, sampled away from the kinks.
double fd_lipschitz(const InfluenceProfile& p, double lo, double hi, int samples) {
  double sup = 0.0;
  const double h = 1e-7;
  for (int k = 0; k <= samples; ++k) {
    const double x = lo + (hi - lo) * k / samples;
    const double a = std::max(0.0, x - h), b = std::min(kPi, x + h);
    sup = std::max(sup, std::abs(p(b) - p(a)) / (b - a));
  }
  return sup;
}

Configuration at_angles(std::initializer_list<double> phis) {
  Matrix m(3, static_cast<Eigen::Index>(phis.size()));
  Eigen::Index k = 0;
  for (double phi : phis) m.col(k++) << std::cos(phi), std::sin(phi), 0.0;
  return Configuration(m);
}

}  // namespace

TEST(Profiles, BuiltinValues) {
  const auto i1 = InfluenceProfile::builtin_i1();
  const auto i2 = InfluenceProfile::builtin_i2();
  EXPECT_EQ(evaluate(i1, 0.0), 1.0);
  EXPECT_EQ(evaluate(i1, 2.0), 0.0);
  EXPECT_DOUBLE_EQ(evaluate(i2, 0.25), 0.25);
  EXPECT_EQ(evaluate(i2, 0.0), 1.0);
  EXPECT_EQ(evaluate(i2, 0.5), 0.0);
  EXPECT_EQ(i1.beta(), 1.0);
  EXPECT_EQ(i2.beta(), 0.5);
}

TEST(Profiles, DomainChecked) {
  const auto i1 = InfluenceProfile::builtin_i1();
  for (double bad : {-1e-9, kPi + 1e-9, std::nan("")}) {
    try {
      evaluate(i1, bad);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::DomainError);
    }
  }
}

TEST(Profiles, PointEvaluation) {
  const auto i1 = InfluenceProfile::builtin_i1();
  EXPECT_EQ(evaluate_point(i1, UnitVector::attraction_point(2)), 1.0);
  EXPECT_EQ(evaluate_point(i1, UnitVector(Eigen::Vector3d(0, 1, 0))), 0.0);
  EXPECT_NEAR(evaluate_point(i1, UnitVector(Eigen::Vector2d(std::cos(0.5), std::sin(0.5)))), 0.5, 1e-15);
}

TEST(Profiles, MeanInfluence) {
  const auto i1 = InfluenceProfile::builtin_i1();
  EXPECT_EQ(mean_influence(i1, at_angles({0, 0, 0})), 1.0);
  EXPECT_EQ(mean_influence(i1, at_angles({1.01, 1.5, 3.0})), 0.0);
  EXPECT_NEAR(mean_influence(i1, at_angles({0.2, 0.6})), (0.8 + 0.4) / 2, 1e-15);
  EXPECT_THROW(mean_influence(i1, Configuration()), Error);
}

TEST(Profiles, LipschitzConstants) {
  const auto i1 = InfluenceProfile::builtin_i1();
  const auto i2 = InfluenceProfile::builtin_i2();
  const double fd1 = fd_lipschitz(i1, 0.0, 0.99, 2000);
  const double fd2 = fd_lipschitz(i2, 0.0, 0.49, 2000);
  EXPECT_NEAR(fd1, 1.0, 1e-6);
  // d/dφ (2φ − 1)² = 8φ − 4, so the sup on [0, 0.5] is 4 at φ = 0.
  EXPECT_NEAR(fd2, 4.0, 1e-5);
  EXPECT_NEAR(lipschitz_estimate(i1), fd1, 1e-4);
  EXPECT_NEAR(lipschitz_estimate(i2), fd2, 1e-3);
  EXPECT_EQ(i1.lipschitz(), 1.0);
  EXPECT_EQ(i2.lipschitz(), 4.0);
  const auto zero = InfluenceProfile::custom("zero", 0.5, [](double) { return 0.0; });
  EXPECT_EQ(zero.lipschitz(), 0.0);
}

TEST(Profiles, Validation) {
  EXPECT_TRUE(validate(InfluenceProfile::builtin_i1()).all_pass());
  EXPECT_TRUE(validate(InfluenceProfile::builtin_i2()).all_pass());
  const auto cosine = InfluenceProfile::custom("cos", kPi / 2, [](double x) { return std::max(0.0, std::cos(x)); });
  const auto rep = validate(cosine);
  EXPECT_FALSE(rep.condition("C2").pass);
  EXPECT_TRUE(rep.condition("C1").pass);
  EXPECT_TRUE(rep.condition("C3").pass);
  const auto bump = InfluenceProfile::custom("bump", 0.8, [](double x) { return x < 0.4 ? 0.5 + x : 0.0; });
  const auto r2 = validate(bump);
  EXPECT_FALSE(r2.condition("C1").pass);
  EXPECT_FALSE(r2.condition("C1").witnesses.empty());
  EXPECT_FALSE(r2.condition("C3").pass);
}

TEST(Profiles, Table) {
  const auto t = InfluenceProfile::table("shallow", 1.5, {{0.0, 1.0}, {1.5, 0.0}});
  EXPECT_NEAR(t(0.75), 0.5, 1e-15);
  EXPECT_EQ(t(2.0), 0.0);
  EXPECT_NEAR(t.lipschitz(), 1.0 / 1.5, 1e-15);
  EXPECT_THROW(InfluenceProfile::table("x", 1.0, {}), Error);
  EXPECT_THROW(InfluenceProfile::table("x", 1.0, {{0.1, 1.0}}), Error);
  EXPECT_THROW(InfluenceProfile::table("x", 1.0, {{0.0, 1.0}, {0.0, 0.5}}), Error);
}

TEST(Profiles, RandomTablesAreBoundedByTheirLipschitzConstant) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    InfluenceProfile::Table nodes{{0.0, 1.0}};
    double a = 0.0, v = 1.0;
    for (int k = 0; k < 5; ++k) {
      a += 0.05 + 0.2 * u(rng);
      v *= u(rng);
      nodes.emplace_back(a, v);
    }
    nodes.emplace_back(a + 0.1, 0.0);
    const auto p = InfluenceProfile::table("rand", a + 0.1, nodes);
    for (int k = 0; k < 500; ++k) {
      const double x = kPi * u(rng), y = kPi * u(rng);
      EXPECT_LE(std::abs(p(x) - p(y)), p.lipschitz() * std::abs(x - y) + 1e-12);
    }
    EXPECT_TRUE(validate(p).condition("C1").pass);
  }
}
