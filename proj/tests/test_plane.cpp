#include "chabauty/invariants.hpp"
#include "chabauty/metric.hpp"
#include "chabauty/plane.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace chabauty;

namespace {

constexpr double kPi = std::numbers::pi;

Vec vec(Complex c) { return Vec{{c.real(), c.imag()}}; }

using oracle::angle_gap;
using oracle::Candidate;
using oracle::random_domain_point;
using oracle::scrambled;

}  // namespace

TEST(NormalizeCovolume, Examples) {
  const ClosedSubgroup z2 = aligned_subgroup(2, {0, 2});
  EXPECT_EQ(chabauty_distance(normalize_covolume(z2), z2), 0);
  const ClosedSubgroup hex = plane_lattice(1, std::polar(1.0, kPi / 3));
  const ClosedSubgroup nh = normalize_covolume(hex);
  EXPECT_NEAR(*covolume(nh), 1, 1e-12);
  EXPECT_NEAR(systole(nh), std::pow(std::sqrt(3.0) / 2, -0.5), 1e-12);
  const ClosedSubgroup line = make_subgroup(2, Mat(2, 0), Mat(vec(std::polar(1.0, 0.4))));
  const ClosedSubgroup nl = normalize_covolume(line);
  EXPECT_EQ(type_of(nl), (GroupType{1, 0}));
  EXPECT_NEAR(std::abs(nl.continuous_basis().col(0).dot(vec(std::polar(1.0, 0.4)))), 1, 1e-12);
  EXPECT_THROW(normalize_covolume(scale(z2, 2)), Error);
}

TEST(NormalizeCovolume, UnitCovolumeOnRandomLattices) {
  auto gen = oracle::rng(1);
  std::uniform_real_distribution<double> ang(0, 2 * kPi);
  for (int k = 0; k < 200; ++k) {
    const ClosedSubgroup g = scrambled(ang(gen), random_domain_point(gen), gen);
    EXPECT_NEAR(*covolume(normalize_covolume(g)), 1, 1e-9);
  }
}

TEST(Suspension, Examples) {
  const ClosedSubgroup z2 = aligned_subgroup(2, {0, 2});
  EXPECT_EQ(chabauty_distance(suspension_map(z2, 0), z2), 0);
  EXPECT_EQ(type_of(suspension_map(z2, kInf)), (GroupType{0, 0}));
  const Vec dir = vec(std::polar(1.0, 0.7));
  const ClosedSubgroup line = make_subgroup(2, std::vector<Vec>{dir}, std::vector<Vec>{});
  const ClosedSubgroup s = suspension_map(line, 3);
  EXPECT_EQ(type_of(s), (GroupType{0, 1}));
  EXPECT_NEAR(std::abs(s.discrete_basis().col(0).dot(dir)), 3, 1e-12);
  EXPECT_EQ(type_of(suspension_map(line, 0)), (GroupType{1, 0}));
  try {
    suspension_map(scale(z2, 2), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotInC1);
  }
}

TEST(Suspension, IdentityAtZeroAndShrinkingToZero) {
  auto gen = oracle::rng(2);
  std::uniform_real_distribution<double> ang(0, 2 * kPi);
  for (int k = 0; k < 30; ++k) {
    const ClosedSubgroup g = normalize_covolume(scrambled(ang(gen), random_domain_point(gen), gen));
    EXPECT_LT(chabauty_distance(suspension_map(g, 0), g), 1e-6);
    EXPECT_GE(*covolume(suspension_map(g, 1.5)), 1);
    double prev = kInf;
    for (double t = 1; t <= 128; t *= 2) {
      const double d = chabauty_distance(suspension_map(g, t), aligned_subgroup(2, {0, 0}));
      EXPECT_LE(d, prev + 1e-12);
      prev = d;
    }
  }
}

TEST(ReduceLattice, Examples) {
  const ReducedForm sq = reduce_lattice(aligned_subgroup(2, {0, 2}));
  EXPECT_NEAR(std::abs(sq.z - Complex(0, 1)), 0, 1e-12);
  const ReducedForm hex = reduce_lattice(plane_lattice(1, std::polar(1.0, 2 * kPi / 3)));
  EXPECT_NEAR(std::abs(hex.z - std::polar(1.0, kPi / 3)), 0, 1e-12);
  const ReducedForm gen = reduce_lattice(plane_lattice(1, Complex(0.3, 2)));
  EXPECT_NEAR(std::abs(gen.z - Complex(0.3, 2)), 0, 1e-12);
  EXPECT_NEAR(gen.theta, 0, 1e-12);
  try {
    reduce_lattice(aligned_subgroup(2, {0, 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotLattice);
  }
  try {
    reduce_lattice(scale(aligned_subgroup(2, {0, 2}), 1.5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotUnitSystole);
  }
}

TEST(ReduceLattice, MatchesShortestVectorOracle) {
  auto gen = oracle::rng(3);
  std::uniform_real_distribution<double> ang(0, 2 * kPi);
  for (int k = 0; k < 500; ++k) {
    const ClosedSubgroup g = scrambled(ang(gen), random_domain_point(gen), gen);
    const ReducedForm f = reduce_lattice(g);
    EXPECT_GE(std::abs(f.z), 1 - 1e-9);
    EXPECT_LE(std::abs(f.z.real()), 0.5 + 1e-9);
    EXPECT_GE(f.theta, 0);
    EXPECT_LT(f.theta, kPi);
    bool matched = false;
    for (const Candidate& c : oracle::plane_forms(g))
      if (angle_gap(c.theta, f.theta) < 1e-9 && std::abs(c.z - f.z) < 1e-9) matched = true;
    EXPECT_TRUE(matched) << k;
    EXPECT_LT(chabauty_distance(from_reduced(f), g), 1e-6);
  }
}

TEST(BasePoint, GluingInvariant) {
  EXPECT_TRUE(base_point(make_subgroup(2, Mat(2, 0), Mat(Vec{{0.0, 1.0}}))).infinite);
  for (double y : {0.9, 1.3, 2.0}) {
    const Complex right{0.5, y}, left{-0.5, y};
    if (std::abs(right) < 1) continue;
    EXPECT_LT(std::abs(base_point(from_reduced({0.2, right, false})).z - base_point(from_reduced({0.2, left, false})).z), 1e-9);
  }
  for (double a : {0.1, 0.3, 0.5}) {
    const Complex z = std::polar(1.0, kPi / 2 - a);
    const Complex twin = -std::conj(z);
    EXPECT_LT(std::abs(base_point(from_reduced({0.4, z, false})).z - base_point(from_reduced({1.1, twin, false})).z), 1e-9);
  }
}

TEST(Stabilizer, SpecialAndGenericLattices) {
  auto gen = oracle::rng(6);
  std::uniform_real_distribution<double> ang(0, 2 * kPi);
  for (int k = 0; k < 20; ++k) {
    const double t = ang(gen);
    EXPECT_EQ(stabilizer_order(scrambled(t, Complex(0, 1), gen)), 2);
    EXPECT_EQ(stabilizer_order(scrambled(t, std::polar(1.0, kPi / 3), gen)), 3);
  }
  EXPECT_EQ(stabilizer_order(plane_lattice(1, Complex(0.3, 2))), 1);
  for (int k = 0; k < 500; ++k) EXPECT_EQ(stabilizer_order(scrambled(ang(gen), random_domain_point(gen), gen)), 1);
}

TEST(CrossSection, Examples) {
  EXPECT_EQ(chabauty_distance(cross_section(Complex(0, 2)), plane_lattice(1, Complex(0, 2))), 0);
  const Complex u = std::polar(1.0, kPi / 2 + 0.2);
  const Complex r = std::polar(1.0, kPi / 2 - 0.2);
  EXPECT_LT(chabauty_distance(cross_section(u), plane_lattice(r, r * u)), 1e-9);
  EXPECT_NEAR(cross_section_angle(u), kPi / 2 - 0.2, 1e-15);
  for (Complex s : {Complex(0, 1), std::polar(1.0, kPi / 3), std::polar(1.0, 2 * kPi / 3)}) {
    try {
      cross_section(s);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::SingularBasePoint);
    }
  }
}

TEST(CrossSection, GluedArcPairsAgree) {
  for (int k = 1; k <= 50; ++k) {
    const double s = (kPi / 6) * k / 51.0;
    const ClosedSubgroup a = cross_section(std::polar(1.0, kPi / 2 + s));
    const ClosedSubgroup b = cross_section(std::polar(1.0, kPi / 2 - s));
    EXPECT_LT(chabauty_distance(a, b), 1e-6) << s;
  }
}

TEST(CrossSection, ContinuousOffTheArc) {
  for (int k = 1; k <= 10; ++k) {
    const double s = (kPi / 6) * k / 11.0;
    const Complex u = std::polar(1.0, kPi / 2 + s);
    EXPECT_LT(chabauty_distance(cross_section(u * (1 + 1e-8)), cross_section(u)), 1e-5);
    // Outside the collar the angle vanishes.
    EXPECT_EQ(cross_section_angle(u * 1.2), 0);
  }
}
