#include "chabauty/invariants.hpp"
#include "chabauty/metric.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace chabauty;

namespace {

ClosedSubgroup lattice_1d(double a) { return make_subgroup(1, Mat(1, 0), Mat::Constant(1, 1, a)); }

double brute_distance(const Vec& x, const ClosedSubgroup& b) {
  Vec y = x;
  for (Eigen::Index j = 0; j < b.continuous_basis().cols(); ++j)
    y -= y.dot(b.continuous_basis().col(j)) * b.continuous_basis().col(j);
  if (b.discrete_basis().cols() == 0) return y.norm();
  const Vec c = oracle::box_closest(b.discrete_basis(), y, y.norm() + b.discrete_basis().colwise().norm().sum());
  return (c - y).norm();
}

// Sampled sup over A n B(R) of dist(., B); A has at most one continuous direction.
double brute_directed(const ClosedSubgroup& a, const ClosedSubgroup& b, double r, double step) {
  double best = 0;
  for (const Vec& d : oracle::box_points(a.discrete_basis(), r)) {
    if (a.continuous_basis().cols() == 0) {
      best = std::max(best, brute_distance(d, b));
      continue;
    }
    const Vec v = a.continuous_basis().col(0);
    const double h = std::sqrt(std::max(0.0, r * r - d.squaredNorm()));
    for (double s = -h; s <= h + 1e-12; s += step) best = std::max(best, brute_distance(d + std::min(s, h) * v, b));
    best = std::max(best, brute_distance(d + h * v, b));
  }
  return best;
}

ClosedSubgroup random_any(int n, std::uint64_t seed) {
  const int p = static_cast<int>(seed % (n + 1));
  const int q = static_cast<int>((seed / 7) % (n - p + 1));
  return random_subgroup(n, {p, q}, seed);
}

}  // namespace

TEST(Gap, Examples) {
  const ClosedSubgroup z2 = aligned_subgroup(2, {0, 2});
  EXPECT_EQ(hausdorff_gap(z2, z2, 5), 0);
  Mat s(2, 2);
  s << 1.1, 0, 0, 1;
  EXPECT_NEAR(hausdorff_gap(z2, apply_linear(s, z2), 1), 0.1, 0.05);
  EXPECT_NEAR(hausdorff_gap(lattice_1d(10), aligned_subgroup(1, {0, 0}), 1), 0, 1e-15);
}

TEST(Gap, AgreesWithSampledOracleInPlane) {
  const MetricParams params;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const ClosedSubgroup a = random_any(2, seed), b = random_any(2, seed + 1000);
    if (a.continuous_basis().cols() > 1 || b.continuous_basis().cols() > 1) continue;
    for (double r : {1.0, 2.5}) {
      const double got = hausdorff_gap(a, b, r, params);
      const double want = std::max(brute_directed(a, b, r, 1e-3), brute_directed(b, a, r, 1e-3));
      // The gap is a lower bound within precision * R; the sampled oracle is
      // a lower bound that misses at most half a step.
      const double tol = params.precision * std::max(1.0, r);
      EXPECT_GE(got, want - tol) << seed << " " << r;
      EXPECT_LE(got, want + 1e-3) << seed << " " << r;
    }
  }
}

TEST(Gap, MonotoneInRadius) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const ClosedSubgroup a = random_any(3, seed), b = random_any(3, seed + 500);
    double prev = 0;
    for (double r : {0.5, 1.0, 2.0, 4.0}) {
      const double g = hausdorff_gap(a, b, r);
      EXPECT_GE(g, prev - 1e-9);
      prev = g;
    }
  }
}

TEST(Distance, Examples) {
  const ClosedSubgroup z2 = aligned_subgroup(2, {0, 2});
  EXPECT_EQ(chabauty_distance(z2, z2), 0);
  EXPECT_GE(chabauty_distance(z2, aligned_subgroup(2, {2, 0})), 0.4);
  const ClosedSubgroup zero = aligned_subgroup(1, {0, 0});
  double prev = kInf;
  for (double alpha : {2.0, 4.0, 8.0, 16.0}) {
    const double d = chabauty_distance(lattice_1d(alpha), zero);
    EXPECT_LE(d, prev);
    prev = d;
  }
  EXPECT_LT(chabauty_distance(lattice_1d(128), zero), 0.02);
}

TEST(Distance, SymmetricAndSeparating) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int n = 1 + static_cast<int>(seed % 3);
    const ClosedSubgroup a = random_any(n, seed), b = random_any(n, seed + 99);
    EXPECT_EQ(chabauty_distance(a, b), chabauty_distance(b, a));
    EXPECT_LT(chabauty_distance(a, a), 1e-15);
    const bool differ = a.type() != b.type() || (a.discrete_basis() - b.discrete_basis()).norm() > 0.1 ||
                        (a.continuous_basis() - b.continuous_basis()).norm() > 0.1;
    if (differ) EXPECT_GT(chabauty_distance(a, b), 0);
  }
}

TEST(Distance, TriangleInequality) {
  const MetricParams params;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const int n = 1 + static_cast<int>(seed % 3);
    const ClosedSubgroup a = random_any(n, seed), b = random_any(n, seed + 11), c = random_any(n, seed + 23);
    EXPECT_LE(chabauty_distance(a, c), chabauty_distance(a, b) + chabauty_distance(b, c) + 2 * params.grid);
  }
}

TEST(Distance, ScalingTowardsTrivialAndFull) {
  for (int n = 1; n <= 3; ++n) {
    const ClosedSubgroup z = aligned_subgroup(n, {0, n});
    double up = kInf, down = kInf;
    for (double k = 2; k <= 256; k *= 2) {
      const double a = chabauty_distance(scale(z, k), aligned_subgroup(n, {0, 0}));
      const double b = chabauty_distance(scale(z, 1 / k), aligned_subgroup(n, {n, 0}));
      EXPECT_LE(a, up + 1e-12);
      EXPECT_LE(b, down + 1e-12);
      up = a;
      down = b;
    }
    EXPECT_LT(up, 0.02);
    EXPECT_LT(down, 0.02);
  }
}

TEST(NeighborhoodTest, Examples) {
  const ClosedSubgroup z = lattice_1d(1);
  EXPECT_TRUE(neighborhood_test(z, z, 10, 1e-9));
  EXPECT_TRUE(neighborhood_test(lattice_1d(100), aligned_subgroup(1, {0, 0}), 1, 0.01));
  EXPECT_FALSE(neighborhood_test(lattice_1d(1.05), z, 10, 0.1));
}

TEST(CoveringRadius, KnownValues) {
  EXPECT_NEAR(covering_radius(aligned_subgroup(3, {0, 3})), std::sqrt(3.0) / 2, 1e-8);
  Mat h(2, 2);
  h << 1, 0.5, 0, std::sqrt(3.0) / 2;
  EXPECT_NEAR(covering_radius(make_subgroup(2, Mat(2, 0), h)), 1 / std::sqrt(3.0), 1e-8);
}

TEST(ClassifyLimit, Examples) {
  std::vector<double> t;
  for (double x = 10; x <= 1e5; x *= 10) t.push_back(x);
  const Family shrink = [](double s) {
    Mat m(2, 2);
    m << 1, 0, 0, 1 / s;
    return make_subgroup(2, Mat(2, 0), m);
  };
  const Family grow = [](double s) {
    Mat m(2, 2);
    m << 1, 0, 0, s;
    return make_subgroup(2, Mat(2, 0), m);
  };
  EXPECT_EQ(classify_limit(shrink, t, 0.01).type, (GroupType{1, 1}));
  const LimitReport r = classify_limit(grow, t, 0.01);
  EXPECT_EQ(r.type, (GroupType{0, 1}));
  EXPECT_EQ(r.grown, std::vector<int>{2});
  EXPECT_EQ(classify_limit([](double) { return aligned_subgroup(3, {0, 3}); }, t, 0.01).type, (GroupType{0, 3}));
}

TEST(ClassifyLimit, UnstableFamily) {
  const Family flip = [](double s) { return lattice_1d(s < 50 ? 1.0 : 1000.0); };
  try {
    classify_limit(flip, {10, 100, 20, 200}, 0.01);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Unstable);
  }
}

TEST(Params, Validation) {
  MetricParams p;
  p.weights.pop_back();
  EXPECT_THROW(p.validate(), Error);
}
