#include "chabauty/invariants.hpp"
#include "chabauty/local_structure.hpp"
#include "chabauty/metric.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace chabauty;

namespace {

ClosedSubgroup m50() {
  Mat d(3, 3);
  d << 1, 0, 0.2, 0, 1, 0.3, 0, 0, 50;
  return make_subgroup(3, Mat(3, 0), d);
}

ClosedSubgroup diag(const std::vector<double>& entries, int p = 0) {
  const int n = static_cast<int>(entries.size()) + p;
  Mat d = Mat::Zero(n, n - p);
  for (int i = 0; i < n - p; ++i) d(p + i, i) = entries[static_cast<std::size_t>(i)];
  return make_subgroup(n, Mat(Mat::Identity(n, n).leftCols(p)), d);
}

Mat rotation2(double a) {
  Mat r(2, 2);
  r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return r;
}

}  // namespace

TEST(LinearDecomposition, Examples) {
  const auto a = linear_decomposition(aligned_subgroup(3, {1, 1}), 0.1);
  EXPECT_EQ(a.type(), (GroupType{1, 1}));
  EXPECT_LT(flag_distance(a, base_flag(3, {1, 1})), 1e-12);
  const auto b = linear_decomposition(diag({0.01, 5}), 0.1);
  EXPECT_NEAR(std::abs(b.v1(0, 0)), 1, 1e-12);
  EXPECT_NEAR(std::abs(b.v2(1, 0)), 1, 1e-12);
  EXPECT_EQ(b.v3.cols(), 0);
  EXPECT_EQ(linear_decomposition(aligned_subgroup(3, {0, 3}), 0.5).type(), (GroupType{0, 3}));
  Mat m(2, 1);
  m << 0.1, 0;
  EXPECT_THROW(linear_decomposition(make_subgroup(2, Mat(2, 0), m), 0.1), Error);
}

TEST(Trivialisation, IdentityAndRotation) {
  const auto base = base_flag(2, {1, 1});
  EXPECT_LT((trivialisation(base, base) - Mat::Identity(2, 2)).norm(), 1e-15);
  LinearDecomposition rotated = base;
  rotated.v1 = rotation2(0.1) * base.v1;
  rotated.v2 = rotation2(0.1) * base.v2;
  EXPECT_LT((trivialisation(rotated, base) - rotation2(-0.1)).norm(), 1e-12);
  LinearDecomposition far = base;
  far.v1 = rotation2(1.0) * base.v1;
  far.v2 = rotation2(1.0) * base.v2;
  try {
    trivialisation(far, base);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FlagsTooFar);
  }
}

TEST(Trivialisation, ContinuousAndCoherent) {
  auto gen = oracle::rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + trial % 3;
    const GroupType t{trial % 2, 1};
    const auto base = base_flag(n, t);
    Mat s = oracle::random_matrix(gen, n, n);
    s = s - Mat(s.transpose());
    for (double eps : {1e-6, 1e-2}) {
      const Mat a = eps * s / s.norm();
      // Cayley transform: exactly orthogonal, within O(eps) of the identity.
      const Mat rot = (Mat::Identity(n, n) - a / 2).inverse() * (Mat::Identity(n, n) + a / 2);
      LinearDecomposition flag{rot * base.v1, rot * base.v2, rot * base.v3};
      const Mat tau = trivialisation(flag, base);
      EXPECT_LT((tau.transpose() * tau - Mat::Identity(n, n)).norm(), 1e-10);
      EXPECT_LT((tau * flag.v1 * flag.v1.transpose() * tau.transpose() - base.v1 * base.v1.transpose()).norm(), 1e-9);
      EXPECT_LT((tau * flag.v2 * flag.v2.transpose() * tau.transpose() - base.v2 * base.v2.transpose()).norm(), 1e-9);
      if (eps == 1e-6) EXPECT_LE((tau - Mat::Identity(n, n)).norm(), 1e-5);
    }
  }
}

TEST(LocalDecomposition, BasePoint) {
  for (int p = 0; p <= 2; ++p) {
    const GroupType t{p, 3 - p - (p == 2)};
    const ClosedSubgroup g = aligned_subgroup(4, t);
    const Decomposition d = local_decomposition(g, t, 0.1);
    EXPECT_EQ(type_of(d.local.gamma1), (GroupType{p, 0}));
    EXPECT_LT((d.local.gamma2 - Mat::Identity(t.q, t.q)).norm(), 1e-12);
    EXPECT_EQ(d.local.gamma3.cols(), 0);
    if (p > 0 && t.q > 0) EXPECT_LT(d.local.phi2.norm(), 1e-12);
    EXPECT_EQ(chabauty_distance(reconstruct(d.linear, d.local), g), 0);
  }
}

TEST(LocalDecomposition, ShearedThirdGenerator) {
  const ClosedSubgroup g = m50();
  EXPECT_TRUE(in_U_delta(g, {0, 2}, 0.1).inside);
  const Decomposition d = local_decomposition(g, {0, 2}, 0.1);
  ASSERT_EQ(d.local.gamma3.cols(), 1);
  EXPECT_NEAR(std::abs(d.local.gamma3(0, 0)), 50, 1e-12);
  const double sign = d.local.gamma3(0, 0) > 0 ? 1 : -1;
  EXPECT_NEAR(sign * d.local.phi3_v2(0, 0), 0.2, 1e-12);
  EXPECT_NEAR(sign * d.local.phi3_v2(1, 0), 0.3, 1e-12);
  EXPECT_LT(chabauty_distance(reconstruct(d.linear, d.local), g), 1e-6);
}

TEST(LocalDecomposition, RejectsFarFlag) {
  Mat r = Mat::Identity(3, 3);
  r.topLeftCorner(2, 2) = rotation2(0.7);
  r.block(1, 1, 2, 2) = rotation2(0.7) * r.block(1, 1, 2, 2);
  const ClosedSubgroup g = apply_linear(r, aligned_subgroup(3, {1, 1}));
  const Membership m = in_U_delta(g, {1, 1}, 0.1);
  EXPECT_FALSE(m.inside);
  EXPECT_EQ(m.failed, "flag_close");
  try {
    local_decomposition(g, {1, 1}, 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotInNeighborhood);
    EXPECT_EQ(std::string(e.what()).rfind("flag_close", 0), 0u);
  }
  EXPECT_EQ(in_U_delta(aligned_subgroup(3, {0, 3}), {1, 1}, 0.1).failed, "delta_type");
}

TEST(Reconstruct, CollapsedFormulaAndErrors) {
  const auto lin = base_flag(3, {1, 1});
  LocalDecomposition loc;
  loc.n = 3;
  loc.base = {1, 1};
  loc.delta = 0.1;
  loc.gamma1 = make_subgroup(1, Mat(1, 0), Mat::Constant(1, 1, 0.02));
  loc.gamma2 = Mat::Identity(1, 1);
  loc.gamma3 = Mat(1, 0);
  loc.phi2 = Mat::Zero(1, 1);
  loc.phi3_v1 = Mat(1, 0);
  loc.phi3_v2 = Mat(1, 0);
  Mat d(3, 2);
  d << 0.02, 0, 0, 1, 0, 0;
  EXPECT_LT(chabauty_distance(reconstruct(lin, loc), make_subgroup(3, Mat(3, 0), d)), 1e-12);
  loc.phi2 = Mat::Zero(2, 1);
  try {
    reconstruct(lin, loc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InconsistentData);
  }
}

TEST(LocalDecomposition, RoundTripOnRandomNeighbours) {
  int done = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int n = 2 + static_cast<int>(seed % 3);
    const int p = static_cast<int>(seed % (n + 1));
    const int q = static_cast<int>((seed / 3) % (n - p + 1));
    const double delta = seed % 2 ? 0.05 : 0.1;
    const ClosedSubgroup g = oracle::random_neighbour(n, {p, q}, delta, seed);
    const Membership m = in_U_delta(g, {p, q}, delta);
    ASSERT_TRUE(m.inside) << seed << " " << m.failed;
    const Decomposition d = local_decomposition(g, {p, q}, delta);
    EXPECT_LT((d.tau.transpose() * d.tau - Mat::Identity(n, n)).norm(), 1e-10);
    EXPECT_LT(chabauty_distance(reconstruct(d.linear, d.local), g), 1e-6) << seed;
    ++done;
  }
  EXPECT_EQ(done, 60);
}

TEST(Link, Membership) {
  const double delta = 0.1;
  EXPECT_FALSE(on_link(aligned_subgroup(3, {1, 1}), {1, 1}, delta));
  EXPECT_TRUE(on_link(diag({delta / 4, 1, 4 / delta}), {1, 1}, delta));
  EXPECT_FALSE(on_link(diag({delta / 4, 1.05, 4 / delta}), {1, 1}, delta));
}

TEST(Cone, ScalingAndInvariance) {
  const double delta = 0.1;
  Mat d(3, 3);
  d << delta / 4, 0.3 * delta / 4, 0.01, 0, 1, 0.4, 0, 0, 4 / delta;
  const ClosedSubgroup g = make_subgroup(3, Mat(3, 0), d);
  const Decomposition dec = local_decomposition(g, {1, 1}, delta);
  const LocalDecomposition same = cone_map(1, dec.local);
  EXPECT_LT(chabauty_distance(reconstruct(dec.linear, same), g), 1e-9);
  const LocalDecomposition half = cone_map(0.5, dec.local);
  EXPECT_NEAR(norms(half.gamma1)[0], norms(dec.local.gamma1)[0] / 2, 1e-12);
  EXPECT_NEAR(std::abs(half.gamma3(0, 0)), 2 * std::abs(dec.local.gamma3(0, 0)), 1e-9);
  EXPECT_LT((half.phi3_v2 - dec.local.phi3_v2).norm(), 1e-15);
  EXPECT_TRUE(in_U_delta(reconstruct(dec.linear, half), {1, 1}, delta).inside);
  EXPECT_EQ(type_of(reconstruct(dec.linear, cone_map(0, dec.local))), (GroupType{1, 1}));
  EXPECT_THROW(cone_map(2, dec.local), Error);
}

TEST(Bundle, Projection) {
  const double delta = 0.1;
  const Decomposition mid = local_decomposition(diag({delta / 4, 1, 4 / delta}), {1, 1}, delta);
  const BundlePoint bp = bundle_projection(mid.local);
  EXPECT_NEAR(bp.lambda, 0.5, 1e-12);
  EXPECT_NEAR(norms(bp.gamma1)[0], 1, 1e-12);
  EXPECT_NEAR(systole(bp.gamma3), 1, 1e-12);

  const Decomposition pure3 = local_decomposition(diag({1, 4 / delta}, 1), {1, 1}, delta);
  // Gamma1 = R: lambda = 0.
  EXPECT_EQ(bundle_projection(pure3.local).lambda, 0);

  const Decomposition pure1 = local_decomposition(diag({delta / 2, 1}), {1, 1}, delta / 0.99);
  EXPECT_NEAR(bundle_projection(pure1.local).lambda, 0.99, 1e-12);

  const Decomposition zero = local_decomposition(aligned_subgroup(2, {0, 0}), {0, 0}, delta);
  try {
    bundle_projection(zero.local);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidStratum);
  }
}

TEST(ReduceMod, ShortestRepresentative) {
  const ClosedSubgroup z2 = aligned_subgroup(2, {0, 2});
  const Vec r = reduce_mod(Vec{{2.3, -1.6}}, z2);
  EXPECT_NEAR(r(0), 0.3, 1e-12);
  EXPECT_NEAR(r(1), 0.4, 1e-12);
  const Vec tie = reduce_mod(Vec{{0.5, 0.0}}, z2);
  EXPECT_NEAR(tie(0), -0.5, 1e-12);
}

TEST(AligningMap, SendsBaseToAligned) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int n = 2 + static_cast<int>(seed % 3);
    const int p = static_cast<int>(seed % (n + 1));
    const int q = static_cast<int>((seed / 3) % (n - p + 1));
    const ClosedSubgroup g = random_subgroup(n, {p, q}, seed);
    EXPECT_LT(chabauty_distance(apply_linear(aligning_map(g), g), aligned_subgroup(n, {p, q})), 1e-8);
  }
}
