#include "chabauty/lll.hpp"

#include "chabauty/error.hpp"

#include <cmath>
#include <numeric>
#include <utility>

namespace chabauty {

namespace {

struct GramSchmidt {
  Mat mu;
  Vec sq;  // squared norms of the orthogonalized vectors
};

GramSchmidt gram_schmidt(const Mat& b) {
  const auto k = b.cols();
  GramSchmidt gs{Mat::Zero(k, k), Vec::Zero(k)};
  Mat star = b;
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      gs.mu(i, j) = b.col(i).dot(star.col(j)) / gs.sq(j);
      star.col(i) -= gs.mu(i, j) * star.col(j);
    }
    gs.sq(i) = star.col(i).squaredNorm();
    gs.mu(i, i) = 1;
  }
  return gs;
}

}  // namespace

Reduced lll_reduce(const Mat& basis, double lovasz) {
  const auto k = basis.cols();
  Reduced out{basis, IntMat::Identity(k, k)};
  if (k <= 1) return out;
  Mat& b = out.basis;
  IntMat& u = out.transform;
  GramSchmidt gs = gram_schmidt(b);
  Eigen::Index i = 1;
  int guard = 0;
  while (i < k) {
    if (++guard > 100000) break;
    for (Eigen::Index j = i - 1; j >= 0; --j) {
      const double m = gs.mu(i, j);
      if (std::abs(m) > 0.5 + 1e-9) {
        const double r = std::floor(m + 0.5);
        const auto ri = static_cast<std::int64_t>(r);
        b.col(i) -= r * b.col(j);
        u.col(i) -= ri * u.col(j);
        for (Eigen::Index l = 0; l <= j; ++l) gs.mu(i, l) -= r * gs.mu(j, l);
      }
    }
    const double lhs = gs.sq(i);
    const double rhs = (lovasz - gs.mu(i, i - 1) * gs.mu(i, i - 1)) * gs.sq(i - 1);
    if (lhs >= rhs * (1 - 1e-12)) {
      ++i;
    } else {
      b.col(i).swap(b.col(i - 1));
      u.col(i).swap(u.col(i - 1));
      gs = gram_schmidt(b);
      i = std::max<Eigen::Index>(i - 1, 1);
    }
  }
  return out;
}

IntMat complete_to_unimodular(const IntVec& u) {
  const auto k = static_cast<Eigen::Index>(u.size());
  IntMat inv = IntMat::Identity(k, k);
  if (k == 0) return inv;
  std::vector<std::int64_t> w(u.begin(), u.end());
  for (Eigen::Index i = k - 1; i >= 1; --i) {
    const std::int64_t a = w[static_cast<std::size_t>(i - 1)];
    const std::int64_t b = w[static_cast<std::size_t>(i)];
    if (b == 0) continue;
    // Extended Euclid: s a + t b = g.
    std::int64_t r0 = a, r1 = b, s0 = 1, s1 = 0, t0 = 0, t1 = 1;
    while (r1 != 0) {
      const std::int64_t qt = r0 / r1;
      std::tie(r0, r1) = std::make_pair(r1, r0 - qt * r1);
      std::tie(s0, s1) = std::make_pair(s1, s0 - qt * s1);
      std::tie(t0, t1) = std::make_pair(t1, t0 - qt * t1);
    }
    const std::int64_t g = r0, s = s0, t = t0;
    w[static_cast<std::size_t>(i - 1)] = g;
    w[static_cast<std::size_t>(i)] = 0;
    // inv <- inv * E^{-1}, E^{-1} = [[a/g, -t], [b/g, s]] on columns (i-1, i).
    const IntMat ci = inv.col(i - 1), cj = inv.col(i);
    inv.col(i - 1) = ci * (a / g) + cj * (b / g);
    inv.col(i) = ci * (-t) + cj * s;
  }
  if (w[0] != 1 && w[0] != -1)
    throw Error(ErrorCode::InvalidArgument, "complete_to_unimodular: vector is not primitive");
  if (w[0] == -1) inv.col(0) = -inv.col(0);
  return inv;
}

std::int64_t determinant(const IntMat& m) {
  const auto k = m.rows();
  if (k == 0) return 1;
  // Bareiss fraction-free elimination.
  Eigen::Matrix<__int128, Eigen::Dynamic, Eigen::Dynamic> a = m.cast<__int128>();
  __int128 prev = 1;
  int sign = 1;
  for (Eigen::Index c = 0; c < k - 1; ++c) {
    if (a(c, c) == 0) {
      Eigen::Index piv = c + 1;
      while (piv < k && a(piv, c) == 0) ++piv;
      if (piv == k) return 0;
      a.row(c).swap(a.row(piv));
      sign = -sign;
    }
    for (Eigen::Index r = c + 1; r < k; ++r)
      for (Eigen::Index j = c + 1; j < k; ++j)
        a(r, j) = (a(r, j) * a(c, c) - a(r, c) * a(c, j)) / prev;
    prev = a(c, c);
  }
  return sign * static_cast<std::int64_t>(a(k - 1, k - 1));
}

}  // namespace chabauty
