#pragma once

// Exact lattice point enumeration (Fincke-Pohst with Schnorr-Euchner zig-zag)
// and closest-vector search over a real basis.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace chabauty {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using IntVec = std::vector<std::int64_t>;

/// Triangular form of a lattice basis B = Q R, used by every enumeration.
class LatticeFrame {
 public:
  LatticeFrame() = default;
  /// `basis` holds the generators as columns; they must be linearly independent.
  explicit LatticeFrame(const Mat& basis);

  int rank() const { return static_cast<int>(r_.cols()); }
  int ambient() const { return static_cast<int>(basis_.rows()); }
  const Mat& basis() const { return basis_; }

  /// Visits every x with |Bx - target|^2 <= bound_sq. The visitor has the
  /// signature bool(const IntVec& x, double sq_dist, double& bound_sq); it may
  /// shrink bound_sq and returns false to stop the walk. Returns false when
  /// stopped early.
  template <class Visitor>
  bool enumerate(const Vec& target, double bound_sq, Visitor&& visit) const;

  /// Exact closest lattice vector to `target`; returns its coefficients.
  IntVec closest(const Vec& target, double* sq_dist = nullptr) const;

  /// Distance from `target` to the lattice.
  double distance(const Vec& target) const;

  Vec combine(const IntVec& x) const;

 private:
  Mat basis_;
  Mat q_;
  Mat r_;
};

template <class Visitor>
bool LatticeFrame::enumerate(const Vec& target, double bound_sq,
                             Visitor&& visit) const {
  const int k = rank();
  IntVec x(static_cast<std::size_t>(k), 0);
  if (k == 0) {
    const double sq = target.squaredNorm();
    if (sq <= bound_sq) return visit(x, sq, bound_sq);
    return true;
  }
  const Vec t = q_.transpose() * target;
  const double off = std::max(0.0, target.squaredNorm() - t.squaredNorm());

  // Level i fixes x[i] given x[i+1..k-1]; `above` is the squared length of
  // the already fixed levels. Candidates are tried outward from the centre,
  // alternating sides, and each side stops once it leaves the (possibly
  // shrinking) bound.
  auto level = [&](auto&& self, int i, double above) -> bool {
    const auto ui = static_cast<std::size_t>(i);
    double c = t(i);
    for (int j = i + 1; j < k; ++j) c -= r_(i, j) * static_cast<double>(x[static_cast<std::size_t>(j)]);
    c /= r_(i, i);
    const double rii = std::abs(r_(i, i));
    const auto base = static_cast<std::int64_t>(std::floor(c + 0.5));
    const std::int64_t first_dir = (c >= static_cast<double>(base)) ? 1 : -1;
    bool open[2] = {true, true};  // [0]: first_dir side, [1]: other side
    auto try_value = [&](std::int64_t v) -> int {
      const double d = (static_cast<double>(v) - c) * rii;
      const double sq = above + d * d;
      if (sq > bound_sq) return 0;
      x[ui] = v;
      if (i == 0) return visit(x, sq, bound_sq) ? 1 : -1;
      return self(self, i - 1, sq) ? 1 : -1;
    };
    int r = try_value(base);
    if (r < 0) return false;
    if (r == 0) return true;
    for (std::int64_t off2 = 1; open[0] || open[1]; ++off2) {
      for (int side = 0; side < 2; ++side) {
        if (!open[side]) continue;
        const std::int64_t v = base + (side == 0 ? first_dir : -first_dir) * off2;
        r = try_value(v);
        if (r < 0) return false;
        if (r == 0) open[side] = false;
      }
    }
    return true;
  };
  if (off > bound_sq) return true;
  return level(level, k - 1, off);
}

}  // namespace chabauty
