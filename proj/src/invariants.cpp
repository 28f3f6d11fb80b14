#include "chabauty/invariants.hpp"

#include "chabauty/lll.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace chabauty {

namespace {

Mat to_real(const IntMat& m) { return m.cast<double>(); }

}  // namespace

// Successive minima by growing a saturated sublattice A. With the lattice
// written as A + T (T the remaining basis columns), the shortest vector
// outside span(A) is min over c != 0 of dist(Tc, A). Only c with
// |proj(Tc)| below the current best can win, where proj removes span(A), so
// the search is an enumeration in the projected tail lattice.
Filtration generation_filtration(const ClosedSubgroup& g, std::size_t visit_cap) {
  const int n = g.ambient_dim();
  const auto q = g.discrete_basis().cols();
  Filtration f;
  f.adapted = Mat(n, q);
  f.minimal = Mat(n, q);
  Mat tail = g.discrete_basis();
  std::size_t visits = 0;
  for (Eigen::Index k = 0; k < q; ++k) {
    const Mat head = f.adapted.leftCols(k);
    const LatticeFrame head_frame(head);
    const Mat head_q = orthonormalize(head, 0.0);

    Mat proj = tail;
    if (k > 0) proj -= head_q * (head_q.transpose() * tail);
    const Reduced red = lll_reduce(proj);
    tail = tail * to_real(red.transform);
    proj = red.basis;

    const LatticeFrame tail_frame(proj);
    const auto m = tail.cols();
    IntVec best_c(static_cast<std::size_t>(m), 0);
    double best_sq = kInf;
    for (Eigen::Index j = 0; j < m; ++j) {
      const double d = head_frame.distance(tail.col(j));
      if (d * d < best_sq) {
        best_sq = d * d;
        std::fill(best_c.begin(), best_c.end(), 0);
        best_c[static_cast<std::size_t>(j)] = 1;
      }
    }
    tail_frame.enumerate(Vec::Zero(n), best_sq * (1 + 1e-12),
                         [&](const IntVec& c, double sq, double& bound) {
                           if (++visits > visit_cap)
                             throw Error(ErrorCode::EnumerationBudgetExceeded,
                                         "norm search exceeded " + std::to_string(visit_cap) +
                                             " visits");
                           if (sq == 0) return true;
                           Vec v = Vec::Zero(n);
                           for (std::size_t i = 0; i < c.size(); ++i)
                             v += static_cast<double>(c[i]) * tail.col(static_cast<Eigen::Index>(i));
                           const double d = head_frame.distance(v);
                           if (d * d < best_sq * (1 - 1e-13)) {
                             best_sq = d * d;
                             best_c = c;
                             bound = best_sq * (1 + 1e-12);
                           }
                           return true;
                         });

    // Realizing vector: tail combination shifted by the closest head point.
    std::int64_t div = 0;
    for (auto c : best_c) div = std::gcd(div, c);
    if (div < 0) div = -div;
    IntVec prim(best_c.size());
    for (std::size_t i = 0; i < best_c.size(); ++i) prim[i] = best_c[i] / div;
    Vec v = Vec::Zero(n);
    for (std::size_t i = 0; i < best_c.size(); ++i)
      v += static_cast<double>(best_c[i]) * tail.col(static_cast<Eigen::Index>(i));
    if (k > 0) v -= head_frame.combine(head_frame.closest(v));
    f.minimal.col(k) = v;
    f.radii.push_back(v.norm());

    const IntMat u = complete_to_unimodular(prim);
    tail = tail * to_real(u);
    f.adapted.col(k) = tail.col(0);
    tail = Mat(tail.rightCols(m - 1));
  }
  return f;
}

std::vector<double> norms(const ClosedSubgroup& g) {
  const GroupType t = g.type();
  std::vector<double> out(static_cast<std::size_t>(g.ambient_dim()), kInf);
  for (int i = 0; i < t.p; ++i) out[static_cast<std::size_t>(i)] = 0.0;
  if (t.q > 0) {
    const Filtration f = generation_filtration(g);
    for (int i = 0; i < t.q; ++i) out[static_cast<std::size_t>(t.p + i)] = f.radii[static_cast<std::size_t>(i)];
  }
  return out;
}

double systole(const ClosedSubgroup& g) {
  if (g.type().p > 0) return 0.0;
  if (g.type().q == 0) return kInf;
  return generation_filtration(g).radii.front();
}

std::optional<double> covolume(const ClosedSubgroup& g) {
  if (g.ambient_dim() != 2)
    throw Error(ErrorCode::WrongAmbientDim, "covolume is defined for subgroups of R^2 only");
  const GroupType t = g.type();
  if (t == GroupType{0, 2}) return std::abs(g.discrete_basis().determinant());
  if (t == GroupType{1, 1} || t == GroupType{2, 0}) return 0.0;
  if (t == GroupType{1, 0}) return std::nullopt;
  return kInf;
}

double discrete_covolume(const ClosedSubgroup& g) {
  const Mat& b = g.discrete_basis();
  if (b.cols() == 0) return 1.0;
  return std::sqrt(std::max(0.0, (b.transpose() * b).determinant()));
}

std::optional<GroupType> delta_type(const std::vector<double>& norm_vector, double delta, double tol) {
  if (!(delta > 0 && delta < 1)) throw Error(ErrorCode::OutOfRange, "delta must lie in (0,1)");
  const double lo = delta, hi = 1.0 / delta;
  GroupType t;
  for (double v : norm_vector) {
    if (std::abs(v - lo) <= tol * lo || std::abs(v - hi) <= tol * hi) return std::nullopt;
    if (v < lo) ++t.p;
    else if (v < hi) ++t.q;
  }
  return t;
}

std::optional<GroupType> delta_type(const ClosedSubgroup& g, double delta, double tol) {
  return delta_type(norms(g), delta, tol);
}

}  // namespace chabauty
