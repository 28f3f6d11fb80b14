#include "chabauty/subgroup.hpp"

#include "chabauty/lll.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace chabauty {

Mat columns(const std::vector<Vec>& vs, int n) {
  Mat m(n, static_cast<Eigen::Index>(vs.size()));
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (vs[i].size() != n)
      throw Error(ErrorCode::DimensionMismatch,
                  "vector of length " + std::to_string(vs[i].size()) + " in ambient dimension " +
                      std::to_string(n));
    m.col(static_cast<Eigen::Index>(i)) = vs[i];
  }
  return m;
}

Mat orthonormalize(const Mat& m, double rel_tol) {
  Mat out(m.rows(), 0);
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    Vec v = m.col(j);
    const double len = v.norm();
    if (len == 0) continue;
    // Two passes keep the result orthogonal to working precision.
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index i = 0; i < out.cols(); ++i) v -= out.col(i).dot(v) * out.col(i);
    const double res = v.norm();
    if (res <= rel_tol * len) continue;
    out.conservativeResize(Eigen::NoChange, out.cols() + 1);
    out.col(out.cols() - 1) = v / res;
  }
  return out;
}

Mat orthogonal_complement(const Mat& basis, int n) {
  Mat all(n, basis.cols() + n);
  all << basis, Mat::Identity(n, n);
  Mat q = orthonormalize(all, 1e-8);
  return q.rightCols(q.cols() - basis.cols());
}

Vec ClosedSubgroup::project_off_continuous(const Vec& x) const {
  Vec y = x;
  if (continuous_.cols() > 0) y -= continuous_ * (continuous_.transpose() * x);
  return y;
}

ClosedSubgroup make_subgroup(int n, const Mat& continuous_gens, const Mat& discrete_gens,
                             const Tolerance& tol) {
  if (n < 0) throw Error(ErrorCode::DimensionMismatch, "negative ambient dimension");
  if ((continuous_gens.cols() > 0 && continuous_gens.rows() != n) ||
      (discrete_gens.cols() > 0 && discrete_gens.rows() != n))
    throw Error(ErrorCode::DimensionMismatch, "generator length differs from ambient dimension " +
                                                  std::to_string(n));
  ClosedSubgroup g;
  g.n_ = n;
  g.continuous_ = orthonormalize(continuous_gens.rows() == n ? continuous_gens : Mat(n, 0),
                                 tol.rank_tol);

  Mat projected(n, 0);
  for (Eigen::Index j = 0; j < discrete_gens.cols(); ++j) {
    const Vec d = discrete_gens.col(j);
    Vec v = g.project_off_continuous(d);
    v = g.project_off_continuous(v);
    // A generator inside the continuous part adds nothing.
    if (v.norm() <= tol.rank_tol * std::max(1.0, d.norm())) continue;
    projected.conservativeResize(Eigen::NoChange, projected.cols() + 1);
    projected.col(projected.cols() - 1) = v;
  }
  const auto q = projected.cols();
  if (g.continuous_.cols() + q > n)
    throw Error(ErrorCode::NonClosedInput, "more discrete generators than free dimensions");
  if (q > 0) {
    // Scale-free independence test: det(G) / prod G_ii (Hadamard ratio).
    const Mat gram = projected.transpose() * projected;
    double ratio = gram.determinant();
    for (Eigen::Index i = 0; i < q; ++i) ratio /= gram(i, i);
    if (!(ratio > tol.rank_tol))
      throw Error(ErrorCode::NonClosedInput,
                  "discrete generators are linearly dependent after projection");
    g.discrete_ = lll_reduce(projected).basis;
  } else {
    g.discrete_ = Mat(n, 0);
  }
  g.frame_ = LatticeFrame(g.discrete_);
  return g;
}

ClosedSubgroup make_subgroup(int n, const std::vector<Vec>& continuous_gens,
                             const std::vector<Vec>& discrete_gens, const Tolerance& tol) {
  return make_subgroup(n, columns(continuous_gens, n), columns(discrete_gens, n), tol);
}

ClosedSubgroup aligned_subgroup(int n, GroupType type) {
  if (type.p < 0 || type.q < 0 || type.rank() > n)
    throw Error(ErrorCode::InvalidType, "type does not fit the ambient dimension");
  const Mat id = Mat::Identity(n, n);
  return make_subgroup(n, Mat(id.leftCols(type.p)), Mat(id.middleCols(type.p, type.q)));
}

GroupType type_of(const ClosedSubgroup& g) { return g.type(); }
int rank(const ClosedSubgroup& g) { return g.rank(); }

CanonicalDecomposition canonical_decomposition(const ClosedSubgroup& g) {
  return {g.continuous_basis(), g.discrete_basis()};
}

std::vector<Vec> points_in_ball(const ClosedSubgroup& g, double radius, std::size_t cap) {
  if (radius < 0) throw Error(ErrorCode::InvalidArgument, "negative radius");
  std::vector<Vec> out;
  const LatticeFrame& frame = g.lattice();
  const double bound = radius * radius * (1 + 1e-12) + 1e-300;
  frame.enumerate(Vec::Zero(g.ambient_dim()), bound,
                  [&](const IntVec& x, double, double&) {
                    if (out.size() >= cap)
                      throw Error(ErrorCode::EnumerationBudgetExceeded,
                                  "more than " + std::to_string(cap) + " lattice points in ball");
                    out.push_back(frame.combine(x));
                    return true;
                  });
  std::sort(out.begin(), out.end(), [](const Vec& a, const Vec& b) {
    const double na = a.squaredNorm(), nb = b.squaredNorm();
    if (na != nb) return na < nb;
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  });
  return out;
}

double distance_to_subgroup(const Vec& x, const ClosedSubgroup& g) {
  if (x.size() != g.ambient_dim())
    throw Error(ErrorCode::DimensionMismatch, "point and subgroup dimensions differ");
  return g.lattice().distance(g.project_off_continuous(x));
}

ClosedSubgroup apply_linear(const Mat& m, const ClosedSubgroup& g, double tol) {
  const int n = g.ambient_dim();
  if (m.rows() != n || m.cols() != n)
    throw Error(ErrorCode::DimensionMismatch, "matrix size differs from ambient dimension");
  if (!(std::abs(m.determinant()) > tol)) throw Error(ErrorCode::SingularMatrix, "singular matrix");
  return make_subgroup(n, Mat(m * g.continuous_basis()), Mat(m * g.discrete_basis()));
}

ClosedSubgroup scale(const ClosedSubgroup& g, double t) {
  const int n = g.ambient_dim();
  if (!(t >= 0)) throw Error(ErrorCode::OutOfRange, "scale factor must lie in [0, inf]");
  if (std::isinf(t)) return make_subgroup(n, g.continuous_basis(), Mat(n, 0));
  if (t == 0) {
    Mat all(n, g.rank());
    all << g.continuous_basis(), g.discrete_basis();
    return make_subgroup(n, all, Mat(n, 0));
  }
  return make_subgroup(n, g.continuous_basis(), Mat(t * g.discrete_basis()));
}

ClosedSubgroup random_subgroup(int n, GroupType type, std::uint64_t seed, const RandomParams& params) {
  if (n < 0 || type.p < 0 || type.q < 0 || type.rank() > n)
    throw Error(ErrorCode::InvalidType, "type (" + std::to_string(type.p) + "," +
                                            std::to_string(type.q) + ") does not fit in R^" +
                                            std::to_string(n));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> length(params.min_norm, params.max_norm);
  for (int attempt = 0;; ++attempt) {
    Mat gauss(n, n);
    for (Eigen::Index i = 0; i < gauss.size(); ++i) gauss.data()[i] = normal(rng);
    const Mat frame = orthonormalize(gauss, 1e-6);
    if (frame.cols() < n) continue;
    const Mat cont = frame.leftCols(type.p);
    const Mat span = frame.middleCols(type.p, type.q);
    Mat disc(n, type.q);
    for (int j = 0; j < type.q; ++j) {
      Vec c(type.q);
      for (int i = 0; i < type.q; ++i) c(i) = normal(rng);
      disc.col(j) = span * c.normalized() * length(rng);
    }
    if (type.q > 0) {
      const Mat gram = disc.transpose() * disc;
      double ratio = gram.determinant();
      for (int i = 0; i < type.q; ++i) ratio /= gram(i, i);
      if (ratio < 1e-2) continue;
    }
    ClosedSubgroup g = make_subgroup(n, cont, disc);
    bool in_range = true;
    for (Eigen::Index j = 0; j < g.discrete_basis().cols(); ++j) {
      const double len = g.discrete_basis().col(j).norm();
      if (len < params.min_norm * (1 - 1e-12) || len > params.max_norm * (1 + 1e-12)) in_range = false;
    }
    if (in_range || attempt > 200) return g;
  }
}

}  // namespace chabauty
