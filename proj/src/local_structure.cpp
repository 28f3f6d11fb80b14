#include "chabauty/local_structure.hpp"

#include "chabauty/invariants.hpp"
#include "chabauty/lll.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

namespace chabauty {

namespace {

Mat block_rows(const Mat& m, int start, int count) { return m.middleRows(start, count); }

Mat projector(const Mat& basis) { return basis * basis.transpose(); }

struct Failure {
  std::string condition;
  std::string detail;
};

// Closest lattice point of `frame` to x, in coefficients, written as an
// integer matrix column.
IntVec nearest(const LatticeFrame& frame, const Vec& x) { return frame.closest(x); }

std::optional<Decomposition> decompose(const ClosedSubgroup& g, GroupType base, double delta,
                                       const DecompositionOptions& opts, Failure& why) {
  const int n = g.ambient_dim();
  const int p = base.p, q = base.q;
  if (p < 0 || q < 0 || p + q > n) throw Error(ErrorCode::InvalidType, "base type does not fit in R^n");
  if (!(delta > 0 && delta < 1)) throw Error(ErrorCode::OutOfRange, "delta must lie in (0,1)");

  const Filtration filt = generation_filtration(g);
  std::vector<double> nv = norms(g);
  const auto dt = delta_type(nv, delta);
  if (!dt) {
    why = {"decomposable", "a norm equals delta or 1/delta"};
    return std::nullopt;
  }
  if (!(*dt == base)) {
    why = {"delta_type", "delta-type (" + std::to_string(dt->p) + "," + std::to_string(dt->q) +
                             ") differs from the base type"};
    return std::nullopt;
  }

  const int p0 = g.type().p;
  const int k1 = p - p0, k2 = k1 + q;
  const Mat& adapted = filt.adapted;
  const auto qg = adapted.cols();

  Decomposition out;
  {
    Mat small(n, p);
    small << g.continuous_basis(), adapted.leftCols(k1);
    out.linear.v1 = orthonormalize(small, 1e-12);
    const Mat mid = (Mat::Identity(n, n) - projector(out.linear.v1)) * adapted.middleCols(k1, q);
    out.linear.v2 = orthonormalize(mid, 1e-12);
    Mat both(n, out.linear.v1.cols() + out.linear.v2.cols());
    both << out.linear.v1, out.linear.v2;
    out.linear.v3 = orthogonal_complement(both, n);
    if (out.linear.v1.cols() != p || out.linear.v2.cols() != q)
      throw Error(ErrorCode::InconsistentData, "flag dimensions disagree with the delta-type");
  }

  const LinearDecomposition base_lin = base_flag(n, base);
  try {
    out.tau = trivialisation(out.linear, base_lin, opts.max_angle);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::FlagsTooFar) throw;
    why = {"flag_close", e.what()};
    return std::nullopt;
  }
  const double fd = flag_distance(out.linear, base_lin);
  if (!(fd < delta)) {
    why = {"flag_close", "flag is " + std::to_string(fd) + " from the base flag"};
    return std::nullopt;
  }
  const Mat& tau = out.tau;

  LocalDecomposition& loc = out.local;
  loc.n = n;
  loc.base = base;
  loc.delta = delta;

  // Gamma1 = tau Gamma(delta) inside V1^0.
  loc.gamma1 = make_subgroup(p, block_rows(tau * g.continuous_basis(), 0, p),
                             block_rows(tau * adapted.leftCols(k1), 0, p));

  // Gamma2 = tau P2 Gamma(1/delta) with its distinguished basis.
  const Mat lifts_raw = tau * adapted.middleCols(k1, q);  // tau of generators mod Gamma(delta)
  const Mat w = block_rows(lifts_raw, p, q);
  const LatticeFrame wframe(w);
  IntMat coeffs(q, q);
  for (int i = 0; i < q; ++i) {
    const IntVec c = nearest(wframe, Vec::Unit(q, i));
    for (int j = 0; j < q; ++j) coeffs(j, i) = c[static_cast<std::size_t>(j)];
  }
  loc.gamma2 = w * coeffs.cast<double>();
  for (int i = 0; i < q; ++i) {
    const double err = (Vec::Unit(q, i) - loc.gamma2.col(i)).norm();
    if (!(err < delta)) {
      why = {"distinguished_basis", "no basis vector within delta of e_" + std::to_string(p + i + 1)};
      return std::nullopt;
    }
  }
  if (q > 0 && std::llabs(determinant(coeffs)) != 1) {
    why = {"distinguished_basis", "vectors near the e_i do not form a basis"};
    return std::nullopt;
  }
  const Mat lifts = lifts_raw * coeffs.cast<double>();
  loc.phi2 = Mat(p, q);
  for (int i = 0; i < q; ++i) loc.phi2.col(i) = reduce_mod(block_rows(lifts, 0, p).col(i), loc.gamma1);

  // Gamma3 = tau P3 Gamma, reduced; Phi3 from the matching lifts.
  const int r3 = n - p - q;
  const auto m = qg - k2;
  Mat big = tau * adapted.rightCols(m);
  if (m > 0) {
    const Reduced red = lll_reduce(block_rows(big, p + q, r3));
    big = big * red.transform.cast<double>();
  }
  loc.gamma3 = block_rows(big, p + q, r3);
  loc.phi3_v1 = Mat(p, m);
  loc.phi3_v2 = Mat(q, m);
  const LatticeFrame g2frame(loc.gamma2);
  Mat full_lifts = Mat::Zero(n, q);
  full_lifts.topRows(p) = loc.phi2;
  full_lifts.middleRows(p, q) = loc.gamma2;
  for (Eigen::Index j = 0; j < m; ++j) {
    Vec y = big.col(j);
    const IntVec c = g2frame.closest(y.segment(p, q));
    for (int i = 0; i < q; ++i) y -= static_cast<double>(c[static_cast<std::size_t>(i)]) * full_lifts.col(i);
    loc.phi3_v2.col(j) = y.segment(p, q);
    loc.phi3_v1.col(j) = reduce_mod(y.head(p), loc.gamma1);
  }

  const double ns = norm_sum(loc);
  if (!(ns < delta)) {
    why = {"norm_sum", "N_p(Gamma1) + 1/N(Gamma3) = " + std::to_string(ns) + " is not below delta"};
    return std::nullopt;
  }
  return out;
}

}  // namespace

LinearDecomposition base_flag(int n, GroupType type) {
  if (type.p < 0 || type.q < 0 || type.rank() > n) throw Error(ErrorCode::InvalidType, "type does not fit in R^n");
  const Mat id = Mat::Identity(n, n);
  return {id.leftCols(type.p), id.middleCols(type.p, type.q), id.rightCols(n - type.rank())};
}

LinearDecomposition linear_decomposition(const ClosedSubgroup& g, double delta) {
  const auto dt = delta_type(g, delta);
  if (!dt) throw Error(ErrorCode::NotDecomposable, "a norm equals delta or 1/delta");
  const int n = g.ambient_dim();
  const Filtration filt = generation_filtration(g);
  const int k1 = dt->p - g.type().p;
  LinearDecomposition lin;
  Mat small(n, dt->p);
  small << g.continuous_basis(), filt.adapted.leftCols(k1);
  lin.v1 = orthonormalize(small, 1e-12);
  const Mat mid = (Mat::Identity(n, n) - projector(lin.v1)) * filt.adapted.middleCols(k1, dt->q);
  lin.v2 = orthonormalize(mid, 1e-12);
  Mat both(n, lin.v1.cols() + lin.v2.cols());
  both << lin.v1, lin.v2;
  lin.v3 = orthogonal_complement(both, n);
  return lin;
}

double flag_distance(const LinearDecomposition& flag, const LinearDecomposition& base) {
  const Mat* a[3] = {&flag.v1, &flag.v2, &flag.v3};
  const Mat* b[3] = {&base.v1, &base.v2, &base.v3};
  double worst = 0;
  for (int i = 0; i < 3; ++i) {
    if (a[i]->cols() != b[i]->cols())
      throw Error(ErrorCode::InconsistentData, "flags of different types");
    if (a[i]->cols() == 0) continue;
    const Mat diff = projector(*a[i]) - projector(*b[i]);
    Eigen::JacobiSVD<Mat> svd(diff);
    worst = std::max(worst, svd.singularValues()(0));
  }
  return worst;
}

Mat trivialisation(const LinearDecomposition& flag, const LinearDecomposition& base, double max_angle) {
  const Mat* a[3] = {&flag.v1, &flag.v2, &flag.v3};
  const Mat* b[3] = {&base.v1, &base.v2, &base.v3};
  const auto n = base.v1.rows();
  Mat tau = Mat::Zero(n, n);
  for (int i = 0; i < 3; ++i) {
    if (a[i]->cols() != b[i]->cols() || (a[i]->cols() > 0 && a[i]->rows() != n))
      throw Error(ErrorCode::InconsistentData, "flags of different types");
    if (a[i]->cols() == 0) continue;
    // Block C = B^T A; its singular values are the cosines of the principal angles.
    const Mat c = b[i]->transpose() * *a[i];
    Eigen::JacobiSVD<Mat> svd(c, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const double min_cos = svd.singularValues().minCoeff();
    if (!(std::acos(std::min(1.0, min_cos)) < max_angle))
      throw Error(ErrorCode::FlagsTooFar, "principal angle exceeds " + std::to_string(max_angle));
    tau += *b[i] * (svd.matrixU() * svd.matrixV().transpose()) * a[i]->transpose();
  }
  return tau;
}

Vec reduce_mod(const Vec& x, const ClosedSubgroup& g) {
  const Vec y = g.project_off_continuous(x);
  const LatticeFrame& frame = g.lattice();
  if (frame.rank() == 0) return y;
  double best_sq = 0;
  const IntVec c = frame.closest(y, &best_sq);
  Vec best = y - frame.combine(c);
  frame.enumerate(y, best_sq * (1 + 1e-9) + 1e-24, [&](const IntVec& z, double, double&) {
    const Vec r = y - frame.combine(z);
    if (std::lexicographical_compare(r.data(), r.data() + r.size(), best.data(), best.data() + best.size()))
      best = r;
    return true;
  });
  return best;
}

Decomposition local_decomposition(const ClosedSubgroup& g, GroupType base, double delta,
                                  const DecompositionOptions& opts) {
  Failure why;
  auto d = decompose(g, base, delta, opts, why);
  if (!d) throw Error(ErrorCode::NotInNeighborhood, why.condition + ": " + why.detail);
  return *d;
}

Membership in_U_delta(const ClosedSubgroup& g, GroupType base, double delta, const DecompositionOptions& opts) {
  Failure why;
  if (decompose(g, base, delta, opts, why)) return {true, ""};
  return {false, why.condition};
}

ClosedSubgroup reconstruct(const LinearDecomposition& lin, const LocalDecomposition& loc,
                           const DecompositionOptions& opts) {
  const int n = loc.n, p = loc.base.p, q = loc.base.q, r3 = n - p - q;
  const auto m = loc.gamma3.cols();
  if (!(lin.type() == loc.base) || lin.v3.cols() != r3 || loc.gamma1.ambient_dim() != p ||
      loc.gamma2.rows() != q || loc.gamma2.cols() != q || loc.phi2.rows() != p || loc.phi2.cols() != q ||
      (m > 0 && loc.gamma3.rows() != r3) || loc.phi3_v1.cols() != m || loc.phi3_v2.cols() != m ||
      (m > 0 && (loc.phi3_v1.rows() != p || loc.phi3_v2.rows() != q)))
    throw Error(ErrorCode::InconsistentData, "decomposition data have inconsistent sizes");
  const Mat tau = trivialisation(lin, base_flag(n, loc.base), opts.max_angle);

  const int p1 = loc.gamma1.type().p, q1 = loc.gamma1.type().q;
  Mat cont = Mat::Zero(n, p1);
  cont.topRows(p) = loc.gamma1.continuous_basis();
  Mat disc = Mat::Zero(n, q1 + q + m);
  disc.block(0, 0, p, q1) = loc.gamma1.discrete_basis();
  disc.block(0, q1, p, q) = loc.phi2;
  disc.block(p, q1, q, q) = loc.gamma2;
  if (m > 0) {
    disc.block(0, q1 + q, p, m) = loc.phi3_v1;
    disc.block(p, q1 + q, q, m) = loc.phi3_v2;
    disc.block(p + q, q1 + q, r3, m) = loc.gamma3;
  }
  return make_subgroup(n, Mat(tau.transpose() * cont), Mat(tau.transpose() * disc));
}

double norm_sum(const LocalDecomposition& loc) {
  const int p = loc.base.p;
  double np = 0;
  if (p > 0) np = norms(loc.gamma1)[static_cast<std::size_t>(p - 1)];
  double inv3 = 0;
  if (loc.gamma3.cols() > 0) {
    const int r3 = loc.n - p - loc.base.q;
    inv3 = 1.0 / systole(make_subgroup(r3, Mat(r3, 0), loc.gamma3));
  }
  return np + inv3;
}

bool on_link(const ClosedSubgroup& g, GroupType base, double delta, double tol,
             const DecompositionOptions& opts) {
  const Decomposition d = local_decomposition(g, base, delta, opts);
  if (flag_distance(d.linear, base_flag(g.ambient_dim(), base)) > tol) return false;
  const int q = base.q;
  if (q > 0 && (d.local.gamma2 - Mat::Identity(q, q)).cwiseAbs().maxCoeff() > tol) return false;
  return std::abs(norm_sum(d.local) - delta / 2) <= tol;
}

LocalDecomposition cone_map(double t, const LocalDecomposition& loc) {
  if (!(t >= 0 && t < 2)) throw Error(ErrorCode::OutOfRange, "cone parameter must lie in [0,2)");
  LocalDecomposition out = loc;
  out.gamma1 = scale(loc.gamma1, t);
  if (t == 0) {
    const int r3 = loc.n - loc.base.p - loc.base.q;
    out.gamma3 = Mat(r3, 0);
    out.phi3_v1 = Mat(loc.base.p, 0);
    out.phi3_v2 = Mat(loc.base.q, 0);
    out.phi2 = Mat::Zero(loc.base.p, loc.base.q);
  } else {
    out.gamma3 = loc.gamma3 / t;
    out.phi2 = t * loc.phi2;
    out.phi3_v1 = t * loc.phi3_v1;
  }
  return out;
}

BundlePoint bundle_projection(const LocalDecomposition& loc) {
  const int n = loc.n, p = loc.base.p, q = loc.base.q, r3 = n - p - q;
  if ((p == 0 && q == 0) || (p == n && q == 0))
    throw Error(ErrorCode::InvalidStratum, "no bundle structure over the strata of {0} and R^n");
  BundlePoint out;
  const double np = p > 0 ? norms(loc.gamma1)[static_cast<std::size_t>(p - 1)] : 0.0;
  out.gamma1 = np > 0 ? scale(loc.gamma1, 1.0 / np) : scale(loc.gamma1, kInf);
  const ClosedSubgroup g3 = make_subgroup(r3, Mat(r3, 0), loc.gamma3);
  out.gamma3 = loc.gamma3.cols() > 0 ? scale(g3, 1.0 / systole(g3)) : g3;
  out.lambda = (2.0 / loc.delta) * np;
  return out;
}

Mat aligning_map(const ClosedSubgroup& base) {
  const int n = base.ambient_dim();
  Mat frame(n, n);
  Mat both(n, base.rank());
  both << base.continuous_basis(), base.discrete_basis();
  frame << both, orthogonal_complement(orthonormalize(both), n);
  return frame.inverse();
}

}  // namespace chabauty
