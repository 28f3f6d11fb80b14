#include "chabauty/metric.hpp"

#include "chabauty/invariants.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>

namespace chabauty {

void MetricParams::validate() const {
  if (radii.empty() || radii.size() != weights.size())
    throw Error(ErrorCode::InvalidArgument, "radii and weights must be non-empty and of equal length");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0) || (i > 0 && !(radii[i] > radii[i - 1])))
      throw Error(ErrorCode::InvalidArgument, "radii must be positive and strictly increasing");
    if (!(weights[i] > 0)) throw Error(ErrorCode::InvalidArgument, "weights must be positive");
  }
  if (!(grid > 0)) throw Error(ErrorCode::InvalidArgument, "grid must be positive");
  if (!(precision > 0) || precision > grid)
    throw Error(ErrorCode::InvalidArgument, "precision must lie in (0, grid]");
  if (cap == 0 || box_cap == 0) throw Error(ErrorCode::InvalidArgument, "caps must be positive");
}

namespace {

// Best-first branch and bound for the maximum of a Lipschitz function over
// a box, optionally intersected with the centred ball of radius `ball`.
struct Maximizer {
  Vec weight;                                   // per-axis Lipschitz weights
  bool euclidean = true;                        // combine weights in l2 (else l1)
  std::function<double(const Vec&)> reach;      // overrides the weighted bound when set
  double ball = kInf;
  std::function<double(const Vec&, double&)> eval;  // value; may lower the global bound
  std::size_t* boxes = nullptr;
  std::size_t box_cap = 0;

  double spread(const Vec& h) const {
    if (reach) return reach(h);
    const Vec wh = weight.cwiseProduct(h);
    return euclidean ? wh.norm() : wh.cwiseAbs().sum();
  }

  // Returns the best value found; `upper` receives a bound on the maximum.
  double run(const Vec& c0, const Vec& h0, double lb, double precision, double stop_at,
             double& upper) {
    struct Box {
      Vec c, h;
      double ub;
      bool operator<(const Box& o) const { return ub < o.ub; }
    };
    double global_ub = kInf;
    double best = -kInf;
    std::priority_queue<Box> heap;
    auto push = [&](const Vec& c, const Vec& h) {
      if (std::isfinite(ball)) {
        Vec closest(c.size());
        for (Eigen::Index i = 0; i < c.size(); ++i)
          closest(i) = std::clamp(0.0, c(i) - h(i), c(i) + h(i));
        if (closest.norm() > ball) return;
      }
      if (boxes && ++*boxes > box_cap)
        throw Error(ErrorCode::EnumerationBudgetExceeded,
                    "branch and bound exceeded " + std::to_string(box_cap) + " boxes");
      Vec at = c;
      double offset = 0;
      if (std::isfinite(ball) && c.norm() > ball) {
        at = c * (ball / c.norm());
        offset = spread((c - at).cwiseAbs());
      }
      const double v = eval(at, global_ub);
      best = std::max(best, v);
      const double ub = std::min(global_ub, v + offset + spread(h));
      if (ub > std::max(lb, best) + precision) heap.push({c, h, ub});
    };
    push(c0, h0);
    while (!heap.empty()) {
      const double floor = std::max(lb, best);
      if (floor >= stop_at) break;
      if (global_ub <= floor + precision) break;
      Box top = heap.top();
      heap.pop();
      top.ub = std::min(top.ub, global_ub);
      if (top.ub <= floor + precision) {
        heap.push(top);
        break;
      }
      Eigen::Index axis = 0;
      weight.cwiseProduct(top.h).maxCoeff(&axis);
      Vec h = top.h;
      h(axis) *= 0.5;
      Vec c = top.c;
      c(axis) -= h(axis);
      push(c, h);
      c(axis) += 2 * h(axis);
      push(c, h);
    }
    const double floor = std::max(lb, best);
    upper = heap.empty() ? floor : std::max(floor, std::min(global_ub, heap.top().ub));
    return best;
  }
};

// `precision` is absolute; the result is a lower bound within it.
double covering_radius_impl(const LatticeFrame& frame, double precision, double* upper) {
  const int q = frame.rank();
  if (q == 0) {
    if (upper) *upper = 0;
    return 0;
  }
  const Mat& b = frame.basis();
  Maximizer m;
  m.weight = b.colwise().norm().transpose();
  // max |B d| over the box |d_i| <= h_i sits at a vertex; +-d give the same length.
  const auto corners = std::size_t{1} << (q - 1);
  m.reach = [&](const Vec& h) {
    double best = 0;
    Vec d(q);
    for (std::size_t mask = 0; mask < corners; ++mask) {
      for (int i = 0; i < q; ++i) d(i) = (i > 0 && (mask >> (i - 1)) & 1) ? -h(i) : h(i);
      best = std::max(best, (b * d).squaredNorm());
    }
    return std::sqrt(best);
  };
  m.eval = [&](const Vec& u, double&) { return frame.distance(b * u); };
  std::size_t boxes = 0;
  m.boxes = &boxes;
  m.box_cap = 20'000'000;
  double ub = 0;
  const double lb = m.run(Vec::Constant(q, 0.5), Vec::Constant(q, 0.5), 0.0, precision,
                          kInf, ub);
  if (upper) *upper = ub;
  return lb;
}

// One direction of the gap: sup over x in A n B(R) of dist(x, B).
class DirectedGap {
 public:
  DirectedGap(const ClosedSubgroup& a, const ClosedSubgroup& b, const MetricParams& params)
      : a_(a), b_(b), params_(params), n_(a.ambient_dim()) {
    const Mat& vb = b.continuous_basis();
    proj_ = Mat::Identity(n_, n_) - vb * vb.transpose();
    full_ = b.type().p == n_;
    if (full_) return;

    const Mat m = proj_ * a.continuous_basis();
    if (m.cols() > 0) {
      Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
      const Vec s = svd.singularValues();
      int r = 0;
      while (r < s.size() && s(r) > 1e-12) ++r;
      sigma_ = s.head(r);
      us_ = svd.matrixU().leftCols(r) * sigma_.asDiagonal();
    } else {
      sigma_ = Vec(0);
      us_ = Mat(n_, 0);
    }

    span_b_ = orthonormalize(b.discrete_basis(), 0.0);
    const Mat off_span = us_ - span_b_ * (span_b_.transpose() * us_);
    off_norm_ = off_span.cols() > 0 ? off_span.norm() : 0.0;
    if (b.type().q > 0 && sigma_.size() > 0 && off_norm_ <= 1e-12) {
      const Mat inside = span_b_.transpose() * us_;
      Eigen::JacobiSVD<Mat> svd(inside);
      const Vec s = svd.singularValues();
      if (inside.cols() >= inside.rows() && s.size() == inside.rows())
        sigma_in_min_ = s(s.size() - 1);
    }
    for (Eigen::Index j = 0; j < b.discrete_basis().cols(); ++j)
      fundamental_radius_ += 0.5 * b.discrete_basis().col(j).norm();

    // Linear map carrying A into B: projection of the continuous part and
    // nearest points for the discrete generators.
    Mat x(n_, a.rank()), y(n_, a.rank());
    x << a.continuous_basis(), a.discrete_basis();
    y.leftCols(a.type().p) = vb * (vb.transpose() * a.continuous_basis());
    for (Eigen::Index j = 0; j < a.discrete_basis().cols(); ++j) {
      const Vec d = a.discrete_basis().col(j);
      const Vec pd = proj_ * d;
      y.col(a.type().p + j) = (d - pd) + b.lattice().combine(b.lattice().closest(pd));
    }
    if (x.cols() > 0) {
      const Mat diff = (x - y) * x.completeOrthogonalDecomposition().pseudoInverse();
      Eigen::JacobiSVD<Mat> svd(diff);
      map_eps_ = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    }
  }

  double sup(double radius, double stop_at, std::size_t& boxes) {
    if (full_ || a_.rank() == 0) return 0.0;
    prec_ = std::min(params_.grid, params_.precision * std::max(1.0, radius));
    const double map_ub = map_eps_ * radius;
    if (map_ub <= prec_) return map_ub;
    double global_ub = std::min(map_ub, radius);
    // When V_B and the lattice of B span R^n every point is within mu of B.
    if (b_.type().q > 0 && b_.type().rank() == n_ && global_ub > prec_) {
      mu();
      global_ub = std::min(global_ub, mu_upper_);
    }
    double lb = 0.0;
    std::size_t points = 0;
    const double target = std::min(stop_at, global_ub - prec_);
    const LatticeFrame& la = a_.lattice();
    la.enumerate(Vec::Zero(n_), radius * radius * (1 + 1e-12) + 1e-300,
                 [&](const IntVec& coeffs, double sq, double&) {
                   if (++points > params_.cap)
                     throw Error(ErrorCode::EnumerationBudgetExceeded,
                                 "more than " + std::to_string(params_.cap) + " lattice points in ball");
                   const Vec w = proj_ * la.combine(coeffs);
                   const double rho = std::sqrt(std::max(0.0, radius * radius - sq));
                   lb = std::max(lb, slice_sup(w, rho, lb, stop_at, boxes));
                   return lb < target;
                 });
    return lb;
  }

 private:
  double mu() {
    if (mu_ < 0) mu_ = covering_radius_impl(b_.lattice(), params_.precision, &mu_upper_);
    return mu_;
  }

  double off_span_length(const Vec& w) const {
    return (w - span_b_ * (span_b_.transpose() * w)).norm();
  }

  double slice_sup(const Vec& w, double rho, double lb, double stop_at, std::size_t& boxes) {
    const LatticeFrame& lb_frame = b_.lattice();
    if (sigma_.size() == 0 || rho == 0) return lb_frame.distance(w);

    double slice_ub = kInf;
    if (b_.type().q > 0) {
      const double off = off_span_length(w);
      const double mu_val = mu();
      if (sigma_in_min_ > 0 && sigma_in_min_ * rho >= fundamental_radius_)
        return std::sqrt(mu_val * mu_val + off * off);
      const double far = off + off_norm_ * rho;
      slice_ub = std::sqrt(mu_upper_ * mu_upper_ + far * far);
    } else {
      slice_ub = w.norm() + sigma_(0) * rho;
    }
    if (slice_ub <= lb + prec_) return lb;

    const auto r = sigma_.size();
    Maximizer m;
    m.weight = sigma_;
    m.euclidean = true;
    m.ball = rho;
    m.boxes = &boxes;
    m.box_cap = params_.box_cap;
    const double reach = sigma_(0) * rho;
    m.eval = [&](const Vec& z, double& global) {
      const Vec p = w + us_ * z;
      double sq = 0;
      const IntVec near = lb_frame.closest(p, &sq);
      global = std::min(global, std::min(slice_ub, (w - lb_frame.combine(near)).norm() + reach));
      return std::sqrt(sq);
    };
    double upper = 0;
    const double best = m.run(Vec::Zero(r), Vec::Constant(r, rho), lb, prec_, stop_at, upper);
    return std::max(lb, best);
  }

  const ClosedSubgroup& a_;
  const ClosedSubgroup& b_;
  const MetricParams& params_;
  int n_;
  bool full_ = false;
  Mat proj_;
  Vec sigma_;
  Mat us_;
  Mat span_b_;
  double off_norm_ = 0;
  double sigma_in_min_ = 0;
  double fundamental_radius_ = 0;
  double map_eps_ = 0;
  double prec_ = 0;  // absolute precision at the current radius
  double mu_ = -1;
  double mu_upper_ = 0;
};

void check_pair(const ClosedSubgroup& a, const ClosedSubgroup& b) {
  if (a.ambient_dim() != b.ambient_dim())
    throw Error(ErrorCode::DimensionMismatch, "subgroups live in different dimensions");
}

bool same_bases(const ClosedSubgroup& a, const ClosedSubgroup& b) {
  return a.type() == b.type() && a.continuous_basis() == b.continuous_basis() &&
         a.discrete_basis() == b.discrete_basis();
}

}  // namespace

double covering_radius(const ClosedSubgroup& g, double rel_precision) {
  double scale = kInf;
  for (Eigen::Index i = 0; i < g.discrete_basis().cols(); ++i) scale = std::min(scale, g.discrete_basis().col(i).norm());
  return covering_radius_impl(g.lattice(), rel_precision * (std::isfinite(scale) ? scale : 1.0), nullptr);
}

double hausdorff_gap(const ClosedSubgroup& a, const ClosedSubgroup& b, double radius,
                     const MetricParams& params, double stop_at) {
  check_pair(a, b);
  params.validate();
  if (!(radius >= 0)) throw Error(ErrorCode::InvalidArgument, "radius must be non-negative");
  if (same_bases(a, b)) return 0.0;
  std::size_t boxes = 0;
  DirectedGap ab(a, b, params), ba(b, a, params);
  return std::max(ab.sup(radius, stop_at, boxes), ba.sup(radius, stop_at, boxes));
}

double chabauty_distance(const ClosedSubgroup& a, const ClosedSubgroup& b, const MetricParams& params) {
  check_pair(a, b);
  params.validate();
  if (same_bases(a, b)) return 0.0;
  std::size_t boxes = 0;
  DirectedGap ab(a, b, params), ba(b, a, params);
  double total = 0;
  bool saturated = false;
  for (std::size_t k = 0; k < params.radii.size(); ++k) {
    // The gap is non-decreasing in the radius, so once it reaches 1 it stays capped.
    if (!saturated) {
      const double g = std::max(ab.sup(params.radii[k], 1.0, boxes), ba.sup(params.radii[k], 1.0, boxes));
      saturated = g >= 1.0;
      total += params.weights[k] * std::min(1.0, g);
    } else {
      total += params.weights[k];
    }
  }
  return total;
}

bool neighborhood_test(const ClosedSubgroup& a, const ClosedSubgroup& b, double radius, double eps,
                       const MetricParams& params) {
  if (!(eps > 0)) throw Error(ErrorCode::InvalidArgument, "eps must be positive");
  return hausdorff_gap(a, b, radius, params, eps) < eps;
}

LimitReport classify_limit(const Family& family, const std::vector<double>& t, double delta) {
  if (t.size() < 3) throw Error(ErrorCode::InvalidArgument, "need at least three parameter values");
  LimitReport rep;
  rep.t = t;
  for (double s : t) {
    const ClosedSubgroup g = family(s);
    rep.norm_trace.push_back(norms(g));
    rep.type_trace.push_back(delta_type(rep.norm_trace.back(), delta));
  }
  const std::size_t m = t.size();
  const auto& last = rep.type_trace[m - 1];
  if (!last || rep.type_trace[m - 2] != last || rep.type_trace[m - 3] != last)
    throw Error(ErrorCode::Unstable, "delta-type does not stabilise over the last three samples");
  rep.type = *last;
  const auto& first = rep.norm_trace.front();
  const auto& final = rep.norm_trace.back();
  for (std::size_t i = 0; i < first.size(); ++i) {
    if (first[i] >= delta && final[i] < delta) rep.shrunk.push_back(static_cast<int>(i) + 1);
    if (first[i] <= 1 / delta && final[i] > 1 / delta) rep.grown.push_back(static_cast<int>(i) + 1);
  }
  return rep;
}

Family power_family(int n, int p, const std::vector<double>& exponents) {
  const int q = static_cast<int>(exponents.size());
  if (n < 1 || p < 0 || p + q > n) throw Error(ErrorCode::InvalidType, "family type does not fit in R^n");
  return [n, p, exponents](double t) {
    if (!(t > 0) || !std::isfinite(t)) throw Error(ErrorCode::OutOfRange, "family parameter must be positive");
    const Mat id = Mat::Identity(n, n);
    Mat disc(n, static_cast<Eigen::Index>(exponents.size()));
    for (std::size_t i = 0; i < exponents.size(); ++i)
      disc.col(static_cast<Eigen::Index>(i)) = std::pow(t, exponents[i]) * id.col(p + static_cast<Eigen::Index>(i));
    return make_subgroup(n, Mat(id.leftCols(p)), disc);
  };
}

Family named_family(const std::string& name, int n, int p, int q) {
  if (q < 1 && name != "power") throw Error(ErrorCode::InvalidType, "template needs a discrete generator");
  std::vector<double> a(static_cast<std::size_t>(std::max(q, 0)), 0.0);
  if (name == "shrink") a.front() = -1;
  else if (name == "expand") a.back() = 1;
  else if (name != "power") throw Error(ErrorCode::InvalidArgument, "unknown family template '" + name + "'");
  return power_family(n, p, a);
}

}  // namespace chabauty
