#pragma once

// A computable metric for the Chabauty topology on closed subgroups of R^n.
//
// gap(G, H, R) is the least eps with G n B(R) in H + B(eps) and
// H n B(R) in G + B(eps); the distance aggregates min(1, gap) over dyadic radii.
// Continuous directions are searched by branch and bound on Lipschitz bounds
// instead of a fixed grid, so the reported gap at radius R is a certified
// lower bound within min(grid, precision * max(1, R)) of the true value.

#include "chabauty/subgroup.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace chabauty {

struct MetricParams {
  std::vector<double> radii{1, 2, 4, 8, 16, 32, 64};
  std::vector<double> weights{1, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625};
  double grid = 0.05;         // documented error bound of a gap
  double precision = 1e-5;    // branch-and-bound stopping gap per unit radius, <= grid
  std::size_t cap = kDefaultPointCap;
  std::size_t box_cap = 4'000'000;

  void validate() const;
};

/// Symmetric gap at radius R. Values at or above `stop_at` are only
/// guaranteed to be >= stop_at (the search ends as soon as stop_at is reached).
double hausdorff_gap(const ClosedSubgroup& a, const ClosedSubgroup& b, double radius,
                     const MetricParams& params = {}, double stop_at = kInf);

double chabauty_distance(const ClosedSubgroup& a, const ClosedSubgroup& b,
                         const MetricParams& params = {});

/// True iff a n B(R) lies in b + B(eps) and b n B(R) lies in a + B(eps).
bool neighborhood_test(const ClosedSubgroup& a, const ClosedSubgroup& b, double radius, double eps,
                       const MetricParams& params = {});

/// Covering radius of the discrete part inside its own span.
double covering_radius(const ClosedSubgroup& g, double rel_precision = 1e-9);

using Family = std::function<ClosedSubgroup(double)>;

struct LimitReport {
  GroupType type;
  std::vector<int> shrunk;  // 1-based norm indices that fell below delta
  std::vector<int> grown;   // 1-based norm indices that rose above 1/delta
  std::vector<double> t;
  std::vector<std::vector<double>> norm_trace;
  std::vector<std::optional<GroupType>> type_trace;
};

/// Delta-type of the family at the final samples; throws Unstable unless the
/// last three samples agree.
LimitReport classify_limit(const Family& family, const std::vector<double>& t, double delta);

/// R^p + sum_i Z t^{a_i} e_{p+i} in R^n, the "power" template. The names
/// "shrink" and "expand" are the cases a = (-1, 0, ...) and a = (0, ..., 0, 1)
/// of a type (p, q) subgroup.
Family power_family(int n, int p, const std::vector<double>& exponents);
Family named_family(const std::string& name, int n, int p, int q);

}  // namespace chabauty
