#pragma once

// Strata of the space of closed subgroups of R^n, indexed by type (p, q).
// (r, s) lies above (p, q) in the frontier order iff r <= p and r + s >= p + q.

#include "chabauty/subgroup.hpp"

#include <utility>
#include <vector>

namespace chabauty {

/// All types with p + q <= n, ordered by (p, q).
std::vector<GroupType> all_types(int n);

/// (p + q)(n - p).
int stratum_dimension(int n, GroupType t);

/// True iff `lower` <= `upper` in the frontier order.
bool type_leq(GroupType lower, GroupType upper);

/// Covering relations (upper, lower) of the frontier order on types in R^n.
std::vector<std::pair<GroupType, GroupType>> hasse_diagram(int n);

/// Dimension of the fiber of the link bundle of stratum (p, q) over stratum
/// (r, s): q(p - r) + (r + s - p - q)(p + q - r). Throws InvalidPair unless
/// (r, s) is strictly above (p, q).
int fiber_dimension(int n, GroupType lower, GroupType upper);

}  // namespace chabauty
