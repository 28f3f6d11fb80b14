#include "chabauty/strata.hpp"

#include <string>

namespace chabauty {

namespace {

void check_type(int n, GroupType t) {
  if (n < 1 || t.p < 0 || t.q < 0 || t.rank() > n)
    throw Error(ErrorCode::InvalidType, "type (" + std::to_string(t.p) + "," + std::to_string(t.q) +
                                            ") does not fit in R^" + std::to_string(n));
}

}  // namespace

std::vector<GroupType> all_types(int n) {
  std::vector<GroupType> out;
  for (int p = 0; p <= n; ++p)
    for (int q = 0; p + q <= n; ++q) out.push_back({p, q});
  return out;
}

int stratum_dimension(int n, GroupType t) {
  check_type(n, t);
  return t.rank() * (n - t.p);
}

bool type_leq(GroupType lower, GroupType upper) {
  return upper.p <= lower.p && upper.rank() >= lower.rank();
}

std::vector<std::pair<GroupType, GroupType>> hasse_diagram(int n) {
  if (n < 1) throw Error(ErrorCode::InvalidType, "ambient dimension must be positive");
  const auto types = all_types(n);
  std::vector<std::pair<GroupType, GroupType>> edges;
  for (const auto& hi : types)
    for (const auto& lo : types) {
      if (hi == lo || !type_leq(lo, hi)) continue;
      bool covering = true;
      for (const auto& mid : types)
        if (mid != hi && mid != lo && type_leq(lo, mid) && type_leq(mid, hi)) covering = false;
      if (covering) edges.emplace_back(hi, lo);
    }
  return edges;
}

int fiber_dimension(int n, GroupType lower, GroupType upper) {
  check_type(n, lower);
  check_type(n, upper);
  if (lower == upper || !type_leq(lower, upper))
    throw Error(ErrorCode::InvalidPair, "second type must lie strictly above the first");
  const int p = lower.p, q = lower.q, r = upper.p, s = upper.q;
  return q * (p - r) + (r + s - p - q) * (p + q - r);
}

}  // namespace chabauty
