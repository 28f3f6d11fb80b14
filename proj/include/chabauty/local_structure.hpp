#pragma once

// Decomposition of a closed subgroup at scale delta relative to an aligned
// base point R^p x Z^q in R^n.
//
// Coordinates: the base flag is V1 = span(e_1..e_p), V2 = span(e_{p+1}..e_{p+q}),
// V3 = the rest, and e_{p+1}..e_{p+q} is the fixed basis of the base lattice.

#include "chabauty/subgroup.hpp"

#include <string>

namespace chabauty {

struct LinearDecomposition {
  Mat v1, v2, v3;  // orthonormal bases (columns), mutually orthogonal
  GroupType type() const {
    return {static_cast<int>(v1.cols()), static_cast<int>(v2.cols())};
  }
};

struct LocalDecomposition {
  int n = 0;
  GroupType base;
  double delta = 0;
  ClosedSubgroup gamma1;  // subgroup of R^p of rank p
  Mat gamma2;             // q x q, columns are the distinguished basis v_i
  Mat gamma3;             // (n-p-q) x m lattice basis
  Mat phi2;               // p x q, shortest representatives of Phi2(e_i) mod gamma1
  Mat phi3_v1;            // p x m, Phi3' of each gamma3 column, mod gamma1
  Mat phi3_v2;            // q x m, Phi3'' of each gamma3 column, mod gamma2
};

struct Decomposition {
  LinearDecomposition linear;
  Mat tau;
  LocalDecomposition local;
};

struct DecompositionOptions {
  double max_angle = 0.5;  // trivialisation refuses flags farther than this (radians)
};

LinearDecomposition base_flag(int n, GroupType type);

/// V1 = span of Gamma(delta) (with the continuous part), V2 = span of the
/// projection of Gamma(1/delta) off V1, V3 the complement.
LinearDecomposition linear_decomposition(const ClosedSubgroup& g, double delta);

/// Orthogonal tau with tau(V_i) = V_i^0: the polar factor of sum_i P_{V_i^0} P_{V_i}.
/// Throws FlagsTooFar when some principal angle reaches max_angle.
Mat trivialisation(const LinearDecomposition& flag, const LinearDecomposition& base,
                   double max_angle = 0.5);

/// Largest ||P_{V_i} - P_{V_i^0}||_2 over the three blocks.
double flag_distance(const LinearDecomposition& flag, const LinearDecomposition& base);

/// Throws NotInNeighborhood; the message starts with the failing condition:
/// decomposable, delta_type, flag_close, distinguished_basis or norm_sum.
Decomposition local_decomposition(const ClosedSubgroup& g, GroupType base, double delta,
                                  const DecompositionOptions& opts = {});

/// Inverse of local_decomposition. Throws InconsistentData on mismatched sizes.
ClosedSubgroup reconstruct(const LinearDecomposition& lin, const LocalDecomposition& loc,
                           const DecompositionOptions& opts = {});

struct Membership {
  bool inside = false;
  std::string failed;  // empty when inside
};
Membership in_U_delta(const ClosedSubgroup& g, GroupType base, double delta,
                      const DecompositionOptions& opts = {});

/// N_p(gamma1) + 1 / N_1(gamma3), with N_p := 0 for p = 0 and 1/inf = 0.
double norm_sum(const LocalDecomposition& loc);

/// Throws NotInNeighborhood outside U_delta.
bool on_link(const ClosedSubgroup& g, GroupType base, double delta, double tol = 1e-9,
             const DecompositionOptions& opts = {});

/// (t gamma1, gamma3 / t, t phi2, (t phi3', phi3'')) for t in [0, 2).
LocalDecomposition cone_map(double t, const LocalDecomposition& loc);

struct BundlePoint {
  ClosedSubgroup gamma1;  // scaled to p-th norm 1 (continuous part if that norm is 0)
  ClosedSubgroup gamma3;  // scaled to first norm 1 ({0} stays {0})
  double lambda = 0;      // (2 / delta) N_p(gamma1)
};

/// Throws InvalidStratum for base types (0,0) and (n,0).
BundlePoint bundle_projection(const LocalDecomposition& loc);

/// Linear map g with g(base) = R^p x Z^q, p and q the type of base.
Mat aligning_map(const ClosedSubgroup& base);

/// Shortest representative of x modulo g (lexicographically smallest on ties).
Vec reduce_mod(const Vec& x, const ClosedSubgroup& g);

}  // namespace chabauty
