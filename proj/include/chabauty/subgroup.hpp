#pragma once

// Canonical representation of closed subgroups of R^n.
//
// A closed subgroup is stored as the sum of its continuous part (a subspace,
// kept as an orthonormal basis) and a lattice orthogonal to it (kept as an
// LLL-reduced basis). Both bases are columns of n-row matrices.

#include "chabauty/enumeration.hpp"
#include "chabauty/error.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace chabauty {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Tolerance {
  double rank_tol = 1e-9;
  double recon_tol = 1e-6;
};

/// Type (p, q) of a subgroup isomorphic to R^p x Z^q.
struct GroupType {
  int p = 0;
  int q = 0;
  int rank() const { return p + q; }
  friend bool operator==(const GroupType&, const GroupType&) = default;
};

/// Default cap on the number of lattice points a single enumeration may return.
inline constexpr std::size_t kDefaultPointCap = 1'000'000;

class ClosedSubgroup {
 public:
  ClosedSubgroup() = default;

  int ambient_dim() const { return n_; }
  const Mat& continuous_basis() const { return continuous_; }
  const Mat& discrete_basis() const { return discrete_; }
  GroupType type() const {
    return {static_cast<int>(continuous_.cols()), static_cast<int>(discrete_.cols())};
  }
  int rank() const { return type().rank(); }

  /// Orthogonal projection onto the complement of the continuous part.
  Vec project_off_continuous(const Vec& x) const;

  /// Triangular frame of the discrete part, computed once per object.
  const LatticeFrame& lattice() const { return frame_; }

 private:
  friend ClosedSubgroup make_subgroup(int, const Mat&, const Mat&, const Tolerance&);
  int n_ = 0;
  Mat continuous_;
  Mat discrete_;
  LatticeFrame frame_;
};

/// Builds the canonical form of the closed subgroup generated by the columns
/// of `continuous_gens` (as a subspace) and `discrete_gens` (as a group).
/// Throws NonClosedInput when the projected discrete generators are linearly
/// dependent (their normalized Gram determinant is below rank_tol), and
/// DimensionMismatch when a generator does not have n rows.
ClosedSubgroup make_subgroup(int n, const Mat& continuous_gens, const Mat& discrete_gens,
                             const Tolerance& tol = {});

/// Convenience overloads taking generators as lists of vectors.
ClosedSubgroup make_subgroup(int n, const std::vector<Vec>& continuous_gens,
                             const std::vector<Vec>& discrete_gens, const Tolerance& tol = {});

/// Z e_1 + ... + Z e_n-style aligned subgroup R^p x Z^q in R^n.
ClosedSubgroup aligned_subgroup(int n, GroupType type);

GroupType type_of(const ClosedSubgroup& g);
int rank(const ClosedSubgroup& g);

struct CanonicalDecomposition {
  Mat continuous_part;  // orthonormal basis of the maximal subspace
  Mat discrete_part;    // lattice basis orthogonal to it
};
CanonicalDecomposition canonical_decomposition(const ClosedSubgroup& g);

/// Discrete-part lattice points of norm at most `radius`, sorted by norm.
/// Throws EnumerationBudgetExceeded past `cap` points.
std::vector<Vec> points_in_ball(const ClosedSubgroup& g, double radius,
                                std::size_t cap = kDefaultPointCap);

double distance_to_subgroup(const Vec& x, const ClosedSubgroup& g);

/// Canonical form of m(G). Throws SingularMatrix when |det m| <= tol.
ClosedSubgroup apply_linear(const Mat& m, const ClosedSubgroup& g, double tol = 1e-12);

/// Homothety by t in [0, inf]; t = inf gives the continuous part and t = 0
/// gives the span.
ClosedSubgroup scale(const ClosedSubgroup& g, double t);

struct RandomParams {
  double min_norm = 0.5;
  double max_norm = 2.0;
};

/// Deterministic in `seed`: random orthonormal frame for the continuous part,
/// random reduced lattice basis with norms in [min_norm, max_norm].
ClosedSubgroup random_subgroup(int n, GroupType type, std::uint64_t seed,
                               const RandomParams& params = {});

/// Orthonormal basis of the orthogonal complement of the column span of `basis`.
Mat orthogonal_complement(const Mat& basis, int n);

/// Orthonormal basis (columns) of the span of the columns of `m`, keeping
/// the input order (modified Gram-Schmidt). Columns whose residual is below
/// rel_tol times their length are dropped.
Mat orthonormalize(const Mat& m, double rel_tol = 1e-9);

Mat columns(const std::vector<Vec>& vs, int n);

}  // namespace chabauty
