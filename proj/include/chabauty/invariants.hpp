#pragma once

#include "chabauty/subgroup.hpp"

#include <optional>
#include <vector>

namespace chabauty {

/// Generation radii of the discrete part together with a lattice basis
/// adapted to the filtration: for every k, the first k columns of `adapted`
/// span the same space as the k shortest independent lattice vectors.
struct Filtration {
  std::vector<double> radii;  // q finite values, non-decreasing
  Mat adapted;                // n x q basis of the discrete part
  Mat minimal;                // n x q realizing vectors, |minimal.col(k)| = radii[k]
};

Filtration generation_filtration(const ClosedSubgroup& g, std::size_t visit_cap = 50'000'000);

/// N_1..N_n: p zeros, the q generation radii, then infinities.
std::vector<double> norms(const ClosedSubgroup& g);

double systole(const ClosedSubgroup& g);

/// Covolume of a subgroup of R^2. std::nullopt stands for the indeterminate
/// value taken by lines.
std::optional<double> covolume(const ClosedSubgroup& g);

/// sqrt(det Gram) of the discrete basis, in any dimension (1 for {0}).
double discrete_covolume(const ClosedSubgroup& g);

/// Type at scale delta, or std::nullopt when some norm sits on delta or
/// 1/delta (relative tolerance `tol`).
std::optional<GroupType> delta_type(const std::vector<double>& norm_vector, double delta,
                                    double tol = 1e-9);
std::optional<GroupType> delta_type(const ClosedSubgroup& g, double delta, double tol = 1e-9);

}  // namespace chabauty
