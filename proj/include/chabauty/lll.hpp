#pragma once

#include "chabauty/enumeration.hpp"

#include <cstdint>

namespace chabauty {

using IntMat = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

struct Reduced {
  Mat basis;        // reduced columns, basis = input * transform
  IntMat transform; // unimodular
};

/// LLL reduction (Lovasz parameter `lovasz`) of linearly independent columns.
/// Size reduction uses integer operations only; a basis that is already
/// reduced is returned unchanged.
Reduced lll_reduce(const Mat& basis, double lovasz = 0.99);

/// Unimodular matrix whose first column is the primitive vector `u`.
IntMat complete_to_unimodular(const IntVec& u);

std::int64_t determinant(const IntMat& m);

}  // namespace chabauty
