#pragma once

#include "chabauty/subgroup.hpp"

namespace chabauty {

/// {y : x.y in Z for all x in G}. Type (p, q) goes to (n - p - q, q).
ClosedSubgroup dual(const ClosedSubgroup& g);

}  // namespace chabauty
