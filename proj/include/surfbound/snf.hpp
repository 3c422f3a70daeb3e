#pragma once

#include <vector>

#include "surfbound/rational.hpp"

namespace surfbound {

using IntMatrix = std::vector<std::vector<Integer>>;

// Diagonal of the Smith normal form of M: nonneg d_1 | d_2 | ... | d_k
// (k = min(rows, cols)), trailing zeros for rank deficiency.
std::vector<Integer> smith_invariant_factors(IntMatrix m);

// Full decomposition L * M * R = D with L, R unimodular.  Only L is needed
// by callers (it maps standard basis vectors into SNF coordinates), so R is
// not tracked.
struct SmithDecomposition {
  std::vector<Integer> diagonal;  // length min(rows, cols)
  IntMatrix left;                 // rows x rows unimodular
};

SmithDecomposition smith_decompose(IntMatrix m);

}  // namespace surfbound
