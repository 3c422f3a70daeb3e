#include "surfbound/snf.hpp"

#include <cstddef>

namespace surfbound {

namespace {

IntMatrix identity(std::size_t n) {
  IntMatrix id(n, std::vector<Integer>(n, 0));
  for (std::size_t i = 0; i < n; ++i) id[i][i] = 1;
  return id;
}

// Smallest nonzero |entry| in the submatrix at (s,s); false if all zero.
bool find_pivot(const IntMatrix& m, std::size_t s, std::size_t& pi, std::size_t& pj) {
  bool found = false;
  Integer best = 0;
  for (std::size_t i = s; i < m.size(); ++i) {
    for (std::size_t j = s; j < m[i].size(); ++j) {
      if (m[i][j] == 0) continue;
      Integer a = abs(m[i][j]);
      if (!found || a < best) {
        found = true;
        best = a;
        pi = i;
        pj = j;
      }
    }
  }
  return found;
}

}  // namespace

SmithDecomposition smith_decompose(IntMatrix m) {
  const std::size_t rows = m.size();
  const std::size_t cols = rows == 0 ? 0 : m[0].size();
  SmithDecomposition out;
  out.left = identity(rows);
  if (rows == 0 || cols == 0) return out;

  const std::size_t steps = rows < cols ? rows : cols;
  for (std::size_t s = 0; s < steps; ++s) {
    std::size_t pi = s, pj = s;
    if (!find_pivot(m, s, pi, pj)) break;  // remaining block is zero
    for (;;) {
      std::swap(m[s], m[pi]);
      std::swap(out.left[s], out.left[pi]);
      if (pj != s) {
        for (std::size_t i = 0; i < rows; ++i) std::swap(m[i][s], m[i][pj]);
      }

      bool clean = true;
      for (std::size_t i = s + 1; i < rows; ++i) {
        if (m[i][s] == 0) continue;
        Integer q = m[i][s] / m[s][s];
        if (q != 0) {
          for (std::size_t j = 0; j < cols; ++j) m[i][j] -= q * m[s][j];
          for (std::size_t j = 0; j < rows; ++j) out.left[i][j] -= q * out.left[s][j];
        }
        if (m[i][s] != 0) clean = false;
      }
      for (std::size_t j = s + 1; j < cols; ++j) {
        if (m[s][j] == 0) continue;
        Integer q = m[s][j] / m[s][s];
        if (q != 0) {
          for (std::size_t i = 0; i < rows; ++i) m[i][j] -= q * m[i][s];
        }
        if (m[s][j] != 0) clean = false;
      }
      if (clean) {
        // Pivot must divide the rest of the block for the diagonal to be a
        // divisibility chain; fold an offending row in and keep reducing.
        std::size_t bi = 0, bj = 0;
        bool divides = true;
        for (std::size_t i = s + 1; i < rows && divides; ++i) {
          for (std::size_t j = s + 1; j < cols && divides; ++j) {
            if (m[i][j] % m[s][s] != 0) {
              divides = false;
              bi = i;
              bj = j;
            }
          }
        }
        if (divides) break;
        for (std::size_t j = 0; j < cols; ++j) m[s][j] += m[bi][j];
        for (std::size_t j = 0; j < rows; ++j) out.left[s][j] += out.left[bi][j];
        (void)bj;
      }
      if (!find_pivot(m, s, pi, pj)) break;
    }
    if (m[s][s] < 0) {
      for (std::size_t j = 0; j < cols; ++j) m[s][j] = -m[s][j];
      for (std::size_t j = 0; j < rows; ++j) out.left[s][j] = -out.left[s][j];
    }
  }

  out.diagonal.resize(steps);
  for (std::size_t s = 0; s < steps; ++s) out.diagonal[s] = m[s][s];
  return out;
}

std::vector<Integer> smith_invariant_factors(IntMatrix m) {
  return smith_decompose(std::move(m)).diagonal;
}

}  // namespace surfbound
