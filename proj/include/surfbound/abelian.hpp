#pragma once

#include <string>
#include <vector>

#include "surfbound/rational.hpp"

namespace surfbound {

// A finitely generated abelian group in invariant-factor form:
// Z^free_rank  x  C_{d_1} x ... x C_{d_k}  with  d_1 | d_2 | ... | d_k,
// every d_i >= 2.  The trivial group is (0, {}).
class FiniteAbelianGroup {
 public:
  FiniteAbelianGroup() = default;

  // Validates the divisibility chain and d_i >= 2.
  FiniteAbelianGroup(unsigned free_rank, std::vector<Integer> invariant_factors);

  // From any list of cyclic orders (not necessarily a chain): C_{n_1} x ...
  // is rewritten into invariant factors.  Orders equal to 1 are dropped.
  static FiniteAbelianGroup from_cyclic_orders(const std::vector<Integer>& orders,
                                               unsigned free_rank = 0);

  // From an SNF diagonal of a relation matrix on `generators` generators:
  // entries 1 are dropped, zeros (and missing diagonal positions) become
  // free rank.
  static FiniteAbelianGroup from_snf_diagonal(const std::vector<Integer>& diagonal,
                                              std::size_t generators,
                                              unsigned extra_free_rank = 0);

  unsigned free_rank() const { return free_rank_; }
  const std::vector<Integer>& invariant_factors() const { return factors_; }

  bool is_trivial() const { return free_rank_ == 0 && factors_.empty(); }
  bool is_finite() const { return free_rank_ == 0; }
  Integer torsion_order() const;

  // "1", "C6", "C2xC2", "Z^2 x C3xC3"
  std::string to_string() const;

  // Accepts the to_string() forms plus arbitrary products like "C2xC6".
  static FiniteAbelianGroup parse(const std::string& text);

  bool operator==(const FiniteAbelianGroup& other) const = default;

 private:
  unsigned free_rank_ = 0;
  std::vector<Integer> factors_;
};

}  // namespace surfbound
