#pragma once

#include <string>
#include <vector>

#include "surfbound/abelian.hpp"
#include "surfbound/rational.hpp"

namespace surfbound {

inline constexpr int kDefaultOrderCap = 256;

// A concrete finite group: a multiplication table over element indices
// 0..n-1 with display labels.  Construction verifies the table is a group
// (Latin square, identity, two-sided inverses, associativity); tables larger
// than the cap are refused rather than left unverified.
class FiniteGroup {
 public:
  FiniteGroup(std::vector<std::vector<int>> table,
              std::vector<std::string> labels = {},
              std::string provenance = "",
              int order_cap = kDefaultOrderCap);

  int order() const { return static_cast<int>(table_.size()); }
  int mul(int a, int b) const { return table_[a][b]; }
  int identity() const { return identity_; }
  int inverse(int a) const { return inverse_[a]; }

  int power(int a, long e) const;
  long element_order(int a) const;
  // Sorted multiset of the orders of all elements.
  std::vector<long> element_orders() const;
  long exponent() const;
  bool is_abelian() const;

  // g * a * g^-1
  int conjugate(int g, int a) const { return mul(mul(g, a), inverse(g)); }
  // a^-1 * b^-1 * a * b
  int commutator(int a, int b) const { return mul(mul(inverse(a), inverse(b)), mul(a, b)); }

  const std::string& label(int a) const { return labels_[a]; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& provenance() const { return provenance_; }

 private:
  std::vector<std::vector<int>> table_;
  std::vector<std::string> labels_;
  std::vector<int> inverse_;
  std::string provenance_;
  int identity_ = -1;
};

// Sorted element-index list of a subgroup of *parent.  The pointer is
// non-owning; keep the group alive while its subgroups are in use.
struct Subgroup {
  const FiniteGroup* parent = nullptr;
  std::vector<int> elements;

  int order() const { return static_cast<int>(elements.size()); }
  bool contains(int x) const;
  bool operator==(const Subgroup& other) const { return elements == other.elements; }
};

// Validates closure / identity / inverses of the given element set.
Subgroup make_subgroup(const FiniteGroup& g, std::vector<int> elements);

// Smallest subgroup containing the seed (breadth-first closure).
Subgroup subgroup_closure(const FiniteGroup& g, const std::vector<int>& seed);

Subgroup trivial_subgroup(const FiniteGroup& g);
Subgroup full_subgroup(const FiniteGroup& g);

// Complete, deduplicated subgroup list, ascending by (order, elements).
// Seeds with all cyclic subgroups and closes under one-generator extension.
// Refuses groups larger than `cap` (size_cap).
std::vector<Subgroup> all_subgroups(const FiniteGroup& g, int cap = kDefaultOrderCap);

bool is_normal(const FiniteGroup& g, const Subgroup& h);

Subgroup center(const FiniteGroup& g);
Subgroup normalizer(const FiniteGroup& g, const Subgroup& h);

Subgroup commutator_subgroup(const FiniteGroup& g);
Subgroup commutator_subgroup(const FiniteGroup& g, const Subgroup& h);

// G > G' > G'' > ... down to the first repetition.
std::vector<Subgroup> derived_series(const FiniteGroup& g);
// G > [G,G] > [[G,G],G] > ... down to the first repetition.
std::vector<Subgroup> lower_central_series(const FiniteGroup& g);

bool is_solvable(const FiniteGroup& g);
bool is_nilpotent(const FiniteGroup& g);

// Coset multiplication table; throws not_normal if n is not normal.
FiniteGroup quotient(const FiniteGroup& g, const Subgroup& n);

// One Sylow p-subgroup, grown inside its normalizer to full p-power order
// (deterministic: smallest eligible element index at each step).
Subgroup sylow_subgroup(const FiniteGroup& g, long p);

// Smallest element index of each conjugacy class, ascending.
std::vector<int> conjugacy_class_representatives(const FiniteGroup& g);

// Invariant factors of an abelian group (throws bad_input otherwise).
FiniteAbelianGroup abelian_invariants(const FiniteGroup& g);
FiniteAbelianGroup abelian_invariants(const FiniteGroup& g, const Subgroup& h);

// Order + abelian invariants + element-order multiset heuristic.  A `true`
// is only "probably": non-isomorphic groups can agree on all three.
bool probably_isomorphic(const FiniteGroup& a, const FiniteGroup& b);

// Builds the subgroup as a standalone group (index-relabelled table).
FiniteGroup subgroup_as_group(const FiniteGroup& g, const Subgroup& h, const std::string& provenance);

}  // namespace surfbound
