#pragma once

#include <optional>
#include <string>
#include <vector>

#include "surfbound/group.hpp"
#include "surfbound/signature.hpp"

namespace surfbound {

// Images (x_1,...,x_r) of the elliptic generators of a genus-0 signature
// under a smooth epimorphism onto the group: ord(x_i) = m_i exactly, the
// product is the identity, and the x_i generate the whole group.
struct GeneratingVector {
  const FiniteGroup* group = nullptr;
  Signature signature;
  std::vector<int> elements;

  std::vector<std::string> labels() const;
};

// Re-checks the three defining conditions.
bool verify_generating_vector(const GeneratingVector& v);

struct SearchCaps {
  std::size_t max_periods = 6;  // signatures in this library need at most 7
  int group_order_cap = kDefaultOrderCap;
};

// Exhaustive deterministic search: the lexicographically least generating
// vector (element-index order), or nullopt when none exists.  The first slot
// only ranges over conjugacy-class minimal representatives; by conjugation
// this loses no solutions and keeps the lexicographic minimum.
std::optional<GeneratingVector> find_generating_vector(const FiniteGroup& g, const Signature& sig,
                                                       const SearchCaps& caps = {});

// g = 1 + |G| * measure(sig) / 2 (throws like genus_from_order).
Integer genus_of_action(const FiniteGroup& g, const Signature& sig);

struct MinGenusResult {
  Integer genus;
  Signature signature;
  GeneratingVector vector;
};

// Least genus >= 2 over all genus-0 signatures with measure <= measure_cap
// and periods realisable as element orders of G.  This is a minimum within
// the explored space only; nothing is claimed beyond the cap.
std::optional<MinGenusResult> min_genus_bounded(const FiniteGroup& g, const Rational& measure_cap,
                                                unsigned orbit_genus_max = 0,
                                                const SearchCaps& caps = {});

// Genus of the exponent-n totally unramified abelian cover of a genus-g
// surface: n^(2g) * (g-1) + 1.
Integer macbeath_genus(const Integer& g, const Integer& n);

}  // namespace surfbound
