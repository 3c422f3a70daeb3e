#pragma once

#include <optional>
#include <string>
#include <vector>

#include "surfbound/group.hpp"

namespace surfbound {

enum class Tri { no, yes, undecided };

const char* tri_name(Tri t);

// A chain G = chain[0] > chain[1] > ... > chain[s] = 1 in which every term is
// normal in G and consecutive indices are the primes of |G| sorted ascending.
struct ZappaChain {
  std::vector<Subgroup> chain;
  std::vector<long> indices;
};

struct ClassProfile {
  long order = 1;
  long exponent = 1;
  long smallest_prime = 0;  // 0 for the trivial group
  std::vector<long> derived_series_orders;

  bool abelian = false;
  bool cyclic = false;
  bool nilpotent = false;
  bool solvable = false;
  bool supersolvable = false;
  bool metabelian = false;
  bool metacyclic = false;
  bool z_group = false;
  Tri clt = Tri::undecided;
  bool square_free_order = false;
  bool odd_order = false;
  bool odd_elements_form_subgroup = false;
  bool nilpotent_commutator = false;

  std::optional<ZappaChain> zappa;                    // present iff supersolvable
  std::optional<Subgroup> metacyclic_normal;          // cyclic normal N with G/N cyclic
  std::vector<long> missing_divisors;                 // nonempty iff clt == no
  std::optional<Subgroup> odd_subgroup;               // present iff odd elements close
  std::optional<std::pair<long, long>> pq_signature;  // |G| = p^m q^n, p < q
};

// Computes every flag with certificates.  Subgroup-based flags (CLT) report
// Tri::undecided when |G| exceeds subgroup_cap instead of guessing.
ClassProfile classify(const FiniteGroup& g, int subgroup_cap = kDefaultOrderCap);

bool is_supersolvable(const FiniteGroup& g);

// Chain of Zappa's theorem; nullopt when G is not supersolvable.
// Deterministic: lexicographically least eligible subgroup at every level.
std::optional<ZappaChain> zappa_chain(const FiniteGroup& g, int subgroup_cap = kDefaultOrderCap);

// True iff the Sylow q-subgroup is normal and G/Q is abelian of exponent
// dividing q-1 (a sufficient condition for supersolvability).
bool strictly_q_closed(const FiniteGroup& g, long q);

}  // namespace surfbound
