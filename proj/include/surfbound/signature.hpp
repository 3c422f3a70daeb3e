#pragma once

#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "surfbound/abelian.hpp"
#include "surfbound/rational.hpp"

namespace surfbound {

// Signature (h; m_1,...,m_r) of a cocompact Fuchsian group: quotient orbit
// genus h plus the orders of the elliptic generators.  Periods are kept
// sorted ascending so equality is structural; only hyperbolic signatures
// (measure > 0) can be constructed.
class Signature {
 public:
  Signature(unsigned orbit_genus, std::vector<Integer> periods);

  unsigned orbit_genus() const { return orbit_genus_; }
  const std::vector<Integer>& periods() const { return periods_; }
  std::size_t period_count() const { return periods_.size(); }

  // 2h - 2 + sum(1 - 1/m_i); positive by construction.
  Rational measure() const;

  // "(0;2,3,8)", "(49;-)"
  std::string to_string() const;

  // Accepts "(h;m1,...,mr)" and "(h;-)"; periods in any order.
  static Signature parse(const std::string& text);

  bool operator==(const Signature& other) const = default;
  auto operator<=>(const Signature& other) const = default;

 private:
  unsigned orbit_genus_ = 0;
  std::vector<Integer> periods_;
};

// |G| = 2(g-1)/measure for a genus-g quotient; exact rational, caller checks
// integrality when reading it as a group order.
Rational order_from_genus(const Signature& sig, const Integer& genus);

// g = 1 + n*measure/2.  Throws non_integral_genus / genus_too_small.
Integer genus_from_order(const Signature& sig, const Integer& order);

struct SignatureFilter {
  unsigned orbit_genus_max = std::numeric_limits<unsigned>::max();
  bool all_periods_odd = false;
  Integer min_period = 2;
  // When set, periods are drawn from this whitelist only.  This always makes
  // the enumeration finite regardless of the measure threshold.
  std::optional<std::vector<Integer>> allowed_periods;
};

// Every signature with 0 < measure <= max_measure passing the filter,
// ascending by (measure, orbit genus, periods).  Throws infinite_family when
// the requested set is infinite (e.g. threshold >= 1/6 with no filter: the
// family (0;2,3,m) then has measure below the threshold for every m).
std::vector<Signature> enumerate_signatures(const Rational& max_measure,
                                            const SignatureFilter& filter = {});

// Largest abelian quotient: free rank 2h plus the cokernel of the relation
// matrix with rows m_i*e_i and (1,...,1).
FiniteAbelianGroup abelianization(const Signature& sig);

// Canonical images of the elliptic generators in abelianization(sig),
// as coordinate tuples over the invariant factors.
std::vector<std::vector<Integer>> abelianized_generator_images(const Signature& sig);

// Permutation on points 0..n-1, image[i] = where i goes.
using Permutation = std::vector<int>;

// Signature of the index-n subgroup determined by a transitive action on n
// cosets: every length-l cycle of the i-th generator image contributes a
// period m_i/l (omitted when 1); the new orbit genus is solved from
// measure(sub) = n * measure(sig).
Signature coset_action_signature(const Signature& sig,
                                 const std::vector<Permutation>& images, int n);

// Signature of the commutator subgroup, together with the abelian quotient
// it is cut out by (the regular action of the abelianization).
std::pair<Signature, FiniteAbelianGroup> derived_subgroup_signature(const Signature& sig);

enum class ChainStatus {
  depth_reached,        // more steps are possible
  perfect,              // abelianization became trivial
  infinite_rank,        // positive orbit genus: free abelian rank appeared
};

const char* chain_status_name(ChainStatus s);

struct DerivedChain {
  // step i: (signature of the (i+1)-st derived group, quotient it realizes)
  std::vector<std::pair<Signature, FiniteAbelianGroup>> steps;
  ChainStatus status = ChainStatus::depth_reached;
};

DerivedChain derived_chain(const Signature& sig, unsigned depth);

}  // namespace surfbound
