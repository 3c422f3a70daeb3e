#pragma once

#include <optional>
#include <string>
#include <memory>
#include <vector>

#include "surfbound/rational.hpp"
#include "surfbound/signature.hpp"

namespace surfbound {

enum class GroupClass {
  general,
  solvable,
  supersolvable,
  nilpotent,
  metabelian,
  metacyclic,
  z_group,
  square_free,
  abelian,
  cyclic,
  clt,
  nilpotent_commutator,
  odd_elements_subgroup,
  odd_commutator,   // |G'| odd
  order_2_mod_4,    // |G| = 2 mod 4
  pq_group,
  exponent,         // the one class whose bound limits exp(G), not |G|
};

const char* group_class_name(GroupClass c);
GroupClass parse_group_class(const std::string& name);
std::vector<GroupClass> all_group_classes();

// Query context: which side conditions are known about the group.
struct ClassContext {
  // No prime divisor of |G| below this; 2 = unconstrained, 3 = odd order.
  long min_prime = 2;
  // |G| = p^m q^n with p < q; either prime may be left unknown.
  std::optional<long> pq_p, pq_q;
  bool not_divisible_by_8 = false;
  // G is a p-group for this prime.
  std::optional<long> p_group_prime;

  std::string to_string() const;
};

enum class Attain { yes, no, necessary_conditions_hold, unknown };
const char* attain_name(Attain a);

struct BoundResult {
  Rational value;
  bool bounds_exponent = false;          // true only for GroupClass::exponent
  std::vector<std::string> rule_ids;     // all rules achieving the minimum
  std::vector<std::string> anchors;      // their anchor strings
  bool via_exception = false;            // value is a known exceptional value
  // Rules that would normally apply but are excluded at this genus with an
  // unknown exceptional value (the reported bound is still valid).
  std::vector<std::string> excluded_rules;
};

struct AttainResult {
  Attain verdict = Attain::unknown;
  std::string condition;                 // the evaluated predicate, spelled out
  std::vector<std::string> rule_ids;
};

struct WitnessResult {
  std::string group_spec;
  Signature signature;
  Integer order;
  bool verified = false;  // constructed and vector-checked within caps
  std::string rule_id;
};

struct TableRowCheck {
  std::string expected;  // fixture rendering
  std::string computed;
  bool match = false;
};

struct TableReport {
  std::vector<TableRowCheck> table2, table3;
  std::vector<std::string> perfect_exclusions;  // computed perfect signatures
  bool perfect_exclusions_match = false;
  bool all_match = false;
  std::string to_string() const;
};

// Least b in [1,t) with gcd(b,t) = 1 and t | 1+b+b^2, via roots of x^2+x+1
// modulo each prime power combined by CRT.  Exists iff every prime divisor
// of t is 1 mod 3, or t is 3 times such a number.
std::optional<Integer> solve_b(const Integer& t);

class BoundsRegistry {
 public:
  // Parses the shipped rule table; throws bad_input on malformed records.
  static BoundsRegistry load(const std::string& registry_path);

  // Exact value of the best applicable rule at genus g; several rules may
  // tie, all are reported.  Throws no_rule when nothing in the table covers
  // the query.
  BoundResult bound(GroupClass cls, const ClassContext& ctx, const Integer& g) const;

  // Evaluates the attainability predicate of the rules that both achieve the
  // bound and speak about exactly the queried class.
  AttainResult attainable(GroupClass cls, const ClassContext& ctx, const Integer& g) const;

  // Constructive witness reaching the bound, when a recipe exists.  Requires
  // attainable(...) == yes (throws no_recipe otherwise); returns nullopt when
  // the bound is attainable but no desk-scale recipe is known.
  std::optional<WitnessResult> witness(GroupClass cls, const ClassContext& ctx,
                                       const Integer& g) const;

  // Regenerates both signature tables from the signature engine and diffs
  // them against the golden fixtures.
  TableReport verify_tables(const std::string& table2_path, const std::string& table3_path) const;

  std::size_t rule_count() const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

}  // namespace surfbound
