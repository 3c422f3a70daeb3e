#include "surfbound/actions.hpp"

#include <algorithm>

#include "surfbound/errors.hpp"

namespace surfbound {

std::vector<std::string> GeneratingVector::labels() const {
  std::vector<std::string> out;
  out.reserve(elements.size());
  for (int e : elements) out.push_back(group->label(e));
  return out;
}

bool verify_generating_vector(const GeneratingVector& v) {
  const FiniteGroup& g = *v.group;
  if (v.signature.orbit_genus() != 0) return false;
  if (v.elements.size() != v.signature.period_count()) return false;
  int prod = g.identity();
  for (std::size_t i = 0; i < v.elements.size(); ++i) {
    if (Integer(g.element_order(v.elements[i])) != v.signature.periods()[i]) return false;
    prod = g.mul(prod, v.elements[i]);
  }
  if (prod != g.identity()) return false;
  return subgroup_closure(g, v.elements).order() == g.order();
}

std::optional<GeneratingVector> find_generating_vector(const FiniteGroup& g, const Signature& sig,
                                                       const SearchCaps& caps) {
  if (sig.orbit_genus() != 0)
    fail(errc::unsupported_signature, "generating vectors need orbit genus 0");
  if (sig.period_count() > caps.max_periods)
    fail(errc::unsupported_signature,
         "signature has " + std::to_string(sig.period_count()) + " periods, cap is " +
             std::to_string(caps.max_periods));
  if (g.order() > caps.group_order_cap)
    fail(errc::size_cap, "group order exceeds search cap");

  const std::size_t r = sig.period_count();
  long exp = g.exponent();
  std::vector<std::vector<int>> candidates(r);
  for (std::size_t i = 0; i < r; ++i) {
    const Integer& m = sig.periods()[i];
    if (exp % m != 0) return std::nullopt;  // quick reject: period must divide exp(G)
    for (int x = 0; x < g.order(); ++x)
      if (Integer(g.element_order(x)) == m) candidates[i].push_back(x);
    if (candidates[i].empty()) return std::nullopt;
  }

  // First slot: conjugacy class representatives only (solutions are closed
  // under conjugating the whole vector, and that moves x_1 to its class
  // minimum, so restricting slot 1 to class minima keeps the lex-least
  // solution reachable).
  {
    auto reps = conjugacy_class_representatives(g);
    std::vector<int> filtered;
    for (int x : candidates[0])
      if (std::binary_search(reps.begin(), reps.end(), x)) filtered.push_back(x);
    candidates[0] = std::move(filtered);
  }

  std::vector<int> chosen(r);
  auto search = [&](auto&& self, std::size_t slot, int prefix_product) -> bool {
    if (slot + 1 == r) {
      // Last element is forced by the product-one relation.
      int last = g.inverse(prefix_product);
      if (Integer(g.element_order(last)) != sig.periods()[slot]) return false;
      chosen[slot] = last;
      return subgroup_closure(g, chosen).order() == g.order();
    }
    for (int x : candidates[slot]) {
      chosen[slot] = x;
      if (self(self, slot + 1, g.mul(prefix_product, x))) return true;
    }
    return false;
  };
  if (r == 0) return std::nullopt;  // genus-0 signature always has periods
  if (!search(search, 0, g.identity())) return std::nullopt;
  return GeneratingVector{&g, sig, chosen};
}

Integer genus_of_action(const FiniteGroup& g, const Signature& sig) {
  return genus_from_order(sig, Integer(g.order()));
}

std::optional<MinGenusResult> min_genus_bounded(const FiniteGroup& g, const Rational& measure_cap,
                                                unsigned orbit_genus_max,
                                                const SearchCaps& caps) {
  if (orbit_genus_max != 0)
    fail(errc::unsupported_signature, "minimum-genus search covers orbit genus 0 only");
  // Whitelisting realisable periods keeps the enumeration finite for any cap.
  std::vector<Integer> allowed;
  {
    std::vector<long> orders = g.element_orders();
    orders.erase(std::unique(orders.begin(), orders.end()), orders.end());
    for (long o : orders)
      if (o >= 2) allowed.emplace_back(o);
  }
  if (allowed.empty()) return std::nullopt;  // trivial group

  SignatureFilter filter;
  filter.orbit_genus_max = 0;
  filter.allowed_periods = allowed;
  auto signatures = enumerate_signatures(measure_cap, filter);

  // Ascending measure means ascending genus for fixed |G|; first hit wins.
  for (const Signature& sig : signatures) {
    if (sig.period_count() > caps.max_periods) continue;
    Rational genus = 1 + Rational(g.order()) * sig.measure() / 2;
    if (!is_integral(genus) || genus < 2) continue;
    auto vec = find_generating_vector(g, sig, caps);
    if (vec) return MinGenusResult{to_integer(genus), sig, std::move(*vec)};
  }
  return std::nullopt;
}

Integer macbeath_genus(const Integer& g, const Integer& n) {
  if (g < 2) fail(errc::genus_too_small, "base genus must be >= 2");
  if (n < 1) fail(errc::bad_input, "cover exponent must be >= 1");
  Integer cover;
  unsigned long twog = 2 * g.get_ui();
  mpz_pow_ui(cover.get_mpz_t(), n.get_mpz_t(), twog);
  return cover * (g - 1) + 1;
}

}  // namespace surfbound
