#include "surfbound/classify.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "surfbound/errors.hpp"

namespace surfbound {

const char* tri_name(Tri t) {
  switch (t) {
    case Tri::no: return "no";
    case Tri::yes: return "yes";
    case Tri::undecided: return "undecided";
  }
  return "?";
}

namespace {

// Distinct prime-order cyclic subgroups, sorted by element list.
std::vector<Subgroup> prime_order_subgroups(const FiniteGroup& g) {
  std::set<std::vector<int>> seen;
  for (int x = 0; x < g.order(); ++x) {
    if (x == g.identity()) continue;
    if (!is_prime(Integer(g.element_order(x)))) continue;
    seen.insert(subgroup_closure(g, {x}).elements);
  }
  std::vector<Subgroup> out;
  for (auto& e : seen) out.push_back(Subgroup{&g, e});
  return out;
}

}  // namespace

bool is_supersolvable(const FiniteGroup& g) {
  if (g.order() == 1) return true;
  if (is_nilpotent(g)) return true;  // nilpotent finite groups are supersolvable
  // G is supersolvable iff some prime-order normal subgroup N has a
  // supersolvable quotient: chief factors of a supersolvable group have
  // prime order, and conversely the G/N series pulls back to G.
  for (const Subgroup& n : prime_order_subgroups(g)) {
    if (!is_normal(g, n)) continue;
    if (is_supersolvable(quotient(g, n))) return true;
  }
  return false;
}

std::optional<ZappaChain> zappa_chain(const FiniteGroup& g, int subgroup_cap) {
  if (!is_supersolvable(g)) return std::nullopt;
  std::vector<long> primes;
  for (const auto& [p, e] : factor(Integer(g.order())))
    for (unsigned i = 0; i < e; ++i) primes.push_back(p.get_si());
  std::sort(primes.begin(), primes.end());

  auto subs = all_subgroups(g, subgroup_cap);
  std::vector<Subgroup> normal;
  for (const auto& h : subs)
    if (is_normal(g, h)) normal.push_back(h);

  ZappaChain out;
  out.chain.push_back(full_subgroup(g));
  out.indices = primes;

  // Depth-first search: at level i pick the lexicographically least normal
  // subgroup of index primes[i] inside the current term.
  auto contains_all = [](const Subgroup& big, const Subgroup& small) {
    return std::includes(big.elements.begin(), big.elements.end(), small.elements.begin(),
                         small.elements.end());
  };
  std::vector<Subgroup> chain_tail;
  auto search = [&](auto&& self, const Subgroup& current, std::size_t level) -> bool {
    if (level == primes.size()) return current.order() == 1;
    long want = current.order() / primes[level];
    for (const Subgroup& n : normal) {
      if (n.order() != want || !contains_all(current, n)) continue;
      chain_tail.push_back(n);
      if (self(self, n, level + 1)) return true;
      chain_tail.pop_back();
    }
    return false;
  };
  if (!search(search, out.chain[0], 0)) return std::nullopt;  // cannot happen when supersolvable
  for (auto& s : chain_tail) out.chain.push_back(std::move(s));
  return out;
}

bool strictly_q_closed(const FiniteGroup& g, long q) {
  Subgroup sylow = sylow_subgroup(g, q);
  if (!is_normal(g, sylow)) return false;
  FiniteGroup quot = quotient(g, sylow);
  return quot.is_abelian() && (q - 1) % quot.exponent() == 0;
}

ClassProfile classify(const FiniteGroup& g, int subgroup_cap) {
  ClassProfile p;
  const long n = g.order();
  p.order = n;
  p.exponent = g.exponent();
  p.smallest_prime = n > 1 ? smallest_prime_divisor(Integer(n)) : 0;

  auto series = derived_series(g);
  for (const auto& s : series) p.derived_series_orders.push_back(s.order());
  p.solvable = series.back().order() == 1;
  p.metabelian = p.solvable && series.size() <= 3;  // G'' = 1

  p.abelian = g.is_abelian();
  p.cyclic = false;
  for (int x = 0; x < n && !p.cyclic; ++x) p.cyclic = g.element_order(x) == n;
  p.nilpotent = is_nilpotent(g);
  p.supersolvable = is_supersolvable(g);
  if (p.supersolvable) p.zappa = zappa_chain(g, subgroup_cap);

  auto facs = factor(Integer(n));
  p.square_free_order = true;
  for (const auto& [q, e] : facs)
    if (e > 1) p.square_free_order = false;
  p.odd_order = n % 2 == 1;
  if (facs.size() == 2 && facs[0].second >= 1 && facs[1].second >= 1)
    p.pq_signature = {facs[0].first.get_si(), facs[1].first.get_si()};

  // Z-group: every Sylow subgroup cyclic.
  p.z_group = true;
  for (const auto& [q, e] : facs) {
    Subgroup s = sylow_subgroup(g, q.get_si());
    bool cyclic = false;
    for (int x : s.elements)
      if (g.element_order(x) == s.order()) {
        cyclic = true;
        break;
      }
    if (!cyclic) {
      p.z_group = false;
      break;
    }
  }

  // Metacyclic: cyclic normal subgroup with cyclic quotient; the witness is
  // the lexicographically least one.  Coset orders are computed directly
  // instead of building quotient tables.
  {
    std::set<std::vector<int>> cyclic_subs;
    for (int x = 0; x < n; ++x) cyclic_subs.insert(subgroup_closure(g, {x}).elements);
    for (const auto& elems : cyclic_subs) {
      Subgroup cand{&g, elems};
      if (!is_normal(g, cand)) continue;
      long index = n / cand.order();
      bool quotient_cyclic = false;
      for (int x = 0; x < n && !quotient_cyclic; ++x) {
        long k = 1;
        int acc = x;
        while (!cand.contains(acc)) {
          acc = g.mul(acc, x);
          ++k;
        }
        quotient_cyclic = k == index;
      }
      if (quotient_cyclic) {
        p.metacyclic = true;
        p.metacyclic_normal = cand;
        break;
      }
    }
  }

  // Elements of odd order: closed under product or not.
  {
    std::vector<int> odd;
    for (int x = 0; x < n; ++x)
      if (g.element_order(x) % 2 == 1) odd.push_back(x);
    bool closed = true;
    std::vector<bool> in(n, false);
    for (int x : odd) in[x] = true;
    for (std::size_t i = 0; i < odd.size() && closed; ++i)
      for (std::size_t j = 0; j < odd.size() && closed; ++j)
        closed = in[g.mul(odd[i], odd[j])];
    p.odd_elements_form_subgroup = closed;
    if (closed) p.odd_subgroup = make_subgroup(g, odd);
  }

  // Nilpotent commutator subgroup.
  {
    Subgroup comm = series.size() > 1 ? series[1] : trivial_subgroup(g);
    p.nilpotent_commutator =
        comm.order() == 1 ||
        is_nilpotent(subgroup_as_group(g, comm, g.provenance() + " commutator"));
  }

  // CLT: subgroup orders versus divisors.
  try {
    auto subs = all_subgroups(g, subgroup_cap);
    std::set<long> orders;
    for (const auto& s : subs) orders.insert(s.order());
    for (long d = 1; d <= n; ++d) {
      if (n % d != 0) continue;
      if (!orders.count(d)) p.missing_divisors.push_back(d);
    }
    p.clt = p.missing_divisors.empty() ? Tri::yes : Tri::no;
  } catch (const error& e) {
    if (e.code() != errc::size_cap) throw;
    p.clt = Tri::undecided;
  }

  return p;
}

}  // namespace surfbound
