#include "surfbound/group.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "surfbound/errors.hpp"

namespace surfbound {

FiniteGroup::FiniteGroup(std::vector<std::vector<int>> table,
                         std::vector<std::string> labels,
                         std::string provenance,
                         int order_cap)
    : table_(std::move(table)), labels_(std::move(labels)), provenance_(std::move(provenance)) {
  const int n = order();
  if (n == 0) fail(errc::bad_input, "empty multiplication table");
  if (n > order_cap)
    fail(errc::size_cap, "order " + std::to_string(n) + " exceeds verification cap " +
                             std::to_string(order_cap));
  for (const auto& row : table_) {
    if (static_cast<int>(row.size()) != n) fail(errc::bad_input, "table is not square");
  }

  // Latin square.
  for (int i = 0; i < n; ++i) {
    std::vector<bool> row_seen(n, false), col_seen(n, false);
    for (int j = 0; j < n; ++j) {
      int r = table_[i][j], c = table_[j][i];
      if (r < 0 || r >= n || c < 0 || c >= n) fail(errc::bad_input, "table entry out of range");
      if (row_seen[r] || col_seen[c]) fail(errc::bad_input, "table is not a Latin square");
      row_seen[r] = col_seen[c] = true;
    }
  }

  for (int e = 0; e < n; ++e) {
    bool ok = true;
    for (int x = 0; x < n && ok; ++x) ok = table_[e][x] == x && table_[x][e] == x;
    if (ok) {
      identity_ = e;
      break;
    }
  }
  if (identity_ < 0) fail(errc::bad_input, "table has no identity element");

  inverse_.assign(n, -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (table_[a][b] == identity_ && table_[b][a] == identity_) {
        inverse_[a] = b;
        break;
      }
    }
    if (inverse_[a] < 0) fail(errc::bad_input, "element without two-sided inverse");
  }

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
          fail(errc::bad_input, "table is not associative");

  if (labels_.empty()) {
    labels_.reserve(n);
    for (int i = 0; i < n; ++i) labels_.push_back(std::to_string(i));
  }
  if (static_cast<int>(labels_.size()) != n) fail(errc::bad_input, "label count mismatch");
}

int FiniteGroup::power(int a, long e) const {
  if (e < 0) {
    a = inverse(a);
    e = -e;
  }
  int acc = identity_;
  while (e > 0) {
    if (e & 1) acc = mul(acc, a);
    a = mul(a, a);
    e >>= 1;
  }
  return acc;
}

long FiniteGroup::element_order(int a) const {
  long ord = 1;
  int x = a;
  while (x != identity_) {
    x = mul(x, a);
    ++ord;
  }
  return ord;
}

std::vector<long> FiniteGroup::element_orders() const {
  std::vector<long> orders;
  orders.reserve(order());
  for (int a = 0; a < order(); ++a) orders.push_back(element_order(a));
  std::sort(orders.begin(), orders.end());
  return orders;
}

long FiniteGroup::exponent() const {
  Integer e = 1;
  for (int a = 0; a < order(); ++a) e = lcm(e, Integer(element_order(a)));
  return e.get_si();
}

bool FiniteGroup::is_abelian() const {
  for (int a = 0; a < order(); ++a)
    for (int b = a + 1; b < order(); ++b)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

bool Subgroup::contains(int x) const {
  return std::binary_search(elements.begin(), elements.end(), x);
}

Subgroup make_subgroup(const FiniteGroup& g, std::vector<int> elements) {
  std::sort(elements.begin(), elements.end());
  elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
  Subgroup h{&g, std::move(elements)};
  if (!h.contains(g.identity())) fail(errc::bad_input, "subgroup must contain the identity");
  for (int a : h.elements) {
    if (!h.contains(g.inverse(a))) fail(errc::bad_input, "subgroup not closed under inverse");
    for (int b : h.elements)
      if (!h.contains(g.mul(a, b))) fail(errc::bad_input, "subgroup not closed under product");
  }
  return h;
}

Subgroup subgroup_closure(const FiniteGroup& g, const std::vector<int>& seed) {
  std::vector<bool> in(g.order(), false);
  std::vector<int> elems{g.identity()};
  in[g.identity()] = true;
  std::vector<int> work;
  for (int s : seed) {
    if (s < 0 || s >= g.order()) fail(errc::bad_input, "seed element out of range");
    if (!in[s]) {
      in[s] = true;
      elems.push_back(s);
      work.push_back(s);
    }
  }
  while (!work.empty()) {
    int x = work.back();
    work.pop_back();
    // elems grows during the loop; index-based iteration covers new entries
    // against x when they later come off the worklist.
    for (std::size_t i = 0; i < elems.size(); ++i) {
      int producs[2] = {g.mul(x, elems[i]), g.mul(elems[i], x)};
      for (int p : producs) {
        if (!in[p]) {
          in[p] = true;
          elems.push_back(p);
          work.push_back(p);
        }
      }
    }
  }
  std::sort(elems.begin(), elems.end());
  return Subgroup{&g, std::move(elems)};
}

Subgroup trivial_subgroup(const FiniteGroup& g) { return Subgroup{&g, {g.identity()}}; }

Subgroup full_subgroup(const FiniteGroup& g) {
  std::vector<int> all(g.order());
  for (int i = 0; i < g.order(); ++i) all[i] = i;
  return Subgroup{&g, std::move(all)};
}

std::vector<Subgroup> all_subgroups(const FiniteGroup& g, int cap) {
  if (g.order() > cap)
    fail(errc::size_cap, "subgroup enumeration capped at order " + std::to_string(cap));
  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> queue;
  for (int a = 0; a < g.order(); ++a) {
    auto h = subgroup_closure(g, {a});
    if (seen.insert(h.elements).second) queue.push_back(h.elements);
  }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    std::vector<int> current = queue[head];
    std::vector<bool> in(g.order(), false);
    for (int x : current) in[x] = true;
    for (int a = 0; a < g.order(); ++a) {
      if (in[a]) continue;
      std::vector<int> seed = current;
      seed.push_back(a);
      auto h = subgroup_closure(g, seed);
      if (seen.insert(h.elements).second) queue.push_back(h.elements);
    }
  }
  std::vector<Subgroup> out;
  out.reserve(seen.size());
  for (auto& elems : seen) out.push_back(Subgroup{&g, elems});
  std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return a.elements < b.elements;
  });
  return out;
}

bool is_normal(const FiniteGroup& g, const Subgroup& h) {
  for (int x = 0; x < g.order(); ++x)
    for (int a : h.elements)
      if (!h.contains(g.conjugate(x, a))) return false;
  return true;
}

Subgroup center(const FiniteGroup& g) {
  std::vector<int> z;
  for (int a = 0; a < g.order(); ++a) {
    bool central = true;
    for (int b = 0; b < g.order() && central; ++b) central = g.mul(a, b) == g.mul(b, a);
    if (central) z.push_back(a);
  }
  return Subgroup{&g, std::move(z)};
}

Subgroup normalizer(const FiniteGroup& g, const Subgroup& h) {
  std::vector<int> n;
  for (int x = 0; x < g.order(); ++x) {
    bool normalizes = true;
    for (int a : h.elements) {
      if (!h.contains(g.conjugate(x, a))) {
        normalizes = false;
        break;
      }
    }
    if (normalizes) n.push_back(x);
  }
  return Subgroup{&g, std::move(n)};
}

Subgroup commutator_subgroup(const FiniteGroup& g, const Subgroup& h) {
  std::vector<int> seed;
  for (int a : h.elements)
    for (int b : h.elements) seed.push_back(g.commutator(a, b));
  return subgroup_closure(g, seed);
}

Subgroup commutator_subgroup(const FiniteGroup& g) {
  return commutator_subgroup(g, full_subgroup(g));
}

std::vector<Subgroup> derived_series(const FiniteGroup& g) {
  std::vector<Subgroup> series{full_subgroup(g)};
  for (;;) {
    Subgroup next = commutator_subgroup(g, series.back());
    if (next.elements == series.back().elements) break;
    series.push_back(std::move(next));
    if (series.back().order() == 1) break;
  }
  return series;
}

std::vector<Subgroup> lower_central_series(const FiniteGroup& g) {
  std::vector<Subgroup> series{full_subgroup(g)};
  for (;;) {
    std::vector<int> seed;
    for (int a : series.back().elements)
      for (int b = 0; b < g.order(); ++b) seed.push_back(g.commutator(a, b));
    Subgroup next = subgroup_closure(g, seed);
    if (next.elements == series.back().elements) break;
    series.push_back(std::move(next));
    if (series.back().order() == 1) break;
  }
  return series;
}

bool is_solvable(const FiniteGroup& g) { return derived_series(g).back().order() == 1; }

bool is_nilpotent(const FiniteGroup& g) { return lower_central_series(g).back().order() == 1; }

FiniteGroup quotient(const FiniteGroup& g, const Subgroup& n) {
  if (!is_normal(g, n)) fail(errc::not_normal, "quotient by a non-normal subgroup");
  const int size = g.order();
  std::vector<int> coset_of(size, -1);
  std::vector<int> reps;
  for (int x = 0; x < size; ++x) {
    if (coset_of[x] >= 0) continue;
    int idx = static_cast<int>(reps.size());
    reps.push_back(x);
    for (int a : n.elements) coset_of[g.mul(x, a)] = idx;
  }
  const int m = static_cast<int>(reps.size());
  std::vector<std::vector<int>> table(m, std::vector<int>(m));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) table[i][j] = coset_of[g.mul(reps[i], reps[j])];
  std::vector<std::string> labels;
  labels.reserve(m);
  for (int r : reps) labels.push_back(g.label(r) + "N");
  return FiniteGroup(std::move(table), std::move(labels),
                     g.provenance() + " / N" + std::to_string(n.order()), g.order());
}

Subgroup sylow_subgroup(const FiniteGroup& g, long p) {
  if (p < 2 || !is_prime(Integer(p))) fail(errc::bad_input, "p must be prime");
  Integer n(g.order());
  if (n % p != 0)
    fail(errc::prime_does_not_divide,
         std::to_string(p) + " does not divide |G| = " + n.get_str());
  long target = 1;
  while (n % p == 0) {
    n /= p;
    target *= p;
  }
  Subgroup pgroup = trivial_subgroup(g);
  while (pgroup.order() < target) {
    Subgroup norm = normalizer(g, pgroup);
    // p divides [N(P):P] while P is not yet full, so a coset of order p
    // exists; its smallest lift x has x^p in P.
    bool grown = false;
    for (int x : norm.elements) {
      if (pgroup.contains(x)) continue;
      if (!pgroup.contains(g.power(x, p))) continue;
      std::vector<int> seed = pgroup.elements;
      seed.push_back(x);
      pgroup = subgroup_closure(g, seed);
      grown = true;
      break;
    }
    if (!grown) fail(errc::bad_input, "sylow growth stalled (table is not a group?)");
  }
  return pgroup;
}

std::vector<int> conjugacy_class_representatives(const FiniteGroup& g) {
  std::vector<bool> seen(g.order(), false);
  std::vector<int> reps;
  for (int a = 0; a < g.order(); ++a) {
    if (seen[a]) continue;
    reps.push_back(a);
    for (int x = 0; x < g.order(); ++x) seen[g.conjugate(x, a)] = true;
  }
  return reps;
}

FiniteAbelianGroup abelian_invariants(const FiniteGroup& g, const Subgroup& h) {
  for (int a : h.elements)
    for (int b : h.elements)
      if (g.mul(a, b) != g.mul(b, a)) fail(errc::bad_input, "abelian_invariants of a non-abelian group");
  std::vector<Integer> cyclic_orders;
  for (const auto& [p, e] : factor(Integer(h.order()))) {
    long pl = p.get_si();
    // #elements killed by p^j is p^(sum min(lambda_i, j)); differences of the
    // exponents give the conjugate partition of lambda.
    std::vector<long> killed_log;  // index j
    killed_log.push_back(0);
    for (unsigned j = 1; j <= e; ++j) {
      long pj = 1;
      for (unsigned t = 0; t < j; ++t) pj *= pl;
      long count = 0;
      for (int a : h.elements)
        if (g.power(a, pj) == g.identity()) ++count;
      long lg = 0;
      while (count > 1) {
        count /= pl;
        ++lg;
      }
      killed_log.push_back(lg);
    }
    std::vector<long> conj;  // conj[j-1] = #{i : lambda_i >= j}
    for (unsigned j = 1; j < killed_log.size(); ++j) conj.push_back(killed_log[j] - killed_log[j - 1]);
    // Transpose the partition.
    long parts = conj.empty() ? 0 : conj[0];
    for (long i = 0; i < parts; ++i) {
      unsigned lambda = 0;
      for (long c : conj) {
        if (c > i) ++lambda;
      }
      cyclic_orders.push_back(pow(p, lambda));
    }
  }
  return FiniteAbelianGroup::from_cyclic_orders(cyclic_orders);
}

FiniteAbelianGroup abelian_invariants(const FiniteGroup& g) {
  return abelian_invariants(g, full_subgroup(g));
}

bool probably_isomorphic(const FiniteGroup& a, const FiniteGroup& b) {
  if (a.order() != b.order()) return false;
  if (a.is_abelian() != b.is_abelian()) return false;
  if (a.is_abelian() && !(abelian_invariants(a) == abelian_invariants(b))) return false;
  return a.element_orders() == b.element_orders();
}

FiniteGroup subgroup_as_group(const FiniteGroup& g, const Subgroup& h, const std::string& provenance) {
  std::map<int, int> index;
  for (std::size_t i = 0; i < h.elements.size(); ++i) index[h.elements[i]] = static_cast<int>(i);
  const int m = h.order();
  std::vector<std::vector<int>> table(m, std::vector<int>(m));
  std::vector<std::string> labels;
  for (int i = 0; i < m; ++i) {
    labels.push_back(g.label(h.elements[i]));
    for (int j = 0; j < m; ++j) {
      auto it = index.find(g.mul(h.elements[i], h.elements[j]));
      if (it == index.end()) fail(errc::bad_input, "element set is not a subgroup");
      table[i][j] = it->second;
    }
  }
  return FiniteGroup(std::move(table), std::move(labels), provenance, g.order());
}

}  // namespace surfbound
