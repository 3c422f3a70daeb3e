#include "surfbound/signature.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "surfbound/errors.hpp"
#include "surfbound/snf.hpp"

namespace surfbound {

Signature::Signature(unsigned orbit_genus, std::vector<Integer> periods)
    : orbit_genus_(orbit_genus), periods_(std::move(periods)) {
  for (const Integer& m : periods_) {
    if (m < 2) fail(errc::invalid_signature, "period " + m.get_str() + " < 2");
  }
  std::sort(periods_.begin(), periods_.end());
  if (measure() <= 0)
    fail(errc::invalid_signature, "signature " + to_string() + " is not hyperbolic");
}

Rational Signature::measure() const {
  Rational mu(2 * static_cast<long>(orbit_genus_) - 2);
  for (const Integer& m : periods_) mu += Rational(m - 1, m);
  return mu;
}

std::string Signature::to_string() const {
  std::string out = "(" + std::to_string(orbit_genus_) + ";";
  if (periods_.empty()) {
    out += "-";
  } else {
    for (std::size_t i = 0; i < periods_.size(); ++i) {
      if (i) out += ",";
      out += periods_[i].get_str();
    }
  }
  return out + ")";
}

Signature Signature::parse(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!isspace(static_cast<unsigned char>(c))) s += c;
  if (s.size() < 4 || s.front() != '(' || s.back() != ')')
    fail(errc::bad_input, "signature literal must look like (h;m1,...,mr)");
  s = s.substr(1, s.size() - 2);
  auto semi = s.find(';');
  if (semi == std::string::npos) fail(errc::bad_input, "missing ';' in signature literal");
  unsigned h = 0;
  try {
    h = static_cast<unsigned>(std::stoul(s.substr(0, semi)));
  } catch (const std::exception&) {
    fail(errc::bad_input, "bad orbit genus in signature literal");
  }
  std::vector<Integer> periods;
  std::string rest = s.substr(semi + 1);
  if (rest != "-" && !rest.empty()) {
    std::size_t pos = 0;
    while (pos < rest.size()) {
      auto comma = rest.find(',', pos);
      std::string tok = rest.substr(pos, comma == std::string::npos ? comma : comma - pos);
      try {
        periods.emplace_back(tok);
      } catch (const std::invalid_argument&) {
        fail(errc::bad_input, "bad period '" + tok + "' in signature literal");
      }
      pos = comma == std::string::npos ? rest.size() : comma + 1;
    }
  }
  return Signature(h, std::move(periods));
}

Rational order_from_genus(const Signature& sig, const Integer& genus) {
  if (genus < 2) fail(errc::genus_too_small, "genus must be >= 2");
  return Rational(2 * (genus - 1)) / sig.measure();
}

Integer genus_from_order(const Signature& sig, const Integer& order) {
  if (order < 2) fail(errc::bad_input, "group order must be >= 2");
  Rational g = 1 + Rational(order) * sig.measure() / 2;
  if (!is_integral(g))
    fail(errc::non_integral_genus,
         "order " + order.get_str() + " on " + sig.to_string() + " gives genus " + to_string(g));
  if (g < 2)
    fail(errc::genus_too_small,
         "order " + order.get_str() + " on " + sig.to_string() + " gives genus " + to_string(g));
  return to_integer(g);
}

namespace {

struct Enumerator {
  Rational sum_max;       // upper bound for sum(1 - 1/m_i), inclusive
  Rational sum_min_excl;  // strict lower bound (hyperbolicity)
  const SignatureFilter& filter;
  unsigned orbit_genus;
  std::vector<Integer> chosen;
  std::vector<Signature>* out;

  // Next allowed period >= m, or nullopt when the whitelist is exhausted.
  std::optional<Integer> next_period(Integer m) const {
    if (filter.allowed_periods) {
      std::optional<Integer> best;
      for (const Integer& a : *filter.allowed_periods) {
        if (a >= m && (!best || a < *best)) best = a;
      }
      return best;
    }
    if (filter.all_periods_odd && m % 2 == 0) m += 1;
    return m;
  }

  void recurse(std::size_t remaining, const Integer& lower, const Rational& sum) {
    if (remaining == 0) {
      if (sum > sum_min_excl && sum <= sum_max)
        out->emplace_back(orbit_genus, chosen);
      return;
    }
    if (sum + static_cast<long>(remaining) <= sum_min_excl) return;  // cannot get hyperbolic
    if (!filter.allowed_periods && sum + static_cast<long>(remaining) <= sum_max)
      fail(errc::infinite_family,
           "infinitely many signatures below measure " + to_string(sum_max - 2) +
               "; tighten the threshold or whitelist periods");
    Integer m = lower;
    for (;;) {
      auto next = next_period(m);
      if (!next) return;
      m = *next;
      Rational term(m - 1, m);
      if (sum + term * static_cast<long>(remaining) > sum_max) return;
      chosen.push_back(m);
      recurse(remaining - 1, m, sum + term);
      chosen.pop_back();
      m += 1;
    }
  }
};

}  // namespace

std::vector<Signature> enumerate_signatures(const Rational& max_measure,
                                            const SignatureFilter& filter) {
  if (max_measure <= 0) fail(errc::bad_input, "max_measure must be positive");
  Integer min_period = filter.min_period < 2 ? Integer(2) : filter.min_period;
  if (filter.all_periods_odd && min_period < 3) min_period = 3;

  std::vector<Signature> result;
  for (unsigned h = 0; Rational(2 * static_cast<long>(h) - 2) <= max_measure; ++h) {
    if (h > filter.orbit_genus_max) break;
    Rational base(2 * static_cast<long>(h) - 2);
    if (h >= 2) result.emplace_back(h, std::vector<Integer>{});  // measure 2h-2 > 0
    Enumerator en{max_measure - base, -base, filter, h, {}, &result};
    // Each period contributes at least 1 - 1/min_period to the measure.
    Rational min_term(min_period - 1, min_period);
    for (std::size_t r = 1; Rational(static_cast<long>(r)) * min_term <= en.sum_max; ++r) {
      en.recurse(r, min_period, Rational(0));
    }
  }

  std::vector<std::pair<Rational, Signature>> keyed;
  keyed.reserve(result.size());
  for (auto& s : result) keyed.emplace_back(s.measure(), std::move(s));
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second < b.second;
  });
  result.clear();
  for (auto& [mu, s] : keyed) result.push_back(std::move(s));
  return result;
}

namespace {

// Rows m_i*e_i plus the abelianised long relation (1,...,1).
IntMatrix torsion_relation_matrix(const Signature& sig) {
  const std::size_t r = sig.period_count();
  IntMatrix m(r + 1, std::vector<Integer>(r, 0));
  for (std::size_t i = 0; i < r; ++i) m[i][i] = sig.periods()[i];
  for (std::size_t j = 0; j < r; ++j) m[r][j] = 1;
  return m;
}

IntMatrix transpose(const IntMatrix& m) {
  if (m.empty()) return {};
  IntMatrix t(m[0].size(), std::vector<Integer>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) t[j][i] = m[i][j];
  return t;
}

Integer mod_positive(const Integer& a, const Integer& d) {
  Integer r = a % d;
  if (r < 0) r += d;
  return r;
}

}  // namespace

FiniteAbelianGroup abelianization(const Signature& sig) {
  const std::size_t r = sig.period_count();
  if (r == 0) return FiniteAbelianGroup(2 * sig.orbit_genus(), {});
  auto diag = smith_invariant_factors(transpose(torsion_relation_matrix(sig)));
  return FiniteAbelianGroup::from_snf_diagonal(diag, r, 2 * sig.orbit_genus());
}

std::vector<std::vector<Integer>> abelianized_generator_images(const Signature& sig) {
  const std::size_t r = sig.period_count();
  if (r == 0) return {};
  // A = coker(N) for N = transpose(relations); with L*N*R diagonal, the class
  // of generator e_i has coordinates (column i of L) mod the diagonal.
  auto dec = smith_decompose(transpose(torsion_relation_matrix(sig)));
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < dec.diagonal.size(); ++j)
    if (dec.diagonal[j] >= 2) keep.push_back(j);
  std::vector<std::vector<Integer>> images(r);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j : keep)
      images[i].push_back(mod_positive(dec.left[j][i], dec.diagonal[j]));
  }
  return images;
}

Signature coset_action_signature(const Signature& sig,
                                 const std::vector<Permutation>& images, int n) {
  if (sig.orbit_genus() != 0)
    fail(errc::unsupported_signature, "coset action needs orbit genus 0");
  if (n < 1) fail(errc::bad_input, "point count must be >= 1");
  const std::size_t r = sig.period_count();
  if (images.size() != r)
    fail(errc::bad_input, "need one permutation per period generator");
  for (const Permutation& p : images) {
    if (static_cast<int>(p.size()) != n) fail(errc::bad_input, "permutation degree mismatch");
    std::vector<bool> seen(n, false);
    for (int v : p) {
      if (v < 0 || v >= n || seen[v]) fail(errc::bad_input, "not a permutation");
      seen[v] = true;
    }
  }

  // Transitivity.
  std::vector<bool> reached(n, false);
  std::vector<int> stack{0};
  reached[0] = true;
  int count = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    for (const Permutation& p : images) {
      if (!reached[p[v]]) {
        reached[p[v]] = true;
        ++count;
        stack.push_back(p[v]);
      }
    }
  }
  if (count != n) fail(errc::not_transitive, "generated action is not transitive");

  // Product of the images, applied left to right, must be the identity.
  for (int start = 0; start < n; ++start) {
    int v = start;
    for (const Permutation& p : images) v = p[v];
    if (v != start) fail(errc::product_not_identity, "images do not multiply to the identity");
  }

  std::vector<Integer> sub_periods;
  for (std::size_t i = 0; i < r; ++i) {
    const Integer& m = sig.periods()[i];
    std::vector<bool> visited(n, false);
    Integer order = 1;
    for (int start = 0; start < n; ++start) {
      if (visited[start]) continue;
      long len = 0;
      int v = start;
      do {
        visited[v] = true;
        ++len;
        v = images[i][v];
      } while (v != start);
      if (m % len != 0)
        fail(errc::order_mismatch, "cycle length " + std::to_string(len) +
                                       " does not divide period " + m.get_str());
      order = lcm(order, Integer(len));
      Integer q = m / len;
      if (q > 1) sub_periods.push_back(q);
    }
    if (m % order != 0)
      fail(errc::order_mismatch, "image order does not divide period " + m.get_str());
  }

  Rational target = Rational(n) * sig.measure();
  Rational sum(0);
  for (const Integer& m : sub_periods) sum += Rational(m - 1, m);
  Rational twice_h = target + 2 - sum;
  if (!is_integral(twice_h) || twice_h.get_num() % 2 != 0 || twice_h < 0)
    fail(errc::inconsistent_genus,
         "subgroup orbit genus is not a non-negative integer (got " + to_string(twice_h / 2) + ")");
  Signature sub(static_cast<unsigned>(to_integer(twice_h / 2).get_ui()), std::move(sub_periods));
  if (sub.measure() != target) fail(errc::inconsistent_genus, "measure additivity violated");
  return sub;
}

std::pair<Signature, FiniteAbelianGroup> derived_subgroup_signature(const Signature& sig) {
  if (sig.orbit_genus() != 0)
    fail(errc::infinite_abelianization,
         "orbit genus > 0: abelianization has free rank, commutator subgroup has infinite index");
  FiniteAbelianGroup quotient = abelianization(sig);
  if (quotient.is_trivial())
    fail(errc::trivial_abelianization, sig.to_string() + " is perfect");

  const auto& factors = quotient.invariant_factors();
  long order = static_cast<long>(quotient.torsion_order().get_ui());

  // Element index <-> coordinate tuple, mixed radix over the factors.
  auto to_index = [&](const std::vector<Integer>& coords) {
    long idx = 0;
    for (std::size_t j = 0; j < factors.size(); ++j)
      idx = idx * factors[j].get_si() + coords[j].get_si();
    return idx;
  };
  std::vector<std::vector<Integer>> elements(order);
  {
    std::vector<Integer> cur(factors.size(), 0);
    for (long e = 0; e < order; ++e) {
      elements[to_index(cur)] = cur;
      for (std::size_t j = factors.size(); j-- > 0;) {
        cur[j] += 1;
        if (cur[j] < factors[j]) break;
        cur[j] = 0;
      }
    }
  }

  auto images = abelianized_generator_images(sig);
  std::vector<Permutation> perms;
  for (const auto& img : images) {
    Permutation p(order);
    for (long e = 0; e < order; ++e) {
      std::vector<Integer> moved = elements[e];
      for (std::size_t j = 0; j < factors.size(); ++j)
        moved[j] = (moved[j] + img[j]) % factors[j];
      p[e] = static_cast<int>(to_index(moved));
    }
    perms.push_back(std::move(p));
  }

  Signature sub = coset_action_signature(sig, perms, static_cast<int>(order));
  return {std::move(sub), std::move(quotient)};
}

const char* chain_status_name(ChainStatus s) {
  switch (s) {
    case ChainStatus::depth_reached: return "DepthReached";
    case ChainStatus::perfect: return "Perfect";
    case ChainStatus::infinite_rank: return "InfiniteAbelianization";
  }
  return "?";
}

DerivedChain derived_chain(const Signature& sig, unsigned depth) {
  if (depth < 1) fail(errc::bad_input, "depth must be >= 1");
  DerivedChain chain;
  Signature current = sig;
  for (unsigned step = 0; step < depth; ++step) {
    if (current.orbit_genus() > 0) {
      chain.status = ChainStatus::infinite_rank;
      return chain;
    }
    if (abelianization(current).is_trivial()) {
      chain.status = ChainStatus::perfect;
      return chain;
    }
    auto [sub, quotient] = derived_subgroup_signature(current);
    chain.steps.emplace_back(sub, quotient);
    current = std::move(sub);
  }
  if (current.orbit_genus() > 0)
    chain.status = ChainStatus::infinite_rank;
  else if (abelianization(current).is_trivial())
    chain.status = ChainStatus::perfect;
  else
    chain.status = ChainStatus::depth_reached;
  return chain;
}

}  // namespace surfbound
