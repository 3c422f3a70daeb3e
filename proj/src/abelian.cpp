#include "surfbound/abelian.hpp"

#include <algorithm>
#include <map>

#include "surfbound/errors.hpp"

namespace surfbound {

FiniteAbelianGroup::FiniteAbelianGroup(unsigned free_rank, std::vector<Integer> invariant_factors)
    : free_rank_(free_rank), factors_(std::move(invariant_factors)) {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i] < 2) fail(errc::bad_input, "invariant factor < 2");
    if (i > 0 && factors_[i] % factors_[i - 1] != 0)
      fail(errc::bad_input, "invariant factors do not form a divisibility chain");
  }
}

FiniteAbelianGroup FiniteAbelianGroup::from_cyclic_orders(const std::vector<Integer>& orders,
                                                          unsigned free_rank) {
  // Split each order into prime powers, then rebuild the chain by taking,
  // for every prime, the largest remaining power into the last factor.
  std::map<Integer, std::vector<unsigned>> powers;  // prime -> exponents, desc
  for (const Integer& n : orders) {
    if (n < 1) fail(errc::bad_input, "cyclic order < 1");
    for (const auto& [p, e] : factor(n)) powers[p].push_back(e);
  }
  std::size_t slots = 0;
  for (auto& [p, es] : powers) {
    std::sort(es.begin(), es.end(), std::greater<unsigned>());
    slots = std::max(slots, es.size());
  }
  std::vector<Integer> chain(slots, 1);
  // chain[0] ends up the largest invariant factor; reverse at the end.
  for (auto& [p, es] : powers) {
    for (std::size_t i = 0; i < es.size(); ++i) chain[i] *= pow(p, es[i]);
  }
  std::reverse(chain.begin(), chain.end());
  return FiniteAbelianGroup(free_rank, std::move(chain));
}

FiniteAbelianGroup FiniteAbelianGroup::from_snf_diagonal(const std::vector<Integer>& diagonal,
                                                         std::size_t generators,
                                                         unsigned extra_free_rank) {
  std::vector<Integer> factors;
  std::size_t nonzero = 0;
  for (const Integer& d : diagonal) {
    if (d == 0) continue;
    ++nonzero;
    if (d != 1 && d != -1) factors.push_back(abs(d));
  }
  std::sort(factors.begin(), factors.end());
  unsigned free_rank = extra_free_rank + static_cast<unsigned>(generators - nonzero);
  return FiniteAbelianGroup(free_rank, std::move(factors));
}

Integer FiniteAbelianGroup::torsion_order() const {
  Integer n = 1;
  for (const Integer& d : factors_) n *= d;
  return n;
}

std::string FiniteAbelianGroup::to_string() const {
  if (is_trivial()) return "1";
  std::string out;
  if (free_rank_ > 0) {
    out = free_rank_ == 1 ? "Z" : "Z^" + std::to_string(free_rank_);
  }
  for (const Integer& d : factors_) {
    if (!out.empty()) out += "x";
    out += "C" + d.get_str();
  }
  return out;
}

FiniteAbelianGroup FiniteAbelianGroup::parse(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (c == ' ' || c == '_' || c == '(' || c == ')') continue;
    if (c == static_cast<char>(0xC3)) continue;  // strip UTF-8 multiplication sign bytes
    if (c == static_cast<char>(0x97)) { s += 'x'; continue; }
    s += c;
  }
  if (s == "1" || s == "0" || s.empty()) return FiniteAbelianGroup();

  unsigned free_rank = 0;
  std::vector<Integer> orders;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t next = s.find('x', pos);
    std::string part = s.substr(pos, next == std::string::npos ? next : next - pos);
    if (part.empty()) fail(errc::bad_input, "malformed abelian group '" + text + "'");
    if (part[0] == 'Z') {
      free_rank += part.size() > 1 && part[1] == '^'
                       ? static_cast<unsigned>(std::stoul(part.substr(2)))
                       : 1u;
    } else if (part[0] == 'C') {
      std::size_t caret = part.find('^');
      Integer base(part.substr(1, caret == std::string::npos ? caret : caret - 1));
      unsigned long reps = caret == std::string::npos ? 1 : std::stoul(part.substr(caret + 1));
      for (unsigned long i = 0; i < reps; ++i) orders.push_back(base);
    } else {
      fail(errc::bad_input, "malformed abelian group '" + text + "'");
    }
    pos = next == std::string::npos ? s.size() : next + 1;
  }
  return from_cyclic_orders(orders, free_rank);
}

}  // namespace surfbound
